#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace honeysheets {

/// Seeded generator shared by every randomized operation.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// implements the bounded draws locally, since the standard distributions are
/// free to differ between library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0)
            throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform in [lo, hi] (inclusive).
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        if (hi < lo)
            throw std::invalid_argument("Rng::between: empty range");
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0)
            return static_cast<std::int64_t>(engine_());
        return lo + static_cast<std::int64_t>(below(span));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    template <typename T, std::size_t Extent>
    const T& pick(std::span<const T, Extent> items) {
        return items[below(items.size())];
    }

    template <typename Container>
    void shuffle(Container& c) {
        for (std::size_t i = c.size(); i > 1; --i) {
            std::swap(c[i - 1], c[below(i)]);
        }
    }

    /// Child generator whose stream is a pure function of this one's state.
    Rng fork() { return Rng(engine_()); }

private:
    std::mt19937_64 engine_;
};

} // namespace honeysheets
