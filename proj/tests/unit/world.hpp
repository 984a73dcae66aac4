#pragma once

// Five generated sheets sharing one registry.

#include "honeysheets/honeygen.hpp"
#include "honeysheets/honeylink.hpp"

#include <vector>

namespace testworld {

using namespace honeysheets;

struct World {
    honeylink::LinkRegistry registry{"hs.example.org", "https://www.google.com/"};
    std::vector<sheetstore::HoneySheet> sheets;

    std::map<std::string, sheetstore::HoneySheet> sheet_map() const {
        std::map<std::string, sheetstore::HoneySheet> m;
        for (const auto& s : sheets)
            m.emplace(s.sheet_id, s);
        return m;
    }
};

inline World make_world(int count = 5, std::size_t rows = 20) {
    World w;
    for (int i = 1; i <= count; ++i) {
        honeygen::SheetConfig cfg;
        cfg.rows = rows;
        cfg.rng_seed = static_cast<std::uint64_t>(i);
        Rng rng(cfg.rng_seed);
        const auto links = honeygen::mint_sheet_links(cfg, w.registry, rng);
        w.sheets.push_back(honeygen::build_honey_sheet(cfg, links, w.registry));
    }
    return w;
}

} // namespace testworld
