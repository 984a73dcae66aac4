#include "detail.hpp"
#include "honeysheets/analytics.hpp"
#include "honeysheets/error.hpp"

#include <arpa/inet.h>

#include <cctype>
#include <charconv>
#include <fstream>

namespace honeysheets::analytics {

std::optional<IpAddress> parse_ip(std::string_view text) {
    const std::string s(text);
    IpAddress ip;
    if (s.find(':') != std::string::npos) {
        ip.v6 = true;
        if (inet_pton(AF_INET6, s.c_str(), ip.bytes.data()) != 1)
            return std::nullopt;
    } else if (inet_pton(AF_INET, s.c_str(), ip.bytes.data()) != 1) {
        return std::nullopt;
    }
    return ip;
}

CidrEntry parse_cidr(std::string_view cidr, std::string country) {
    const auto slash = cidr.find('/');
    if (slash == std::string_view::npos)
        throw Error(Errc::ParseError, "CIDR without '/': " + std::string(cidr));
    auto ip = parse_ip(cidr.substr(0, slash));
    if (!ip)
        throw Error(Errc::ParseError, "bad network address in " + std::string(cidr));
    std::string_view len_text = cidr.substr(slash + 1);
    std::size_t length = 0;
    auto [p, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), length);
    if (ec != std::errc{} || p != len_text.data() + len_text.size() || length > ip->bit_width())
        throw Error(Errc::ParseError, "bad prefix length in " + std::string(cidr));
    for (std::size_t i = length; i < ip->bit_width(); ++i)
        ip->bytes[i / 8] &= static_cast<std::uint8_t>(~(1U << (7 - i % 8)));
    return CidrEntry{*ip, length, std::move(country)};
}

void GeoTable::add(std::string_view cidr, std::string_view country) {
    if (country.size() != 2 || !std::isupper(static_cast<unsigned char>(country[0])) ||
        !std::isupper(static_cast<unsigned char>(country[1])))
        throw Error(Errc::ParseError, "country must be ISO-3166 alpha-2, got '" + std::string(country) + "'");
    CidrEntry entry = parse_cidr(cidr, std::string(country));

    countries_.push_back(entry.country);
    const auto country_index = static_cast<std::int32_t>(countries_.size() - 1);

    std::vector<Node>& nodes = trie(entry.network.v6);
    std::size_t node = 0;
    for (std::size_t i = 0; i < entry.prefix_length; ++i) {
        const int b = entry.network.bit(i) ? 1 : 0;
        if (nodes[node].child[b] < 0) {
            nodes[node].child[b] = static_cast<std::int32_t>(nodes.size());
            nodes.push_back(Node{});
        }
        node = static_cast<std::size_t>(nodes[node].child[b]);
    }
    nodes[node].country = country_index;
    entries_.push_back(std::move(entry));
}

std::string GeoTable::lookup(const IpAddress& ip) const {
    const std::vector<Node>& nodes = trie(ip.v6);
    std::int32_t best = nodes[0].country;
    std::size_t node = 0;
    for (std::size_t i = 0; i < ip.bit_width(); ++i) {
        const std::int32_t next = nodes[node].child[ip.bit(i) ? 1 : 0];
        if (next < 0)
            break;
        node = static_cast<std::size_t>(next);
        if (nodes[node].country >= 0)
            best = nodes[node].country;
    }
    return best < 0 ? std::string(kUnknownCountry) : countries_[static_cast<std::size_t>(best)];
}

GeoTable GeoTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoError, "cannot open geo table " + path.string());
    GeoTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(Errc::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected cidr,country");
        if (line_no == 1 && detail::to_lower(line.substr(0, comma)) == "cidr")
            continue;
        try {
            table.add(line.substr(0, comma), line.substr(comma + 1));
        } catch (const Error& e) {
            throw Error(Errc::ParseError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

std::string geolocate(std::string_view ip, const GeoTable& table) {
    const auto addr = parse_ip(ip);
    return addr ? table.lookup(*addr) : std::string(kUnknownCountry);
}

} // namespace honeysheets::analytics
