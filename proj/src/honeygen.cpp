#include "honeysheets/error.hpp"
#include "honeysheets/honeygen.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>

namespace honeysheets::honeygen {

using honeylink::HoneyLink;
using sheetstore::Cell;
using sheetstore::CellFormat;
using sheetstore::HoneySheet;

namespace {

constexpr std::array<std::string_view, 3> kSupported = {"GB", "DE", "FR"};

struct LengthEntry {
    std::string_view country;
    std::size_t length;
};

// Registered IBAN lengths used for structural validation.
constexpr LengthEntry kLengths[] = {
    {"AT", 20}, {"BE", 16}, {"CH", 21}, {"CY", 28}, {"CZ", 24}, {"DE", 22}, {"DK", 18}, {"EE", 20},
    {"ES", 24}, {"FI", 18}, {"FR", 27}, {"GB", 22}, {"GR", 27}, {"HR", 21}, {"HU", 28}, {"IE", 22},
    {"IT", 27}, {"LT", 20}, {"LU", 20}, {"LV", 21}, {"MT", 31}, {"NL", 18}, {"NO", 15}, {"PL", 28},
    {"PT", 25}, {"RO", 24}, {"SE", 24}, {"SI", 19}, {"SK", 24},
};

std::string random_digits(Rng& rng, std::size_t n) {
    std::string out(n, '0');
    for (char& c : out)
        c = static_cast<char>('0' + rng.below(10));
    return out;
}

std::int64_t digits_value(std::string_view s) {
    std::int64_t v = 0;
    for (char c : s)
        v = v * 10 + (c - '0');
    return v;
}

// French RIB key over the numeric bank, branch and account fields.
std::string rib_key(std::string_view bank, std::string_view branch, std::string_view account) {
    const std::int64_t sum = 89 * digits_value(bank) + 15 * digits_value(branch) + 3 * digits_value(account);
    char buf[4];
    std::snprintf(buf, sizeof buf, "%02d", static_cast<int>(97 - sum % 97));
    return buf;
}

std::string bban_for(std::string_view country, const std::string& bank, Rng& rng) {
    if (country == "GB")
        return bank + random_digits(rng, 6) + random_digits(rng, 8);
    if (country == "DE")
        return bank + random_digits(rng, 10);
    const std::string branch = random_digits(rng, 5);
    const std::string account = random_digits(rng, 11);
    return bank + branch + account + rib_key(bank, branch, account);
}

bool denied(std::string_view bban, const IbanPolicy& policy) {
    return std::any_of(policy.deny_prefixes.begin(), policy.deny_prefixes.end(),
                       [&](const std::string& p) { return !p.empty() && bban.substr(0, p.size()) == p; });
}

std::string check_digits_for(std::string_view country, std::string_view bban) {
    const std::string probe = std::string(country) + "00" + std::string(bban);
    const int check = 98 - iban_mod97(probe);
    return std::string{static_cast<char>('0' + check / 10), static_cast<char>('0' + check % 10)};
}

} // namespace

std::string SortCode::str() const {
    return digits.substr(0, 2) + "-" + digits.substr(2, 2) + "-" + digits.substr(4, 2);
}

const IbanPolicy& default_iban_policy() {
    static const IbanPolicy policy{
        {
            {"GB", {"QZPB", "XQHB", "ZVKB", "QXLB"}},
            {"DE", {"99911101", "99922202", "99933303"}},
            {"FR", {"99971", "99982", "99993"}},
        },
        {
            // GB bank identifiers (BIC prefixes)
            "BARC", "LOYD", "NWBK", "HBUK", "MIDL", "RBOS", "NAIA", "ABBY", "CITI", "HLFX", "TSBS", "CPBK",
            "SCBL", "BUKB", "MONZ", "SRLG", "REVO", "WEST",
            // DE Bankleitzahlen
            "37040044", "10070000", "50010517", "10010010", "20050550", "70020270", "50040000",
            // FR codes banque
            "30004", "30003", "30002", "20041", "10107", "30066", "11315", "10278", "13335",
        },
    };
    return policy;
}

std::span<const std::string_view> supported_countries() { return kSupported; }

std::size_t iban_length(std::string_view country_code) {
    for (const auto& e : kLengths)
        if (e.country == country_code)
            return e.length;
    return 0;
}

int iban_mod97(std::string_view iban) {
    if (iban.size() < 4)
        return -1;
    int rem = 0;
    auto feed = [&](char c) {
        if (c >= '0' && c <= '9') {
            rem = (rem * 10 + (c - '0')) % 97;
        } else if (c >= 'A' && c <= 'Z') {
            rem = (rem * 100 + (c - 'A' + 10)) % 97;
        } else {
            return false;
        }
        return true;
    };
    for (char c : iban.substr(4))
        if (!feed(c))
            return -1;
    for (char c : iban.substr(0, 4))
        if (!feed(c))
            return -1;
    return rem;
}

Iban generate_iban(std::string_view country_code, Rng& rng, const IbanPolicy& policy) {
    if (std::find(kSupported.begin(), kSupported.end(), country_code) == kSupported.end())
        throw Error(Errc::UnsupportedCountry, "no IBAN layout for '" + std::string(country_code) + "'");

    std::vector<std::string> banks;
    if (auto it = policy.bank_codes.find(std::string(country_code)); it != policy.bank_codes.end())
        for (const auto& code : it->second)
            if (!denied(code, policy))
                banks.push_back(code);
    if (banks.empty())
        throw Error(Errc::ConfigMismatch, "no usable bank code for " + std::string(country_code));

    constexpr int kAttempts = 1000;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const std::string& bank = banks[rng.below(banks.size())];
        std::string bban = bban_for(country_code, bank, rng);
        if (denied(bban, policy))
            continue;
        std::string check = check_digits_for(country_code, bban);
        return Iban{std::string(country_code), std::move(check), std::move(bban)};
    }
    throw Error(Errc::ConfigMismatch, "every drawn BBAN hit the deny-list");
}

bool validate_iban(std::string_view s) {
    if (s.size() < 5)
        return false;
    if (!std::isupper(static_cast<unsigned char>(s[0])) || !std::isupper(static_cast<unsigned char>(s[1])) ||
        !std::isdigit(static_cast<unsigned char>(s[2])) || !std::isdigit(static_cast<unsigned char>(s[3])))
        return false;
    const std::size_t expected = iban_length(s.substr(0, 2));
    if (expected == 0 || s.size() != expected)
        return false;
    for (char c : s.substr(4))
        if (!std::isdigit(static_cast<unsigned char>(c)) && !(c >= 'A' && c <= 'Z'))
            return false;
    return iban_mod97(s) == 1;
}

SortCode sort_code_for(const Iban& iban, Rng& rng) {
    if (iban.country_code == "GB" && iban.bban.size() >= 10)
        return SortCode{iban.bban.substr(4, 6)};
    return SortCode{random_digits(rng, 6)};
}

void check_invariants(const SheetConfig& config) {
    if (config.rows < 1)
        throw Error(Errc::ConfigMismatch, "a honey sheet needs at least one personnel row");
    if (config.controlled_slots > config.link_slots)
        throw Error(Errc::ConfigMismatch, "controlled_slots exceeds link_slots");
}

std::string default_sheet_id(std::uint64_t seed) {
    Rng rng(seed ^ 0x5eedf00dULL);
    char buf[24];
    std::snprintf(buf, sizeof buf, "hs-%012llx", static_cast<unsigned long long>(rng.next() & 0xffffffffffffULL));
    return buf;
}

PersonRecord generate_person(Rng& rng) {
    PersonRecord p;
    p.full_name = std::string(rng.pick(given_names())) + " " + std::string(rng.pick(family_names()));
    p.role = std::string(rng.pick(job_roles()));
    p.monthly_pay = rng.between(1500, 9500) * 100;
    return p;
}

std::string format_pay(std::int64_t minor_units) {
    const bool negative = minor_units < 0;
    std::uint64_t v = negative ? static_cast<std::uint64_t>(-minor_units) : static_cast<std::uint64_t>(minor_units);
    std::string whole = std::to_string(v / 100);
    for (int i = static_cast<int>(whole.size()) - 3; i > 0; i -= 3)
        whole.insert(static_cast<std::size_t>(i), ",");
    char cents[4];
    std::snprintf(cents, sizeof cents, "%02u", static_cast<unsigned>(v % 100));
    return (negative ? "-" : "") + whole + "." + cents;
}

HoneySheet build_honey_sheet(const SheetConfig& config, std::span<const HoneyLink> links,
                             const honeylink::LinkRegistry& registry) {
    check_invariants(config);
    if (links.size() != config.link_slots)
        throw Error(Errc::ConfigMismatch, "expected " + std::to_string(config.link_slots) + " links, got " +
                                              std::to_string(links.size()));

    const std::size_t link_columns = std::max<std::size_t>(1, (config.link_slots + config.rows - 1) / config.rows);

    HoneySheet sheet;
    sheet.sheet_id = config.sheet_id.empty() ? default_sheet_id(config.rng_seed) : config.sheet_id;
    sheet.share_link = config.share_base + sheet.sheet_id + "/edit?usp=sharing";
    sheet.column_widths = {170, 160, 230, 90, 110};
    for (std::size_t i = 0; i < link_columns; ++i)
        sheet.column_widths.push_back(250);

    const CellFormat header_format{11, {0, 0, 0}, {217, 217, 217}};
    const CellFormat body_format{};

    std::vector<Cell> header = {{"Name", header_format},      {"Role", header_format},
                                {"IBAN", header_format},      {"Sort code", header_format},
                                {"Monthly pay", header_format}};
    for (std::size_t i = 0; i < link_columns; ++i)
        header.push_back({i == 0 ? "Transfer link" : "Transfer link " + std::to_string(i + 1), header_format});
    sheet.grid.push_back(std::move(header));

    Rng rng(config.rng_seed);
    std::set<std::string> used_ibans;
    for (std::size_t r = 0; r < config.rows; ++r) {
        const PersonRecord person = generate_person(rng);
        Iban iban = generate_iban(config.country, rng, config.iban_policy);
        for (int retry = 0; retry < 64 && !used_ibans.insert(iban.str()).second; ++retry)
            iban = generate_iban(config.country, rng, config.iban_policy);
        const SortCode sort_code = sort_code_for(iban, rng);
        sheetstore::Row row = {{person.full_name, body_format},
                               {person.role, body_format},
                               {iban.str(), body_format},
                               {sort_code.str(), body_format},
                               {format_pay(person.monthly_pay), body_format}};
        row.resize(sheet.column_widths.size(), Cell{"", body_format});
        sheet.grid.push_back(std::move(row));
    }

    for (std::size_t i = 0; i < links.size(); ++i) {
        const std::size_t row = 1 + i % config.rows;
        const std::size_t col = 5 + i / config.rows;
        sheet.grid[row][col].value = registry.short_url(links[i].token);
    }
    return sheet;
}

std::vector<HoneyLink> mint_sheet_links(const SheetConfig& config, honeylink::LinkRegistry& registry, Rng& rng) {
    check_invariants(config);
    static constexpr std::string_view kBankHosts[] = {
        "www.barclays.co.uk", "www.hsbc.co.uk", "www.lloydsbank.com",
        "www.natwest.com",    "www.santander.co.uk", "www.nationwide.co.uk",
    };
    const std::string sheet_id = config.sheet_id.empty() ? default_sheet_id(config.rng_seed) : config.sheet_id;
    auto slug = [&rng] {
        std::string s(12, 'a');
        for (char& c : s)
            c = honeylink::kTokenAlphabet[rng.below(honeylink::kTokenAlphabet.size())];
        return s;
    };

    std::vector<HoneyLink> links;
    for (std::size_t i = 0; i < config.link_slots; ++i) {
        if (i < config.controlled_slots) {
            const std::string dest = "https://" + registry.controlled_domain() + "/transfer/" + slug();
            links.push_back(honeylink::mint_token(registry, honeylink::TargetClass::Controlled, dest, sheet_id, rng));
        } else {
            const std::string dest = "https://" + std::string(rng.pick(std::span(kBankHosts))) +
                                     "/online-banking/transfer/" + slug();
            links.push_back(honeylink::mint_token(registry, honeylink::TargetClass::DecoyBank, dest, sheet_id, rng));
        }
    }
    return links;
}

} // namespace honeysheets::honeygen
