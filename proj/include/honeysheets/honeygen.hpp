#pragma once

#include "honeysheets/honeylink.hpp"
#include "honeysheets/rng.hpp"
#include "honeysheets/sheetstore.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace honeysheets::honeygen {

struct PersonRecord {
    std::string full_name;
    std::string role;
    /// Minor currency units (pence/cents).
    std::int64_t monthly_pay = 0;
};

struct Iban {
    std::string country_code;
    std::string check_digits;
    std::string bban;

    /// Electronic form, e.g. "GB82WEST12345698765432".
    std::string str() const { return country_code + check_digits + bban; }

    friend bool operator==(const Iban&, const Iban&) = default;
};

struct SortCode {
    std::string digits; // exactly six

    /// "NN-NN-NN"
    std::string str() const;
};

/// Which bank identifiers the generator may use and which prefixes it must never emit.
struct IbanPolicy {
    /// Country -> fictitious bank identifiers (GB: 4 letters, DE: 8 digits, FR: 5 digits).
    std::map<std::string, std::vector<std::string>> bank_codes;
    /// BBAN prefixes of real institutions.
    std::vector<std::string> deny_prefixes;
};

const IbanPolicy& default_iban_policy();

/// Countries with a generation layout: GB, DE, FR.
std::span<const std::string_view> supported_countries();

/// Registered IBAN length for a country, or 0 when unknown.
std::size_t iban_length(std::string_view country_code);

/// Remainder of the rearranged numeric form modulo 97 (letters expand to 10..35).
/// The input must be alphanumeric; returns -1 otherwise.
int iban_mod97(std::string_view iban);

/// Draws a checksum-valid IBAN whose bank identifier comes from the policy.
/// Throws Error(UnsupportedCountry) outside GB/DE/FR, Error(ConfigMismatch)
/// when every configured bank code for the country is deny-listed.
Iban generate_iban(std::string_view country_code, Rng& rng, const IbanPolicy& policy = default_iban_policy());

/// Structure (country letters, check digits, registered length, uppercase
/// alphanumerics) and the MOD-97 rule. Never throws.
bool validate_iban(std::string_view candidate);

/// GB IBANs embed the sort code; other countries get a random one.
SortCode sort_code_for(const Iban& iban, Rng& rng);

struct SheetConfig {
    std::size_t rows = 20;
    std::size_t link_slots = 9;
    std::size_t controlled_slots = 3;
    std::uint64_t rng_seed = 1;
    std::string country = "GB";
    std::string sheet_id;   // derived from the seed when empty
    std::string share_base = "https://docs.example.com/spreadsheets/d/";
    IbanPolicy iban_policy = default_iban_policy();
};

/// Throws Error(ConfigMismatch) when rows == 0 or controlled_slots > link_slots.
void check_invariants(const SheetConfig& config);

std::string default_sheet_id(std::uint64_t seed);

PersonRecord generate_person(Rng& rng);

std::span<const std::string_view> given_names();
std::span<const std::string_view> family_names();
std::span<const std::string_view> job_roles();

/// "4,210.00"
std::string format_pay(std::int64_t minor_units);

/// Lays out a payroll sheet: header row, config.rows personnel rows, and one
/// short URL per link in the link column(s), link i at row 1 + i % rows.
/// Pure function of (config, links). Throws Error(ConfigMismatch) when
/// links.size() != config.link_slots.
sheetstore::HoneySheet build_honey_sheet(const SheetConfig& config, std::span<const honeylink::HoneyLink> links,
                                         const honeylink::LinkRegistry& registry);

/// Mints config.controlled_slots controlled links and the remaining decoy-bank
/// links for the sheet, in that order.
std::vector<honeylink::HoneyLink> mint_sheet_links(const SheetConfig& config, honeylink::LinkRegistry& registry,
                                                   Rng& rng);

} // namespace honeysheets::honeygen
