#pragma once

// Reference MOD-97 check kept independent of the library: the IBAN is
// rearranged, expanded to one big decimal number and reduced by schoolbook
// long division over its digits.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

/// Decimal big integer, most significant digit first.
inline std::vector<int> iban_as_number(std::string_view iban) {
    const std::string moved = std::string(iban.substr(4)) + std::string(iban.substr(0, 4));
    std::vector<int> digits;
    for (char ch : moved) {
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch - '0');
        } else if (ch >= 'A' && ch <= 'Z') {
            const int v = ch - 'A' + 10;
            digits.push_back(v / 10);
            digits.push_back(v % 10);
        } else {
            return {};
        }
    }
    return digits;
}

/// Long division of the big number by a small divisor; returns the remainder.
/// The quotient is computed too, then discarded, so each step is plain
/// digit-by-digit arithmetic.
inline int big_mod(const std::vector<int>& number, int divisor) {
    std::vector<int> quotient;
    int carry = 0;
    for (int d : number) {
        const int cur = carry * 10 + d;
        quotient.push_back(cur / divisor);
        carry = cur - quotient.back() * divisor;
    }
    return carry;
}

/// -1 for text that is not [A-Z0-9] of length >= 5.
inline int iban_remainder(std::string_view iban) {
    if (iban.size() < 5)
        return -1;
    const auto n = iban_as_number(iban);
    if (n.empty())
        return -1;
    return big_mod(n, 97);
}

/// Every check pair 00..99 that makes the body valid.
inline std::vector<std::string> valid_check_pairs(std::string_view country, std::string_view bban) {
    std::vector<std::string> out;
    for (int c = 0; c < 100; ++c) {
        std::string cd{static_cast<char>('0' + c / 10), static_cast<char>('0' + c % 10)};
        if (iban_remainder(std::string(country) + cd + std::string(bban)) == 1)
            out.push_back(cd);
    }
    return out;
}

} // namespace oracle
