#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace blackjack {

/// Table rules. The natural payout is fixed at 3:2.
struct Rules {
    std::optional<int> n_decks;  // empty means an infinite deck
    bool dealer_hits_soft17 = false;
    bool das = true;  // double down after split
    bool rsa = true;  // re-split aces
    bool rsp = true;  // re-split non-ace pairs

    static constexpr double natural_payout = 1.5;

    /// Parses the three-character das/rsa/rsp mask, e.g. "010".
    static Rules from_bits(std::string_view bits);
    std::string bits() const;

    friend bool operator==(const Rules&, const Rules&) = default;
};

}  // namespace blackjack
