#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "blackjack/deck.hpp"
#include "blackjack/rules.hpp"

namespace blackjack {

/// xoshiro256** 1.0, seeded through splitmix64. Fixed here so that runs are
/// reproducible on every platform.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed);

    std::uint64_t next() noexcept;

    /// Uniform integer in [0, bound), bound >= 1, without modulo bias.
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    std::uint64_t s_[4];
};

/// Draws one card from `deck`, proportionally to the live counts (or the
/// fixed infinite-deck probabilities), and removes it. Needs a non-empty deck.
int draw_card(Deck& deck, Xoshiro256& rng);

struct SimReport {
    std::uint64_t n = 0;        // trials requested
    std::uint64_t aborted = 0;  // trials that ran out of cards; excluded below
    std::uint64_t seed = 0;
    // Outcome label -> relative frequency over completed trials.
    std::vector<std::pair<std::string, double>> freq;
    double mean = 0.0;    // dealer: bust rate; round: net win per round
    double std_error = 0.0;  // sample standard deviation / sqrt(completed)

    double frequency(const std::string& label) const;
};

/// Dealer hands drawn without replacement from `deck` (which excludes the
/// upcard), hole card first. Labels are "17".."21", "natural" and "bust".
SimReport simulate_dealer(int d, const Deck& deck, const Rules& rules, std::uint64_t n,
                          std::uint64_t seed);

/// Full rounds from a fresh copy of the pre-deal `deck`: upcard, hole card
/// and two player cards are dealt, the dealer peeks on an ace or ten, and
/// the player follows the exact engine's best action, re-querying after
/// every card. Labels are the net wins ("-4" .. "4", "1.5").
SimReport simulate_round(const Deck& deck, const Rules& rules, std::uint64_t n,
                         std::uint64_t seed);

}  // namespace blackjack
