#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>

#include "blackjack/deck.hpp"
#include "blackjack/rules.hpp"
#include "blackjack/strategy.hpp"

namespace blackjack {

struct ExpectationOptions {
    int depth = kDefaultDepth;  // hit recursion depth
    int threads = 1;            // worker threads over upcards; results do not depend on it
};

/// Whole-game expected win per unit bet under optimal play.
struct GameExpectation {
    double ew = 0.0;
    std::array<double, kNumRanks> per_upcard{};   // E[W_d], index d - 1
    std::array<double, kNumRanks> upcard_prob{};  // P[d] on the pre-deal deck
};

/// r_i = E[W | deck - {i}] - E[W | deck]. Ranks missing from the deck have
/// no entry.
struct RemovalEffects {
    double base_ew = 0.0;
    std::array<std::optional<double>, kNumRanks> r{};
};

/// Ordered probability that the player's first card is i and the second is
/// j, given upcard d and no dealer natural. `deck` excludes the upcard.
double pair_prob_Q(int i, int j, int d, const Deck& deck);

/// Probability that two cards drawn from `deck` form a natural.
double natural_pair_prob(const Deck& deck);

/// E[W_d]: expected win once the upcard d is known. `deck` is the pre-deal
/// deck minus the upcard. Player naturals pay 1.5 and push against a dealer
/// natural.
double expected_win_upcard(int d, const Deck& deck, const Rules& rules,
                           const ExpectationOptions& options = {});

/// Same as above, reusing the caches of an existing evaluator for upcard d.
double expected_win_upcard(Evaluator& evaluator, const Deck& deck);

/// E[W] = sum over d of P[d] * E[W_d] for a pre-deal deck of at least four
/// cards.
GameExpectation expected_win(const Deck& deck, const Rules& rules,
                             const ExpectationOptions& options = {});

/// Effects of removing one card of each value from a finite deck.
RemovalEffects removal_effects(const Deck& deck, const Rules& rules,
                               const ExpectationOptions& options = {});

/// Removal effects tabulated by number of decks, for the counting estimate.
class RemovalTable {
public:
    void add(int n_decks, const RemovalEffects& effects);
    bool empty() const noexcept { return columns_.empty(); }
    const std::map<int, RemovalEffects>& columns() const noexcept { return columns_; }

    /// r_card at a (possibly fractional) deck count: linear interpolation
    /// between neighbouring columns, linear extrapolation from the two
    /// nearest columns outside the tabulated range, and the single column
    /// as-is when only one exists.
    double effect(int card, double n_decks) const;

private:
    std::map<int, RemovalEffects> columns_;
};

/// Linear counting estimate of E[W | deck - removed], where `deck` is the
/// full starting shoe (n = total / 52 decks). The m-th removed copy of
/// value i contributes r_i at the effective deck count n * (a_i - m + 1) / a_i,
/// i.e. the shoe size at which a_i - m + 1 copies is the regular share.
double estimate_ew(const Deck& deck, std::span<const int> removed, const RemovalTable& table,
                   double base_ew);

}  // namespace blackjack
