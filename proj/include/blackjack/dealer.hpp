#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "blackjack/deck.hpp"
#include "blackjack/hand.hpp"
#include "blackjack/rules.hpp"

namespace blackjack {

// Dealer outcome codes: 17..21 are totals, 22 a natural, 23 a bust.
inline constexpr int kNatural = 22;
inline constexpr int kBust = 23;
inline constexpr int kNumOutcomes = 7;

enum class Measure { P, Q };

struct DealerDist {
    std::array<double, kNumOutcomes> probs{};  // index code - 17
    Measure measure = Measure::P;

    double operator[](int code) const { return probs[code - 17]; }
    double& operator[](int code) { return probs[code - 17]; }
    double sum() const;
};

/// True while the dealer must draw to `h`.
constexpr bool dealer_hits(Hand h, bool hits_soft17) noexcept {
    return h.total() < 17 || (hits_soft17 && h.soft() && h.total() == 17);
}

// ---------------------------------------------------------------------------
// Backward decomposition. Each function draws without replacement from a
// private copy of `deck` under measure P; zero-probability branches are
// skipped.

/// Probability the hole card completes a natural: a1/t for a ten upcard,
/// a10/t for an ace, 0 otherwise. `deck` excludes the upcard.
double natural_prob(const Deck& deck, int d);

/// Probability that successive draws sum to exactly `a` (aces count 1),
/// over all ordered compositions of `a`. 0 <= a <= 6.
double comp_prob(int a, Deck deck);

/// A composition of `a` followed by a composition of `b`. 0 <= a, b <= 5.
double comp_prob2(int a, int b, Deck deck);

/// Probability the dealer, starting from hard `d_total`, passes through
/// hard `e` (e <= 17). `d_total` is a start total of at most 10: from
/// there an ace always lands on a soft total, which is why e - d_total == 1
/// is impossible.
double reach_hard(int d_total, int e, Deck deck, bool hits_soft17 = false);

/// Probability the dealer passes from `from` through soft total `e`.
double reach_soft(Hand from, int e, Deck deck, bool hits_soft17 = false);
double reach_soft(int d_total, int e, Deck deck, bool hits_soft17 = false);

/// Probability the dealer moves from soft `s_total` to hard `e`, after the
/// eleven-ace is demoted.
double soft_to_hard(int s_total, int e, Deck deck, bool hits_soft17 = false);

/// Soft plus hard reach probability of total `e` from `from`.
double reach_17(Hand from, int e, const Deck& deck, bool hits_soft17 = false);
double reach_17(int d_total, int e, const Deck& deck, bool hits_soft17 = false);

/// P[D_d = e] for e in 17..21, by splitting on the last card drawn. The 21
/// bucket still contains the two-card natural.
double dealer_outcome_prob(int d, int e, const Deck& deck, const Rules& rules);

/// Full P distribution assembled from dealer_outcome_prob and natural_prob.
DealerDist dealer_dist_P_backward(int d, const Deck& deck, const Rules& rules);

// ---------------------------------------------------------------------------
// Forward evaluation over the drawn-card multiset DAG.

/// The dealer's drawing process for one upcard as a DAG whose nodes are the
/// multisets of cards drawn so far (hole card first) while the dealer still
/// has to hit. The shape depends only on the upcard and the soft-17 rule;
/// a deck supplies the edge weights.
class DealerGraph {
public:
    DealerGraph(int upcard, bool hits_soft17);

    int upcard() const noexcept { return upcard_; }
    bool hits_soft17() const noexcept { return hits_soft17_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// P distribution for `deck` (which excludes the upcard). Mass on paths
    /// that run out of cards lands in the bust bucket.
    DealerDist evaluate(const Deck& deck) const;

private:
    struct Node {
        std::array<std::uint8_t, kNumRanks> drawn{};
        std::array<std::int16_t, kNumRanks> next{};  // >= 0 node, < 0 outcome
        int n_drawn = 0;
    };

    int upcard_;
    bool hits_soft17_;
    std::vector<Node> nodes_;  // topological order
};

/// Shared immutable graph for (upcard, rule).
const DealerGraph& dealer_graph(int d, bool hits_soft17);

/// True when the hole card is certain to complete a natural, so that Q is
/// undefined.
bool natural_certain(int d, const Deck& deck);

/// Conditions a P distribution on "no dealer natural".
DealerDist condition_on_no_natural(const DealerDist& p);

DealerDist dealer_dist_P(int d, const Deck& deck, const Rules& rules);
DealerDist dealer_dist_Q(int d, const Deck& deck, const Rules& rules);

/// Memo of P distributions keyed by (upcard, soft-17 rule, deck). Safe for
/// concurrent readers and writers; racing inserts store equal values.
class SharedDealerCache {
public:
    DealerDist dist_P(int d, const Deck& deck, bool hits_soft17);
    std::size_t size() const;

private:
    struct Key {
        DeckKey deck;
        int upcard_rule;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return DeckKeyHash{}(k.deck) ^ (static_cast<std::size_t>(k.upcard_rule) * 0x9E3779B1u);
        }
    };

    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, DealerDist, KeyHash> map_;
};

}  // namespace blackjack
