#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>

#include "blackjack/dealer.hpp"
#include "blackjack/deck.hpp"
#include "blackjack/hand.hpp"
#include "blackjack/rules.hpp"

namespace blackjack {

inline constexpr int kDefaultDepth = 13;

// Declaration order is the tie-break order: on equal EVs the earlier
// action wins.
enum class Action { stand, hit, double_down, split };

std::string_view to_string(Action action) noexcept;

struct ActionEvaluation {
    double ev_stand = 0.0;
    std::optional<double> ev_hit;  // empty only when no card can be drawn
    std::optional<double> ev_double;
    std::optional<double> ev_split;
    Action best = Action::stand;

    double best_ev() const;
};

/// Picks the best available action, breaking ties stand > hit > double > split.
Action select_best(const ActionEvaluation& eval);

/// Expected wins for one dealer upcard under measure Q.
///
/// Every deck passed in is the set of unseen cards (upcard and the player's
/// cards removed, hole card still in). Dealer distributions and hit values
/// are memoized by deck composition, so one Evaluator can be reused across
/// many hands and decks with the same upcard.
///
/// Not thread-safe; use one Evaluator per thread. An optional shared cache
/// lets several evaluators reuse dealer distributions.
class Evaluator {
public:
    explicit Evaluator(int upcard, Rules rules = {}, int depth = kDefaultDepth,
                       SharedDealerCache* shared = nullptr);

    int upcard() const noexcept { return upcard_; }
    const Rules& rules() const noexcept { return rules_; }
    int depth() const noexcept { return depth_; }

    /// Split rules may change between calls; the memo only depends on the
    /// upcard and the soft-17 rule.
    void set_split_rules(bool das, bool rsa, bool rsp);

    const DealerDist& dist_q(const Deck& deck);

    double stand(Hand p, const Deck& deck);
    double double_down(Hand p, const Deck& deck);
    double hit(Hand p, const Deck& deck) { return hit(p, deck, depth_); }
    double hit(Hand p, const Deck& deck, int rec);
    double split_aces(const Deck& deck, bool rsa_active);
    double split(int pair_card, const Deck& deck, bool rsp_active);
    double no_split(Hand p, const Deck& deck);

    /// Two-card decision. `deck` excludes both cards and the upcard.
    ActionEvaluation best_action(int card1, int card2, const Deck& deck);

    /// Decision for an arbitrary hand; three or more cards compare stand
    /// and hit only.
    ActionEvaluation best_action(std::span<const int> cards, const Deck& deck);

    std::size_t memo_size() const noexcept { return hits_.size() + dists_.size(); }

    /// Drops all memoized values; results are unaffected.
    void clear_memo() noexcept {
        hits_.clear();
        dists_.clear();
    }

private:
    struct HitKey {
        DeckKey deck;
        int total;
        int rec;
        bool soft;
        friend bool operator==(const HitKey&, const HitKey&) = default;
    };
    struct HitKeyHash {
        std::size_t operator()(const HitKey& k) const noexcept {
            return DeckKeyHash{}(k.deck) ^
                   (static_cast<std::size_t>(k.total * 64 + k.rec * 2 + k.soft) * 0x9E3779B97F4A7C15ull);
        }
    };

    double stand_impl(Hand p, const Deck& deck);
    double double_impl(Hand p, Deck& deck);
    double hit_impl(Hand p, Deck& deck, int rec);
    double split_aces_impl(Deck& deck, bool rsa_active);
    double split_impl(int pair_card, Deck& deck, bool rsp_active);
    double no_split_impl(Hand p, Deck& deck);
    void require_draw(const Deck& deck) const;

    int upcard_;
    Rules rules_;
    int depth_;
    SharedDealerCache* shared_;
    std::unordered_map<DeckKey, DealerDist, DeckKeyHash> dists_;
    std::unordered_map<HitKey, double, HitKeyHash> hits_;
};

/// A deck from which the player may draw: the hole card must stay behind.
inline bool player_can_draw(const Deck& deck) noexcept { return deck.has_cards(2); }

// One-shot forms. Each builds a fresh Evaluator.
double ev_stand(Hand p, int d, const Deck& deck, const Rules& rules);
double ev_double(Hand p, int d, const Deck& deck, const Rules& rules);
double ev_hit(Hand p, int d, const Deck& deck, const Rules& rules, int rec = kDefaultDepth);
double ev_split_aces(int d, const Deck& deck, const Rules& rules, bool rsa_active);
double ev_split(int p_card, int d, const Deck& deck, const Rules& rules, bool rsp_active);
double ev_no_split(Hand p, int d, const Deck& deck, const Rules& rules);
ActionEvaluation best_action(int card1, int card2, int d, const Deck& deck, const Rules& rules);

}  // namespace blackjack
