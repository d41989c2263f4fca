#include "blackjack/strategy.hpp"

#include <algorithm>
#include <string>

namespace blackjack {

std::string_view to_string(Action action) noexcept {
    switch (action) {
        case Action::stand: return "stand";
        case Action::hit: return "hit";
        case Action::double_down: return "double";
        case Action::split: return "split";
    }
    return "stand";
}

double ActionEvaluation::best_ev() const {
    switch (best) {
        case Action::stand: return ev_stand;
        case Action::hit: return *ev_hit;
        case Action::double_down: return *ev_double;
        case Action::split: return *ev_split;
    }
    return ev_stand;
}

Action select_best(const ActionEvaluation& eval) {
    Action best = Action::stand;
    double best_ev = eval.ev_stand;
    auto consider = [&](const std::optional<double>& ev, Action action) {
        if (ev && *ev > best_ev) {
            best_ev = *ev;
            best = action;
        }
    };
    consider(eval.ev_hit, Action::hit);
    consider(eval.ev_double, Action::double_down);
    consider(eval.ev_split, Action::split);
    return best;
}

Evaluator::Evaluator(int upcard, Rules rules, int depth, SharedDealerCache* shared)
    : upcard_(upcard), rules_(rules), depth_(depth), shared_(shared) {
    check_card(upcard);
    if (depth < 0) throw EngineError(ErrorCode::invalid_argument, "recursion depth must be >= 0");
}

void Evaluator::set_split_rules(bool das, bool rsa, bool rsp) {
    rules_.das = das;
    rules_.rsa = rsa;
    rules_.rsp = rsp;
}

const DealerDist& Evaluator::dist_q(const Deck& deck) {
    if (auto it = dists_.find(deck.key()); it != dists_.end()) return it->second;
    if (!deck.has_cards(1)) throw EngineError(ErrorCode::empty_deck, "dealer needs a hole card");
    if (natural_certain(upcard_, deck)) {
        throw EngineError(ErrorCode::degenerate_condition, "dealer natural is certain; Q is undefined");
    }
    const bool h17 = rules_.dealer_hits_soft17;
    const DealerDist p = shared_ ? shared_->dist_P(upcard_, deck, h17)
                                 : dealer_graph(upcard_, h17).evaluate(deck);
    return dists_.emplace(deck.key(), condition_on_no_natural(p)).first->second;
}

double Evaluator::stand_impl(Hand p, const Deck& deck) {
    if (p.total() > 21) return -1.0;
    const DealerDist& q = dist_q(deck);
    if (p.total() < 17) return q[kBust] - (q[17] + q[18] + q[19] + q[20] + q[21]);
    double above = 0.0;
    for (int k = p.total() + 1; k <= 21; ++k) above += q[k];
    return 1.0 - q[p.total()] - 2.0 * above;
}

double Evaluator::double_impl(Hand p, Deck& deck) {
    const CardProbs q = deck.probs_q(upcard_);
    double total = 0.0;
    for (int i = 1; i <= kNumRanks; ++i) {
        const double tmp = q[i - 1];
        if (tmp > 0.0) {
            deck.remove_unchecked(i);
            total += tmp * stand_impl(p + i, deck);
            deck.add_unchecked(i);
        }
    }
    return 2.0 * total;
}

double Evaluator::hit_impl(Hand p, Deck& deck, int rec) {
    const HitKey key{deck.key(), p.total(), rec, p.soft()};
    if (auto it = hits_.find(key); it != hits_.end()) return it->second;

    const CardProbs q = deck.probs_q(upcard_);
    double total = 0.0;
    for (int i = 1; i <= kNumRanks; ++i) {
        const double tmp = q[i - 1];
        if (tmp > 0.0) {
            deck.remove_unchecked(i);
            const Hand next = p + i;
            const double stand = stand_impl(next, deck);
            if (next.total() >= 21 || rec <= 0 || !player_can_draw(deck)) {
                total += tmp * stand;
            } else {
                total += tmp * std::max(stand, hit_impl(next, deck, rec - 1));
            }
            deck.add_unchecked(i);
        }
    }
    hits_.emplace(key, total);
    return total;
}

double Evaluator::split_aces_impl(Deck& deck, bool rsa_active) {
    const Hand ace = Hand::of(kAce);
    const CardProbs q = deck.probs_q(upcard_);
    double total = 0.0;
    for (int i = 1; i <= kNumRanks; ++i) {
        const double tmp = q[i - 1];
        if (tmp > 0.0) {
            deck.remove_unchecked(i);
            const double stand = stand_impl(ace + i, deck);
            if (rsa_active && i == kAce && player_can_draw(deck)) {
                total += tmp * std::max(stand, split_aces_impl(deck, false));
            } else {
                total += tmp * stand;
            }
            deck.add_unchecked(i);
        }
    }
    return 2.0 * total;
}

double Evaluator::split_impl(int pair_card, Deck& deck, bool rsp_active) {
    const Hand base = Hand::of(pair_card);
    const CardProbs q = deck.probs_q(upcard_);
    double total = 0.0;
    for (int i = 1; i <= kNumRanks; ++i) {
        const double tmp = q[i - 1];
        if (tmp > 0.0) {
            deck.remove_unchecked(i);
            const double play = no_split_impl(base + i, deck);
            if (rsp_active && i == pair_card && player_can_draw(deck)) {
                total += tmp * std::max(play, split_impl(pair_card, deck, false));
            } else {
                total += tmp * play;
            }
            deck.add_unchecked(i);
        }
    }
    return 2.0 * total;
}

double Evaluator::no_split_impl(Hand p, Deck& deck) {
    const double stand = stand_impl(p, deck);
    if (p.total() >= 21 || !player_can_draw(deck)) return stand;
    double best = std::max(stand, hit_impl(p, deck, depth_));
    if (rules_.das) best = std::max(best, double_impl(p, deck));
    return best;
}

void Evaluator::require_draw(const Deck& deck) const {
    if (!player_can_draw(deck)) {
        throw EngineError(ErrorCode::empty_deck, "player cannot draw: only the hole card is left");
    }
}

double Evaluator::stand(Hand p, const Deck& deck) { return stand_impl(p, deck); }

double Evaluator::double_down(Hand p, const Deck& deck) {
    require_draw(deck);
    Deck work = deck;
    return double_impl(p, work);
}

double Evaluator::hit(Hand p, const Deck& deck, int rec) {
    require_draw(deck);
    if (rec < 0) throw EngineError(ErrorCode::invalid_argument, "recursion depth must be >= 0");
    Deck work = deck;
    return hit_impl(p, work, rec);
}

double Evaluator::split_aces(const Deck& deck, bool rsa_active) {
    require_draw(deck);
    Deck work = deck;
    return split_aces_impl(work, rsa_active);
}

double Evaluator::split(int pair_card, const Deck& deck, bool rsp_active) {
    check_card(pair_card);
    if (pair_card == kAce) {
        throw EngineError(ErrorCode::invalid_argument, "use split_aces for a pair of aces");
    }
    require_draw(deck);
    Deck work = deck;
    return split_impl(pair_card, work, rsp_active);
}

double Evaluator::no_split(Hand p, const Deck& deck) {
    Deck work = deck;
    return no_split_impl(p, work);
}

ActionEvaluation Evaluator::best_action(int card1, int card2, const Deck& deck) {
    check_card(card1);
    check_card(card2);
    const Hand hand = Hand::of(card1) + card2;
    if (hand.total() == 21) {
        throw EngineError(ErrorCode::invalid_argument, "a natural is settled at 3:2, not played");
    }
    ActionEvaluation eval;
    eval.ev_stand = stand(hand, deck);
    if (player_can_draw(deck)) {
        eval.ev_hit = hit(hand, deck);
        eval.ev_double = double_down(hand, deck);
        if (card1 == card2) {
            eval.ev_split = card1 == kAce ? split_aces(deck, rules_.rsa)
                                          : split(card1, deck, rules_.rsp);
        }
    }
    eval.best = select_best(eval);
    return eval;
}

ActionEvaluation Evaluator::best_action(std::span<const int> cards, const Deck& deck) {
    if (cards.size() < 2) throw EngineError(ErrorCode::invalid_argument, "a hand needs at least two cards");
    if (cards.size() == 2) return best_action(cards[0], cards[1], deck);
    Hand hand;
    for (int c : cards) {
        check_card(c);
        hand += c;
    }
    if (hand.busted()) throw EngineError(ErrorCode::invalid_argument, "hand is already busted");
    ActionEvaluation eval;
    eval.ev_stand = stand(hand, deck);
    if (player_can_draw(deck)) eval.ev_hit = hit(hand, deck);
    eval.best = select_best(eval);
    return eval;
}

double ev_stand(Hand p, int d, const Deck& deck, const Rules& rules) {
    return Evaluator(d, rules).stand(p, deck);
}

double ev_double(Hand p, int d, const Deck& deck, const Rules& rules) {
    return Evaluator(d, rules).double_down(p, deck);
}

double ev_hit(Hand p, int d, const Deck& deck, const Rules& rules, int rec) {
    return Evaluator(d, rules).hit(p, deck, rec);
}

double ev_split_aces(int d, const Deck& deck, const Rules& rules, bool rsa_active) {
    return Evaluator(d, rules).split_aces(deck, rsa_active);
}

double ev_split(int p_card, int d, const Deck& deck, const Rules& rules, bool rsp_active) {
    return Evaluator(d, rules).split(p_card, deck, rsp_active);
}

double ev_no_split(Hand p, int d, const Deck& deck, const Rules& rules) {
    return Evaluator(d, rules).no_split(p, deck);
}

ActionEvaluation best_action(int card1, int card2, int d, const Deck& deck, const Rules& rules) {
    return Evaluator(d, rules).best_action(card1, card2, deck);
}

}  // namespace blackjack
