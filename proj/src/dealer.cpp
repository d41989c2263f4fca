#include "blackjack/dealer.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace blackjack {

double DealerDist::sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

namespace {

// P-measure draw probability that yields 0 instead of throwing when the
// deck is empty, so exhausted branches simply contribute nothing.
double draw_prob(const Deck& deck, int k) {
    if (deck.is_infinite()) return deck.prob(k);
    const int t = deck.total();
    return t == 0 ? 0.0 : static_cast<double>(deck.count(k)) / t;
}

int hard_count(Hand h) { return h.soft() ? h.total() - 10 : h.total(); }

// Probability that the dealer's running hand, starting at `from`, is at
// some point exactly `to`. Every draw raises the hard count, so a path
// visits a given state at most once.
double reach_state(Hand from, Hand to, Deck& deck, bool h17) {
    if (from == to) return 1.0;
    if (!dealer_hits(from, h17) || hard_count(from) >= hard_count(to)) return 0.0;
    double total = 0.0;
    for (int k = 1; k <= kNumRanks; ++k) {
        const double tmp = draw_prob(deck, k);
        if (tmp > 0.0) {
            deck.remove_unchecked(k);
            total += tmp * reach_state(from + k, to, deck, h17);
            deck.add_unchecked(k);
        }
    }
    return total;
}

double comp_prob_impl(int a, Deck& deck) {
    if (a == 0) return 1.0;
    double total = 0.0;
    for (int i = 1; i <= a; ++i) {
        const double tmp = draw_prob(deck, i);
        if (tmp > 0.0) {
            deck.remove_unchecked(i);
            total += tmp * comp_prob_impl(a - i, deck);
            deck.add_unchecked(i);
        }
    }
    return total;
}

double comp_prob2_impl(int a, int b, Deck& deck) {
    if (a == 0) return comp_prob_impl(b, deck);
    if (b == 0) return comp_prob_impl(a, deck);
    double total = 0.0;
    for (int i = 1; i <= a; ++i) {
        const double tmp = draw_prob(deck, i);
        if (tmp > 0.0) {
            deck.remove_unchecked(i);
            total += tmp * comp_prob2_impl(a - i, b, deck);
            deck.add_unchecked(i);
        }
    }
    return total;
}

double reach_hard_impl(int d, int e, Deck& deck, bool h17) {
    if (e == d) return 1.0;
    if (e - d == 1) return 0.0;
    const int soft_limit = h17 ? 17 : 16;
    double total = 0.0;
    const double ace = draw_prob(deck, kAce);
    if (ace > 0.0) {
        deck.remove_unchecked(kAce);
        if (d + 11 <= soft_limit) {
            total += ace * reach_state(Hand{d + 11, true}, Hand{e, false}, deck, h17);
        }
        deck.add_unchecked(kAce);
    }
    for (int i = 2; i <= std::min(e - d, 10); ++i) {
        const double tmp = draw_prob(deck, i);
        if (tmp > 0.0) {
            deck.remove_unchecked(i);
            if (d + i < 11) {
                total += tmp * reach_hard_impl(d + i, e, deck, h17);
            } else {
                total += tmp * comp_prob_impl(e - d - i, deck);
            }
            deck.add_unchecked(i);
        }
    }
    return total;
}

Hand start_hand(int d_total) { return d_total == kAce ? Hand::of(kAce) : Hand{d_total, false}; }

void check_outcome_total(int e) {
    if (e < 17 || e > 21) {
        throw EngineError(ErrorCode::invalid_argument, "dealer total must be in 17..21");
    }
}

}  // namespace

double natural_prob(const Deck& deck, int d) {
    check_card(d);
    if (d == kTen) return deck.prob(kAce);
    if (d == kAce) return deck.prob(kTen);
    if (!deck.has_cards(1)) throw EngineError(ErrorCode::empty_deck, "deck is empty");
    return 0.0;
}

double comp_prob(int a, Deck deck) {
    if (a < 0 || a > 6) throw EngineError(ErrorCode::invalid_argument, "comp_prob needs 0 <= a <= 6");
    return comp_prob_impl(a, deck);
}

double comp_prob2(int a, int b, Deck deck) {
    if (a < 0 || a > 5 || b < 0 || b > 5) {
        throw EngineError(ErrorCode::invalid_argument, "comp_prob2 needs 0 <= a, b <= 5");
    }
    return comp_prob2_impl(a, b, deck);
}

double reach_hard(int d_total, int e, Deck deck, bool hits_soft17) {
    if (e > 17) throw EngineError(ErrorCode::invalid_argument, "reach_hard target must be <= 17");
    return reach_hard_impl(d_total, e, deck, hits_soft17);
}

double reach_soft(Hand from, int e, Deck deck, bool hits_soft17) {
    return reach_state(from, Hand{e, true}, deck, hits_soft17);
}

double reach_soft(int d_total, int e, Deck deck, bool hits_soft17) {
    return reach_soft(start_hand(d_total), e, std::move(deck), hits_soft17);
}

double soft_to_hard(int s_total, int e, Deck deck, bool hits_soft17) {
    return reach_state(Hand{s_total, true}, Hand{e, false}, deck, hits_soft17);
}

double reach_17(Hand from, int e, const Deck& deck, bool hits_soft17) {
    Deck work = deck;
    const double soft = reach_state(from, Hand{e, true}, work, hits_soft17);
    const double hard = !from.soft() && from.total() <= 10
                            ? reach_hard_impl(from.total(), e, work, hits_soft17)
                            : reach_state(from, Hand{e, false}, work, hits_soft17);
    return soft + hard;
}

double reach_17(int d_total, int e, const Deck& deck, bool hits_soft17) {
    return reach_17(start_hand(d_total), e, deck, hits_soft17);
}

double dealer_outcome_prob(int d, int e, const Deck& deck, const Rules& rules) {
    check_card(d);
    check_outcome_total(e);
    const bool h17 = rules.dealer_hits_soft17;
    const Hand start = Hand::of(d);
    Deck work = deck;
    if (e == 17) {
        if (!h17) return reach_17(start, 17, work, h17);
        return start.soft() ? reach_state(start, Hand{17, false}, work, h17)
                            : reach_hard_impl(start.total(), 17, work, h17);
    }
    double total = 0.0;
    // i == 11 is an ace counted as eleven.
    for (int i = e - 16; i <= std::min(e - d, 11); ++i) {
        const int card = i == 11 ? kAce : i;
        const double tmp = draw_prob(work, card);
        if (tmp > 0.0) {
            work.remove_unchecked(card);
            total += tmp * reach_17(start, e - i, work, h17);
            work.add_unchecked(card);
        }
    }
    if (h17) {
        // Soft 17 is a drawing total under H17.
        const int card = e - 17;
        const double tmp = draw_prob(work, card);
        if (tmp > 0.0) {
            work.remove_unchecked(card);
            total += tmp * reach_state(start, Hand{17, true}, work, h17);
            work.add_unchecked(card);
        }
    }
    return total;
}

DealerDist dealer_dist_P_backward(int d, const Deck& deck, const Rules& rules) {
    DealerDist dist;
    dist.measure = Measure::P;
    const double natural = natural_prob(deck, d);
    double sum = 0.0;
    for (int e = 17; e <= 21; ++e) {
        dist[e] = dealer_outcome_prob(d, e, deck, rules);
        if (e == 21) dist[e] = std::max(0.0, dist[e] - natural);
        sum += dist[e];
    }
    dist[kNatural] = natural;
    dist[kBust] = std::max(0.0, 1.0 - sum - natural);  // rounding can leave -1e-16
    return dist;
}

// ---------------------------------------------------------------------------

DealerGraph::DealerGraph(int upcard, bool hits_soft17) : upcard_(upcard), hits_soft17_(hits_soft17) {
    check_card(upcard);
    std::map<std::array<std::uint8_t, kNumRanks>, int> index;
    std::vector<Hand> hands;
    nodes_.push_back(Node{});
    hands.push_back(Hand::of(upcard));
    index[nodes_[0].drawn] = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Hand hand = hands[i];
        for (int k = 1; k <= kNumRanks; ++k) {
            const Hand next = hand + k;
            int code = 0;
            if (i == 0 && next.total() == 21) {
                code = kNatural;
            } else if (next.busted()) {
                code = kBust;
            } else if (!dealer_hits(next, hits_soft17)) {
                code = next.total();
            }
            if (code != 0) {
                nodes_[i].next[k - 1] = static_cast<std::int16_t>(-1 - (code - 17));
                continue;
            }
            auto drawn = nodes_[i].drawn;
            ++drawn[k - 1];
            auto [it, inserted] = index.try_emplace(drawn, static_cast<int>(nodes_.size()));
            if (inserted) {
                Node child;
                child.drawn = drawn;
                child.n_drawn = nodes_[i].n_drawn + 1;
                nodes_.push_back(child);
                hands.push_back(next);
            }
            nodes_[i].next[k - 1] = static_cast<std::int16_t>(it->second);
        }
    }
}

DealerDist DealerGraph::evaluate(const Deck& deck) const {
    thread_local std::vector<double> mass;
    mass.assign(nodes_.size(), 0.0);
    mass[0] = 1.0;
    std::array<double, kNumOutcomes> out{};

    const bool infinite = deck.is_infinite();
    CardProbs fixed{};
    if (infinite) {
        for (int k = 1; k <= kNumRanks; ++k) fixed[k - 1] = deck.prob(k);
    } else if (deck.total() == 0) {
        throw EngineError(ErrorCode::empty_deck, "dealer needs a hole card");
    }
    const auto& counts = deck.counts();
    const int t = deck.total();

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double m = mass[i];
        if (m == 0.0) continue;
        const Node& node = nodes_[i];
        if (infinite) {
            for (int k = 0; k < kNumRanks; ++k) {
                const double w = m * fixed[k];
                const int dest = node.next[k];
                if (dest >= 0) mass[dest] += w; else out[-1 - dest] += w;
            }
            continue;
        }
        const int remaining = t - node.n_drawn;
        if (remaining <= 0) continue;
        const double inv = 1.0 / remaining;
        for (int k = 0; k < kNumRanks; ++k) {
            const int avail = counts[k] - node.drawn[k];
            if (avail <= 0) continue;
            const double w = m * avail * inv;
            const int dest = node.next[k];
            if (dest >= 0) mass[dest] += w; else out[-1 - dest] += w;
        }
    }

    DealerDist dist;
    dist.measure = Measure::P;
    double sum = 0.0;
    for (int c = 17; c <= kNatural; ++c) {
        dist[c] = out[c - 17];
        sum += dist[c];
    }
    dist[kBust] = std::max(0.0, 1.0 - sum);  // rounding can leave -1e-16
    return dist;
}

const DealerGraph& dealer_graph(int d, bool hits_soft17) {
    check_card(d);
    static const auto graphs = [] {
        std::vector<std::unique_ptr<DealerGraph>> all;
        for (int rule = 0; rule < 2; ++rule) {
            for (int up = 1; up <= kNumRanks; ++up) {
                all.push_back(std::make_unique<DealerGraph>(up, rule == 1));
            }
        }
        return all;
    }();
    return *graphs[(hits_soft17 ? kNumRanks : 0) + d - 1];
}

DealerDist condition_on_no_natural(const DealerDist& p) {
    const double keep = 1.0 - p[kNatural];
    if (!(keep > 0.0)) {
        throw EngineError(ErrorCode::degenerate_condition,
                          "dealer natural is certain; Q is undefined");
    }
    DealerDist q;
    q.measure = Measure::Q;
    double sum = 0.0;
    for (int e = 17; e <= 21; ++e) {
        q[e] = p[e] / keep;
        sum += q[e];
    }
    q[kNatural] = 0.0;
    q[kBust] = std::max(0.0, 1.0 - sum);
    return q;
}

bool natural_certain(int d, const Deck& deck) {
    if (deck.is_infinite()) return false;
    const int t = deck.total();
    return t > 0 && ((d == kTen && deck.count(kAce) == t) || (d == kAce && deck.count(kTen) == t));
}

namespace {

void check_not_degenerate(int d, const Deck& deck) {
    if (natural_certain(d, deck)) {
        throw EngineError(ErrorCode::degenerate_condition,
                          "dealer natural is certain; Q is undefined");
    }
}

}  // namespace

DealerDist dealer_dist_P(int d, const Deck& deck, const Rules& rules) {
    return dealer_graph(d, rules.dealer_hits_soft17).evaluate(deck);
}

DealerDist dealer_dist_Q(int d, const Deck& deck, const Rules& rules) {
    check_card(d);
    if (!deck.has_cards(1)) throw EngineError(ErrorCode::empty_deck, "dealer needs a hole card");
    check_not_degenerate(d, deck);
    return condition_on_no_natural(dealer_dist_P(d, deck, rules));
}

DealerDist SharedDealerCache::dist_P(int d, const Deck& deck, bool hits_soft17) {
    const Key key{deck.key(), d + (hits_soft17 ? 16 : 0)};
    {
        std::shared_lock lock(mutex_);
        if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    DealerDist dist = dealer_graph(d, hits_soft17).evaluate(deck);
    std::unique_lock lock(mutex_);
    map_.try_emplace(key, dist);
    return dist;
}

std::size_t SharedDealerCache::size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
}

}  // namespace blackjack
