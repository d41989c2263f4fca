#pragma once

// Brute-force reference for small decks. Shares no code with the engine:
// hands are card lists, the hole card is enumerated explicitly and every
// dealer drawing sequence is walked. Conventions match the engine's
// documented tiny-deck rules: a dealer who runs out of cards busts, the
// player may draw only while the hole card is not the last unseen card, and
// the player never hits a total of 21.

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

using Counts = std::array<int, 11>;  // index 1..10, [0] unused
using Cards = std::vector<int>;

struct Degenerate : std::runtime_error {
    Degenerate() : std::runtime_error("no hole card avoids a dealer natural") {}
};

struct RulesO {
    bool h17 = false;
    bool das = true;
    bool rsa = true;
    bool rsp = true;
};

inline int size(const Counts& c) {
    int t = 0;
    for (int k = 1; k <= 10; ++k) t += c[k];
    return t;
}

inline int hard_sum(const Cards& cards) {
    int s = 0;
    for (int c : cards) s += c;
    return s;
}

inline bool has_ace(const Cards& cards) {
    for (int c : cards) {
        if (c == 1) return true;
    }
    return false;
}

// Best blackjack total: one ace counts 11 when that does not bust.
inline int value(const Cards& cards) {
    const int s = hard_sum(cards);
    return has_ace(cards) && s + 10 <= 21 ? s + 10 : s;
}

inline bool soft(const Cards& cards) {
    const int s = hard_sum(cards);
    return has_ace(cards) && s + 10 <= 21;
}

inline bool natural_pair(int a, int b) { return (a == 1 && b == 10) || (a == 10 && b == 1); }

inline Cards plus(Cards cards, int k) {
    cards.push_back(k);
    return cards;
}

// Outcome codes: 17..21 totals, 22 natural, 23 bust. out has 24 slots.
inline void dealer_walk(Cards& cards, Counts& deck, double p, bool h17, std::array<double, 24>& out) {
    const int v = value(cards);
    if (cards.size() == 2 && v == 21) {
        out[22] += p;
        return;
    }
    if (v > 21) {
        out[23] += p;
        return;
    }
    const bool stands = v > 17 || (v == 17 && !(h17 && soft(cards)));
    if (stands) {
        out[v] += p;
        return;
    }
    const int t = size(deck);
    if (t == 0) {
        out[23] += p;
        return;
    }
    for (int k = 1; k <= 10; ++k) {
        if (deck[k] == 0) continue;
        const double q = p * deck[k] / t;
        --deck[k];
        cards.push_back(k);
        dealer_walk(cards, deck, q, h17, out);
        cards.pop_back();
        ++deck[k];
    }
}

// P distribution of the dealer's final outcome; `deck` excludes the upcard.
inline std::array<double, 24> dealer_P(int up, Counts deck, bool h17) {
    std::array<double, 24> out{};
    Cards cards{up};
    dealer_walk(cards, deck, 1.0, h17, out);
    return out;
}

inline double payoff(int player_total, int dealer_code) {
    if (player_total > 21) return -1.0;
    if (dealer_code == 23 || player_total > dealer_code) return 1.0;
    if (player_total < dealer_code) return -1.0;
    return 0.0;
}

// Expected win of standing, averaged over hole cards that do not give the
// dealer a natural. `deck` still contains the hole card.
inline double stand(const Cards& player, int up, Counts deck, const RulesO& r) {
    const int pv = value(player);
    if (pv > 21) return -1.0;
    const int t = size(deck);
    double z = 0.0;
    double acc = 0.0;
    for (int h = 1; h <= 10; ++h) {
        if (deck[h] == 0 || natural_pair(up, h)) continue;
        const double w = static_cast<double>(deck[h]) / t;
        z += w;
        --deck[h];
        std::array<double, 24> out{};
        Cards cards{up, h};
        dealer_walk(cards, deck, 1.0, r.h17, out);
        ++deck[h];
        double e = 0.0;
        for (int code = 17; code <= 23; ++code) e += out[code] * payoff(pv, code);
        acc += w * e;
    }
    if (z == 0.0) throw Degenerate();
    return acc / z;
}

// Probability that the player's next card is i, given no dealer natural:
// the hole card is drawn first, the player's card from what is left.
inline std::array<double, 11> next_card(int up, const Counts& deck) {
    const int t = size(deck);
    std::array<double, 11> q{};
    double z = 0.0;
    for (int h = 1; h <= 10; ++h) {
        if (deck[h] == 0 || natural_pair(up, h)) continue;
        const double ph = static_cast<double>(deck[h]) / t;
        z += ph;
        for (int i = 1; i <= 10; ++i) {
            const int left = deck[i] - (i == h ? 1 : 0);
            if (left > 0) q[i] += ph * left / (t - 1);
        }
    }
    if (z == 0.0) throw Degenerate();
    for (auto& x : q) x /= z;
    return q;
}

inline bool can_draw(const Counts& deck) { return size(deck) >= 2; }

inline double hit(const Cards& player, int up, Counts deck, const RulesO& r) {
    const auto q = next_card(up, deck);
    double total = 0.0;
    for (int i = 1; i <= 10; ++i) {
        if (q[i] <= 0.0) continue;
        --deck[i];
        const Cards next = plus(player, i);
        double v = stand(next, up, deck, r);
        if (value(next) < 21 && can_draw(deck)) v = std::max(v, hit(next, up, deck, r));
        total += q[i] * v;
        ++deck[i];
    }
    return total;
}

inline double double_down(const Cards& player, int up, Counts deck, const RulesO& r) {
    const auto q = next_card(up, deck);
    double total = 0.0;
    for (int i = 1; i <= 10; ++i) {
        if (q[i] <= 0.0) continue;
        --deck[i];
        total += q[i] * stand(plus(player, i), up, deck, r);
        ++deck[i];
    }
    return 2.0 * total;
}

inline double no_split(const Cards& player, int up, Counts deck, const RulesO& r) {
    double best = stand(player, up, deck, r);
    if (value(player) >= 21 || !can_draw(deck)) return best;
    best = std::max(best, hit(player, up, deck, r));
    if (r.das) best = std::max(best, double_down(player, up, deck, r));
    return best;
}

inline double split_aces(int up, Counts deck, const RulesO& r, bool resplit) {
    const auto q = next_card(up, deck);
    double total = 0.0;
    for (int i = 1; i <= 10; ++i) {
        if (q[i] <= 0.0) continue;
        --deck[i];
        double v = stand({1, i}, up, deck, r);
        if (resplit && i == 1 && can_draw(deck)) v = std::max(v, split_aces(up, deck, r, false));
        total += q[i] * v;
        ++deck[i];
    }
    return 2.0 * total;
}

inline double split(int p, int up, Counts deck, const RulesO& r, bool resplit) {
    const auto q = next_card(up, deck);
    double total = 0.0;
    for (int i = 1; i <= 10; ++i) {
        if (q[i] <= 0.0) continue;
        --deck[i];
        double v = no_split({p, i}, up, deck, r);
        if (resplit && i == p && can_draw(deck)) v = std::max(v, split(p, up, deck, r, false));
        total += q[i] * v;
        ++deck[i];
    }
    return 2.0 * total;
}

struct Options {
    double stand = 0.0;
    bool drawable = false;
    double hit = 0.0;
    double dbl = 0.0;
    bool pair = false;
    double split = 0.0;

    double best() const {
        double b = stand;
        if (drawable) {
            b = std::max({b, hit, dbl});
            if (pair) b = std::max(b, split);
        }
        return b;
    }
};

// All options for a two-card hand; `deck` excludes both cards and the upcard.
inline Options two_card(int c1, int c2, int up, const Counts& deck, const RulesO& r) {
    Options o;
    const Cards hand{c1, c2};
    o.stand = stand(hand, up, deck, r);
    o.drawable = can_draw(deck);
    if (!o.drawable) return o;
    o.hit = hit(hand, up, deck, r);
    o.dbl = double_down(hand, up, deck, r);
    o.pair = c1 == c2;
    if (o.pair) o.split = c1 == 1 ? split_aces(up, deck, r, r.rsa) : split(c1, up, deck, r, r.rsp);
    return o;
}

// Whole-game expected win: every upcard, hole card and ordered player pair
// is enumerated in dealing order.
inline double expected_win(Counts deck, const RulesO& r) {
    const int t0 = size(deck);
    double ew = 0.0;
    for (int u = 1; u <= 10; ++u) {
        if (deck[u] == 0) continue;
        const double pu = static_cast<double>(deck[u]) / t0;
        --deck[u];
        std::map<std::pair<int, int>, double> best;  // (c1, c2) -> optimal value
        for (int h = 1; h <= 10; ++h) {
            if (deck[h] == 0) continue;
            const double ph = pu * deck[h] / (t0 - 1);
            --deck[h];
            for (int c1 = 1; c1 <= 10; ++c1) {
                if (deck[c1] == 0) continue;
                const double p1 = ph * deck[c1] / (t0 - 2);
                --deck[c1];
                for (int c2 = 1; c2 <= 10; ++c2) {
                    if (deck[c2] == 0) continue;
                    const double p = p1 * deck[c2] / (t0 - 3);
                    --deck[c2];
                    double v;
                    if (natural_pair(u, h)) {
                        v = natural_pair(c1, c2) ? 0.0 : -1.0;
                    } else if (natural_pair(c1, c2)) {
                        v = 1.5;
                    } else {
                        auto it = best.find({c1, c2});
                        if (it == best.end()) {
                            Counts info = deck;
                            ++info[h];  // the player still counts the hole card as unseen
                            it = best.emplace(std::pair{c1, c2}, two_card(c1, c2, u, info, r).best()).first;
                        }
                        v = it->second;
                    }
                    ew += p * v;
                    ++deck[c2];
                }
                ++deck[c1];
            }
            ++deck[h];
        }
        ++deck[u];
    }
    return ew;
}

}  // namespace oracle
