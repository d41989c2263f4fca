#include "blackjack/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>

#include "blackjack/dealer.hpp"
#include "blackjack/hand.hpp"
#include "blackjack/strategy.hpp"

namespace blackjack {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

// Keeps the per-upcard memo tables of a long run within a few hundred MB.
constexpr std::size_t kMemoLimit = 4'000'000;

void check_trials(std::uint64_t n) {
    if (n < 1) throw EngineError(ErrorCode::invalid_argument, "number of trials must be >= 1");
}

// Accumulates a scalar statistic and labelled outcome counts.
class Tally {
public:
    void add(double x) {
        ++count_;
        sum_ += x;
        sum_sq_ += x * x;
    }
    std::uint64_t count() const noexcept { return count_; }
    double mean() const { return count_ ? sum_ / count_ : 0.0; }
    double std_error() const {
        if (count_ < 2) return 0.0;
        const double m = mean();
        const double var = (sum_sq_ - count_ * m * m) / (count_ - 1);
        return std::sqrt(std::max(var, 0.0) / count_);
    }

private:
    std::uint64_t count_ = 0;
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
};

std::string format_win(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// Dealer's remaining draws from `hand`. Returns the outcome code, or empty
// when the shoe runs out.
std::optional<int> finish_dealer(Hand hand, Deck& shoe, bool hits_soft17, Xoshiro256& rng) {
    while (dealer_hits(hand, hits_soft17)) {
        if (!shoe.has_cards(1)) return std::nullopt;
        hand += draw_card(shoe, rng);
    }
    return hand.busted() ? kBust : hand.total();
}

bool is_natural(int a, int b) { return (a == kAce && b == kTen) || (a == kTen && b == kAce); }

struct PlayedHand {
    Hand hand;
    double bet = 1.0;
};

// Plays one round with the exact engine as the policy. `shoe` holds the
// physical cards; `seen` is the player's view of the unseen cards, which
// still contains the dealer's hole card.
class RoundPlayer {
public:
    explicit RoundPlayer(const Rules& rules) : rules_(rules) {}

    std::optional<double> play(Deck shoe, Xoshiro256& rng) {
        const int up = draw_card(shoe, rng);
        const int hole = draw_card(shoe, rng);
        const int c1 = draw_card(shoe, rng);
        const int c2 = draw_card(shoe, rng);

        // The dealer peeks first.
        if ((up == kAce || up == kTen) && is_natural(up, hole)) return is_natural(c1, c2) ? 0.0 : -1.0;
        if (is_natural(c1, c2)) return Rules::natural_payout;

        Deck seen = shoe;
        seen.add_unchecked(hole);
        Evaluator& ev = evaluator(up);
        hands_.clear();

        const ActionEvaluation first = ev.best_action(c1, c2, seen);
        const Hand start = Hand::of(c1) + c2;
        switch (first.best) {
            case Action::stand: hands_.push_back({start}); break;
            case Action::hit: play_hits(ev, start, shoe, seen, rng); break;
            case Action::double_down: hands_.push_back({draw(shoe, seen, rng, start), 2.0}); break;
            case Action::split:
                if (c1 == kAce) {
                    play_split_aces(ev, shoe, seen, rng, rules_.rsa);
                    play_split_aces(ev, shoe, seen, rng, rules_.rsa);
                } else {
                    play_split_hand(ev, c1, shoe, seen, rng, rules_.rsp);
                    play_split_hand(ev, c1, shoe, seen, rng, rules_.rsp);
                }
                break;
        }

        bool any_live = false;
        for (const auto& h : hands_) any_live = any_live || !h.hand.busted();
        int dealer = 0;
        if (any_live) {
            const auto outcome = finish_dealer(Hand::of(up) + hole, shoe, rules_.dealer_hits_soft17, rng);
            if (!outcome) return std::nullopt;
            dealer = *outcome;
        }
        double win = 0.0;
        for (const auto& [hand, bet] : hands_) {
            if (hand.busted()) {
                win -= bet;
            } else if (dealer == kBust || hand.total() > dealer) {
                win += bet;
            } else if (hand.total() < dealer) {
                win -= bet;
            }
        }
        return win;
    }

private:
    Evaluator& evaluator(int up) {
        auto& slot = evaluators_[up - 1];
        if (!slot) slot = std::make_unique<Evaluator>(up, rules_);
        if (slot->memo_size() > kMemoLimit) slot->clear_memo();
        return *slot;
    }

    static Hand draw(Deck& shoe, Deck& seen, Xoshiro256& rng, Hand hand) {
        const int card = draw_card(shoe, rng);
        seen.remove_unchecked(card);
        return hand + card;
    }

    // Hits once, then keeps comparing stand with hit.
    void play_hits(Evaluator& ev, Hand hand, Deck& shoe, Deck& seen, Xoshiro256& rng) {
        do {
            hand = draw(shoe, seen, rng, hand);
        } while (hand.total() < 21 && player_can_draw(seen) && ev.hit(hand, seen) > ev.stand(hand, seen));
        hands_.push_back({hand});
    }

    // A post-split two-card hand: stand, hit or (with das) double.
    void play_no_split(Evaluator& ev, Hand hand, Deck& shoe, Deck& seen, Xoshiro256& rng) {
        if (hand.total() >= 21 || !player_can_draw(seen)) {
            hands_.push_back({hand});
            return;
        }
        const double stand = ev.stand(hand, seen);
        const double hit = ev.hit(hand, seen);
        const double dbl = rules_.das ? ev.double_down(hand, seen) : -1e300;
        if (stand >= hit && stand >= dbl) {
            hands_.push_back({hand});
        } else if (hit >= dbl) {
            play_hits(ev, hand, shoe, seen, rng);
        } else {
            hands_.push_back({draw(shoe, seen, rng, hand), 2.0});
        }
    }

    void play_split_hand(Evaluator& ev, int pair_card, Deck& shoe, Deck& seen, Xoshiro256& rng,
                         bool resplit) {
        const int card = draw_card(shoe, rng);
        seen.remove_unchecked(card);
        const Hand hand = Hand::of(pair_card) + card;
        if (resplit && card == pair_card && player_can_draw(seen) &&
            ev.split(pair_card, seen, false) > ev.no_split(hand, seen)) {
            play_split_hand(ev, pair_card, shoe, seen, rng, false);
            play_split_hand(ev, pair_card, shoe, seen, rng, false);
            return;
        }
        play_no_split(ev, hand, shoe, seen, rng);
    }

    void play_split_aces(Evaluator& ev, Deck& shoe, Deck& seen, Xoshiro256& rng, bool resplit) {
        const int card = draw_card(shoe, rng);
        seen.remove_unchecked(card);
        const Hand hand = Hand::of(kAce) + card;
        if (resplit && card == kAce && player_can_draw(seen) &&
            ev.split_aces(seen, false) > ev.stand(hand, seen)) {
            play_split_aces(ev, shoe, seen, rng, false);
            play_split_aces(ev, shoe, seen, rng, false);
            return;
        }
        hands_.push_back({hand});
    }

    Rules rules_;
    std::array<std::unique_ptr<Evaluator>, kNumRanks> evaluators_;
    std::vector<PlayedHand> hands_;
};

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Xoshiro256::next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t Xoshiro256::below(std::uint64_t bound) noexcept {
    // Rejection sampling on the top of the range.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % bound;
}

int draw_card(Deck& deck, Xoshiro256& rng) {
    if (deck.is_infinite()) {
        const auto r = static_cast<int>(rng.below(13));
        return r < 9 ? r + 1 : kTen;
    }
    if (!deck.has_cards(1)) throw EngineError(ErrorCode::empty_deck, "cannot draw from an empty deck");
    auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(deck.total())));
    int k = 1;
    while (r >= deck.count(k)) r -= deck.count(k++);
    deck.remove_unchecked(k);
    return k;
}

double SimReport::frequency(const std::string& label) const {
    for (const auto& [name, f] : freq) {
        if (name == label) return f;
    }
    return 0.0;
}

SimReport simulate_dealer(int d, const Deck& deck, const Rules& rules, std::uint64_t n,
                          std::uint64_t seed) {
    check_card(d);
    check_trials(n);
    Xoshiro256 rng(seed);
    std::array<std::uint64_t, kNumOutcomes> counts{};
    Tally bust;
    SimReport report;
    report.n = n;
    report.seed = seed;
    for (std::uint64_t trial = 0; trial < n; ++trial) {
        Deck shoe = deck;
        if (!shoe.has_cards(1)) {
            ++report.aborted;
            continue;
        }
        const int hole = draw_card(shoe, rng);
        int code;
        if (is_natural(d, hole)) {
            code = kNatural;
        } else {
            const auto outcome = finish_dealer(Hand::of(d) + hole, shoe, rules.dealer_hits_soft17, rng);
            if (!outcome) {
                ++report.aborted;
                continue;
            }
            code = *outcome;
        }
        ++counts[code - 17];
        bust.add(code == kBust ? 1.0 : 0.0);
    }
    const double done = static_cast<double>(bust.count());
    for (int code = 17; code <= kBust; ++code) {
        const std::string label = code == kNatural ? "natural" : code == kBust ? "bust" : std::to_string(code);
        report.freq.emplace_back(label, done > 0 ? counts[code - 17] / done : 0.0);
    }
    report.mean = bust.mean();
    report.std_error = bust.std_error();
    return report;
}

SimReport simulate_round(const Deck& deck, const Rules& rules, std::uint64_t n, std::uint64_t seed) {
    check_trials(n);
    if (!deck.has_cards(4)) throw EngineError(ErrorCode::empty_deck, "a deal needs at least four cards");
    Xoshiro256 rng(seed);
    RoundPlayer player(rules);
    std::map<double, std::uint64_t> counts;
    Tally win;
    SimReport report;
    report.n = n;
    report.seed = seed;
    for (std::uint64_t trial = 0; trial < n; ++trial) {
        const auto result = player.play(deck, rng);
        if (!result) {
            ++report.aborted;
            continue;
        }
        ++counts[*result];
        win.add(*result);
    }
    const double done = static_cast<double>(win.count());
    for (const auto& [value, count] : counts) report.freq.emplace_back(format_win(value), count / done);
    report.mean = win.mean();
    report.std_error = win.std_error();
    return report;
}

}  // namespace blackjack
