#include "blackjack/expectation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "blackjack/dealer.hpp"

namespace blackjack {

namespace {

// Runs task(d) for every upcard d = 1..10 on up to `threads` workers. Each
// task writes only its own slot, so the caller's reduction order is fixed.
void for_each_upcard(int threads, const std::function<void(int)>& task) {
    const int workers = std::clamp(threads, 1, kNumRanks);
    if (workers == 1) {
        for (int d = 1; d <= kNumRanks; ++d) task(d);
        return;
    }
    std::atomic<int> next{1};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (int d = next++; d <= kNumRanks; d = next++) {
            try {
                task(d);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void check_options(const ExpectationOptions& options) {
    if (options.depth < 0) throw EngineError(ErrorCode::invalid_argument, "recursion depth must be >= 0");
    if (options.threads < 1) throw EngineError(ErrorCode::invalid_argument, "threads must be >= 1");
}

void check_deal_possible(const Deck& deck) {
    // Upcard, hole card and two player cards.
    if (!deck.has_cards(4)) {
        throw EngineError(ErrorCode::empty_deck, "a deal needs at least four cards");
    }
}

// Expected win of the two-card hand i+j against upcard d; `deck` excludes
// both cards and the upcard.
double hand_value(Evaluator& evaluator, int i, int j, const Deck& deck) {
    if ((i == kAce && j == kTen) || (i == kTen && j == kAce)) return Rules::natural_payout;
    return evaluator.best_action(i, j, deck).best_ev();
}

// Sum over player pairs of Q[i,j] * E[W_d | i+j]. `deck` excludes the
// upcard and is modified temporarily.
double player_pair_sum(Evaluator& evaluator, Deck& deck) {
    const int d = evaluator.upcard();
    const CardProbs qi = deck.probs_q(d);
    std::array<std::array<double, kNumRanks>, kNumRanks> weight{};  // unordered, [min][max]
    for (int i = 1; i <= kNumRanks; ++i) {
        if (qi[i - 1] <= 0.0) continue;
        deck.remove_unchecked(i);
        const CardProbs qj = deck.probs_q(d);
        deck.add_unchecked(i);
        for (int j = 1; j <= kNumRanks; ++j) {
            const double w = qi[i - 1] * qj[j - 1];
            if (w > 0.0) weight[std::min(i, j) - 1][std::max(i, j) - 1] += w;
        }
    }
    double total = 0.0;
    for (int i = 1; i <= kNumRanks; ++i) {
        for (int j = i; j <= kNumRanks; ++j) {
            const double w = weight[i - 1][j - 1];
            if (w <= 0.0) continue;
            deck.remove_unchecked(i);
            deck.remove_unchecked(j);
            total += w * hand_value(evaluator, i, j, deck);
            deck.add_unchecked(j);
            deck.add_unchecked(i);
        }
    }
    return total;
}

}  // namespace

double pair_prob_Q(int i, int j, int d, const Deck& deck) {
    check_card(i);
    check_card(j);
    check_card(d);
    const double qi = deck.prob_q(i, d);
    if (qi <= 0.0) return 0.0;
    Deck rest = deck;
    rest.remove(i);
    return qi * rest.prob_q(j, d);
}

double natural_pair_prob(const Deck& deck) {
    if (deck.is_infinite()) return 2.0 * deck.prob(kAce) * deck.prob(kTen);
    const double t = deck.total();
    if (t < 2) return 0.0;
    return 2.0 * deck.count(kAce) * deck.count(kTen) / (t * (t - 1.0));
}

double expected_win_upcard(Evaluator& evaluator, const Deck& deck) {
    const int d = evaluator.upcard();
    // Hole card plus the player's two cards.
    if (!deck.has_cards(3)) {
        throw EngineError(ErrorCode::empty_deck, "need the hole card and two player cards");
    }
    Deck work = deck;
    if (d != kAce && d != kTen) return player_pair_sum(evaluator, work);

    const double p_natural = natural_prob(deck, d);
    double loss = 0.0;
    if (p_natural > 0.0) {
        // The dealer's natural takes the hole card; the player only pushes
        // with a natural of their own.
        Deck rest = deck;
        rest.remove(d == kAce ? kTen : kAce);
        loss = -p_natural * (1.0 - natural_pair_prob(rest));
    }
    if (natural_certain(d, deck)) return loss;
    return loss + (1.0 - p_natural) * player_pair_sum(evaluator, work);
}

double expected_win_upcard(int d, const Deck& deck, const Rules& rules,
                           const ExpectationOptions& options) {
    check_options(options);
    Evaluator evaluator(d, rules, options.depth);
    return expected_win_upcard(evaluator, deck);
}

GameExpectation expected_win(const Deck& deck, const Rules& rules, const ExpectationOptions& options) {
    check_options(options);
    check_deal_possible(deck);
    GameExpectation result;
    for_each_upcard(options.threads, [&](int d) {
        const double p = deck.prob(d);
        result.upcard_prob[d - 1] = p;
        if (p <= 0.0) return;
        Evaluator evaluator(d, rules, options.depth);
        Deck rest = deck;
        rest.remove(d);
        result.per_upcard[d - 1] = expected_win_upcard(evaluator, rest);
    });
    for (int d = 1; d <= kNumRanks; ++d) result.ew += result.upcard_prob[d - 1] * result.per_upcard[d - 1];
    return result;
}

RemovalEffects removal_effects(const Deck& deck, const Rules& rules, const ExpectationOptions& options) {
    check_options(options);
    if (deck.is_infinite()) {
        throw EngineError(ErrorCode::invalid_argument, "removal effects need a finite deck");
    }
    // Variant 0 is the deck itself, variant i is the deck minus one i.
    std::array<std::optional<Deck>, kNumRanks + 1> variants;
    variants[0] = deck;
    for (int i = 1; i <= kNumRanks; ++i) {
        if (deck.count(i) > 0) variants[i] = remove_card(deck, i);
    }
    for (const auto& v : variants) {
        if (v) check_deal_possible(*v);
    }

    // contribution[d - 1][v] = P_v[d] * E_v[W_d]. One evaluator per upcard
    // serves every variant: the decks reached from neighbouring variants
    // overlap heavily, so the memo tables are shared.
    std::array<std::array<double, kNumRanks + 1>, kNumRanks> contribution{};
    for_each_upcard(options.threads, [&](int d) {
        Evaluator evaluator(d, rules, options.depth);
        for (std::size_t v = 0; v < variants.size(); ++v) {
            if (!variants[v] || variants[v]->count(d) == 0) continue;
            const double p = variants[v]->prob(d);
            Deck rest = *variants[v];
            rest.remove(d);
            contribution[d - 1][v] = p * expected_win_upcard(evaluator, rest);
        }
    });

    std::array<double, kNumRanks + 1> ew{};
    for (std::size_t v = 0; v < variants.size(); ++v) {
        for (int d = 1; d <= kNumRanks; ++d) ew[v] += contribution[d - 1][v];
    }
    RemovalEffects effects;
    effects.base_ew = ew[0];
    for (int i = 1; i <= kNumRanks; ++i) {
        if (variants[i]) effects.r[i - 1] = ew[i] - ew[0];
    }
    return effects;
}

void RemovalTable::add(int n_decks, const RemovalEffects& effects) {
    if (n_decks < 1) throw EngineError(ErrorCode::invalid_argument, "deck count must be >= 1");
    for (int i = 1; i <= kNumRanks; ++i) {
        if (!effects.r[i - 1]) {
            throw EngineError(ErrorCode::invalid_argument, "a table column needs all ten effects");
        }
    }
    columns_[n_decks] = effects;
}

double RemovalTable::effect(int card, double n_decks) const {
    check_card(card);
    if (columns_.empty()) throw EngineError(ErrorCode::invalid_argument, "removal table is empty");
    auto value = [card](const auto& column) { return *column.second.r[card - 1]; };
    if (columns_.size() == 1) return value(*columns_.begin());

    // Pick the bracketing pair, or the two nearest columns at either end.
    auto hi = columns_.lower_bound(static_cast<int>(std::ceil(n_decks)));
    if (hi == columns_.end()) hi = std::prev(columns_.end());
    if (hi == columns_.begin()) hi = std::next(hi);
    if (hi->first == n_decks) return value(*hi);
    const auto lo = std::prev(hi);
    const double x0 = lo->first;
    const double x1 = hi->first;
    const double t = (n_decks - x0) / (x1 - x0);
    return value(*lo) + t * (value(*hi) - value(*lo));
}

double estimate_ew(const Deck& deck, std::span<const int> removed, const RemovalTable& table,
                   double base_ew) {
    if (deck.is_infinite()) {
        throw EngineError(ErrorCode::invalid_argument, "the estimate needs a finite deck");
    }
    const double n = deck.total() / 52.0;
    std::array<int, kNumRanks> taken{};
    double estimate = base_ew;
    for (int card : removed) {
        check_card(card);
        const int a = deck.count(card);
        const int m = ++taken[card - 1];
        if (m > a) {
            throw EngineError(ErrorCode::empty_rank, "removed more cards of value " +
                                                         std::to_string(card) + " than the deck holds");
        }
        estimate += table.effect(card, n * (a - m + 1) / a);
    }
    return estimate;
}

}  // namespace blackjack
