#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "blackjack/dealer.hpp"
#include "blackjack/format.hpp"
#include "reference_values.hpp"
#include "support.hpp"

using namespace blackjack;
using doctest::Approx;
using testing_support::random_counts;
using testing_support::to_counts;
using testing_support::to_deck;

namespace {

Rules s17() { return Rules{}; }
Rules h17() {
    Rules r;
    r.dealer_hits_soft17 = true;
    return r;
}

// Sum of ordered draw probabilities over every card sequence whose values
// add up to exactly `a` (aces count 1).
double compositions(int a, oracle::Counts deck) {
    if (a == 0) return 1.0;
    const int t = oracle::size(deck);
    double total = 0.0;
    for (int k = 1; k <= std::min(a, 10); ++k) {
        if (deck[k] == 0) continue;
        const double p = static_cast<double>(deck[k]) / t;
        --deck[k];
        total += p * compositions(a - k, deck);
        ++deck[k];
    }
    return total;
}

// Composition of a followed by a composition of b, both drawn from one deck.
double compositions2(int a, int b, oracle::Counts deck) {
    if (a == 0) return compositions(b, deck);
    const int t = oracle::size(deck);
    double total = 0.0;
    for (int k = 1; k <= std::min(a, 10); ++k) {
        if (deck[k] == 0) continue;
        const double p = static_cast<double>(deck[k]) / t;
        --deck[k];
        total += p * compositions2(a - k, b, deck);
        ++deck[k];
    }
    return total;
}

// Probability that the dealer, starting from `cards`, ever holds
// (total e, soft flag) while following the drawing rule.
double passes_through(oracle::Cards cards, int e, bool want_soft, oracle::Counts deck, bool hits17) {
    const int v = oracle::value(cards);
    const bool s = oracle::soft(cards);
    if (v == e && s == want_soft) return 1.0;
    if (v > 21) return 0.0;
    const bool draws = v < 17 || (hits17 && s && v == 17);
    if (!draws) return 0.0;
    const int t = oracle::size(deck);
    double total = 0.0;
    for (int k = 1; k <= 10; ++k) {
        if (deck[k] == 0) continue;
        const double p = static_cast<double>(deck[k]) / t;
        --deck[k];
        total += p * passes_through(oracle::plus(cards, k), e, want_soft, deck, hits17);
        ++deck[k];
    }
    return total;
}

// Start cards with a given hard total (cards 2..10 only) or soft total.
oracle::Cards hard_start(int total) {
    oracle::Cards c;
    while (total > 10) {
        c.push_back(10);
        total -= 10;
    }
    if (total > 0) c.push_back(total);
    return c;
}

oracle::Cards soft_start(int total) {
    oracle::Cards c{1};
    if (total > 11) c.push_back(total - 11);
    return c;
}

void check_matches_oracle(const DealerDist& dist, const std::array<double, 24>& expected, double tol) {
    for (int code = 17; code <= 23; ++code) CHECK(std::abs(dist[code] - expected[code]) <= tol);
}

}  // namespace

TEST_CASE("natural_prob examples") {
    CHECK(natural_prob(remove_card(new_deck(1), 10), 10) == Approx(4.0 / 51).epsilon(1e-15));
    CHECK(natural_prob(remove_card(new_deck(1), 1), 1) == Approx(16.0 / 51).epsilon(1e-15));
    CHECK(natural_prob(new_deck(1), 6) == 0.0);
    CHECK_THROWS_AS(natural_prob(Deck{}, 10), EngineError);
}

TEST_CASE("comp_prob and comp_prob2 agree with ordered enumeration") {
    const Deck one = new_deck(1);
    CHECK(comp_prob(0, one) == 1.0);
    CHECK(comp_prob(1, one) == Approx(4.0 / 52).epsilon(1e-15));
    for (int a = 0; a <= 6; ++a) CHECK(comp_prob(a, one) == Approx(compositions(a, to_counts(one))).epsilon(1e-14));
    for (int a = 0; a <= 5; ++a) {
        for (int b = 0; b <= 5; ++b) {
            CHECK(comp_prob2(a, b, one) == Approx(compositions2(a, b, to_counts(one))).epsilon(1e-14));
        }
    }
    CHECK(comp_prob2(0, 3, one) == Approx(comp_prob(3, one)).epsilon(1e-15));
    CHECK(comp_prob2(1, 1, Deck::infinite()) == Approx(1.0 / 169).epsilon(1e-15));
    CHECK_THROWS_AS(comp_prob(7, one), EngineError);
    CHECK_THROWS_AS(comp_prob2(6, 0, one), EngineError);
}

TEST_CASE("reach_hard base cases and tiny deck") {
    const Deck one = new_deck(1);
    CHECK(reach_hard(10, 10, one) == 1.0);
    CHECK(reach_hard(16, 17, one) == 0.0);
    CHECK(reach_hard(13, 16, Deck::from_counts(std::array<int, 10>{0, 0, 1, 0, 0, 0, 0, 0, 0, 0})) ==
          Approx(1.0).epsilon(1e-15));
}

TEST_CASE("reach probabilities agree with a forward walk of dealer draws") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const bool hits17 = trial % 2 == 1;
        const auto counts = trial < 4 ? to_counts(new_deck(1)) : random_counts(rng, 3 + trial % 6);
        const Deck deck = to_deck(counts);
        for (int d = 2; d <= 10; ++d) {
            for (int e = d; e <= 17; ++e) {
                if (e == d + 1) continue;  // literal base case, see reach_hard
                const double hard = passes_through(hard_start(d), e, false, counts, hits17);
                CHECK(reach_hard(d, e, deck, hits17) == Approx(hard).epsilon(1e-12));
            }
            for (int e = 12; e <= 17; ++e) {
                const double soft = passes_through(hard_start(d), e, true, counts, hits17);
                CHECK(reach_soft(d, e, deck, hits17) == Approx(soft).epsilon(1e-12));
                const double both = passes_through(hard_start(d), e, false, counts, hits17);
                CHECK(reach_17(d, e, deck, hits17) == Approx(soft + both).epsilon(1e-12));
            }
        }
        for (int s = 12; s <= 16; ++s) {
            for (int e = 12; e <= 17; ++e) {
                const double expected = passes_through(soft_start(s), e, false, counts, hits17);
                CHECK(soft_to_hard(s, e, deck, hits17) == Approx(expected).epsilon(1e-12));
            }
        }
        for (int e = 12; e <= 17; ++e) {
            const double soft = passes_through({1}, e, true, counts, hits17);
            CHECK(reach_soft(Hand::of(1), e, deck, hits17) == Approx(soft).epsilon(1e-12));
        }
    }
}

TEST_CASE("reach_soft without aces is zero and reach_17 reduces to reach_hard") {
    const Deck no_aces = Deck::from_counts(std::array<int, 10>{0, 4, 4, 4, 4, 4, 4, 4, 4, 16});
    for (int e = 12; e <= 17; ++e) CHECK(reach_soft(11, e, no_aces) == 0.0);
    for (int d = 2; d <= 10; ++d) {
        for (int e = d + 2; e <= 17; ++e) CHECK(reach_17(d, e, no_aces) == reach_hard(d, e, no_aces));
    }
}

TEST_CASE("dealer_outcome_prob on a deck of tens") {
    const Deck tens = Deck::from_counts(std::array<int, 10>{0, 0, 0, 0, 0, 0, 0, 0, 0, 5});
    CHECK(dealer_outcome_prob(10, 20, tens, s17()) == Approx(1.0).epsilon(1e-15));
    CHECK(dealer_outcome_prob(10, 19, tens, s17()) == 0.0);
}

TEST_CASE("one deck, stand on soft 17: Q rows for 6 and ace") {
    const std::array<int, 6> codes{17, 18, 19, 20, 21, 23};
    for (const auto& row : reference::kDealerTable) {
        if (row.upcard != 6 && row.upcard != 1) continue;
        const DealerDist q = dealer_dist_Q(row.upcard, remove_card(new_deck(1), row.upcard), s17());
        for (std::size_t c = 0; c < codes.size(); ++c) {
            CAPTURE(row.upcard);
            CAPTURE(codes[c]);
            CHECK(reference::printed_match(q[codes[c]], row.q[c], 5));
        }
    }
}

TEST_CASE("forward, backward and brute-force distributions agree") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        const Rules rules = trial % 2 == 0 ? s17() : h17();
        const int t = 1 + static_cast<int>(rng() % 8);
        const auto counts = random_counts(rng, t);
        const Deck deck = to_deck(counts);
        for (int d = 1; d <= 10; ++d) {
            const auto expected = oracle::dealer_P(d, counts, rules.dealer_hits_soft17);
            check_matches_oracle(dealer_dist_P(d, deck, rules), expected, 1e-12);
            check_matches_oracle(dealer_dist_P_backward(d, deck, rules), expected, 1e-12);
        }
    }
    for (const Rules& rules : {s17(), h17()}) {
        for (int d = 1; d <= 10; ++d) {
            const Deck deck = remove_card(new_deck(1), d);
            const DealerDist fwd = dealer_dist_P(d, deck, rules);
            const DealerDist bwd = dealer_dist_P_backward(d, deck, rules);
            for (int code = 17; code <= 23; ++code) CHECK(fwd[code] == Approx(bwd[code]).epsilon(1e-12));
        }
    }
}

TEST_CASE("distribution invariants") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const Rules rules = trial % 2 == 0 ? s17() : h17();
        const Deck deck = trial < 20 ? Deck::infinite() : to_deck(random_counts(rng, 2 + static_cast<int>(rng() % 40)));
        for (int d = 1; d <= 10; ++d) {
            const DealerDist p = dealer_dist_P(d, deck, rules);
            CHECK(p.measure == Measure::P);
            CHECK(p.sum() == Approx(1.0).epsilon(1e-12));
            for (double x : p.probs) CHECK(x >= 0.0);
            if (d != 1 && d != 10) CHECK(p[kNatural] == 0.0);
            if (natural_certain(d, deck)) {
                CHECK_THROWS_AS(dealer_dist_Q(d, deck, rules), EngineError);
                continue;
            }
            const DealerDist q = dealer_dist_Q(d, deck, rules);
            CHECK(q.measure == Measure::Q);
            CHECK(q[kNatural] == 0.0);
            CHECK(q.sum() == Approx(1.0).epsilon(1e-12));
            for (double x : q.probs) CHECK(x >= 0.0);
            if (d != 1 && d != 10) {
                for (int code = 17; code <= 23; ++code) CHECK(q[code] == p[code]);
            }
        }
    }
}

TEST_CASE("degenerate and empty decks") {
    const Deck aces = Deck::from_counts(std::array<int, 10>{3, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    try {
        (void)dealer_dist_Q(10, aces, s17());
        FAIL("expected a degenerate-condition error");
    } catch (const EngineError& e) {
        CHECK(e.code() == ErrorCode::degenerate_condition);
    }
    CHECK(natural_certain(10, aces));
    CHECK_FALSE(natural_certain(6, aces));
    CHECK_THROWS_AS(dealer_dist_P(6, Deck{}, s17()), EngineError);
}

TEST_CASE("dealer distributions on large shoes") {
    // Dealer mass on 17..23 only, and the natural carved out of 21.
    const Deck eight = remove_card(new_deck(8), 10);
    const DealerDist p = dealer_dist_P(10, eight, s17());
    CHECK(p[kNatural] == Approx(32.0 / 415).epsilon(1e-14));
    CHECK(p.sum() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shared cache returns identical distributions") {
    SharedDealerCache cache;
    const Deck deck = remove_card(new_deck(2), 9);
    const DealerDist a = cache.dist_P(9, deck, false);
    const DealerDist b = cache.dist_P(9, deck, false);
    const DealerDist c = dealer_dist_P(9, deck, s17());
    CHECK(cache.size() == 1);
    for (int code = 17; code <= 23; ++code) {
        CHECK(a[code] == b[code]);
        CHECK(a[code] == c[code]);
    }
    (void)cache.dist_P(9, deck, true);
    CHECK(cache.size() == 2);
}

TEST_CASE("dealer graph sizes depend only on the upcard and rule") {
    CHECK(dealer_graph(6, false).size() == dealer_graph(6, false).size());
    CHECK(&dealer_graph(6, false) == &dealer_graph(6, false));
    CHECK(dealer_graph(6, true).size() >= dealer_graph(6, false).size());
}
