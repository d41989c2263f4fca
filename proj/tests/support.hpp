#pragma once

#include <array>
#include <random>

#include "blackjack/deck.hpp"
#include "oracle.hpp"

namespace testing_support {

inline oracle::Counts to_counts(const blackjack::Deck& deck) {
    oracle::Counts c{};
    for (int k = 1; k <= 10; ++k) c[k] = deck.count(k);
    return c;
}

inline blackjack::Deck to_deck(const oracle::Counts& c) {
    std::array<int, 10> a{};
    for (int k = 1; k <= 10; ++k) a[k - 1] = c[k];
    return blackjack::Deck::from_counts(a);
}

/// Random finite deck with exactly `t` cards. Ranks are drawn with the
/// natural weights of a real shoe (tens four times as likely), so aces and
/// tens show up often enough to exercise the natural conditioning.
inline oracle::Counts random_counts(std::mt19937_64& rng, int t) {
    std::discrete_distribution<int> rank({1, 1, 1, 1, 1, 1, 1, 1, 1, 4});
    oracle::Counts c{};
    for (int n = 0; n < t; ++n) ++c[rank(rng) + 1];
    return c;
}

}  // namespace testing_support
