#include "blackjack/deck.hpp"

#include <string>

namespace blackjack {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::empty_rank: return "empty-rank";
        case ErrorCode::empty_deck: return "empty-deck";
        case ErrorCode::degenerate_condition: return "degenerate-condition";
    }
    return "unknown";
}

void check_card(int k) {
    if (k < 1 || k > kNumRanks) {
        throw EngineError(ErrorCode::invalid_argument,
                          "card value must be in 1..10, got " + std::to_string(k));
    }
}

namespace {

constexpr double kInfiniteProb = 1.0 / 13.0;
constexpr double kInfiniteTenProb = 4.0 / 13.0;

double infinite_prob(int k) { return k == kTen ? kInfiniteTenProb : kInfiniteProb; }

}  // namespace

Deck Deck::standard(int n_decks) {
    if (n_decks < 1 || n_decks > kMaxDecks) {
        throw EngineError(ErrorCode::invalid_argument,
                          "number of decks must be in 1.." + std::to_string(kMaxDecks));
    }
    std::array<int, kNumRanks> counts;
    counts.fill(4 * n_decks);
    counts[kTen - 1] = 16 * n_decks;
    return from_counts(counts);
}

Deck Deck::infinite() {
    Deck deck;
    deck.infinite_ = true;
    deck.key_ = {~std::uint64_t{0}, ~std::uint64_t{0}};
    return deck;
}

Deck Deck::from_counts(std::span<const int> counts) {
    if (counts.size() != kNumRanks) {
        throw EngineError(ErrorCode::invalid_argument, "deck needs exactly 10 counts");
    }
    Deck deck;
    for (int k = 1; k <= kNumRanks; ++k) {
        const int n = counts[k - 1];
        if (n < 0 || n > kMaxRankCount) {
            throw EngineError(ErrorCode::invalid_argument,
                              "count for card " + std::to_string(k) + " out of range");
        }
        deck.counts_[k - 1] = n;
        deck.total_ += n;
        auto& word = k <= 5 ? deck.key_.lo : deck.key_.hi;
        word |= static_cast<std::uint64_t>(n) << (12 * ((k - 1) % 5));
    }
    return deck;
}

void Deck::remove(int k) {
    check_card(k);
    if (infinite_) return;
    if (counts_[k - 1] == 0) {
        throw EngineError(ErrorCode::empty_rank,
                          "no card of value " + std::to_string(k) + " left in the deck");
    }
    remove_unchecked(k);
}

void Deck::add(int k) {
    check_card(k);
    if (infinite_) return;
    if (counts_[k - 1] == kMaxRankCount) {
        throw EngineError(ErrorCode::invalid_argument, "rank count overflow");
    }
    add_unchecked(k);
}

double Deck::prob(int k) const {
    check_card(k);
    if (infinite_) return infinite_prob(k);
    if (total_ == 0) throw EngineError(ErrorCode::empty_deck, "deck is empty");
    return static_cast<double>(counts_[k - 1]) / total_;
}

double Deck::prob_q(int k, int d) const {
    check_card(k);
    check_card(d);
    if (infinite_ || (d != kAce && d != kTen)) return prob(k);
    return probs_q(d)[k - 1];
}

CardProbs Deck::probs_q(int d) const {
    CardProbs q{};
    if (infinite_) {
        for (int k = 1; k <= kNumRanks; ++k) q[k - 1] = infinite_prob(k);
        return q;
    }
    const int t = total_;
    if (d != kAce && d != kTen) {
        if (t == 0) throw EngineError(ErrorCode::empty_deck, "deck is empty");
        for (int k = 1; k <= kNumRanks; ++k) q[k - 1] = static_cast<double>(counts_[k - 1]) / t;
        return q;
    }
    // The hole card must not complete a natural: for a ten upcard it is not
    // an ace, for an ace upcard it is not a ten.
    if (t < 2) {
        throw EngineError(ErrorCode::empty_deck,
                          "need the hole card plus one more card in the deck");
    }
    const int excluded = d == kTen ? kAce : kTen;
    const int others = t - counts_[excluded - 1];
    if (others == 0) {
        throw EngineError(ErrorCode::degenerate_condition,
                          "dealer natural is certain; Q is undefined");
    }
    const double scale = static_cast<double>(others - 1) / others;
    for (int k = 1; k <= kNumRanks; ++k) {
        const double base = static_cast<double>(counts_[k - 1]) / (t - 1);
        q[k - 1] = k == excluded ? base : base * scale;
    }
    return q;
}

Deck new_deck(int n_decks) { return Deck::standard(n_decks); }

Deck remove_card(Deck deck, int k) {
    deck.remove(k);
    return deck;
}

Deck add_card(Deck deck, int k) {
    deck.add(k);
    return deck;
}

double card_prob_P(const Deck& deck, int k) { return deck.prob(k); }

double card_prob_Q(const Deck& deck, int k, int d) { return deck.prob_q(k, d); }

}  // namespace blackjack
