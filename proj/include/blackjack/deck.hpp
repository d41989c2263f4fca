#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>

#include "blackjack/errors.hpp"

namespace blackjack {

// Card values run 1..10: 1 is an ace, 10 is a ten or any face card.
inline constexpr int kAce = 1;
inline constexpr int kTen = 10;
inline constexpr int kNumRanks = 10;
inline constexpr int kMaxDecks = 255;
inline constexpr int kMaxRankCount = 4095;

void check_card(int k);

using CardProbs = std::array<double, kNumRanks>;  // index k - 1

// Packed deck counts, 12 bits per rank. Identifies a composition for memo
// tables; every infinite deck shares one key.
struct DeckKey {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    friend bool operator==(const DeckKey&, const DeckKey&) = default;
};

struct DeckKeyHash {
    std::size_t operator()(const DeckKey& key) const noexcept {
        std::uint64_t h = key.lo * 0x9E3779B97F4A7C15ull;
        h ^= (key.hi + 0x632BE59BD9B4E019ull) * 0xC2B2AE3D27D4EB4Full;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

/// The unseen cards from the player's viewpoint: dealer upcard and the
/// player's cards are removed, the dealer's hole card is still counted.
///
/// A finite deck tracks ten counts (a1..a10). An infinite deck has constant
/// card probabilities (1/13, tens 4/13) and ignores removals.
class Deck {
public:
    enum class Mode { finite, infinite };

    /// Empty finite deck.
    Deck() = default;

    static Deck standard(int n_decks);
    static Deck infinite();
    static Deck from_counts(std::span<const int> counts);

    Mode mode() const noexcept { return infinite_ ? Mode::infinite : Mode::finite; }
    bool is_infinite() const noexcept { return infinite_; }

    int count(int k) const { return counts_[k - 1]; }
    const std::array<int, kNumRanks>& counts() const noexcept { return counts_; }
    int total() const noexcept { return total_; }

    /// True when n more cards can be drawn.
    bool has_cards(int n) const noexcept { return infinite_ || total_ >= n; }

    void remove(int k);
    void add(int k);

    /// Unchecked removal/addition for hot loops: k is valid and, for
    /// remove, count(k) > 0.
    void remove_unchecked(int k) noexcept {
        if (infinite_) return;
        --counts_[k - 1];
        --total_;
        bump(k, -1);
    }
    void add_unchecked(int k) noexcept {
        if (infinite_) return;
        ++counts_[k - 1];
        ++total_;
        bump(k, +1);
    }

    /// P[k] = a_k / t.
    double prob(int k) const;

    /// Q[k]: probability of the next card given the dealer (upcard d) does
    /// not hold a natural. The hole card is one of the cards in this deck.
    double prob_q(int k, int d) const;

    /// All ten Q probabilities at once.
    CardProbs probs_q(int d) const;

    DeckKey key() const noexcept { return key_; }

    friend bool operator==(const Deck& a, const Deck& b) noexcept {
        return a.infinite_ == b.infinite_ && a.counts_ == b.counts_;
    }

private:
    void bump(int k, int delta) noexcept {
        const int slot = k - 1;
        const auto unit = std::uint64_t{1} << (12 * (slot % 5));
        auto& word = slot < 5 ? key_.lo : key_.hi;
        word = delta > 0 ? word + unit : word - unit;
    }

    std::array<int, kNumRanks> counts_{};
    int total_ = 0;
    bool infinite_ = false;
    DeckKey key_{};
};

// Free-function forms of the deck operations.
Deck new_deck(int n_decks);
Deck remove_card(Deck deck, int k);
Deck add_card(Deck deck, int k);
double card_prob_P(const Deck& deck, int k);
double card_prob_Q(const Deck& deck, int k, int d);

}  // namespace blackjack
