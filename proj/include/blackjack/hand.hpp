#pragma once

#include <compare>

namespace blackjack {

/// Blackjack total with a soft flag. Only (total, soft) is kept; the card
/// list is not. At most one ace counts as 11, and a hand over 21 is hard.
/// A lone ace is soft 11; any soft hand of two or more cards is 12..21.
class Hand {
public:
    constexpr Hand() = default;
    constexpr Hand(int total, bool soft) : total_(total), soft_(soft) {}

    /// Hand holding a single card.
    static constexpr Hand of(int card) { return Hand{} + card; }

    constexpr int total() const noexcept { return total_; }
    constexpr bool soft() const noexcept { return soft_; }
    constexpr bool busted() const noexcept { return total_ > 21; }

    constexpr Hand& operator+=(int card) noexcept {
        if (card == 1 && !soft_ && total_ + 11 <= 21) {
            total_ += 11;
            soft_ = true;
        } else {
            total_ += card;
        }
        if (soft_ && total_ > 21) {
            total_ -= 10;
            soft_ = false;
        }
        return *this;
    }

    friend constexpr Hand operator+(Hand h, int card) noexcept { return h += card; }

    friend constexpr bool operator==(const Hand&, const Hand&) = default;

    friend constexpr std::strong_ordering operator<=>(const Hand& h, int n) noexcept {
        return h.total_ <=> n;
    }
    friend constexpr bool operator==(const Hand& h, int n) noexcept { return h.total_ == n; }

private:
    int total_ = 0;
    bool soft_ = false;
};

constexpr Hand hand_add(Hand h, int card) noexcept { return h + card; }

constexpr std::strong_ordering hand_compare(const Hand& h, int n) noexcept { return h <=> n; }

}  // namespace blackjack
