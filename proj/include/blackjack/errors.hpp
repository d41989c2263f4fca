#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blackjack {

enum class ErrorCode {
    invalid_argument,
    empty_rank,            // removing a card whose count is already zero
    empty_deck,            // drawing from a deck with too few cards
    degenerate_condition,  // conditioning on an event of probability zero
};

std::string_view to_string(ErrorCode code) noexcept;

class EngineError : public std::runtime_error {
public:
    EngineError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace blackjack
