#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "blackjack/dealer.hpp"
#include "blackjack/deck.hpp"
#include "blackjack/expectation.hpp"
#include "blackjack/rules.hpp"
#include "blackjack/simulator.hpp"
#include "blackjack/strategy.hpp"

namespace blackjack {

using Json = nlohmann::json;

/// Malformed input. `field` is a JSON-pointer-like path ("deck.counts[3]").
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Parses text as JSON; syntax errors name `field`.
Json parse_json(const std::string& text, const std::string& field);

// Decks: {"mode":"finite","counts":[a1..a10]}, {"mode":"finite","decks":n}
// or {"mode":"infinite"}.
Deck deck_from_json(const Json& j, const std::string& field = "deck");
Json to_json(const Deck& deck);

// Rules: the mask string "111", or an object with optional keys das, rsa,
// rsp, h17 (booleans) and decks (integer or null). Unknown keys are errors.
Rules rules_from_json(const Json& j, const std::string& field = "rules");
Json to_json(const Rules& rules);

int card_from_json(const Json& j, const std::string& field);
std::vector<int> cards_from_json(const Json& j, const std::string& field);

/// Rejects keys of `j` that are not in `allowed`.
void check_keys(const Json& j, const std::string& field, std::initializer_list<const char*> allowed);

Json to_json(const DealerDist& dist);
Json to_json(const ActionEvaluation& eval);
Json to_json(const GameExpectation& ge);
Json to_json(const RemovalEffects& effects);
RemovalEffects removal_effects_from_json(const Json& j, const std::string& field);
Json to_json(const RemovalTable& table);
RemovalTable removal_table_from_json(const Json& j, const std::string& field = "effects");
Json to_json(const SimReport& report);

}  // namespace blackjack
