#include "blackjack/json_io.hpp"

#include <algorithm>
#include <cstring>

namespace blackjack {

namespace {

const Json& require(const Json& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(field + "." + key, "missing required field");
    return *it;
}

bool boolean_field(const Json& j, const char* key, const std::string& field, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) throw ValidationError(field + "." + key, "must be a boolean");
    return it->get<bool>();
}

int int_value(const Json& j, const std::string& field, int lo, int hi) {
    if (!j.is_number_integer()) throw ValidationError(field, "must be an integer");
    const auto v = j.get<long long>();
    if (v < lo || v > hi) {
        throw ValidationError(field, "must be in " + std::to_string(lo) + ".." + std::to_string(hi));
    }
    return static_cast<int>(v);
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json parse_json(const std::string& text, const std::string& field) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(field, std::string("invalid JSON: ") + e.what());
    }
}

void check_keys(const Json& j, const std::string& field, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError(field, "must be an object");
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return key == a; });
        if (!known) throw ValidationError(field + "." + key, "unknown field");
    }
}

Deck deck_from_json(const Json& j, const std::string& field) {
    check_keys(j, field, {"mode", "counts", "decks"});
    const Json& mode = require(j, "mode", field);
    if (mode == "infinite") {
        if (j.contains("counts") || j.contains("decks")) {
            throw ValidationError(field + ".mode", "an infinite deck takes no counts");
        }
        return Deck::infinite();
    }
    if (mode != "finite") throw ValidationError(field + ".mode", "must be \"finite\" or \"infinite\"");
    if (j.contains("counts") == j.contains("decks")) {
        throw ValidationError(field + ".counts", "a finite deck needs exactly one of counts or decks");
    }
    if (j.contains("decks")) return Deck::standard(int_value(j["decks"], field + ".decks", 1, kMaxDecks));
    const Json& counts = j["counts"];
    if (!counts.is_array() || counts.size() != kNumRanks) {
        throw ValidationError(field + ".counts", "must be an array of 10 counts");
    }
    std::array<int, kNumRanks> c{};
    for (int k = 0; k < kNumRanks; ++k) {
        c[k] = int_value(counts[k], field + ".counts[" + std::to_string(k) + "]", 0, kMaxRankCount);
    }
    return Deck::from_counts(c);
}

Json to_json(const Deck& deck) {
    if (deck.is_infinite()) return {{"mode", "infinite"}};
    return {{"mode", "finite"}, {"counts", deck.counts()}};
}

Rules rules_from_json(const Json& j, const std::string& field) {
    if (j.is_string()) {
        try {
            return Rules::from_bits(j.get<std::string>());
        } catch (const EngineError& e) {
            throw ValidationError(field, e.what());
        }
    }
    check_keys(j, field, {"das", "rsa", "rsp", "h17", "decks"});
    Rules rules;
    rules.das = boolean_field(j, "das", field, rules.das);
    rules.rsa = boolean_field(j, "rsa", field, rules.rsa);
    rules.rsp = boolean_field(j, "rsp", field, rules.rsp);
    rules.dealer_hits_soft17 = boolean_field(j, "h17", field, rules.dealer_hits_soft17);
    if (auto it = j.find("decks"); it != j.end() && !it->is_null()) {
        rules.n_decks = int_value(*it, field + ".decks", 1, kMaxDecks);
    }
    return rules;
}

Json to_json(const Rules& rules) {
    return {{"das", rules.das},
            {"rsa", rules.rsa},
            {"rsp", rules.rsp},
            {"h17", rules.dealer_hits_soft17},
            {"decks", rules.n_decks ? Json(*rules.n_decks) : Json(nullptr)}};
}

int card_from_json(const Json& j, const std::string& field) { return int_value(j, field, 1, kNumRanks); }

std::vector<int> cards_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError(field, "must be an array of card values");
    std::vector<int> cards;
    for (std::size_t i = 0; i < j.size(); ++i) {
        cards.push_back(card_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return cards;
}

Json to_json(const DealerDist& dist) {
    Json j{{"measure", dist.measure == Measure::P ? "P" : "Q"}};
    for (int e = 17; e <= 21; ++e) j[std::to_string(e)] = dist[e];
    j["natural"] = dist[kNatural];
    j["bust"] = dist[kBust];
    return j;
}

Json to_json(const ActionEvaluation& eval) {
    return {{"stand", eval.ev_stand},
            {"hit", optional_number(eval.ev_hit)},
            {"double", optional_number(eval.ev_double)},
            {"split", optional_number(eval.ev_split)},
            {"best", std::string(to_string(eval.best))},
            {"best_ev", eval.best_ev()}};
}

Json to_json(const GameExpectation& ge) {
    Json per = Json::object();
    for (int d = 1; d <= kNumRanks; ++d) {
        per[std::to_string(d)] = {{"prob", ge.upcard_prob[d - 1]}, {"ew", ge.per_upcard[d - 1]}};
    }
    return {{"ew", ge.ew}, {"per_upcard", per}};
}

Json to_json(const RemovalEffects& effects) {
    Json r = Json::object();
    for (int i = 1; i <= kNumRanks; ++i) r[std::to_string(i)] = optional_number(effects.r[i - 1]);
    return {{"base_ew", effects.base_ew}, {"r", r}};
}

RemovalEffects removal_effects_from_json(const Json& j, const std::string& field) {
    check_keys(j, field, {"base_ew", "r"});
    RemovalEffects effects;
    const Json& base = require(j, "base_ew", field);
    if (!base.is_number()) throw ValidationError(field + ".base_ew", "must be a number");
    effects.base_ew = base.get<double>();
    const Json& r = require(j, "r", field);
    if (!r.is_object()) throw ValidationError(field + ".r", "must be an object keyed by card value");
    for (const auto& [key, value] : r.items()) {
        const std::string at = field + ".r." + key;
        int card = 0;
        try {
            card = std::stoi(key);
        } catch (const std::exception&) {
            throw ValidationError(at, "key must be a card value");
        }
        if (card < 1 || card > kNumRanks || std::to_string(card) != key) {
            throw ValidationError(at, "key must be a card value 1..10");
        }
        if (value.is_null()) continue;
        if (!value.is_number()) throw ValidationError(at, "must be a number or null");
        effects.r[card - 1] = value.get<double>();
    }
    return effects;
}

Json to_json(const RemovalTable& table) {
    Json columns = Json::object();
    for (const auto& [n, effects] : table.columns()) columns[std::to_string(n)] = to_json(effects);
    return {{"columns", columns}};
}

RemovalTable removal_table_from_json(const Json& j, const std::string& field) {
    check_keys(j, field, {"columns"});
    const Json& columns = require(j, "columns", field);
    if (!columns.is_object() || columns.empty()) {
        throw ValidationError(field + ".columns", "must be a non-empty object keyed by deck count");
    }
    RemovalTable table;
    for (const auto& [key, value] : columns.items()) {
        const std::string at = field + ".columns." + key;
        int n = 0;
        try {
            n = std::stoi(key);
        } catch (const std::exception&) {
            throw ValidationError(at, "key must be a deck count");
        }
        if (n < 1 || std::to_string(n) != key) throw ValidationError(at, "key must be a deck count >= 1");
        try {
            table.add(n, removal_effects_from_json(value, at));
        } catch (const EngineError& e) {
            throw ValidationError(at, e.what());
        }
    }
    return table;
}

Json to_json(const SimReport& report) {
    Json freq = Json::object();
    Json order = Json::array();
    for (const auto& [label, f] : report.freq) {
        freq[label] = f;
        order.push_back(label);
    }
    return {{"n", report.n},       {"aborted", report.aborted}, {"seed", report.seed},
            {"freq", freq},        {"outcomes", order},         {"mean", report.mean},
            {"stderr", report.std_error}};
}

}  // namespace blackjack
