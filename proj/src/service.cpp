#include "blackjack/service.hpp"

#include <httplib.h>

#include "blackjack/expectation.hpp"
#include "blackjack/strategy.hpp"

namespace blackjack {

namespace {

ServiceResponse error_response(int status, const std::string& code, const Json& field,
                               const std::string& message) {
    return {status, {{"code", code}, {"field", field}, {"message", message}}};
}

// Runs a handler, mapping validation and engine errors to structured bodies.
template <typename F>
ServiceResponse guarded(F&& f) {
    try {
        return {200, f()};
    } catch (const ValidationError& e) {
        return error_response(400, "invalid-request", e.field(), e.what());
    } catch (const EngineError& e) {
        const int status = e.code() == ErrorCode::degenerate_condition ? 422 : 400;
        return error_response(status, std::string(to_string(e.code())), nullptr, e.what());
    }
}

Json parse_body(const std::string& body) {
    Json j = parse_json(body, "body");
    if (!j.is_object()) throw ValidationError("body", "must be a JSON object");
    return j;
}

const Json& require(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(key, "missing required field");
    return *it;
}

Rules rules_field(const Json& j) { return j.contains("rules") ? rules_from_json(j["rules"]) : Rules{}; }

int depth_field(const Json& j, int fallback) {
    auto it = j.find("depth");
    if (it == j.end()) return fallback;
    if (!it->is_number_integer() || it->get<int>() < 0 || it->get<int>() > kDefaultDepth) {
        throw ValidationError("depth", "must be an integer in 0..13");
    }
    return it->get<int>();
}

}  // namespace

ServiceResponse AdvisorService::health() const { return {200, {{"status", "ok"}}}; }

ServiceResponse AdvisorService::advise(const std::string& body, const Query& query) {
    return guarded([&]() -> Json {
        const Json req = parse_body(body);
        check_keys(req, "body", {"deck", "rules", "upcard", "player_cards", "depth"});
        const Deck deck = deck_from_json(require(req, "deck"));
        const Rules rules = rules_field(req);
        const int up = card_from_json(require(req, "upcard"), "upcard");
        const std::vector<int> cards = cards_from_json(require(req, "player_cards"), "player_cards");
        if (cards.size() < 2) throw ValidationError("player_cards", "a hand needs at least two cards");
        int depth = depth_field(req, kAdviceDepth);
        if (auto it = query.find("depth"); it != query.end()) {
            depth = depth_field(Json{{"depth", parse_json(it->second, "depth")}}, depth);
        }

        if (!deck.has_cards(1)) throw EngineError(ErrorCode::empty_deck, "dealer needs a hole card");
        if (natural_certain(up, deck)) {
            throw EngineError(ErrorCode::degenerate_condition, "dealer natural is certain; Q is undefined");
        }
        Json res;
        res["dealer_dist_q"] = to_json(condition_on_no_natural(cache_.dist_P(up, deck, rules.dealer_hits_soft17)));
        const bool natural = cards.size() == 2 && (Hand::of(cards[0]) + cards[1]).total() == 21;
        res["is_player_natural"] = natural;
        if (natural) {
            res["payout"] = Rules::natural_payout;
            return res;
        }
        Evaluator evaluator(up, rules, depth, &cache_);
        res["evaluation"] = to_json(evaluator.best_action(cards, deck));
        res["depth"] = depth;
        return res;
    });
}

ServiceResponse AdvisorService::dealer_dist(const std::string& body) {
    return guarded([&]() -> Json {
        const Json req = parse_body(body);
        check_keys(req, "body", {"deck", "rules", "upcard", "measure"});
        const Deck deck = deck_from_json(require(req, "deck"));
        const Rules rules = rules_field(req);
        const int up = card_from_json(require(req, "upcard"), "upcard");
        const std::string measure = req.value("measure", std::string("Q"));
        if (measure != "P" && measure != "Q") throw ValidationError("measure", "must be \"P\" or \"Q\"");
        if (measure == "P") return to_json(dealer_dist_P(up, deck, rules));
        return to_json(dealer_dist_Q(up, deck, rules));
    });
}

ServiceResponse AdvisorService::expected_win(const std::string& body) {
    return guarded([&]() -> Json {
        const Json req = parse_body(body);
        check_keys(req, "body", {"deck", "rules", "depth"});
        ExpectationOptions options;
        options.depth = depth_field(req, kDefaultDepth);
        return to_json(blackjack::expected_win(deck_from_json(require(req, "deck")), rules_field(req), options));
    });
}

ServiceResponse AdvisorService::removal_effects(const std::string& body) {
    return guarded([&]() -> Json {
        const Json req = parse_body(body);
        check_keys(req, "body", {"deck", "rules", "depth"});
        ExpectationOptions options;
        options.depth = depth_field(req, kDefaultDepth);
        return to_json(blackjack::removal_effects(deck_from_json(require(req, "deck")), rules_field(req), options));
    });
}

ServiceResponse AdvisorService::handle(const std::string& method, const std::string& path,
                                       const std::string& body, const Query& query) {
    if (method == "GET" && path == "/health") return health();
    if (method == "POST") {
        if (path == "/advise") return advise(body, query);
        if (path == "/dealer-dist") return dealer_dist(body);
        if (path == "/expected-win") return expected_win(body);
        if (path == "/removal-effects") return removal_effects(body);
    }
    return error_response(404, "not-found", nullptr, "no route for " + method + " " + path);
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(AdvisorService& service) : impl_(std::make_unique<Impl>()) {
    auto route = [&service](const httplib::Request& req, httplib::Response& res) {
        AdvisorService::Query query;
        for (const auto& [key, value] : req.params) query.emplace(key, value);
        const ServiceResponse out = service.handle(req.method, req.path, req.body, query);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    impl_->server.Get("/health", route);
    for (const char* path : {"/advise", "/dealer-dist", "/expected-win", "/removal-effects"}) {
        impl_->server.Post(path, route);
    }
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace blackjack
