#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "blackjack/dealer.hpp"
#include "blackjack/json_io.hpp"

namespace blackjack {

inline constexpr int kAdviceDepth = 4;  // real-time default for /advise

struct ServiceResponse {
    int status = 200;
    Json body;
};

/// JSON endpoints of the advisor service, independent of the transport.
/// Stateless between requests apart from the shared dealer cache; safe to
/// call from several threads at once.
class AdvisorService {
public:
    using Query = std::map<std::string, std::string>;

    ServiceResponse health() const;

    /// {deck, rules, upcard, player_cards[, depth]} -> {evaluation,
    /// dealer_dist_q, is_player_natural[, payout]}. The `depth` query
    /// parameter (0..13) overrides the body; the default is 4.
    ServiceResponse advise(const std::string& body, const Query& query = {});

    /// {deck, rules, upcard[, measure: "P"|"Q"]} -> dealer distribution.
    ServiceResponse dealer_dist(const std::string& body);

    /// {deck, rules[, depth]} -> {ew, per_upcard}.
    ServiceResponse expected_win(const std::string& body);

    /// {deck, rules[, depth]} -> {base_ew, r}.
    ServiceResponse removal_effects(const std::string& body);

    /// Routes by method and path; unknown routes give 404.
    ServiceResponse handle(const std::string& method, const std::string& path, const std::string& body,
                           const Query& query = {});

    const SharedDealerCache& cache() const noexcept { return cache_; }

private:
    SharedDealerCache cache_;
};

/// HTTP front end over httplib.
class HttpServer {
public:
    explicit HttpServer(AdvisorService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds `host:port` (port 0 picks a free port) and returns the port,
    /// or -1 when binding fails.
    int bind(const std::string& host, int port);

    /// Serves until stop() is called from another thread.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace blackjack
