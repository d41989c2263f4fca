#include "blackjack/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blackjack/dealer.hpp"
#include "blackjack/expectation.hpp"
#include "blackjack/format.hpp"
#include "blackjack/json_io.hpp"
#include "blackjack/service.hpp"
#include "blackjack/simulator.hpp"
#include "blackjack/strategy.hpp"

namespace blackjack {

namespace {

// Upcards in table order.
constexpr int kTableUpcards[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 1};

Deck parse_decks(const std::string& text) {
    if (text == "inf" || text == "infinite") return Deck::infinite();
    std::size_t used = 0;
    int n = 0;
    try {
        n = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || n < 1 || n > kMaxDecks) {
        throw ValidationError("--decks", "must be a deck count 1.." + std::to_string(kMaxDecks) + " or inf");
    }
    return Deck::standard(n);
}

Rules parse_rule_bits(const std::string& bits, bool h17) {
    Rules rules;
    try {
        rules = Rules::from_bits(bits);
    } catch (const EngineError& e) {
        throw ValidationError("--rules", e.what());
    }
    rules.dealer_hits_soft17 = h17;
    return rules;
}

std::vector<int> parse_card_list(const std::string& text, const std::string& field) {
    std::vector<int> cards;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int card = 0;
        try {
            card = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || card < 1 || card > kNumRanks) {
            throw ValidationError(field, "expected comma-separated card values 1..10, got '" + item + "'");
        }
        cards.push_back(card);
    }
    return cards;
}

// Inline JSON, or "@path" to read it from a file.
Json read_json_arg(const std::string& text, const std::string& field) {
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw ValidationError(field, "cannot read file " + text.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_json(buf.str(), field);
    }
    return parse_json(text, field);
}

// A bare mask such as 111 is accepted as well as rules JSON.
Rules parse_rules_arg(const std::string& text) {
    if (text.size() == 3 && text.find_first_not_of("01") == std::string::npos) return Rules::from_bits(text);
    return rules_from_json(read_json_arg(text, "rules"), "rules");
}

std::string table_value(double x, bool full, int digits) {
    return full ? format_full(x) : format_truncated(x, digits);
}

struct TableOptions {
    std::string decks = "1";
    bool s17 = false;
    bool h17 = false;
    std::string rules = "111";
    int depth = kDefaultDepth;
    bool full = false;
};

void add_deck_options(CLI::App* app, TableOptions& o, bool with_rules) {
    app->add_option("--decks", o.decks, "number of decks, or inf")->capture_default_str();
    auto* s17 = app->add_flag("--s17", o.s17, "dealer stands on soft 17 (default)");
    auto* h17 = app->add_flag("--h17", o.h17, "dealer hits soft 17");
    s17->excludes(h17);
    if (with_rules) {
        app->add_option("--rules", o.rules, "das/rsa/rsp mask, e.g. 111")->capture_default_str();
        app->add_option("--depth", o.depth, "hit recursion depth")->capture_default_str()->check(
            CLI::Range(0, 64));
    }
}

void dealer_table(const TableOptions& o, const std::string& measure, std::ostream& out) {
    const Deck shoe = parse_decks(o.decks);
    Rules rules;
    rules.dealer_hits_soft17 = o.h17;
    const bool q = measure == "Q";
    out << (q ? "upcard,17,18,19,20,21,bust\n" : "upcard,17,18,19,20,21,natural,bust\n");
    for (int d : kTableUpcards) {
        const Deck deck = remove_card(shoe, d);
        const DealerDist dist = q ? dealer_dist_Q(d, deck, rules) : dealer_dist_P(d, deck, rules);
        out << d;
        for (int e = 17; e <= kBust; ++e) {
            if (q && e == kNatural) continue;
            out << ',' << table_value(dist[e], o.full, 5);
        }
        out << '\n';
    }
}

void ev_table(const TableOptions& o, int up, std::ostream& out) {
    const Deck shoe = remove_card(parse_decks(o.decks), up);
    Evaluator ev(up, parse_rule_bits(o.rules, o.h17), o.depth);
    auto cell = [&](const std::optional<double>& v) { return v ? table_value(*v, o.full, 6) : std::string(); };
    out << "hand,stand,hit,double,split,action\n";
    for (int i = 1; i <= kNumRanks; ++i) {
        for (int j = i; j <= kNumRanks; ++j) {
            Deck deck = shoe;
            try {
                deck.remove(i);
                deck.remove(j);
            } catch (const EngineError&) {
                continue;  // the shoe cannot deal this hand
            }
            out << i << '+' << j << ',';
            if (i == kAce && j == kTen) {
                // A natural is paid at once; hit and double are shown for
                // reference only.
                const Hand hand = Hand::of(i) + j;
                out << table_value(Rules::natural_payout, o.full, 6) << ','
                    << cell(player_can_draw(deck) ? std::optional(ev.hit(hand, deck)) : std::nullopt) << ','
                    << cell(player_can_draw(deck) ? std::optional(ev.double_down(hand, deck)) : std::nullopt)
                    << ",,stand\n";
                continue;
            }
            const ActionEvaluation e = ev.best_action(i, j, deck);
            out << table_value(e.ev_stand, o.full, 6) << ',' << cell(e.ev_hit) << ',' << cell(e.ev_double)
                << ',' << cell(e.ev_split) << ',' << to_string(e.best) << '\n';
        }
    }
}

RemovalTable compute_table(int n_decks, const Rules& rules, int depth) {
    ExpectationOptions options;
    options.depth = depth;
    RemovalTable table;
    for (int n = 1; n <= n_decks; ++n) table.add(n, removal_effects(Deck::standard(n), rules, options));
    return table;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact blackjack expected values"};
    app.require_subcommand(1);
    std::function<void()> action;

    TableOptions dt;
    std::string measure = "Q";
    auto* dealer_cmd = app.add_subcommand("dealer-table", "dealer outcome probabilities by upcard (CSV)");
    add_deck_options(dealer_cmd, dt, false);
    dealer_cmd->add_flag("--full", dt.full, "full precision instead of 5 truncated digits");
    dealer_cmd->add_option("--measure", measure, "P (unconditional) or Q (no dealer natural)")
        ->check(CLI::IsMember({"P", "Q"}))
        ->capture_default_str();
    dealer_cmd->callback([&] { action = [&] { dealer_table(dt, measure, out); }; });

    TableOptions et;
    et.decks = "2";
    int et_up = 6;
    auto* ev_cmd = app.add_subcommand("ev-table", "expected wins of every two-card hand (CSV)");
    add_deck_options(ev_cmd, et, true);
    ev_cmd->add_option("--up", et_up, "dealer upcard 1..10")->check(CLI::Range(1, 10))->capture_default_str();
    ev_cmd->add_flag("--full", et.full, "full precision instead of 6 truncated digits");
    ev_cmd->callback([&] { action = [&] { ev_table(et, et_up, out); }; });

    TableOptions ew;
    int ew_threads = 1;
    auto* ew_cmd = app.add_subcommand("expected-win", "whole-game expected win in percent");
    add_deck_options(ew_cmd, ew, true);
    ew_cmd->add_option("--threads", ew_threads, "worker threads")->check(CLI::Range(1, 10));
    ew_cmd->add_flag("--full", ew.full, "full precision instead of 4 truncated digits");
    ew_cmd->callback([&] {
        action = [&] {
            ExpectationOptions options{ew.depth, ew_threads};
            const GameExpectation ge = expected_win(parse_decks(ew.decks), parse_rule_bits(ew.rules, ew.h17), options);
            out << table_value(100.0 * ge.ew, ew.full, 4) << '\n';
        };
    });

    TableOptions re;
    bool re_json = false;
    auto* re_cmd = app.add_subcommand("removal-effects", "effect of removing one card, in percent (CSV)");
    add_deck_options(re_cmd, re, true);
    re_cmd->add_flag("--json", re_json, "emit a removal table usable by estimate --effects");
    re_cmd->callback([&] {
        action = [&] {
            const Deck deck = parse_decks(re.decks);
            if (deck.is_infinite()) throw ValidationError("--decks", "removal effects need a finite deck");
            ExpectationOptions options;
            options.depth = re.depth;
            const RemovalEffects effects = removal_effects(deck, parse_rule_bits(re.rules, re.h17), options);
            if (re_json) {
                RemovalTable table;
                table.add(deck.total() / 52, effects);
                out << to_json(table).dump(2) << '\n';
                return;
            }
            out << "card,r\n";
            for (int i = 1; i <= kNumRanks; ++i) {
                out << i << ',' << table_value(100.0 * *effects.r[i - 1], re.full, 3) << '\n';
            }
        };
    });

    TableOptions es;
    es.decks = "2";
    std::string removed_text;
    std::string effects_path;
    bool exact = false;
    auto* es_cmd = app.add_subcommand("estimate", "linear counting estimate of the expected win");
    add_deck_options(es_cmd, es, true);
    es_cmd->add_option("--removed", removed_text, "comma-separated removed card values")->required();
    es_cmd->add_option("--effects", effects_path, "removal table JSON (default: compute 1..n decks)");
    es_cmd->add_flag("--exact", exact, "also compute the exact expected win of the depleted deck");
    es_cmd->callback([&] {
        action = [&] {
            const Deck shoe = parse_decks(es.decks);
            if (shoe.is_infinite()) throw ValidationError("--decks", "the estimate needs a finite deck");
            const Rules rules = parse_rule_bits(es.rules, es.h17);
            const std::vector<int> removed = parse_card_list(removed_text, "--removed");
            const int n = shoe.total() / 52;
            const RemovalTable table = effects_path.empty()
                                           ? compute_table(n, rules, es.depth)
                                           : removal_table_from_json(read_json_arg("@" + effects_path, "--effects"));
            ExpectationOptions options;
            options.depth = es.depth;
            const auto column = table.columns().find(n);
            const double base = column != table.columns().end() ? column->second.base_ew
                                                                : expected_win(shoe, rules, options).ew;
            out << "quantity,value\n";
            out << "base," << format_fixed(base, 6) << '\n';
            out << "estimate," << format_fixed(estimate_ew(shoe, removed, table, base), 6) << '\n';
            if (exact) {
                Deck rest = shoe;
                for (int c : removed) rest.remove(c);
                out << "exact," << format_fixed(expected_win(rest, rules, options).ew, 6) << '\n';
            }
        };
    });

    std::string deck_text;
    std::string rules_text = "111";
    int adv_up = 0;
    std::string cards_text;
    int adv_depth = kDefaultDepth;
    auto* adv_cmd = app.add_subcommand("advise", "best action for a hand (JSON)");
    adv_cmd->add_option("--deck", deck_text, "unseen-cards deck JSON, or @file")->required();
    adv_cmd->add_option("--rules", rules_text, "rules JSON or mask")->capture_default_str();
    adv_cmd->add_option("--up", adv_up, "dealer upcard 1..10")->required();
    adv_cmd->add_option("--cards", cards_text, "player cards, e.g. 1,7")->required();
    adv_cmd->add_option("--depth", adv_depth, "hit recursion depth")->check(CLI::Range(0, 64))->capture_default_str();
    adv_cmd->callback([&] {
        action = [&] {
            const Deck deck = deck_from_json(read_json_arg(deck_text, "deck"));
            const Rules rules = parse_rules_arg(rules_text);
            if (adv_up < 1 || adv_up > kNumRanks) throw ValidationError("--up", "must be a card value 1..10");
            const std::vector<int> cards = parse_card_list(cards_text, "--cards");
            if (cards.size() < 2) throw ValidationError("--cards", "a hand needs at least two cards");
            if (cards.size() == 2 && (Hand::of(cards[0]) + cards[1]).total() == 21) {
                out << Json{{"is_player_natural", true}, {"payout", Rules::natural_payout}}.dump() << '\n';
                return;
            }
            Evaluator evaluator(adv_up, rules, adv_depth);
            out << to_json(evaluator.best_action(cards, deck)).dump() << '\n';
        };
    });

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of the exact engine (JSON)");
    sim_cmd->require_subcommand(1);
    TableOptions sd;
    int sd_up = 0;
    std::uint64_t sd_n = 1'000'000;
    std::uint64_t sd_seed = 1;
    auto* sim_dealer = sim_cmd->add_subcommand("dealer", "dealer hands for one upcard");
    add_deck_options(sim_dealer, sd, false);
    sim_dealer->add_option("--up", sd_up, "dealer upcard 1..10")->required()->check(CLI::Range(1, 10));
    sim_dealer->add_option("--n", sd_n, "number of trials")->capture_default_str();
    sim_dealer->add_option("--seed", sd_seed, "PRNG seed")->capture_default_str();
    sim_dealer->callback([&] {
        action = [&] {
            Rules rules;
            rules.dealer_hits_soft17 = sd.h17;
            const Deck deck = remove_card(parse_decks(sd.decks), sd_up);
            out << to_json(simulate_dealer(sd_up, deck, rules, sd_n, sd_seed)).dump() << '\n';
        };
    });
    TableOptions sr;
    std::uint64_t sr_n = 1'000'000;
    std::uint64_t sr_seed = 1;
    auto* sim_round = sim_cmd->add_subcommand("round", "full rounds under optimal play");
    add_deck_options(sim_round, sr, true);
    sim_round->add_option("--n", sr_n, "number of rounds")->capture_default_str();
    sim_round->add_option("--seed", sr_seed, "PRNG seed")->capture_default_str();
    sim_round->callback([&] {
        action = [&] {
            const Deck deck = parse_decks(sr.decks);
            out << to_json(simulate_round(deck, parse_rule_bits(sr.rules, sr.h17), sr_n, sr_seed)).dump() << '\n';
        };
    });

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "JSON-over-HTTP advisor service");
    serve_cmd->add_option("--host", host, "address to bind")->capture_default_str();
    serve_cmd->add_option("--port", port, "port to bind")->check(CLI::Range(0, 65535))->capture_default_str();
    serve_cmd->callback([&] {
        action = [&] {
            AdvisorService service;
            HttpServer server(service);
            const int bound = server.bind(host, port);
            if (bound < 0) throw EngineError(ErrorCode::invalid_argument, "cannot bind " + host + ":" + std::to_string(port));
            err << "listening on " << host << ':' << bound << std::endl;
            server.listen();
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        if (action) action();
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.field() << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const EngineError& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return kExitEngineError;
    }
}

}  // namespace blackjack
