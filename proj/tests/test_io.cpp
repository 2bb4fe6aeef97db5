#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "macvlc/io.hpp"

using namespace macvlc;

TEST_CASE("channel json round-trips exactly") {
    McChannel ch = builtin_channel(Builtin::noisy_adder, 0.1);
    std::string text = channel_to_json(ch);
    McChannel back = parse_channel_json(text);
    CHECK(back.x1_size == ch.x1_size);
    CHECK(back.x2_size == ch.x2_size);
    CHECK(back.y_size == ch.y_size);
    REQUIRE(back.transition.size() == ch.transition.size());
    for (size_t i = 0; i < ch.transition.size(); ++i)
        CHECK(back.transition[i] == ch.transition[i]);  // bitwise, via shortest round-trip
}

TEST_CASE("channel parse errors carry the position and the reason") {
    std::string broken = "{\n  \"x1_size\": 2,\n  \"x2_size\": ]\n}\n";
    try {
        parse_channel_json(broken, "test.json");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("test.json") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }

    std::string short_tr =
        "{\"x1_size\":2,\"x2_size\":2,\"y_size\":3,\"transition\":[1,0,0]}";
    try {
        parse_channel_json(short_tr, "t2.json");
        FAIL("expected a length error");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("3 entries") != std::string::npos);
        CHECK(msg.find("12") != std::string::npos);
    }

    std::string missing = "{\"x1_size\":2}";
    CHECK_THROWS_AS(parse_channel_json(missing), Error);
}

TEST_CASE("channel names resolve to builtins, other strings to files") {
    McChannel ch = resolve_channel("noisy_adder(0.25)");
    CHECK(ch.y_size == 3);
    CHECK_THROWS_AS(resolve_channel("/nonexistent/channel.json"), Error);
}

TEST_CASE("scheme json: fields, defaults, and rejection") {
    SchemeSpec s = parse_scheme_json(
        "{\"type\":\"mixed\",\"m1\":32,\"m2\":8,\"lambda\":0.25,"
        "\"phase1_rates_bits\":[0.9,0.4],\"epsilon\":0.02,\"seed\":7}");
    CHECK(s.type == SchemeSpec::Type::mixed);
    CHECK(s.m1 == 32);
    CHECK(s.m2 == 8);
    CHECK(s.lambda == 0.25);
    CHECK(s.epsilon == 0.02);
    CHECK(s.seed == 7);
    CHECK(s.has_phase1_rates);
    CHECK(s.phase1_rate1 == doctest::Approx(0.9 * std::log(2.0)).epsilon(1e-15));
    CHECK(s.phase1_rate2 == doctest::Approx(0.4 * std::log(2.0)).epsilon(1e-15));

    SchemeSpec d = parse_scheme_json("{\"type\":\"random\",\"m1\":4,\"m2\":4}");
    CHECK(d.lambda == 0.5);
    CHECK(d.epsilon == 0.05);
    CHECK(d.seed == 1);
    CHECK(!d.has_phase1_rates);

    CHECK_THROWS_AS(parse_scheme_json("{\"type\":\"bogus\",\"m1\":4,\"m2\":4}"),
                    InvalidScheme);
    CHECK_THROWS_AS(parse_scheme_json("{\"type\":\"random\",\"m1\":0,\"m2\":4}"),
                    InvalidScheme);
    CHECK_THROWS_AS(parse_scheme_json("{\"type\":\"random\",\"m1\":4,\"m2\":4,"
                                      "\"lambda\":1.5}"),
                    InvalidScheme);
    CHECK_THROWS_AS(parse_scheme_json("{\"type\":\"concat\",\"m1\":4,\"m2\":4,"
                                      "\"epsilon\":0}"),
                    InvalidScheme);
    CHECK_THROWS_AS(parse_scheme_json("{\"type\":\"concat\",\"m1\":4,\"m2\":4,"
                                      "\"phase1_rates_bits\":[1.0]}"),
                    InvalidScheme);
    CHECK_THROWS_AS(parse_scheme_json("{\"m1\":4,\"m2\":4}"), InvalidScheme);
}

TEST_CASE("fixed six-decimal formatting") {
    CHECK(fmt6(1.0) == "1.000000");
    CHECK(fmt6(2.0 / 3.0) == "0.666667");
    CHECK(fmt6(0.0) == "0.000000");
    CHECK(fmt6(-0.5) == "-0.500000");
}

TEST_CASE("region csv golden bytes for the capacity rectangle") {
    McChannel ch = builtin_channel(Builtin::adder);
    RateRegion box = outer_region(ch, {0.0, 0.0, 1.0}, 21, 1);
    std::string want =
        "R1_bits,R2_bits\n"
        "0.000000,0.000000\n"
        "1.000000,0.000000\n"
        "1.000000,1.000000\n"
        "0.000000,1.000000\n";
    CHECK(region_to_csv(box) == want);
}

TEST_CASE("region json carries provenance, query, and both units") {
    McChannel ch = builtin_channel(Builtin::adder);
    RateRegion reg = outer_region(ch, {0.5, 0.5, 1.0}, 21, 1);
    std::string j = region_to_json(reg);
    CHECK(j.find("\"provenance\": \"outer\"") != std::string::npos);
    CHECK(j.find("\"r1\": 0.5") != std::string::npos);
    CHECK(j.find("R1_bits") != std::string::npos);
    CHECK(j.find("R2_nats") != std::string::npos);
    CHECK(j.back() == '\n');
}

TEST_CASE("decoder rule names round-trip") {
    for (DecodeRule r : {DecodeRule::joint, DecodeRule::genie_cond_user1,
                         DecodeRule::genie_cond_user2, DecodeRule::combined,
                         DecodeRule::successive, DecodeRule::successive_ic})
        CHECK(rule_from_name(rule_name(r)) == r);
    CHECK_THROWS_AS(rule_from_name("viterbi"), Error);
}

TEST_CASE("summary json is deterministic and hides the worker count") {
    ExperimentConfig cfg;
    cfg.channel = builtin_channel(Builtin::noisy_adder, 0.1);
    cfg.scheme.m1 = 8;
    cfg.scheme.m2 = 8;
    cfg.decoder = {0.3, 0, DecodeRule::joint};
    cfg.trials = 50;
    cfg.master_seed = 5;
    cfg.workers = 1;
    ExperimentResult a = run_experiment(cfg);
    cfg.workers = 7;
    ExperimentResult b = run_experiment(cfg);
    std::string ja = summary_to_json(a.summary, cfg.scheme, cfg.decoder, cfg.trials,
                                     cfg.master_seed, "noisy_adder(0.1)");
    std::string jb = summary_to_json(b.summary, cfg.scheme, cfg.decoder, cfg.trials,
                                     cfg.master_seed, "noisy_adder(0.1)");
    CHECK(ja == jb);
    CHECK(ja.find("workers") == std::string::npos);
    CHECK(ja.find("\"rule\": \"joint\"") != std::string::npos);
    CHECK(ja.find("\"trials\": 50") != std::string::npos);
}

TEST_CASE("infinite rates serialize as null") {
    SimSummary s;
    s.rate1_nats = std::numeric_limits<double>::infinity();
    s.rate1_bits = std::numeric_limits<double>::infinity();
    s.rate2_nats = 0.25;
    s.rate2_bits = 0.25 / std::log(2.0);
    SchemeSpec scheme;
    std::string j = summary_to_json(s, scheme, {0.2, 0, DecodeRule::genie_cond_user2}, 1, 1,
                                    "adder");
    CHECK(j.find("\"nats_per_use\": null") != std::string::npos);
    CHECK(j.find("\"nats_per_use\": 0.25") != std::string::npos);
}

TEST_CASE("per-trial csv golden bytes") {
    std::vector<TrialRecord> recs(2);
    recs[0].n1 = 12.0;
    recs[0].n2 = 15.0;
    recs[0].error = false;
    recs[0].capped = false;
    recs[1].n1 = 400.0;
    recs[1].n2 = 400.0;
    recs[1].error = true;
    recs[1].capped = true;
    std::string want =
        "trial,n1,n2,error,capped\n"
        "0,12,15,0,0\n"
        "1,400,400,1,1\n";
    CHECK(records_to_csv(recs) == want);
}
