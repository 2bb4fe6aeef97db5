#include "macvlc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace macvlc {

namespace {

std::string where(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_or_throw(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(origin + ": " + e.what() + " (" + where(text, e.byte) + ")");
    }
}

double num_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

McChannel parse_channel_json(const std::string& text, const std::string& origin) {
    json j = parse_or_throw(text, origin);
    try {
        int x1 = j.at("x1_size").get<int>();
        int x2 = j.at("x2_size").get<int>();
        int y = j.at("y_size").get<int>();
        std::vector<double> tr = j.at("transition").get<std::vector<double>>();
        if ((int)tr.size() != x1 * x2 * y)
            throw Error(origin + ": transition has " + std::to_string(tr.size()) +
                        " entries, expected " + std::to_string(x1 * x2 * y));
        return validate_channel(x1, x2, y, tr);
    } catch (const json::exception& e) {
        throw Error(origin + ": " + e.what());
    }
}

McChannel load_channel_json(const std::string& path) {
    return parse_channel_json(read_file(path), path);
}

std::string channel_to_json(const McChannel& ch) {
    json j;
    j["x1_size"] = ch.x1_size;
    j["x2_size"] = ch.x2_size;
    j["y_size"] = ch.y_size;
    j["transition"] = ch.transition;
    return j.dump(2) + "\n";
}

McChannel resolve_channel(const std::string& arg) {
    if (is_builtin_name(arg)) return builtin_channel(arg);
    return load_channel_json(arg);
}

SchemeSpec parse_scheme_json(const std::string& text, const std::string& origin) {
    json j = parse_or_throw(text, origin);
    SchemeSpec s;
    try {
        std::string type = j.at("type").get<std::string>();
        if (type == "random")
            s.type = SchemeSpec::Type::random;
        else if (type == "concat")
            s.type = SchemeSpec::Type::concat;
        else if (type == "mixed")
            s.type = SchemeSpec::Type::mixed;
        else
            throw InvalidScheme(origin + ": unknown scheme type '" + type + "'");
        double m1 = j.at("m1").get<double>(), m2 = j.at("m2").get<double>();
        if (m1 < 1 || m2 < 1) throw InvalidScheme(origin + ": message counts must be >= 1");
        s.m1 = (uint64_t)m1;
        s.m2 = (uint64_t)m2;
        s.lambda = num_or(j, "lambda", 0.5);
        if (s.lambda < 0.0 || s.lambda > 1.0)
            throw InvalidScheme(origin + ": lambda must lie in [0,1]");
        s.epsilon = num_or(j, "epsilon", 0.05);
        if (s.epsilon <= 0.0 && s.type != SchemeSpec::Type::random)
            throw InvalidScheme(origin + ": epsilon must be positive");
        s.seed = (uint64_t)num_or(j, "seed", 1);
        if (j.contains("phase1_rates_bits")) {
            auto v = j.at("phase1_rates_bits").get<std::vector<double>>();
            if (v.size() != 2)
                throw InvalidScheme(origin + ": phase1_rates_bits needs two entries");
            s.has_phase1_rates = true;
            s.phase1_rate1 = v[0] * std::log(2.0);
            s.phase1_rate2 = v[1] * std::log(2.0);
        }
    } catch (const json::exception& e) {
        throw InvalidScheme(origin + ": " + e.what());
    }
    return s;
}

SchemeSpec load_scheme_json(const std::string& path) {
    return parse_scheme_json(read_file(path), path);
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string region_to_csv(const RateRegion& region) {
    std::string out = "R1_bits,R2_bits\n";
    const double ln2 = std::log(2.0);
    for (const auto& v : region.hull)
        out += fmt6(v.r1 / ln2) + "," + fmt6(v.r2 / ln2) + "\n";
    return out;
}

namespace {
const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::r_mac: return "r_mac";
    case Provenance::outer: return "outer";
    case Provenance::rectangle: return "rectangle";
    case Provenance::feedback_outer: return "feedback_outer";
    case Provenance::timeshare_curve: return "timeshare_curve";
    }
    return "?";
}
} // namespace

std::string region_to_json(const RateRegion& region) {
    json j;
    j["provenance"] = provenance_name(region.provenance);
    j["query"] = {{"r1", region.query.r1}, {"r2", region.query.r2}, {"s", region.query.s}};
    json verts = json::array();
    const double ln2 = std::log(2.0);
    for (const auto& v : region.hull)
        verts.push_back({{"R1_bits", v.r1 / ln2},
                         {"R1_nats", v.r1},
                         {"R2_bits", v.r2 / ln2},
                         {"R2_nats", v.r2}});
    j["vertices"] = verts;
    return j.dump(2) + "\n";
}

const char* rule_name(DecodeRule r) {
    switch (r) {
    case DecodeRule::joint: return "joint";
    case DecodeRule::genie_cond_user1: return "genie_cond_user1";
    case DecodeRule::genie_cond_user2: return "genie_cond_user2";
    case DecodeRule::combined: return "combined";
    case DecodeRule::successive: return "successive";
    case DecodeRule::successive_ic: return "successive_ic";
    }
    return "?";
}

DecodeRule rule_from_name(const std::string& name) {
    if (name == "joint") return DecodeRule::joint;
    if (name == "genie_cond_user1") return DecodeRule::genie_cond_user1;
    if (name == "genie_cond_user2") return DecodeRule::genie_cond_user2;
    if (name == "combined") return DecodeRule::combined;
    if (name == "successive") return DecodeRule::successive;
    if (name == "successive_ic") return DecodeRule::successive_ic;
    throw Error("unknown decoder rule '" + name + "'");
}

namespace {
const char* scheme_type_name(SchemeSpec::Type t) {
    switch (t) {
    case SchemeSpec::Type::random: return "random";
    case SchemeSpec::Type::concat: return "concat";
    case SchemeSpec::Type::mixed: return "mixed";
    }
    return "?";
}

json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}
} // namespace

std::string summary_to_json(const SimSummary& s, const SchemeSpec& scheme,
                            const DecoderConfig& dec, uint64_t trials,
                            uint64_t master_seed, const std::string& channel_desc) {
    const double ln2 = std::log(2.0);
    json cfg;
    cfg["channel"] = channel_desc;
    cfg["decoder"] = {{"epsilon", dec.epsilon},
                      {"max_steps", dec.max_steps},
                      {"rule", rule_name(dec.rule)}};
    cfg["master_seed"] = master_seed;
    json sj;
    sj["type"] = scheme_type_name(scheme.type);
    sj["m1"] = scheme.m1;
    sj["m2"] = scheme.m2;
    sj["seed"] = scheme.seed;
    if (scheme.type != SchemeSpec::Type::random) {
        sj["epsilon"] = scheme.epsilon;
        if (scheme.has_phase1_rates)
            sj["phase1_rates_bits"] = {scheme.phase1_rate1 / ln2, scheme.phase1_rate2 / ln2};
    }
    if (scheme.type == SchemeSpec::Type::mixed) sj["lambda"] = scheme.lambda;
    cfg["scheme"] = sj;
    cfg["trials"] = trials;

    json res;
    res["capped_fraction"] = s.capped_fraction;
    res["en1"] = {{"mean", s.en1}, {"stderr", s.en1_stderr}, {"units", "channel uses"}};
    res["en2"] = {{"mean", s.en2}, {"stderr", s.en2_stderr}, {"units", "channel uses"}};
    res["en_min"] =
        {{"mean", s.en_min}, {"stderr", s.en_min_stderr}, {"units", "channel uses"}};
    res["log_m1"] = {{"bits", s.log_m1_nats / ln2}, {"nats", s.log_m1_nats}};
    res["log_m2"] = {{"bits", s.log_m2_nats / ln2}, {"nats", s.log_m2_nats}};
    res["pe"] = {{"hat", s.pe_hat}, {"wilson_lo", s.pe_lo}, {"wilson_hi", s.pe_hi}};
    res["r1_hat"] = s.r1_hat;
    res["r2_hat"] = s.r2_hat;
    res["rate1"] = {{"bits_per_use", finite_or_null(s.rate1_bits)},
                    {"nats_per_use", finite_or_null(s.rate1_nats)}};
    res["rate2"] = {{"bits_per_use", finite_or_null(s.rate2_bits)},
                    {"nats_per_use", finite_or_null(s.rate2_nats)}};
    res["trials_used"] = s.trials_used;
    res["warning"] = s.warning;

    json j;
    j["config"] = cfg;
    j["results"] = res;
    return j.dump(2) + "\n";
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
    std::string out = "trial,n1,n2,error,capped\n";
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out += std::to_string(i) + "," + std::to_string((long long)llround(r.n1)) + "," +
               std::to_string((long long)llround(r.n2)) + "," + (r.error ? "1" : "0") +
               "," + (r.capped ? "1" : "0") + "\n";
    }
    return out;
}

} // namespace macvlc
