#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "macvlc/decoders.hpp"
#include "macvlc/infomeasures.hpp"
#include "macvlc/io.hpp"
#include "macvlc/regions.hpp"
#include "macvlc/simharness.hpp"

using namespace macvlc;

namespace {

const double ln2 = std::log(2.0);

std::string pmf_str(const std::vector<double>& p) {
    std::string s = "[";
    for (size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt6(p[i]);
    return s + "]";
}

std::vector<double> parse_pmf(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::string both_units(double nats) {
    return fmt6(nats / ln2) + " bits/use (" + fmt6(nats) + " nats/use)";
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

uint64_t seed_with_env(uint64_t cli_seed) {
    const char* env = std::getenv("MACVLC_SEED");
    if (env && *env) return std::strtoull(env, nullptr, 10);
    return cli_seed;
}

int cmd_capacity(const std::string& channel_arg, const std::string& p1_csv,
                 const std::string& p2_csv) {
    McChannel ch = resolve_channel(channel_arg);
    ChannelSummary cs = channel_summary(ch);
    ProductInput in = uniform_input(ch);
    bool uniform = p1_csv.empty() && p2_csv.empty();
    if (!p1_csv.empty()) in.p1 = parse_pmf(p1_csv);
    if (!p2_csv.empty()) in.p2 = parse_pmf(p2_csv);
    validate_input(ch, in);
    InfoTriple t = info_triple(ch, in);

    std::cout << "channel: " << channel_arg << " (" << ch.x1_size << "x" << ch.x2_size
              << " inputs, " << ch.y_size << " outputs)\n";
    std::cout << "C1 = " << both_units(cs.c1) << ", argmax p1 = " << pmf_str(cs.c1_argmax.p1)
              << ", p2 = " << pmf_str(cs.c1_argmax.p2) << "\n";
    std::cout << "C2 = " << both_units(cs.c2) << ", argmax p1 = " << pmf_str(cs.c2_argmax.p1)
              << ", p2 = " << pmf_str(cs.c2_argmax.p2) << "\n";
    std::cout << "at input p1 = " << pmf_str(in.p1) << ", p2 = " << pmf_str(in.p2)
              << (uniform ? " (uniform)" : "") << ":\n";
    std::cout << "I(X1;Y|X2) = " << both_units(t.i1) << "\n";
    std::cout << "I(X2;Y|X1) = " << both_units(t.i2) << "\n";
    std::cout << "I(X1,X2;Y) = " << both_units(t.i12) << "\n";
    return 0;
}

int cmd_region(const std::string& channel_arg, const std::string& kind, double r1, double r2,
               double s, int grid, int workers, bool as_json, const std::string& out_path) {
    McChannel ch = resolve_channel(channel_arg);
    RateRegion reg;
    if (kind == "rmac")
        reg = block_capacity_region(ch, grid, workers);
    else if (kind == "outer")
        reg = outer_region(ch, RegionQuery{r1, r2, s}, grid, workers);
    else if (kind == "feedback")
        reg = feedback_outer_region(ch, RegionQuery{r1, r2, s}, grid, workers);
    else if (kind == "rect")
        reg = outer_region(ch, RegionQuery{0.0, 0.0, s}, grid, workers);
    else
        throw Error("unknown region kind '" + kind + "'");
    emit(as_json ? region_to_json(reg) : region_to_csv(reg), out_path);
    return 0;
}

int cmd_curve(const std::string& channel_arg, int p_grid, double eps, int grid,
              const std::string& out_path) {
    McChannel ch = resolve_channel(channel_arg);
    ChannelSummary cs = channel_summary(ch);
    PentagonCorners pc = detect_pentagon_corners(ch, cs, grid);
    RateRegion curve = timeshare_boundary(cs, pc, p_grid);

    // lambda-sweep companion: message sizes balanced so both phase clocks
    // agree (log M proportional to the single-user maxima), lambda = p
    std::string out = "p,R1_bits,R2_bits,lambda,R1_ts_bits,R2_ts_bits\n";
    for (int k = 0; k < p_grid; ++k) {
        double p = (double)k / (p_grid - 1);
        RatePair eq = curve.hull[k];
        RatePair ts = timeshare_rates(cs, pc, p, cs.c1, cs.c2, eps);
        out += fmt6(p) + "," + fmt6(eq.r1 / ln2) + "," + fmt6(eq.r2 / ln2) + "," + fmt6(p) +
               "," + fmt6(ts.r1 / ln2) + "," + fmt6(ts.r2 / ln2) + "\n";
    }
    emit(out, out_path);
    return 0;
}

struct SimArgs {
    std::string channel;
    std::string scheme_path;
    uint64_t m1 = 2, m2 = 2;
    uint64_t scheme_seed = 1;
    std::string rule = "joint";
    double epsilon = 0.2;
    uint64_t max_steps = 0;
    uint64_t trials = 100;
    uint64_t seed = 1;
    int workers = 1;
    std::string out_path;
    std::string records_path;
};

int cmd_simulate(const SimArgs& a) {
    ExperimentConfig cfg;
    cfg.channel = resolve_channel(a.channel);
    if (!a.scheme_path.empty()) {
        cfg.scheme = load_scheme_json(a.scheme_path);
    } else {
        cfg.scheme.type = SchemeSpec::Type::random;
        cfg.scheme.m1 = a.m1;
        cfg.scheme.m2 = a.m2;
        cfg.scheme.seed = a.scheme_seed;
    }
    cfg.decoder.rule = rule_from_name(a.rule);
    cfg.decoder.epsilon = a.epsilon;
    cfg.decoder.max_steps = a.max_steps;
    cfg.trials = a.trials;
    cfg.master_seed = seed_with_env(a.seed);
    cfg.workers = a.workers;

    ExperimentResult res = run_experiment(cfg);
    if (!res.summary.warning.empty())
        std::cerr << "warning: " << res.summary.warning << "\n";
    emit(summary_to_json(res.summary, cfg.scheme, cfg.decoder, cfg.trials, cfg.master_seed,
                         a.channel),
         a.out_path);
    if (!a.records_path.empty()) write_file(a.records_path, records_to_csv(res.records));
    return 0;
}

int cmd_sweep(const std::string& channel_arg, const std::string& rule,
              const std::vector<double>& ratios, const std::vector<uint64_t>& m2_list,
              uint64_t trials, double epsilon, uint64_t seed, int workers,
              const std::string& out_path) {
    if (ratios.empty()) throw Error("--m-ratio-grid needs at least one ratio");
    if (m2_list.size() != 1 && m2_list.size() != ratios.size())
        throw Error("--m2 must give one count or one per ratio");
    McChannel ch = resolve_channel(channel_arg);
    uint64_t master = seed_with_env(seed);

    std::string out = "logM1_over_logM2,rate1_bits,rate2_bits,pe\n";
    for (size_t i = 0; i < ratios.size(); ++i) {
        uint64_t m2 = m2_list.size() == 1 ? m2_list[0] : m2_list[i];
        if (m2 < 2) throw Error("--m2 entries must be at least 2");
        double rho = ratios[i];
        uint64_t m1 = (uint64_t)std::llround(std::exp(rho * std::log((double)m2)));
        if (m1 < 1) m1 = 1;
        ExperimentConfig cfg;
        cfg.channel = ch;
        cfg.scheme.type = SchemeSpec::Type::random;
        cfg.scheme.m1 = m1;
        cfg.scheme.m2 = m2;
        cfg.scheme.seed = derive_seed(master, i, 0x5EED);
        cfg.decoder.rule = rule_from_name(rule);
        cfg.decoder.epsilon = epsilon;
        cfg.trials = trials;
        cfg.master_seed = derive_seed(master, i, 0xF00D);
        cfg.workers = workers;
        ExperimentResult res = run_experiment(cfg);
        double actual = res.summary.log_m2_nats > 0.0
                            ? res.summary.log_m1_nats / res.summary.log_m2_nats
                            : 0.0;
        out += fmt6(actual) + "," + fmt6(res.summary.rate1_bits) + "," +
               fmt6(res.summary.rate2_bits) + "," + fmt6(res.summary.pe_hat) + "\n";
    }
    emit(out, out_path);
    return 0;
}

int cmd_check(const std::string& channel_arg, const std::string& suite, uint64_t trials,
              double epsilon, uint64_t seed, int workers) {
    McChannel ch = resolve_channel(channel_arg);
    ProductInput in = uniform_input(ch);
    InfoTriple t = info_triple(ch, in);
    bool ok = true;
    uint64_t master = seed_with_env(seed);

    auto genie_cfg = [&](uint64_t m1, double eps) {
        ExperimentConfig cfg;
        cfg.channel = ch;
        cfg.scheme.type = SchemeSpec::Type::random;
        cfg.scheme.m1 = m1;
        cfg.scheme.m2 = 2;
        cfg.scheme.seed = derive_seed(master, 1, 0x5EED);
        cfg.decoder.rule = DecodeRule::genie_cond_user1;
        cfg.decoder.epsilon = eps;
        cfg.trials = trials;
        cfg.master_seed = master;
        cfg.workers = workers;
        return cfg;
    };

    if (suite == "drift") {
        struct Row {
            WalkKind kind;
            const char* name;
            bool correct;
            double expect;  // correct kinds: matching mutual information
        };
        double iy1 = drift(ch, in, WalkKind::single_correct_user1);
        double iy2 = drift(ch, in, WalkKind::single_correct_user2);
        Row rows[] = {
            {WalkKind::joint_correct, "joint_correct", true, t.i12},
            {WalkKind::cond_correct_given_x2, "cond_correct_given_x2", true, t.i1},
            {WalkKind::cond_correct_given_x1, "cond_correct_given_x1", true, t.i2},
            {WalkKind::single_correct_user1, "single_correct_user1", true, iy1},
            {WalkKind::single_correct_user2, "single_correct_user2", true, iy2},
            {WalkKind::joint_both_wrong, "joint_both_wrong", false, 0},
            {WalkKind::joint_w1_wrong, "joint_w1_wrong", false, 0},
            {WalkKind::joint_w2_wrong, "joint_w2_wrong", false, 0},
            {WalkKind::cond_wrong_given_x2, "cond_wrong_given_x2", false, 0},
            {WalkKind::cond_wrong_given_x1, "cond_wrong_given_x1", false, 0},
            {WalkKind::single_wrong_user1, "single_wrong_user1", false, 0},
            {WalkKind::single_wrong_user2, "single_wrong_user2", false, 0},
        };
        for (const Row& r : rows) {
            double d = drift(ch, in, r.kind);
            bool pass = r.correct ? std::fabs(d - r.expect) <= 1e-9 : d <= 1e-9;
            ok = ok && pass;
            std::cout << (pass ? "PASS " : "FAIL ") << r.name << ": drift = "
                      << (std::isinf(d) ? std::string("-inf")
                                        : fmt6(d) + " nats/use")
                      << (r.correct ? " (expected " + fmt6(r.expect) + ")" : " (expected <= 0)")
                      << "\n";
        }
    } else if (suite == "roots") {
        struct Row {
            WalkKind kind;
            const char* name;
        };
        Row unity[] = {
            {WalkKind::joint_both_wrong, "joint_both_wrong"},
            {WalkKind::cond_wrong_given_x2, "cond_wrong_given_x2"},
            {WalkKind::cond_wrong_given_x1, "cond_wrong_given_x1"},
            {WalkKind::single_wrong_user1, "single_wrong_user1"},
            {WalkKind::single_wrong_user2, "single_wrong_user2"},
        };
        for (const Row& r : unity) {
            double root = chernoff_root(ch, in, r.kind);
            bool pass = std::isinf(root) || std::fabs(root - 1.0) <= 1e-9;
            ok = ok && pass;
            std::cout << (pass ? "PASS " : "FAIL ") << r.name << ": lambda* = "
                      << (std::isinf(root) ? std::string("+inf (never crosses)") : fmt6(root))
                      << " (expected 1)\n";
        }
        LambdaConditions lc = lambda_condition_check(ch, in);
        std::cout << "INFO joint_w2_wrong root >= i2/i12: "
                  << (lc.w2_wrong_ok ? "yes" : "no") << "\n";
        std::cout << "INFO joint_w1_wrong root >= i1/i12: "
                  << (lc.w1_wrong_ok ? "yes" : "no") << "\n";
    } else if (suite == "wald") {
        ExperimentConfig cfg = genie_cfg(64, epsilon);
        ExperimentResult res = run_experiment(cfg);
        double d = t.i1;
        double T = (1.0 + epsilon) * std::log(64.0);
        // largest one-step gain of the correct conditional walk
        OutputLaws laws = output_laws(ch, in);
        double max_step = 0.0;
        for (int a = 0; a < ch.x1_size; ++a)
            for (int b = 0; b < ch.x2_size; ++b)
                for (int y = 0; y < ch.y_size; ++y) {
                    double den = laws.py_given_x2[(size_t)b * ch.y_size + y];
                    double num = ch.p(a, b, y);
                    if (num > 0.0 && den > 0.0)
                        max_step = std::max(max_step, std::log(num / den));
                }
        WaldReport rep = wald_check(res.records, d, T, max_step);
        ok = rep.pass;
        std::cout << (rep.pass ? "PASS" : "FAIL") << " wald: mean score = "
                  << fmt6(rep.mean_score) << ", drift*E[N] = " << fmt6(rep.drift_times_en)
                  << ", gap = " << fmt6(rep.gap) << " +- " << fmt6(3.0 * rep.gap_stderr)
                  << ", max step = " << fmt6(rep.max_step)
                  << ", gap/threshold = " << fmt6(rep.gap_over_threshold) << "\n";
    } else if (suite == "concentration") {
        ExperimentConfig c1 = genie_cfg(64, epsilon);
        ExperimentConfig c4 = genie_cfg(64, 4.0 * (1.0 + epsilon) - 1.0);  // threshold x4
        ExperimentResult r1 = run_experiment(c1);
        ExperimentResult r4 = run_experiment(c4);
        double t1 = concentration_check(r1.records, 0.2);
        double t4 = concentration_check(r4.records, 0.2);
        ok = t4 < t1 || (t1 == 0.0 && t4 == 0.0);
        std::cout << (ok ? "PASS" : "FAIL") << " concentration: tail(T) = " << fmt6(t1)
                  << ", tail(4T) = " << fmt6(t4) << " (eps* = 0.2)\n";
    } else if (suite == "slack") {
        ExperimentConfig cfg = genie_cfg(64, epsilon);
        cfg.trials = std::max<uint64_t>(trials, 1000);
        ExperimentResult res = run_experiment(cfg);
        EntropySlackReport rep = entropy_slack_check(res.records);
        ok = rep.pass;
        std::cout << (rep.pass ? "PASS" : "FAIL") << " slack: H(N) = " << fmt6(rep.h_emp_nats)
                  << " nats <= 1 + ln(E[N]) = " << fmt6(rep.bound_nats)
                  << " (support " << rep.support << ")\n";
    } else {
        throw Error("unknown suite '" + suite + "'");
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variable-length codes over two-user multiple-access channels"};
    app.require_subcommand(1);

    std::string channel, p1_csv, p2_csv;
    auto* cap = app.add_subcommand("capacity", "single-user maxima and mutual informations");
    cap->add_option("channel", channel, "builtin name or channel JSON file")->required();
    cap->add_option("--input1", p1_csv, "pmf over the user-1 alphabet, comma separated");
    cap->add_option("--input2", p2_csv, "pmf over the user-2 alphabet, comma separated");

    std::string kind = "rmac", out_path;
    double r1 = 1.0, r2 = 1.0, s = 1.0;
    int grid = 101, workers = 1;
    bool as_json = false;
    auto* reg = app.add_subcommand("region", "rate-region vertices as CSV (bits/use)");
    reg->add_option("channel", channel)->required();
    reg->add_option("--kind", kind, "rmac|outer|feedback|rect")->default_val("rmac");
    reg->add_option("--r1", r1, "E[min]/E[N1] constraint");
    reg->add_option("--r2", r2, "E[min]/E[N2] constraint");
    reg->add_option("--s", s, "E[N1]/E[N2] (r2 = s*r1)");
    reg->add_option("--grid", grid)->check(CLI::Range(2, 100000));
    reg->add_option("--workers", workers);
    reg->add_flag("--json", as_json, "JSON with provenance instead of CSV");
    reg->add_option("-o,--out", out_path, "write to file instead of stdout");

    int p_grid = 11;
    double curve_eps = 0.01;
    auto* cur = app.add_subcommand("curve", "restricted-ratio boundary and its time-shared sweep");
    cur->add_option("channel", channel)->required();
    cur->add_option("--p-grid", p_grid)->check(CLI::Range(2, 100000));
    cur->add_option("--epsilon", curve_eps, "phase-2 backoff for the time-shared sweep")
        ->check(CLI::PositiveNumber);
    cur->add_option("--grid", grid)->check(CLI::Range(2, 100000));
    cur->add_option("-o,--out", out_path);

    SimArgs sa;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo decoder run, JSON summary");
    sim->add_option("channel", sa.channel)->required();
    sim->add_option("--scheme", sa.scheme_path, "scheme JSON file (default: random codebooks)");
    sim->add_option("--m1", sa.m1, "messages for user 1 (random scheme)");
    sim->add_option("--m2", sa.m2, "messages for user 2 (random scheme)");
    sim->add_option("--scheme-seed", sa.scheme_seed, "codebook seed (random scheme)");
    sim->add_option("--rule", sa.rule,
                    "joint|genie_cond_user1|genie_cond_user2|combined|successive|successive_ic");
    sim->add_option("--epsilon", sa.epsilon, "threshold inflation")->check(CLI::PositiveNumber);
    sim->add_option("--max-steps", sa.max_steps, "0 = automatic cap");
    sim->add_option("--trials", sa.trials)->check(CLI::PositiveNumber);
    sim->add_option("--seed", sa.seed, "master seed (MACVLC_SEED overrides)");
    sim->add_option("--workers", sa.workers);
    sim->add_option("-o,--out", sa.out_path);
    sim->add_option("--records", sa.records_path, "also write per-trial CSV here");

    std::vector<double> ratios;
    std::vector<uint64_t> m2_list{16};
    std::string rule = "combined";
    uint64_t trials = 1000, seed = 1;
    double epsilon = 0.2;
    auto* sw = app.add_subcommand("sweep", "rates vs message-size ratio, CSV");
    sw->add_option("channel", channel)->required();
    sw->add_option("--decoder", rule, "decoder rule for every point");
    sw->add_option("--m-ratio-grid", ratios, "target logM1/logM2 ratios")
        ->delimiter(',')
        ->required();
    sw->add_option("--m2", m2_list, "base message count(s) for user 2")->delimiter(',');
    sw->add_option("--trials", trials)->check(CLI::PositiveNumber);
    sw->add_option("--epsilon", epsilon)->check(CLI::PositiveNumber);
    sw->add_option("--seed", seed, "master seed (MACVLC_SEED overrides)");
    sw->add_option("--workers", workers);
    sw->add_option("-o,--out", out_path);

    std::string suite;
    auto* chk = app.add_subcommand("check", "diagnostic suites; exit 0 iff the suite passes");
    chk->add_option("channel", channel)->required();
    chk->add_option("--suite", suite, "drift|roots|wald|concentration|slack")->required();
    chk->add_option("--trials", trials)->check(CLI::PositiveNumber);
    chk->add_option("--epsilon", epsilon)->check(CLI::PositiveNumber);
    chk->add_option("--seed", seed);
    chk->add_option("--workers", workers);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(cap)) return cmd_capacity(channel, p1_csv, p2_csv);
        if (app.got_subcommand(reg))
            return cmd_region(channel, kind, r1, r2, s, grid, workers, as_json, out_path);
        if (app.got_subcommand(cur))
            return cmd_curve(channel, p_grid, curve_eps, grid, out_path);
        if (app.got_subcommand(sim)) return cmd_simulate(sa);
        if (app.got_subcommand(sw))
            return cmd_sweep(channel, rule, ratios, m2_list, trials, epsilon, seed, workers,
                             out_path);
        if (app.got_subcommand(chk))
            return cmd_check(channel, suite, trials, epsilon, seed, workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
