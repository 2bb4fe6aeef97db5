#include "macvlc/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "macvlc/infomeasures.hpp"
#include "macvlc/regions.hpp"

#ifdef MACVLC_HAVE_OPENMP
#include <omp.h>
#endif

namespace macvlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uniform_pmf(int n) {
    return std::vector<double>(n, 1.0 / n);
}

std::vector<double> one_hot(int n, int at) {
    std::vector<double> p(n, 0.0);
    p[at] = 1.0;
    return p;
}

// per-trial state shared across the scheme variants
struct TrialSetup {
    const ExperimentConfig* cfg;
    // concat/mixed only:
    ChannelSummary summary;
    ConcatScheme v1, v2;
    bool have_v1 = false, have_v2 = false;
    int c1_letter = 0, c2_letter = 0;  // fixed letters for the finished user
};

uint64_t split_count(double log_m, double lead_rate, double follow_rate, uint64_t m_total) {
    // messages the follower reveals during phase 1: ln m_a = R_follow * n_phase1
    if (follow_rate <= 0.0) return 1;
    double lm = follow_rate * log_m / lead_rate;
    double m = std::round(std::exp(lm));
    return (uint64_t)std::clamp(m, 1.0, (double)m_total);
}

TrialRecord run_concat_trial(const TrialSetup& ts, const ConcatScheme& cs, uint64_t trial,
                             MessagePair truth, SplitMix64& rng) {
    const ExperimentConfig& cfg = *ts.cfg;
    const McChannel& ch = cfg.channel;
    const SchemeSpec& sc = cfg.scheme;
    DecoderConfig ph1_cfg{cfg.decoder.epsilon, 0, DecodeRule::joint};
    DecoderConfig ph2_cfg{cfg.decoder.epsilon, 0, DecodeRule::genie_cond_user2};

    const bool v1 = cs.order == ConcatOrder::v1;
    const uint64_t m_lead = v1 ? sc.m1 : sc.m2;
    const uint64_t m_follow = v1 ? sc.m2 : sc.m1;
    const uint64_t w_lead = v1 ? truth.first : truth.second;
    const uint64_t w_follow = v1 ? truth.second : truth.first;
    const double lead_rate = v1 ? cs.phase1_rates.first : cs.phase1_rates.second;
    const double follow_rate = v1 ? cs.phase1_rates.second : cs.phase1_rates.first;

    uint64_t m_a = split_count(std::log((double)m_lead), lead_rate, follow_rate, m_follow);
    uint64_t m_b = (m_follow + m_a - 1) / m_a;
    uint64_t w_a = (w_follow - 1) % m_a + 1;
    uint64_t w_b = (w_follow - 1) / m_a + 1;

    Codebook cb_lead{m_lead, uniform_pmf(v1 ? ch.x1_size : ch.x2_size),
                     derive_seed(sc.seed, trial, 1), v1 ? User::one : User::two};
    Codebook cb_a{m_a, uniform_pmf(v1 ? ch.x2_size : ch.x1_size),
                  derive_seed(sc.seed, trial, 2), v1 ? User::two : User::one};

    TrialRecord ph1 = v1 ? run_joint(ch, cb_lead, cb_a, {w_lead, w_a}, ph1_cfg, rng)
                         : run_joint(ch, cb_a, cb_lead, {w_a, w_lead}, ph1_cfg, rng);
    uint64_t dec_lead = v1 ? ph1.decoded.first : ph1.decoded.second;
    uint64_t dec_a = v1 ? ph1.decoded.second : ph1.decoded.first;

    // phase 2: the finished user pins the letter that opens the other user's
    // single-user maximum; the follower signals the residual message index
    const ProductInput& arg = v1 ? ts.summary.c2_argmax : ts.summary.c1_argmax;
    int letter = v1 ? ts.c2_letter : ts.c1_letter;
    Codebook cb_fixed{1, one_hot(v1 ? ch.x1_size : ch.x2_size, letter),
                      derive_seed(sc.seed, trial, 4), v1 ? User::one : User::two};
    Codebook cb_b{m_b, v1 ? arg.p2 : arg.p1, derive_seed(sc.seed, trial, 3),
                  v1 ? User::two : User::one};

    ph2_cfg.rule = v1 ? DecodeRule::genie_cond_user2 : DecodeRule::genie_cond_user1;
    TrialRecord ph2 = v1 ? run_genie_conditional(ch, cb_fixed, cb_b, {1, w_b},
                                                 User::one, ph2_cfg, rng)
                         : run_genie_conditional(ch, cb_b, cb_fixed, {w_b, 1},
                                                 User::two, ph2_cfg, rng);
    uint64_t dec_b = v1 ? ph2.decoded.second : ph2.decoded.first;

    TrialRecord rec;
    rec.truth = truth;
    double n_lead = ph1.n1;  // joint rule: n1 == n2
    double n_follow = n_lead + (v1 ? ph2.n2 : ph2.n1);
    rec.n1 = v1 ? n_lead : n_follow;
    rec.n2 = v1 ? n_follow : n_lead;
    rec.n_min = n_lead;
    uint64_t dec_follow = (dec_b >= 1 && dec_a >= 1) ? (dec_b - 1) * m_a + dec_a : 0;
    if (dec_follow > m_follow) dec_follow = 0;
    rec.decoded = v1 ? MessagePair{dec_lead, dec_follow} : MessagePair{dec_follow, dec_lead};
    rec.capped = ph1.capped || ph2.capped;
    rec.error = rec.capped || rec.decoded != truth;
    rec.final_score = ph1.final_score;
    return rec;
}

TrialRecord run_one_trial(const TrialSetup& ts, uint64_t trial) {
    const ExperimentConfig& cfg = *ts.cfg;
    const SchemeSpec& sc = cfg.scheme;
    SplitMix64 rng(derive_seed(cfg.master_seed, trial, 0xA11CE));
    MessagePair truth{rng.below(sc.m1) + 1, rng.below(sc.m2) + 1};

    switch (sc.type) {
    case SchemeSpec::Type::random: {
        Codebook cb1{sc.m1, uniform_pmf(cfg.channel.x1_size),
                     derive_seed(sc.seed, trial, 1), User::one};
        Codebook cb2{sc.m2, uniform_pmf(cfg.channel.x2_size),
                     derive_seed(sc.seed, trial, 2), User::two};
        return run_trial(cfg.channel, cb1, cb2, truth, cfg.decoder, rng);
    }
    case SchemeSpec::Type::concat:
        return run_concat_trial(ts, ts.v1, trial, truth, rng);
    case SchemeSpec::Type::mixed: {
        bool pick_v1 = rng.next_double() < sc.lambda;
        return run_concat_trial(ts, pick_v1 ? ts.v1 : ts.v2, trial, truth, rng);
    }
    }
    throw Error("unknown scheme type");
}

int argmax_one_hot(const std::vector<double>& pmf) {
    return (int)(std::max_element(pmf.begin(), pmf.end()) - pmf.begin());
}

TrialSetup make_setup(const ExperimentConfig& cfg) {
    TrialSetup ts;
    ts.cfg = &cfg;
    const SchemeSpec& sc = cfg.scheme;
    if (sc.type == SchemeSpec::Type::random) return ts;

    ts.summary = channel_summary(cfg.channel);
    ts.c1_letter = argmax_one_hot(ts.summary.c1_argmax.p2);  // user-2 letter freeing user 1
    ts.c2_letter = argmax_one_hot(ts.summary.c2_argmax.p1);

    double r1, r2;
    if (sc.has_phase1_rates) {
        r1 = sc.phase1_rate1;
        r2 = sc.phase1_rate2;
        if (sc.type == SchemeSpec::Type::mixed) {
            // one operating pair given; mirror it for the user-2-first variant
            ts.v2 = build_concat(sc.m1, sc.m2, {r2, r1}, ts.summary.c1, sc.epsilon,
                                 ConcatOrder::v2);
            ts.have_v2 = true;
        }
    } else {
        // operate at the pentagon corners: user-1-first at (C1-eps, d2),
        // user-2-first at (d1, C2-eps)
        PentagonCorners pc = detect_pentagon_corners(cfg.channel, ts.summary, 101);
        r1 = ts.summary.c1 - sc.epsilon;
        r2 = pc.corner_a.r2;
        if (sc.type == SchemeSpec::Type::mixed) {
            ts.v2 = build_concat(sc.m1, sc.m2, {pc.corner_b.r1, ts.summary.c2 - sc.epsilon},
                                 ts.summary.c1, sc.epsilon, ConcatOrder::v2);
            ts.have_v2 = true;
        }
    }
    ts.v1 = build_concat(sc.m1, sc.m2, {r1, r2}, ts.summary.c2, sc.epsilon, ConcatOrder::v1);
    ts.have_v1 = true;
    return ts;
}

void mean_stderr(const std::vector<TrialRecord>& recs, double TrialRecord::*field,
                 double& mean, double& se) {
    double s = 0.0;
    for (const auto& r : recs) s += r.*field;
    mean = s / recs.size();
    double v = 0.0;
    for (const auto& r : recs) {
        double d = r.*field - mean;
        v += d * d;
    }
    se = recs.size() > 1 ? std::sqrt(v / (recs.size() - 1) / recs.size()) : 0.0;
}

} // namespace

void wilson_interval(uint64_t successes, uint64_t n, double& lo, double& hi) {
    const double z = 1.96, z2 = z * z;
    double p = (double)successes / n;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw Error("trials must be at least 1");
    if (cfg.scheme.m1 < 1 || cfg.scheme.m2 < 1)
        throw InvalidScheme("message counts must be at least 1");

    TrialSetup ts = make_setup(cfg);
    std::vector<TrialRecord> recs(cfg.trials);

    if (cfg.workers == 1) {
        for (uint64_t i = 0; i < cfg.trials; ++i) recs[i] = run_one_trial(ts, i);
    } else {
#ifdef MACVLC_HAVE_OPENMP
        int nw = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for num_threads(nw) schedule(dynamic, 16)
        for (int64_t i = 0; i < (int64_t)cfg.trials; ++i)
            recs[i] = run_one_trial(ts, (uint64_t)i);
#else
        for (uint64_t i = 0; i < cfg.trials; ++i) recs[i] = run_one_trial(ts, i);
#endif
    }

    SimSummary s;
    s.trials_used = cfg.trials;
    uint64_t errors = 0, capped = 0;
    for (const auto& r : recs) {
        errors += r.error ? 1 : 0;
        capped += r.capped ? 1 : 0;
    }
    s.pe_hat = (double)errors / cfg.trials;
    wilson_interval(errors, cfg.trials, s.pe_lo, s.pe_hi);
    s.capped_fraction = (double)capped / cfg.trials;
    mean_stderr(recs, &TrialRecord::n1, s.en1, s.en1_stderr);
    mean_stderr(recs, &TrialRecord::n2, s.en2, s.en2_stderr);
    mean_stderr(recs, &TrialRecord::n_min, s.en_min, s.en_min_stderr);
    s.r1_hat = s.en1 > 0.0 ? s.en_min / s.en1 : 1.0;
    s.r2_hat = s.en2 > 0.0 ? s.en_min / s.en2 : 1.0;
    s.log_m1_nats = std::log((double)cfg.scheme.m1);
    s.log_m2_nats = std::log((double)cfg.scheme.m2);
    s.rate1_nats = s.en1 > 0.0 ? s.log_m1_nats / s.en1 : kInf;
    s.rate2_nats = s.en2 > 0.0 ? s.log_m2_nats / s.en2 : kInf;
    s.rate1_bits = s.rate1_nats / std::log(2.0);
    s.rate2_bits = s.rate2_nats / std::log(2.0);
    if (s.capped_fraction > 0.01)
        s.warning = "capped_fraction above 1%; expected-time estimates are truncated";
    return {std::move(s), std::move(recs)};
}

WaldReport wald_check(const std::vector<TrialRecord>& records, double drift,
                      double threshold, double max_step) {
    WaldReport rep;
    rep.max_step = max_step;
    double sum_s = 0.0, sum_n = 0.0;
    std::vector<double> gaps;
    gaps.reserve(records.size());
    for (const auto& r : records) {
        if (r.capped) continue;
        double n = std::max(r.n1, r.n2);
        sum_s += r.final_score;
        sum_n += n;
        gaps.push_back(r.final_score - drift * n);
    }
    rep.used = gaps.size();
    if (rep.used == 0) return rep;
    rep.mean_score = sum_s / rep.used;
    rep.drift_times_en = drift * (sum_n / rep.used);
    // average the per-trial gaps instead of differencing the two means:
    // same estimator, but it cannot cancel catastrophically
    rep.gap = 0.0;
    for (double g : gaps) rep.gap += g;
    rep.gap /= rep.used;
    double v = 0.0;
    for (double g : gaps) {
        double d = g - rep.gap;
        v += d * d;
    }
    rep.gap_stderr = rep.used > 1 ? std::sqrt(v / (rep.used - 1) / rep.used) : 0.0;
    rep.gap_over_threshold = threshold > 0.0 ? rep.gap / threshold : 0.0;
    rep.pass = rep.gap + 3.0 * rep.gap_stderr >= 0.0 &&
               rep.gap - 3.0 * rep.gap_stderr <= max_step;
    return rep;
}

double concentration_check(const std::vector<TrialRecord>& records, double eps_star) {
    if (records.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& r : records) sum += std::max(r.n1, r.n2);
    double mean = sum / records.size();
    uint64_t out = 0;
    for (const auto& r : records)
        if (std::fabs(std::max(r.n1, r.n2) - mean) > eps_star * mean) ++out;
    return (double)out / records.size();
}

EntropySlackReport entropy_slack_check(const std::vector<TrialRecord>& records) {
    EntropySlackReport rep;
    if (records.size() < 1000) throw Error("entropy check needs at least 1000 records");
    std::map<int64_t, uint64_t> counts;
    double sum = 0.0;
    for (const auto& r : records) {
        double n = std::max(r.n1, r.n2);
        counts[(int64_t)llround(n)]++;
        sum += n;
    }
    double mean = sum / records.size();
    double n = (double)records.size();
    double h = 0.0, h2 = 0.0;
    for (const auto& [k, c] : counts) {
        double p = c / n;
        h -= p * std::log(p);
        h2 += p * std::log(p) * std::log(p);
    }
    rep.support = counts.size();
    rep.h_emp_nats = h + (rep.support - 1) / (2.0 * n);  // Miller-Madow
    rep.h_stderr = std::sqrt(std::max(0.0, h2 - h * h) / n);
    rep.bound_nats = stopping_entropy_bound(mean);
    rep.pass = rep.h_emp_nats <= rep.bound_nats + 3.0 * rep.h_stderr;
    return rep;
}

} // namespace macvlc
