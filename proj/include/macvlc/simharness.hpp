#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macvlc/channel.hpp"
#include "macvlc/decoders.hpp"
#include "macvlc/schemes.hpp"

namespace macvlc {

// what the transmitters run: fresh random codebooks each trial, or one of the
// two-phase concatenated constructions (optionally mixed by a coin flip)
struct SchemeSpec {
    enum class Type { random, concat, mixed };
    Type type = Type::random;
    uint64_t m1 = 2;
    uint64_t m2 = 2;
    double lambda = 0.5;           // mixed: probability of the user-1-first variant
    bool has_phase1_rates = false;
    double phase1_rate1 = 0.0;     // nats/use
    double phase1_rate2 = 0.0;
    double epsilon = 0.05;         // phase-2 backoff below the single-user maximum, nats
    uint64_t seed = 1;
};

struct ExperimentConfig {
    McChannel channel;
    SchemeSpec scheme;
    DecoderConfig decoder;
    uint64_t trials = 1;
    uint64_t master_seed = 1;
    int workers = 1;               // 1 = serial reference path
};

struct SimSummary {
    uint64_t trials_used = 0;
    double pe_hat = 0.0;
    double pe_lo = 0.0;            // Wilson 95%
    double pe_hi = 0.0;
    double en1 = 0.0, en1_stderr = 0.0;
    double en2 = 0.0, en2_stderr = 0.0;
    double en_min = 0.0, en_min_stderr = 0.0;
    double r1_hat = 1.0;           // en_min / en1 (1 when both are 0)
    double r2_hat = 1.0;
    double rate1_nats = 0.0, rate2_nats = 0.0;   // ln M / E[N]; inf when E[N]=0
    double rate1_bits = 0.0, rate2_bits = 0.0;
    double log_m1_nats = 0.0, log_m2_nats = 0.0;
    double capped_fraction = 0.0;
    std::string warning;           // non-empty when capped_fraction > 1%
};

struct ExperimentResult {
    SimSummary summary;
    std::vector<TrialRecord> records;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Wilson score interval, z = 1.96
void wilson_interval(uint64_t successes, uint64_t n, double& lo, double& hi);

struct WaldReport {
    double mean_score = 0.0;       // decoded-walk final score, capped trials excluded
    double drift_times_en = 0.0;
    double gap = 0.0;              // mean_score - drift*E[N]; ~overshoot
    double gap_stderr = 0.0;
    double gap_over_threshold = 0.0;
    double max_step = 0.0;         // largest single increment the correct walk can take
    uint64_t used = 0;
    bool pass = false;
};
// records must come from one single-threshold rule (joint / combined / genie)
WaldReport wald_check(const std::vector<TrialRecord>& records, double drift,
                      double threshold, double max_step);

// empirical Pr(|N - E^[N]| > eps_star * E^[N]) over the per-trial decode times
double concentration_check(const std::vector<TrialRecord>& records, double eps_star);

struct EntropySlackReport {
    double h_emp_nats = 0.0;       // Miller-Madow corrected plug-in entropy
    double h_stderr = 0.0;
    double bound_nats = 0.0;       // 1 + ln(E^[N])
    uint64_t support = 0;
    bool pass = false;
};
EntropySlackReport entropy_slack_check(const std::vector<TrialRecord>& records);

} // namespace macvlc
