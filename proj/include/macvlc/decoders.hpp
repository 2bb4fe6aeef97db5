#pragma once

#include <cstdint>
#include <utility>

#include "macvlc/channel.hpp"
#include "macvlc/infomeasures.hpp"
#include "macvlc/schemes.hpp"

namespace macvlc {

enum class DecodeRule {
    joint,
    genie_cond_user1,  // decode user 1, user 2's message revealed
    genie_cond_user2,  // decode user 2, user 1's message revealed
    combined,
    successive,
    successive_ic,
};

struct DecoderConfig {
    double epsilon = 0.2;   // threshold inflation, > 0
    uint64_t max_steps = 0; // 0 = auto (50x the Wald estimate, clamped)
    DecodeRule rule = DecodeRule::joint;
};

using MessagePair = std::pair<uint64_t, uint64_t>;

struct TrialRecord {
    double n1 = 0.0;  // per-user stopping times in channel uses;
    double n2 = 0.0;  // a genie-known side is reported as 0
    double n_min = 0.0;
    MessagePair decoded{0, 0};  // 0 = no decision (capped)
    MessagePair truth{0, 0};
    bool error = false;
    bool capped = false;
    double final_score = 0.0;  // decoded walk's score at its crossing
    // combined rule: first crossing step of the true pair in each family
    // (joint / conditional-on-w2 / conditional-on-w1); 0 = not reached
    uint64_t truth_cross_joint = 0;
    uint64_t truth_cross_cond1 = 0;
    uint64_t truth_cross_cond2 = 0;
};

struct Hypothesis {
    enum class Form { joint, cond_given_x2, cond_given_x1, single_user1, single_user2 };
    Form form = Form::joint;
    uint64_t w1 = 0;  // message indices used by the form (1-based)
    uint64_t w2 = 0;
};

// Per-letter log-likelihood-ratio increment of the hypothesis walk at
// position i given output y. Returns -inf when the hypothesis assigns the
// output probability zero; throws DegenerateOutput when the reference
// (denominator) law does.
double walk_increment(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                      const Hypothesis& hyp, int y, uint64_t i);

uint64_t auto_max_steps(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                        const DecoderConfig& cfg);

TrialRecord run_joint(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                      MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng);

// known_side names the user whose message the genie reveals; the other is decoded.
TrialRecord run_genie_conditional(const McChannel& ch, const Codebook& cb1,
                                  const Codebook& cb2, MessagePair truth, User known_side,
                                  const DecoderConfig& cfg, SplitMix64& rng);

TrialRecord run_combined(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                         MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng);

// cfg.rule selects plain `successive` or `successive_ic`
TrialRecord run_successive(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                           MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng);

TrialRecord run_trial(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                      MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng);

} // namespace macvlc
