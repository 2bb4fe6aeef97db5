#pragma once

#include <utility>
#include <vector>

#include "macvlc/channel.hpp"

namespace macvlc {

struct ProductInput {
    std::vector<double> p1;
    std::vector<double> p2;
};

ProductInput uniform_input(const McChannel& ch);
void validate_input(const McChannel& ch, const ProductInput& in);

struct TimeSharedInput {
    std::vector<double> weights;           // pmf over Q, |Q| <= 2
    std::vector<ProductInput> components;  // one per q
};

// All values in nats.
struct InfoTriple {
    double i1 = 0.0;   // I(X1;Y|X2[,Q])
    double i2 = 0.0;   // I(X2;Y|X1[,Q])
    double i12 = 0.0;  // I(X1,X2;Y[,Q])
};

struct ChannelSummary {
    double c1 = 0.0;  // nats
    double c2 = 0.0;  // nats
    ProductInput c1_argmax;
    ProductInput c2_argmax;
};

enum class WalkKind {
    joint_correct,
    joint_both_wrong,
    joint_w1_wrong,   // w1 wrong, w2 correct
    joint_w2_wrong,   // w2 wrong, w1 correct
    cond_correct_given_x2,
    cond_wrong_given_x2,
    cond_correct_given_x1,
    cond_wrong_given_x1,
    single_correct_user1,
    single_wrong_user1,
    single_correct_user2,
    single_wrong_user2,
};

// Model output laws under a product input: p(y), p(y|x1) (x1-major),
// p(y|x2) (x2-major). These are the reference measures of every walk.
struct OutputLaws {
    std::vector<double> py;
    std::vector<double> py_given_x1;
    std::vector<double> py_given_x2;
};

OutputLaws output_laws(const McChannel& ch, const ProductInput& in);

InfoTriple info_triple(const McChannel& ch, const ProductInput& in);
InfoTriple info_triple_timeshared(const McChannel& ch, const TimeSharedInput& in);

// Capacity of a single-user row-stochastic channel p(y|x) by alternating
// maximization; stops when the capacity bracket is narrower than 1e-9 nats
// and returns the midpoint. Throws NoConvergence after max_iter.
std::pair<double, std::vector<double>> single_user_capacity(
    const std::vector<std::vector<double>>& rows, int max_iter = 100000);

ChannelSummary channel_summary(const McChannel& ch);

// Expected per-step increment of the walk of the given kind, exact finite sum.
double drift(const McChannel& ch, const ProductInput& in, WalkKind kind);

// log E[exp(lambda Z)] under the increment law of the given kind;
// zero-probability (-inf) increments contribute 0 for lambda > 0.
double log_mgf(const McChannel& ch, const ProductInput& in, WalkKind kind, double lambda);

// Unique positive root of log E[exp(lambda Z)] = 0 for a wrong-message kind.
// Returns +inf when Z <= 0 almost surely (the walk can never cross);
// throws NonNegativeDrift when the drift is not negative.
double chernoff_root(const McChannel& ch, const ProductInput& in, WalkKind kind);

struct LambdaConditions {
    bool w2_wrong_ok = false;  // root(joint_w2_wrong) >= i2/i12
    bool w1_wrong_ok = false;  // root(joint_w1_wrong) >= i1/i12
};

LambdaConditions lambda_condition_check(const McChannel& ch, const ProductInput& in);

} // namespace macvlc
