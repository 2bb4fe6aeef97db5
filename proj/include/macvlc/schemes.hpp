#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "macvlc/errors.hpp"

namespace macvlc {

enum class User { one = 1, two = 2 };

// Lazily generated i.i.d. codeword streams: the symbol at position i of
// message w is a pure function of (seed, user, w, i). Codewords are
// conceptually infinite; nothing is materialized.
struct Codebook {
    uint64_t m = 1;
    std::vector<double> input_pmf;
    uint64_t seed = 0;
    User user = User::one;
};

// w in [1..m], i >= 1
int codeword_symbol(const Codebook& cb, uint64_t w, uint64_t i);

enum class ConcatOrder { v1, v2 };  // v1: user 1 finishes first

// Two-phase concatenated code: both users at (R1*, R2*) until the first
// user's message is through, then the finished user pins a fixed letter and
// the other runs alone at c_other - eps.
struct ConcatScheme {
    uint64_t m1 = 1;
    uint64_t m2 = 1;
    std::pair<double, double> phase1_rates{0.0, 0.0};  // (R1*, R2*) nats/use
    double phase2_rate = 0.0;                          // nats/use
    double n1 = 0.0;                                   // decode times, channel uses
    double n2 = 0.0;
    ConcatOrder order = ConcatOrder::v1;
};

ConcatScheme build_concat(uint64_t m1, uint64_t m2, std::pair<double, double> phase1_rates,
                          double c_other, double eps, ConcatOrder order);

struct MixedScheme {
    double lambda = 0.5;  // probability of using the v1 component
    ConcatScheme v1;
    ConcatScheme v2;
};

struct MixedRates {
    double rate1 = 0.0;  // nats/use
    double rate2 = 0.0;
    double en1 = 0.0;  // expected decode times
    double en2 = 0.0;
};

MixedRates mixed_rates(const MixedScheme& ms, double logm1, double logm2);

} // namespace macvlc
