#pragma once

#include <string>
#include <vector>

#include "macvlc/errors.hpp"
#include "macvlc/rng.hpp"

namespace macvlc {

// Two-input discrete memoryless channel W[x1][x2][y], stored flat
// (x1-major, x2 middle, y minor). Immutable after construction; safe to
// share across trial workers.
struct McChannel {
    int x1_size = 0;
    int x2_size = 0;
    int y_size = 0;
    std::vector<double> transition;

    double p(int x1, int x2, int y) const {
        return transition[(size_t)(x1 * x2_size + x2) * y_size + y];
    }

    std::vector<double> row(int x1, int x2) const {
        auto it = transition.begin() + (size_t)(x1 * x2_size + x2) * y_size;
        return std::vector<double>(it, it + y_size);
    }
};

// Validates entries and row sums; rows whose sum deviates from 1 by less
// than 1e-9 are renormalized, larger deviations are rejected.
McChannel validate_channel(int x1_size, int x2_size, int y_size,
                           const std::vector<double>& raw);

enum class Builtin { adder, noisy_adder, multiplier, erasure_adder };

McChannel builtin_channel(Builtin name, double param = 0.0);

// Accepts "adder", "multiplier", "noisy_adder(0.1)", "erasure_adder(0.3)".
// Throws UnknownName otherwise.
McChannel builtin_channel(const std::string& name);
bool is_builtin_name(const std::string& name);

int sample_output(const McChannel& ch, int x1, int x2, SplitMix64& rng);

} // namespace macvlc
