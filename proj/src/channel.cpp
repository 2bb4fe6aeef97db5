#include "macvlc/channel.hpp"

#include <cmath>
#include <cstdlib>

namespace macvlc {

McChannel validate_channel(int x1_size, int x2_size, int y_size,
                           const std::vector<double>& raw) {
    if (x1_size < 1 || x2_size < 1 || y_size < 1)
        throw Error("alphabet sizes must be positive");
    if (raw.size() != (size_t)x1_size * x2_size * y_size)
        throw Error("transition array has wrong length");

    for (size_t i = 0; i < raw.size(); ++i)
        if (raw[i] < 0.0) throw NegativeEntry((int)i);

    McChannel ch{x1_size, x2_size, y_size, raw};
    int rows = x1_size * x2_size;
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int y = 0; y < y_size; ++y) sum += ch.transition[(size_t)r * y_size + y];
        if (std::abs(sum - 1.0) >= 1e-9) throw NonStochastic(r, sum);
        for (int y = 0; y < y_size; ++y) ch.transition[(size_t)r * y_size + y] /= sum;
    }
    return ch;
}

McChannel builtin_channel(Builtin name, double param) {
    switch (name) {
    case Builtin::adder: {
        // Y = X1 + X2 over {0,1,2}, deterministic
        std::vector<double> w(2 * 2 * 3, 0.0);
        for (int x1 = 0; x1 < 2; ++x1)
            for (int x2 = 0; x2 < 2; ++x2)
                w[(size_t)(x1 * 2 + x2) * 3 + (x1 + x2)] = 1.0;
        return validate_channel(2, 2, 3, w);
    }
    case Builtin::noisy_adder: {
        // adder followed by a symmetric ternary channel: keep with prob 1-d,
        // move to each other symbol with prob d/2
        double d = param;
        if (d < 0.0 || d >= 1.0) throw Error("noisy_adder delta must be in [0,1)");
        std::vector<double> w(2 * 2 * 3, 0.0);
        for (int x1 = 0; x1 < 2; ++x1)
            for (int x2 = 0; x2 < 2; ++x2) {
                int s = x1 + x2;
                for (int y = 0; y < 3; ++y)
                    w[(size_t)(x1 * 2 + x2) * 3 + y] = (y == s) ? 1.0 - d : d / 2.0;
            }
        return validate_channel(2, 2, 3, w);
    }
    case Builtin::multiplier: {
        std::vector<double> w(2 * 2 * 2, 0.0);
        for (int x1 = 0; x1 < 2; ++x1)
            for (int x2 = 0; x2 < 2; ++x2)
                w[(size_t)(x1 * 2 + x2) * 2 + (x1 * x2)] = 1.0;
        return validate_channel(2, 2, 2, w);
    }
    case Builtin::erasure_adder: {
        // adder output erased to symbol 3 with prob g
        double g = param;
        if (g < 0.0 || g >= 1.0) throw Error("erasure_adder gamma must be in [0,1)");
        std::vector<double> w(2 * 2 * 4, 0.0);
        for (int x1 = 0; x1 < 2; ++x1)
            for (int x2 = 0; x2 < 2; ++x2) {
                w[(size_t)(x1 * 2 + x2) * 4 + (x1 + x2)] = 1.0 - g;
                w[(size_t)(x1 * 2 + x2) * 4 + 3] = g;
            }
        return validate_channel(2, 2, 4, w);
    }
    }
    throw UnknownName("?");
}

namespace {

bool parse_name(const std::string& s, std::string& base, double& param, bool& has_param) {
    auto open = s.find('(');
    if (open == std::string::npos) {
        base = s;
        has_param = false;
        return true;
    }
    if (s.back() != ')') return false;
    base = s.substr(0, open);
    std::string arg = s.substr(open + 1, s.size() - open - 2);
    char* end = nullptr;
    param = std::strtod(arg.c_str(), &end);
    if (end == arg.c_str() || *end != '\0') return false;
    has_param = true;
    return true;
}

} // namespace

McChannel builtin_channel(const std::string& name) {
    std::string base;
    double param = 0.0;
    bool has_param = false;
    if (!parse_name(name, base, param, has_param)) throw UnknownName(name);

    if (base == "adder" && !has_param) return builtin_channel(Builtin::adder);
    if (base == "multiplier" && !has_param) return builtin_channel(Builtin::multiplier);
    if (base == "noisy_adder" && has_param) return builtin_channel(Builtin::noisy_adder, param);
    if (base == "erasure_adder" && has_param) return builtin_channel(Builtin::erasure_adder, param);
    throw UnknownName(name);
}

bool is_builtin_name(const std::string& name) {
    try {
        builtin_channel(name);
        return true;
    } catch (const Error&) {
        return false;
    }
}

int sample_output(const McChannel& ch, int x1, int x2, SplitMix64& rng) {
    if (x1 < 0 || x1 >= ch.x1_size || x2 < 0 || x2 >= ch.x2_size)
        throw SymbolOutOfRange("input symbol outside channel alphabet");
    return sample_pmf(ch.row(x1, x2), rng.next_double());
}

} // namespace macvlc
