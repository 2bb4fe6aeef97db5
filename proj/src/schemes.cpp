#include "macvlc/schemes.hpp"

#include <cmath>

#include "macvlc/rng.hpp"

namespace macvlc {

int codeword_symbol(const Codebook& cb, uint64_t w, uint64_t i) {
    if (w < 1 || w > cb.m) throw MessageOutOfRange("message index outside [1, M]");
    if (i < 1) throw MessageOutOfRange("codeword positions start at 1");
    uint64_t bits = derive_seed(cb.seed, (uint64_t)cb.user, w, i);
    return sample_pmf(cb.input_pmf, u01_from_bits(bits));
}

ConcatScheme build_concat(uint64_t m1, uint64_t m2, std::pair<double, double> phase1_rates,
                          double c_other, double eps, ConcatOrder order) {
    auto [r1, r2] = phase1_rates;
    if (!(eps > 0.0)) throw NonPositiveRate("epsilon must be positive");
    double c_eps = c_other - eps;
    if (!(c_eps > 0.0)) throw NonPositiveRate("phase-2 rate c_other - eps must be positive");
    if (m1 < 1 || m2 < 1) throw NonPositiveRate("message counts must be at least 1");

    double lm1 = std::log((double)m1);
    double lm2 = std::log((double)m2);

    ConcatScheme sc;
    sc.m1 = m1;
    sc.m2 = m2;
    sc.phase1_rates = phase1_rates;
    sc.phase2_rate = c_eps;
    sc.order = order;

    if (order == ConcatOrder::v1) {
        if (!(r1 > 0.0) || r2 < 0.0) throw NonPositiveRate("phase-1 rates invalid for v1");
        if (!(lm1 > 0.0)) throw NonPositiveRate("v1 needs m1 >= 2");
        sc.n1 = lm1 / r1;
        sc.n2 = sc.n1 + lm2 / c_eps - (r2 / c_eps) * sc.n1;
        if (sc.n2 < sc.n1 - 1e-12)
            throw NonPositiveRate("phase-2 length is negative (log M2 < R2* * N1)");
        sc.n2 = std::max(sc.n2, sc.n1);
    } else {
        if (!(r2 > 0.0) || r1 < 0.0) throw NonPositiveRate("phase-1 rates invalid for v2");
        if (!(lm2 > 0.0)) throw NonPositiveRate("v2 needs m2 >= 2");
        sc.n2 = lm2 / r2;
        sc.n1 = sc.n2 + lm1 / c_eps - (r1 / c_eps) * sc.n2;
        if (sc.n1 < sc.n2 - 1e-12)
            throw NonPositiveRate("phase-2 length is negative (log M1 < R1* * N2)");
        sc.n1 = std::max(sc.n1, sc.n2);
    }
    return sc;
}

MixedRates mixed_rates(const MixedScheme& ms, double logm1, double logm2) {
    if (!(ms.lambda >= 0.0 && ms.lambda <= 1.0)) throw Error("lambda must lie in [0,1]");
    if (ms.v1.m1 != ms.v2.m1 || ms.v1.m2 != ms.v2.m2)
        throw Error("mixture components disagree on message counts");
    MixedRates r;
    r.en1 = ms.lambda * ms.v1.n1 + (1.0 - ms.lambda) * ms.v2.n1;
    r.en2 = ms.lambda * ms.v1.n2 + (1.0 - ms.lambda) * ms.v2.n2;
    r.rate1 = logm1 / r.en1;
    r.rate2 = logm2 / r.en2;
    return r;
}

} // namespace macvlc
