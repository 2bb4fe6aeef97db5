#include "macvlc/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace macvlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInf; }

// log tables shared by one trial's walks
struct Ctx {
    int A, B, Y;
    std::vector<double> lw;    // ln W(y|x1,x2), (a*B+b)*Y + y
    std::vector<double> lpy;   // ln p(y)
    std::vector<double> lpy1;  // ln p(y|x1), a*Y + y
    std::vector<double> lpy2;  // ln p(y|x2), b*Y + y
};

Ctx make_ctx(const McChannel& ch, const Codebook& cb1, const Codebook& cb2) {
    ProductInput in{cb1.input_pmf, cb2.input_pmf};
    validate_input(ch, in);
    OutputLaws laws = output_laws(ch, in);
    Ctx c;
    c.A = ch.x1_size;
    c.B = ch.x2_size;
    c.Y = ch.y_size;
    c.lw.resize(ch.transition.size());
    for (size_t i = 0; i < ch.transition.size(); ++i) c.lw[i] = safe_log(ch.transition[i]);
    c.lpy.resize(c.Y);
    for (int y = 0; y < c.Y; ++y) c.lpy[y] = safe_log(laws.py[y]);
    c.lpy1.resize(laws.py_given_x1.size());
    for (size_t i = 0; i < c.lpy1.size(); ++i) c.lpy1[i] = safe_log(laws.py_given_x1[i]);
    c.lpy2.resize(laws.py_given_x2.size());
    for (size_t i = 0; i < c.lpy2.size(); ++i) c.lpy2[i] = safe_log(laws.py_given_x2[i]);
    return c;
}

double threshold(double eps, double m) { return (1.0 + eps) * std::log(m); }

void check_truth(const Codebook& cb1, const Codebook& cb2, MessagePair truth) {
    if (truth.first < 1 || truth.first > cb1.m || truth.second < 1 || truth.second > cb2.m)
        throw MessageOutOfRange("truth pair outside message ranges");
}

} // namespace

double walk_increment(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                      const Hypothesis& hyp, int y, uint64_t i) {
    if (y < 0 || y >= ch.y_size) throw SymbolOutOfRange("output symbol outside alphabet");
    ProductInput in{cb1.input_pmf, cb2.input_pmf};
    validate_input(ch, in);
    OutputLaws laws = output_laws(ch, in);

    double num = 0.0, den = 0.0;
    switch (hyp.form) {
    case Hypothesis::Form::joint: {
        int a = codeword_symbol(cb1, hyp.w1, i);
        int b = codeword_symbol(cb2, hyp.w2, i);
        num = ch.p(a, b, y);
        den = laws.py[y];
        break;
    }
    case Hypothesis::Form::cond_given_x2: {
        int a = codeword_symbol(cb1, hyp.w1, i);
        int b = codeword_symbol(cb2, hyp.w2, i);
        num = ch.p(a, b, y);
        den = laws.py_given_x2[(size_t)b * ch.y_size + y];
        break;
    }
    case Hypothesis::Form::cond_given_x1: {
        int a = codeword_symbol(cb1, hyp.w1, i);
        int b = codeword_symbol(cb2, hyp.w2, i);
        num = ch.p(a, b, y);
        den = laws.py_given_x1[(size_t)a * ch.y_size + y];
        break;
    }
    case Hypothesis::Form::single_user1: {
        int a = codeword_symbol(cb1, hyp.w1, i);
        num = laws.py_given_x1[(size_t)a * ch.y_size + y];
        den = laws.py[y];
        break;
    }
    case Hypothesis::Form::single_user2: {
        int b = codeword_symbol(cb2, hyp.w2, i);
        num = laws.py_given_x2[(size_t)b * ch.y_size + y];
        den = laws.py[y];
        break;
    }
    }
    if (den <= 0.0)
        throw DegenerateOutput("output has probability zero under the reference law");
    return num > 0.0 ? std::log(num / den) : -kInf;
}

uint64_t auto_max_steps(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                        const DecoderConfig& cfg) {
    ProductInput in{cb1.input_pmf, cb2.input_pmf};
    InfoTriple t = info_triple(ch, in);
    double lm1 = std::log((double)cb1.m);
    double lm2 = std::log((double)cb2.m);

    auto wald = [&](double lt, double d) { return d > 1e-12 ? lt / d : kInf; };
    double est = 0.0;
    switch (cfg.rule) {
    case DecodeRule::joint:
        est = wald(lm1 + lm2, t.i12);
        break;
    case DecodeRule::combined:
        est = std::max({wald(lm1 + lm2, t.i12), wald(lm1, t.i1), wald(lm2, t.i2)});
        break;
    case DecodeRule::genie_cond_user1:
        est = wald(lm1, t.i1);
        break;
    case DecodeRule::genie_cond_user2:
        est = wald(lm2, t.i2);
        break;
    case DecodeRule::successive:
    case DecodeRule::successive_ic: {
        double iy1 = drift(ch, in, WalkKind::single_correct_user1);
        double iy2 = drift(ch, in, WalkKind::single_correct_user2);
        est = std::max(wald(lm1, iy1), wald(lm2, iy2));
        break;
    }
    }
    if (!std::isfinite(est)) return 1000;  // nothing can cross; cap quickly
    double steps = std::ceil(50.0 * (1.0 + cfg.epsilon) * est);
    return (uint64_t)std::clamp(steps, 1000.0, 1e8);
}

TrialRecord run_joint(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                      MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng) {
    check_truth(cb1, cb2, truth);
    Ctx ctx = make_ctx(ch, cb1, cb2);
    const uint64_t M1 = cb1.m, M2 = cb2.m;
    const double T = threshold(cfg.epsilon, (double)M1 * (double)M2);
    const uint64_t cap = cfg.max_steps ? cfg.max_steps : auto_max_steps(ch, cb1, cb2, cfg);

    std::vector<double> score(M1 * M2, 0.0);
    std::vector<int> s1(M1 + 1), s2(M2 + 1);
    std::vector<double> incj((size_t)ctx.A * ctx.B);

    TrialRecord rec;
    rec.truth = truth;
    for (uint64_t n = 1; n <= cap; ++n) {
        for (uint64_t w = 1; w <= M1; ++w) s1[w] = codeword_symbol(cb1, w, n);
        for (uint64_t w = 1; w <= M2; ++w) s2[w] = codeword_symbol(cb2, w, n);
        int y = sample_output(ch, s1[truth.first], s2[truth.second], rng);
        double lpyy = ctx.lpy[y];
        for (int ab = 0; ab < ctx.A * ctx.B; ++ab)
            incj[ab] = ctx.lw[(size_t)ab * ctx.Y + y] - lpyy;

        size_t idx = 0;
        for (uint64_t w1 = 1; w1 <= M1; ++w1) {
            int ia = s1[w1] * ctx.B;
            for (uint64_t w2 = 1; w2 <= M2; ++w2, ++idx) score[idx] += incj[ia + s2[w2]];
        }
        idx = 0;
        for (uint64_t w1 = 1; w1 <= M1; ++w1)
            for (uint64_t w2 = 1; w2 <= M2; ++w2, ++idx)
                if (score[idx] >= T) {
                    rec.n1 = rec.n2 = rec.n_min = (double)n;
                    rec.decoded = {w1, w2};
                    rec.error = rec.decoded != truth;
                    rec.final_score = score[idx];
                    return rec;
                }
    }
    rec.n1 = rec.n2 = rec.n_min = (double)cap;
    rec.capped = true;
    rec.error = true;
    return rec;
}

TrialRecord run_genie_conditional(const McChannel& ch, const Codebook& cb1,
                                  const Codebook& cb2, MessagePair truth, User known_side,
                                  const DecoderConfig& cfg, SplitMix64& rng) {
    check_truth(cb1, cb2, truth);
    Ctx ctx = make_ctx(ch, cb1, cb2);
    const bool decode_user1 = (known_side == User::two);
    const Codebook& dec_cb = decode_user1 ? cb1 : cb2;
    const Codebook& known_cb = decode_user1 ? cb2 : cb1;
    const uint64_t known_w = decode_user1 ? truth.second : truth.first;
    const uint64_t M = dec_cb.m;
    const double T = threshold(cfg.epsilon, (double)M);
    const uint64_t cap = cfg.max_steps ? cfg.max_steps : auto_max_steps(ch, cb1, cb2, cfg);

    std::vector<double> score(M + 1, 0.0);
    std::vector<int> s(M + 1);

    TrialRecord rec;
    rec.truth = truth;
    for (uint64_t n = 1; n <= cap; ++n) {
        for (uint64_t w = 1; w <= M; ++w) s[w] = codeword_symbol(dec_cb, w, n);
        int xk = codeword_symbol(known_cb, known_w, n);
        uint64_t truth_w = decode_user1 ? truth.first : truth.second;
        int y = decode_user1 ? sample_output(ch, s[truth_w], xk, rng)
                             : sample_output(ch, xk, s[truth_w], rng);
        double den = decode_user1 ? ctx.lpy2[(size_t)xk * ctx.Y + y]
                                  : ctx.lpy1[(size_t)xk * ctx.Y + y];
        for (uint64_t w = 1; w <= M; ++w) {
            double lw = decode_user1 ? ctx.lw[((size_t)s[w] * ctx.B + xk) * ctx.Y + y]
                                     : ctx.lw[((size_t)xk * ctx.B + s[w]) * ctx.Y + y];
            score[w] += lw - den;
        }
        for (uint64_t w = 1; w <= M; ++w)
            if (score[w] >= T) {
                if (decode_user1) {
                    rec.n1 = (double)n;
                    rec.n2 = 0.0;
                    rec.decoded = {w, truth.second};
                } else {
                    rec.n2 = (double)n;
                    rec.n1 = 0.0;
                    rec.decoded = {truth.first, w};
                }
                rec.n_min = 0.0;  // the revealed side costs no observations
                rec.error = rec.decoded != truth;
                rec.final_score = score[w];
                return rec;
            }
    }
    rec.capped = true;
    rec.error = true;
    if (decode_user1) {
        rec.n1 = (double)cap;
        rec.decoded = {0, truth.second};
    } else {
        rec.n2 = (double)cap;
        rec.decoded = {truth.first, 0};
    }
    rec.n_min = 0.0;
    return rec;
}

TrialRecord run_combined(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                         MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng) {
    check_truth(cb1, cb2, truth);
    Ctx ctx = make_ctx(ch, cb1, cb2);
    const uint64_t M1 = cb1.m, M2 = cb2.m;
    const double Tj = threshold(cfg.epsilon, (double)M1 * (double)M2);
    const double T1 = threshold(cfg.epsilon, (double)M1);
    const double T2 = threshold(cfg.epsilon, (double)M2);
    const uint64_t cap = cfg.max_steps ? cfg.max_steps : auto_max_steps(ch, cb1, cb2, cfg);

    // Conditional-family scores decompose against the joint one:
    //   S_cond_on_w2(w1,w2) = S_joint(w1,w2) - U2(w2)
    //   S_cond_on_w1(w1,w2) = S_joint(w1,w2) - U1(w1)
    // where U_k(w) is the single-user walk of w; valid whenever S_joint is
    // finite (a dead pair is dead in every family).
    std::vector<double> J(M1 * M2, 0.0), U1(M1 + 1, 0.0), U2(M2 + 1, 0.0);
    std::vector<uint8_t> cj(M1 * M2, 0), c1(M1 * M2, 0), c2(M1 * M2, 0);
    std::vector<int> s1(M1 + 1), s2(M2 + 1);
    std::vector<double> incj((size_t)ctx.A * ctx.B);

    const size_t tidx = (truth.first - 1) * M2 + (truth.second - 1);
    TrialRecord rec;
    rec.truth = truth;

    for (uint64_t n = 1; n <= cap; ++n) {
        for (uint64_t w = 1; w <= M1; ++w) s1[w] = codeword_symbol(cb1, w, n);
        for (uint64_t w = 1; w <= M2; ++w) s2[w] = codeword_symbol(cb2, w, n);
        int y = sample_output(ch, s1[truth.first], s2[truth.second], rng);
        double lpyy = ctx.lpy[y];
        for (int ab = 0; ab < ctx.A * ctx.B; ++ab)
            incj[ab] = ctx.lw[(size_t)ab * ctx.Y + y] - lpyy;
        for (uint64_t w = 1; w <= M1; ++w) U1[w] += ctx.lpy1[(size_t)s1[w] * ctx.Y + y] - lpyy;
        for (uint64_t w = 1; w <= M2; ++w) U2[w] += ctx.lpy2[(size_t)s2[w] * ctx.Y + y] - lpyy;

        long first = -1;
        size_t idx = 0;
        for (uint64_t w1 = 1; w1 <= M1; ++w1) {
            int ia = s1[w1] * ctx.B;
            for (uint64_t w2 = 1; w2 <= M2; ++w2, ++idx) {
                double j = (J[idx] += incj[ia + s2[w2]]);
                if (j > -kInf) {
                    if (!cj[idx] && j >= Tj) cj[idx] = 1;
                    if (!c1[idx] && j - U2[w2] >= T1) c1[idx] = 1;
                    if (!c2[idx] && j - U1[w1] >= T2) c2[idx] = 1;
                }
                if (first < 0 && cj[idx] && c1[idx] && c2[idx]) first = (long)idx;
            }
        }
        if (!rec.truth_cross_joint && cj[tidx]) rec.truth_cross_joint = n;
        if (!rec.truth_cross_cond1 && c1[tidx]) rec.truth_cross_cond1 = n;
        if (!rec.truth_cross_cond2 && c2[tidx]) rec.truth_cross_cond2 = n;

        if (first >= 0) {
            rec.n1 = rec.n2 = rec.n_min = (double)n;
            rec.decoded = {(uint64_t)first / M2 + 1, (uint64_t)first % M2 + 1};
            rec.error = rec.decoded != truth;
            rec.final_score = J[first];

            // keep the three truth walks running so the stopping-time
            // comparison N_comb <= max(crossings) can be checked per trial
            double jt = J[tidx], u1t = U1[truth.first], u2t = U2[truth.second];
            for (uint64_t m = n + 1;
                 m <= cap &&
                 !(rec.truth_cross_joint && rec.truth_cross_cond1 && rec.truth_cross_cond2);
                 ++m) {
                int a = codeword_symbol(cb1, truth.first, m);
                int b = codeword_symbol(cb2, truth.second, m);
                int yy = sample_output(ch, a, b, rng);
                jt += ctx.lw[((size_t)a * ctx.B + b) * ctx.Y + yy] - ctx.lpy[yy];
                u1t += ctx.lpy1[(size_t)a * ctx.Y + yy] - ctx.lpy[yy];
                u2t += ctx.lpy2[(size_t)b * ctx.Y + yy] - ctx.lpy[yy];
                if (!rec.truth_cross_joint && jt >= Tj) rec.truth_cross_joint = m;
                if (!rec.truth_cross_cond1 && jt - u2t >= T1) rec.truth_cross_cond1 = m;
                if (!rec.truth_cross_cond2 && jt - u1t >= T2) rec.truth_cross_cond2 = m;
            }
            return rec;
        }
    }
    rec.n1 = rec.n2 = rec.n_min = (double)cap;
    rec.capped = true;
    rec.error = true;
    return rec;
}

TrialRecord run_successive(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                           MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng) {
    check_truth(cb1, cb2, truth);
    Ctx ctx = make_ctx(ch, cb1, cb2);
    const bool ic = cfg.rule == DecodeRule::successive_ic;
    const uint64_t M1 = cb1.m, M2 = cb2.m;
    const double T1 = threshold(cfg.epsilon, (double)M1);
    const double T2 = threshold(cfg.epsilon, (double)M2);
    const uint64_t cap = cfg.max_steps ? cfg.max_steps : auto_max_steps(ch, cb1, cb2, cfg);

    std::vector<double> sc1(M1 + 1, 0.0), sc2(M2 + 1, 0.0);
    std::vector<int> s1(M1 + 1), s2(M2 + 1);
    uint64_t n1 = 0, n2 = 0, dec1 = 0, dec2 = 0;
    double fs1 = 0.0, fs2 = 0.0;
    bool ic_dead1 = false, ic_dead2 = false;  // cancellation hit an impossible output

    for (uint64_t n = 1; n <= cap && (!n1 || !n2) && !ic_dead1 && !ic_dead2; ++n) {
        // the switch to conditional increments happens the step after the
        // other user's decision, so snapshot before updating either walk set
        const bool had1 = n1 != 0, had2 = n2 != 0;
        int x1t = codeword_symbol(cb1, truth.first, n);
        int x2t = codeword_symbol(cb2, truth.second, n);
        int y = sample_output(ch, x1t, x2t, rng);
        double lpyy = ctx.lpy[y];

        if (!had1) {
            if (ic && had2) {
                int bh = codeword_symbol(cb2, dec2, n);  // decoded (maybe wrong) symbol
                double den = ctx.lpy2[(size_t)bh * ctx.Y + y];
                if (den == -kInf) {
                    ic_dead1 = true;
                } else {
                    for (uint64_t w = 1; w <= M1; ++w) {
                        s1[w] = codeword_symbol(cb1, w, n);
                        sc1[w] += ctx.lw[((size_t)s1[w] * ctx.B + bh) * ctx.Y + y] - den;
                    }
                }
            } else {
                for (uint64_t w = 1; w <= M1; ++w) {
                    s1[w] = codeword_symbol(cb1, w, n);
                    sc1[w] += ctx.lpy1[(size_t)s1[w] * ctx.Y + y] - lpyy;
                }
            }
            if (!ic_dead1)
                for (uint64_t w = 1; w <= M1; ++w)
                    if (sc1[w] >= T1) {
                        n1 = n;
                        dec1 = w;
                        fs1 = sc1[w];
                        break;
                    }
        }
        if (!had2) {
            if (ic && had1) {
                int ah = codeword_symbol(cb1, dec1, n);
                double den = ctx.lpy1[(size_t)ah * ctx.Y + y];
                if (den == -kInf) {
                    ic_dead2 = true;
                } else {
                    for (uint64_t w = 1; w <= M2; ++w) {
                        s2[w] = codeword_symbol(cb2, w, n);
                        sc2[w] += ctx.lw[((size_t)ah * ctx.B + s2[w]) * ctx.Y + y] - den;
                    }
                }
            } else {
                for (uint64_t w = 1; w <= M2; ++w) {
                    s2[w] = codeword_symbol(cb2, w, n);
                    sc2[w] += ctx.lpy2[(size_t)s2[w] * ctx.Y + y] - lpyy;
                }
            }
            if (!ic_dead2)
                for (uint64_t w = 1; w <= M2; ++w)
                    if (sc2[w] >= T2) {
                        n2 = n;
                        dec2 = w;
                        fs2 = sc2[w];
                        break;
                    }
        }
    }

    TrialRecord rec;
    rec.truth = truth;
    rec.capped = (!n1 || !n2);
    rec.n1 = n1 ? (double)n1 : (double)cap;
    rec.n2 = n2 ? (double)n2 : (double)cap;
    rec.n_min = std::min(rec.n1, rec.n2);
    rec.decoded = {dec1, dec2};
    rec.error = rec.capped || rec.decoded != truth;
    rec.final_score = n1 ? fs1 : fs2;
    return rec;
}

TrialRecord run_trial(const McChannel& ch, const Codebook& cb1, const Codebook& cb2,
                      MessagePair truth, const DecoderConfig& cfg, SplitMix64& rng) {
    switch (cfg.rule) {
    case DecodeRule::joint:
        return run_joint(ch, cb1, cb2, truth, cfg, rng);
    case DecodeRule::genie_cond_user1:
        return run_genie_conditional(ch, cb1, cb2, truth, User::two, cfg, rng);
    case DecodeRule::genie_cond_user2:
        return run_genie_conditional(ch, cb1, cb2, truth, User::one, cfg, rng);
    case DecodeRule::combined:
        return run_combined(ch, cb1, cb2, truth, cfg, rng);
    case DecodeRule::successive:
    case DecodeRule::successive_ic:
        return run_successive(ch, cb1, cb2, truth, cfg, rng);
    }
    throw Error("unknown decoder rule");
}

} // namespace macvlc
