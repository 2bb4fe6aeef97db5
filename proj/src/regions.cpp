#include "macvlc/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#ifdef MACVLC_HAVE_OPENMP
#include <omp.h>
#endif

namespace macvlc {

namespace {

double cross(const RatePair& o, const RatePair& a, const RatePair& b) {
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

double dist2(const RatePair& a, const RatePair& b) {
    double dx = a.r1 - b.r1, dy = a.r2 - b.r2;
    return dx * dx + dy * dy;
}

double point_segment_dist(const RatePair& p, const RatePair& a, const RatePair& b) {
    double vx = b.r1 - a.r1, vy = b.r2 - a.r2;
    double len2 = vx * vx + vy * vy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.r1 - a.r1) * vx + (p.r2 - a.r2) * vy) / len2, 0.0, 1.0);
    RatePair proj{a.r1 + t * vx, a.r2 + t * vy};
    return std::sqrt(dist2(p, proj));
}

bool convex_contains(const std::vector<RatePair>& hull, RatePair p, double tol) {
    if (hull.empty()) return false;
    if (hull.size() == 1) return std::sqrt(dist2(hull[0], p)) <= tol;
    if (hull.size() == 2) return point_segment_dist(p, hull[0], hull[1]) <= tol;
    for (size_t i = 0; i < hull.size(); ++i) {
        const RatePair& a = hull[i];
        const RatePair& b = hull[(i + 1) % hull.size()];
        // ccw hull: inside means never strictly to the right of an edge;
        // tol is a distance, so scale by the edge length
        double c = cross(a, b, p);
        if (c < -tol * std::sqrt(std::max(dist2(a, b), 1e-300))) return false;
    }
    return true;
}

double dist_to_convex(const std::vector<RatePair>& hull, RatePair p) {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (convex_contains(hull, p, 0.0)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < hull.size(); ++i)
        best = std::min(best, point_segment_dist(p, hull[i], hull[(i + 1) % hull.size()]));
    return best;
}

// Sutherland-Hodgman clip of a convex polygon by a*x + b*y <= c
std::vector<RatePair> clip_halfplane(const std::vector<RatePair>& poly, double a, double b,
                                     double c) {
    std::vector<RatePair> out;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const RatePair& p = poly[i];
        const RatePair& q = poly[(i + 1) % n];
        double fp = a * p.r1 + b * p.r2 - c;
        double fq = a * q.r1 + b * q.r2 - c;
        if (fp <= 0.0) out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            double t = fp / (fp - fq);
            out.push_back({p.r1 + t * (q.r1 - p.r1), p.r2 + t * (q.r2 - p.r2)});
        }
    }
    return out;
}

// rectangle [0,w] x [0,h] clipped by s*R1 + R2 <= cap (skipped when s-row
// degenerates to a redundant bound)
std::vector<RatePair> clipped_box(double w, double h, double s, double cap) {
    w = std::max(w, 0.0);
    h = std::max(h, 0.0);
    std::vector<RatePair> poly{{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}};
    return clip_halfplane(poly, s, 1.0, cap);
}

void validate_query(const RegionQuery& q) {
    if (!(q.r1 >= 0.0 && q.r1 <= 1.0 && q.r2 >= 0.0 && q.r2 <= 1.0))
        throw DegenerateQuery("r1, r2 must lie in [0,1]");
    if (q.r1 == 0.0) {
        if (q.r2 != 0.0)
            throw DegenerateQuery("r1 = 0 with r2 > 0 is inconsistent with r2 = s*r1");
        return;  // rectangle case, s unused
    }
    if (!(q.s > 0.0)) throw DegenerateQuery("s must be positive");
    if (std::abs(q.s * q.r1 - q.r2) > 1e-9)
        throw DegenerateQuery("query violates r2 = s*r1");
}

RateRegion make_rectangle(const ChannelSummary& s, const RegionQuery& q) {
    RateRegion reg;
    reg.provenance = Provenance::rectangle;
    reg.query = q;
    reg.hull = convex_hull({{0.0, 0.0}, {s.c1, 0.0}, {s.c1, s.c2}, {0.0, s.c2}});
    return reg;
}

} // namespace

PentagonCorners pentagon_corners(const Pentagon& p) {
    const InfoTriple& t = p.triple;
    return {{t.i1, t.i12 - t.i1}, {t.i12 - t.i2, t.i2}};
}

std::vector<RatePair> pentagon_vertices(const InfoTriple& t) {
    double a2 = std::max(t.i12 - t.i1, 0.0);
    double b1 = std::max(t.i12 - t.i2, 0.0);
    return {{0.0, 0.0}, {t.i1, 0.0}, {t.i1, a2}, {b1, t.i2}, {0.0, t.i2}};
}

std::vector<RatePair> convex_hull(std::vector<RatePair> pts) {
    if (pts.empty()) return {};
    std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) {
        return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
    });
    // drop near-duplicates (1e-9)
    std::vector<RatePair> u;
    for (const auto& p : pts)
        if (u.empty() || std::abs(p.r1 - u.back().r1) > 1e-9 || std::abs(p.r2 - u.back().r2) > 1e-9)
            u.push_back(p);
    if (u.size() < 3) return u;

    std::vector<RatePair> h(2 * u.size());
    size_t k = 0;
    for (size_t i = 0; i < u.size(); ++i) {  // lower chain
        while (k >= 2 && cross(h[k - 2], h[k - 1], u[i]) <= 0.0) --k;
        h[k++] = u[i];
    }
    for (size_t i = u.size() - 1, t = k + 1; i-- > 0;) {  // upper chain
        while (k >= t && cross(h[k - 2], h[k - 1], u[i]) <= 0.0) --k;
        h[k++] = u[i];
    }
    h.resize(k - 1);

    // grid sweeps leave vertices a float-noise hair off an edge; drop any
    // vertex within 1e-9 of the segment joining its neighbours
    bool changed = h.size() > 3;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < h.size() && h.size() > 3; ++i) {
            const RatePair& prev = h[(i + h.size() - 1) % h.size()];
            const RatePair& next = h[(i + 1) % h.size()];
            if (point_segment_dist(h[i], prev, next) < 1e-9) {
                h.erase(h.begin() + i);
                changed = true;
                break;
            }
        }
    }
    size_t lo = 0;
    for (size_t i = 1; i < h.size(); ++i)
        if (h[i].r1 < h[lo].r1 || (h[i].r1 == h[lo].r1 && h[i].r2 < h[lo].r2)) lo = i;
    std::rotate(h.begin(), h.begin() + lo, h.end());
    return h;
}

bool region_contains(const RateRegion& reg, RatePair p, double tol) {
    if (reg.provenance == Provenance::timeshare_curve) {
        // union of dominated rectangles under the curve points
        for (const auto& c : reg.hull)
            if (p.r1 <= c.r1 + tol && p.r2 <= c.r2 + tol) return true;
        return false;
    }
    return convex_contains(reg.hull, p, tol);
}

double hull_distance(const RateRegion& a, const RateRegion& b) {
    double d = 0.0;
    for (const auto& p : a.hull) d = std::max(d, dist_to_convex(b.hull, p));
    for (const auto& p : b.hull) d = std::max(d, dist_to_convex(a.hull, p));
    return d;
}

std::vector<std::vector<double>> simplex_grid(int dim, int steps) {
    if (dim < 1 || steps < 1) throw Error("simplex grid needs dim >= 1, steps >= 1");
    std::vector<std::vector<double>> out;
    std::vector<int> k(dim, 0);
    // enumerate compositions of `steps` into dim nonnegative parts
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == dim - 1) {
            k[pos] = left;
            std::vector<double> pmf(dim);
            for (int i = 0; i < dim; ++i) pmf[i] = (double)k[i] / steps;
            out.push_back(std::move(pmf));
            return;
        }
        for (int v = 0; v <= left; ++v) {
            k[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, steps);
    return out;
}

std::vector<ProductInput> product_input_grid(const McChannel& ch, int grid) {
    if (grid < 11) throw Error("grid must be at least 11");
    auto g1 = simplex_grid(ch.x1_size, grid - 1);
    auto g2 = simplex_grid(ch.x2_size, grid - 1);
    std::vector<ProductInput> out;
    out.reserve(g1.size() * g2.size());
    for (const auto& p1 : g1)
        for (const auto& p2 : g2) out.push_back({p1, p2});
    return out;
}

std::vector<InfoTriple> info_triples(const McChannel& ch,
                                     const std::vector<ProductInput>& inputs, int workers) {
    std::vector<InfoTriple> out(inputs.size());
#ifdef MACVLC_HAVE_OPENMP
    if (workers != 1) {
        int n = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(n)
        for (long i = 0; i < (long)inputs.size(); ++i) out[i] = info_triple(ch, inputs[i]);
        return out;
    }
#endif
    for (size_t i = 0; i < inputs.size(); ++i) out[i] = info_triple(ch, inputs[i]);
    return out;
}

ConstraintRhs outer_bound_constraints(const InfoTriple& t, const ChannelSummary& s,
                                      const RegionQuery& q) {
    validate_query(q);
    ConstraintRhs r;
    r.b1 = q.r1 * t.i1 + (1.0 - q.r1) * s.c1;
    r.b2 = q.r2 * t.i2 + (1.0 - q.r2) * s.c2;
    r.b12 = q.r2 * t.i12 + q.s * (1.0 - q.r1) * s.c1 + (1.0 - q.r2) * s.c2;
    return r;
}

RateRegion block_capacity_region(const McChannel& ch, int grid, int workers) {
    auto inputs = product_input_grid(ch, grid);
    auto triples = info_triples(ch, inputs, workers);
    std::vector<RatePair> cloud;
    cloud.reserve(triples.size() * 5);
    for (const auto& t : triples)
        for (const auto& v : pentagon_vertices(t)) cloud.push_back(v);
    RateRegion reg;
    reg.provenance = Provenance::r_mac;
    reg.hull = convex_hull(std::move(cloud));
    return reg;
}

RateRegion outer_region(const McChannel& ch, const RegionQuery& q, int grid, int workers) {
    validate_query(q);
    ChannelSummary sum = channel_summary(ch);
    if (q.r1 == 0.0 && q.r2 == 0.0) return make_rectangle(sum, q);

    // work in (R1' = s R1, R2): contract R_MAC by r2, translate by
    // (s(1-r1)C1, (1-r2)C2), close toward the axes, divide out s at the end
    RateRegion rmac = block_capacity_region(ch, grid, workers);
    double a = q.s * (1.0 - q.r1) * sum.c1;
    double b = (1.0 - q.r2) * sum.c2;

    std::vector<RatePair> cloud;
    cloud.reserve(rmac.hull.size() * 3 + 1);
    cloud.push_back({0.0, 0.0});
    for (const auto& v : rmac.hull) {
        RatePair m{q.r2 * v.r1 + a, q.r2 * v.r2 + b};
        cloud.push_back(m);
        cloud.push_back({m.r1, 0.0});
        cloud.push_back({0.0, m.r2});
    }
    auto hull = convex_hull(std::move(cloud));
    RateRegion reg;
    reg.provenance = Provenance::outer;
    reg.query = q;
    reg.hull.reserve(hull.size());
    for (const auto& v : hull) reg.hull.push_back({v.r1 / q.s, v.r2});
    return reg;
}

RateRegion r1_fixed_outer(const McChannel& ch, double r2, int grid, int workers) {
    if (!(r2 >= 0.0 && r2 <= 1.0)) throw DegenerateQuery("r2 must lie in [0,1]");
    ChannelSummary sum = channel_summary(ch);
    auto inputs = product_input_grid(ch, grid);
    auto triples = info_triples(ch, inputs, workers);

    std::vector<RatePair> cloud;
    for (const auto& t : triples) {
        double b2 = r2 * t.i2 + (1.0 - r2) * sum.c2;
        double b12 = r2 * t.i12 + (1.0 - r2) * sum.c2;  // bounds r2*R1 + R2
        std::vector<RatePair> poly =
            r2 > 0.0 ? clipped_box(t.i1, b2, r2, b12)
                     : std::vector<RatePair>{{0, 0}, {t.i1, 0}, {t.i1, b2}, {0, b2}};
        cloud.insert(cloud.end(), poly.begin(), poly.end());
    }
    RateRegion reg;
    reg.provenance = Provenance::outer;
    reg.query = {1.0, r2, r2 > 0.0 ? r2 : 1.0};
    reg.hull = convex_hull(std::move(cloud));
    return reg;
}

namespace {

// info triple under a joint input pmf P(x1,x2) (x1-major)
InfoTriple joint_info_triple(const McChannel& ch, const std::vector<double>& pj) {
    std::vector<double> py(ch.y_size, 0.0);
    std::vector<double> p1(ch.x1_size, 0.0), p2(ch.x2_size, 0.0);
    std::vector<double> py_and_x1((size_t)ch.x1_size * ch.y_size, 0.0);
    std::vector<double> py_and_x2((size_t)ch.x2_size * ch.y_size, 0.0);
    for (int a = 0; a < ch.x1_size; ++a)
        for (int b = 0; b < ch.x2_size; ++b) {
            double pab = pj[(size_t)a * ch.x2_size + b];
            if (pab <= 0.0) continue;
            p1[a] += pab;
            p2[b] += pab;
            for (int y = 0; y < ch.y_size; ++y) {
                double m = pab * ch.p(a, b, y);
                py[y] += m;
                py_and_x1[(size_t)a * ch.y_size + y] += m;
                py_and_x2[(size_t)b * ch.y_size + y] += m;
            }
        }
    InfoTriple t;
    for (int a = 0; a < ch.x1_size; ++a)
        for (int b = 0; b < ch.x2_size; ++b) {
            double pab = pj[(size_t)a * ch.x2_size + b];
            if (pab <= 0.0) continue;
            for (int y = 0; y < ch.y_size; ++y) {
                double w = ch.p(a, b, y);
                if (w <= 0.0) continue;
                double m = pab * w;
                t.i12 += m * std::log(w / py[y]);
                // p(y|x2=b) = py_and_x2 / p2[b]; conditionals given the mate
                t.i1 += m * std::log(w * p2[b] / py_and_x2[(size_t)b * ch.y_size + y]);
                t.i2 += m * std::log(w * p1[a] / py_and_x1[(size_t)a * ch.y_size + y]);
            }
        }
    t.i1 = std::max(t.i1, 0.0);
    t.i2 = std::max(t.i2, 0.0);
    t.i12 = std::max(t.i12, 0.0);
    return t;
}

} // namespace

RateRegion feedback_outer_region(const McChannel& ch, const RegionQuery& q, int grid,
                                 int workers) {
    validate_query(q);
    ChannelSummary sum = channel_summary(ch);
    if (q.r1 == 0.0 && q.r2 == 0.0) {
        RateRegion reg = make_rectangle(sum, q);
        reg.provenance = Provenance::feedback_outer;
        return reg;
    }

    auto joints = simplex_grid(ch.x1_size * ch.x2_size, grid - 1);
    std::vector<InfoTriple> triples(joints.size());
#ifdef MACVLC_HAVE_OPENMP
    if (workers != 1) {
        int n = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(n)
        for (long i = 0; i < (long)joints.size(); ++i)
            triples[i] = joint_info_triple(ch, joints[i]);
    } else
#endif
    {
        for (size_t i = 0; i < joints.size(); ++i) triples[i] = joint_info_triple(ch, joints[i]);
    }

    std::vector<RatePair> cloud;
    for (const auto& t : triples) {
        ConstraintRhs r = outer_bound_constraints(t, sum, q);
        // joint inputs can break i12 <= i1+i2, so clip rather than assume a pentagon
        auto poly = clipped_box(r.b1, r.b2, q.s, r.b12);
        for (auto& v : poly) cloud.push_back({v.r1, v.r2});
    }
    RateRegion reg;
    reg.provenance = Provenance::feedback_outer;
    reg.query = q;
    reg.hull = convex_hull(std::move(cloud));
    return reg;
}

RateRegion timeshare_boundary(const ChannelSummary& s, const PentagonCorners& c, int p_grid) {
    if (p_grid < 2) throw Error("p_grid must be at least 2");
    if (!(s.c1 > 0.0) || !(s.c2 > 0.0))
        throw NotPentagonShaped("dominant-face corners need positive C1, C2");
    double d1 = c.corner_b.r1, d2 = c.corner_a.r2;
    RateRegion reg;
    reg.provenance = Provenance::timeshare_curve;
    reg.hull.reserve(p_grid);
    for (int k = 0; k < p_grid; ++k) {
        double p = (double)k / (p_grid - 1);
        double r1 = s.c1 / (1.0 + (1.0 - p) * (1.0 - d1 / s.c1));
        double r2 = s.c2 / (1.0 + p * (1.0 - d2 / s.c2));
        reg.hull.push_back({r1, r2});
    }
    return reg;
}

RatePair timeshare_rates(const ChannelSummary& s, const PentagonCorners& c, double lambda,
                         double logm1, double logm2, double eps) {
    if (!(logm1 > 0.0) || !(logm2 > 0.0)) throw Error("log M must be positive");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0,1]");
    if (eps < 0.0) throw Error("epsilon must be nonnegative");
    double c1e = s.c1 - eps, c2e = s.c2 - eps;
    if (!(c1e > 0.0) || !(c2e > 0.0)) throw Error("epsilon exceeds a capacity");
    double d1 = c.corner_b.r1, d2 = c.corner_a.r2;
    double r1 =
        c1e / (1.0 + (1.0 - lambda) * (logm2 / logm1) * (c1e / c2e) * (1.0 - d1 / c1e));
    double r2 = c2e / (1.0 + lambda * (logm1 / logm2) * (c2e / c1e) * (1.0 - d2 / c2e));
    return {r1, r2};
}

PentagonCorners detect_pentagon_corners(const McChannel& ch, const ChannelSummary& s,
                                        int grid, double tol) {
    auto inputs = product_input_grid(ch, grid);
    auto triples = info_triples(ch, inputs);
    size_t best = 0;
    for (size_t i = 1; i < triples.size(); ++i)
        if (triples[i].i12 > triples[best].i12) best = i;
    PentagonCorners c = pentagon_corners(Pentagon{triples[best]});
    if (std::abs(c.corner_a.r1 - s.c1) > tol || std::abs(c.corner_b.r2 - s.c2) > tol)
        throw NotPentagonShaped("sum-rate face does not reach (C1, d2), (d1, C2)");
    return c;
}

double stopping_entropy_bound(double expected_length) {
    if (!(expected_length > 0.0)) throw Error("expected length must be positive");
    return 1.0 + std::log(expected_length);
}

} // namespace macvlc
