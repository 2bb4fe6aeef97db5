#pragma once

#include "macvlc/infomeasures.hpp"

namespace macvlc {

struct RatePair {
    double r1 = 0.0;  // nats/use
    double r2 = 0.0;
};

struct Pentagon {
    InfoTriple triple;
};

// Corner points of the dominant (sum-rate) face.
struct PentagonCorners {
    RatePair corner_a;  // (i1, i12 - i1)
    RatePair corner_b;  // (i12 - i2, i2)
};

PentagonCorners pentagon_corners(const Pentagon& p);
std::vector<RatePair> pentagon_vertices(const InfoTriple& t);

enum class Provenance { r_mac, outer, rectangle, feedback_outer, timeshare_curve };

// r2 = s * r1; s = E[N1]/E[N2]
struct RegionQuery {
    double r1 = 1.0;
    double r2 = 1.0;
    double s = 1.0;
};

struct RateRegion {
    std::vector<RatePair> hull;  // boundary vertices in order (ccw for convex kinds)
    Provenance provenance = Provenance::r_mac;
    RegionQuery query;  // meaningful for outer/feedback provenances
};

// --- geometry helpers ---
std::vector<RatePair> convex_hull(std::vector<RatePair> pts);
bool region_contains(const RateRegion& reg, RatePair p, double tol = 1e-9);
// max over vertices of either hull of the distance to the other region
double hull_distance(const RateRegion& a, const RateRegion& b);

// pmfs with entries k/steps over a dim-simplex
std::vector<std::vector<double>> simplex_grid(int dim, int steps);
std::vector<ProductInput> product_input_grid(const McChannel& ch, int grid);

// Batch info triples; workers == 1 runs the plain serial reference loop,
// anything else the OpenMP path (identical results either way).
std::vector<InfoTriple> info_triples(const McChannel& ch,
                                     const std::vector<ProductInput>& inputs,
                                     int workers = 0);

// --- region constructions (all rates in nats) ---
struct ConstraintRhs {
    double b1 = 0.0;   // bounds R1
    double b2 = 0.0;   // bounds R2
    double b12 = 0.0;  // bounds s*R1 + R2
};

ConstraintRhs outer_bound_constraints(const InfoTriple& t, const ChannelSummary& s,
                                      const RegionQuery& q);

RateRegion block_capacity_region(const McChannel& ch, int grid, int workers = 0);
RateRegion outer_region(const McChannel& ch, const RegionQuery& q, int grid, int workers = 0);
RateRegion r1_fixed_outer(const McChannel& ch, double r2, int grid, int workers = 0);
RateRegion feedback_outer_region(const McChannel& ch, const RegionQuery& q, int grid,
                                 int workers = 0);

RateRegion timeshare_boundary(const ChannelSummary& s, const PentagonCorners& c, int p_grid);
RatePair timeshare_rates(const ChannelSummary& s, const PentagonCorners& c, double lambda,
                         double logm1, double logm2, double eps);

// Grid argmax of i12; accepted as pentagon-shaped when that pentagon's
// corners hit (C1, d2) and (d1, C2); otherwise throws NotPentagonShaped.
PentagonCorners detect_pentagon_corners(const McChannel& ch, const ChannelSummary& s,
                                        int grid, double tol = 1e-6);

double stopping_entropy_bound(double expected_length);  // ln(e * E[N])

} // namespace macvlc
