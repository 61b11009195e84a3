#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dgff/lattice.hpp"
#include "dgff/sampler.hpp"
#include "dgff/stats.hpp"

namespace dgff {

// 2√g log N − (3/4)√g log log(N ∨ e).
double m_N(double N);
// N²/√(log N) · exp(−a²/(2g log N)).
double K_N(double N, double a);
// a_N = 2√g λ log N.
double a_N(double N, double lambda);

struct ClusterEntry {
    Vertex z;
    double dh;  // h_x − h_{x+z}
};

struct Atom {
    double x = 0.0, y = 0.0;  // position scaled by 1/N
    double h = 0.0;           // centered height
    double w = 0.0;           // weight
    std::vector<ClusterEntry> cluster;
};

struct PointMeasure {
    std::vector<Atom> atoms;

    double total_mass() const;
    // Mass of D × [b, ∞).
    double mass_above(double b) const;
    // One JSON object per line: {"x","y","h","w","cluster":[[[zx,zy],dh],...]}.
    std::string to_json_lines() const;
};

// Domain indices with h ≥ t, ascending.
std::vector<int> level_set(const Field& h, double t);
// Γ_N(t) = {h ≥ m_N − t}.
std::vector<int> extremal_set(const Field& h, double N, double t);

// Atoms at x/N with height h_x − a_N ≥ b_min and weight 1/K_N.
PointMeasure intermediate_measure(const Field& h, double lambda, double b_min = 0.0);

// x is an r-local maximum when h_x beats every y with |x−y| < r; among equal
// values the lowest index wins.
std::vector<int> local_maxima(const Field& h, double r);
// Unit atoms at r-local maxima with h_x − m_N ≥ −depth, cluster patch |z|∞ ≤ w.
PointMeasure structured_measure(const Field& h, double r, int w = 5,
                                double depth = std::numeric_limits<double>::infinity());
// Default r = ⌈√N⌉.
double default_local_radius(double N);

struct FieldMax {
    double value = 0.0;
    int index = -1;
};
FieldMax field_max(const Field& h);

struct MaxStats {
    EstimatorSummary max;        // M_N
    double median = 0.0;
    double centered_median = 0.0;  // median(M_N) − m_N
    std::vector<std::pair<double, double>> centered_quantiles;
    std::vector<Vertex> argmax;
};

// N is the scale used for m_N.
MaxStats max_stats(const std::vector<double>& maxima, double N,
                   const std::vector<Vertex>& argmax = {});

struct DekkingHost {
    double lhs = 0.0;  // E|M_N − E M_N|
    double rhs = 0.0;  // 2(E M_2N − E M_N)
    double lhs_se = 0.0, rhs_se = 0.0;
    double combined_se = 0.0;
    bool holds(double k = 3.0) const { return lhs <= rhs + k * combined_se; }
};

// Matched sample counts ≥ 10³ are expected by callers that assert on the result.
DekkingHost dekking_host_check(const std::vector<double>& at_n, const std::vector<double>& at_2n);

} // namespace dgff
