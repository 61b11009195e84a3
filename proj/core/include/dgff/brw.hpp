#pragma once

#include <cstdint>
#include <vector>

#include "dgff/lattice.hpp"
#include "dgff/random.hpp"
#include "dgff/stats.hpp"

namespace dgff {

// Leaf x = (x_1..x_n), x_i ∈ {1..b}, carries φ_x = Σ_{k<n} Z_{(x_1..x_k)}. Leaves
// sharing their first n−1 digits are equal, so only depth n−1 is stored.
class BrwSample {
public:
    BrwSample(int b, int n, std::vector<double> parents);

    int branching() const { return b_; }
    int depth() const { return n_; }
    std::uint64_t leaf_count() const;
    // Leaf index Σ (x_i − 1) b^{n−i}.
    double leaf(std::uint64_t i) const { return parents_[static_cast<std::size_t>(i / static_cast<std::uint64_t>(b_))]; }
    const std::vector<double>& parents() const { return parents_; }
    double max() const;

private:
    int b_, n_;
    std::vector<double> parents_;
};

BrwSample sample_brw(int b, int n, Rng& rng);
// Max over leaves without keeping the sample.
double sample_brw_max(int b, int n, Rng& rng);

// √(2 log b)·n − 3/(2√(2 log b))·log n.
double m_tilde(int b, int n);

// d_n(x,y) = n − (length of the common prefix); 0 when x = y.
int ultrametric_distance(std::uint64_t x, std::uint64_t y, int b, int n);

// Digits x_i = 2σ_{n−i} + σ̃_{n−i} + 1 where x = Σ σ_j 2^j, y = Σ σ̃_j 2^j.
std::vector<int> embed_digits(const Vertex& v, int n);
std::uint64_t embed(const Vertex& v, int n);

// P(bridge from a to b over time r stays positive) = 1 − e^{−2ab/r}.
double ballot_bridge(double a, double b, double r);
// Discretized bridge with exact per-step crossing probabilities.
EstimatorSummary ballot_bridge_mc(double a, double b, double r, int paths, int steps, Rng& rng);

struct BrwMaxStats {
    int b = 0, n = 0;
    double m_tilde = 0.0;
    EstimatorSummary centered;   // max − m̃
    std::vector<double> maxima;
};

BrwMaxStats brw_max_stats(int b, int n, int reps, const SeedStream& seeds, int threads = 1);

// P(X > t) for each t, from the empirical sample.
std::vector<double> upper_tail(const std::vector<double>& samples, const std::vector<double>& t);

} // namespace dgff
