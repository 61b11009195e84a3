#pragma once

#include <optional>
#include <vector>

#include "dgff/network.hpp"
#include "dgff/stats.hpp"

namespace dgff {

// P(x,y) = c(x,y)/π(x) on a network; when built from a field the walk lives on
// the field's domain and only moves along the domain's edges.
class WalkKernel {
public:
    explicit WalkKernel(Network net, std::optional<LatticeDomain> domain = std::nullopt);

    const Network& network() const { return net_; }
    const std::optional<LatticeDomain>& domain() const { return domain_; }
    std::size_t size() const { return net_.size(); }
    const std::vector<double>& pi() const { return pi_; }
    // Row x as (target, probability) pairs.
    std::size_t row_begin(int x) const { return offset_[static_cast<std::size_t>(x)]; }
    std::size_t row_end(int x) const { return offset_[static_cast<std::size_t>(x) + 1]; }
    int target(std::size_t k) const { return target_[k]; }
    double prob(std::size_t k) const { return prob_[k]; }
    double transition(int x, int y) const;

    int step(int x, Rng& rng) const;  // alias sampling

    double row_sum_error() const;
    double detailed_balance_error() const;

private:
    Network net_;
    std::optional<LatticeDomain> domain_;
    std::vector<double> pi_;
    std::vector<std::size_t> offset_;
    std::vector<int> target_;
    std::vector<double> prob_, alias_prob_;
    std::vector<int> alias_;
};

WalkKernel build_kernel(const Field& h, double beta);
// max |P_diff − P_cond| with P_diff(x,y) = e^{β(h_y−h_x)}/Σ_z e^{β(h_z−h_x)}.
double kernel_form_error(const WalkKernel& k, const Field& h, double beta);

struct ExitTime {
    double solve = 0.0;     // (I − P_A) t = 1
    double identity = 0.0;  // R_eff(x, A^c)·Σ_y π(y)φ(y)
    double bound = 0.0;     // R_eff(x, A^c)·π(A)
    double relative_residual() const;
};

// A lists vertex indices; x ∈ A and A ≠ V.
ExitTime expected_exit_time(const WalkKernel& k, int x, const std::vector<int>& A);
// Only the linear solve: symmetric system π t − C t = π on A.
double expected_exit_time_solve(const WalkKernel& k, int x, const std::vector<int>& A);

struct CommuteTime {
    double lhs = 0.0;  // E^u τ_v + E^v τ_u
    double rhs = 0.0;  // R_eff(u,v)·π(V)
    double relative_residual() const { return std::abs(lhs - rhs) / rhs; }
};
CommuteTime commute_time(const WalkKernel& k, int u, int v);

// P^x(X_t = x) for t = 0..T by exact propagation of the distribution.
std::vector<double> return_probabilities(const WalkKernel& k, int x, int T);
double heat_kernel(const WalkKernel& k, int x, int T);
EstimatorSummary heat_kernel_mc(const WalkKernel& k, int x, int T, int walks, Rng& rng);

// 2 + 2(β/β̃_c)² for β ≤ β̃_c, 4β/β̃_c above; β̃_c = √(π/2).
double theta_exponent(double beta);
double beta_tilde_c();

struct WalkSummary {
    int steps = 0;                 // steps actually taken
    std::optional<int> exit_time;  // first entry into the absorbing set
    int returns = 0;               // visits to the start after time 0
    Vertex displacement{0, 0};     // needs a lattice kernel
    int end = -1;
};

// Stops at the first visit to `absorbing` (if given).
WalkSummary walk_simulate(const WalkKernel& k, int x, int steps, Rng& rng,
                          const std::vector<char>* absorbing = nullptr);

struct ExitExponent {
    std::vector<int> N;
    std::vector<double> mean_log_time;  // mean over environments of log E⁰τ
    std::vector<double> se;
    LinearFit fit;
    double theta = 0.0;
};

// Environments: pinned fields on [−4N_max, 4N_max]², one per replica, shared across N.
ExitExponent exit_time_exponent(double beta, const std::vector<int>& Ns, int environments,
                                const SeedStream& seeds, int threads = 1);

struct HeatKernelSlope {
    std::vector<int> T;
    std::vector<double> p;  // P⁰(X_{2T} = 0)
    LinearFit fit;
};
// Simple random walk on [−K, K]² over T in the given list.
HeatKernelSlope srw_heat_kernel_slope(int K, const std::vector<int>& T);

} // namespace dgff
