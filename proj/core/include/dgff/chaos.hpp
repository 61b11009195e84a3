#pragma once

#include <string>
#include <vector>

#include "dgff/sampler.hpp"
#include "dgff/stats.hpp"

namespace dgff {

// α = 2/√g.
double chaos_alpha();
// ĉ = e^{2c₀λ²/g}/(λ√(8π)).
double chaos_hat_c(double lambda);

// Unit square at lattice resolution R = 2^p: fine cell of side 1/R centred at
// x/R for x ∈ (0,R)². Level k of the field is the binding field between the
// tilings by squares of side 2^{-k} and 2^{-k-1}.
class ChaosField {
public:
    explicit ChaosField(int p = 7);

    int depth() const { return sampler_.depth(); }
    int resolution() const { return 1 << sampler_.depth(); }
    std::size_t cells() const { return static_cast<std::size_t>(sampler_.domain().size()); }
    const LatticeDomain& lattice() const { return sampler_.domain(); }
    const Eigen::VectorXd& level_variance(int k) const { return variance_[static_cast<std::size_t>(k)]; }
    // Var φ_n = Σ_{k<n} level variances.
    Eigen::VectorXd partial_variance(int n) const;
    Eigen::VectorXd sample_level(int k, Rng& rng) const { return sampler_.sample_level(k, rng); }
    // Surrogate conformal radius of the level-n tiling: exp((G(x,x) − c₀)/g)/R.
    Eigen::VectorXd tiled_radius(int n) const;

private:
    HierarchicalSampler sampler_;
    std::vector<Eigen::VectorXd> variance_;
};

class ChaosMeasure {
public:
    enum class Mode { Martingale, SenetaHeyde };

    ChaosMeasure(int resolution, Eigen::VectorXd mass, double beta, int generation, Mode mode = Mode::Martingale);

    int resolution() const { return R_; }
    const Eigen::VectorXd& fine_mass() const { return mass_; }
    double beta() const { return beta_; }
    int generation() const { return generation_; }
    Mode mode() const { return mode_; }
    double total_mass() const { return mass_.sum(); }
    // Masses of the 4^m dyadic squares of side 2^{-m}, row-major from (0,0).
    std::vector<double> cell_masses(int m) const;
    double cell_mass(int m, int i, int j) const;
    // "x,y,mass" rows with cell centres.
    std::string to_csv(int m) const;

private:
    int R_;
    Eigen::VectorXd mass_;
    double beta_;
    int generation_;
    Mode mode_;
};

// Fine cells carry area 1/R²; total ((R−1)/R)².
ChaosMeasure lebesgue_measure(const ChaosField& f, double beta = 0.0);
// Density times e^{β ψ − β²/2 Var ψ}.
ChaosMeasure gmc_step(const ChaosMeasure& m, const Eigen::VectorXd& increment, const Eigen::VectorXd& variance, double beta);
// n martingale steps from Lebesgue measure.
ChaosMeasure martingale_chaos(const ChaosField& f, int n, double beta, Rng& rng);
// Same, returning μ_0..μ_n total masses along one path.
std::vector<double> martingale_total_masses(const ChaosField& f, int n, double beta, Rng& rng);

struct HierarchicalChaos {
    ChaosMeasure measure;
    bool second_moment_regime = true;  // false when λ ≥ 1/√2
};
// Y_n = ĉ Σ_i 1_{S_{n,i}} e^{αλΦ_n} r_{S̃ⁿ}^{2λ²} dx, n ≤ p − 1.
HierarchicalChaos hierarchical_chaos(const ChaosField& f, int n, double lambda, Rng& rng);
// Y_n with Φ ≡ 0.
ChaosMeasure hierarchical_chaos_mean_field(const ChaosField& f, int n, double lambda);
// ĉ Σ_x r_S(x)^{2λ²}/R² = E Y_n(S).
double hierarchical_chaos_expected_mass(const ChaosField& f, double lambda);

// Multiplies a critical martingale measure by √(n g log 2).
ChaosMeasure seneta_heyde(const ChaosMeasure& m);

} // namespace dgff
