#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "dgff/lattice.hpp"
#include "dgff/linalg.hpp"

namespace dgff {

// g = 2/π, the coefficient of log in the two-dimensional Green function.
inline constexpr double kG = 2.0 / std::numbers::pi;

// a(x) - g·log|x| at x = (512, 0), from potential_kernel; calibrate_c0() reproduces it.
// The O(|x|^{-2}) correction keeps it 2e-7 below (2γ + log 8)/π.
inline constexpr double kC0 = 1.0293735032769371;

class GreenOperator {
public:
    GreenOperator(LatticeDomain domain, Eigen::MatrixXd g);

    const LatticeDomain& domain() const { return domain_; }
    const Eigen::MatrixXd& matrix() const { return g_; }
    Eigen::Index size() const { return g_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return g_(i, j); }
    // G(x,y), zero when either vertex lies outside the domain.
    double at(const Vertex& x, const Vertex& y) const;
    // Square-root factor, computed on first use.
    const SymmetricSqrt& sqrt_factor() const;

private:
    LatticeDomain domain_;
    Eigen::MatrixXd g_;
    mutable std::shared_ptr<SymmetricSqrt> sqrt_;
    mutable std::shared_ptr<std::once_flag> once_;
};

GreenOperator green_matrix(const LatticeDomain& domain);

// max_x ‖ΔG(·,x) + 4δ_x‖∞.
double poisson_residual(const GreenOperator& g);

// Column G^V(·,x) in domain index order; spectral on rectangles, sparse otherwise.
Eigen::VectorXd green_column(const LatticeDomain& domain, const Vertex& x);
double green_entry(const LatticeDomain& domain, const Vertex& x, const Vertex& y);

// One-dimensional walk killed outside (0,N): G(x,y) = 2 min(x,y)(N - max(x,y))/N.
Eigen::MatrixXd green_matrix_1d(int N);

// a(x) by one-dimensional quadrature of the reduced Fourier integral.
double potential_kernel(const Vertex& x);
// a((r,0)) - g·log r.
double calibrate_c0(int r = 512);

struct HarmonicMeasure {
    Vertex source;
    std::vector<Vertex> points;   // the external boundary, row-major
    std::vector<double> mass;

    double total() const;
    double at(const Vertex& z) const;
};

HarmonicMeasure harmonic_measure(const LatticeDomain& domain, const Vertex& x);

// -a(x-y) + Σ_{z∈∂V} H^V(x,z) a(z-y).
double green_via_kernel(const LatticeDomain& domain, const Vertex& x, const Vertex& y);

// exp(Σ_z H^V(x,z) log|x/N - z/N|).
double conformal_radius(const LatticeDomain& domain, const Vertex& x);

// Green-diagonal surrogate exp((G^V(x,x) - c0)/g)/N for every vertex; it shares
// the log-radius structure of conformal_radius and differs by O(dist(x,∂V)^{-2}).
Eigen::VectorXd conformal_radius_diagonal(const LatticeDomain& domain);

struct GreenHeatSplit {
    Eigen::MatrixXd short_range;   // Σ_{n≤m} ½Qⁿ
    Eigen::MatrixXd long_range;    // G - short_range
};

// Split with the lazy walk Q = ½(I + P), holding probability ½.
GreenHeatSplit green_heat_split(const LatticeDomain& domain, int cutoff);

// g·log(|1 - x·conj(y)| / |x - y|) on the open unit disc.
double continuum_green_disc(std::complex<double> x, std::complex<double> y);

} // namespace dgff
