#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "dgff/box_spectral.hpp"
#include "dgff/green.hpp"
#include "dgff/lattice.hpp"
#include "dgff/linalg.hpp"
#include "dgff/random.hpp"

namespace dgff {

class Field {
public:
    Field() = default;
    Field(LatticeDomain domain, Eigen::VectorXd values);
    explicit Field(LatticeDomain domain);   // zero field

    const LatticeDomain& domain() const { return domain_; }
    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }
    Eigen::Index size() const { return values_.size(); }
    double operator[](Eigen::Index i) const { return values_[i]; }
    double& operator[](Eigen::Index i) { return values_[i]; }
    // Value at a vertex, zero off the domain.
    double at(const Vertex& v) const;

    Field& operator+=(const Field& other);
    friend Field operator+(Field a, const Field& b) { return a += b; }

private:
    LatticeDomain domain_;
    Eigen::VectorXd values_;
};

// field = B·Z with B Bᵀ = G from the operator's square-root factor.
Field sample_dense(const GreenOperator& g, Rng& rng);

// Exact DGFF sampler for any finite domain: DST on rectangles, sparse
// Cholesky of the precision matrix otherwise.
class FieldSampler {
public:
    explicit FieldSampler(const LatticeDomain& domain);

    const LatticeDomain& domain() const { return domain_; }
    Field sample(Rng& rng) const;
    // G^V f for a vector in domain order.
    Eigen::VectorXd apply_green(const Eigen::VectorXd& f) const;

private:
    LatticeDomain domain_;
    std::shared_ptr<const BoxSpectral> box_;
    std::shared_ptr<const SparseSpdSolver> sparse_;
};

// C^{V,U} = G^V - G^U in V's index order (G^U extended by zero).
Eigen::MatrixXd binding_covariance(const GreenOperator& gv, const LatticeDomain& inner);
Eigen::MatrixXd binding_covariance(const LatticeDomain& outer, const LatticeDomain& inner);

// u on U harmonic with u = data on V∖U (data given in V's order, entries on U ignored).
Eigen::VectorXd harmonic_extension(const LatticeDomain& outer, const LatticeDomain& inner,
                                   const Eigen::VectorXd& data);

struct BindingField {
    LatticeDomain outer;
    LatticeDomain inner;
    Field field;   // on the outer domain
    std::shared_ptr<const Eigen::MatrixXd> covariance;
};

// max_{x∈U} |Δφ(x)|.
double harmonicity_residual(const BindingField& binding);

enum class BindingMethod { ExactCovariance, HarmonicExtension };

struct GibbsMarkovSample {
    Field inner;   // on U
    BindingField binding;
    // inner + binding on V.
    Field combined() const;
};

class GibbsMarkovSplitter {
public:
    GibbsMarkovSplitter(const LatticeDomain& outer, const LatticeDomain& inner,
                        BindingMethod method = BindingMethod::ExactCovariance);

    const LatticeDomain& outer() const { return outer_; }
    const LatticeDomain& inner() const { return inner_; }
    const Eigen::MatrixXd& binding_covariance() const { return *cov_; }
    const GreenOperator& outer_green() const { return gv_; }
    GibbsMarkovSample sample(Rng& rng) const;

private:
    LatticeDomain outer_, inner_;
    BindingMethod method_;
    GreenOperator gv_;
    std::shared_ptr<const Eigen::MatrixXd> cov_;
    SymmetricSqrt binding_sqrt_;    // exact-covariance route
    SymmetricSqrt exterior_sqrt_;   // harmonic-extension route: G^V on V∖U
    std::vector<Eigen::Index> exterior_;
    FieldSampler inner_sampler_;
};

GibbsMarkovSample gibbs_markov_split(const LatticeDomain& outer, const LatticeDomain& inner,
                                     Rng& rng,
                                     BindingMethod method = BindingMethod::ExactCovariance);

// Telescoping sampler over the dyadic quadtree of the box (0,2ⁿ)²: level k
// conditions each block of side 2^{n-k} on its middle cross.
class HierarchicalSampler {
public:
    explicit HierarchicalSampler(int depth);

    int depth() const { return n_; }
    const LatticeDomain& domain() const { return domain_; }
    Field sample(Rng& rng) const;
    // Independent level fields φ^{V^k,V^{k+1}}, k = 0..n-1; their sum is the DGFF.
    std::vector<Field> sample_levels(Rng& rng) const;
    Eigen::VectorXd sample_level(int k, Rng& rng) const;
    // Pointwise variance of level k.
    Eigen::VectorXd level_variance(int k) const;

private:
    struct Level {
        int side;
        std::vector<int> cross;   // block-local row-major indices of the cross
        SymmetricSqrt cross_sqrt;
        std::shared_ptr<const BoxSpectral> quadrant;
    };
    int n_;
    int N_;
    LatticeDomain domain_;
    std::vector<Level> levels_;
};

// Nested ℓ∞-balls Δ^k = {|x|∞ < 2^k} (k < n), Δ^n = D_N, with n maximal such
// that {|x|∞ ≤ 2^{n+1}} ⊆ D_N.
class ConcentricDecomposition {
public:
    explicit ConcentricDecomposition(const LatticeDomain& outer);

    int depth() const { return n_; }
    const LatticeDomain& outer() const { return outer_; }
    const LatticeDomain& ball(int k) const;
    // Δ^k ∖ (Δ^{k-1} ∪ ∂Δ^{k-1}); empty for k = 0.
    const LatticeDomain& annulus(int k) const;

    // Var φ_k(0) = G^{Δ^k}(0,0) - G^{Δ^{k-1}}(0,0).
    double phi0_variance(int k) const;
    // b_k on the outer domain; -1 off Δ^k.
    Eigen::VectorXd b(int k) const;
    // Column y of Cov(φ_k) in outer index order.
    Eigen::VectorXd layer_column(int k, const Vertex& y) const;
    // Σ_k [Var φ_k(0)(1+b_k(·))(1+b_k(y)) + Cov(χ_k(·),χ_k(y)) + Cov(h'_k(·),h'_k(y))].
    Eigen::VectorXd covariance_column(const Vertex& y) const;

    struct Sample {
        std::vector<double> phi0;            // φ_k(0)
        std::vector<Eigen::VectorXd> chi;    // χ_k on the outer domain
        std::vector<Eigen::VectorXd> local;  // h'_k on the outer domain
        std::vector<double> partial;         // S_k = Σ_{ℓ<k} φ_ℓ(0), k = 0..n+1
        Field field;
    };
    Sample sample(Rng& rng) const;

private:
    Eigen::VectorXd embed(const LatticeDomain& inner, const Eigen::VectorXd& v) const;
    // Green solver on Δ^k or on the k-th annulus, built on first use.
    const FieldSampler& solver(int k, bool annulus) const;
    Eigen::VectorXd column_on(int k, bool annulus, const Vertex& y) const;
    void prepare_sampling() const;

    LatticeDomain outer_;
    int n_ = 0;
    std::vector<LatticeDomain> balls_, annuli_;
    mutable std::vector<Eigen::VectorXd> b_;
    std::vector<double> var0_;

    struct LayerSampler {
        std::vector<Vertex> ring;
        SymmetricSqrt ring_sqrt;
    };
    mutable std::vector<LayerSampler> layers_;
    mutable std::vector<std::shared_ptr<const FieldSampler>> solvers_;
    std::shared_ptr<std::mutex> solver_mutex_ = std::make_shared<std::mutex>();
    mutable std::shared_ptr<std::once_flag> once_ = std::make_shared<std::once_flag>();
};

// h^{D∖{0}} = h^D - G^D(·,0)/G^D(0,0)·h^D_0.
class PinnedSampler {
public:
    explicit PinnedSampler(const LatticeDomain& domain, const Vertex& pin = {0, 0});

    const LatticeDomain& domain() const { return sampler_.domain(); }
    Field sample(Rng& rng) const;
    // G^{D∖{pin}} column at y, in domain order.
    Eigen::VectorXd covariance_column(const Vertex& y) const;

private:
    FieldSampler sampler_;
    Eigen::Index pin_;
    Eigen::VectorXd g0_;   // G^D(·,pin)
};

Field sample_pinned(const LatticeDomain& domain, Rng& rng);

} // namespace dgff
