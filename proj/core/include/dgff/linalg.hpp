#pragma once

#include <memory>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dgff/lattice.hpp"
#include "dgff/random.hpp"

namespace dgff {

using SparseMatrix = Eigen::SparseMatrix<double>;

// M = 4I - A on the domain, so that G^V = 4 M^{-1}.
SparseMatrix dirichlet_operator(const LatticeDomain& domain);

// Discrete Laplacian Δf(x) = Σ_{y~x} (f(y) - f(x)), with f = 0 off the domain.
Eigen::VectorXd apply_laplacian(const LatticeDomain& domain, const Eigen::VectorXd& f);

// Sparse Cholesky of a symmetric positive-definite matrix.
class SparseSpdSolver {
public:
    explicit SparseSpdSolver(const SparseMatrix& a);
    ~SparseSpdSolver();
    SparseSpdSolver(SparseSpdSolver&&) noexcept;
    SparseSpdSolver& operator=(SparseSpdSolver&&) noexcept;

    Eigen::Index size() const;
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
    // Sample with covariance A^{-1}.
    Eigen::VectorXd sample_inverse(Rng& rng) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Symmetric square root B (B Bᵀ = C) of a positive semi-definite matrix from a
// pivoted LDLᵀ factorization; pivots below floor·max pivot are set to zero.
class SymmetricSqrt {
public:
    SymmetricSqrt() = default;
    explicit SymmetricSqrt(const Eigen::MatrixXd& c, double floor = 1e-12);

    Eigen::Index size() const { return lower_.rows(); }
    Eigen::VectorXd apply(const Eigen::VectorXd& z) const;
    Eigen::VectorXd sample(Rng& rng) const;
    // Dense B, mostly for tests.
    Eigen::MatrixXd factor() const;
    Eigen::Index rank() const;

private:
    Eigen::MatrixXd lower_;
    Eigen::VectorXd sqrt_pivots_;
    Eigen::Transpositions<Eigen::Dynamic> perm_;
};

} // namespace dgff
