#include "dgff/linalg.hpp"

#include <cmath>

#include "dgff/error.hpp"

namespace dgff {

SparseMatrix dirichlet_operator(const LatticeDomain& domain)
{
    const auto n = static_cast<Eigen::Index>(domain.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 5);
    for (Eigen::Index i = 0; i < n; ++i) {
        trip.emplace_back(i, i, 4.0);
        for (int j : domain.neighbors(static_cast<std::size_t>(i)))
            if (j >= 0) trip.emplace_back(i, j, -1.0);
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

Eigen::VectorXd apply_laplacian(const LatticeDomain& domain, const Eigen::VectorXd& f)
{
    Eigen::VectorXd out(f.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
        double s = -4.0 * f[static_cast<Eigen::Index>(i)];
        for (int j : domain.neighbors(i))
            if (j >= 0) s += f[j];
        out[static_cast<Eigen::Index>(i)] = s;
    }
    return out;
}

struct SparseSpdSolver::Impl {
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
};

SparseSpdSolver::SparseSpdSolver(const SparseMatrix& a) : impl_(std::make_unique<Impl>())
{
    impl_->llt.compute(a);
    require(impl_->llt.info() == Eigen::Success, ErrorKind::Solver,
            "sparse Cholesky failed: matrix is not positive definite");
}

SparseSpdSolver::~SparseSpdSolver() = default;
SparseSpdSolver::SparseSpdSolver(SparseSpdSolver&&) noexcept = default;
SparseSpdSolver& SparseSpdSolver::operator=(SparseSpdSolver&&) noexcept = default;

Eigen::Index SparseSpdSolver::size() const { return impl_->llt.rows(); }

Eigen::VectorXd SparseSpdSolver::solve(const Eigen::VectorXd& b) const
{
    Eigen::VectorXd x = impl_->llt.solve(b);
    require(impl_->llt.info() == Eigen::Success, ErrorKind::Solver, "sparse solve failed");
    return x;
}

Eigen::MatrixXd SparseSpdSolver::solve(const Eigen::MatrixXd& b) const
{
    Eigen::MatrixXd x = impl_->llt.solve(b);
    require(impl_->llt.info() == Eigen::Success, ErrorKind::Solver, "sparse solve failed");
    return x;
}

Eigen::VectorXd SparseSpdSolver::sample_inverse(Rng& rng) const
{
    Eigen::VectorXd z(size());
    fill_standard_normal(rng, {z.data(), static_cast<std::size_t>(z.size())});
    // P A Pᵀ = L Lᵀ, so Pᵀ L^{-T} z has covariance A^{-1}.
    Eigen::VectorXd y = impl_->llt.matrixU().solve(z);
    return impl_->llt.permutationPinv() * y;
}

SymmetricSqrt::SymmetricSqrt(const Eigen::MatrixXd& c, double floor)
{
    require(c.rows() == c.cols(), ErrorKind::InvalidArgument, "covariance must be square");
    if (c.rows() == 0) return;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
    // Eigen flags exact zero pivots of semidefinite input as a numerical issue; pivots are checked below.
    Eigen::VectorXd d = ldlt.vectorD();
    require(d.allFinite(), ErrorKind::Factorization, "LDLT factorization failed");
    double dmax = d.cwiseAbs().maxCoeff();
    sqrt_pivots_.resize(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] < -1e-8 * std::max(dmax, 1.0))
            fail(ErrorKind::Factorization, "covariance is not positive semi-definite");
        sqrt_pivots_[i] = d[i] > floor * dmax ? std::sqrt(d[i]) : 0.0;
    }
    lower_ = ldlt.matrixL();
    perm_ = ldlt.transpositionsP();
}

Eigen::VectorXd SymmetricSqrt::apply(const Eigen::VectorXd& z) const
{
    Eigen::VectorXd y = lower_.triangularView<Eigen::UnitLower>() * sqrt_pivots_.cwiseProduct(z);
    return perm_.transpose() * y;
}

Eigen::VectorXd SymmetricSqrt::sample(Rng& rng) const
{
    Eigen::VectorXd z(size());
    fill_standard_normal(rng, {z.data(), static_cast<std::size_t>(z.size())});
    return apply(z);
}

Eigen::MatrixXd SymmetricSqrt::factor() const
{
    Eigen::MatrixXd l = lower_.triangularView<Eigen::UnitLower>();
    Eigen::MatrixXd b = l * sqrt_pivots_.asDiagonal();
    return perm_.transpose() * b;
}

Eigen::Index SymmetricSqrt::rank() const
{
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sqrt_pivots_.size(); ++i) r += sqrt_pivots_[i] > 0;
    return r;
}

} // namespace dgff
