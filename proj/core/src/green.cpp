#include "dgff/green.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>

#include "dgff/box_spectral.hpp"
#include "dgff/error.hpp"

namespace dgff {

GreenOperator::GreenOperator(LatticeDomain domain, Eigen::MatrixXd g)
    : domain_(std::move(domain)), g_(std::move(g)), once_(std::make_shared<std::once_flag>())
{
    require(g_.rows() == static_cast<Eigen::Index>(domain_.size()) && g_.cols() == g_.rows(),
            ErrorKind::InvalidArgument, "Green matrix does not match domain");
}

double GreenOperator::at(const Vertex& x, const Vertex& y) const
{
    int i = domain_.index(x), j = domain_.index(y);
    return i < 0 || j < 0 ? 0.0 : g_(i, j);
}

const SymmetricSqrt& GreenOperator::sqrt_factor() const
{
    std::call_once(*once_, [this] { sqrt_ = std::make_shared<SymmetricSqrt>(g_); });
    return *sqrt_;
}

GreenOperator green_matrix(const LatticeDomain& domain)
{
    require(!domain.empty(), ErrorKind::EmptyDomain, "Green matrix of an empty domain");
    const auto n = static_cast<Eigen::Index>(domain.size());
    SparseSpdSolver solver(dirichlet_operator(domain));
    Eigen::MatrixXd g(n, n);
    constexpr Eigen::Index block = 256;
    for (Eigen::Index c0 = 0; c0 < n; c0 += block) {
        Eigen::Index w = std::min(block, n - c0);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, w);
        for (Eigen::Index k = 0; k < w; ++k) rhs(c0 + k, k) = 4.0;
        g.middleCols(c0, w) = solver.solve(rhs);
    }
    // Exact symmetrisation removes solver round-off asymmetry.
    Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    return GreenOperator(domain, std::move(sym));
}

double poisson_residual(const GreenOperator& g)
{
    double worst = 0.0;
    const auto& d = g.domain();
    for (Eigen::Index c = 0; c < g.size(); ++c) {
        Eigen::VectorXd lap = apply_laplacian(d, g.matrix().col(c));
        lap[c] += 4.0;
        worst = std::max(worst, lap.cwiseAbs().maxCoeff());
    }
    return worst;
}

Eigen::VectorXd green_column(const LatticeDomain& domain, const Vertex& x)
{
    int i = domain.index(x);
    require(i >= 0, ErrorKind::Domain, "vertex is not in the domain");
    if (domain.is_rectangle()) {
        auto bb = domain.bounding_box();
        BoxSpectral box(bb[2] - bb[0] + 1, bb[3] - bb[1] + 1);
        return box.green_column(i);
    }
    SparseSpdSolver solver(dirichlet_operator(domain));
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain.size()));
    e[i] = 4.0;
    return solver.solve(e);
}

double green_entry(const LatticeDomain& domain, const Vertex& x, const Vertex& y)
{
    int j = domain.index(y);
    if (j < 0 || !domain.contains(x)) return 0.0;
    if (domain.is_rectangle()) {
        auto bb = domain.bounding_box();
        BoxSpectral box(bb[2] - bb[0] + 1, bb[3] - bb[1] + 1);
        return box.green(x.x - bb[0], x.y - bb[1], y.x - bb[0], y.y - bb[1]);
    }
    return green_column(domain, x)[j];
}

Eigen::MatrixXd green_matrix_1d(int N)
{
    require(N >= 2, ErrorKind::InvalidSize, "interval needs N >= 2");
    const int n = N - 1;
    // (I - P) on (0,N) with P the ±1 walk: tridiagonal [-1/2, 1, -1/2].
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 1.0;
        if (i > 0) a(i, i - 1) = -0.5;
        if (i + 1 < n) a(i, i + 1) = -0.5;
    }
    return a.llt().solve(Eigen::MatrixXd::Identity(n, n));
}

// ------------------------------------------------------- potential kernel

namespace {

double potential_kernel_uncached(int m1, int m2)
{
    using std::numbers::pi;
    // Integrating the k₂ variable in closed form leaves
    //   a(x) = (2/π) ∫_0^π [1 - cos(k m1) ρ(k)^{m2}] / √(A²-1) dk,
    // A = 2 - cos k, ρ = A - √(A²-1), with m2 = max(|x1|,|x2|), m1 = min.
    auto f = [m1, m2](double k) {
        if (k <= 0.0) return static_cast<double>(m2);
        double s = std::sin(0.5 * k);
        double root = 2.0 * s * std::sqrt(1.0 + s * s);   // √(A²-1)
        double t = std::asinh(root);                      // ρ = e^{-t}
        double c = std::cos(k * m1);
        double sh = std::sin(0.5 * k * m1);
        double num = 2.0 * sh * sh - c * std::expm1(-m2 * t);
        return num / root;
    };
    using Quad = boost::math::quadrature::gauss<double, 30>;
    // Panels resolve the cos(k m1) oscillation and the e^{-m2 k} layer at 0.
    const int panels = std::max(8, m1 + m2);
    std::vector<double> edges;
    double first = pi / panels;
    for (double e = first * 1e-6; e < first; e *= 4.0) edges.push_back(e);
    for (int p = 1; p <= panels; ++p) edges.push_back(pi * p / panels);
    double sum = 0.0, lo = 0.0;
    for (double hi : edges) {
        sum += Quad::integrate(f, lo, hi);
        lo = hi;
    }
    return 2.0 / pi * sum;
}

} // namespace

double potential_kernel(const Vertex& x)
{
    int a = std::abs(x.x), b = std::abs(x.y);
    int m1 = std::min(a, b), m2 = std::max(a, b);
    if (m2 == 0) return 0.0;
    static std::mutex mtx;
    static std::map<std::pair<int, int>, double> cache;
    {
        std::lock_guard lock(mtx);
        auto it = cache.find({m1, m2});
        if (it != cache.end()) return it->second;
    }
    double v = potential_kernel_uncached(m1, m2);
    std::lock_guard lock(mtx);
    cache.emplace(std::make_pair(m1, m2), v);
    return v;
}

double calibrate_c0(int r)
{
    require(r >= 1, ErrorKind::InvalidArgument, "calibration radius must be positive");
    return potential_kernel({r, 0}) - kG * std::log(static_cast<double>(r));
}

// ------------------------------------------------------- harmonic measure

double HarmonicMeasure::total() const
{
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

double HarmonicMeasure::at(const Vertex& z) const
{
    auto it = std::lower_bound(points.begin(), points.end(), z, row_major_less);
    return it != points.end() && *it == z ? mass[static_cast<std::size_t>(it - points.begin())] : 0.0;
}

HarmonicMeasure harmonic_measure(const LatticeDomain& domain, const Vertex& x)
{
    require(domain.contains(x), ErrorKind::Domain, "source vertex is not in the domain");
    // Last-exit decomposition: H(x,z) = ¼ Σ_{y∈V, y~z} G(x,y).
    Eigen::VectorXd g = green_column(domain, x);
    HarmonicMeasure h;
    h.source = x;
    h.points = domain.boundary();
    h.mass.assign(h.points.size(), 0.0);
    for (std::size_t k = 0; k < h.points.size(); ++k) {
        double s = 0.0;
        for (const auto& off : kNeighborOffsets) {
            int j = domain.index(h.points[k] + off);
            if (j >= 0) s += g[j];
        }
        h.mass[k] = 0.25 * s;
    }
    return h;
}

double green_via_kernel(const LatticeDomain& domain, const Vertex& x, const Vertex& y)
{
    require(domain.contains(y), ErrorKind::Domain, "target vertex is not in the domain");
    HarmonicMeasure h = harmonic_measure(domain, x);
    double s = -potential_kernel(x - y);
    for (std::size_t k = 0; k < h.points.size(); ++k)
        if (h.mass[k] != 0.0) s += h.mass[k] * potential_kernel(h.points[k] - y);
    return s;
}

double conformal_radius(const LatticeDomain& domain, const Vertex& x)
{
    HarmonicMeasure h = harmonic_measure(domain, x);
    const double n = domain.scale();
    double s = 0.0;
    for (std::size_t k = 0; k < h.points.size(); ++k) {
        Vertex d = h.points[k] - x;
        s += h.mass[k] * std::log(std::hypot(d.x / n, d.y / n));
    }
    return std::exp(s);
}

Eigen::VectorXd conformal_radius_diagonal(const LatticeDomain& domain)
{
    Eigen::VectorXd diag(static_cast<Eigen::Index>(domain.size()));
    if (domain.is_rectangle()) {
        auto bb = domain.bounding_box();
        diag = BoxSpectral(bb[2] - bb[0] + 1, bb[3] - bb[1] + 1).diagonal();
    } else {
        diag = green_matrix(domain).matrix().diagonal();
    }
    const double logn = std::log(static_cast<double>(domain.scale()));
    return ((diag.array() - kC0) / kG - logn).exp().matrix();
}

GreenHeatSplit green_heat_split(const LatticeDomain& domain, int cutoff)
{
    require(cutoff >= 0, ErrorKind::InvalidArgument, "cutoff must be nonnegative");
    require(domain.size() <= 2000, ErrorKind::InvalidSize, "heat split needs at most 2000 vertices");
    const auto n = static_cast<Eigen::Index>(domain.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int j : domain.neighbors(static_cast<std::size_t>(i)))
            if (j >= 0) p(i, j) = 0.25;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
    require(es.info() == Eigen::Success, ErrorKind::Solver, "eigendecomposition failed");
    // Q = ½(I + P) has spectrum in (0,1); both pieces are spectral functions of P.
    Eigen::VectorXd q = 0.5 * (1.0 + es.eigenvalues().array());
    Eigen::VectorXd s1(n), s2(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double tail = std::pow(q[k], cutoff + 1);
        s1[k] = 0.5 * (1.0 - tail) / (1.0 - q[k]);
        s2[k] = 0.5 * tail / (1.0 - q[k]);
    }
    const auto& u = es.eigenvectors();
    GreenHeatSplit out;
    out.short_range = u * s1.asDiagonal() * u.transpose();
    out.long_range = u * s2.asDiagonal() * u.transpose();
    out.short_range = 0.5 * (out.short_range + out.short_range.transpose()).eval();
    out.long_range = 0.5 * (out.long_range + out.long_range.transpose()).eval();
    return out;
}

double continuum_green_disc(std::complex<double> x, std::complex<double> y)
{
    require(std::abs(x) < 1.0 && std::abs(y) < 1.0, ErrorKind::Domain,
            "points must lie in the open unit disc");
    double d = std::abs(x - y);
    require(d > 0.0, ErrorKind::Domain, "continuum Green function is singular at x = y");
    return kG * std::log(std::abs(1.0 - x * std::conj(y)) / d);
}

} // namespace dgff
