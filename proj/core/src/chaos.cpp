#include "dgff/chaos.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dgff/error.hpp"
#include "dgff/green.hpp"

namespace dgff {

double chaos_alpha()
{
    return 2.0 / std::sqrt(kG);
}

double chaos_hat_c(double lambda)
{
    require(lambda > 0.0, ErrorKind::InvalidArgument, "lambda must be > 0");
    return std::exp(2.0 * kC0 * lambda * lambda / kG) / (lambda * std::sqrt(8.0 * std::numbers::pi));
}

ChaosField::ChaosField(int p) : sampler_(p)
{
    for (int k = 0; k < p; ++k) variance_.push_back(sampler_.level_variance(k));
}

Eigen::VectorXd ChaosField::partial_variance(int n) const
{
    require(n >= 0 && n <= depth(), ErrorKind::InvalidArgument, "generation out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cells()));
    for (int k = 0; k < n; ++k) v += variance_[static_cast<std::size_t>(k)];
    return v;
}

Eigen::VectorXd ChaosField::tiled_radius(int n) const
{
    require(n >= 0 && n < depth(), ErrorKind::InvalidArgument, "tiling level out of range");
    // G^{V^n}(x,x) = G^{V^0}(x,x) − Var φ_n(x).
    Eigen::VectorXd g = partial_variance(depth()) - partial_variance(n);
    const double R = resolution();
    return ((g.array() - kC0) / kG).exp() / R;
}

ChaosMeasure::ChaosMeasure(int resolution, Eigen::VectorXd mass, double beta, int generation, Mode mode)
    : R_(resolution), mass_(std::move(mass)), beta_(beta), generation_(generation), mode_(mode)
{
    require(mass_.size() == static_cast<Eigen::Index>(R_ - 1) * (R_ - 1), ErrorKind::InvalidSize,
            "mass vector does not match the resolution");
    require((mass_.array() >= 0.0).all(), ErrorKind::InvalidArgument, "masses must be nonnegative");
}

std::vector<double> ChaosMeasure::cell_masses(int m) const
{
    require(m >= 0 && (1 << m) <= R_, ErrorKind::InvalidArgument, "cell level exceeds the resolution");
    const int side = 1 << m, w = R_ - 1;
    std::vector<double> out(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), 0.0);
    for (int y = 1; y < R_; ++y)
        for (int x = 1; x < R_; ++x) {
            int cx = x * side / R_, cy = y * side / R_;
            out[static_cast<std::size_t>(cy) * static_cast<std::size_t>(side) + static_cast<std::size_t>(cx)] +=
                mass_[static_cast<Eigen::Index>(y - 1) * w + (x - 1)];
        }
    return out;
}

double ChaosMeasure::cell_mass(int m, int i, int j) const
{
    const int side = 1 << m;
    require(i >= 0 && j >= 0 && i < side && j < side, ErrorKind::InvalidArgument, "cell index out of range");
    return cell_masses(m)[static_cast<std::size_t>(j) * static_cast<std::size_t>(side) + static_cast<std::size_t>(i)];
}

std::string ChaosMeasure::to_csv(int m) const
{
    const int side = 1 << m;
    auto masses = cell_masses(m);
    std::ostringstream out;
    out.precision(17);
    out << "x,y,mass\n";
    for (int j = 0; j < side; ++j)
        for (int i = 0; i < side; ++i)
            out << (i + 0.5) / side << ',' << (j + 0.5) / side << ','
                << masses[static_cast<std::size_t>(j) * static_cast<std::size_t>(side) + static_cast<std::size_t>(i)] << '\n';
    return out.str();
}

ChaosMeasure lebesgue_measure(const ChaosField& f, double beta)
{
    const double R = f.resolution();
    return ChaosMeasure(f.resolution(), Eigen::VectorXd::Constant(static_cast<Eigen::Index>(f.cells()), 1.0 / (R * R)), beta, 0);
}

ChaosMeasure gmc_step(const ChaosMeasure& m, const Eigen::VectorXd& inc, const Eigen::VectorXd& var, double beta)
{
    require(inc.size() == m.fine_mass().size() && var.size() == inc.size(), ErrorKind::InvalidSize,
            "increment does not match the measure's grid");
    Eigen::VectorXd w = (beta * inc.array() - 0.5 * beta * beta * var.array()).exp();
    return ChaosMeasure(m.resolution(), m.fine_mass().cwiseProduct(w), beta, m.generation() + 1, m.mode());
}

ChaosMeasure martingale_chaos(const ChaosField& f, int n, double beta, Rng& rng)
{
    require(n >= 0 && n <= f.depth(), ErrorKind::InvalidArgument, "generation exceeds the lattice depth");
    ChaosMeasure m = lebesgue_measure(f, beta);
    for (int k = 0; k < n; ++k) m = gmc_step(m, f.sample_level(k, rng), f.level_variance(k), beta);
    return m;
}

std::vector<double> martingale_total_masses(const ChaosField& f, int n, double beta, Rng& rng)
{
    require(n >= 0 && n <= f.depth(), ErrorKind::InvalidArgument, "generation exceeds the lattice depth");
    ChaosMeasure m = lebesgue_measure(f, beta);
    std::vector<double> out{m.total_mass()};
    for (int k = 0; k < n; ++k) {
        m = gmc_step(m, f.sample_level(k, rng), f.level_variance(k), beta);
        out.push_back(m.total_mass());
    }
    return out;
}

namespace {

ChaosMeasure y_measure(const ChaosField& f, int n, double lambda, const Eigen::VectorXd& phi)
{
    const double R = f.resolution();
    Eigen::VectorXd r = f.tiled_radius(n);
    Eigen::VectorXd dens = chaos_hat_c(lambda) *
                           (chaos_alpha() * lambda * phi.array() + 2.0 * lambda * lambda * r.array().log()).exp() / (R * R);
    return ChaosMeasure(f.resolution(), std::move(dens), chaos_alpha() * lambda, n);
}

} // namespace

HierarchicalChaos hierarchical_chaos(const ChaosField& f, int n, double lambda, Rng& rng)
{
    require(lambda > 0.0 && lambda < 1.0, ErrorKind::InvalidArgument, "lambda must lie in (0,1)");
    require(n >= 0 && n < f.depth(), ErrorKind::InvalidArgument, "generation must be below the lattice depth");
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.cells()));
    for (int k = 0; k < n; ++k) phi += f.sample_level(k, rng);
    return {y_measure(f, n, lambda, phi), lambda < 1.0 / std::sqrt(2.0)};
}

ChaosMeasure hierarchical_chaos_mean_field(const ChaosField& f, int n, double lambda)
{
    require(lambda > 0.0 && lambda < 1.0, ErrorKind::InvalidArgument, "lambda must lie in (0,1)");
    require(n >= 0 && n < f.depth(), ErrorKind::InvalidArgument, "generation must be below the lattice depth");
    return y_measure(f, n, lambda, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.cells())));
}

double hierarchical_chaos_expected_mass(const ChaosField& f, double lambda)
{
    const double R = f.resolution();
    Eigen::VectorXd r = f.tiled_radius(0);
    return chaos_hat_c(lambda) * r.array().pow(2.0 * lambda * lambda).sum() / (R * R);
}

ChaosMeasure seneta_heyde(const ChaosMeasure& m)
{
    const double t = m.generation() * kG * std::log(2.0);
    return ChaosMeasure(m.resolution(), std::sqrt(t) * m.fine_mass(), m.beta(), m.generation(),
                        ChaosMeasure::Mode::SenetaHeyde);
}

} // namespace dgff
