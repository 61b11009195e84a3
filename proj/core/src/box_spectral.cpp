#include "dgff/box_spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "dgff/error.hpp"

namespace dgff {

namespace {

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

// Plans are cached for the life of the process; FFTW planning is not thread-safe
// but executing a plan on caller-owned arrays is.
fftw_plan cached_plan(int nx, int ny)
{
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find({nx, ny});
    if (it != cache.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(nx) * ny), out(in.size());
    fftw_plan p = fftw_plan_r2r_2d(ny, nx, in.data(), out.data(), FFTW_RODFT00, FFTW_RODFT00,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    require(p != nullptr, ErrorKind::Solver, "FFTW planning failed");
    cache.emplace(std::make_pair(nx, ny), p);
    return p;
}

} // namespace

BoxSpectral::BoxSpectral(int width, int height) : nx_(width), ny_(height)
{
    require(width >= 1 && height >= 1, ErrorKind::InvalidSize, "box must have interior vertices");
    plan_ = cached_plan(nx_, ny_);
    inv_lambda_.resize(size());
    for (int k = 1; k <= ny_; ++k)
        for (int j = 1; j <= nx_; ++j)
            inv_lambda_[static_cast<Eigen::Index>(k - 1) * nx_ + (j - 1)] = 1.0 / eigenvalue(j, k);
}

double BoxSpectral::eigenvalue(int j, int k) const
{
    using std::numbers::pi;
    // 1 - (cos a + cos b)/2 = sin²(a/2) + sin²(b/2), free of cancellation.
    double a = std::sin(0.5 * pi * j / (nx_ + 1)), b = std::sin(0.5 * pi * k / (ny_ + 1));
    return a * a + b * b;
}

void BoxSpectral::dst2(const double* in, double* out) const
{
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), const_cast<double*>(in), out);
}

Eigen::VectorXd BoxSpectral::apply_green(const Eigen::VectorXd& f) const
{
    require(f.size() == size(), ErrorKind::InvalidArgument, "vector size does not match box");
    Eigen::VectorXd c(size()), out(size());
    dst2(f.data(), c.data());
    c.array() *= inv_lambda_.array();
    dst2(c.data(), out.data());
    out /= 4.0 * (nx_ + 1) * (ny_ + 1);
    return out;
}

Eigen::VectorXd BoxSpectral::sample(Rng& rng) const
{
    Eigen::VectorXd z(size()), out(size());
    fill_standard_normal(rng, {z.data(), static_cast<std::size_t>(z.size())});
    z.array() *= inv_lambda_.array().sqrt();
    dst2(z.data(), out.data());
    out /= 2.0 * std::sqrt(static_cast<double>(nx_ + 1) * (ny_ + 1));
    return out;
}

Eigen::VectorXd BoxSpectral::green_column(Eigen::Index i) const
{
    Eigen::VectorXd e = Eigen::VectorXd::Zero(size());
    e[i] = 1.0;
    return apply_green(e);
}

double BoxSpectral::green(int x1, int y1, int x2, int y2) const
{
    using std::numbers::pi;
    const double lx = nx_ + 1, ly = ny_ + 1;
    std::vector<double> sx(static_cast<std::size_t>(nx_)), sy(static_cast<std::size_t>(ny_));
    for (int j = 1; j <= nx_; ++j)
        sx[static_cast<std::size_t>(j - 1)] =
            std::sin(pi * j * (x1 + 1) / lx) * std::sin(pi * j * (x2 + 1) / lx);
    for (int k = 1; k <= ny_; ++k)
        sy[static_cast<std::size_t>(k - 1)] =
            std::sin(pi * k * (y1 + 1) / ly) * std::sin(pi * k * (y2 + 1) / ly);
    double s = 0.0;
    for (int k = 0; k < ny_; ++k) {
        double row = 0.0;
        for (int j = 0; j < nx_; ++j)
            row += sx[static_cast<std::size_t>(j)] * inv_lambda_[static_cast<Eigen::Index>(k) * nx_ + j];
        s += sy[static_cast<std::size_t>(k)] * row;
    }
    return 4.0 * s / (lx * ly);
}

Eigen::VectorXd BoxSpectral::diagonal() const
{
    using std::numbers::pi;
    // G(x,x) = (4/(LxLy)) Σ_jk sx(x,j)² sy(y,k)² / λ_jk, i.e. Sx W Syᵀ.
    Eigen::MatrixXd sx(nx_, nx_), sy(ny_, ny_);
    for (int x = 0; x < nx_; ++x)
        for (int j = 0; j < nx_; ++j) {
            double s = std::sin(pi * (j + 1) * (x + 1) / (nx_ + 1));
            sx(x, j) = s * s;
        }
    for (int y = 0; y < ny_; ++y)
        for (int k = 0; k < ny_; ++k) {
            double s = std::sin(pi * (k + 1) * (y + 1) / (ny_ + 1));
            sy(y, k) = s * s;
        }
    // inv_lambda_ is row-major (k, j) -> map as ny × nx.
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
        inv_lambda_.data(), ny_, nx_);
    Eigen::MatrixXd m = sy * w * sx.transpose();   // (y, x)
    Eigen::VectorXd out(size());
    const double scale = 4.0 / ((nx_ + 1.0) * (ny_ + 1.0));
    for (int y = 0; y < ny_; ++y)
        for (int x = 0; x < nx_; ++x) out[static_cast<Eigen::Index>(y) * nx_ + x] = scale * m(y, x);
    return out;
}

} // namespace dgff
