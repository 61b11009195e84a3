#include "dgff/brw.hpp"

#include <algorithm>
#include <cmath>

#include "dgff/error.hpp"
#include "dgff/parallel.hpp"

namespace dgff {

namespace {

std::uint64_t checked_power(int b, int n)
{
    require(b >= 2 && n >= 1, ErrorKind::InvalidArgument, "BRW needs b >= 2 and n >= 1");
    std::uint64_t p = 1;
    for (int k = 0; k < n; ++k) {
        p *= static_cast<std::uint64_t>(b);
        require(p <= (std::uint64_t{1} << 28), ErrorKind::Overflow, "BRW leaf count exceeds 2^28");
    }
    return p;
}

std::vector<double> grow(int b, int n, Rng& rng)
{
    std::vector<double> cur{standard_normal(rng)};
    for (int k = 1; k < n; ++k) {
        std::vector<double> next(cur.size() * static_cast<std::size_t>(b));
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (int c = 0; c < b; ++c) next[i * static_cast<std::size_t>(b) + static_cast<std::size_t>(c)] = cur[i] + standard_normal(rng);
        cur.swap(next);
    }
    return cur;
}

} // namespace

BrwSample::BrwSample(int b, int n, std::vector<double> parents) : b_(b), n_(n), parents_(std::move(parents))
{
    require(parents_.size() * static_cast<std::size_t>(b) == checked_power(b, n), ErrorKind::InvalidSize,
            "BRW sample must hold b^(n-1) depth n-1 values");
}

std::uint64_t BrwSample::leaf_count() const
{
    return static_cast<std::uint64_t>(parents_.size()) * static_cast<std::uint64_t>(b_);
}

double BrwSample::max() const
{
    return *std::max_element(parents_.begin(), parents_.end());
}

BrwSample sample_brw(int b, int n, Rng& rng)
{
    checked_power(b, n);
    return BrwSample(b, n, grow(b, n, rng));
}

double sample_brw_max(int b, int n, Rng& rng)
{
    checked_power(b, n);
    auto v = grow(b, n, rng);
    return *std::max_element(v.begin(), v.end());
}

double m_tilde(int b, int n)
{
    require(b >= 2 && n >= 1, ErrorKind::InvalidArgument, "m_tilde needs b >= 2 and n >= 1");
    const double s = std::sqrt(2.0 * std::log(static_cast<double>(b)));
    return s * n - 3.0 / (2.0 * s) * std::log(static_cast<double>(n));
}

int ultrametric_distance(std::uint64_t x, std::uint64_t y, int b, int n)
{
    const std::uint64_t total = checked_power(b, n);
    require(x < total && y < total, ErrorKind::InvalidArgument, "leaf index out of range");
    int d = 0;
    while (x != y) {
        x /= static_cast<std::uint64_t>(b);
        y /= static_cast<std::uint64_t>(b);
        ++d;
    }
    return d;
}

std::vector<int> embed_digits(const Vertex& v, int n)
{
    require(n >= 1 && n <= 14, ErrorKind::InvalidArgument, "embedding depth must lie in 1..14");
    const int N = 1 << n;
    require(v.x > 0 && v.x < N && v.y > 0 && v.y < N, ErrorKind::Domain, "vertex outside V_N");
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        int j = n - i;
        d[static_cast<std::size_t>(i - 1)] = 2 * ((v.x >> j) & 1) + ((v.y >> j) & 1) + 1;
    }
    return d;
}

std::uint64_t embed(const Vertex& v, int n)
{
    std::uint64_t idx = 0;
    for (int x : embed_digits(v, n)) idx = idx * 4 + static_cast<std::uint64_t>(x - 1);
    return idx;
}

double ballot_bridge(double a, double b, double r)
{
    require(a > 0.0 && b > 0.0 && r > 0.0, ErrorKind::InvalidArgument, "ballot_bridge needs a, b, r > 0");
    return -std::expm1(-2.0 * a * b / r);
}

EstimatorSummary ballot_bridge_mc(double a, double b, double r, int paths, int steps, Rng& rng)
{
    require(a > 0.0 && b > 0.0 && r > 0.0, ErrorKind::InvalidArgument, "ballot_bridge needs a, b, r > 0");
    require(paths >= 2 && steps >= 1, ErrorKind::InvalidArgument, "need >= 2 paths and >= 1 step");
    const double dt = r / steps;
    std::vector<double> est(static_cast<std::size_t>(paths));
    std::vector<double> w(static_cast<std::size_t>(steps) + 1);
    for (auto& e : est) {
        // Brownian motion from a, pinned to b at time r.
        w[0] = 0.0;
        for (int k = 1; k <= steps; ++k) w[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k - 1)] + std::sqrt(dt) * standard_normal(rng);
        double surv = 1.0;
        double prev = a;
        for (int k = 1; k <= steps && surv > 0.0; ++k) {
            double t = k * dt;
            double cur = a + w[static_cast<std::size_t>(k)] - (t / r) * (w[static_cast<std::size_t>(steps)] - (b - a));
            if (k == steps) cur = b;
            if (cur <= 0.0) surv = 0.0;
            else surv *= -std::expm1(-2.0 * prev * cur / dt);
            prev = cur;
        }
        e = surv;
    }
    return estimate(est);
}

BrwMaxStats brw_max_stats(int b, int n, int reps, const SeedStream& seeds, int threads)
{
    checked_power(b, n);
    require(reps >= 1, ErrorKind::InvalidArgument, "brw_max_stats needs >= 1 replica");
    BrwMaxStats s;
    s.b = b;
    s.n = n;
    s.m_tilde = m_tilde(b, n);
    s.maxima.resize(static_cast<std::size_t>(reps));
    const auto tag = stream_tag("brw");
    parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
        Rng rng = seeds.stream(r, tag);
        s.maxima[r] = sample_brw_max(b, n, rng);
    });
    std::vector<double> c(s.maxima);
    for (auto& v : c) v -= s.m_tilde;
    s.centered = estimate(c, {{0.1, 0.5, 0.9}});
    return s;
}

std::vector<double> upper_tail(const std::vector<double>& x, const std::vector<double>& t)
{
    require(!x.empty(), ErrorKind::InvalidSize, "empty sample");
    std::vector<double> p;
    for (double s : t)
        p.push_back(static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v > s; })) /
                    static_cast<double>(x.size()));
    return p;
}

} // namespace dgff
