#include "dgff/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "dgff/error.hpp"
#include "dgff/green.hpp"

namespace dgff {

double m_N(double N)
{
    require(N >= 2.0, ErrorKind::InvalidArgument, "m_N needs N >= 2");
    const double sg = std::sqrt(kG);
    return 2.0 * sg * std::log(N) - 0.75 * sg * std::log(std::log(std::max(N, std::numbers::e)));
}

double K_N(double N, double a)
{
    require(N >= 2.0, ErrorKind::InvalidArgument, "K_N needs N >= 2");
    const double L = std::log(N);
    return N * N / std::sqrt(L) * std::exp(-a * a / (2.0 * kG * L));
}

double a_N(double N, double lambda)
{
    return 2.0 * std::sqrt(kG) * lambda * std::log(N);
}

double PointMeasure::total_mass() const
{
    double m = 0.0;
    for (const auto& a : atoms) m += a.w;
    return m;
}

double PointMeasure::mass_above(double b) const
{
    double m = 0.0;
    for (const auto& a : atoms)
        if (a.h >= b) m += a.w;
    return m;
}

std::string PointMeasure::to_json_lines() const
{
    std::string out;
    for (const auto& a : atoms) {
        nlohmann::json j;
        j["x"] = a.x;
        j["y"] = a.y;
        j["h"] = a.h;
        j["w"] = a.w;
        auto cl = nlohmann::json::array();
        for (const auto& c : a.cluster) cl.push_back({{c.z.x, c.z.y}, c.dh});
        j["cluster"] = std::move(cl);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<int> level_set(const Field& h, double t)
{
    std::vector<int> out;
    for (Eigen::Index i = 0; i < h.values().size(); ++i)
        if (h[i] >= t) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> extremal_set(const Field& h, double N, double t)
{
    return level_set(h, m_N(N) - t);
}

PointMeasure intermediate_measure(const Field& h, double lambda, double b_min)
{
    require(lambda > 0.0 && lambda < 1.0, ErrorKind::InvalidArgument, "lambda must lie in (0,1)");
    const double N = h.domain().scale();
    const double a = a_N(N, lambda);
    const double w = 1.0 / K_N(N, a);
    PointMeasure pm;
    for (int i : level_set(h, a + b_min)) {
        const Vertex& v = h.domain().vertex(static_cast<std::size_t>(i));
        pm.atoms.push_back({v.x / N, v.y / N, h[i] - a, w, {}});
    }
    return pm;
}

std::vector<int> local_maxima(const Field& h, double r)
{
    require(r >= 1.0, ErrorKind::InvalidArgument, "local maximum radius must be >= 1");
    const auto& d = h.domain();
    const int R = static_cast<int>(std::ceil(r));
    std::vector<Vertex> ball;
    for (int dy = -R; dy <= R; ++dy)
        for (int dx = -R; dx <= R; ++dx)
            if ((dx || dy) && dx * dx + dy * dy < r * r) ball.push_back({dx, dy});
    std::vector<int> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double hx = h[static_cast<Eigen::Index>(i)];
        bool top = true;
        for (const auto& z : ball) {
            int j = d.index(d.vertex(i) + z);
            if (j < 0) continue;
            double hy = h[j];
            if (hy > hx || (hy == hx && j < static_cast<int>(i))) {
                top = false;
                break;
            }
        }
        if (top) out.push_back(static_cast<int>(i));
    }
    return out;
}

PointMeasure structured_measure(const Field& h, double r, int w, double depth)
{
    require(w >= 0, ErrorKind::InvalidArgument, "cluster window must be >= 0");
    const auto& d = h.domain();
    const double N = d.scale();
    const double m = m_N(N);
    PointMeasure pm;
    for (int i : local_maxima(h, r)) {
        if (h[i] - m < -depth) continue;
        const Vertex& x = d.vertex(static_cast<std::size_t>(i));
        Atom a{x.x / N, x.y / N, h[i] - m, 1.0, {}};
        for (int dy = -w; dy <= w; ++dy)
            for (int dx = -w; dx <= w; ++dx) {
                int j = d.index(x + Vertex{dx, dy});
                if (j >= 0) a.cluster.push_back({{dx, dy}, h[i] - h[j]});
            }
        pm.atoms.push_back(std::move(a));
    }
    return pm;
}

double default_local_radius(double N)
{
    return std::ceil(std::sqrt(N));
}

FieldMax field_max(const Field& h)
{
    require(h.size() > 0, ErrorKind::EmptyDomain, "maximum of an empty field");
    FieldMax m{h[0], 0};
    for (Eigen::Index i = 1; i < h.values().size(); ++i)
        if (h[i] > m.value) m = {h[i], static_cast<int>(i)};
    return m;
}

MaxStats max_stats(const std::vector<double>& maxima, double N, const std::vector<Vertex>& argmax)
{
    require(!maxima.empty(), ErrorKind::InvalidSize, "max_stats needs at least one replica");
    MaxStats s;
    EstimateOptions opt;
    opt.quantiles = {0.1, 0.25, 0.5, 0.75, 0.9};
    s.max = estimate(maxima, opt);
    s.median = median(maxima);
    const double m = m_N(N);
    s.centered_median = s.median - m;
    for (const auto& [p, q] : s.max.quantiles) s.centered_quantiles.emplace_back(p, q - m);
    s.argmax = argmax;
    return s;
}

DekkingHost dekking_host_check(const std::vector<double>& a, const std::vector<double>& b)
{
    require(a.size() >= 2 && b.size() >= 2, ErrorKind::InvalidSize, "Dekking-Host needs replicas at both sizes");
    auto sa = estimate(a), sb = estimate(b);
    std::vector<double> dev(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) dev[i] = std::abs(a[i] - sa.mean);
    auto sd = estimate(dev);
    DekkingHost r;
    r.lhs = sd.mean;
    r.lhs_se = *sd.se;
    r.rhs = 2.0 * (sb.mean - sa.mean);
    r.rhs_se = 2.0 * std::sqrt(sa.variance / static_cast<double>(a.size()) + sb.variance / static_cast<double>(b.size()));
    r.combined_se = std::sqrt(r.lhs_se * r.lhs_se + r.rhs_se * r.rhs_se);
    return r;
}

} // namespace dgff
