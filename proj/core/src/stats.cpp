#include "dgff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dgff/error.hpp"
#include "dgff/random.hpp"

namespace dgff {

double quantile(std::vector<double> s, double p)
{
    require(!s.empty(), ErrorKind::InvalidSize, "quantile of an empty sample");
    require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidArgument, "quantile level must lie in [0,1]");
    std::sort(s.begin(), s.end());
    double pos = p * static_cast<double>(s.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, s.size() - 1);
    double f = pos - static_cast<double>(lo);
    return s[lo] + f * (s[hi] - s[lo]);
}

double median(std::vector<double> s)
{
    return quantile(std::move(s), 0.5);
}

EstimatorSummary estimate(std::span<const double> x, const EstimateOptions& opt)
{
    require(!x.empty(), ErrorKind::InvalidSize, "estimate needs at least one sample");
    EstimatorSummary out;
    out.n = x.size();
    const double n = static_cast<double>(x.size());
    out.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x) ss += (v - out.mean) * (v - out.mean);
        out.variance = ss / (n - 1.0);
        out.se = std::sqrt(out.variance / n);
    }
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    for (double p : opt.quantiles) out.quantiles.emplace_back(p, quantile(sorted, p));
    std::sort(out.quantiles.begin(), out.quantiles.end());
    if (opt.bootstrap > 0) {
        Rng rng(opt.seed);
        std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
        std::vector<double> means(static_cast<std::size_t>(opt.bootstrap));
        for (auto& m : means) {
            double acc = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) acc += x[pick(rng)];
            m = acc / n;
        }
        double tail = 0.5 * (1.0 - opt.level);
        out.ci = std::make_pair(quantile(means, tail), quantile(means, 1.0 - tail));
    }
    return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::InvalidSize,
            "linear fit needs two equally long samples of length >= 2");
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorKind::InvalidArgument, "linear fit needs distinct abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = std::max(0.0, syy - f.slope * sxy);
    f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
    if (x.size() > 2) f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
    return f;
}

} // namespace dgff
