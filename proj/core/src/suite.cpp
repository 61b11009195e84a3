#include "dgff/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "dgff/brw.hpp"
#include "dgff/chaos.hpp"
#include "dgff/error.hpp"
#include "dgff/extremes.hpp"
#include "dgff/green.hpp"
#include "dgff/network.hpp"
#include "dgff/parallel.hpp"
#include "dgff/rwre.hpp"
#include "dgff/sampler.hpp"
#include "dgff/stats.hpp"

namespace dgff {

namespace {

std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Outcome {
    bool passed;
    std::string detail;
};

struct Context {
    SeedStream seeds;
    int threads;
    Rng rng(std::uint64_t replica, const char* tag) const { return seeds.stream(replica, stream_tag(tag)); }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Maxima and level-set sizes of box fields, shared by the extreme-value criteria.
class BoxRuns {
public:
    static constexpr int kReps = 1000;
    static constexpr double kLambdas[2] = {0.2, 0.4};

    struct Run {
        std::vector<double> maxima;
        std::vector<double> level[2];
    };

    const Run& get(const Context& ctx, int N)
    {
        auto it = runs_.find(N);
        if (it != runs_.end()) return it->second;
        FieldSampler sampler(make_box(N));
        Run run;
        run.maxima.resize(kReps);
        for (auto& l : run.level) l.resize(kReps);
        const double t[2] = {a_N(N, kLambdas[0]), a_N(N, kLambdas[1])};
        const std::string tag = "box-runs-" + std::to_string(N);
        parallel_for(kReps, ctx.threads, [&](std::size_t r) {
            Rng rng = ctx.seeds.stream(r, stream_tag(tag));
            Field h = sampler.sample(rng);
            run.maxima[r] = h.values().maxCoeff();
            for (int l = 0; l < 2; ++l)
                run.level[l][r] = static_cast<double>((h.values().array() >= t[l]).count());
        });
        return runs_.emplace(N, std::move(run)).first->second;
    }

private:
    std::map<int, Run> runs_;
};

// Criterion 1
Outcome green_poisson(const Context&)
{
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int N : {4, 8, 16, 32, 64}) worst = std::max(worst, poisson_residual(green_matrix(make_box(N))));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-10 && secs < 30.0, fmt("max residual %.3g over N=4..64 in %.2f s", worst, secs)};
}

// Criterion 2
Outcome potential_kernel_check(const Context&)
{
    const double a0 = potential_kernel({0, 0});
    const double a1 = potential_kernel({1, 0});
    const double c0 = calibrate_c0(512);
    double worst_ratio = 0.0;
    for (int r : {8, 16, 32, 64})
        for (Vertex x : {Vertex{r, 0}, Vertex{0, r}}) {
            double err = std::abs(potential_kernel(x) - kG * std::log(double(r)) - c0);
            worst_ratio = std::max(worst_ratio, err * r * r / 2.0);
        }
    bool ok = a0 == 0.0 && std::abs(a1 - 1.0) <= 1e-6 && worst_ratio <= 1.0;
    return {ok, fmt("a(0)=%g |a(e1)-1|=%.2g c0=%.12f worst err/(2/r^2)=%.3f", a0, std::abs(a1 - 1.0), c0,
                    worst_ratio)};
}

// Criterion 3
Outcome representation(const Context& ctx)
{
    Rng rng = ctx.rng(0, "representation");
    double worst = 0.0;
    for (int N : {4, 8, 16}) {
        LatticeDomain d = make_box(N);
        GreenOperator g = green_matrix(d);
        std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
        for (int k = 0; k < 100; ++k) {
            std::size_t i = pick(rng), j = pick(rng);
            worst = std::max(worst, std::abs(green_via_kernel(d, d.vertex(i), d.vertex(j)) - g(i, j)));
        }
    }
    return {worst <= 1e-7, fmt("max |diff| %.3g over 300 pairs", worst)};
}

// ‖G^V − (G^U + H G^V_ext Hᵀ)‖∞ with H built column by column from harmonic extension.
double gibbs_markov_defect(const LatticeDomain& V, const LatticeDomain& U)
{
    GreenOperator gv = green_matrix(V);
    GreenOperator gu = green_matrix(U);
    std::vector<Eigen::Index> ext;
    for (std::size_t i = 0; i < V.size(); ++i)
        if (!U.contains(V.vertex(i))) ext.push_back(static_cast<Eigen::Index>(i));
    const auto n = static_cast<Eigen::Index>(V.size());
    const auto m = static_cast<Eigen::Index>(ext.size());
    Eigen::MatrixXd H(n, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::VectorXd data = Eigen::VectorXd::Zero(n);
        data[ext[static_cast<std::size_t>(k)]] = 1.0;
        H.col(k) = harmonic_extension(V, U, data);
    }
    Eigen::MatrixXd gext(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) gext(a, b) = gv(ext[std::size_t(a)], ext[std::size_t(b)]);
    Eigen::MatrixXd sum = H * gext * H.transpose();
    for (std::size_t i = 0; i < U.size(); ++i)
        for (std::size_t j = 0; j < U.size(); ++j)
            sum(V.index(U.vertex(i)), V.index(U.vertex(j))) += gu(Eigen::Index(i), Eigen::Index(j));
    return (gv.matrix() - sum).cwiseAbs().maxCoeff();
}

// Criterion 4
Outcome gibbs_markov(const Context& ctx)
{
    LatticeDomain V = make_box(16);
    LatticeDomain quad = V.restricted([](const Vertex& v) { return v.x != 8 && v.y != 8; });
    LatticeDomain punct = V.without({{5, 11}});
    double d1 = gibbs_markov_defect(V, quad);
    double d2 = gibbs_markov_defect(V, punct);
    double harm = 0.0;
    Rng rng = ctx.rng(0, "gibbs-markov");
    for (const auto* U : {&quad, &punct})
        for (auto method : {BindingMethod::ExactCovariance, BindingMethod::HarmonicExtension}) {
            GibbsMarkovSplitter split(V, *U, method);
            for (int k = 0; k < 5; ++k) harm = std::max(harm, harmonicity_residual(split.sample(rng).binding));
        }
    bool ok = d1 <= 1e-9 && d2 <= 1e-9 && harm <= 1e-8;
    return {ok, fmt("quadrant %.3g, punctured %.3g, binding harmonicity %.3g", d1, d2, harm)};
}

// Criterion 5
Outcome sampler_law(const Context& ctx)
{
    auto t0 = std::chrono::steady_clock::now();
    GreenOperator g = green_matrix(make_box(8));
    const Eigen::Index n = g.size();
    constexpr int reps = 100000, batch = 1000;
    Rng rng = ctx.rng(0, "sampler-law");
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd block(n, batch);
    for (int r = 0; r < reps; r += batch) {
        for (int b = 0; b < batch; ++b) block.col(b) = sample_dense(g, rng).values();
        S.noalias() += block * block.transpose();
    }
    S /= reps;
    int inside = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double se = std::sqrt((g(i, i) * g(j, j) + g(i, j) * g(i, j)) / reps);
            if (std::abs(S(i, j) - g(i, j)) <= 3.0 * se) ++inside;
        }
    double frac = double(inside) / double(n * n);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {frac >= 0.99 && secs < 60.0, fmt("%.4f of entries within 3 s.e. in %.1f s", frac, secs)};
}

// Criterion 6
Outcome concentric(const Context&)
{
    ConcentricDecomposition cd(make_centered_box(128));
    double worst = 0.0;
    for (Vertex y : {Vertex{0, 0}, Vertex{1, 0}, Vertex{3, -2}, Vertex{17, 9}, Vertex{-40, 33}, Vertex{100, -90},
                     Vertex{-127, 127}, Vertex{64, 0}}) {
        Eigen::VectorXd col = cd.covariance_column(y);
        worst = std::max(worst, (col - green_column(cd.outer(), y)).cwiseAbs().maxCoeff());
    }
    ConcentricDecomposition big(make_centered_box(512));
    double v4 = big.phi0_variance(4);
    double target = kG * std::numbers::ln2;
    bool ok = cd.depth() == 6 && big.depth() == 8 && worst <= 1e-8 && std::abs(v4 - target) <= 0.05;
    return {ok, fmt("n=%d column error %.3g; Var phi_4(0)=%.6f vs g log 2=%.6f at n=%d", cd.depth(), worst, v4,
                    target, big.depth())};
}

// Criterion 7
Outcome binding_limit(const Context&)
{
    double diff = green_entry(make_centered_box(256), {0, 0}, {0, 0}) -
                  green_entry(make_centered_box(128), {0, 0}, {0, 0});
    double target = kG * std::numbers::ln2;
    return {std::abs(diff - target) <= 0.02, fmt("G^B(256)(0,0)-G^B(128)(0,0)=%.6f vs %.6f", diff, target)};
}

// Criterion 8
Outcome level_set_exponent(const Context& ctx, BoxRuns& runs)
{
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> Ns{64, 128, 256, 512};
    boost::math::normal_distribution<double> nd;
    bool ok = true;
    std::string detail;
    for (int l = 0; l < 2; ++l) {
        const double lambda = BoxRuns::kLambdas[l];
        std::vector<double> x, y, y_exact;
        for (int N : Ns) {
            const auto& run = runs.get(ctx, N);
            x.push_back(std::log(double(N)));
            y.push_back(std::log(estimate(run.level[l]).mean));
            Eigen::VectorXd diag = BoxSpectral(N - 1).diagonal();
            double e = 0.0;
            for (Eigen::Index i = 0; i < diag.size(); ++i)
                e += boost::math::cdf(boost::math::complement(nd, a_N(N, lambda) / std::sqrt(diag[i])));
            y_exact.push_back(std::log(e));
        }
        double slope = linear_fit(x, y).slope;
        double target = 2.0 * (1.0 - lambda * lambda);
        ok = ok && std::abs(slope - target) <= 0.15;
        detail += fmt("%slambda=%.1f slope %.4f (exact-mean %.4f) vs %.2f", l ? "; " : "", lambda, slope,
                      linear_fit(x, y_exact).slope, target);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail += fmt("; %d replicas per N", BoxRuns::kReps);
    return {ok && secs < 1200.0, detail};
}

// Criterion 9
Outcome max_tightness(const Context& ctx, BoxRuns& runs)
{
    double lo = INFINITY, hi = -INFINITY;
    std::string detail = "median(M_N)-m_N:";
    for (int N : {64, 128, 256, 512}) {
        double c = max_stats(runs.get(ctx, N).maxima, N).centered_median;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        detail += fmt(" %d:%.3f", N, c);
    }
    detail += fmt("; width %.3f", hi - lo);
    return {hi - lo <= 4.0, detail};
}

// Criterion 10
Outcome dekking_host(const Context& ctx, BoxRuns& runs)
{
    bool ok = true;
    std::string detail;
    for (int N : {32, 64, 128}) {
        DekkingHost dh = dekking_host_check(runs.get(ctx, N).maxima, runs.get(ctx, 2 * N).maxima);
        ok = ok && dh.holds(3.0);
        detail += fmt("%sN=%d %.3f<=%.3f+3*%.3f", N == 32 ? "" : "; ", N, dh.lhs, dh.rhs, dh.combined_se);
    }
    return {ok, detail};
}

// Criterion 11
Outcome brw_centering(const Context& ctx)
{
    double worst = 0.0;
    std::string where;
    auto run = [&](int b, int lo, int hi) {
        for (int n = lo; n <= hi; ++n) {
            auto s = brw_max_stats(b, n, 1000, ctx.seeds.child(stream_tag("brw-" + std::to_string(b))).child(n),
                                   ctx.threads);
            if (std::abs(s.centered.mean) >= worst) {
                worst = std::abs(s.centered.mean);
                where = fmt("b=%d n=%d", b, n);
            }
        }
    };
    run(2, 8, 18);
    run(4, 5, 10);
    return {worst <= 2.0, fmt("max |E max - m~| = %.3f at %s", worst, where.c_str())};
}

Network random_graph(Rng& rng, int n)
{
    std::vector<Edge> edges;
    std::normal_distribution<double> logc(0.0, 1.0);
    for (int i = 1; i < n; ++i)
        edges.push_back({i, std::uniform_int_distribution<int>(0, i - 1)(rng), std::exp(logc(rng))});
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < n / 2; ++k) {
        int a = pick(rng), b = pick(rng);
        if (a != b) edges.push_back({a, b, std::exp(logc(rng))});
    }
    return Network(static_cast<std::size_t>(n), std::move(edges));
}

// Alternates DGFF-weighted grids and random sparse graphs.
Network random_network(Rng& rng, int k, int max_side)
{
    if (k % 2 == 0) {
        int N = std::uniform_int_distribution<int>(3, max_side)(rng);
        double beta = std::uniform_real_distribution<double>(0.2, 1.5)(rng);
        Field h = FieldSampler(make_box(N)).sample(rng);
        return from_field(h, beta);
    }
    int n = std::uniform_int_distribution<int>(5, (max_side - 1) * (max_side - 1))(rng);
    return random_graph(rng, n);
}

std::vector<int> hop_distance(const Network& net, int u)
{
    std::vector<int> d(net.size(), -1);
    std::deque<int> q{u};
    d[static_cast<std::size_t>(u)] = 0;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (int e : net.incident(x)) {
            int y = net.other(static_cast<std::size_t>(e), x);
            if (d[static_cast<std::size_t>(y)] < 0) {
                d[static_cast<std::size_t>(y)] = d[static_cast<std::size_t>(x)] + 1;
                q.push_back(y);
            }
        }
    }
    return d;
}

// Edge sets between consecutive hop spheres around u: disjoint and each separating.
std::vector<std::vector<int>> sphere_cutsets(const Network& net, int u, int v)
{
    auto d = hop_distance(net, u);
    std::vector<std::vector<int>> cuts(static_cast<std::size_t>(d[static_cast<std::size_t>(v)]));
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        int a = d[static_cast<std::size_t>(net.edge(e).u)], b = d[static_cast<std::size_t>(net.edge(e).v)];
        int k = std::min(a, b);
        if (std::abs(a - b) == 1 && k < static_cast<int>(cuts.size())) cuts[static_cast<std::size_t>(k)].push_back(int(e));
    }
    return cuts;
}

// Greedy edge-disjoint shortest paths.
std::vector<std::vector<int>> disjoint_paths(const Network& net, int u, int v, int limit)
{
    std::vector<char> used(net.edges().size(), 0);
    std::vector<std::vector<int>> paths;
    while (static_cast<int>(paths.size()) < limit) {
        std::vector<int> via(net.size(), -2);
        via[static_cast<std::size_t>(u)] = -1;
        std::deque<int> q{u};
        while (!q.empty() && via[static_cast<std::size_t>(v)] == -2) {
            int x = q.front();
            q.pop_front();
            for (int e : net.incident(x)) {
                int y = net.other(static_cast<std::size_t>(e), x);
                if (used[static_cast<std::size_t>(e)] || via[static_cast<std::size_t>(y)] != -2) continue;
                via[static_cast<std::size_t>(y)] = e;
                q.push_back(y);
            }
        }
        if (via[static_cast<std::size_t>(v)] == -2) break;
        std::vector<int> path;
        for (int x = v; x != u;) {
            int e = via[static_cast<std::size_t>(x)];
            path.push_back(e);
            used[static_cast<std::size_t>(e)] = 1;
            x = net.other(static_cast<std::size_t>(e), x);
        }
        std::reverse(path.begin(), path.end());
        paths.push_back(std::move(path));
    }
    return paths;
}

// Worst relative change of pairwise resistances between labelled terminals.
double pairwise_defect(const Network& a, const Network& b, const std::vector<std::int64_t>& labels)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            double ra = effective_resistance(a, a.index_of(labels[i]), a.index_of(labels[j])).R;
            double rb = effective_resistance(b, b.index_of(labels[i]), b.index_of(labels[j])).R;
            worst = std::max(worst, rel(rb, ra));
        }
    return worst;
}

// Criterion 12
Outcome electric(const Context& ctx)
{
    double dual = 0.0, reduce = 0.0, paths = 0.0, cuts = 0.0, budget = 0.0;
    double nw_slack = INFINITY, pb_slack = INFINITY;
    int counts[5] = {0, 0, 0, 0, 0};  // series, parallel, star-triangle, triangle-star, schur
    std::size_t largest = 0;
    for (int k = 0; k < 50; ++k) {
        Rng rng = ctx.rng(static_cast<std::uint64_t>(k), "electric");
        Network net = random_network(rng, k, 32);
        largest = std::max(largest, net.size());
        const int n = static_cast<int>(net.size());
        std::vector<int> term;
        std::uniform_int_distribution<int> pick(0, n - 1);
        while (static_cast<int>(term.size()) < std::min(4, n)) {
            int x = pick(rng);
            if (std::find(term.begin(), term.end(), x) == term.end()) term.push_back(x);
        }
        const int u = term[0], v = term[1];
        std::vector<std::int64_t> labels;
        for (int x : term) labels.push_back(net.label(x));
        auto is_term = [&](int x) { return std::find(term.begin(), term.end(), x) != term.end(); };

        dual = std::max(dual, duality_check(net, u, v).residual);
        Resistance R = effective_resistance(net, u, v);
        auto pd = path_decompose(net, u, v);
        auto cd = cut_decompose(net, u, v);
        paths = std::max(paths, rel(pd.reconstruction(), R.R));
        cuts = std::max(cuts, rel(cd.reconstruction(), R.C));
        budget = std::max({budget, pd.budget_violation(net), cd.budget_violation(net)});
        nw_slack = std::min(nw_slack, (nash_williams(net, sphere_cutsets(net, u, v), {u}, {v}) - R.C) / R.C);
        pb_slack = std::min(pb_slack, (path_bound(net, disjoint_paths(net, u, v, 6), u, v) - R.R) / R.R);

        for (int x = 0; x < n; ++x)
            if (!is_term(x) && net.degree(x) == 2) {
                try {
                    reduce = std::max(reduce, pairwise_defect(net, reduce_series(net, x), labels));
                    ++counts[0];
                    break;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::PatternNotFound) throw;
                }
            }
        {
            auto edges = net.edges();
            const Edge e0 = edges[0];
            edges[0].c = 0.3 * e0.c;
            edges.push_back({e0.u, e0.v, 0.7 * e0.c});
            Network doubled(net.size(), edges, net.labels());
            reduce = std::max(reduce, pairwise_defect(net, doubled, labels));
            reduce = std::max(reduce, pairwise_defect(net, reduce_parallel(doubled, e0.u, e0.v), labels));
            ++counts[1];
        }
        for (int x = 0; x < n; ++x)
            if (!is_term(x) && net.degree(x) == 3) {
                Network tri;
                try {
                    tri = star_triangle(net, x);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::PatternNotFound) throw;
                    continue;
                }
                reduce = std::max(reduce, pairwise_defect(net, tri, labels));
                ++counts[2];
                int nb[3];
                for (int j = 0; j < 3; ++j)
                    nb[j] = tri.index_of(net.label(net.other(static_cast<std::size_t>(net.incident(x)[std::size_t(j)]), x)));
                try {
                    reduce = std::max(reduce, pairwise_defect(net, triangle_star(tri, nb[0], nb[1], nb[2]), labels));
                    ++counts[3];
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::PatternNotFound) throw;
                }
                break;
            }
        if (term.size() >= 2) {
            reduce = std::max(reduce, pairwise_defect(net, subnetwork_reduce(net, term), labels));
            ++counts[4];
        }
    }
    bool exercised = std::all_of(std::begin(counts), std::end(counts), [](int c) { return c > 0; });
    bool ok = dual <= 1e-10 && reduce <= 1e-9 && paths <= 1e-8 && cuts <= 1e-8 && budget <= 1e-8 &&
              nw_slack >= -1e-12 && pb_slack >= -1e-12 && exercised;
    return {ok, fmt("50 networks up to %zu nodes: duality %.2g, reductions %.2g (series %d, parallel %d, "
                    "star-triangle %d, triangle-star %d, Schur %d), paths %.2g, cuts %.2g, budget %.2g, "
                    "min slack NW %.3g path %.3g",
                    largest, dual, reduce, counts[0], counts[1], counts[2], counts[3], counts[4], paths, cuts,
                    budget, nw_slack, pb_slack)};
}

// Criterion 13
Outcome gradient_bound(const Context& ctx)
{
    LatticeDomain d = make_box(5);
    FieldSampler sampler(d);
    const int u = d.index({1, 1}), v = d.index({4, 4});
    bool ok = true;
    std::string detail;
    for (double beta : {0.5, 1.0}) {
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            Rng rng = ctx.rng(static_cast<std::uint64_t>(k), beta == 0.5 ? "gradient-0.5" : "gradient-1");
            worst = std::max(worst, log_resistance_gradient(sampler.sample(rng), beta, u, v).l1);
        }
        ok = ok && worst <= 2.0 * beta + 1e-3;
        detail += fmt("%sbeta=%.1f max l1 %.6f", beta == 0.5 ? "" : "; ", beta, worst);
    }
    return {ok, detail};
}

// Criterion 14
Outcome hitting_identities(const Context& ctx)
{
    double hit = 0.0, commute = 0.0;
    for (int k = 0; k < 20; ++k) {
        Rng rng = ctx.rng(static_cast<std::uint64_t>(k), "hitting");
        WalkKernel kern(random_network(rng, k, 14));
        const int n = static_cast<int>(kern.size());
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::vector<char> out(static_cast<std::size_t>(n), 0);
        for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(pick(rng))] = 1;
        std::vector<int> A;
        for (int x = 0; x < n; ++x)
            if (!out[static_cast<std::size_t>(x)]) A.push_back(x);
        int x = A[std::uniform_int_distribution<std::size_t>(0, A.size() - 1)(rng)];
        hit = std::max(hit, expected_exit_time(kern, x, A).relative_residual());
        int a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        commute = std::max(commute, commute_time(kern, a, b).relative_residual());
    }
    return {hit <= 1e-8 && commute <= 1e-8, fmt("exit-time %.3g, commute %.3g over 20 networks", hit, commute)};
}

// Criterion 15
Outcome gmc_martingale(const Context& ctx)
{
    ChaosField f(7);
    const double beta = 0.3 * chaos_alpha();
    const int cells[3][2] = {{0, 0}, {1, 2}, {3, 3}};
    constexpr int m = 2, innovations = 10000;
    double worst_z = 0.0;
    for (int k = 1; k <= 3; ++k) {
        Rng rng = ctx.rng(static_cast<std::uint64_t>(k), "gmc-martingale");
        ChaosMeasure parent = lebesgue_measure(f, beta);
        for (int j = 0; j < k; ++j) parent = gmc_step(parent, f.sample_level(j, rng), f.level_variance(j), beta);
        std::vector<std::vector<double>> child(3);
        for (int r = 0; r < innovations; ++r) {
            ChaosMeasure c = gmc_step(parent, f.sample_level(k, rng), f.level_variance(k), beta);
            for (int q = 0; q < 3; ++q) child[std::size_t(q)].push_back(c.cell_mass(m, cells[q][0], cells[q][1]));
        }
        for (int q = 0; q < 3; ++q) {
            auto s = estimate(child[std::size_t(q)]);
            worst_z = std::max(worst_z, std::abs(s.mean - parent.cell_mass(m, cells[q][0], cells[q][1])) / *s.se);
        }
    }
    std::vector<double> totals;
    for (int r = 0; r < 2000; ++r) {
        Rng rng = ctx.rng(static_cast<std::uint64_t>(r), "gmc-total");
        totals.push_back(martingale_chaos(f, f.depth(), beta, rng).total_mass());
    }
    auto s = estimate(totals);
    const double R = f.resolution();
    const double leb = (R - 1) * (R - 1) / (R * R);
    const double z = std::abs(s.mean - leb) / *s.se;
    return {worst_z <= 3.0 && z <= 3.0,
            fmt("conditional means worst %.2f s.e.; E mass %.4f vs Leb %.4f (%.2f s.e.)", worst_z, s.mean, leb, z)};
}

// Criterion 16
Outcome rwre_exponents(const Context& ctx)
{
    auto hk = srw_heat_kernel_slope(128, {16, 32, 64, 128, 256, 512, 1024});
    auto ex = exit_time_exponent(0.5 * beta_tilde_c(), {16, 32, 64, 128}, 30, ctx.seeds.child(stream_tag("exit")),
                                 ctx.threads);
    bool ok = std::abs(hk.fit.slope + 1.0) <= 0.1 && std::abs(ex.theta - 2.5) <= 0.5;
    return {ok, fmt("heat-kernel slope %.4f; exit-time slope %.3f (theta=%.3f) over 30 environments", hk.fit.slope,
                    ex.theta, theta_exponent(0.5 * beta_tilde_c()))};
}

} // namespace

std::vector<CriterionInfo> acceptance_criteria()
{
    return {{1, "green-poisson-residual"}, {2, "potential-kernel"},      {3, "representation-identity"},
            {4, "gibbs-markov"},           {5, "sampler-law"},           {6, "concentric-decomposition"},
            {7, "binding-variance-limit"}, {8, "level-set-exponent"},    {9, "max-tightness"},
            {10, "dekking-host"},          {11, "brw-centering"},        {12, "electric-identities"},
            {13, "gradient-bound"},        {14, "hitting-commute"},      {15, "gmc-martingale"},
            {16, "rwre-exponents"}};
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result)
{
    Context ctx{SeedStream(opt.seed), resolve_threads(opt.threads)};
    BoxRuns runs;
    std::vector<CriterionResult> out;
    for (const auto& c : acceptance_criteria()) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), c.id) == opt.only.end()) continue;
        CriterionResult r{c.id, c.name, false, "", 0.0};
        auto t0 = std::chrono::steady_clock::now();
        try {
            Outcome o;
            switch (c.id) {
            case 1: o = green_poisson(ctx); break;
            case 2: o = potential_kernel_check(ctx); break;
            case 3: o = representation(ctx); break;
            case 4: o = gibbs_markov(ctx); break;
            case 5: o = sampler_law(ctx); break;
            case 6: o = concentric(ctx); break;
            case 7: o = binding_limit(ctx); break;
            case 8: o = level_set_exponent(ctx, runs); break;
            case 9: o = max_tightness(ctx, runs); break;
            case 10: o = dekking_host(ctx, runs); break;
            case 11: o = brw_centering(ctx); break;
            case 12: o = electric(ctx); break;
            case 13: o = gradient_bound(ctx); break;
            case 14: o = hitting_identities(ctx); break;
            case 15: o = gmc_martingale(ctx); break;
            default: o = rwre_exponents(ctx); break;
            }
            r.passed = o.passed;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r)
{
    return fmt("%s %02d %s (%.1f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) + r.detail;
}

} // namespace dgff
