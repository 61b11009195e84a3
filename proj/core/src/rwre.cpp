#include "dgff/rwre.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "dgff/error.hpp"
#include "dgff/parallel.hpp"

namespace dgff {

WalkKernel::WalkKernel(Network net, std::optional<LatticeDomain> domain)
    : net_(std::move(net)), domain_(std::move(domain))
{
    const std::size_t n = net_.size();
    pi_ = net_.vertex_weights();
    offset_.assign(n + 1, 0);
    for (std::size_t x = 0; x < n; ++x) offset_[x + 1] = offset_[x] + net_.incident(static_cast<int>(x)).size();
    target_.resize(offset_[n]);
    prob_.resize(offset_[n]);
    alias_prob_.resize(offset_[n]);
    alias_.resize(offset_[n]);
    for (std::size_t x = 0; x < n; ++x) {
        require(pi_[x] > 0.0, ErrorKind::InvalidArgument, "walk kernel needs every vertex to have an edge");
        std::size_t k = offset_[x];
        for (int e : net_.incident(static_cast<int>(x))) {
            target_[k] = net_.other(static_cast<std::size_t>(e), static_cast<int>(x));
            prob_[k] = net_.edge(static_cast<std::size_t>(e)).c / pi_[x];
            ++k;
        }
        // Vose alias table for the row.
        const std::size_t b = offset_[x], m = offset_[x + 1] - b;
        std::vector<double> scaled(m);
        std::vector<std::size_t> small, large;
        for (std::size_t j = 0; j < m; ++j) {
            scaled[j] = prob_[b + j] * static_cast<double>(m);
            (scaled[j] < 1.0 ? small : large).push_back(j);
        }
        while (!small.empty() && !large.empty()) {
            std::size_t s = small.back(), l = large.back();
            small.pop_back();
            alias_prob_[b + s] = scaled[s];
            alias_[b + s] = static_cast<int>(l);
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (auto j : large) {
            alias_prob_[b + j] = 1.0;
            alias_[b + j] = static_cast<int>(j);
        }
        for (auto j : small) {
            alias_prob_[b + j] = 1.0;
            alias_[b + j] = static_cast<int>(j);
        }
    }
}

double WalkKernel::transition(int x, int y) const
{
    double p = 0.0;
    for (std::size_t k = row_begin(x); k < row_end(x); ++k)
        if (target_[k] == y) p += prob_[k];
    return p;
}

int WalkKernel::step(int x, Rng& rng) const
{
    const std::size_t b = row_begin(x), m = row_end(x) - b;
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::size_t j = pick(rng);
    if (uniform01(rng) >= alias_prob_[b + j]) j = static_cast<std::size_t>(alias_[b + j]);
    return target_[b + j];
}

double WalkKernel::row_sum_error() const
{
    double worst = 0.0;
    for (std::size_t x = 0; x < size(); ++x) {
        double s = 0.0;
        for (std::size_t k = offset_[x]; k < offset_[x + 1]; ++k) s += prob_[k];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double WalkKernel::detailed_balance_error() const
{
    double worst = 0.0;
    for (std::size_t x = 0; x < size(); ++x)
        for (std::size_t k = offset_[x]; k < offset_[x + 1]; ++k) {
            int y = target_[k];
            double a = pi_[x] * transition(static_cast<int>(x), y);
            double b = pi_[static_cast<std::size_t>(y)] * transition(y, static_cast<int>(x));
            worst = std::max(worst, std::abs(a - b) / std::max(a, b));
        }
    return worst;
}

WalkKernel build_kernel(const Field& h, double beta)
{
    return WalkKernel(from_field(h, beta), h.domain());
}

double kernel_form_error(const WalkKernel& k, const Field& h, double beta)
{
    const auto& d = h.domain();
    require(d.size() == k.size(), ErrorKind::InvalidSize, "field and kernel sizes differ");
    double worst = 0.0;
    for (std::size_t x = 0; x < d.size(); ++x) {
        const double hx = h[static_cast<Eigen::Index>(x)];
        double Z = 0.0;
        for (int y : d.neighbors(x))
            if (y >= 0) Z += std::exp(beta * (h[y] - hx));
        for (int y : d.neighbors(x))
            if (y >= 0) worst = std::max(worst, std::abs(std::exp(beta * (h[y] - hx)) / Z - k.transition(static_cast<int>(x), y)));
    }
    return worst;
}

// ------------------------------------------------------------ exit times

double ExitTime::relative_residual() const
{
    return std::abs(solve - identity) / std::abs(identity);
}

namespace {

std::vector<int> slots_of(const WalkKernel& k, const std::vector<int>& A, int x)
{
    std::vector<int> slot(k.size(), -1);
    int m = 0;
    for (int a : A) {
        require(a >= 0 && static_cast<std::size_t>(a) < k.size(), ErrorKind::InvalidArgument, "vertex out of range");
        if (slot[static_cast<std::size_t>(a)] < 0) slot[static_cast<std::size_t>(a)] = m++;
    }
    require(static_cast<std::size_t>(m) < k.size(), ErrorKind::InvalidArgument, "region must not be the whole state space");
    require(x >= 0 && static_cast<std::size_t>(x) < k.size() && slot[static_cast<std::size_t>(x)] >= 0,
            ErrorKind::InvalidArgument, "start must lie in the region");
    return slot;
}

// (I − P_A) t = 1 through a general LU factorization.
double exit_time_lu(const WalkKernel& k, int x, const std::vector<int>& A)
{
    auto slot = slots_of(k, A, x);
    int m = 0;
    for (int s : slot) m = std::max(m, s + 1);
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t v = 0; v < k.size(); ++v) {
        int i = slot[v];
        if (i < 0) continue;
        trip.emplace_back(i, i, 1.0);
        for (std::size_t j = k.row_begin(static_cast<int>(v)); j < k.row_end(static_cast<int>(v)); ++j) {
            int t = slot[static_cast<std::size_t>(k.target(j))];
            if (t >= 0) trip.emplace_back(i, t, -k.prob(j));
        }
    }
    Eigen::SparseMatrix<double> M(m, m);
    M.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    require(lu.info() == Eigen::Success, ErrorKind::Solver, "exit-time factorization failed");
    Eigen::VectorXd t = lu.solve(Eigen::VectorXd::Ones(m));
    return t[slot[static_cast<std::size_t>(x)]];
}

} // namespace

double expected_exit_time_solve(const WalkKernel& k, int x, const std::vector<int>& A)
{
    auto slot = slots_of(k, A, x);
    int m = 0;
    for (int s : slot) m = std::max(m, s + 1);
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs(m);
    const auto& net = k.network();
    for (std::size_t v = 0; v < k.size(); ++v)
        if (slot[v] >= 0) {
            trip.emplace_back(slot[v], slot[v], k.pi()[v]);
            rhs[slot[v]] = k.pi()[v];
        }
    for (const auto& e : net.edges()) {
        int a = slot[static_cast<std::size_t>(e.u)], b = slot[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0) {
            trip.emplace_back(a, b, -e.c);
            trip.emplace_back(b, a, -e.c);
        }
    }
    Eigen::SparseMatrix<double> L(m, m);
    L.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
    require(ldlt.info() == Eigen::Success, ErrorKind::Solver, "exit-time factorization failed");
    Eigen::VectorXd t = ldlt.solve(rhs);
    t += ldlt.solve(rhs - L * t);
    return t[slot[static_cast<std::size_t>(x)]];
}

ExitTime expected_exit_time(const WalkKernel& k, int x, const std::vector<int>& A)
{
    auto slot = slots_of(k, A, x);
    std::vector<int> out;
    for (std::size_t v = 0; v < k.size(); ++v)
        if (slot[v] < 0) out.push_back(static_cast<int>(v));
    ExitTime r;
    r.solve = exit_time_lu(k, x, A);
    Resistance res = effective_resistance(k.network(), std::vector<int>{x}, out);
    double mass = 0.0, piA = 0.0;
    for (int a : A) {
        mass += k.pi()[static_cast<std::size_t>(a)] * res.solution.f[static_cast<std::size_t>(a)];
        piA += k.pi()[static_cast<std::size_t>(a)];
    }
    r.identity = res.R * mass;
    r.bound = res.R * piA;
    return r;
}

CommuteTime commute_time(const WalkKernel& k, int u, int v)
{
    require(u != v, ErrorKind::InvalidArgument, "commute time needs distinct vertices");
    auto all_but = [&](int z) {
        std::vector<int> A;
        for (std::size_t i = 0; i < k.size(); ++i)
            if (static_cast<int>(i) != z) A.push_back(static_cast<int>(i));
        return A;
    };
    CommuteTime c;
    c.lhs = exit_time_lu(k, u, all_but(v)) + exit_time_lu(k, v, all_but(u));
    double piV = 0.0;
    for (double p : k.pi()) piV += p;
    c.rhs = effective_resistance(k.network(), u, v).R * piV;
    return c;
}

// ------------------------------------------------------------ heat kernel

std::vector<double> return_probabilities(const WalkKernel& k, int x, int T)
{
    require(T >= 0, ErrorKind::InvalidArgument, "T must be >= 0");
    require(x >= 0 && static_cast<std::size_t>(x) < k.size(), ErrorKind::InvalidArgument, "vertex out of range");
    std::vector<double> p(k.size(), 0.0), q(k.size());
    p[static_cast<std::size_t>(x)] = 1.0;
    std::vector<double> out{1.0};
    for (int t = 1; t <= T; ++t) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t v = 0; v < k.size(); ++v) {
            if (p[v] == 0.0) continue;
            for (std::size_t j = k.row_begin(static_cast<int>(v)); j < k.row_end(static_cast<int>(v)); ++j)
                q[static_cast<std::size_t>(k.target(j))] += p[v] * k.prob(j);
        }
        p.swap(q);
        out.push_back(p[static_cast<std::size_t>(x)]);
    }
    return out;
}

double heat_kernel(const WalkKernel& k, int x, int T)
{
    return return_probabilities(k, x, T).back();
}

EstimatorSummary heat_kernel_mc(const WalkKernel& k, int x, int T, int walks, Rng& rng)
{
    require(walks >= 2, ErrorKind::InvalidArgument, "need >= 2 walks");
    std::vector<double> hit(static_cast<std::size_t>(walks));
    for (auto& h : hit) {
        int y = x;
        for (int t = 0; t < T; ++t) y = k.step(y, rng);
        h = y == x ? 1.0 : 0.0;
    }
    return estimate(hit);
}

double beta_tilde_c()
{
    return std::sqrt(std::numbers::pi / 2.0);
}

double theta_exponent(double beta)
{
    require(beta >= 0.0, ErrorKind::InvalidArgument, "beta must be >= 0");
    const double r = beta / beta_tilde_c();
    return r <= 1.0 ? 2.0 + 2.0 * r * r : 4.0 * r;
}

WalkSummary walk_simulate(const WalkKernel& k, int x, int steps, Rng& rng, const std::vector<char>* absorbing)
{
    require(x >= 0 && static_cast<std::size_t>(x) < k.size(), ErrorKind::InvalidArgument, "vertex out of range");
    WalkSummary s;
    int y = x;
    for (int t = 1; t <= steps; ++t) {
        y = k.step(y, rng);
        s.steps = t;
        if (y == x) ++s.returns;
        if (absorbing && (*absorbing)[static_cast<std::size_t>(y)]) {
            s.exit_time = t;
            break;
        }
    }
    s.end = y;
    if (k.domain()) s.displacement = k.domain()->vertex(static_cast<std::size_t>(y)) - k.domain()->vertex(static_cast<std::size_t>(x));
    return s;
}

// ----------------------------------------------------------- experiments

ExitExponent exit_time_exponent(double beta, const std::vector<int>& Ns, int environments,
                                const SeedStream& seeds, int threads)
{
    require(!Ns.empty() && environments >= 1, ErrorKind::InvalidArgument, "need sizes and environments");
    const int Nmax = *std::max_element(Ns.begin(), Ns.end());
    const LatticeDomain big = make_centered_box(4 * Nmax);
    const PinnedSampler pinned(big);
    const auto tag = stream_tag("rwre-exit");
    std::vector<std::vector<double>> logs(Ns.size(), std::vector<double>(static_cast<std::size_t>(environments)));
    parallel_for(static_cast<std::size_t>(environments), threads, [&](std::size_t r) {
        Rng rng = seeds.stream(r, tag);
        Field h = pinned.sample(rng);
        for (std::size_t i = 0; i < Ns.size(); ++i) {
            const int N = Ns[i];
            // The walk inside B(N) only sees edges within B(N+1).
            LatticeDomain sub = make_centered_box(N + 1);
            Eigen::VectorXd v(static_cast<Eigen::Index>(sub.size()));
            for (std::size_t j = 0; j < sub.size(); ++j) v[static_cast<Eigen::Index>(j)] = h.at(sub.vertex(j));
            WalkKernel k = build_kernel(Field(sub, v), beta);
            std::vector<int> A;
            for (std::size_t j = 0; j < sub.size(); ++j)
                if (linf_norm(sub.vertex(j)) <= N) A.push_back(static_cast<int>(j));
            logs[i][r] = std::log(expected_exit_time_solve(k, sub.index({0, 0}), A));
        }
    });
    ExitExponent out;
    out.N = Ns;
    std::vector<double> lx;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        auto s = estimate(logs[i]);
        out.mean_log_time.push_back(s.mean);
        out.se.push_back(s.se.value_or(0.0));
        lx.push_back(std::log(static_cast<double>(Ns[i])));
    }
    out.fit = linear_fit(lx, out.mean_log_time);
    out.theta = out.fit.slope;
    return out;
}

HeatKernelSlope srw_heat_kernel_slope(int K, const std::vector<int>& T)
{
    require(!T.empty(), ErrorKind::InvalidArgument, "need times");
    LatticeDomain d = make_centered_box(K);
    WalkKernel k = build_kernel(Field(d), 0.0);
    const int Tmax = *std::max_element(T.begin(), T.end());
    auto p = return_probabilities(k, d.index({0, 0}), 2 * Tmax);
    HeatKernelSlope s;
    s.T = T;
    std::vector<double> lx, ly;
    for (int t : T) {
        s.p.push_back(p[static_cast<std::size_t>(2 * t)]);
        lx.push_back(std::log(static_cast<double>(t)));
        ly.push_back(std::log(s.p.back()));
    }
    s.fit = linear_fit(lx, ly);
    return s;
}

} // namespace dgff
