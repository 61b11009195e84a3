#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "dgff/error.hpp"
#include "dgff/rwre.hpp"
#include "dgff/sampler.hpp"

using namespace dgff;

namespace {

Network unit_path(int L)
{
    std::vector<Edge> e;
    for (int i = 0; i < L; ++i) e.push_back({i, i + 1, 1.0});
    return Network(std::size_t(L) + 1, e);
}

Eigen::MatrixXd dense_kernel(const WalkKernel& k)
{
    const auto n = static_cast<Eigen::Index>(k.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x)
        for (std::size_t j = k.row_begin(x); j < k.row_end(x); ++j) P(x, k.target(j)) += k.prob(j);
    return P;
}

double binom_return(int T)
{
    // P(X_2T = 0) for the planar walk: (C(2T,T)/4^T)²
    double lp = std::lgamma(2.0 * T + 1) - 2.0 * std::lgamma(T + 1.0) - T * std::log(4.0);
    return std::exp(2.0 * lp);
}

} // namespace

TEST_CASE("conductance kernel is reversible")
{
    Rng rng(1);
    Field h = FieldSampler(make_box(9)).sample(rng);
    for (double beta : {0.0, 0.4, 1.3}) {
        WalkKernel k = build_kernel(h, beta);
        CHECK(k.row_sum_error() < 1e-14);
        CHECK(k.detailed_balance_error() < 1e-14);
        CHECK(kernel_form_error(k, h, beta) < 1e-14);
    }
    WalkKernel flat = build_kernel(Field(make_box(5)), 0.0);
    CHECK(flat.transition(flat.domain()->index({2, 2}), flat.domain()->index({3, 2})) == doctest::Approx(0.25));
    CHECK(flat.transition(0, 1) == doctest::Approx(0.5));  // corner of the box
}

TEST_CASE("alias sampling follows the rows")
{
    Network net(3, {{0, 1, 1.0}, {0, 2, 3.0}});
    WalkKernel k(net);
    Rng rng(2);
    int hits = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) hits += k.step(0, rng) == 2;
    CHECK(std::abs(double(hits) / n - 0.75) < 4.0 * std::sqrt(0.75 * 0.25 / n));
    CHECK(k.step(1, rng) == 0);
}

TEST_CASE("exit times on a path")
{
    const int L = 12;
    WalkKernel k(unit_path(L));
    std::vector<int> A;
    for (int i = 1; i < L; ++i) A.push_back(i);
    for (int x : {1, 4, 6}) {
        ExitTime t = expected_exit_time(k, x, A);
        CHECK(t.solve == doctest::Approx(double(x * (L - x))));
        CHECK(t.relative_residual() < 1e-12);
        CHECK(t.solve <= t.bound + 1e-9);
        CHECK(expected_exit_time_solve(k, x, A) == doctest::Approx(t.solve));
    }
    CommuteTime c = commute_time(k, 0, L);
    CHECK(c.lhs == doctest::Approx(2.0 * L * L));
    CHECK(c.relative_residual() < 1e-12);
    CHECK_THROWS_AS(expected_exit_time(k, 0, A), Error);
}

TEST_CASE("exit-time identity in a random environment")
{
    Rng rng(3);
    Field h = FieldSampler(make_box(8)).sample(rng);
    WalkKernel k = build_kernel(h, 0.9);
    std::vector<int> A;
    for (int i = 0; i < int(k.size()); ++i)
        if (i != 0 && i != 48) A.push_back(i);
    ExitTime t = expected_exit_time(k, 24, A);
    CHECK(t.relative_residual() < 1e-10);
    CHECK(commute_time(k, 3, 40).relative_residual() < 1e-10);
    // Monte Carlo against the solve
    std::vector<char> absorbing(k.size(), 0);
    absorbing[0] = absorbing[48] = 1;
    double sum = 0.0, sq = 0.0;
    const int walks = 4000;
    for (int i = 0; i < walks; ++i) {
        auto w = walk_simulate(k, 24, 1 << 28, rng, &absorbing);
        REQUIRE(w.exit_time);
        sum += *w.exit_time;
        sq += double(*w.exit_time) * *w.exit_time;
    }
    double mean = sum / walks, se = std::sqrt((sq / walks - mean * mean) / walks);
    CHECK(std::abs(mean - t.solve) < 4.0 * se);
}

TEST_CASE("return probabilities match dense matrix powers")
{
    Rng rng(4);
    Field h = FieldSampler(make_box(6)).sample(rng);
    WalkKernel k = build_kernel(h, 0.5);
    Eigen::MatrixXd P = dense_kernel(k), Pt = Eigen::MatrixXd::Identity(P.rows(), P.cols());
    auto p = return_probabilities(k, 7, 30);
    REQUIRE(p.size() == 31);
    for (int t = 0; t <= 30; ++t) {
        CHECK(p[std::size_t(t)] == doctest::Approx(Pt(7, 7)).epsilon(1e-12));
        Pt = Pt * P;
    }
    CHECK(heat_kernel(k, 7, 30) == doctest::Approx(p[30]));
    auto mc = heat_kernel_mc(k, 7, 4, 20000, rng);
    CHECK(std::abs(mc.mean - p[4]) < 4.0 * *mc.se + 1e-12);
}

TEST_CASE("planar return probabilities before the walls are felt")
{
    auto s = srw_heat_kernel_slope(40, {2, 5, 10, 20});
    for (std::size_t i = 0; i < s.T.size(); ++i) CHECK(s.p[i] == doctest::Approx(binom_return(s.T[i])).epsilon(1e-12));
    CHECK(std::abs(s.fit.slope + 1.0) < 0.1);
}

TEST_CASE("exponent formula")
{
    CHECK(beta_tilde_c() == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)));
    CHECK(theta_exponent(0.0) == doctest::Approx(2.0));
    CHECK(theta_exponent(0.5 * beta_tilde_c()) == doctest::Approx(2.5));
    CHECK(theta_exponent(beta_tilde_c()) == doctest::Approx(4.0));
    CHECK(theta_exponent(2.0 * beta_tilde_c()) == doctest::Approx(8.0));
}

TEST_CASE("walk summaries")
{
    WalkKernel k = build_kernel(Field(make_centered_box(4)), 0.0);
    Rng rng(6);
    int origin = k.domain()->index({0, 0});
    auto w = walk_simulate(k, origin, 100, rng);
    CHECK(w.steps == 100);
    CHECK_FALSE(w.exit_time);
    CHECK(linf_norm(w.displacement) <= 4);
    CHECK(k.domain()->vertex(std::size_t(w.end)) == w.displacement);
}

TEST_CASE("exit exponent experiment is reproducible")
{
    SeedStream seeds(10);
    auto a = exit_time_exponent(0.3, {4, 8}, 3, seeds, 1);
    auto b = exit_time_exponent(0.3, {4, 8}, 3, seeds, 2);
    CHECK(a.mean_log_time == b.mean_log_time);
    CHECK(a.mean_log_time[1] > a.mean_log_time[0]);
}

TEST_CASE("constant fields give the simple random walk")
{
    LatticeDomain d = make_box(6);
    WalkKernel srw = build_kernel(Field(d), 0.0);
    for (double c : {-2.0, 0.5, 3.0}) {
        WalkKernel k = build_kernel(Field(d, Eigen::VectorXd::Constant(25, c)), 1.1);
        CHECK((dense_kernel(k) - dense_kernel(srw)).cwiseAbs().maxCoeff() <= 1e-14);
    }
    // π is the in-domain degree: 4 away from the boundary
    for (std::size_t i = 0; i < d.size(); ++i) {
        int deg = 0;
        for (int j : d.neighbors(i)) deg += j >= 0;
        CHECK(srw.pi()[i] == double(deg));
    }
}

TEST_CASE("detailed balance on random 8x8 fields")
{
    Rng rng(91);
    FieldSampler s(make_box(9));
    for (int k = 0; k < 5; ++k) CHECK(build_kernel(s.sample(rng), 1.0).detailed_balance_error() <= 1e-12);
}

TEST_CASE("exit and commute examples")
{
    WalkKernel two(Network(2, {{0, 1, 2.5}}));
    ExitTime t = expected_exit_time(two, 0, {0});
    CHECK(t.solve == doctest::Approx(1.0));
    CHECK(t.identity == doctest::Approx(1.0));
    CHECK(commute_time(two, 0, 1).lhs == doctest::Approx(2.0));
    CHECK(commute_time(two, 0, 1).rhs == doctest::Approx(2.0));
    // path 0-1-2: E⁰τ₂ = 4, E²τ₀ = 4, R·π(V) = 2·4
    WalkKernel path(unit_path(2));
    CommuteTime c = commute_time(path, 0, 2);
    CHECK(c.lhs == doctest::Approx(8.0));
    CHECK(c.rhs == doctest::Approx(8.0));
    // simple random walk on the 5×5 box against (I − P_A)⁻¹ 1
    LatticeDomain d = make_box(6);
    WalkKernel k = build_kernel(Field(d), 0.0);
    std::vector<int> A;
    for (int i = 0; i < 25; ++i)
        if (i != 0 && i != 24) A.push_back(i);
    Eigen::MatrixXd P = dense_kernel(k), PA(A.size(), A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j) PA(Eigen::Index(i), Eigen::Index(j)) = P(A[i], A[j]);
    Eigen::VectorXd tt = (Eigen::MatrixXd::Identity(PA.rows(), PA.cols()) - PA)
                             .partialPivLu()
                             .solve(Eigen::VectorXd::Ones(PA.rows()));
    const int centre = d.index({3, 3});
    const auto pos = std::find(A.begin(), A.end(), centre) - A.begin();
    ExitTime e = expected_exit_time(k, centre, A);
    CHECK(e.solve == doctest::Approx(tt[pos]).epsilon(1e-12));
    CHECK(e.bound - e.solve >= 0.0);
}

TEST_CASE("commute identity on random 6x6 fields")
{
    Rng rng(92);
    FieldSampler s(make_box(7));
    for (int k = 0; k < 20; ++k) {
        WalkKernel w = build_kernel(s.sample(rng), 0.8);
        CHECK(commute_time(w, 0, 35).relative_residual() <= 1e-8);
    }
}

TEST_CASE("even return probabilities do not increase")
{
    Rng rng(93);
    WalkKernel k = build_kernel(FieldSampler(make_box(10)).sample(rng), 0.7);
    auto p = return_probabilities(k, 40, 60);
    CHECK(p[0] == 1.0);
    for (std::size_t t = 2; t + 2 <= p.size(); t += 2) CHECK(p[t + 2] <= p[t] + 1e-15);
}

TEST_CASE("simple random walk diffuses at unit rate")
{
    WalkKernel k = build_kernel(Field(make_centered_box(60)), 0.0);
    Rng rng(94);
    const int origin = k.domain()->index({0, 0}), steps = 200, walks = 10000;
    double msd = 0.0;
    for (int w = 0; w < walks; ++w) {
        Vertex z = walk_simulate(k, origin, steps, rng).displacement;
        msd += double(z.x) * z.x + double(z.y) * z.y;
    }
    CHECK(std::abs(msd / walks / steps - 1.0) <= 0.1);
}

TEST_CASE("one-step frequencies follow the kernel")
{
    Rng rng(95);
    WalkKernel k = build_kernel(FieldSampler(make_box(5)).sample(rng), 1.0);
    const int x = 5, n = 50000;
    std::map<int, int> hits;
    for (int i = 0; i < n; ++i) ++hits[k.step(x, rng)];
    for (std::size_t j = k.row_begin(x); j < k.row_end(x); ++j) {
        double p = k.prob(j), f = double(hits[k.target(j)]) / n;
        CHECK(std::abs(f - p) <= 3.5 * std::sqrt(p * (1.0 - p) / n));
    }
}
