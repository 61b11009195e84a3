#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dgff/error.hpp"
#include "dgff/green.hpp"
#include "dgff/sampler.hpp"
#include "oracles.hpp"

using namespace dgff;

namespace {

// Fraction of entries of the empirical second moment within k CLT standard errors.
template <class Draw>
double covariance_agreement(const Eigen::MatrixXd& G, int reps, Draw draw, double k = 3.5)
{
    const Eigen::Index n = G.rows();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < reps; ++r) {
        Eigen::VectorXd h = draw();
        S.noalias() += h * h.transpose();
    }
    S /= reps;
    int inside = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(S(i, j) - G(i, j)) <= k * std::sqrt((G(i, i) * G(j, j) + G(i, j) * G(i, j)) / reps))
                ++inside;
    return double(inside) / double(n * n);
}

} // namespace

TEST_CASE("field basics")
{
    LatticeDomain d = make_box(4);
    Field a(d);
    CHECK(a.size() == 9);
    a[4] = 2.5;
    CHECK(a.at({2, 2}) == 2.5);
    CHECK(a.at({0, 0}) == 0.0);
    Field b = a + a;
    CHECK(b[4] == 5.0);
    CHECK_THROWS_AS(Field(d, Eigen::VectorXd::Zero(3)), Error);
}

TEST_CASE("dense sampler covariance")
{
    GreenOperator g = green_matrix(make_box(5));
    Rng rng(7);
    CHECK(covariance_agreement(g.matrix(), 20000, [&] { return sample_dense(g, rng).values(); }) > 0.97);
}

TEST_CASE("spectral and sparse samplers reproduce G")
{
    Rng rng(11);
    for (const char* spec : {"box:6", "disc:4"}) {
        LatticeDomain d = parse_domain_spec(spec);
        FieldSampler s(d);
        Eigen::MatrixXd G = oracle::green(d);
        CHECK(covariance_agreement(G, 20000, [&] { return s.sample(rng).values(); }) > 0.97);
        Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(G.rows(), 1.0, -1.0);
        CHECK((s.apply_green(f) - G * f).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("samplers are deterministic given the stream")
{
    FieldSampler s(make_box(16));
    Rng a = SeedStream(5).stream(3), b = SeedStream(5).stream(3), c = SeedStream(5).stream(4);
    Eigen::VectorXd x = s.sample(a).values();
    CHECK(x == s.sample(b).values());
    CHECK(x != s.sample(c).values());
}

TEST_CASE("harmonic extension")
{
    LatticeDomain V = make_box(9);
    LatticeDomain U = V.restricted([](const Vertex& v) { return v.x != 4; });
    Eigen::VectorXd data = Eigen::VectorXd::Zero(Eigen::Index(V.size()));
    for (std::size_t i = 0; i < V.size(); ++i)
        if (V.vertex(i).x == 4) data[Eigen::Index(i)] = std::sin(V.vertex(i).y);
    Eigen::VectorXd u = harmonic_extension(V, U, data);
    Eigen::VectorXd lap = apply_laplacian(V, u);
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (U.contains(V.vertex(i))) CHECK(std::abs(lap[Eigen::Index(i)]) < 1e-12);
        else CHECK(u[Eigen::Index(i)] == data[Eigen::Index(i)]);
    }
}

TEST_CASE("gibbs-markov binding covariance")
{
    LatticeDomain V = make_box(8);
    LatticeDomain U = V.without({{3, 3}, {5, 2}});
    Eigen::MatrixXd C = binding_covariance(V, U);
    Eigen::MatrixXd GV = oracle::green(V), GU = oracle::green(U);
    Eigen::MatrixXd expect = GV;
    for (std::size_t i = 0; i < U.size(); ++i)
        for (std::size_t j = 0; j < U.size(); ++j)
            expect(V.index(U.vertex(i)), V.index(U.vertex(j))) -= GU(Eigen::Index(i), Eigen::Index(j));
    CHECK((C - expect).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    CHECK((es.eigenvalues().array() > 1e-10).count() == 2);
}

TEST_CASE("gibbs-markov split sums to the outer field law")
{
    LatticeDomain V = make_box(6);
    LatticeDomain U = V.restricted([](const Vertex& v) { return v.x != 3 && v.y != 3; });
    Eigen::MatrixXd G = oracle::green(V);
    for (auto method : {BindingMethod::ExactCovariance, BindingMethod::HarmonicExtension}) {
        GibbsMarkovSplitter split(V, U, method);
        Rng rng(23);
        CHECK(covariance_agreement(G, 20000, [&] { return split.sample(rng).combined().values(); }) > 0.97);
        auto s = split.sample(rng);
        CHECK(harmonicity_residual(s.binding) < 1e-10);
    }
}

TEST_CASE("hierarchical levels telescope to the green diagonal")
{
    HierarchicalSampler h(5);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(Eigen::Index(h.domain().size()));
    for (int k = 0; k < h.depth(); ++k) {
        Eigen::VectorXd v = h.level_variance(k);
        CHECK(v.minCoeff() >= -1e-12);
        total += v;
    }
    CHECK((total - oracle::green(h.domain()).diagonal()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("hierarchical sampler law")
{
    HierarchicalSampler h(3);
    Eigen::MatrixXd G = oracle::green(h.domain());
    Rng rng(3);
    CHECK(covariance_agreement(G, 20000, [&] { return h.sample(rng).values(); }) > 0.97);
    auto levels = h.sample_levels(rng);
    CHECK(levels.size() == 3);
    CHECK_THROWS_AS(HierarchicalSampler(0), Error);
}

TEST_CASE("concentric decomposition geometry")
{
    ConcentricDecomposition cd(make_centered_box(70));
    REQUIRE(cd.depth() == 5);
    CHECK(cd.ball(2).size() == 49);
    CHECK(cd.annulus(0).empty());
    for (int k = 1; k <= cd.depth(); ++k)
        for (const auto& v : cd.annulus(k).vertices()) {
            CHECK_FALSE(cd.ball(k - 1).contains(v));
            for (const auto& e : kNeighborOffsets) CHECK_FALSE(cd.ball(k - 1).contains(v + e));
        }
}

TEST_CASE("concentric variances at the origin")
{
    ConcentricDecomposition cd(make_centered_box(70));
    // G^{Δ^k}(0,0) by dense inverse on the small balls
    double prev = 0.0;
    for (int k = 0; k <= 4; ++k) {
        LatticeDomain ball = make_centered_box((1 << k) - 1);
        double g = oracle::green(ball)(ball.index({0, 0}), ball.index({0, 0}));
        CHECK(cd.phi0_variance(k) == doctest::Approx(g - prev).epsilon(1e-10));
        prev = g;
    }
    // frozen from the dense computation above
    CHECK(cd.phi0_variance(0) == doctest::Approx(1.0));
    CHECK(cd.phi0_variance(1) == doctest::Approx(0.5));
    CHECK(cd.phi0_variance(2) == doctest::Approx(0.455882).epsilon(1e-6));
    CHECK(cd.phi0_variance(3) == doctest::Approx(0.444491).epsilon(1e-6));
    CHECK(cd.phi0_variance(4) == doctest::Approx(0.442056).epsilon(1e-6));
    CHECK(cd.phi0_variance(5) == doctest::Approx(0.948869).epsilon(1e-6));
    double sum = 0.0;
    for (int k = 0; k <= cd.depth(); ++k) sum += cd.phi0_variance(k);
    CHECK(sum == doctest::Approx(green_entry(cd.outer(), {0, 0}, {0, 0})).epsilon(1e-12));
}

TEST_CASE("concentric covariance columns")
{
    ConcentricDecomposition cd(make_centered_box(20));
    for (Vertex y : {Vertex{0, 0}, Vertex{2, -1}, Vertex{9, 9}, Vertex{-20, 5}})
        CHECK((cd.covariance_column(y) - green_column(cd.outer(), y)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("concentric sample structure")
{
    ConcentricDecomposition cd(make_centered_box(20));
    Rng rng(4);
    auto s = cd.sample(rng);
    CHECK(s.phi0.size() == std::size_t(cd.depth() + 1));
    CHECK(s.partial.size() == std::size_t(cd.depth() + 2));
    CHECK(s.partial.front() == 0.0);
    CHECK(s.partial.back() == doctest::Approx(s.field.at({0, 0})));
    // variance of h(0)
    double sum = 0.0, sq = 0.0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) {
        double v = cd.sample(rng).field.at({0, 0});
        sum += v;
        sq += v * v;
    }
    double var = sq / reps - (sum / reps) * (sum / reps);
    double g00 = green_entry(cd.outer(), {0, 0}, {0, 0});
    CHECK(std::abs(var - g00) < 4.0 * g00 * std::sqrt(2.0 / reps));
}

TEST_CASE("pinned field covariance and the potential kernel")
{
    LatticeDomain d = make_centered_box(128);
    PinnedSampler p(d);
    const double g00 = green_entry(d, {0, 0}, {0, 0});
    Vertex y{5, -3};
    Eigen::VectorXd col = p.covariance_column(y);
    Eigen::VectorXd gy = green_column(d, y), g0 = green_column(d, {0, 0});
    double worst = 0.0;
    for (Vertex x : {Vertex{1, 0}, Vertex{5, -3}, Vertex{10, 12}, Vertex{-20, 7}}) {
        int i = d.index(x);
        CHECK(col[i] == doctest::Approx(gy[i] - g0[i] * g0[d.index(y)] / g00).epsilon(1e-10));
    }
    // all pairs on a grid of |x|, |y| ≤ N/8 = 32
    std::vector<Vertex> pts;
    for (int a = -32; a <= 32; a += 8)
        for (int b = -32; b <= 32; b += 8)
            if ((a || b) && a * a + b * b <= 32 * 32) pts.push_back({a, b});
    for (Vertex yy : pts) {
        Eigen::VectorXd c = p.covariance_column(yy);
        for (Vertex x : pts) {
            double lhs = c[d.index(x)] + potential_kernel(x) * potential_kernel(yy) / g00;
            double rhs = potential_kernel(x) + potential_kernel(yy) - potential_kernel(x - yy);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    CHECK(worst < 0.05);
    Rng rng(8);
    CHECK(p.sample(rng).at({0, 0}) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("single vertex marginal and sample means")
{
    FieldSampler one(make_box(2));
    Rng rng(31);
    double sq = 0.0;
    const int n1 = 20000;
    for (int r = 0; r < n1; ++r) sq += std::pow(one.sample(rng)[0], 2);
    CHECK(std::abs(sq / n1 - 1.0) < 4.0 * std::sqrt(2.0 / n1));
    LatticeDomain d = make_box(8);
    FieldSampler s(d);
    Eigen::MatrixXd G = oracle::green(d);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(G.rows());
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) sum += s.sample(rng).values();
    sum /= reps;
    for (Eigen::Index i = 0; i < G.rows(); ++i) CHECK(std::abs(sum[i]) <= 4.0 * std::sqrt(G(i, i) / reps));
}

TEST_CASE("removing one vertex leaves a rank-one binding covariance")
{
    LatticeDomain V = make_box(9);
    const Vertex x0{3, 6};
    Eigen::MatrixXd C = binding_covariance(V, V.without({x0}));
    Eigen::MatrixXd G = oracle::green(V);
    const Eigen::Index k = V.index(x0);
    Eigen::MatrixXd expect = G.col(k) * G.col(k).transpose() / G(k, k);
    CHECK((C - expect).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("binding field is independent of the inner field")
{
    LatticeDomain V = make_box(6);
    LatticeDomain U = V.restricted([](const Vertex& v) { return v.x != 3 && v.y != 3; });
    GibbsMarkovSplitter split(V, U);
    Rng rng(37);
    const int reps = 20000;
    const Eigen::Index n = Eigen::Index(V.size());
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd va = Eigen::VectorXd::Zero(n), vb = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < reps; ++r) {
        auto s = split.sample(rng);
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < U.size(); ++i) a[V.index(U.vertex(i))] = s.inner[Eigen::Index(i)];
        const Eigen::VectorXd& b = s.binding.field.values();
        cross.noalias() += a * b.transpose();
        va += a.cwiseAbs2();
        vb += b.cwiseAbs2();
    }
    cross /= reps;
    va /= reps;
    vb /= reps;
    int inside = 0, total = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (va[i] == 0.0 || vb[j] == 0.0) continue;
            ++total;
            inside += std::abs(cross(i, j)) <= 3.0 * std::sqrt(va[i] * vb[j] / reps);
        }
    CHECK(total > 0);
    CHECK(double(inside) / total >= 0.98);
}

TEST_CASE("hierarchical sampler small cases")
{
    HierarchicalSampler one(1);
    CHECK(one.domain() == make_box(2));
    CHECK(one.level_variance(0)[0] == doctest::Approx(1.0));
    HierarchicalSampler h(4);
    const Vertex c{8, 8};
    const Eigen::Index ci = h.domain().index(c);
    const double g = oracle::green(h.domain())(ci, ci);
    Rng rng(41);
    double sq = 0.0;
    const int reps = 50000;
    for (int r = 0; r < reps; ++r) sq += std::pow(h.sample(rng)[ci], 2);
    CHECK(std::abs(sq / reps - g) <= 3.0 * g * std::sqrt(2.0 / reps));
}

TEST_CASE("concentric b vanishes at the origin")
{
    ConcentricDecomposition cd(make_centered_box(40));
    const Eigen::Index o = cd.outer().index({0, 0});
    for (int k = 0; k <= cd.depth(); ++k) CHECK(cd.b(k)[o] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("pinned covariance is the green function of the punctured domain")
{
    LatticeDomain d = make_centered_box(6);
    PinnedSampler p(d);
    LatticeDomain punctured = d.without({{0, 0}});
    Eigen::MatrixXd Gp = oracle::green(punctured);
    for (Vertex y : {Vertex{1, 0}, Vertex{-3, 4}, Vertex{6, 6}}) {
        Eigen::VectorXd col = p.covariance_column(y);
        for (std::size_t i = 0; i < punctured.size(); ++i)
            CHECK(col[d.index(punctured.vertex(i))] ==
                  doctest::Approx(Gp(Eigen::Index(i), punctured.index(y))).epsilon(1e-10));
    }
    Rng rng(43);
    const Eigen::Index k = d.index({2, -1}), kp = punctured.index({2, -1});
    double sq = 0.0;
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) sq += std::pow(p.sample(rng)[k], 2);
    CHECK(std::abs(sq / reps - Gp(kp, kp)) <= 4.0 * Gp(kp, kp) * std::sqrt(2.0 / reps));
}
