#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dgff/error.hpp"
#include "dgff/network.hpp"
#include "dgff/rwre.hpp"
#include "dgff/sampler.hpp"

using namespace dgff;

namespace {

// (e_u − e_v)ᵀ L⁺ (e_u − e_v) from the dense pseudo-inverse.
double resistance_oracle(const Network& net, int u, int v)
{
    const auto n = static_cast<Eigen::Index>(net.size());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : net.edges()) {
        L(e.u, e.u) += e.c;
        L(e.v, e.v) += e.c;
        L(e.u, e.v) -= e.c;
        L(e.v, e.u) -= e.c;
    }
    Eigen::MatrixXd P = L.completeOrthogonalDecomposition().pseudoInverse();
    return P(u, u) + P(v, v) - 2.0 * P(u, v);
}

Network field_network(int N, double beta, std::uint64_t seed)
{
    Rng rng(seed);
    return from_field(FieldSampler(make_box(N)).sample(rng), beta);
}

// Wheatstone bridge 0-1, 0-2, 1-2, 1-3, 2-3.
Network bridge(double c12)
{
    return Network(4, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, c12}, {1, 3, 1.0}, {2, 3, 1.0}});
}

} // namespace

TEST_CASE("series, parallel and the balanced bridge")
{
    Network path(3, {{0, 1, 2.0}, {1, 2, 0.5}});
    CHECK(effective_resistance(path, 0, 2).R == doctest::Approx(2.5));
    Network par(2, {{0, 1, 2.0}, {0, 1, 3.0}});
    CHECK(effective_resistance(par, 0, 1).R == doctest::Approx(0.2));
    CHECK(effective_resistance(bridge(7.0), 0, 3).R == doctest::Approx(1.0));
    CHECK(effective_resistance(bridge(7.0), 0, 3).C == doctest::Approx(1.0));
}

TEST_CASE("resistance matches the Laplacian pseudo-inverse")
{
    Network net = field_network(7, 0.8, 1);
    for (auto [u, v] : {std::pair{0, 35}, std::pair{3, 17}, std::pair{20, 21}}) {
        Resistance r = effective_resistance(net, u, v);
        CHECK(r.R == doctest::Approx(resistance_oracle(net, u, v)).epsilon(1e-10));
        CHECK(r.R * r.C == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.solution.node_residual < 1e-10);
    }
}

TEST_CASE("set-to-set resistance equals shorting the sets")
{
    Network net = field_network(6, 0.5, 2);
    std::vector<int> A{0, 1, 5}, B{23, 24};
    Network s1 = short_vertices(net, A);
    Network s = short_vertices(s1, {s1.index_of(net.label(23)), s1.index_of(net.label(24))});
    int a = s.index_of(net.label(0)), b = s.index_of(net.label(23));
    CHECK(effective_resistance(net, A, B).R == doctest::Approx(effective_resistance(s, a, b).R).epsilon(1e-10));
    CHECK_THROWS_AS(effective_resistance(net, {0}, {0, 1}), Error);
}

TEST_CASE("thomson and dirichlet duality")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Network net = field_network(9, 1.0, seed);
        DualityCheck d = duality_check(net, 0, int(net.size()) - 1);
        CHECK(d.residual < 1e-10);
        PotentialSolution i = unit_current(net, 0, int(net.size()) - 1);
        CHECK(i.value == doctest::Approx(1.0));
        CHECK(i.node_residual < 1e-10);
    }
}

TEST_CASE("disconnected terminals")
{
    Network net(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK_FALSE(net.connected());
    CHECK_THROWS_AS(effective_resistance(net, 0, 3), Error);
}

TEST_CASE("reductions preserve resistances")
{
    Network net = field_network(5, 0.7, 3);  // 4×4 grid, corners have degree 2
    const int u = 5, v = 10;
    const double R = effective_resistance(net, u, v).R;
    auto R_after = [&](const Network& m) {
        return effective_resistance(m, m.index_of(net.label(u)), m.index_of(net.label(v))).R;
    };
    CHECK(R_after(reduce_series(net, 0)) == doctest::Approx(R).epsilon(1e-12));
    Network tri = star_triangle(net, 1);
    CHECK(tri.size() == net.size() - 1);
    CHECK(R_after(tri) == doctest::Approx(R).epsilon(1e-12));
    // the triangle on the three former neighbours of vertex 1 turns back into a star
    int a = tri.index_of(0), b = tri.index_of(2), c = tri.index_of(5);
    Network star = triangle_star(tri, a, b, c);
    CHECK(star.label(int(star.size()) - 1) == 16);
    CHECK(R_after(star) == doctest::Approx(R).epsilon(1e-12));
    auto edges = net.edges();
    edges.push_back({u, u + 1, 0.25});
    Network doubled(net.size(), edges);
    Network merged = reduce_parallel(doubled, u, u + 1);
    CHECK(merged.edges().size() == net.edges().size());
    CHECK(merged.conductance_between(u, u + 1) == doctest::Approx(doubled.conductance_between(u, u + 1)));
    Network schur = subnetwork_reduce(net, {u, v, 15});
    CHECK(schur.size() == 3);
    CHECK(R_after(schur) == doctest::Approx(R).epsilon(1e-12));
    CHECK_THROWS_AS(reduce_series(net, 5), Error);
    CHECK_THROWS_AS(reduce_parallel(net, 0, 1), Error);
}

TEST_CASE("flow decompositions")
{
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Network net = field_network(6, 1.2, seed);
        const int u = 0, v = int(net.size()) - 1;
        Resistance r = effective_resistance(net, u, v);
        FlowDecomposition p = path_decompose(net, u, v), c = cut_decompose(net, u, v);
        CHECK(p.alpha_sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.alpha_sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p.reconstruction() == doctest::Approx(r.R).epsilon(1e-9));
        CHECK(c.reconstruction() == doctest::Approx(r.C).epsilon(1e-9));
        CHECK(p.budget_violation(net) < 1e-10);
        CHECK(c.budget_violation(net) < 1e-10);
        for (const auto& item : c.items) CHECK(separates(net, item.edges, {u}, {v}));
    }
}

TEST_CASE("nash-williams and path bounds")
{
    Network net = bridge(1.0);
    const double R = effective_resistance(net, 0, 3).R;
    // cuts {01,02} and {13,23}: R ≥ 1/2 + 1/2; paths 0-1-3 and 0-2-3: R ≤ 1/(1/2+1/2)
    double nw = nash_williams(net, {{0, 1}, {3, 4}}, {0}, {3});
    double pb = path_bound(net, {{0, 3}, {1, 4}}, 0, 3);
    CHECK(1.0 / nw <= R + 1e-12);
    CHECK(pb >= R - 1e-12);
    CHECK_THROWS_AS(nash_williams(net, {{0}}, {0}, {3}), Error);
    CHECK_THROWS_AS(nash_williams(net, {{0, 1}, {0, 1}}, {0}, {3}), Error);
    CHECK_THROWS_AS(path_bound(net, {{0, 3}, {0, 2}}, 0, 3), Error);
    CHECK_THROWS_AS(path_bound(net, {{0}}, 0, 3), Error);
}

TEST_CASE("reciprocal network and rho")
{
    Network net(3, {{0, 1, 2.0}, {1, 2, 0.5}, {0, 1, 8.0}});
    Network r = net.reciprocal();
    CHECK(r.edge(0).c == 0.5);
    CHECK(r.edge(1).c == 2.0);
    // adjacent pairs at vertex 1: (2, 0.5) and (8, 0.5); parallel 2 vs 8 is excluded
    CHECK(net.rho_max() == doctest::Approx(16.0));
    CHECK(net.max_degree() == 3);
    CHECK(net.vertex_weights()[1] == doctest::Approx(10.5));
}

TEST_CASE("network files")
{
    std::istringstream in("# demo\n10 20 1.5\n20 30 2   # tail\n\n10 30 0.5\n");
    Network net = read_network(in);
    CHECK(net.size() == 3);
    CHECK(net.index_of(30) == 2);
    std::ostringstream out;
    write_network(out, net);
    std::istringstream back(out.str());
    Network again = read_network(back);
    CHECK(again.labels() == net.labels());
    CHECK(effective_resistance(again, 0, 2).R == doctest::Approx(effective_resistance(net, 0, 2).R));
    std::istringstream set("10 30\n");
    CHECK(read_vertex_set(set, net) == std::vector<int>{0, 2});
    for (const char* bad : {"1 2\n", "1 2 x\n", "1 2 3 4\n", "1 1 1\n", "1 2 -1\n", ""}) {
        std::istringstream b(bad);
        CHECK_THROWS_AS(read_network(b), Error);
    }
    std::istringstream unknown("99\n");
    CHECK_THROWS_AS(read_vertex_set(unknown, net), Error);
}

TEST_CASE("log-resistance gradient")
{
    Rng rng(5);
    LatticeDomain d = make_box(5);
    Field h = FieldSampler(d).sample(rng);
    const int u = d.index({1, 1}), v = d.index({4, 4});
    for (double beta : {0.5, 1.0}) {
        auto fd = log_resistance_gradient(h, beta, u, v);
        auto ex = log_resistance_gradient_exact(h, beta, u, v);
        CHECK((fd.grad - ex.grad).cwiseAbs().maxCoeff() < 1e-7);
        CHECK(ex.l1 <= 2.0 * beta + 1e-9);
    }
}

namespace {

Network chain(const std::vector<double>& r)
{
    std::vector<Edge> e;
    for (std::size_t i = 0; i < r.size(); ++i) e.push_back({int(i), int(i) + 1, 1.0 / r[i]});
    return Network(r.size() + 1, e);
}

// 3×3 grid, row-major, with the given conductances on its 12 edges.
Network grid3(const std::vector<double>& c)
{
    std::vector<Edge> e;
    std::size_t k = 0;
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
            if (x < 2) e.push_back({3 * y + x, 3 * y + x + 1, c[k++]});
            if (y < 2) e.push_back({3 * y + x, 3 * y + x + 3, c[k++]});
        }
    return Network(9, e);
}

std::vector<double> random_conductances(std::size_t n, Rng& rng)
{
    std::vector<double> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(std::exp(standard_normal(rng)));
    return c;
}

int edge_between(const Network& net, int a, int b)
{
    for (std::size_t e = 0; e < net.edges().size(); ++e)
        if ((net.edge(e).u == a && net.edge(e).v == b) || (net.edge(e).u == b && net.edge(e).v == a)) return int(e);
    return -1;
}

} // namespace

TEST_CASE("field network conductances")
{
    Rng rng(71);
    LatticeDomain d = make_box(5);
    Field h = FieldSampler(d).sample(rng);
    Network flat = from_field(h, 0.0);
    for (const auto& e : flat.edges()) CHECK(e.c == 1.0);
    Network level = from_field(Field(d, Eigen::VectorXd::Constant(16, 0.7)), 0.4);
    for (const auto& e : level.edges()) CHECK(e.c == doctest::Approx(std::exp(2.0 * 0.4 * 0.7)));
    Network net = from_field(h, 0.9);
    for (const auto& e : net.edges())
        CHECK(e.c == doctest::Approx(std::exp(0.9 * (h[d.index(d.vertex(std::size_t(e.u)))] +
                                                     h[d.index(d.vertex(std::size_t(e.v)))]))));
}

TEST_CASE("single edge and duality on small networks")
{
    Network one(2, {{0, 1, 4.0}});
    CHECK(effective_resistance(one, 0, 1).R == doctest::Approx(0.25));
    CHECK(duality_check(one, 0, 1).residual == doctest::Approx(0.0).scale(1.0));
    Rng rng(72);
    for (int k = 0; k < 50; ++k) {
        auto c = random_conductances(4, rng);
        Network sq(4, {{0, 1, c[0]}, {1, 3, c[1]}, {3, 2, c[2]}, {2, 0, c[3]}});
        CHECK(duality_check(sq, 0, 3).residual <= 1e-10);
    }
}

TEST_CASE("star-triangle examples")
{
    const double c = 1.7;
    Network tri(3, {{0, 1, c}, {1, 2, c}, {0, 2, c}});
    Network star = triangle_star(tri, 0, 1, 2);
    REQUIRE(star.size() == 4);
    for (const auto& e : star.edges()) CHECK(e.c == doctest::Approx(3.0 * c));
    CHECK(effective_resistance(star, 0, 1).R == doctest::Approx(2.0 / (3.0 * c)));
    // chain of k unit resistors
    Network k5 = chain({1, 1, 1, 1, 1});
    while (k5.size() > 2) k5 = reduce_series(k5, 1);
    REQUIRE(k5.edges().size() == 1);
    CHECK(k5.edge(0).c == doctest::Approx(0.2));
    // c12/(c12+c13) = (R13+R23−R12)/(2R23)
    Rng rng(73);
    for (int k = 0; k < 20; ++k) {
        auto cc = random_conductances(3, rng);
        Network t(3, {{0, 1, cc[0]}, {0, 2, cc[1]}, {1, 2, cc[2]}});
        double R12 = effective_resistance(t, 0, 1).R, R13 = effective_resistance(t, 0, 2).R,
               R23 = effective_resistance(t, 1, 2).R;
        CHECK(std::abs(cc[0] / (cc[0] + cc[1]) - (R13 + R23 - R12) / (2.0 * R23)) <= 1e-10);
    }
}

TEST_CASE("schur reduction examples")
{
    Network net = field_network(5, 0.6, 74);
    Network two = subnetwork_reduce(net, {2, 13});
    REQUIRE(two.size() == 2);
    CHECK(two.conductance_between(0, 1) == doctest::Approx(effective_resistance(net, 2, 13).C).epsilon(1e-10));
    std::vector<int> all(net.size());
    std::iota(all.begin(), all.end(), 0);
    Network same = subnetwork_reduce(net, all);
    for (std::size_t e = 0; e < net.edges().size(); ++e)
        CHECK(same.conductance_between(net.edge(e).u, net.edge(e).v) ==
              doctest::Approx(net.conductance_between(net.edge(e).u, net.edge(e).v)));
}

TEST_CASE("schur reduction matches the return-hit probabilities")
{
    // c'(x,y) = π(x) P^x(X at the first return to the kept set = y)
    Rng rng(75);
    Network g = grid3(random_conductances(12, rng));
    const std::vector<int> corners{0, 2, 6, 8};
    Network red = subnetwork_reduce(g, corners);
    WalkKernel k(g);
    const int walks = 100000;
    std::vector<int> hits(9, 0);
    for (int w = 0; w < walks; ++w) {
        int x = k.step(0, rng);
        while (std::find(corners.begin(), corners.end(), x) == corners.end()) x = k.step(x, rng);
        ++hits[std::size_t(x)];
    }
    const double pi0 = g.vertex_weights()[0];
    for (int y : {2, 6, 8}) {
        double p = double(hits[std::size_t(y)]) / walks;
        double se = std::sqrt(p * (1.0 - p) / walks);
        double c = red.conductance_between(red.index_of(0), red.index_of(y));
        CHECK(std::abs(pi0 * p - c) <= 3.0 * pi0 * se + 1e-12);
    }
}

TEST_CASE("path decomposition examples")
{
    Network one(2, {{0, 1, 2.0}});
    FlowDecomposition d1 = path_decompose(one, 0, 1);
    REQUIRE(d1.items.size() == 1);
    CHECK(d1.items[0].alpha == doctest::Approx(1.0));
    CHECK(d1.reconstruction() == doctest::Approx(0.5));
    // two parallel paths 0-1-3 (r₁ = 3) and 0-2-3 (r₂ = 1)
    Network two(4, {{0, 1, 2.0 / 3.0}, {1, 3, 2.0 / 3.0}, {0, 2, 2.0}, {2, 3, 2.0}});
    FlowDecomposition d2 = path_decompose(two, 0, 3);
    REQUIRE(d2.items.size() == 2);
    std::vector<double> alpha{d2.items[0].alpha, d2.items[1].alpha};
    std::sort(alpha.begin(), alpha.end());
    CHECK(alpha[0] == doctest::Approx(1.0 / 3.0 / (1.0 / 3.0 + 1.0)));
    CHECK(alpha[1] == doctest::Approx(1.0 / (1.0 / 3.0 + 1.0)));
    CHECK(d2.reconstruction() == doctest::Approx(duality_check(two, 0, 3).R));
    Rng rng(76);
    for (int k = 0; k < 10; ++k) {
        Network g = grid3(random_conductances(12, rng));
        FlowDecomposition p = path_decompose(g, 0, 8);
        CHECK(p.items.size() <= g.edges().size());
        CHECK(std::abs(p.reconstruction() - effective_resistance(g, 0, 8).R) <= 1e-8);
    }
}

TEST_CASE("cut decomposition examples")
{
    Network one(2, {{0, 1, 2.0}});
    FlowDecomposition d1 = cut_decompose(one, 0, 1);
    REQUIRE(d1.items.size() == 1);
    CHECK(d1.items[0].alpha == doctest::Approx(1.0));
    CHECK(d1.items[0].edges == std::vector<int>{0});
    Network ch = chain({1.0, 2.0, 0.5, 3.0});
    FlowDecomposition dc = cut_decompose(ch, 0, 4);
    REQUIRE(dc.items.size() == 4);
    for (const auto& item : dc.items) CHECK(item.edges.size() == 1);
    CHECK(dc.reconstruction() == doctest::Approx(1.0 / 6.5));
    Rng rng(77);
    for (int k = 0; k < 10; ++k) {
        Network g = grid3(random_conductances(12, rng));
        for (const auto& item : cut_decompose(g, 0, 8).items) CHECK(separates(g, item.edges, {0}, {8}));
    }
}

TEST_CASE("nash-williams examples")
{
    Network net = field_network(6, 0.8, 78);
    std::vector<int> at0(net.incident(0).begin(), net.incident(0).end());
    double sum = 0.0;
    for (int e : at0) sum += net.edge(std::size_t(e)).c;
    CHECK(nash_williams(net, {at0}, {0}, {24}) == doctest::Approx(sum));
    CHECK(nash_williams(net, {at0}, {0}, {24}) >= effective_resistance(net, 0, 24).C);
    Network ch = chain({1.0, 2.0, 0.5});
    CHECK(nash_williams(ch, {{0}, {1}, {2}}, {0}, {3}) == doctest::Approx(effective_resistance(ch, 0, 3).C));
    // annuli {|x|∞ = k} → {|x|∞ = k+1} around the centre of a 7×7 grid
    LatticeDomain d = make_centered_box(3);
    Rng rng(79);
    Network g = from_field(FieldSampler(d).sample(rng), 0.7);
    std::vector<std::vector<int>> cuts(3);
    std::vector<int> outer;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        int a = linf_norm(d.vertex(std::size_t(g.edge(e).u))), b = linf_norm(d.vertex(std::size_t(g.edge(e).v)));
        if (a != b) cuts[std::size_t(std::min(a, b))].push_back(int(e));
    }
    for (std::size_t i = 0; i < d.size(); ++i)
        if (linf_norm(d.vertex(i)) == 3) outer.push_back(int(i));
    const int o = d.index({0, 0});
    double bound = nash_williams(g, cuts, {o}, outer), C = effective_resistance(g, {o}, outer).C;
    CHECK(bound > C);
}

TEST_CASE("path bound examples")
{
    Network ch = chain({1.0, 2.0, 0.5});
    CHECK(path_bound(ch, {{0, 1, 2}}, 0, 3) == doctest::Approx(3.5));
    Network two(4, {{0, 1, 2.0 / 3.0}, {1, 3, 2.0 / 3.0}, {0, 2, 2.0}, {2, 3, 2.0}});
    CHECK(path_bound(two, {{0, 1}, {2, 3}}, 0, 3) == doctest::Approx(0.75));
    CHECK(path_bound(two, {{0, 1}, {2, 3}}, 0, 3) == doctest::Approx(effective_resistance(two, 0, 3).R));
    // monotone staircase paths in a 3×3 grid: along the bottom then up, and up then along the top
    Rng rng(80);
    Network g = grid3(random_conductances(12, rng));
    std::vector<int> low{edge_between(g, 0, 1), edge_between(g, 1, 2), edge_between(g, 2, 5), edge_between(g, 5, 8)};
    std::vector<int> high{edge_between(g, 0, 3), edge_between(g, 3, 6), edge_between(g, 6, 7), edge_between(g, 7, 8)};
    CHECK(path_bound(g, {low, high}, 0, 8) >= effective_resistance(g, 0, 8).R);
}

TEST_CASE("gradient examples")
{
    Rng rng(81);
    LatticeDomain d = make_box(5);
    Field h = FieldSampler(d).sample(rng);
    CHECK(log_resistance_gradient_exact(h, 0.0, 0, 15).grad.cwiseAbs().maxCoeff() == doctest::Approx(0.0).scale(1.0));
    CHECK(log_resistance_gradient(h, 0.0, 0, 15).l1 <= 1e-8);
    LatticeDomain pair = LatticeDomain::from_vertices({{1, 1}, {2, 1}}, 3, Shape::Custom);
    Field hp(pair, Eigen::Vector2d(0.3, -1.1));
    for (auto g : {log_resistance_gradient_exact(hp, 0.8, 0, 1), log_resistance_gradient(hp, 0.8, 0, 1)}) {
        CHECK(g.grad[0] == doctest::Approx(-0.8).epsilon(1e-8));
        CHECK(g.grad[1] == doctest::Approx(-0.8).epsilon(1e-8));
        CHECK(g.l1 == doctest::Approx(1.6).epsilon(1e-8));
    }
}
