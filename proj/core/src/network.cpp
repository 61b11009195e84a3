#include "dgff/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "dgff/error.hpp"

namespace dgff {

// ---------------------------------------------------------------- Network

Network::Network(std::size_t n, std::vector<Edge> edges, std::vector<std::int64_t> labels)
    : edges_(std::move(edges)), labels_(std::move(labels))
{
    if (labels_.empty()) {
        labels_.resize(n);
        std::iota(labels_.begin(), labels_.end(), std::int64_t{0});
    }
    require(labels_.size() == n, ErrorKind::InvalidSize, "label count does not match vertex count");
    incident_.assign(n, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& ed = edges_[e];
        require(ed.u >= 0 && ed.v >= 0 && static_cast<std::size_t>(ed.u) < n && static_cast<std::size_t>(ed.v) < n,
                ErrorKind::InvalidArgument, "edge endpoint out of range");
        require(ed.u != ed.v, ErrorKind::InvalidArgument, "self-loops are not allowed");
        require(std::isfinite(ed.c) && ed.c > 0.0, ErrorKind::InvalidArgument, "conductances must lie in (0,inf)");
        incident_[static_cast<std::size_t>(ed.u)].push_back(static_cast<int>(e));
        incident_[static_cast<std::size_t>(ed.v)].push_back(static_cast<int>(e));
    }
}

int Network::index_of(std::int64_t label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

int Network::max_degree() const
{
    int d = 0;
    for (std::size_t i = 0; i < size(); ++i) d = std::max(d, degree(static_cast<int>(i)));
    return d;
}

namespace {

std::vector<char> reach(const Network& net, const std::vector<int>& from, const std::vector<char>* blocked_edges = nullptr)
{
    std::vector<char> seen(net.size(), 0);
    std::vector<int> stack;
    for (int a : from)
        if (!seen[static_cast<std::size_t>(a)]) {
            seen[static_cast<std::size_t>(a)] = 1;
            stack.push_back(a);
        }
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int e : net.incident(x)) {
            if (blocked_edges && (*blocked_edges)[static_cast<std::size_t>(e)]) continue;
            int y = net.other(static_cast<std::size_t>(e), x);
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                stack.push_back(y);
            }
        }
    }
    return seen;
}

void check_vertex(const Network& net, int x)
{
    require(x >= 0 && static_cast<std::size_t>(x) < net.size(), ErrorKind::InvalidArgument, "vertex out of range");
}

} // namespace

bool Network::connected() const
{
    if (size() == 0) return true;
    auto s = reach(*this, {0});
    return std::all_of(s.begin(), s.end(), [](char c) { return c != 0; });
}

std::vector<double> Network::vertex_weights() const
{
    std::vector<double> pi(size(), 0.0);
    for (const auto& e : edges_) {
        pi[static_cast<std::size_t>(e.u)] += e.c;
        pi[static_cast<std::size_t>(e.v)] += e.c;
    }
    return pi;
}

double Network::conductance_between(int x, int y) const
{
    double c = 0.0;
    for (int e : incident(x))
        if (other(static_cast<std::size_t>(e), x) == y) c += edges_[static_cast<std::size_t>(e)].c;
    return c;
}

Network Network::reciprocal() const
{
    auto e = edges_;
    for (auto& ed : e) ed.c = 1.0 / ed.c;
    return Network(size(), std::move(e), labels_);
}

double Network::rho_max() const
{
    double rho = 1.0;
    for (std::size_t x = 0; x < size(); ++x) {
        const auto& inc = incident_[x];
        for (int a : inc)
            for (int b : inc) {
                if (a == b) continue;
                const auto& ea = edges_[static_cast<std::size_t>(a)];
                const auto& eb = edges_[static_cast<std::size_t>(b)];
                // Parallel edges share both endpoints and are not adjacent.
                bool both = (ea.u == eb.u && ea.v == eb.v) || (ea.u == eb.v && ea.v == eb.u);
                if (!both) rho = std::max(rho, eb.c / ea.c);  // r_a / r_b
            }
    }
    return rho;
}

Network from_field(const Field& h, double beta)
{
    require(beta >= 0.0, ErrorKind::InvalidArgument, "beta must be >= 0");
    const auto& d = h.domain();
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto nb = d.neighbors(i);
        // East and north neighbours give each edge once.
        for (int k : {0, 2}) {
            int j = nb[static_cast<std::size_t>(k)];
            if (j >= 0) edges.push_back({static_cast<int>(i), j, std::exp(beta * (h[static_cast<Eigen::Index>(i)] + h[j]))});
        }
    }
    return Network(d.size(), std::move(edges));
}

Network read_network(std::istream& in)
{
    std::map<std::int64_t, int> index;
    std::vector<std::int64_t> labels;
    std::vector<Edge> edges;
    auto id = [&](std::int64_t l) {
        auto [it, fresh] = index.emplace(l, static_cast<int>(labels.size()));
        if (fresh) labels.push_back(l);
        return it->second;
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::int64_t u, v;
        double c;
        if (!(ls >> u)) continue;
        require(static_cast<bool>(ls >> v >> c), ErrorKind::Validation,
                "network line " + std::to_string(lineno) + ": expected 'u v c'");
        std::string rest;
        require(!(ls >> rest), ErrorKind::Validation, "network line " + std::to_string(lineno) + ": trailing tokens");
        int a = id(u), b = id(v);
        edges.push_back({a, b, c});
    }
    require(!labels.empty(), ErrorKind::Validation, "network file has no edges");
    const std::size_t n_out = labels.size();
    return Network(n_out, std::move(edges), std::move(labels));
}

Network read_network_file(const std::string& path)
{
    std::ifstream in(path);
    require(in.good(), ErrorKind::Io, "cannot open network file " + path);
    return read_network(in);
}

void write_network(std::ostream& out, const Network& net)
{
    out.precision(17);
    for (const auto& e : net.edges()) out << net.label(e.u) << ' ' << net.label(e.v) << ' ' << e.c << '\n';
}

std::vector<int> read_vertex_set(std::istream& in, const Network& net)
{
    std::vector<int> out;
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') {
            std::getline(in, tok);
            continue;
        }
        std::int64_t l = 0;
        try {
            std::size_t pos = 0;
            l = std::stoll(tok, &pos);
            require(pos == tok.size(), ErrorKind::Validation, "bad vertex label '" + tok + "'");
        } catch (const std::logic_error&) {
            fail(ErrorKind::Validation, "bad vertex label '" + tok + "'");
        }
        int i = net.index_of(l);
        require(i >= 0, ErrorKind::Validation, "vertex label " + tok + " is not in the network");
        out.push_back(i);
    }
    return out;
}

// -------------------------------------------------------------- solves

namespace {

// Solves the weighted Laplace equation on free vertices that connect to a
// fixed one; isolated free components are left at 0. `source` adds an
// injection on free vertices.
std::vector<double> solve_potential(const Network& net, const std::vector<char>& fixed,
                                    const std::vector<double>& fixed_value, const std::vector<double>& source)
{
    const std::size_t n = net.size();
    std::vector<int> anchors;
    for (std::size_t i = 0; i < n; ++i)
        if (fixed[i]) anchors.push_back(static_cast<int>(i));
    auto live = reach(net, anchors);
    std::vector<int> slot(n, -1);
    int m = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!fixed[i] && live[i]) slot[i] = m++;
    std::vector<double> f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (fixed[i]) f[i] = fixed_value[i];
    if (m == 0) return f;

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < n; ++i)
        if (slot[i] >= 0) rhs[slot[i]] = source.empty() ? 0.0 : source[i];
    for (const auto& e : net.edges()) {
        int a = slot[static_cast<std::size_t>(e.u)], b = slot[static_cast<std::size_t>(e.v)];
        if (a >= 0) trip.emplace_back(a, a, e.c);
        if (b >= 0) trip.emplace_back(b, b, e.c);
        if (a >= 0 && b >= 0) {
            trip.emplace_back(a, b, -e.c);
            trip.emplace_back(b, a, -e.c);
        } else if (a >= 0 && fixed[static_cast<std::size_t>(e.v)]) {
            rhs[a] += e.c * f[static_cast<std::size_t>(e.v)];
        } else if (b >= 0 && fixed[static_cast<std::size_t>(e.u)]) {
            rhs[b] += e.c * f[static_cast<std::size_t>(e.u)];
        }
    }
    Eigen::SparseMatrix<double> L(m, m);
    L.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
    require(ldlt.info() == Eigen::Success, ErrorKind::Solver, "network Laplacian factorization failed");
    Eigen::VectorXd x = ldlt.solve(rhs);
    // Two rounds of iterative refinement for badly scaled conductances.
    for (int it = 0; it < 2; ++it) x += ldlt.solve(rhs - L * x);
    require(x.allFinite(), ErrorKind::Solver, "network solve produced non-finite values");
    for (std::size_t i = 0; i < n; ++i)
        if (slot[i] >= 0) f[i] = x[slot[i]];
    return f;
}

void fill_currents(const Network& net, PotentialSolution& s)
{
    s.current.resize(net.edges().size());
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        const auto& ed = net.edge(e);
        s.current[e] = ed.c * (s.f[static_cast<std::size_t>(ed.u)] - s.f[static_cast<std::size_t>(ed.v)]);
    }
}

std::vector<double> divergence(const Network& net, const std::vector<double>& current)
{
    std::vector<double> div(net.size(), 0.0);
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        div[static_cast<std::size_t>(net.edge(e).u)] += current[e];
        div[static_cast<std::size_t>(net.edge(e).v)] -= current[e];
    }
    return div;
}

} // namespace

Resistance effective_resistance(const Network& net, const std::vector<int>& A, const std::vector<int>& B)
{
    require(!A.empty() && !B.empty(), ErrorKind::InvalidArgument, "terminal sets must be nonempty");
    std::vector<char> fixed(net.size(), 0), inA(net.size(), 0);
    std::vector<double> val(net.size(), 0.0);
    for (int a : A) {
        check_vertex(net, a);
        fixed[static_cast<std::size_t>(a)] = 1;
        inA[static_cast<std::size_t>(a)] = 1;
        val[static_cast<std::size_t>(a)] = 1.0;
    }
    for (int b : B) {
        check_vertex(net, b);
        require(!inA[static_cast<std::size_t>(b)], ErrorKind::InvalidArgument, "terminal sets must be disjoint");
        fixed[static_cast<std::size_t>(b)] = 1;
    }
    auto ra = reach(net, A);
    require(std::any_of(B.begin(), B.end(), [&](int b) { return ra[static_cast<std::size_t>(b)] != 0; }),
            ErrorKind::Domain, "terminal sets are disconnected");
    Resistance r;
    auto& s = r.solution;
    s.f = solve_potential(net, fixed, val, {});
    fill_currents(net, s);
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        const auto& ed = net.edge(e);
        double g = s.f[static_cast<std::size_t>(ed.u)] - s.f[static_cast<std::size_t>(ed.v)];
        s.energy += ed.c * g * g;
    }
    auto div = divergence(net, s.current);
    for (int a : A) s.value += div[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < net.size(); ++i)
        if (!fixed[i]) s.node_residual = std::max(s.node_residual, std::abs(div[i]));
    r.C = s.energy;
    r.R = 1.0 / r.C;
    return r;
}

Resistance effective_resistance(const Network& net, int u, int v)
{
    return effective_resistance(net, std::vector<int>{u}, std::vector<int>{v});
}

PotentialSolution unit_current(const Network& net, int u, int v)
{
    check_vertex(net, u);
    check_vertex(net, v);
    require(u != v, ErrorKind::InvalidArgument, "source and sink must differ");
    require(reach(net, {u})[static_cast<std::size_t>(v)], ErrorKind::Domain, "terminals are disconnected");
    std::vector<char> fixed(net.size(), 0);
    fixed[static_cast<std::size_t>(v)] = 1;
    std::vector<double> val(net.size(), 0.0), src(net.size(), 0.0);
    src[static_cast<std::size_t>(u)] = 1.0;
    PotentialSolution s;
    s.f = solve_potential(net, fixed, val, src);
    fill_currents(net, s);
    for (std::size_t e = 0; e < net.edges().size(); ++e) s.energy += s.current[e] * s.current[e] / net.edge(e).c;
    auto div = divergence(net, s.current);
    s.value = div[static_cast<std::size_t>(u)];
    for (std::size_t i = 0; i < net.size(); ++i)
        if (static_cast<int>(i) != u && static_cast<int>(i) != v) s.node_residual = std::max(s.node_residual, std::abs(div[i]));
    return s;
}

DualityCheck duality_check(const Network& net, int u, int v)
{
    DualityCheck d;
    d.R = unit_current(net, u, v).energy;
    d.C = effective_resistance(net, u, v).C;
    d.residual = std::abs(d.R * d.C - 1.0);
    return d;
}

// ----------------------------------------------------------- reductions

namespace {

// Drops the listed vertices and their edges, then appends extra edges given
// in old indices; extra vertices (labels) are appended at the end.
Network rebuild(const Network& net, const std::vector<int>& drop, std::vector<Edge> extra,
                const std::vector<std::int64_t>& new_labels = {}, const std::vector<char>* drop_edges = nullptr)
{
    std::vector<char> gone(net.size(), 0);
    for (int x : drop) gone[static_cast<std::size_t>(x)] = 1;
    std::vector<int> map(net.size() + new_labels.size(), -1);
    std::vector<std::int64_t> labels;
    for (std::size_t i = 0; i < net.size(); ++i)
        if (!gone[i]) {
            map[i] = static_cast<int>(labels.size());
            labels.push_back(net.labels()[i]);
        }
    for (std::size_t k = 0; k < new_labels.size(); ++k) {
        map[net.size() + k] = static_cast<int>(labels.size());
        labels.push_back(new_labels[k]);
    }
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        const auto& ed = net.edge(e);
        if (gone[static_cast<std::size_t>(ed.u)] || gone[static_cast<std::size_t>(ed.v)]) continue;
        if (drop_edges && (*drop_edges)[e]) continue;
        edges.push_back({map[static_cast<std::size_t>(ed.u)], map[static_cast<std::size_t>(ed.v)], ed.c});
    }
    for (auto& ed : extra) edges.push_back({map[static_cast<std::size_t>(ed.u)], map[static_cast<std::size_t>(ed.v)], ed.c});
    const std::size_t n_out = labels.size();
    return Network(n_out, std::move(edges), std::move(labels));
}

} // namespace

Network reduce_series(const Network& net, int site)
{
    check_vertex(net, site);
    const auto& inc = net.incident(site);
    require(inc.size() == 2, ErrorKind::PatternNotFound, "series reduction needs a vertex of degree 2");
    int a = net.other(static_cast<std::size_t>(inc[0]), site), b = net.other(static_cast<std::size_t>(inc[1]), site);
    require(a != b, ErrorKind::PatternNotFound, "series reduction needs two distinct neighbours");
    double r = net.resistance(static_cast<std::size_t>(inc[0])) + net.resistance(static_cast<std::size_t>(inc[1]));
    return rebuild(net, {site}, {{a, b, 1.0 / r}});
}

Network reduce_parallel(const Network& net, int x, int y)
{
    check_vertex(net, x);
    check_vertex(net, y);
    std::vector<char> drop(net.edges().size(), 0);
    int count = 0;
    double c = 0.0;
    for (int e : net.incident(x))
        if (net.other(static_cast<std::size_t>(e), x) == y) {
            drop[static_cast<std::size_t>(e)] = 1;
            c += net.edge(static_cast<std::size_t>(e)).c;
            ++count;
        }
    require(count >= 2, ErrorKind::PatternNotFound, "parallel reduction needs at least two edges between the vertices");
    return rebuild(net, {}, {{x, y, c}}, {}, &drop);
}

Network star_triangle(const Network& net, int site)
{
    check_vertex(net, site);
    const auto& inc = net.incident(site);
    require(inc.size() == 3, ErrorKind::PatternNotFound, "star-triangle needs a vertex of degree 3");
    int n[3];
    double c[3];
    for (int k = 0; k < 3; ++k) {
        n[k] = net.other(static_cast<std::size_t>(inc[static_cast<std::size_t>(k)]), site);
        c[k] = net.edge(static_cast<std::size_t>(inc[static_cast<std::size_t>(k)])).c;
    }
    require(n[0] != n[1] && n[1] != n[2] && n[0] != n[2], ErrorKind::PatternNotFound,
            "star-triangle needs three distinct neighbours");
    const double S = c[0] + c[1] + c[2];
    return rebuild(net, {site},
                   {{n[0], n[1], c[0] * c[1] / S}, {n[1], n[2], c[1] * c[2] / S}, {n[2], n[0], c[2] * c[0] / S}});
}

Network triangle_star(const Network& net, int a, int b, int c)
{
    check_vertex(net, a);
    check_vertex(net, b);
    check_vertex(net, c);
    require(a != b && b != c && a != c, ErrorKind::InvalidArgument, "triangle vertices must be distinct");
    std::vector<char> drop(net.edges().size(), 0);
    auto find = [&](int x, int y) {
        int hit = -1;
        for (int e : net.incident(x))
            if (net.other(static_cast<std::size_t>(e), x) == y) {
                require(hit < 0, ErrorKind::PatternNotFound, "triangle side carries parallel edges");
                hit = e;
            }
        require(hit >= 0, ErrorKind::PatternNotFound, "triangle side missing");
        drop[static_cast<std::size_t>(hit)] = 1;
        return net.edge(static_cast<std::size_t>(hit)).c;
    };
    double cab = find(a, b), cbc = find(b, c), cca = find(c, a);
    const double P = cab * cbc + cbc * cca + cca * cab;
    const int z = static_cast<int>(net.size());
    std::int64_t lz = *std::max_element(net.labels().begin(), net.labels().end()) + 1;
    return rebuild(net, {}, {{z, a, P / cbc}, {z, b, P / cca}, {z, c, P / cab}}, {lz}, &drop);
}

Network subnetwork_reduce(const Network& net, const std::vector<int>& keep)
{
    require(keep.size() >= 2, ErrorKind::InvalidArgument, "keep at least two vertices");
    const std::size_t n = net.size();
    std::vector<int> kslot(n, -1);
    for (std::size_t a = 0; a < keep.size(); ++a) {
        int x = keep[a];
        check_vertex(net, x);
        require(kslot[static_cast<std::size_t>(x)] < 0, ErrorKind::InvalidArgument, "duplicate kept vertex");
        kslot[static_cast<std::size_t>(x)] = static_cast<int>(a);
    }
    // Eliminated vertices that never touch the kept set drop out.
    auto live = reach(net, keep);
    std::vector<int> dslot(n, -1);
    int m = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (kslot[i] < 0 && live[i]) dslot[i] = m++;
    const auto k = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd Lkk = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd Ldk = Eigen::MatrixXd::Zero(m, k);
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& e : net.edges()) {
        int ku = kslot[static_cast<std::size_t>(e.u)], kv = kslot[static_cast<std::size_t>(e.v)];
        int du = dslot[static_cast<std::size_t>(e.u)], dv = dslot[static_cast<std::size_t>(e.v)];
        if (ku >= 0) Lkk(ku, ku) += e.c;
        if (kv >= 0) Lkk(kv, kv) += e.c;
        if (du >= 0) trip.emplace_back(du, du, e.c);
        if (dv >= 0) trip.emplace_back(dv, dv, e.c);
        if (ku >= 0 && kv >= 0) {
            Lkk(ku, kv) -= e.c;
            Lkk(kv, ku) -= e.c;
        } else if (du >= 0 && dv >= 0) {
            trip.emplace_back(du, dv, -e.c);
            trip.emplace_back(dv, du, -e.c);
        } else if (ku >= 0 && dv >= 0) {
            Ldk(dv, ku) -= e.c;
        } else if (kv >= 0 && du >= 0) {
            Ldk(du, kv) -= e.c;
        }
    }
    Eigen::MatrixXd S = Lkk;
    if (m > 0) {
        Eigen::SparseMatrix<double> Ldd(m, m);
        Ldd.setFromTriplets(trip.begin(), trip.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Ldd);
        require(ldlt.info() == Eigen::Success, ErrorKind::Solver, "Schur complement factorization failed");
        Eigen::MatrixXd X = ldlt.solve(Ldk);
        S -= Ldk.transpose() * X;
    }
    std::vector<Edge> edges;
    const double scale = S.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = a + 1; b < k; ++b) {
            double c = -0.5 * (S(a, b) + S(b, a));
            if (c > 1e-14 * scale) edges.push_back({static_cast<int>(a), static_cast<int>(b), c});
        }
    std::vector<std::int64_t> labels;
    for (int x : keep) labels.push_back(net.label(x));
    return Network(keep.size(), std::move(edges), std::move(labels));
}

Network short_vertices(const Network& net, const std::vector<int>& set)
{
    require(!set.empty(), ErrorKind::InvalidArgument, "empty set to short");
    std::vector<char> in(net.size(), 0);
    for (int x : set) {
        check_vertex(net, x);
        in[static_cast<std::size_t>(x)] = 1;
    }
    const int root = set.front();
    std::vector<int> map(net.size(), -1);
    std::vector<std::int64_t> labels;
    for (std::size_t i = 0; i < net.size(); ++i)
        if (!in[i] || static_cast<int>(i) == root) {
            map[i] = static_cast<int>(labels.size());
            labels.push_back(net.labels()[i]);
        }
    for (std::size_t i = 0; i < net.size(); ++i)
        if (in[i]) map[i] = map[static_cast<std::size_t>(root)];
    std::vector<Edge> edges;
    for (const auto& e : net.edges()) {
        int a = map[static_cast<std::size_t>(e.u)], b = map[static_cast<std::size_t>(e.v)];
        if (a != b) edges.push_back({a, b, e.c});
    }
    const std::size_t n_out = labels.size();
    return Network(n_out, std::move(edges), std::move(labels));
}

// -------------------------------------------------------- decompositions

double FlowDecomposition::alpha_sum() const
{
    double s = 0.0;
    for (const auto& it : items) s += it.alpha;
    return s;
}

double FlowDecomposition::reconstruction() const
{
    double inv = 0.0;
    for (const auto& it : items) inv += 1.0 / std::accumulate(it.split.begin(), it.split.end(), 0.0);
    return 1.0 / inv;
}

double FlowDecomposition::budget_violation(const Network& net) const
{
    std::vector<double> used(net.edges().size(), 0.0);
    for (const auto& it : items)
        for (std::size_t k = 0; k < it.edges.size(); ++k) used[static_cast<std::size_t>(it.edges[k])] += 1.0 / it.split[k];
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < used.size(); ++e) {
        if (used[e] == 0.0) continue;
        // Budget 1/r_e for paths, 1/c_e for cutsets, compared relatively.
        double budget = kind == Paths ? net.edge(e).c : 1.0 / net.edge(e).c;
        worst = std::max(worst, used[e] / budget - 1.0);
    }
    return worst;
}

FlowDecomposition path_decompose(const Network& net, int u, int v)
{
    PotentialSolution s = unit_current(net, u, v);
    require(s.node_residual <= 1e-8, ErrorKind::Validation, "current has nonzero divergence off the terminals");
    const std::size_t E = net.edges().size();
    const double val = s.value;
    std::vector<double> rem(E), istar(E);
    for (std::size_t e = 0; e < E; ++e) {
        istar[e] = std::abs(s.current[e]) / val;
        rem[e] = istar[e] < 1e-12 ? 0.0 : istar[e];
    }
    // Head of edge e in the direction of positive flow.
    auto from = [&](std::size_t e) { return s.current[e] >= 0 ? net.edge(e).u : net.edge(e).v; };
    FlowDecomposition d;
    d.kind = FlowDecomposition::Paths;
    for (std::size_t iter = 0; iter <= E; ++iter) {
        std::vector<double> width(net.size(), 0.0);
        std::vector<int> pred(net.size(), -1);
        std::vector<char> done(net.size(), 0);
        width[static_cast<std::size_t>(u)] = std::numeric_limits<double>::infinity();
        std::priority_queue<std::pair<double, int>> pq;
        pq.push({width[static_cast<std::size_t>(u)], u});
        while (!pq.empty()) {
            auto [w, x] = pq.top();
            pq.pop();
            if (done[static_cast<std::size_t>(x)]) continue;
            done[static_cast<std::size_t>(x)] = 1;
            if (x == v) break;
            for (int e : net.incident(x)) {
                auto ue = static_cast<std::size_t>(e);
                if (rem[ue] <= 0.0 || from(ue) != x) continue;
                int y = net.other(ue, x);
                double nw = std::min(w, rem[ue]);
                if (nw > width[static_cast<std::size_t>(y)]) {
                    width[static_cast<std::size_t>(y)] = nw;
                    pred[static_cast<std::size_t>(y)] = e;
                    pq.push({nw, y});
                }
            }
        }
        const double alpha = width[static_cast<std::size_t>(v)];
        if (alpha <= 1e-12) break;
        DecompositionItem item;
        item.alpha = alpha;
        for (int x = v; x != u;) {
            int e = pred[static_cast<std::size_t>(x)];
            item.edges.push_back(e);
            x = net.other(static_cast<std::size_t>(e), x);
        }
        std::reverse(item.edges.begin(), item.edges.end());
        for (int e : item.edges) {
            auto ue = static_cast<std::size_t>(e);
            rem[ue] -= alpha;
            if (rem[ue] < 1e-12) rem[ue] = 0.0;
            item.split.push_back(istar[ue] * net.resistance(ue) / alpha);
        }
        d.items.push_back(std::move(item));
    }
    return d;
}

FlowDecomposition cut_decompose(const Network& net, int u, int v)
{
    Resistance r = effective_resistance(net, u, v);
    const auto& f = r.solution.f;
    require(r.solution.node_residual <= 1e-8 * std::max(1.0, r.solution.value), ErrorKind::Validation,
            "potential is not harmonic off the terminals");
    auto live = reach(net, {u});
    std::vector<char> inD(net.size(), 0);
    const double tol = 1e-10;
    double level = f[static_cast<std::size_t>(u)];
    auto absorb = [&](double t) {
        for (std::size_t i = 0; i < net.size(); ++i)
            if (live[i] && f[i] >= t - tol) inD[i] = 1;
    };
    absorb(level);
    FlowDecomposition d;
    d.kind = FlowDecomposition::Cutsets;
    while (!inD[static_cast<std::size_t>(v)]) {
        double next = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < net.size(); ++i)
            if (live[i] && !inD[i]) next = std::max(next, f[i]);
        DecompositionItem item;
        item.alpha = level - next;
        for (std::size_t e = 0; e < net.edges().size(); ++e) {
            const auto& ed = net.edge(e);
            if (inD[static_cast<std::size_t>(ed.u)] != inD[static_cast<std::size_t>(ed.v)]) {
                item.edges.push_back(static_cast<int>(e));
                double grad = std::abs(f[static_cast<std::size_t>(ed.u)] - f[static_cast<std::size_t>(ed.v)]);
                item.split.push_back(grad * ed.c / item.alpha);
            }
        }
        d.items.push_back(std::move(item));
        level = next;
        absorb(level);
    }
    return d;
}

bool separates(const Network& net, const std::vector<int>& cut, const std::vector<int>& A, const std::vector<int>& B)
{
    std::vector<char> blocked(net.edges().size(), 0);
    for (int e : cut) {
        require(e >= 0 && static_cast<std::size_t>(e) < net.edges().size(), ErrorKind::InvalidArgument, "edge id out of range");
        blocked[static_cast<std::size_t>(e)] = 1;
    }
    auto seen = reach(net, A, &blocked);
    return std::none_of(B.begin(), B.end(), [&](int b) { return seen[static_cast<std::size_t>(b)] != 0; });
}

double nash_williams(const Network& net, const std::vector<std::vector<int>>& cutsets, const std::vector<int>& A,
                     const std::vector<int>& B)
{
    require(!cutsets.empty(), ErrorKind::Validation, "need at least one cutset");
    std::set<int> used;
    double inv = 0.0;
    for (const auto& cut : cutsets) {
        require(!cut.empty(), ErrorKind::Validation, "empty cutset");
        require(separates(net, cut, A, B), ErrorKind::Validation, "cutset does not separate the terminals");
        double c = 0.0;
        for (int e : cut) {
            require(used.insert(e).second, ErrorKind::Validation, "cutsets are not edge-disjoint");
            c += net.edge(static_cast<std::size_t>(e)).c;
        }
        inv += 1.0 / c;
    }
    return 1.0 / inv;
}

double path_bound(const Network& net, const std::vector<std::vector<int>>& paths, int u, int v)
{
    require(!paths.empty(), ErrorKind::Validation, "need at least one path");
    std::set<int> used;
    double inv = 0.0;
    for (const auto& p : paths) {
        require(!p.empty(), ErrorKind::Validation, "empty path");
        int x = u;
        double r = 0.0;
        for (int e : p) {
            require(e >= 0 && static_cast<std::size_t>(e) < net.edges().size(), ErrorKind::Validation, "edge id out of range");
            require(used.insert(e).second, ErrorKind::Validation, "paths are not edge-disjoint");
            const auto& ed = net.edge(static_cast<std::size_t>(e));
            require(ed.u == x || ed.v == x, ErrorKind::Validation, "path edges are not consecutive");
            x = net.other(static_cast<std::size_t>(e), x);
            r += 1.0 / ed.c;
        }
        require(x == v, ErrorKind::Validation, "path does not end at the sink");
        inv += 1.0 / r;
    }
    return 1.0 / inv;
}

ResistanceGradient log_resistance_gradient(const Field& h, double beta, int u, int v, double step)
{
    ResistanceGradient g;
    g.grad = Eigen::VectorXd::Zero(h.values().size());
    Field p = h;
    for (Eigen::Index x = 0; x < h.values().size(); ++x) {
        p[x] = h[x] + step;
        double up = std::log(effective_resistance(from_field(p, beta), u, v).R);
        p[x] = h[x] - step;
        double dn = std::log(effective_resistance(from_field(p, beta), u, v).R);
        p[x] = h[x];
        g.grad[x] = (up - dn) / (2.0 * step);
    }
    g.l1 = g.grad.cwiseAbs().sum();
    return g;
}

ResistanceGradient log_resistance_gradient_exact(const Field& h, double beta, int u, int v)
{
    Network net = from_field(h, beta);
    PotentialSolution s = unit_current(net, u, v);
    ResistanceGradient g;
    g.grad = Eigen::VectorXd::Zero(h.values().size());
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        double w = s.current[e] * s.current[e] / net.edge(e).c;
        g.grad[net.edge(e).u] += w;
        g.grad[net.edge(e).v] += w;
    }
    g.grad *= -beta / s.energy;
    g.l1 = g.grad.cwiseAbs().sum();
    return g;
}

} // namespace dgff
