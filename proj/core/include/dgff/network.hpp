#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgff/sampler.hpp"

namespace dgff {

struct Edge {
    int u = 0, v = 0;
    double c = 1.0;  // conductance; r = 1/c
};

// Undirected multigraph with positive conductances. Each vertex carries an
// external label that survives reductions.
class Network {
public:
    Network() = default;
    Network(std::size_t n, std::vector<Edge> edges, std::vector<std::int64_t> labels = {});

    std::size_t size() const { return labels_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    double resistance(std::size_t e) const { return 1.0 / edges_[e].c; }
    const std::vector<std::int64_t>& labels() const { return labels_; }
    std::int64_t label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
    int index_of(std::int64_t label) const;
    // Edge ids incident to i.
    const std::vector<int>& incident(int i) const { return incident_[static_cast<std::size_t>(i)]; }
    int degree(int i) const { return static_cast<int>(incident(i).size()); }
    int max_degree() const;
    int other(std::size_t e, int x) const { return edges_[e].u == x ? edges_[e].v : edges_[e].u; }
    bool connected() const;
    // π(x) = Σ_{e∋x} c_e.
    std::vector<double> vertex_weights() const;
    double conductance_between(int x, int y) const;

    // Same graph with r*_e = 1/r_e.
    Network reciprocal() const;
    // max r_e / r_e' over edges sharing exactly one endpoint.
    double rho_max() const;

private:
    std::vector<Edge> edges_;
    std::vector<std::int64_t> labels_;
    std::vector<std::vector<int>> incident_;
};

// Nearest-neighbour network on the field's domain, c(x,y) = e^{β(h_x+h_y)};
// vertex i carries label i.
Network from_field(const Field& h, double beta);
// Lines "u v c"; blank lines and '#' comments skipped. Labels are the integer ids.
Network read_network(std::istream& in);
Network read_network_file(const std::string& path);
void write_network(std::ostream& out, const Network& net);
// Whitespace separated labels, mapped to vertex indices.
std::vector<int> read_vertex_set(std::istream& in, const Network& net);

struct PotentialSolution {
    std::vector<double> f;        // potential per vertex
    std::vector<double> current;  // per edge, oriented edge.u → edge.v
    double value = 0.0;           // net current out of the source set
    double energy = 0.0;          // Σ c_e (∇f)² or Σ r_e i_e²
    double node_residual = 0.0;   // max Kirchhoff violation off terminals
};

struct Resistance {
    double R = 0.0, C = 0.0;
    PotentialSolution solution;
};

// f = 1 on A, 0 on B, harmonic elsewhere; C = E(f), R = 1/C.
Resistance effective_resistance(const Network& net, const std::vector<int>& A, const std::vector<int>& B);
Resistance effective_resistance(const Network& net, int u, int v);

// Unit current from u to v (grounded at v); energy is Thomson's Σ r i² = R.
PotentialSolution unit_current(const Network& net, int u, int v);

struct DualityCheck {
    double R = 0.0;  // flow side
    double C = 0.0;  // potential side
    double residual = 0.0;  // |R·C − 1|
};
DualityCheck duality_check(const Network& net, int u, int v);

// Reductions. Each throws PatternNotFound when the local pattern is absent.
Network reduce_series(const Network& net, int site);
Network reduce_parallel(const Network& net, int x, int y);
Network star_triangle(const Network& net, int site);
// New centre vertex gets label max(label)+1.
Network triangle_star(const Network& net, int a, int b, int c);
// Schur complement onto keep.
Network subnetwork_reduce(const Network& net, const std::vector<int>& keep);
// Merges the set into its first vertex; internal edges vanish.
Network short_vertices(const Network& net, const std::vector<int>& set);

struct DecompositionItem {
    std::vector<int> edges;        // path (in order) or cutset
    double alpha = 0.0;
    std::vector<double> split;     // r_{e,P} for paths, c_{e,π} for cutsets
};

struct FlowDecomposition {
    enum Kind { Paths, Cutsets } kind = Paths;
    std::vector<DecompositionItem> items;
    double alpha_sum() const;
    // [Σ_k (Σ_e split)^{-1}]^{-1}: R_eff for paths, C_eff for cutsets.
    double reconstruction() const;
    // Largest violation of the per-edge budget (Σ_k α_k ≤ |i*(e)| or
    // Σ_k 1/split ≤ 1/r_e resp. 1/c_e); ≤ 0 when satisfied.
    double budget_violation(const Network& net) const;
};

// Greedy widest-path peeling of the unit u→v current.
FlowDecomposition path_decompose(const Network& net, int u, int v);
// Level-set peeling of the C_eff minimiser.
FlowDecomposition cut_decompose(const Network& net, int u, int v);

bool separates(const Network& net, const std::vector<int>& cut_edges, const std::vector<int>& A,
               const std::vector<int>& B);
// [Σ_π 1/Σ_{e∈π} c_e]^{-1} ≥ C_eff; cutsets must be edge-disjoint and separating.
double nash_williams(const Network& net, const std::vector<std::vector<int>>& cutsets,
                     const std::vector<int>& A, const std::vector<int>& B);
// [Σ_P 1/Σ_{e∈P} r_e]^{-1} ≥ R_eff; paths are edge lists, edge-disjoint, u to v.
double path_bound(const Network& net, const std::vector<std::vector<int>>& paths, int u, int v);

struct ResistanceGradient {
    Eigen::VectorXd grad;  // ∂ log R_eff / ∂h_x
    double l1 = 0.0;
};
// Central finite differences with the given step.
ResistanceGradient log_resistance_gradient(const Field& h, double beta, int u, int v, double step = 1e-5);
// −(β/R) Σ_{e∋x} r_e i_e² for the unit current.
ResistanceGradient log_resistance_gradient_exact(const Field& h, double beta, int u, int v);

} // namespace dgff
