#pragma once

// Free graph von Neumann algebras M(Γ, μ): a connected directed graph with an
// edge involution e -> e^op and weights μ(e) μ(e^op) = 1.

#include "vna/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vna {

struct GraphEdge {
  std::string id;
  std::string src;
  std::string dst;
  std::string op;
  PosRat mu;
};

struct WeightedGraph {
  std::vector<std::string> vertices;
  std::vector<GraphEdge> edges;
};

/// Empty when the graph satisfies the involution, reciprocity and
/// connectivity invariants.
std::vector<Violation> validate_graph(const WeightedGraph& g);

/// Orders ids with digit runs compared numerically ("e2" < "e10").
bool natural_less(const std::string& x, const std::string& y);

struct TraceSubgraph {
  std::vector<bool> in_trace;       // per edge, indexed like g.edges
  std::vector<PosRat> potentials;  // per vertex, indexed like g.vertices
};

/// BFS spanning tree from `root`, lowest edge id first; potentials propagate
/// along tree edges and Γ_Tr is every edge with eigenvalue 1.
TraceSubgraph trace_subgraph(const WeightedGraph& g, const std::string& root,
                             const PosRat& root_mass);

/// μ(e) φ(p_s(e)) / φ(p_t(e)).
PosRat edge_eigenvalue(const WeightedGraph& g, const std::vector<PosRat>& potentials,
                       const std::string& edge_id);

RatioGroup loop_group(const WeightedGraph& g, const std::vector<PosRat>& potentials);

struct GraphClassification {
  std::string root;
  PosRat root_mass;
  std::vector<std::string> trace_subgraph;  // edge ids in Γ_Tr
  std::vector<PosRat> potentials;           // per vertex
  RatioGroup loop_group;
  std::vector<std::optional<PosRat>> atoms;  // per vertex
  Rational diffuse_mass;
  std::vector<PosRat> eigenvalues;  // per edge

  Rational atom_mass() const;
  Rational total_mass() const;
};

/// Root defaults to the lowest-labeled vertex. Throws InvalidGraph or
/// TrivialLoopGroup.
GraphClassification classify_graph(const WeightedGraph& g,
                                   std::optional<std::string> root = std::nullopt,
                                   const PosRat& root_mass = PosRat(1));

}  // namespace vna
