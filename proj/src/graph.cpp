#include "vna/graph.hpp"

#include "vna/error.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>

namespace vna {

namespace {

using Index = std::unordered_map<std::string, std::size_t>;

Index index_of(const std::vector<std::string>& ids) {
  Index out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], i);
  return out;
}

Index edge_index(const WeightedGraph& g) {
  Index out;
  for (std::size_t i = 0; i < g.edges.size(); ++i) out.emplace(g.edges[i].id, i);
  return out;
}

void require_valid_graph(const WeightedGraph& g) {
  const auto v = validate_graph(g);
  if (v.empty()) return;
  std::string msg = "invalid graph:";
  for (const auto& x : v) msg += "\n  " + x.path + ": " + x.message;
  throw Error(ErrorCode::InvalidGraph, msg);
}

}  // namespace

bool natural_less(const std::string& x, const std::string& y) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() && j < y.size()) {
    const bool dx = std::isdigit(static_cast<unsigned char>(x[i])) != 0;
    const bool dy = std::isdigit(static_cast<unsigned char>(y[j])) != 0;
    if (dx && dy) {
      std::size_t ei = i;
      std::size_t ej = j;
      while (ei < x.size() && std::isdigit(static_cast<unsigned char>(x[ei]))) ++ei;
      while (ej < y.size() && std::isdigit(static_cast<unsigned char>(y[ej]))) ++ej;
      std::string_view nx(x.data() + i, ei - i);
      std::string_view ny(y.data() + j, ej - j);
      while (nx.size() > 1 && nx.front() == '0') nx.remove_prefix(1);
      while (ny.size() > 1 && ny.front() == '0') ny.remove_prefix(1);
      if (nx.size() != ny.size()) return nx.size() < ny.size();
      if (nx != ny) return nx < ny;
      i = ei;
      j = ej;
      continue;
    }
    if (x[i] != y[j]) return x[i] < y[j];
    ++i;
    ++j;
  }
  if ((x.size() - i) != (y.size() - j)) return x.size() - i < y.size() - j;
  return x < y;
}

std::vector<Violation> validate_graph(const WeightedGraph& g) {
  std::vector<Violation> out;
  if (g.vertices.empty()) out.push_back({"vertices", "graph has no vertices"});
  const Index vid = index_of(g.vertices);
  if (vid.size() != g.vertices.size()) out.push_back({"vertices", "duplicate vertex id"});
  const Index eid = edge_index(g);
  if (eid.size() != g.edges.size()) out.push_back({"edges", "duplicate edge id"});

  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const GraphEdge& e = g.edges[i];
    const std::string path = "edges[" + std::to_string(i) + "]";
    if (!vid.contains(e.src)) out.push_back({path + ".src", "unknown vertex " + e.src});
    if (!vid.contains(e.dst)) out.push_back({path + ".dst", "unknown vertex " + e.dst});
    auto op = eid.find(e.op);
    if (op == eid.end()) {
      out.push_back({path + ".op", "unknown opposite edge " + e.op});
      continue;
    }
    const GraphEdge& f = g.edges[op->second];
    if (f.op != e.id) out.push_back({path + ".op", "op is not an involution"});
    if (f.src != e.dst || f.dst != e.src) {
      out.push_back({path + ".op", "opposite edge must reverse source and target"});
    }
    if (e.mu * f.mu != PosRat(1)) {
      out.push_back({path + ".mu", "mu(e) mu(e^op) must equal 1"});
    }
  }

  if (!g.vertices.empty() && vid.size() == g.vertices.size()) {
    std::vector<std::vector<std::size_t>> adj(g.vertices.size());
    for (const auto& e : g.edges) {
      auto s = vid.find(e.src);
      auto t = vid.find(e.dst);
      if (s == vid.end() || t == vid.end()) continue;
      adj[s->second].push_back(t->second);
      adj[t->second].push_back(s->second);
    }
    std::vector<bool> seen(g.vertices.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (const auto w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      out.push_back({"vertices", "graph is not connected"});
    }
  }
  return out;
}

TraceSubgraph trace_subgraph(const WeightedGraph& g, const std::string& root,
                             const PosRat& root_mass) {
  require_valid_graph(g);
  const Index vid = index_of(g.vertices);
  auto r = vid.find(root);
  if (r == vid.end()) throw Error(ErrorCode::InvalidGraph, "unknown root vertex " + root);

  std::vector<std::size_t> by_id(g.edges.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t x, std::size_t y) {
    return natural_less(g.edges[x].id, g.edges[y].id);
  });
  std::vector<std::vector<std::size_t>> out_edges(g.vertices.size());
  for (const auto i : by_id) out_edges[vid.at(g.edges[i].src)].push_back(i);

  TraceSubgraph t;
  t.potentials.assign(g.vertices.size(), PosRat(1));
  std::vector<bool> seen(g.vertices.size(), false);
  std::deque<std::size_t> queue{r->second};
  seen[r->second] = true;
  t.potentials[r->second] = root_mass;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (const auto i : out_edges[v]) {
      const std::size_t w = vid.at(g.edges[i].dst);
      if (seen[w]) continue;
      seen[w] = true;
      t.potentials[w] = t.potentials[v] * g.edges[i].mu;
      queue.push_back(w);
    }
  }
  t.in_trace.resize(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const GraphEdge& e = g.edges[i];
    t.in_trace[i] =
        e.mu * t.potentials[vid.at(e.src)] == t.potentials[vid.at(e.dst)];
  }
  return t;
}

PosRat edge_eigenvalue(const WeightedGraph& g, const std::vector<PosRat>& potentials,
                       const std::string& edge_id) {
  auto it = std::find_if(g.edges.begin(), g.edges.end(),
                         [&](const GraphEdge& e) { return e.id == edge_id; });
  if (it == g.edges.end()) throw Error(ErrorCode::UnknownEdge, "no edge " + edge_id);
  const Index vid = index_of(g.vertices);
  return it->mu * potentials.at(vid.at(it->src)) / potentials.at(vid.at(it->dst));
}

RatioGroup loop_group(const WeightedGraph& g, const std::vector<PosRat>& potentials) {
  // Tree edges contribute 1; every other edge is one cycle-basis generator.
  const Index vid = index_of(g.vertices);
  std::vector<PosRat> gens;
  for (const auto& e : g.edges) {
    gens.push_back(e.mu * potentials.at(vid.at(e.src)) / potentials.at(vid.at(e.dst)));
  }
  return group_generate(gens);
}

Rational GraphClassification::atom_mass() const {
  Rational total = 0;
  for (const auto& a : atoms) {
    if (a) total += a->value();
  }
  return total;
}

Rational GraphClassification::total_mass() const {
  Rational total = 0;
  for (const auto& p : potentials) total += p.value();
  return total;
}

GraphClassification classify_graph(const WeightedGraph& g, std::optional<std::string> root,
                                   const PosRat& root_mass) {
  require_valid_graph(g);
  if (!root) root = *std::min_element(g.vertices.begin(), g.vertices.end(), natural_less);
  const TraceSubgraph t = trace_subgraph(g, *root, root_mass);

  GraphClassification c;
  c.root = *root;
  c.root_mass = root_mass;
  c.potentials = t.potentials;
  c.loop_group = loop_group(g, t.potentials);
  if (c.loop_group.trivial()) {
    throw Error(ErrorCode::TrivialLoopGroup,
                "every loop has weight 1; the tracial graph algebra is out of scope");
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (t.in_trace[i]) c.trace_subgraph.push_back(g.edges[i].id);
    c.eigenvalues.push_back(edge_eigenvalue(g, t.potentials, g.edges[i].id));
  }
  const Index vid = index_of(g.vertices);
  std::vector<Rational> out_weight(g.vertices.size(), Rational(0));
  for (const auto& e : g.edges) out_weight[vid.at(e.src)] += e.mu.value();
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (out_weight[v] < 1) {
      c.atoms.emplace_back(PosRat(t.potentials[v].value() * (1 - out_weight[v])));
    } else {
      c.atoms.emplace_back(std::nullopt);
    }
  }
  c.diffuse_mass = c.total_mass() - c.atom_mass();
  return c;
}

}  // namespace vna
