#include "vna/json_io.hpp"

#include "vna/classify.hpp"
#include "vna/error.hpp"

#include <fstream>
#include <sstream>

namespace vna {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string str(const Json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  fail(std::string(what) + " must be a string");
}

Rational rat(const Json& j) { return parse_rational(str(j, "rational")); }

Json rats(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

std::vector<Rational> rats_from(const Json& j) {
  if (!j.is_array()) fail("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rat(x));
  return out;
}

std::string optional_label(const Json& j) {
  return j.contains("label") ? str(j.at("label"), "label") : std::string();
}

void put_label(Json& j, const std::string& label) {
  if (!label.empty()) j["label"] = label;
}

Json to_json(const ProjectionRef& r) {
  Json j;
  j["ref"] = r.key();
  put_label(j, r.label);
  return j;
}

ProjectionRef ref_from_json(const Json& j) {
  const std::string key = str(field(j, "ref"), "ref");
  if (key.size() < 2 || (key[0] != 'a' && key[0] != 'b')) fail("bad projection ref " + key);
  ProjectionRef r;
  r.side = key[0] == 'a' ? Side::A : Side::B;
  try {
    std::size_t pos = 0;
    r.summand = std::stoul(key.substr(1), &pos);
    if (pos != key.size() - 1) fail("bad projection ref " + key);
  } catch (const std::logic_error&) {
    fail("bad projection ref " + key);
  }
  r.label = optional_label(j);
  return r;
}

Json type_i_json(const std::variant<MatrixBlock, TypeIInfinite>& t) {
  return std::visit([](const auto& x) { return to_json(Summand(x)); }, t);
}

Json diffuse_param_json(const std::variant<FreeGroupParam, RatioGroup>& d) {
  Json j;
  if (const auto* t = std::get_if<FreeGroupParam>(&d)) {
    j["kind"] = "free_group";
    j["t"] = to_string(*t);
  } else {
    j["kind"] = "araki_woods";
    j["generators"] = to_json(std::get<RatioGroup>(d));
  }
  return j;
}

Json diffuse_json(const DiffusePiece& d, const std::string& type) {
  Json j;
  if (const auto* aw = std::get_if<ArakiWoodsPiece>(&d.factor)) {
    j["kind"] = "araki_woods";
    j["generators"] = to_json(aw->group);
  } else {
    j["kind"] = "free_group";
    j["t"] = to_string(std::get<FreeGroupPiece>(d.factor).t);
  }
  j["mass"] = to_string(d.mass);
  j["type"] = type;
  return j;
}

DiffusePiece diffuse_from_json(const Json& j) {
  const std::string kind = str(field(j, "kind"), "kind");
  const Rational m = rat(field(j, "mass"));
  if (kind == "araki_woods") {
    return DiffusePiece{ArakiWoodsPiece{group_from_json(field(j, "generators"))}, m};
  }
  if (kind == "free_group") {
    return DiffusePiece{FreeGroupPiece{parse_free_group_param(str(field(j, "t"), "t"))}, m};
  }
  fail("unknown diffuse kind " + kind);
}

}  // namespace

Json to_json(const RatioGroup& g) {
  Json out = Json::array();
  for (const auto& s : generator_strings(g)) out.push_back(s);
  return out;
}

RatioGroup group_from_json(const Json& j) {
  if (!j.is_array()) fail("generators must be an array");
  std::vector<PosRat> gens;
  for (const auto& x : j) {
    const Rational r = rat(x);
    if (r <= 0) fail("group generator must be positive: " + to_string(r));
    gens.emplace_back(r);
  }
  return group_generate(gens);
}

Json to_json(const Summand& s) {
  Json j;
  j["kind"] = kind_name(s);
  put_label(j, label(s));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatrixBlock>) {
          j["weights"] = rats(x.weights);
        } else if constexpr (std::is_same_v<T, TypeIInfinite>) {
          j["head"] = rats(x.head);
          j["ratio"] = to_string(x.ratio);
          j["tail_start"] = to_string(x.tail_start);
        } else if constexpr (std::is_same_v<T, FreeGroupFactor>) {
          j["t"] = to_string(x.t);
          j["mass"] = to_string(x.mass);
        } else if constexpr (std::is_same_v<T, ArakiWoods>) {
          j["generators"] = to_json(x.group);
          j["mass"] = to_string(x.mass);
        } else if constexpr (std::is_same_v<T, HyperfiniteTensor>) {
          Json fs = Json::array();
          for (const auto& f : x.factors) {
            Json fj;
            fj["weights"] = rats(f.profile);
            if (f.multiplicity) {
              fj["multiplicity"] = *f.multiplicity;
            } else {
              fj["multiplicity"] = "inf";
            }
            fs.push_back(fj);
          }
          j["factors"] = fs;
          j["mass"] = to_string(x.mass);
        } else {
          j["type_i"] = type_i_json(x.type_i);
          j["diffuse"] = diffuse_param_json(x.diffuse);
          j["mass"] = to_string(x.mass);
        }
      },
      s);
  return j;
}

Summand summand_from_json(const Json& j) {
  const std::string kind = str(field(j, "kind"), "kind");
  const std::string lbl = optional_label(j);
  if (kind == "matrix") return MatrixBlock{rats_from(field(j, "weights")), lbl};
  if (kind == "atom") return MatrixBlock{{rat(field(j, "mass"))}, lbl};
  if (kind == "typeI_inf") {
    return TypeIInfinite{rats_from(field(j, "head")), rat(field(j, "ratio")),
                         rat(field(j, "tail_start")), lbl};
  }
  if (kind == "free_group") {
    return FreeGroupFactor{parse_free_group_param(str(field(j, "t"), "t")),
                           rat(field(j, "mass")), lbl};
  }
  if (kind == "araki_woods") {
    return ArakiWoods{group_from_json(field(j, "generators")), rat(field(j, "mass")), lbl};
  }
  if (kind == "hyperfinite_tensor") {
    HyperfiniteTensor h{{}, rat(field(j, "mass")), lbl};
    const Json& fs = field(j, "factors");
    if (!fs.is_array()) fail("factors must be an array");
    for (const auto& f : fs) {
      TensorFactor tf{rats_from(field(f, "weights")), std::nullopt};
      const Json& m = field(f, "multiplicity");
      if (m.is_number_unsigned()) {
        tf.multiplicity = m.get<std::uint64_t>();
      } else if (!(m.is_string() && (m == "inf" || m == "∞"))) {
        fail("multiplicity must be a positive integer or \"inf\"");
      }
      h.factors.push_back(std::move(tf));
    }
    return h;
  }
  if (kind == "tensor") {
    TensorSummand t;
    t.label = lbl;
    t.mass = rat(field(j, "mass"));
    Summand ti = summand_from_json(field(j, "type_i"));
    if (auto* m = std::get_if<MatrixBlock>(&ti)) {
      t.type_i = *m;
    } else if (auto* b = std::get_if<TypeIInfinite>(&ti)) {
      t.type_i = *b;
    } else {
      fail("tensor type_i must be matrix or typeI_inf");
    }
    const Json& d = field(j, "diffuse");
    const std::string dk = str(field(d, "kind"), "kind");
    if (dk == "free_group") {
      t.diffuse = parse_free_group_param(str(field(d, "t"), "t"));
    } else if (dk == "araki_woods") {
      t.diffuse = group_from_json(field(d, "generators"));
    } else {
      fail("unknown tensor diffuse kind " + dk);
    }
    return t;
  }
  fail("unknown summand kind " + kind);
}

Json to_json(const Algebra& a) {
  Json j;
  j["label"] = a.label;
  Json ss = Json::array();
  for (const auto& s : a.summands) ss.push_back(to_json(s));
  j["summands"] = ss;
  return j;
}

Algebra algebra_from_json(const Json& j) {
  Algebra a;
  a.label = optional_label(j);
  const Json& ss = field(j, "summands");
  if (!ss.is_array()) fail("summands must be an array");
  for (const auto& s : ss) a.summands.push_back(summand_from_json(s));
  return a;
}

Json to_json(const Classification& c) {
  Json j;
  if (c.diffuse) {
    j["diffuse"] = diffuse_json(*c.diffuse, connes_type(c));
  } else {
    j["diffuse"] = nullptr;
  }
  Json rs = Json::array();
  for (const auto& r : c.residuals) {
    Json rj;
    rj["weights"] = rats(r.weights);
    Json p;
    p["atom"] = to_json(r.provenance.atom);
    p["block"] = to_json(r.provenance.block);
    p["dominated_by"] = r.provenance.dominated_by(r.weights.size());
    rj["provenance"] = p;
    rs.push_back(rj);
  }
  j["residuals"] = rs;
  if (!c.passthrough.empty()) {
    Json ps = Json::array();
    for (const auto& s : c.passthrough) ps.push_back(to_json(s));
    j["passthrough"] = ps;
  }
  j["total_mass"] = to_string(c.total_mass);
  return j;
}

Classification classification_from_json(const Json& j) {
  Classification c;
  const Json& d = field(j, "diffuse");
  if (!d.is_null()) c.diffuse = diffuse_from_json(d);
  const Json& rs = field(j, "residuals");
  if (!rs.is_array()) fail("residuals must be an array");
  for (const auto& r : rs) {
    const Json& p = field(r, "provenance");
    c.residuals.push_back(ResidualBlock{
        rats_from(field(r, "weights")),
        Provenance{ref_from_json(field(p, "atom")), ref_from_json(field(p, "block"))}});
  }
  if (j.contains("passthrough")) {
    for (const auto& s : j.at("passthrough")) c.passthrough.push_back(summand_from_json(s));
  }
  c.total_mass = rat(field(j, "total_mass"));
  return c;
}

Json to_json(const DerivationTrace& t) {
  Json j;
  j["inputs"] = {{"a", to_json(t.a)}, {"b", to_json(t.b)}};
  Json order = Json::array();
  for (const auto& r : t.order) order.push_back(to_json(r));
  j["order"] = order;
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json sj;
    sj["rule"] = s.rule;
    sj["cite"] = s.cite;
    sj["expanded"] = s.expanded ? to_json(*s.expanded) : Json(nullptr);
    sj["replacement"] = s.replacement ? to_json(*s.replacement) : Json(nullptr);
    sj["corner"] = to_json(s.corner);
    sj["corner_result"] = to_json(s.corner_result);
    sj["result"] = to_json(s.result);
    sj["central_support"] = s.full_central_support;
    steps.push_back(sj);
  }
  j["steps"] = steps;
  j["final"] = to_json(t.final);
  return j;
}

DerivationTrace trace_from_json(const Json& j) {
  DerivationTrace t;
  const Json& in = field(j, "inputs");
  t.a = algebra_from_json(field(in, "a"));
  t.b = algebra_from_json(field(in, "b"));
  for (const auto& r : field(j, "order")) t.order.push_back(ref_from_json(r));
  for (const auto& sj : field(j, "steps")) {
    DerivationStep s;
    s.rule = str(field(sj, "rule"), "rule");
    s.cite = str(field(sj, "cite"), "cite");
    if (!field(sj, "expanded").is_null()) s.expanded = ref_from_json(sj.at("expanded"));
    if (!field(sj, "replacement").is_null()) {
      s.replacement = summand_from_json(sj.at("replacement"));
    }
    s.corner = algebra_from_json(field(sj, "corner"));
    s.corner_result = classification_from_json(field(sj, "corner_result"));
    s.result = classification_from_json(field(sj, "result"));
    const Json& cs = field(sj, "central_support");
    if (!cs.is_boolean()) fail("central_support must be a boolean");
    s.full_central_support = cs.get<bool>();
    t.steps.push_back(std::move(s));
  }
  t.final = classification_from_json(field(j, "final"));
  return t;
}

Json to_json(const WeightedGraph& g) {
  Json j;
  j["vertices"] = g.vertices;
  Json es = Json::array();
  for (const auto& e : g.edges) {
    es.push_back({{"id", e.id},
                  {"src", e.src},
                  {"dst", e.dst},
                  {"mu", to_string(e.mu)},
                  {"op", e.op}});
  }
  j["edges"] = es;
  return j;
}

WeightedGraph graph_from_json(const Json& j) {
  WeightedGraph g;
  const Json& vs = field(j, "vertices");
  if (!vs.is_array()) fail("vertices must be an array");
  for (const auto& v : vs) g.vertices.push_back(str(v, "vertex id"));
  const Json& es = field(j, "edges");
  if (!es.is_array()) fail("edges must be an array");
  for (const auto& e : es) {
    const Rational mu = rat(field(e, "mu"));
    if (mu <= 0) {
      throw Error(ErrorCode::InvalidGraph, "edge weight must be positive: " + to_string(mu));
    }
    g.edges.push_back(GraphEdge{str(field(e, "id"), "edge id"), str(field(e, "src"), "src"),
                                str(field(e, "dst"), "dst"), str(field(e, "op"), "op"),
                                PosRat(mu)});
  }
  return g;
}

Json to_json(const WeightedGraph& g, const GraphClassification& c) {
  Classification as_cls;
  as_cls.diffuse = DiffusePiece{ArakiWoodsPiece{c.loop_group}, c.diffuse_mass};
  Json j;
  j["root"] = c.root;
  j["root_mass"] = to_string(c.root_mass);
  j["diffuse"] = diffuse_json(*as_cls.diffuse, connes_type(as_cls));
  Json rs = Json::array();
  Json atoms = Json::object();
  Json pots = Json::object();
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    pots[g.vertices[v]] = to_string(c.potentials[v]);
    if (c.atoms[v]) {
      atoms[g.vertices[v]] = to_string(*c.atoms[v]);
      rs.push_back({{"weights", Json::array({to_string(*c.atoms[v])})},
                    {"vertex", g.vertices[v]}});
    } else {
      atoms[g.vertices[v]] = nullptr;
    }
  }
  j["residuals"] = rs;
  j["total_mass"] = to_string(c.total_mass());
  j["loop_group"] = to_json(c.loop_group);
  j["trace_subgraph"] = c.trace_subgraph;
  j["potentials"] = pots;
  j["atoms"] = atoms;
  Json eig = Json::object();
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    eig[g.edges[i].id] = to_string(c.eigenvalues[i]);
  }
  j["eigenvalues"] = eig;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(path + ": " + e.what());
  }
}

}  // namespace vna
