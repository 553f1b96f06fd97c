#include "vna/derive.hpp"

#include "vna/classify.hpp"
#include "vna/error.hpp"

#include <algorithm>
#include <random>

namespace vna {

namespace {

constexpr const char* kScalarCite = "scalar identity: C * X = X";

Algebra center(const Algebra& a) {
  Algebra z{a.label, {}};
  for (const auto& s : a.summands) z.summands.push_back(atom(mass(s), label(s)));
  return z;
}

DiffusePiece diffuse_for(const RatioGroup& g, const Rational& m) {
  if (g.trivial()) return DiffusePiece{FreeGroupPiece{FreeGroupParam::unknown()}, m};
  return DiffusePiece{ArakiWoodsPiece{g}, m};
}

Summand as_summand(const DiffusePiece& d, std::string lbl) {
  if (const auto* aw = std::get_if<ArakiWoodsPiece>(&d.factor)) {
    return ArakiWoods{aw->group, d.mass, std::move(lbl)};
  }
  return FreeGroupFactor{std::get<FreeGroupPiece>(d.factor).t, d.mass, std::move(lbl)};
}

void require_unit_mass(const Rational& m, const char* what) {
  if (m != 1) {
    throw Error(ErrorCode::MassMismatch,
                std::string(what) + " must have mass 1, got " + to_string(m));
  }
}

struct Shape {
  std::vector<std::size_t> atoms;
  std::size_t blocks = 0;
  std::size_t diffuse = 0;
};

Shape shape_of(const Algebra& mixed) {
  Shape sh;
  for (std::size_t j = 0; j < mixed.summands.size(); ++j) {
    const Summand& s = mixed.summands[j];
    if (is_atom(s)) {
      sh.atoms.push_back(j);
    } else if (std::holds_alternative<MatrixBlock>(s)) {
      ++sh.blocks;
    } else if (std::holds_alternative<ArakiWoods>(s) ||
               std::holds_alternative<FreeGroupFactor>(s)) {
      ++sh.diffuse;
    } else {
      throw Error(ErrorCode::NoMatchingRule,
                  "no base rule for a type I factor against a " + kind_name(s) +
                      " summand");
    }
  }
  if (sh.diffuse > 1) {
    throw Error(ErrorCode::NoMatchingRule,
                "no base rule for a corner with several diffuse summands");
  }
  return sh;
}

// Rule id and citation for M_k against an algebra of the given shape.
std::pair<std::string, std::string> matrix_rule_name(std::size_t k, const Shape& sh) {
  const std::size_t n_atoms = sh.atoms.size();
  if (n_atoms == 0 && sh.diffuse == 0 && sh.blocks == 1) {
    return {"matrix_vs_matrix", "matrix * matrix"};
  }
  if (n_atoms == 0 && sh.blocks == 0) {
    return {"matrix_vs_diffuse", "type I factor * diffuse factor"};
  }
  if (sh.blocks == 0 && sh.diffuse == 0) {
    if (n_atoms == 2 && k == 2) return {"m2_vs_two_atoms", "M_2 * [C ⊕ C]"};
    if (n_atoms == 2) return {"matrix_vs_two_atoms", "M_n * [C ⊕ C] induction"};
    return {"matrix_vs_atoms", "matrix * abelian"};
  }
  if (n_atoms == 1 && sh.blocks == 0) {
    return {"matrix_vs_atom_diffuse", "matrix * [C ⊕ diffuse]"};
  }
  if (n_atoms == 0 && sh.diffuse == 1) {
    return {"matrix_vs_blocks_diffuse", "matrix * [blocks ⊕ diffuse]"};
  }
  return {"matrix_vs_mixed", "matrix * finite-dimensional ⊕ diffuse"};
}

void order_atom_pair(Provenance& p) {
  if (p.atom.side == Side::B && p.block.side == Side::A) std::swap(p.atom, p.block);
}

}  // namespace

RuleResult rule_abelian_abelian(const Algebra& a, const Algebra& b) {
  for (const Algebra* x : {&a, &b}) {
    if (x->summands.size() < 2) {
      throw Error(ErrorCode::NoMatchingRule,
                  "abelian * abelian needs two centers of dimension >= 2");
    }
    for (const auto& s : x->summands) {
      if (!is_atom(s)) {
        throw Error(ErrorCode::NoMatchingRule, "abelian * abelian needs atoms only");
      }
    }
    require_unit_mass(x->total_mass(), "abelian operand");
  }
  RuleResult out{{}, "abelian_vs_abelian", "abelian * abelian"};
  Classification& c = out.result;
  c.total_mass = 1;
  for (std::size_t i = 0; i < a.summands.size(); ++i) {
    const Rational alpha = mass(a.summands[i]);
    for (std::size_t j = 0; j < b.summands.size(); ++j) {
      const Rational w = alpha + mass(b.summands[j]) - 1;
      if (w <= 0) continue;
      c.residuals.push_back(ResidualBlock{
          {w},
          Provenance{ProjectionRef{Side::A, i, label(a.summands[i])},
                     ProjectionRef{Side::B, j, label(b.summands[j])}}});
    }
  }
  const Rational d = 1 - c.residual_mass();
  if (d <= 0) {
    throw Error(ErrorCode::DiffuseMassNonPositive,
                "abelian * abelian leaves diffuse mass " + to_string(d));
  }
  c.diffuse = DiffusePiece{FreeGroupPiece{FreeGroupParam::unknown()}, d};
  canonicalize(c);
  return out;
}

RuleResult rule_matrix_vs_mixed(const Summand& block, const Algebra& mixed) {
  require_unit_mass(mass(block), "type I operand");
  require_unit_mass(mixed.total_mass(), "corner");
  const ProjectionRef block_ref{Side::A, 0, label(block)};
  const RatioGroup group = group_join(point_spectrum(block), point_spectrum(mixed));

  if (std::holds_alternative<TypeIInfinite>(block)) {
    RuleResult out{{}, "typeI_inf_vs_any", "type I factor * algebra"};
    out.result.total_mass = 1;
    out.result.diffuse = diffuse_for(group, 1);
    return out;
  }
  const auto* m = std::get_if<MatrixBlock>(&block);
  if (m == nullptr) {
    throw Error(ErrorCode::NoMatchingRule, "type I rule applied to " + kind_name(block));
  }
  if (m->size() == 1) {
    return {scalar_product(mixed, Side::A, m->label), "scalar", kScalarCite};
  }
  if (mixed.summands.size() == 1 && is_atom(mixed.summands.front())) {
    RuleResult out{{}, "scalar", kScalarCite};
    out.result.total_mass = 1;
    out.result.residuals.push_back(ResidualBlock{
        m->weights,
        Provenance{ProjectionRef{Side::B, 0, label(mixed.summands.front())}, block_ref}});
    return out;
  }

  const Shape sh = shape_of(mixed);
  auto [rule, cite] = matrix_rule_name(m->size(), sh);
  RuleResult out{{}, rule, cite};
  Classification& c = out.result;
  c.total_mass = 1;
  for (const auto j : sh.atoms) {
    const Rational gamma = residual_gamma(mass(mixed.summands[j]), m->weights);
    if (gamma >= 1) continue;
    ResidualBlock r;
    for (const auto& w : m->weights) r.weights.push_back(w * (1 - gamma));
    r.provenance = Provenance{ProjectionRef{Side::B, j, label(mixed.summands[j])}, block_ref};
    c.residuals.push_back(std::move(r));
  }
  const Rational d = 1 - c.residual_mass();
  if (d <= 0) {
    throw Error(ErrorCode::DiffuseMassNonPositive,
                "corner rule leaves diffuse mass " + to_string(d));
  }
  c.diffuse = diffuse_for(group, d);
  canonicalize(c);
  return out;
}

RuleResult rule_diffuse_vs_mixed(const Summand& diffuse, const Algebra& mixed) {
  require_unit_mass(mass(diffuse), "diffuse operand");
  require_unit_mass(mixed.total_mass(), "corner");
  if (!is_diffuse(diffuse)) {
    throw Error(ErrorCode::NoMatchingRule, "diffuse rule applied to " + kind_name(diffuse));
  }
  if (mixed.summands.size() == 1 && is_atom(mixed.summands.front())) {
    return {scalar_product(Algebra{{}, {diffuse}}, Side::B,
                           label(mixed.summands.front())),
            "scalar", kScalarCite};
  }
  RuleResult out{{}, "diffuse_absorption", "free absorption"};
  out.result.total_mass = 1;
  out.result.diffuse =
      diffuse_for(group_join(point_spectrum(diffuse), point_spectrum(mixed)), 1);
  return out;
}

ChainState expand_atom(const ChainState& state, const ProjectionRef& atom_ref,
                       const Summand& replacement, DerivationStep* step) {
  auto entry = std::find_if(state.projections.begin(), state.projections.end(),
                            [&](const CentralProjection& p) { return p.ref == atom_ref; });
  if (entry == state.projections.end()) {
    throw Error(ErrorCode::UnknownAtom, "no central atom " + atom_ref.key());
  }
  if (entry->expanded) {
    throw Error(ErrorCode::UnknownAtom, "central atom " + atom_ref.key() +
                                            " was already expanded");
  }
  const Rational alpha = entry->mass;
  if (mass(replacement) != alpha) {
    throw Error(ErrorCode::MassMismatch,
                "replacement for " + atom_ref.key() + " has mass " +
                    to_string(mass(replacement)) + ", expected " + to_string(alpha));
  }
  const Classification& cur = state.current;

  // Corner at p: residuals under p plus the diffuse share d.
  std::vector<std::size_t> touching;
  std::vector<std::size_t> untouched;
  for (std::size_t i = 0; i < cur.residuals.size(); ++i) {
    const Provenance& pv = cur.residuals[i].provenance;
    (pv.atom == atom_ref || pv.block == atom_ref ? touching : untouched).push_back(i);
  }
  Rational under = 0;
  for (const auto i : touching) under += cur.residuals[i].mass();
  const Rational d = alpha - under;
  if (d < 0 || (d > 0 && cur.diffuse_mass() < d)) {
    throw Error(ErrorCode::DiffuseMassNonPositive,
                "corner at " + atom_ref.key() + " has diffuse share " + to_string(d));
  }

  Algebra corner{"corner:" + atom_ref.key(), {}};
  std::vector<std::size_t> origin;  // corner summand -> residual index
  if (d > 0) {
    DiffusePiece share = *cur.diffuse;
    share.mass = d / alpha;
    corner.summands.push_back(as_summand(share, "diffuse"));
    origin.push_back(cur.residuals.size());
  }
  for (const auto i : touching) {
    MatrixBlock blk{cur.residuals[i].weights, std::to_string(i)};
    for (auto& w : blk.weights) w /= alpha;
    corner.summands.push_back(std::move(blk));
    origin.push_back(i);
  }
  const Summand repl = rescale(replacement, 1 / alpha);

  RuleResult rr = std::holds_alternative<MatrixBlock>(repl) ||
                          std::holds_alternative<TypeIInfinite>(repl)
                      ? rule_matrix_vs_mixed(repl, corner)
                      : rule_diffuse_vs_mixed(repl, corner);
  if (!rr.result.passthrough.empty()) {
    throw Error(ErrorCode::NoMatchingRule,
                "corner at " + atom_ref.key() + " does not reduce to T_H ⊕ C");
  }

  ChainState next = state;
  next.projections[static_cast<std::size_t>(entry - state.projections.begin())].expanded =
      true;
  Classification& out = next.current;
  out.residuals.clear();
  for (const auto i : untouched) out.residuals.push_back(cur.residuals[i]);
  for (const auto& r : rr.result.residuals) {
    const std::size_t src = origin.at(r.provenance.atom.summand);
    if (src >= cur.residuals.size()) {
      throw Error(ErrorCode::NoMatchingRule, "corner residual sits under a diffuse piece");
    }
    const Provenance& old = cur.residuals[src].provenance;
    ResidualBlock nr{r.weights, Provenance{old.atom == atom_ref ? old.block : old.atom,
                                           atom_ref}};
    for (auto& w : nr.weights) w *= alpha;
    if (nr.weights.size() == 1) order_atom_pair(nr.provenance);
    out.residuals.push_back(std::move(nr));
  }

  const Rational kept = cur.diffuse_mass() - d;
  if (rr.result.diffuse) {
    if (d == 0 && cur.diffuse) {
      throw Error(ErrorCode::NoMatchingRule,
                  "corner at " + atom_ref.key() + " is disjoint from the diffuse piece");
    }
    DiffusePiece nd = *rr.result.diffuse;
    nd.mass = kept + alpha * rr.result.diffuse->mass;
    out.diffuse = nd;
  } else if (kept > 0) {
    out.diffuse->mass = kept;
  } else {
    out.diffuse.reset();
  }
  canonicalize(out);
  if (out.diffuse_mass() + out.residual_mass() != out.total_mass) {
    throw Error(ErrorCode::MassMismatch, "expansion of " + atom_ref.key() +
                                             " does not conserve mass");
  }

  if (step != nullptr) {
    step->rule = rr.rule;
    step->cite = rr.cite;
    step->expanded = atom_ref;
    step->replacement = repl;
    step->corner = corner;
    step->corner_result = rr.result;
    step->result = out;
    step->full_central_support = d > 0 && untouched.empty();
  }
  return next;
}

namespace {

std::vector<CentralProjection> projections_of(const Algebra& a, const Algebra& b) {
  std::vector<CentralProjection> out;
  for (std::size_t i = 0; i < a.summands.size(); ++i) {
    out.push_back({ProjectionRef{Side::A, i, label(a.summands[i])}, mass(a.summands[i])});
  }
  for (std::size_t j = 0; j < b.summands.size(); ++j) {
    out.push_back({ProjectionRef{Side::B, j, label(b.summands[j])}, mass(b.summands[j])});
  }
  return out;
}

const Summand& summand_for(const Algebra& a, const Algebra& b, const ProjectionRef& r) {
  return (r.side == Side::A ? a : b).summands.at(r.summand);
}

// Both factors are single summands: one direct rule application.
DerivationStep single_step(const Algebra& a, const Algebra& b) {
  const Summand& x = a.summands.front();
  const Summand& y = b.summands.front();
  RuleResult rr;
  if (is_diffuse(x)) {
    rr = rule_diffuse_vs_mixed(x, b);
  } else if (is_diffuse(y)) {
    rr = rule_diffuse_vs_mixed(y, a);
  } else if (!std::holds_alternative<TypeIInfinite>(x) &&
             std::holds_alternative<TypeIInfinite>(y)) {
    rr = rule_matrix_vs_mixed(y, a);
  } else {
    rr = rule_matrix_vs_mixed(x, b);
  }
  DerivationStep step;
  step.rule = rr.rule;
  step.cite = rr.cite;
  step.corner = a;
  step.replacement = y;
  step.corner_result = rr.result;
  step.result = rr.result;
  return step;
}

std::vector<ProjectionRef> expansion_order(const std::vector<CentralProjection>& projections,
                                           const DeriveOptions& options) {
  std::vector<ProjectionRef> order;
  if (!options.order.empty()) {
    for (const auto& r : options.order) {
      auto it = std::find_if(projections.begin(), projections.end(),
                             [&](const CentralProjection& p) {
                               return p.ref.side == r.side && p.ref.summand == r.summand;
                             });
      if (it == projections.end()) {
        throw Error(ErrorCode::UnknownAtom, "expansion order names unknown atom " + r.key());
      }
      if (std::find(order.begin(), order.end(), it->ref) != order.end()) {
        throw Error(ErrorCode::UnknownAtom, "expansion order repeats atom " + r.key());
      }
      order.push_back(it->ref);
    }
    if (order.size() != projections.size()) {
      throw Error(ErrorCode::UnknownAtom, "expansion order must name every central atom");
    }
    return order;
  }
  for (const auto& p : projections) order.push_back(p.ref);
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

}  // namespace

Derivation derive_free_product(const Algebra& a, const Algebra& b,
                               const DeriveOptions& options) {
  require_valid(a);
  require_valid(b);
  const Rational total = a.total_mass();
  if (total != b.total_mass()) {
    throw Error(ErrorCode::MassMismatch,
                "free product operands have different total mass: " + to_string(total) +
                    " vs " + to_string(b.total_mass()));
  }
  Derivation out;
  DerivationTrace& trace = out.trace;
  trace.a = a;
  trace.b = b;

  if (is_one_dimensional(a) || is_one_dimensional(b)) {
    const bool a_scalar = is_one_dimensional(a);
    DerivationStep step;
    step.rule = "scalar";
    step.cite = kScalarCite;
    step.corner = a_scalar ? b : a;
    step.result = a_scalar ? scalar_product(b, Side::A, label(a.summands.front()))
                           : scalar_product(a, Side::B, label(b.summands.front()));
    step.corner_result = step.result;
    trace.steps.push_back(step);
    trace.final = step.result;
    out.classification = step.result;
    return out;
  }
  if (is_tracial(a) && is_tracial(b)) {
    throw Error(ErrorCode::BothTracial,
                "both states are traces; the tracial free product is out of scope");
  }
  const Algebra an = rescale(a, 1 / total);
  const Algebra bn = rescale(b, 1 / total);

  Classification result;
  if (an.summands.size() == 1 && bn.summands.size() == 1) {
    DerivationStep step = single_step(an, bn);
    result = step.result;
    trace.steps.push_back(std::move(step));
  } else {
    ChainState state;
    state.projections = projections_of(an, bn);
    std::vector<ProjectionRef> order = expansion_order(state.projections, options);

    // Seed: the free product of the two centers.
    DerivationStep seed;
    seed.corner = center(an);
    std::optional<ProjectionRef> forced;
    if (an.summands.size() == 1 || bn.summands.size() == 1) {
      const bool a_single = an.summands.size() == 1;
      const Algebra& many = a_single ? bn : an;
      const ProjectionRef single{a_single ? Side::A : Side::B, 0,
                                 label((a_single ? an : bn).summands.front())};
      forced = single;
      state.current.total_mass = 1;
      for (std::size_t j = 0; j < many.summands.size(); ++j) {
        ProjectionRef other{a_single ? Side::B : Side::A, j, label(many.summands[j])};
        Provenance p = a_single ? Provenance{single, other} : Provenance{other, single};
        state.current.residuals.push_back(ResidualBlock{{mass(many.summands[j])}, p});
      }
      canonicalize(state.current);
      seed.rule = "scalar";
      seed.cite = kScalarCite;
    } else {
      RuleResult rr = rule_abelian_abelian(center(an), center(bn));
      state.current = rr.result;
      seed.rule = rr.rule;
      seed.cite = rr.cite;
    }
    seed.corner_result = state.current;
    seed.result = state.current;
    trace.steps.push_back(std::move(seed));

    // A one-summand factor's atom must be refined before anything else.
    if (forced) {
      auto it = std::find(order.begin(), order.end(), *forced);
      std::rotate(order.begin(), it, it + 1);
    }
    trace.order = order;
    for (const auto& p : order) {
      const Summand& repl = summand_for(an, bn, p);
      if (is_atom(repl)) {
        // Refining an atom into itself changes nothing.
        for (auto& c : state.projections) c.expanded = c.expanded || c.ref == p;
        continue;
      }
      DerivationStep step;
      state = expand_atom(state, p, repl, &step);
      trace.steps.push_back(std::move(step));
    }
    result = state.current;
  }

  canonicalize(result);
  result = rescale(result, total);
  trace.final = result;
  out.classification = result;

  if (options.check_oracle) {
    const Classification closed = free_product_classify(a, b);
    if (closed != result) {
      throw Error(ErrorCode::OracleMismatch,
                  "inductive derivation disagrees with the closed form (diffuse mass " +
                      to_string(result.diffuse_mass()) + " vs " +
                      to_string(closed.diffuse_mass()) + ", " +
                      std::to_string(result.residuals.size()) + " vs " +
                      std::to_string(closed.residuals.size()) + " residual blocks)");
    }
  }
  return out;
}

Classification replay(const DerivationTrace& trace) {
  DeriveOptions options;
  options.order = trace.order;
  options.check_oracle = false;
  return derive_free_product(trace.a, trace.b, options).classification;
}

}  // namespace vna
