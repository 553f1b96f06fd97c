#include "vna/classify.hpp"

#include "vna/error.hpp"

#include <algorithm>

namespace vna {

namespace {

ProjectionRef ref(Side side, std::size_t index, const Summand& s) {
  return ProjectionRef{side, index, label(s)};
}

// One orientation: atoms of `atoms_side` against finite blocks of the other.
void collect(const Algebra& atoms_alg, Side atoms_side, const Algebra& blocks_alg,
             bool include_atom_blocks, std::vector<ResidualBlock>& out) {
  for (std::size_t i = 0; i < atoms_alg.summands.size(); ++i) {
    if (!is_atom(atoms_alg.summands[i])) continue;
    const Rational& alpha = std::get<MatrixBlock>(atoms_alg.summands[i]).weights[0];
    for (std::size_t j = 0; j < blocks_alg.summands.size(); ++j) {
      const auto* block = std::get_if<MatrixBlock>(&blocks_alg.summands[j]);
      if (block == nullptr) continue;
      if (block->size() == 1 && !include_atom_blocks) continue;
      const Rational gamma = residual_gamma(alpha, block->weights);
      if (gamma >= 1) continue;
      ResidualBlock r;
      for (const auto& w : block->weights) r.weights.push_back(w * (1 - gamma));
      r.provenance.atom = ref(atoms_side, i, atoms_alg.summands[i]);
      r.provenance.block = ref(opposite(atoms_side), j, blocks_alg.summands[j]);
      out.push_back(std::move(r));
    }
  }
}

}  // namespace

Rational residual_gamma(const Rational& atom_mass,
                        const std::vector<Rational>& block_weights) {
  if (atom_mass <= 0 || atom_mass >= 1) {
    throw Error(ErrorCode::UnsupportedInput,
                "atom mass must lie in (0,1), got " + to_string(atom_mass));
  }
  Rational gamma = 0;
  for (const auto& w : block_weights) gamma += (1 - atom_mass) / w;
  return gamma;
}

std::vector<ResidualBlock> residual_blocks(const Algebra& a, const Algebra& b) {
  std::vector<ResidualBlock> out;
  collect(a, Side::A, b, true, out);
  collect(b, Side::B, a, false, out);
  return out;
}

Classification scalar_product(const Algebra& x, Side scalar_side,
                              const std::string& scalar_label) {
  Classification c;
  c.total_mass = x.total_mass();
  const Side x_side = opposite(scalar_side);
  const ProjectionRef scalar{scalar_side, 0, scalar_label};
  std::size_t diffuse_count = 0;
  for (const auto& s : x.summands) {
    if (std::holds_alternative<ArakiWoods>(s) || std::holds_alternative<FreeGroupFactor>(s)) {
      ++diffuse_count;
    }
  }
  for (std::size_t j = 0; j < x.summands.size(); ++j) {
    const Summand& s = x.summands[j];
    if (const auto* m = std::get_if<MatrixBlock>(&s)) {
      // Atom pairs keep the A-side atom in `atom`.
      Provenance p{scalar, ref(x_side, j, s)};
      if (m->size() == 1 && x_side == Side::A) std::swap(p.atom, p.block);
      c.residuals.push_back(ResidualBlock{m->weights, p});
      continue;
    }
    if (diffuse_count == 1) {
      if (const auto* w = std::get_if<ArakiWoods>(&s)) {
        c.diffuse = DiffusePiece{ArakiWoodsPiece{w->group}, w->mass};
        continue;
      }
      if (const auto* f = std::get_if<FreeGroupFactor>(&s)) {
        c.diffuse = DiffusePiece{FreeGroupPiece{f->t}, f->mass};
        continue;
      }
    }
    c.passthrough.push_back(s);
  }
  canonicalize(c);
  return c;
}

Classification free_product_classify(const Algebra& a, const Algebra& b) {
  require_valid(a);
  require_valid(b);
  const Rational total = a.total_mass();
  if (total != b.total_mass()) {
    throw Error(ErrorCode::MassMismatch,
                "free product operands have different total mass: " +
                    to_string(total) + " vs " + to_string(b.total_mass()));
  }
  if (is_one_dimensional(a)) {
    return scalar_product(b, Side::A, label(a.summands.front()));
  }
  if (is_one_dimensional(b)) {
    return scalar_product(a, Side::B, label(b.summands.front()));
  }
  if (is_tracial(a) && is_tracial(b)) {
    throw Error(ErrorCode::BothTracial,
                "both states are traces; the tracial free product is out of scope");
  }
  const Algebra an = rescale(a, 1 / total);
  const Algebra bn = rescale(b, 1 / total);

  Classification c;
  c.total_mass = 1;
  c.residuals = residual_blocks(an, bn);
  const Rational diffuse = 1 - c.residual_mass();
  if (diffuse <= 0) {
    throw Error(ErrorCode::DiffuseMassNonPositive,
                "residual part exhausts the free product (diffuse mass " +
                    to_string(diffuse) + ")");
  }
  c.diffuse = DiffusePiece{
      ArakiWoodsPiece{group_join(point_spectrum(an), point_spectrum(bn))}, diffuse};
  canonicalize(c);
  return rescale(c, total);
}

std::string connes_type(const Classification& c) {
  if (!c.diffuse) {
    throw Error(ErrorCode::UnsupportedInput, "classification has no diffuse piece");
  }
  const auto* aw = std::get_if<ArakiWoodsPiece>(&c.diffuse->factor);
  if (aw == nullptr) return "II_1";
  const GroupKind kind = group_kind(aw->group);
  switch (kind.tag) {
    case GroupKind::Tag::Cyclic:
      return "III_λ:" + to_string(kind.lambda);
    case GroupKind::Tag::HigherRank:
      return "III_1";
    case GroupKind::Tag::Trivial:
      break;
  }
  return "II_1";
}

Algebra evaluate(const ProductExpr& expr) {
  switch (expr.op) {
    case ProductExpr::Op::Leaf:
      return expr.leaf;
    case ProductExpr::Op::DirectSum: {
      Algebra out;
      for (const auto& child : expr.children) {
        Algebra part = evaluate(child);
        out.summands.insert(out.summands.end(), part.summands.begin(),
                            part.summands.end());
      }
      return out;
    }
    case ProductExpr::Op::Tensor: {
      Algebra out = evaluate(expr.children.front());
      for (std::size_t i = 1; i < expr.children.size(); ++i) {
        out = tensor_product(out, evaluate(expr.children[i]));
      }
      return out;
    }
    case ProductExpr::Op::FreeProduct:
      return to_algebra(simplify_product_expression(expr));
  }
  return {};
}

Classification simplify_product_expression(const ProductExpr& expr) {
  if (expr.op != ProductExpr::Op::FreeProduct) {
    const Algebra x = evaluate(expr);
    require_valid(x);
    return scalar_product(x, Side::A);
  }
  Algebra acc = evaluate(expr.children.front());
  Classification result;
  for (std::size_t i = 1; i < expr.children.size(); ++i) {
    result = free_product_classify(acc, evaluate(expr.children[i]));
    acc = to_algebra(result);
  }
  if (expr.children.size() == 1) {
    require_valid(acc);
    return scalar_product(acc, Side::A);
  }
  return result;
}

}  // namespace vna
