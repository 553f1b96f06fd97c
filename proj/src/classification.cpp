#include "vna/classification.hpp"

#include "vna/error.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace vna {

Side opposite(Side s) { return s == Side::A ? Side::B : Side::A; }

char side_char(Side s) { return s == Side::A ? 'a' : 'b'; }

std::string ProjectionRef::key() const {
  return std::string(1, side_char(side)) + std::to_string(summand);
}

std::string ProjectionRef::display() const {
  return label.empty() ? key() : label;
}

std::vector<std::string> Provenance::dominated_by(std::size_t size) const {
  std::vector<std::string> out;
  if (size == 1) {
    out.push_back(block.key() + " ∧ " + atom.key());
    return out;
  }
  for (std::size_t k = 0; k < size; ++k) {
    out.push_back(block.key() + "[" + std::to_string(k) + "] ∧ " + atom.key());
  }
  return out;
}

Rational ResidualBlock::mass() const {
  return std::accumulate(weights.begin(), weights.end(), Rational(0));
}

Rational Classification::residual_mass() const {
  Rational total = 0;
  for (const auto& r : residuals) total += r.mass();
  return total;
}

Rational Classification::diffuse_mass() const {
  return diffuse ? diffuse->mass : Rational(0);
}

void canonicalize(Classification& c) {
  std::sort(c.residuals.begin(), c.residuals.end(),
            [](const ResidualBlock& x, const ResidualBlock& y) {
              return std::tie(x.provenance.block, x.provenance.atom, x.weights) <
                     std::tie(y.provenance.block, y.provenance.atom, y.weights);
            });
}

Classification mirror(const Classification& c) {
  Classification out = c;
  for (auto& r : out.residuals) {
    auto& p = r.provenance;
    p.atom.side = opposite(p.atom.side);
    p.block.side = opposite(p.block.side);
    // Atom pairs are recorded with the A-side atom as `atom`.
    if (r.weights.size() == 1 && p.atom.side == Side::B && p.block.side == Side::A) {
      std::swap(p.atom, p.block);
    }
  }
  canonicalize(out);
  return out;
}

Classification rescale(const Classification& c, const Rational& factor) {
  Classification out = c;
  if (out.diffuse) out.diffuse->mass *= factor;
  for (auto& r : out.residuals) {
    for (auto& w : r.weights) w *= factor;
  }
  for (auto& s : out.passthrough) s = rescale(s, factor);
  out.total_mass *= factor;
  return out;
}

DiffusePiece absorb(const DiffusePiece& d, const RatioGroup& g) {
  if (g.trivial()) return d;
  if (const auto* aw = std::get_if<ArakiWoodsPiece>(&d.factor)) {
    return DiffusePiece{ArakiWoodsPiece{group_join(aw->group, g)}, d.mass};
  }
  return DiffusePiece{ArakiWoodsPiece{g}, d.mass};
}

Selector Selector::all(const Classification& c) {
  Selector s;
  s.diffuse_mass = c.diffuse_mass();
  for (std::size_t i = 0; i < c.residuals.size(); ++i) {
    Part part{i, {}};
    for (std::size_t k = 0; k < c.residuals[i].weights.size(); ++k) {
      part.diagonals.push_back(k);
    }
    s.residuals.push_back(std::move(part));
  }
  return s;
}

Classification compress(const Classification& c, const Selector& selector) {
  if (!c.passthrough.empty()) {
    throw Error(ErrorCode::UnsupportedInput,
                "cannot compress a classification with passthrough summands");
  }
  if (selector.diffuse_mass < 0 || selector.diffuse_mass > c.diffuse_mass()) {
    throw Error(ErrorCode::EmptySelection,
                "diffuse sub-mass must lie in [0, " + to_string(c.diffuse_mass()) + "]");
  }
  Classification out;
  if (selector.diffuse_mass > 0) {
    DiffusePiece d = *c.diffuse;
    if (auto* fg = std::get_if<FreeGroupPiece>(&d.factor);
        fg != nullptr && selector.diffuse_mass != c.diffuse->mass &&
        fg->t.kind == FreeGroupParam::Kind::Finite) {
      fg->t = FreeGroupParam::unknown();
    }
    d.mass = selector.diffuse_mass;
    out.diffuse = d;
  }
  for (const auto& part : selector.residuals) {
    if (part.residual >= c.residuals.size()) {
      throw Error(ErrorCode::EmptySelection,
                  "no residual block #" + std::to_string(part.residual));
    }
    if (part.diagonals.empty()) continue;
    const ResidualBlock& src = c.residuals[part.residual];
    ResidualBlock r{{}, src.provenance};
    std::vector<std::size_t> diag = part.diagonals;
    std::sort(diag.begin(), diag.end());
    diag.erase(std::unique(diag.begin(), diag.end()), diag.end());
    for (const auto k : diag) {
      if (k >= src.weights.size()) {
        throw Error(ErrorCode::EmptySelection, "diagonal index out of range");
      }
      r.weights.push_back(src.weights[k]);
    }
    out.residuals.push_back(std::move(r));
  }
  if (!out.diffuse && out.residuals.empty()) {
    throw Error(ErrorCode::EmptySelection, "compression selects nothing");
  }
  out.total_mass = out.diffuse_mass() + out.residual_mass();
  if (selector.renormalize) out = rescale(out, 1 / out.total_mass);
  return out;
}

Algebra to_algebra(const Classification& c, std::string label) {
  Algebra a{std::move(label), {}};
  if (c.diffuse) {
    std::visit(
        [&](const auto& piece) {
          using T = std::decay_t<decltype(piece)>;
          if constexpr (std::is_same_v<T, ArakiWoodsPiece>) {
            a.summands.push_back(ArakiWoods{piece.group, c.diffuse->mass, {}});
          } else {
            a.summands.push_back(FreeGroupFactor{piece.t, c.diffuse->mass, {}});
          }
        },
        c.diffuse->factor);
  }
  for (const auto& r : c.residuals) {
    a.summands.push_back(MatrixBlock{
        r.weights, r.provenance.block.key() + "∧" + r.provenance.atom.key()});
  }
  for (const auto& s : c.passthrough) a.summands.push_back(s);
  return a;
}

}  // namespace vna
