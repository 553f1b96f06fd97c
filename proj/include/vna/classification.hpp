#pragma once

// The output of a free product computation: a diffuse factor (T_H or
// L(F_t)) plus an explicit finite-dimensional residual part, every residual
// diagonal tagged with the projections dominating it.

#include "vna/algebra.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vna {

/// Which free factor a projection came from.
enum class Side { A, B };

Side opposite(Side s);
char side_char(Side s);

/// A central summand of one input algebra, by position.
struct ProjectionRef {
  Side side = Side::A;
  std::size_t summand = 0;
  std::string label;

  /// "a0", "b2", ...
  std::string key() const;
  /// The user label when present, otherwise key().
  std::string display() const;

  friend bool operator==(const ProjectionRef&, const ProjectionRef&) = default;
  friend auto operator<=>(const ProjectionRef& x, const ProjectionRef& y) {
    if (x.side != y.side) return x.side <=> y.side;
    return x.summand <=> y.summand;
  }
};

/// Residual block M_l sitting under (atom) ∧ (diagonal k of block). For a
/// pair of atoms the block is the B-side atom.
struct Provenance {
  ProjectionRef atom;
  ProjectionRef block;

  /// Per-diagonal domination, e.g. "b1[0] ∧ a0".
  std::vector<std::string> dominated_by(std::size_t size) const;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ResidualBlock {
  std::vector<Rational> weights;
  Provenance provenance;

  Rational mass() const;
  friend bool operator==(const ResidualBlock&, const ResidualBlock&) = default;
};

struct ArakiWoodsPiece {
  RatioGroup group;
  friend bool operator==(const ArakiWoodsPiece&, const ArakiWoodsPiece&) = default;
};

struct FreeGroupPiece {
  FreeGroupParam t;
  friend bool operator==(const FreeGroupPiece&, const FreeGroupPiece&) = default;
};

struct DiffusePiece {
  std::variant<ArakiWoodsPiece, FreeGroupPiece> factor;
  Rational mass;

  bool is_araki_woods() const {
    return std::holds_alternative<ArakiWoodsPiece>(factor);
  }
  friend bool operator==(const DiffusePiece&, const DiffusePiece&) = default;
};

/// T_H ⊕ C. `passthrough` only appears for free products with the scalars,
/// where the non-scalar factor is returned as-is.
struct Classification {
  std::optional<DiffusePiece> diffuse;
  std::vector<ResidualBlock> residuals;
  std::vector<Summand> passthrough;
  Rational total_mass = 0;

  Rational residual_mass() const;
  Rational diffuse_mass() const;

  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Sorts residuals into canonical order (by block, then atom, then weights).
void canonicalize(Classification& c);

/// Swaps the roles of the two free factors in every provenance record.
Classification mirror(const Classification& c);

Classification rescale(const Classification& c, const Rational& factor);

/// Diffuse piece joined with a nontrivial group: an L(F_t) piece becomes
/// T_G by free absorption; a T_H piece becomes T_{<H,G>}.
DiffusePiece absorb(const DiffusePiece& d, const RatioGroup& g);

/// Corner selection for compress().
struct Selector {
  Rational diffuse_mass = 0;  // 0 selects none of the diffuse piece
  struct Part {
    std::size_t residual = 0;
    std::vector<std::size_t> diagonals;
  };
  std::vector<Part> residuals;
  bool renormalize = false;

  /// Selects everything in c.
  static Selector all(const Classification& c);
};

/// Corner pMp for p = (diffuse sub-projection) + (chosen residual diagonals).
Classification compress(const Classification& c, const Selector& selector);

/// Re-enters a classification as an algebra: diffuse summand + residual blocks.
Algebra to_algebra(const Classification& c, std::string label = {});

}  // namespace vna
