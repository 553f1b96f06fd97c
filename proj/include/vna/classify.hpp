#pragma once

// Closed-form classification of (A, phi) * (B, psi) as T_H ⊕ C.

#include "vna/classification.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace vna {

/// gamma = sum_l (1 - a) / w_l. Throws Error(UnsupportedInput) unless 0 < a < 1.
Rational residual_gamma(const Rational& atom_mass,
                        const std::vector<Rational>& block_weights);

/// Finite part C for inputs normalized to total mass 1. Atom pairs are
/// emitted once.
std::vector<ResidualBlock> residual_blocks(const Algebra& a, const Algebra& b);

/// The result of C * X: X itself, with finite blocks listed as residuals under
/// the scalar side. `scalar_side` names the one-dimensional factor.
Classification scalar_product(const Algebra& x, Side scalar_side,
                              const std::string& scalar_label = {});

Classification free_product_classify(const Algebra& a, const Algebra& b);

/// "III_1", "III_λ:p/q" or "II_1". Throws when there is no diffuse piece.
std::string connes_type(const Classification& c);

/// Expression tree over algebras: free products, direct sums, tensors.
struct ProductExpr {
  enum class Op { Leaf, FreeProduct, DirectSum, Tensor };
  Op op = Op::Leaf;
  Algebra leaf;
  std::vector<ProductExpr> children;

  static ProductExpr of(Algebra a) { return {Op::Leaf, std::move(a), {}}; }
  static ProductExpr node(Op op, std::vector<ProductExpr> children) {
    return {op, {}, std::move(children)};
  }
};

/// Evaluates the expression to an algebra (free products re-enter as
/// diffuse summand + residual blocks).
Algebra evaluate(const ProductExpr& expr);

/// Folds the expression left to right and classifies it. A top-level
/// expression without a free product is returned as C * X.
Classification simplify_product_expression(const ProductExpr& expr);

}  // namespace vna
