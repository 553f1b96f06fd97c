#pragma once

// Weighted von Neumann algebras as formal finite direct sums of summands.
// Scalars are stored as signed Rationals so that validate() can report
// non-faithful or malformed inputs; every other operation expects a valid
// algebra.

#include "vna/numlat.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vna {

/// Interpolated free group parameter t in L(F_t).
struct FreeGroupParam {
  enum class Kind { One, Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  Rational value = 0;  // meaningful only for Finite (t > 1)

  static FreeGroupParam one() { return {Kind::One, 1}; }
  static FreeGroupParam finite(Rational t);  // t == 1 maps to One
  static FreeGroupParam infinite() { return {Kind::Infinite, 0}; }
  static FreeGroupParam unknown() { return {Kind::Unknown, 0}; }

  friend bool operator==(const FreeGroupParam&, const FreeGroupParam&) = default;
};

/// "1", "p/q", "inf" or "?".
std::string to_string(const FreeGroupParam& t);
FreeGroupParam parse_free_group_param(std::string_view text);

/// M_k(C) with the state of density diag(weights).
struct MatrixBlock {
  std::vector<Rational> weights;
  std::string label;

  Rational mass() const;
  std::size_t size() const { return weights.size(); }
  friend bool operator==(const MatrixBlock&, const MatrixBlock&) = default;
};

/// B(H), H separable infinite-dimensional: diagonal weights are `head`
/// followed by tail_start * ratio^m for m >= 0.
struct TypeIInfinite {
  std::vector<Rational> head;
  Rational ratio;
  Rational tail_start;
  std::string label;

  Rational mass() const;
  friend bool operator==(const TypeIInfinite&, const TypeIInfinite&) = default;
};

struct FreeGroupFactor {
  FreeGroupParam t;
  Rational mass;
  std::string label;
  friend bool operator==(const FreeGroupFactor&, const FreeGroupFactor&) = default;
};

struct ArakiWoods {
  RatioGroup group;
  Rational mass;
  std::string label;
  friend bool operator==(const ArakiWoods&, const ArakiWoods&) = default;
};

struct TensorFactor {
  std::vector<Rational> profile;             // sums to 1
  std::optional<std::uint64_t> multiplicity;  // nullopt: infinitely many copies
  friend bool operator==(const TensorFactor&, const TensorFactor&) = default;
};

/// Infinite tensor product of finite-dimensional algebras with product state.
struct HyperfiniteTensor {
  std::vector<TensorFactor> factors;
  Rational mass;
  std::string label;
  friend bool operator==(const HyperfiniteTensor&, const HyperfiniteTensor&) = default;
};

/// (type I factor, normalized state) (x) (L(F_t) or T_G).
struct TensorSummand {
  std::variant<MatrixBlock, TypeIInfinite> type_i;
  std::variant<FreeGroupParam, RatioGroup> diffuse;
  Rational mass;
  std::string label;
  friend bool operator==(const TensorSummand&, const TensorSummand&) = default;
};

using Summand = std::variant<MatrixBlock, TypeIInfinite, FreeGroupFactor,
                             ArakiWoods, HyperfiniteTensor, TensorSummand>;

struct Algebra {
  std::string label;
  std::vector<Summand> summands;

  Rational total_mass() const;
  friend bool operator==(const Algebra&, const Algebra&) = default;
};

Rational mass(const Summand& s);
const std::string& label(const Summand& s);
std::string kind_name(const Summand& s);

/// True for a 1x1 MatrixBlock (a minimal central projection).
bool is_atom(const Summand& s);
/// True for summands without minimal projections.
bool is_diffuse(const Summand& s);
/// True when the algebra is a single 1x1 block.
bool is_one_dimensional(const Algebra& a);

struct Violation {
  std::string path;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate(const Algebra& a);
/// Throws Error(InvalidAlgebra) listing every violation.
void require_valid(const Algebra& a);

Summand rescale(const Summand& s, const Rational& c);
Algebra rescale(const Algebra& a, const Rational& c);

RatioGroup point_spectrum(const Summand& s);
RatioGroup point_spectrum(const Algebra& a);

bool is_tracial(const Summand& s);
bool is_tracial(const Algebra& a);

/// Absorbs the type I part of a TensorSummand where the result is known;
/// every other summand is returned unchanged.
Summand tensor_simplify(const Summand& s);

/// Tensor product of two summands. Throws Error(UnsupportedInput) when the
/// product leaves the representable kinds.
Summand tensor_product(const Summand& x, const Summand& y);
/// Distributes over direct sums and simplifies each term.
Algebra tensor_product(const Algebra& x, const Algebra& y);

// Builders.
MatrixBlock matrix(std::vector<Rational> weights, std::string label = {});
MatrixBlock atom(Rational mass, std::string label = {});
/// psi_lambda on M_n: weights lambda^i (1-lambda)/(1-lambda^n).
MatrixBlock psi_lambda(std::size_t n, const Rational& lambda);
/// psi_lambda on B(H): weights lambda^i (1-lambda).
TypeIInfinite psi_lambda(const Rational& lambda);
Algebra direct_sum(std::vector<Summand> summands, std::string label = {});

}  // namespace vna
