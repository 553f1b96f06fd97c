#pragma once

// Exact positive rationals and finitely generated subgroups of the
// multiplicative group of positive rationals, stored as integer exponent
// lattices in row Hermite normal form.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vna {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (optional leading '-'). Throws Error(ParseError).
Rational parse_rational(std::string_view text);

/// Canonical text: "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);

/// A strictly positive rational. Construction from a non-positive value throws.
class PosRat {
 public:
  PosRat() : value_(1) {}
  PosRat(const Rational& value);  // NOLINT(google-explicit-constructor)
  PosRat(std::int64_t num, std::int64_t den = 1);

  static PosRat parse(std::string_view text);

  const Rational& value() const noexcept { return value_; }
  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const {
    return boost::multiprecision::denominator(value_);
  }
  PosRat inverse() const { return PosRat(Rational(1) / value_); }

  friend PosRat operator*(const PosRat& a, const PosRat& b) {
    return PosRat(a.value_ * b.value_);
  }
  friend PosRat operator/(const PosRat& a, const PosRat& b) {
    return PosRat(a.value_ / b.value_);
  }
  friend PosRat operator+(const PosRat& a, const PosRat& b) {
    return PosRat(a.value_ + b.value_);
  }
  friend std::strong_ordering operator<=>(const PosRat& a, const PosRat& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const PosRat& a, const PosRat& b) = default;

 private:
  Rational value_;
};

std::string to_string(const PosRat& q);

/// Prime -> nonzero exponent.
using FactoredRat = std::map<BigInt, std::int64_t>;

FactoredRat factor(const PosRat& q);
PosRat reconstruct(const FactoredRat& f);

/// Prime factorization of a positive integer (trial division, then
/// Miller-Rabin / Pollard-Brent for large cofactors).
std::map<BigInt, std::int64_t> factor_integer(BigInt n);

/// Finitely generated subgroup of (Q+, *). Equal groups have equal fields.
class RatioGroup {
 public:
  using Row = std::vector<std::int64_t>;

  RatioGroup() = default;

  const std::vector<BigInt>& primes() const noexcept { return primes_; }
  const std::vector<Row>& basis() const noexcept { return basis_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  bool trivial() const noexcept { return basis_.empty(); }

  /// Value of each basis row, inverted into (0,1), sorted ascending.
  std::vector<PosRat> generators() const;

  friend bool operator==(const RatioGroup&, const RatioGroup&) = default;

  /// Builds the canonical group spanned by exponent rows over `primes`.
  static RatioGroup from_lattice(std::vector<BigInt> primes,
                                 std::vector<Row> rows);

 private:
  std::vector<BigInt> primes_;
  std::vector<Row> basis_;
};

RatioGroup group_generate(std::span<const PosRat> gens);
RatioGroup group_generate(std::initializer_list<PosRat> gens);
RatioGroup group_join(const RatioGroup& h, const RatioGroup& k);
bool group_member(const PosRat& q, const RatioGroup& h);

struct GroupKind {
  enum class Tag { Trivial, Cyclic, HigherRank };
  Tag tag = Tag::Trivial;
  PosRat lambda;  // generator in (0,1) when Cyclic

  friend bool operator==(const GroupKind&, const GroupKind&) = default;
};

GroupKind group_kind(const RatioGroup& h);

/// Generators as canonical strings, e.g. ["1/3", "2/3"].
std::vector<std::string> generator_strings(const RatioGroup& h);

/// Reduces integer rows to row Hermite normal form in place (zero rows
/// removed). Throws on int64 overflow.
void hermite_normal_form(std::vector<RatioGroup::Row>& rows,
                         std::size_t ncols);

}  // namespace vna
