#pragma once

// Inductive recomputation of free products. Starts from the free product of
// the two centers and refines one central atom at a time into its full
// summand: compress to the atom, free-multiply the corner with the
// renormalized summand using a base rule, then reinflate. Used as an
// independent cross-check of free_product_classify.

#include "vna/classification.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vna {

struct DerivationStep {
  std::string rule;
  std::string cite;
  std::optional<ProjectionRef> expanded;  // empty for the seed step
  std::optional<Summand> replacement;     // renormalized to mass 1
  Algebra corner;                         // renormalized corner at the atom
  Classification corner_result;           // corner * replacement, mass 1
  Classification result;                  // whole algebra after the step
  bool full_central_support = false;      // z(p : M) = 1
};

struct DerivationTrace {
  Algebra a;
  Algebra b;
  std::vector<ProjectionRef> order;  // expansion order actually used
  std::vector<DerivationStep> steps;
  Classification final;
};

/// A central projection of one factor during the chain.
struct CentralProjection {
  ProjectionRef ref;
  Rational mass;
  bool expanded = false;
};

struct ChainState {
  Classification current;  // normalized to total mass 1
  std::vector<CentralProjection> projections;
};

/// Rule output plus the identifiers recorded in the trace.
struct RuleResult {
  Classification result;
  std::string rule;
  std::string cite;
};

/// Z(A) * Z(B) for two abelian algebras of dimension >= 2, normalized. The
/// diffuse part is L(F_?) with unknown parameter.
RuleResult rule_abelian_abelian(const Algebra& a, const Algebra& b);

/// Type I factor (finite block or B(H), mass 1) against an algebra of atoms,
/// finite blocks and at most one diffuse factor (mass 1). Residual provenance
/// is local: block = {A, 0}, atom = {B, index in `mixed`}.
RuleResult rule_matrix_vs_mixed(const Summand& block, const Algebra& mixed);

/// Diffuse summand (no minimal projections, mass 1) against anything.
RuleResult rule_diffuse_vs_mixed(const Summand& diffuse, const Algebra& mixed);

/// Refines the central atom `atom` into `replacement` (same mass).
ChainState expand_atom(const ChainState& state, const ProjectionRef& atom,
                       const Summand& replacement,
                       DerivationStep* step = nullptr);

struct DeriveOptions {
  /// Randomizes the expansion order when set.
  std::optional<std::uint64_t> seed;
  /// Compare against free_product_classify and throw OracleMismatch.
  bool check_oracle = true;
  /// Explicit order; overrides `seed` when nonempty.
  std::vector<ProjectionRef> order;
};

struct Derivation {
  Classification classification;
  DerivationTrace trace;
};

Derivation derive_free_product(const Algebra& a, const Algebra& b,
                               const DeriveOptions& options = {});

/// Re-executes a trace from its inputs and recorded order.
Classification replay(const DerivationTrace& trace);

}  // namespace vna
