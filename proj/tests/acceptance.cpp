// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runs without a test framework so the output stays one line each.

#include "vna/classify.hpp"
#include "vna/derive.hpp"
#include "vna/error.hpp"
#include "vna/graph.hpp"

#include "random_algebra.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace vna;

namespace {

Rational r(long long n, long long d = 1) { return Rational(n, d); }
PosRat q(std::int64_t n, std::int64_t d = 1) { return PosRat(n, d); }
RatioGroup gen(std::initializer_list<PosRat> g) { return group_generate(g); }

// Collects the first failure message of a criterion.
struct Check {
  std::string failure;
  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

std::optional<RatioGroup> aw_group(const Classification& c) {
  if (!c.diffuse || !c.diffuse->is_araki_woods()) return std::nullopt;
  return std::get<ArakiWoodsPiece>(c.diffuse->factor).group;
}

std::vector<std::vector<Rational>> residual_weights(const Classification& c) {
  std::vector<std::vector<Rational>> out;
  for (const auto& res : c.residuals) out.push_back(res.weights);
  std::sort(out.begin(), out.end());
  return out;
}

Algebra two_atoms(const Rational& beta) {
  return direct_sum({atom(beta, "q"), atom(1 - beta, "q'")});
}

void add_pair(WeightedGraph& g, const std::string& id, const std::string& s,
              const std::string& t, const PosRat& mu) {
  g.edges.push_back({id, s, t, id + "op", mu});
  g.edges.push_back({id + "op", t, s, id, mu.inverse()});
}

int failures = 0;

void run(int n, const std::string& name, double budget_s, const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream timing;
  timing.precision(2);
  timing << std::fixed << secs << "s";
  check.expect(secs < budget_s, "over time budget");
  const bool ok = check.failure.empty();
  if (!ok) ++failures;
  std::printf("[%s] %d: %s (%s)%s%s\n", ok ? "PASS" : "FAIL", n, name.c_str(),
              timing.str().c_str(), ok ? "" : " - ", check.failure.c_str());
}

}  // namespace

int main() {
  run(1, "2x2 block against two atoms", 1, [](Check& c) {
    const Algebra a = direct_sum({matrix({r(3, 5), r(2, 5)}, "e")});
    const Classification x = free_product_classify(a, two_atoms(r(4, 5)));
    c.expect(aw_group(x) == gen({q(2, 3)}), "group for β = 4/5");
    c.expect(x.diffuse_mass() == r(5, 6), "diffuse mass 5/6");
    c.expect(x.residuals.size() == 1 &&
                 x.residuals[0].weights == std::vector<Rational>{r(1, 10), r(1, 15)},
             "residual M2(1/10,1/15)");
    c.expect(!x.residuals.empty() && x.residuals[0].provenance.block.key() == "a0" &&
                 x.residuals[0].provenance.atom.key() == "b0",
             "domination provenance");
    const Classification y = free_product_classify(a, two_atoms(r(7, 10)));
    c.expect(residual_gamma(r(7, 10), {r(3, 5), r(2, 5)}) == r(5, 4), "γ = 5/4");
    c.expect(aw_group(y) == gen({q(2, 3)}) && y.diffuse_mass() == 1 && y.residuals.empty(),
             "β = 7/10 gives T mass 1");
  });

  run(2, "multi-block instance", 1, [](Check& c) {
    const Algebra a = direct_sum({matrix({r(1, 20), r(1, 20)}), atom(r(9, 10))});
    const Algebra b = direct_sum({matrix({r(3, 10), r(1, 5)}), atom(r(1, 2))});
    const Classification x = free_product_classify(a, b);
    c.expect(aw_group(x) == gen({q(3, 2)}), "group ⟨3/2⟩");
    c.expect(x.diffuse_mass() == r(31, 60), "diffuse mass 31/60");
    c.expect(residual_weights(x) ==
                 std::vector<std::vector<Rational>>{{r(1, 20), r(1, 30)}, {r(2, 5)}},
             "residuals M2(1/20,1/30) and C(2/5)");
  });

  testgen::AlgebraGen suite_gen(20240601);
  std::vector<std::pair<Algebra, Algebra>> suite;
  for (int i = 0; i < 1200; ++i) suite.push_back(suite_gen.pair());

  run(3, "derivation equals closed form on 1200 random pairs", 60, [&](Check& c) {
    std::uint64_t seed = 0;
    for (const auto& [a, b] : suite) {
      DeriveOptions o;
      o.seed = seed++;
      o.check_oracle = false;
      const Classification d = derive_free_product(a, b, o).classification;
      c.expect(d == free_product_classify(a, b), "pair " + std::to_string(seed - 1));
    }
  });

  run(4, "mirror symmetry and associativity", 60, [&](Check& c) {
    for (const auto& [a, b] : suite) {
      c.expect(free_product_classify(a, b) == mirror(free_product_classify(b, a)), "mirror");
    }
    testgen::AlgebraGen g(4242);
    int triples = 0;
    while (triples < 250) {
      const Algebra a = g.finite();
      const Algebra b = g.finite();
      const Algebra x = g.finite();
      if (is_tracial(a) + is_tracial(b) + is_tracial(x) > 1) continue;
      using Op = ProductExpr::Op;
      const auto L = ProductExpr::of;
      const Classification left = simplify_product_expression(
          ProductExpr::node(Op::FreeProduct, {ProductExpr::node(Op::FreeProduct, {L(a), L(b)}), L(x)}));
      const Classification right = simplify_product_expression(
          ProductExpr::node(Op::FreeProduct, {L(a), ProductExpr::node(Op::FreeProduct, {L(b), L(x)})}));
      c.expect(left.diffuse.has_value() == right.diffuse.has_value() &&
                   (!left.diffuse || left.diffuse->factor == right.diffuse->factor),
               "diffuse factor differs");
      c.expect(left.diffuse_mass() == right.diffuse_mass(), "diffuse mass differs");
      c.expect(residual_weights(left) == residual_weights(right), "residuals differ");
      ++triples;
    }
  });

  run(5, "absorption identities", 1, [](Check& c) {
    const auto one = [](Summand s) { return direct_sum({std::move(s)}); };
    const Algebra t2 = one(ArakiWoods{gen({q(2)}), r(1), {}});
    const Algebra t3 = one(ArakiWoods{gen({q(3)}), r(1), {}});
    const Algebra lz = one(FreeGroupFactor{FreeGroupParam::one(), r(1), {}});
    auto is_t = [](const Classification& x, const RatioGroup& h) {
      return aw_group(x) == h && x.diffuse_mass() == 1 && x.residuals.empty();
    };
    c.expect(is_t(free_product_classify(t2, one(FreeGroupFactor{FreeGroupParam::infinite(), r(1), {}})),
                  gen({q(2)})),
             "T⟨2⟩ * L(F_inf)");
    c.expect(is_t(free_product_classify(t2, t3), gen({q(2), q(3)})), "T⟨2⟩ * T⟨3⟩");
    c.expect(is_t(free_product_classify(lz, one(psi_lambda(r(1, 2)))), gen({q(1, 2)})),
             "L(Z) * B(H)");
    for (std::size_t n = 2; n <= 4; ++n) {
      c.expect(is_t(free_product_classify(lz, one(psi_lambda(n, r(1, 2)))), gen({q(1, 2)})),
               "L(Z) * M_" + std::to_string(n));
    }
  });

  run(6, "graph classifier examples", 1, [](Check& c) {
    WeightedGraph tri{{"0", "1", "2"}, {}};
    add_pair(tri, "e1", "0", "1", q(3));
    add_pair(tri, "e2", "1", "2", q(1));
    add_pair(tri, "e3", "2", "0", q(1, 2));
    const GraphClassification t = classify_graph(tri, "0", q(1, 5));
    c.expect(t.potentials == std::vector<PosRat>{q(1, 5), q(3, 5), q(2, 5)}, "potentials");
    c.expect(t.loop_group == gen({q(3, 2)}), "loop group ⟨3/2⟩");
    c.expect(t.atom_mass() == 0, "no atoms");
    c.expect(edge_eigenvalue(tri, t.potentials, "e2") == q(3, 2), "e2 eigenvalue");
    c.expect(t.diffuse_mass == r(6, 5), "diffuse mass 6/5");
    WeightedGraph two{{"u", "v"}, {}};
    add_pair(two, "s", "u", "u", q(1, 4));
    add_pair(two, "f", "u", "v", q(8));
    const GraphClassification w = classify_graph(two, "u", q(1));
    c.expect(w.loop_group == gen({q(1, 4)}) && w.diffuse_mass == 2, "T⟨1/4⟩(2)");
    c.expect(!w.atoms[0] && w.atoms[1] && *w.atoms[1] == q(7), "C(7) at v");
  });

  run(7, "ratio group lattice laws on 10000 generator sets", 30, [](Check& c) {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::int64_t> d(1, 1'000'000);
    auto random_gens = [&] {
      std::vector<PosRat> g;
      const int n = static_cast<int>(rng() % 3) + 1;
      for (int i = 0; i < n; ++i) g.emplace_back(d(rng), d(rng));
      return g;
    };
    for (int i = 0; i < 10000; ++i) {
      const auto ga = random_gens();
      const RatioGroup a = group_generate(ga);
      const RatioGroup b = group_generate(random_gens());
      const RatioGroup x = group_generate(random_gens());
      c.expect(group_join(a, b) == group_join(b, a), "commutative");
      c.expect(group_join(group_join(a, b), x) == group_join(a, group_join(b, x)), "associative");
      c.expect(group_join(a, a) == a, "idempotent");
      c.expect(group_join(a, RatioGroup{}) == a, "neutral");
      for (const auto& g : ga) c.expect(group_member(g, a), "generator membership");
      const PosRat prod = ga.size() > 1 ? ga[0] * ga[1].inverse() : ga[0] * ga[0];
      c.expect(group_member(prod, a), "product membership");
      c.expect(group_member(prod.inverse(), a), "inverse membership");
    }
    const GroupKind k = group_kind(gen({q(4, 9), q(2, 3)}));
    c.expect(k.tag == GroupKind::Tag::Cyclic && k.lambda == q(2, 3), "⟨4/9,2/3⟩ cyclic 2/3");
    c.expect(group_kind(gen({q(2), q(3)})).tag == GroupKind::Tag::HigherRank, "⟨2,3⟩ rank 2");
  });

  run(8, "Connes type labels", 1, [](Check& c) {
    Classification x;
    x.total_mass = 1;
    x.diffuse = DiffusePiece{ArakiWoodsPiece{gen({q(1, 2)})}, r(1)};
    c.expect(connes_type(x) == "III_λ:1/2", "III_1/2");
    x.diffuse = DiffusePiece{ArakiWoodsPiece{gen({q(2), q(3)})}, r(1)};
    c.expect(connes_type(x) == "III_1", "III_1");
    x.diffuse = DiffusePiece{FreeGroupPiece{FreeGroupParam::infinite()}, r(1)};
    c.expect(connes_type(x) == "II_1", "II_1");
  });

  run(9, "invariant suites on 10000 cases", 120, [](Check& c) {
    testgen::AlgebraGen g(909);
    const std::vector<Summand> diffuse{FreeGroupFactor{FreeGroupParam::finite(2), r(1), {}},
                                       ArakiWoods{gen({q(5, 7)}), r(1), {}}};
    for (int i = 0; i < 10000; ++i) {
      const auto [a, b] = g.pair();
      const Classification x = free_product_classify(a, b);
      c.expect(x.diffuse_mass() + x.residual_mass() == a.total_mass(), "mass conservation");
      std::map<std::string, int> per_block;
      for (const auto& res : x.residuals) {
        if (res.weights.size() >= 2) {
          ++per_block[res.provenance.block.key()];
        } else {
          const ProjectionRef& p = res.provenance.atom;
          const ProjectionRef& s = res.provenance.block;
          const Algebra& pa = p.side == Side::A ? a : b;
          const Algebra& sa = s.side == Side::A ? a : b;
          const Rational expect = mass(pa.summands[p.summand]) + mass(sa.summands[s.summand]) - 1;
          c.expect(res.weights[0] == expect, "atom-atom α+β-1");
        }
      }
      for (const auto& [blk, n] : per_block) c.expect(n <= 1, "scarcity at " + blk);
      if (!is_one_dimensional(a) && !is_one_dimensional(b)) {
        c.expect(aw_group(x) == group_join(point_spectrum(a), point_spectrum(b)), "spectrum join");
      }
      const Summand& d = diffuse[static_cast<std::size_t>(i) % diffuse.size()];
      if (!(is_tracial(a) && is_tracial(d)) && !is_one_dimensional(a)) {
        c.expect(free_product_classify(direct_sum({d}), a).residuals.empty(),
                 "diffuse factor leaves no residual");
      }
    }
  });

  return failures == 0 ? 0 : 1;
}
