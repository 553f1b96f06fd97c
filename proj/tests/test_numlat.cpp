#include "vna/error.hpp"
#include "vna/numlat.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace vna;

namespace {

PosRat q(std::int64_t n, std::int64_t d = 1) { return PosRat(n, d); }

// Compares the library lattice with the oracle's textbook HNF.
bool same_lattice(const RatioGroup& g, const oracle::Lattice& o) {
  if (g.basis().size() != o.rows.size()) return false;
  if (g.trivial()) return true;
  if (g.primes().size() != o.primes.size()) return false;
  for (std::size_t k = 0; k < o.primes.size(); ++k) {
    if (g.primes()[k] != o.primes[k]) return false;
  }
  for (std::size_t r = 0; r < o.rows.size(); ++r) {
    for (std::size_t k = 0; k < o.primes.size(); ++k) {
      if (static_cast<oracle::i128>(g.basis()[r][k]) != o.rows[r][k]) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_rational("-2/4")), "-1/2");
  EXPECT_EQ(to_string(parse_rational("7")), "7");
  EXPECT_EQ(to_string(parse_rational("0/5")), "0");
  for (const char* bad : {"", "1/", "/2", "1/0", "a", "1.5", "1//2", "--1"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(PosRat, RejectsNonPositive) {
  EXPECT_THROW(PosRat(Rational(0)), Error);
  EXPECT_THROW(PosRat(Rational(-1, 2)), Error);
  EXPECT_THROW(PosRat::parse("0"), Error);
  EXPECT_EQ(PosRat::parse("10/4"), q(5, 2));
  EXPECT_EQ(q(2, 3).inverse(), q(3, 2));
  EXPECT_LT(q(1, 3), q(1, 2));
}

TEST(Factor, RoundTrip) {
  EXPECT_EQ(factor(q(1)).size(), 0u);
  const FactoredRat f = factor(q(12, 35));
  EXPECT_EQ(f.at(2), 2);
  EXPECT_EQ(f.at(3), 1);
  EXPECT_EQ(f.at(5), -1);
  EXPECT_EQ(f.at(7), -1);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> d(1, 1'000'000);
  for (int i = 0; i < 2000; ++i) {
    const PosRat x(d(rng), d(rng));
    EXPECT_EQ(reconstruct(factor(x)), x);
  }
}

TEST(Factor, LargeSemiprime) {
  // Cofactors beyond trial division go through Pollard-Brent.
  const BigInt p("1000000007");
  const BigInt r("998244353");
  const auto f = factor_integer(p * r * 4);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f.at(2), 2);
  EXPECT_EQ(f.at(p), 1);
  EXPECT_EQ(f.at(r), 1);
  const BigInt big_prime("170141183460469231731687303715884105727");  // 2^127 - 1
  EXPECT_EQ(factor_integer(big_prime).at(big_prime), 1);
}

TEST(RatioGroup, CanonicalExamples) {
  const RatioGroup c = group_generate({q(4, 9), q(2, 3)});
  EXPECT_EQ(c, group_generate({q(3, 2)}));
  const GroupKind k = group_kind(c);
  EXPECT_EQ(k.tag, GroupKind::Tag::Cyclic);
  EXPECT_EQ(k.lambda, q(2, 3));
  EXPECT_EQ(group_kind(group_generate({q(2), q(3)})).tag, GroupKind::Tag::HigherRank);
  EXPECT_EQ(group_generate({q(2), q(3)}), group_generate({q(6), q(3)}));
  EXPECT_NE(group_generate({q(2), q(3)}), group_generate({q(6), q(2, 3)}));
  EXPECT_TRUE(group_generate({q(1), q(1)}).trivial());
  EXPECT_EQ(group_kind(RatioGroup{}).tag, GroupKind::Tag::Trivial);
  EXPECT_EQ(generator_strings(group_generate({q(3, 2)})), std::vector<std::string>{"2/3"});
  // <4, 6> = <4, 3/2>, rank 2 but not <2, 3>.
  const RatioGroup g46 = group_generate({q(4), q(6)});
  EXPECT_EQ(g46.rank(), 2u);
  EXPECT_FALSE(group_member(q(2), g46));
  EXPECT_TRUE(group_member(q(24), g46));
  EXPECT_TRUE(group_member(q(3, 2), g46));
}

TEST(RatioGroup, CyclicFromAnyGenerator) {
  for (std::int64_t n = 2; n < 40; ++n) {
    for (std::int64_t d = 1; d < n; ++d) {
      if (std::gcd(n, d) != 1) continue;
      const GroupKind up = group_kind(group_generate({q(n, d)}));
      const GroupKind down = group_kind(group_generate({q(d, n)}));
      EXPECT_EQ(up.tag, GroupKind::Tag::Cyclic);
      EXPECT_EQ(up.lambda, q(d, n));
      EXPECT_EQ(down, up);
    }
  }
}

TEST(RatioGroup, MatchesOracleHnf) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> d(1, 1'000'000);
  std::uniform_int_distribution<int> count(1, 4);
  for (int i = 0; i < 3000; ++i) {
    std::vector<std::pair<std::int64_t, std::int64_t>> gens;
    std::vector<PosRat> ours;
    const int n = count(rng);
    for (int j = 0; j < n; ++j) {
      const std::int64_t a = d(rng);
      const std::int64_t b = d(rng);
      gens.emplace_back(a, b);
      ours.emplace_back(a, b);
    }
    EXPECT_TRUE(same_lattice(group_generate(ours), oracle::group_lattice(gens)));
  }
}

TEST(RatioGroup, JoinLaws) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> d(1, 1'000'000);
  auto random_group = [&] {
    std::vector<PosRat> g;
    const int n = static_cast<int>(rng() % 3) + 1;
    for (int i = 0; i < n; ++i) g.emplace_back(d(rng), d(rng));
    return group_generate(g);
  };
  for (int i = 0; i < 500; ++i) {
    const RatioGroup a = random_group();
    const RatioGroup b = random_group();
    const RatioGroup c = random_group();
    EXPECT_EQ(group_join(a, b), group_join(b, a));
    EXPECT_EQ(group_join(group_join(a, b), c), group_join(a, group_join(b, c)));
    EXPECT_EQ(group_join(a, a), a);
    EXPECT_EQ(group_join(a, RatioGroup{}), a);
  }
}

TEST(RatioGroup, MembershipClosure) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> d(1, 1'000'000);
  for (int i = 0; i < 300; ++i) {
    std::vector<PosRat> g;
    for (int j = 0; j < 3; ++j) g.emplace_back(d(rng), d(rng));
    const RatioGroup h = group_generate(g);
    for (const auto& x : g) EXPECT_TRUE(group_member(x, h));
    const PosRat prod = g[0] * g[1].inverse() * g[2] * g[2];
    EXPECT_TRUE(group_member(prod, h));
    EXPECT_TRUE(group_member(prod.inverse(), h));
    for (const auto& x : h.generators()) EXPECT_TRUE(group_member(x, h));
  }
  // 2 is a square root of 4 but not a member of <4>.
  EXPECT_FALSE(group_member(q(2), group_generate({q(4)})));
  EXPECT_TRUE(group_member(q(1), RatioGroup{}));
  EXPECT_FALSE(group_member(q(2), RatioGroup{}));
}

TEST(Hnf, ReducesAboveDiagonal) {
  std::vector<RatioGroup::Row> rows{{2, 3}, {4, 5}, {0, 0}};
  hermite_normal_form(rows, 2);
  // (2,3),(4,5) span a lattice of index 2 with HNF {{2,0},{0,1}}.
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (RatioGroup::Row{2, 0}));
  EXPECT_EQ(rows[1], (RatioGroup::Row{0, 1}));
}
