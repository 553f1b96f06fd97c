#pragma once

// Reference implementations used as test oracles. They share no code with
// the library: 128-bit fractions, trial-division factoring, a textbook
// Hermite normal form, and the residual formulas written pairwise.

#include "vna/algebra.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using i128 = __int128;

inline i128 gcd(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Frac {
  i128 n = 0;
  i128 d = 1;

  Frac() = default;
  Frac(i128 num, i128 den = 1) : n(num), d(den) {
    if (d == 0) throw std::domain_error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const i128 g = gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }

  friend Frac operator+(Frac a, Frac b) { return {a.n * b.d + b.n * a.d, a.d * b.d}; }
  friend Frac operator-(Frac a, Frac b) { return {a.n * b.d - b.n * a.d, a.d * b.d}; }
  friend Frac operator*(Frac a, Frac b) { return {a.n * b.n, a.d * b.d}; }
  friend Frac operator/(Frac a, Frac b) { return {a.n * b.d, a.d * b.n}; }
  friend bool operator==(Frac a, Frac b) { return a.n == b.n && a.d == b.d; }
  friend bool operator<(Frac a, Frac b) { return a.n * b.d < b.n * a.d; }
};

inline std::string str(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  if (neg) v = -v;
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string str(Frac f) { return f.d == 1 ? str(f.n) : str(f.n) + "/" + str(f.d); }

inline Frac from(const vna::Rational& r) {
  return Frac(static_cast<i128>(static_cast<long long>(boost::multiprecision::numerator(r))),
              static_cast<i128>(static_cast<long long>(boost::multiprecision::denominator(r))));
}

using Blocks = std::vector<std::vector<Frac>>;

inline Blocks blocks_of(const vna::Algebra& a) {
  Blocks out;
  for (const auto& s : a.summands) {
    std::vector<Frac> w;
    for (const auto& x : std::get<vna::MatrixBlock>(s).weights) w.push_back(from(x));
    out.push_back(w);
  }
  return out;
}

struct FreeProduct {
  std::vector<std::vector<Frac>> residuals;  // sorted
  Frac diffuse;
};

inline Frac sum(const std::vector<Frac>& v) {
  Frac s(0);
  for (const auto& x : v) s = s + x;
  return s;
}

// Block `w` against an opposing atom of mass `alpha` (both normalized).
inline bool survives(const std::vector<Frac>& w, Frac alpha, std::vector<Frac>& out) {
  if (w.size() == 1) {
    const Frac r = alpha + w[0] - Frac(1);
    if (!(Frac(0) < r)) return false;
    out = {r};
    return true;
  }
  Frac inv(0);
  for (const auto& x : w) inv = inv + Frac(1) / x;
  const Frac g = (Frac(1) - alpha) * inv;
  if (!(g < Frac(1))) return false;
  out.clear();
  for (const auto& x : w) out.push_back(x - x * g);
  return true;
}

/// Finite-dimensional free product, neither factor one-dimensional.
inline FreeProduct free_product(Blocks a, Blocks b) {
  Frac total(0);
  for (const auto& w : a) total = total + sum(w);
  for (auto* x : {&a, &b}) {
    for (auto& w : *x) {
      for (auto& v : w) v = v / total;
    }
  }
  FreeProduct fp;
  std::vector<Frac> r;
  for (const auto& wa : a) {
    for (const auto& wb : b) {
      if (wa.size() == 1 && survives(wb, wa[0], r)) fp.residuals.push_back(r);
      if (wb.size() == 1 && wa.size() > 1 && survives(wa, wb[0], r)) fp.residuals.push_back(r);
    }
  }
  Frac rest(1);
  for (auto& w : fp.residuals) {
    rest = rest - sum(w);
    for (auto& v : w) v = v * total;
  }
  fp.diffuse = rest * total;
  std::sort(fp.residuals.begin(), fp.residuals.end());
  return fp;
}

// --- ratio groups -----------------------------------------------------------

inline std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

struct Lattice {
  std::vector<std::int64_t> primes;       // ascending
  std::vector<std::vector<i128>> rows;  // row Hermite normal form
};

/// HNF of the exponent lattice of the subgroup of Q+ generated by n/d.
inline Lattice group_lattice(const std::vector<std::pair<std::int64_t, std::int64_t>>& gens) {
  std::vector<std::int64_t> primes;
  std::vector<std::vector<std::pair<std::int64_t, int>>> fn, fd;
  for (auto [n, d] : gens) {
    const auto g = static_cast<std::int64_t>(gcd(n, d));
    fn.push_back(factor(n / g));
    fd.push_back(factor(d / g));
    for (const auto& f : fn.back()) primes.push_back(f.first);
    for (const auto& f : fd.back()) primes.push_back(f.first);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  const std::size_t m = primes.size();
  auto col = [&](std::int64_t p) {
    return static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), p) -
                                    primes.begin());
  };
  std::vector<std::vector<i128>> rows;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<i128> row(m, 0);
    for (const auto& [p, e] : fn[i]) row[col(p)] += e;
    for (const auto& [p, e] : fd[i]) row[col(p)] -= e;
    rows.push_back(row);
  }
  auto abs = [](i128 v) { return v < 0 ? -v : v; };
  // Textbook HNF: Euclid down each column, then reduce above the pivot.
  std::size_t pivot_row = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  for (std::size_t c = 0; c < m && pivot_row < rows.size(); ++c) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot_row; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        if (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c])) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const i128 q = rows[r][c] / rows[pivot_row][c];
        for (std::size_t k = 0; k < m; ++k) rows[r][k] -= q * rows[pivot_row][k];
        if (rows[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[pivot_row][c] == 0) continue;
    if (rows[pivot_row][c] < 0) {
      for (auto& x : rows[pivot_row]) x = -x;
    }
    pivots.emplace_back(pivot_row, c);
    ++pivot_row;
  }
  for (const auto& [pr, c] : pivots) {
    for (std::size_t r = 0; r < pr; ++r) {
      i128 q = rows[r][c] / rows[pr][c];
      if (rows[r][c] - q * rows[pr][c] < 0) --q;
      for (std::size_t k = 0; k < m; ++k) rows[r][k] -= q * rows[pr][k];
    }
  }
  rows.resize(pivot_row);
  return {primes, rows};
}

}  // namespace oracle
