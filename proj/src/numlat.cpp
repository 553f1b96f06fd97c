#include "vna/numlat.hpp"

#include "vna/error.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <charconv>
#include <random>
#include <utility>

namespace vna {

namespace {

BigInt parse_natural(std::string_view digits, std::string_view whole) {
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::ParseError,
                "malformed rational '" + std::string(whole) + "'");
  }
  return BigInt(std::string(digits));
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::UnsupportedInput, "exponent lattice overflow");
  }
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw Error(ErrorCode::UnsupportedInput, "exponent lattice overflow");
  }
  return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// rows[i] -= q * rows[j]
void row_sub(std::vector<RatioGroup::Row>& rows, std::size_t i, std::size_t j,
             std::int64_t q) {
  if (q == 0) return;
  for (std::size_t c = 0; c < rows[i].size(); ++c) {
    rows[i][c] = checked_sub(rows[i][c], checked_mul(q, rows[j][c]));
  }
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t kLimit = 100000;
    std::vector<bool> composite(kLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kLimit; j += i) {
        composite[j] = true;
      }
    }
    return out;
  }();
  return primes;
}

BigInt pollard_brent(const BigInt& n, std::mt19937_64& rng) {
  if (n % 2 == 0) return BigInt(2);
  std::uniform_int_distribution<std::uint64_t> dist(1, 1u << 30);
  for (;;) {
    BigInt y = BigInt(dist(rng)) % n;
    const BigInt c = BigInt(dist(rng)) % n;
    const std::size_t m = 128;
    std::size_t r = 1;
    BigInt g = 1, q = 1, x, ys;
    do {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = (y * y + c) % n;
      std::size_t k = 0;
      do {
        ys = y;
        const std::size_t steps = std::min<std::size_t>(m, r - k);
        for (std::size_t i = 0; i < steps; ++i) {
          y = (y * y + c) % n;
          q = (q * (x > y ? x - y : y - x)) % n;
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(const BigInt& n, std::map<BigInt, std::int64_t>& out,
                std::mt19937_64& rng) {
  if (n == 1) return;
  if (boost::multiprecision::miller_rabin_test(n, 25)) {
    ++out[n];
    return;
  }
  const BigInt d = pollard_brent(n, rng);
  factor_rec(d, out, rng);
  factor_rec(n / d, out, rng);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  BigInt num = parse_natural(body.substr(0, slash), text);
  BigInt den = 1;
  if (slash != std::string_view::npos) {
    den = parse_natural(body.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::ParseError,
                  "zero denominator in '" + std::string(text) + "'");
    }
  }
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

PosRat::PosRat(const Rational& value) : value_(value) {
  if (value_ <= 0) {
    throw Error(ErrorCode::InvalidAlgebra,
                "expected a positive rational, got " + vna::to_string(value));
  }
}

PosRat::PosRat(std::int64_t num, std::int64_t den)
    : PosRat(Rational(BigInt(num), BigInt(den))) {}

PosRat PosRat::parse(std::string_view text) {
  return PosRat(parse_rational(text));
}

std::string to_string(const PosRat& q) { return to_string(q.value()); }

std::map<BigInt, std::int64_t> factor_integer(BigInt n) {
  std::map<BigInt, std::int64_t> out;
  if (n <= 1) return out;
  for (const std::uint32_t p : small_primes()) {
    if (BigInt(p) * p > n) break;
    while (n % p == 0) {
      ++out[BigInt(p)];
      n /= p;
    }
  }
  if (n == 1) return out;
  const std::uint64_t limit = small_primes().back();
  if (n < BigInt(limit) * limit) {
    ++out[n];
    return out;
  }
  std::mt19937_64 rng(0x5eed);
  factor_rec(n, out, rng);
  return out;
}

FactoredRat factor(const PosRat& q) {
  FactoredRat out;
  for (const auto& [p, e] : factor_integer(q.numerator())) out[p] += e;
  for (const auto& [p, e] : factor_integer(q.denominator())) out[p] -= e;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

PosRat reconstruct(const FactoredRat& f) {
  BigInt num = 1, den = 1;
  for (const auto& [p, e] : f) {
    BigInt& target = e > 0 ? num : den;
    target *= boost::multiprecision::pow(p, static_cast<unsigned>(e > 0 ? e : -e));
  }
  return PosRat(Rational(num, den));
}

void hermite_normal_form(std::vector<RatioGroup::Row>& rows,
                         std::size_t ncols) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < ncols && r < rows.size(); ++col) {
    // Euclid on column `col` among rows r.. until a single nonzero remains.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() ||
            std::abs(rows[i][col]) < std::abs(rows[best][col])) {
          best = i;
        }
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        row_sub(rows, i, r, rows[i][col] / rows[r][col]);
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0) {
      for (auto& x : rows[r]) x = -x;
    }
    for (std::size_t i = 0; i < r; ++i) {
      row_sub(rows, i, r, floor_div(rows[i][col], rows[r][col]));
    }
    ++r;
  }
  rows.resize(r);
}

RatioGroup RatioGroup::from_lattice(std::vector<BigInt> primes,
                                    std::vector<Row> rows) {
  // Sort columns by prime.
  std::vector<std::size_t> order(primes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return primes[a] < primes[b]; });
  std::vector<BigInt> sorted_primes;
  for (const auto i : order) sorted_primes.push_back(primes[i]);
  for (auto& row : rows) {
    Row sorted;
    for (const auto i : order) sorted.push_back(row[i]);
    row = std::move(sorted);
  }
  std::erase_if(rows, [](const Row& row) {
    return std::all_of(row.begin(), row.end(), [](auto x) { return x == 0; });
  });
  hermite_normal_form(rows, sorted_primes.size());

  // Drop primes whose column vanishes on the lattice.
  std::vector<bool> used(sorted_primes.size(), false);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) used[c] = used[c] || row[c] != 0;
  }
  RatioGroup g;
  for (std::size_t c = 0; c < sorted_primes.size(); ++c) {
    if (used[c]) g.primes_.push_back(sorted_primes[c]);
  }
  for (auto& row : rows) {
    Row kept;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (used[c]) kept.push_back(row[c]);
    }
    g.basis_.push_back(std::move(kept));
  }
  return g;
}

std::vector<PosRat> RatioGroup::generators() const {
  std::vector<PosRat> out;
  for (const auto& row : basis_) {
    FactoredRat f;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0) f[primes_[c]] = row[c];
    }
    PosRat g = reconstruct(f);
    if (g.value() > 1) g = g.inverse();
    out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RatioGroup group_generate(std::span<const PosRat> gens) {
  std::vector<FactoredRat> factored;
  std::vector<BigInt> primes;
  for (const auto& q : gens) {
    if (q.value() == 1) continue;
    factored.push_back(factor(q));
    for (const auto& [p, e] : factored.back()) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<RatioGroup::Row> rows;
  for (const auto& f : factored) {
    RatioGroup::Row row(primes.size(), 0);
    for (const auto& [p, e] : f) {
      const auto it = std::lower_bound(primes.begin(), primes.end(), p);
      row[static_cast<std::size_t>(it - primes.begin())] = e;
    }
    rows.push_back(std::move(row));
  }
  return RatioGroup::from_lattice(std::move(primes), std::move(rows));
}

RatioGroup group_generate(std::initializer_list<PosRat> gens) {
  return group_generate(std::span<const PosRat>(gens.begin(), gens.size()));
}

RatioGroup group_join(const RatioGroup& h, const RatioGroup& k) {
  if (k.trivial()) return h;
  if (h.trivial()) return k;
  std::vector<BigInt> primes = h.primes();
  primes.insert(primes.end(), k.primes().begin(), k.primes().end());
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<RatioGroup::Row> rows;
  auto embed = [&](const RatioGroup& g) {
    for (const auto& src : g.basis()) {
      RatioGroup::Row row(primes.size(), 0);
      for (std::size_t c = 0; c < src.size(); ++c) {
        const auto it =
            std::lower_bound(primes.begin(), primes.end(), g.primes()[c]);
        row[static_cast<std::size_t>(it - primes.begin())] = src[c];
      }
      rows.push_back(std::move(row));
    }
  };
  embed(h);
  embed(k);
  return RatioGroup::from_lattice(std::move(primes), std::move(rows));
}

bool group_member(const PosRat& q, const RatioGroup& h) {
  const FactoredRat f = factor(q);
  RatioGroup::Row v(h.primes().size(), 0);
  for (const auto& [p, e] : f) {
    const auto it = std::lower_bound(h.primes().begin(), h.primes().end(), p);
    if (it == h.primes().end() || *it != p) return false;
    v[static_cast<std::size_t>(it - h.primes().begin())] = e;
  }
  // Back-substitute through the echelon rows.
  std::size_t col = 0;
  for (const auto& row : h.basis()) {
    std::size_t pivot = col;
    while (row[pivot] == 0) ++pivot;
    for (; col < pivot; ++col) {
      if (v[col] != 0) return false;
    }
    if (v[pivot] % row[pivot] != 0) return false;
    const std::int64_t x = v[pivot] / row[pivot];
    for (std::size_t c = 0; c < v.size(); ++c) {
      v[c] = checked_sub(v[c], checked_mul(x, row[c]));
    }
    col = pivot + 1;
  }
  return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

GroupKind group_kind(const RatioGroup& h) {
  switch (h.rank()) {
    case 0:
      return {};
    case 1:
      return {GroupKind::Tag::Cyclic, h.generators().front()};
    default:
      return {GroupKind::Tag::HigherRank, PosRat(1)};
  }
}

std::vector<std::string> generator_strings(const RatioGroup& h) {
  std::vector<std::string> out;
  for (const auto& g : h.generators()) out.push_back(to_string(g));
  return out;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MassMismatch: return "MassMismatch";
    case ErrorCode::BothTracial: return "BothTracial";
    case ErrorCode::TrivialLoopGroup: return "TrivialLoopGroup";
    case ErrorCode::UnsupportedInput: return "UnsupportedInput";
    case ErrorCode::NoMatchingRule: return "NoMatchingRule";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::DiffuseMassNonPositive: return "DiffuseMassNonPositive";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

}  // namespace vna
