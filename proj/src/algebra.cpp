#include "vna/algebra.hpp"

#include "vna/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace vna {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Rational sum(const std::vector<Rational>& xs) {
  return std::accumulate(xs.begin(), xs.end(), Rational(0));
}

bool all_equal(const std::vector<Rational>& xs) {
  return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) ==
         xs.end();
}

// Ratio generators w_i / w_0 for a finite weight list.
void push_ratios(const std::vector<Rational>& w, std::vector<PosRat>& out) {
  for (std::size_t i = 1; i < w.size(); ++i) out.emplace_back(w[i] / w[0]);
}

RatioGroup type_i_spectrum(const std::variant<MatrixBlock, TypeIInfinite>& t);

RatioGroup matrix_spectrum(const std::vector<Rational>& w) {
  std::vector<PosRat> gens;
  push_ratios(w, gens);
  return group_generate(gens);
}

RatioGroup typeI_inf_spectrum(const TypeIInfinite& b) {
  std::vector<PosRat> gens{PosRat(b.ratio)};
  for (const auto& h : b.head) gens.emplace_back(h / b.tail_start);
  return group_generate(gens);
}

RatioGroup type_i_spectrum(const std::variant<MatrixBlock, TypeIInfinite>& t) {
  return std::visit(
      overloaded{[](const MatrixBlock& m) { return matrix_spectrum(m.weights); },
                 [](const TypeIInfinite& b) { return typeI_inf_spectrum(b); }},
      t);
}

std::string index_path(std::size_t i) {
  return "summands[" + std::to_string(i) + "]";
}

void check_positive(const Rational& x, const std::string& path,
                    const std::string& what, std::vector<Violation>& out) {
  if (x <= 0) out.push_back({path, what + " must be positive (non-faithful weight)"});
}

void check_weights(const std::vector<Rational>& w, const std::string& path,
                   std::vector<Violation>& out) {
  if (w.empty()) out.push_back({path, "empty weight list"});
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] <= 0) {
      out.push_back({path + "[" + std::to_string(j) + "]", "non-faithful weight"});
    }
  }
}

void check_type_i(const std::variant<MatrixBlock, TypeIInfinite>& t,
                  const std::string& path, bool normalized,
                  std::vector<Violation>& out) {
  const std::size_t before = out.size();
  std::visit(overloaded{
                 [&](const MatrixBlock& m) {
                   check_weights(m.weights, path + ".weights", out);
                 },
                 [&](const TypeIInfinite& b) {
                   for (std::size_t j = 0; j < b.head.size(); ++j) {
                     if (b.head[j] <= 0) {
                       out.push_back({path + ".head[" + std::to_string(j) + "]",
                                      "non-faithful weight"});
                     }
                   }
                   if (b.ratio <= 0 || b.ratio >= 1) {
                     out.push_back({path + ".ratio", "tail ratio must lie in (0,1)"});
                   }
                   check_positive(b.tail_start, path + ".tail_start",
                                  "tail first term", out);
                 }},
             t);
  if (normalized && out.size() == before) {
    const Rational m = std::visit([](const auto& x) { return x.mass(); }, t);
    if (m != 1) out.push_back({path, "type I profile must have total weight 1"});
  }
}

void check_param(const FreeGroupParam& t, const std::string& path,
                 std::vector<Violation>& out) {
  if (t.kind == FreeGroupParam::Kind::Finite && t.value <= 1) {
    out.push_back({path, "free group parameter must exceed 1"});
  }
}

MatrixBlock normalized(const MatrixBlock& m) {
  MatrixBlock out = m;
  const Rational total = m.mass();
  for (auto& w : out.weights) w /= total;
  return out;
}

TypeIInfinite normalized(const TypeIInfinite& b) {
  TypeIInfinite out = b;
  const Rational total = b.mass();
  for (auto& h : out.head) h /= total;
  out.tail_start /= total;
  return out;
}

std::string combine_labels(const std::string& x, const std::string& y) {
  if (x.empty()) return y;
  if (y.empty()) return x;
  return x + "(x)" + y;
}

}  // namespace

FreeGroupParam FreeGroupParam::finite(Rational t) {
  if (t == 1) return one();
  return {Kind::Finite, std::move(t)};
}

std::string to_string(const FreeGroupParam& t) {
  switch (t.kind) {
    case FreeGroupParam::Kind::One: return "1";
    case FreeGroupParam::Kind::Finite: return to_string(t.value);
    case FreeGroupParam::Kind::Infinite: return "inf";
    case FreeGroupParam::Kind::Unknown: return "?";
  }
  return "?";
}

FreeGroupParam parse_free_group_param(std::string_view text) {
  if (text == "inf" || text == "∞") return FreeGroupParam::infinite();
  if (text == "?" || text == "unknown") return FreeGroupParam::unknown();
  return FreeGroupParam::finite(parse_rational(text));
}

Rational MatrixBlock::mass() const { return sum(weights); }

Rational TypeIInfinite::mass() const {
  return sum(head) + tail_start / (1 - ratio);
}

Rational Algebra::total_mass() const {
  Rational total = 0;
  for (const auto& s : summands) total += vna::mass(s);
  return total;
}

Rational mass(const Summand& s) {
  return std::visit(
      overloaded{[](const MatrixBlock& m) { return m.mass(); },
                 [](const TypeIInfinite& b) { return b.mass(); },
                 [](const auto& x) { return x.mass; }},
      s);
}

const std::string& label(const Summand& s) {
  return std::visit([](const auto& x) -> const std::string& { return x.label; },
                    s);
}

std::string kind_name(const Summand& s) {
  return std::visit(
      overloaded{[](const MatrixBlock&) { return "matrix"; },
                 [](const TypeIInfinite&) { return "typeI_inf"; },
                 [](const FreeGroupFactor&) { return "free_group"; },
                 [](const ArakiWoods&) { return "araki_woods"; },
                 [](const HyperfiniteTensor&) { return "hyperfinite_tensor"; },
                 [](const TensorSummand&) { return "tensor"; }},
      s);
}

bool is_atom(const Summand& s) {
  const auto* m = std::get_if<MatrixBlock>(&s);
  return m != nullptr && m->size() == 1;
}

bool is_diffuse(const Summand& s) {
  return !std::holds_alternative<MatrixBlock>(s) &&
         !std::holds_alternative<TypeIInfinite>(s);
}

bool is_one_dimensional(const Algebra& a) {
  return a.summands.size() == 1 && is_atom(a.summands.front());
}

std::vector<Violation> validate(const Algebra& a) {
  std::vector<Violation> out;
  if (a.summands.empty()) out.push_back({"summands", "algebra has no summands"});
  for (std::size_t i = 0; i < a.summands.size(); ++i) {
    const std::string path = index_path(i);
    std::visit(
        overloaded{
            [&](const MatrixBlock& m) { check_weights(m.weights, path + ".weights", out); },
            [&](const TypeIInfinite& b) {
              check_type_i(std::variant<MatrixBlock, TypeIInfinite>(b), path, false, out);
            },
            [&](const FreeGroupFactor& f) {
              check_param(f.t, path + ".t", out);
              check_positive(f.mass, path + ".mass", "mass", out);
            },
            [&](const ArakiWoods& w) {
              if (w.group.trivial()) {
                out.push_back({path + ".generators",
                               "free Araki-Woods factor needs a nontrivial group"});
              }
              check_positive(w.mass, path + ".mass", "mass", out);
            },
            [&](const HyperfiniteTensor& h) {
              bool diffuse = false;
              if (h.factors.empty()) out.push_back({path + ".factors", "no tensor factors"});
              for (std::size_t j = 0; j < h.factors.size(); ++j) {
                const auto& f = h.factors[j];
                const std::string fp = path + ".factors[" + std::to_string(j) + "]";
                const std::size_t before = out.size();
                check_weights(f.profile, fp + ".weights", out);
                if (out.size() == before && sum(f.profile) != 1) {
                  out.push_back({fp + ".weights", "tensor factor state must sum to 1"});
                }
                if (f.multiplicity && *f.multiplicity == 0) {
                  out.push_back({fp + ".multiplicity", "multiplicity must be positive"});
                }
                diffuse = diffuse || (f.profile.size() >= 2 && !f.multiplicity);
              }
              if (!diffuse) {
                out.push_back({path + ".factors",
                               "hyperfinite tensor is not diffuse (needs a factor of "
                               "dimension >= 2 with infinite multiplicity)"});
              }
              check_positive(h.mass, path + ".mass", "mass", out);
            },
            [&](const TensorSummand& t) {
              check_type_i(t.type_i, path + ".type_i", true, out);
              if (const auto* g = std::get_if<RatioGroup>(&t.diffuse)) {
                if (g->trivial()) {
                  out.push_back({path + ".diffuse",
                                 "free Araki-Woods factor needs a nontrivial group"});
                }
              } else {
                check_param(std::get<FreeGroupParam>(t.diffuse), path + ".diffuse.t", out);
              }
              check_positive(t.mass, path + ".mass", "mass", out);
            }},
        a.summands[i]);
  }
  return out;
}

void require_valid(const Algebra& a) {
  const auto violations = validate(a);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid algebra";
  if (!a.label.empty()) msg << " '" << a.label << "'";
  for (const auto& v : violations) msg << "; " << v.path << ": " << v.message;
  throw Error(ErrorCode::InvalidAlgebra, msg.str());
}

Summand rescale(const Summand& s, const Rational& c) {
  return std::visit(
      overloaded{[&](MatrixBlock m) -> Summand {
                   for (auto& w : m.weights) w *= c;
                   return m;
                 },
                 [&](TypeIInfinite b) -> Summand {
                   for (auto& h : b.head) h *= c;
                   b.tail_start *= c;
                   return b;
                 },
                 [&](auto x) -> Summand {
                   x.mass *= c;
                   return x;
                 }},
      s);
}

Algebra rescale(const Algebra& a, const Rational& c) {
  Algebra out{a.label, {}};
  out.summands.reserve(a.summands.size());
  for (const auto& s : a.summands) out.summands.push_back(rescale(s, c));
  return out;
}

RatioGroup point_spectrum(const Summand& s) {
  return std::visit(
      overloaded{
          [](const MatrixBlock& m) { return matrix_spectrum(m.weights); },
          [](const TypeIInfinite& b) { return typeI_inf_spectrum(b); },
          [](const FreeGroupFactor&) { return RatioGroup{}; },
          [](const ArakiWoods& w) { return w.group; },
          [](const HyperfiniteTensor& h) {
            RatioGroup g;
            for (const auto& f : h.factors) g = group_join(g, matrix_spectrum(f.profile));
            return g;
          },
          [](const TensorSummand& t) {
            RatioGroup g = type_i_spectrum(t.type_i);
            if (const auto* d = std::get_if<RatioGroup>(&t.diffuse)) g = group_join(g, *d);
            return g;
          }},
      s);
}

RatioGroup point_spectrum(const Algebra& a) {
  RatioGroup g;
  for (const auto& s : a.summands) g = group_join(g, point_spectrum(s));
  return g;
}

bool is_tracial(const Summand& s) {
  return std::visit(
      overloaded{[](const MatrixBlock& m) { return all_equal(m.weights); },
                 [](const TypeIInfinite&) { return false; },
                 [](const FreeGroupFactor&) { return true; },
                 [](const ArakiWoods&) { return false; },
                 [](const HyperfiniteTensor& h) {
                   return std::all_of(h.factors.begin(), h.factors.end(),
                                      [](const auto& f) { return all_equal(f.profile); });
                 },
                 [](const TensorSummand& t) {
                   const auto* m = std::get_if<MatrixBlock>(&t.type_i);
                   return m != nullptr && all_equal(m->weights) &&
                          std::holds_alternative<FreeGroupParam>(t.diffuse);
                 }},
      s);
}

bool is_tracial(const Algebra& a) {
  return std::all_of(a.summands.begin(), a.summands.end(),
                     [](const Summand& s) { return is_tracial(s); });
}

Summand tensor_simplify(const Summand& s) {
  const auto* t = std::get_if<TensorSummand>(&s);
  if (t == nullptr) return s;
  if (const auto* g = std::get_if<RatioGroup>(&t->diffuse)) {
    const RatioGroup ratios = type_i_spectrum(t->type_i);
    if (group_join(*g, ratios) == *g) return ArakiWoods{*g, t->mass, t->label};
    return s;
  }
  const auto* m = std::get_if<MatrixBlock>(&t->type_i);
  if (m == nullptr || !all_equal(m->weights)) return s;
  const auto& param = std::get<FreeGroupParam>(t->diffuse);
  // M_n (x) L(F_t) = L(F_{1 + n^2 (t - 1)}).
  FreeGroupParam out = param;
  if (param.kind == FreeGroupParam::Kind::Finite) {
    const Rational n(static_cast<long long>(m->size()));
    out = FreeGroupParam::finite(1 + n * n * (param.value - 1));
  }
  return FreeGroupFactor{out, t->mass, t->label};
}

Summand tensor_product(const Summand& x, const Summand& y) {
  const Rational mass_xy = mass(x) * mass(y);
  const std::string name = combine_labels(label(x), label(y));
  auto unsupported = [&]() -> Summand {
    throw Error(ErrorCode::UnsupportedInput,
                "tensor product of " + kind_name(x) + " and " + kind_name(y) +
                    " is not representable");
  };

  if (const auto* mx = std::get_if<MatrixBlock>(&x)) {
    if (const auto* my = std::get_if<MatrixBlock>(&y)) {
      MatrixBlock out{{}, name};
      for (const auto& a : mx->weights) {
        for (const auto& b : my->weights) out.weights.push_back(a * b);
      }
      return out;
    }
  }
  // Put the type I side on the left.
  const bool x_type_i = std::holds_alternative<MatrixBlock>(x) ||
                        std::holds_alternative<TypeIInfinite>(x);
  const bool y_type_i = std::holds_alternative<MatrixBlock>(y) ||
                        std::holds_alternative<TypeIInfinite>(y);
  if (!x_type_i && y_type_i) return tensor_product(y, x);

  if (const auto* mx = std::get_if<MatrixBlock>(&x)) {
    const MatrixBlock profile = normalized(*mx);
    if (const auto* h = std::get_if<HyperfiniteTensor>(&y)) {
      HyperfiniteTensor out = *h;
      out.factors.insert(out.factors.begin(), TensorFactor{profile.weights, 1});
      out.mass = mass_xy;
      out.label = name;
      return out;
    }
    if (const auto* t = std::get_if<TensorSummand>(&y)) {
      const auto* inner = std::get_if<MatrixBlock>(&t->type_i);
      if (inner == nullptr) return unsupported();
      const auto merged = std::get<MatrixBlock>(tensor_product(Summand(profile), Summand(*inner)));
      return tensor_simplify(TensorSummand{merged, t->diffuse, mass_xy, name});
    }
  }
  if (x_type_i) {
    std::variant<MatrixBlock, TypeIInfinite> profile =
        std::holds_alternative<MatrixBlock>(x)
            ? std::variant<MatrixBlock, TypeIInfinite>(normalized(std::get<MatrixBlock>(x)))
            : std::variant<MatrixBlock, TypeIInfinite>(normalized(std::get<TypeIInfinite>(x)));
    if (const auto* f = std::get_if<FreeGroupFactor>(&y)) {
      return tensor_simplify(TensorSummand{profile, f->t, mass_xy, name});
    }
    if (const auto* w = std::get_if<ArakiWoods>(&y)) {
      return tensor_simplify(TensorSummand{profile, w->group, mass_xy, name});
    }
    return unsupported();
  }
  if (const auto* hx = std::get_if<HyperfiniteTensor>(&x)) {
    if (const auto* hy = std::get_if<HyperfiniteTensor>(&y)) {
      HyperfiniteTensor out = *hx;
      out.factors.insert(out.factors.end(), hy->factors.begin(), hy->factors.end());
      out.mass = mass_xy;
      out.label = name;
      return out;
    }
  }
  return unsupported();
}

Algebra tensor_product(const Algebra& x, const Algebra& y) {
  Algebra out{combine_labels(x.label, y.label), {}};
  for (const auto& sx : x.summands) {
    for (const auto& sy : y.summands) out.summands.push_back(tensor_product(sx, sy));
  }
  return out;
}

MatrixBlock matrix(std::vector<Rational> weights, std::string label) {
  return MatrixBlock{std::move(weights), std::move(label)};
}

MatrixBlock atom(Rational mass, std::string label) {
  return MatrixBlock{{std::move(mass)}, std::move(label)};
}

MatrixBlock psi_lambda(std::size_t n, const Rational& lambda) {
  Rational power = 1;
  for (std::size_t i = 0; i < n; ++i) power *= lambda;
  const Rational scale = (1 - lambda) / (1 - power);
  MatrixBlock out;
  Rational w = scale;
  for (std::size_t i = 0; i < n; ++i) {
    out.weights.push_back(w);
    w *= lambda;
  }
  return out;
}

TypeIInfinite psi_lambda(const Rational& lambda) {
  return TypeIInfinite{{}, lambda, 1 - lambda, {}};
}

Algebra direct_sum(std::vector<Summand> summands, std::string label) {
  return Algebra{std::move(label), std::move(summands)};
}

}  // namespace vna
