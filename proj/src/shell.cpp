#include "vna/shell.hpp"

#include "vna/json_io.hpp"

#include <cctype>
#include <cstdlib>

namespace vna {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ProductExpr parse() {
    ProductExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) error("unexpected input after expression");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) const { error_at(pos_, msg); }

  [[noreturn]] void error_at(std::size_t at, const std::string& msg) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      const auto c = static_cast<unsigned char>(text_[i]);
      if (c == '\n') {
        ++line;
        col = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col;  // count code points, not bytes
      }
    }
    // Continuation bytes of the character at `at` were skipped above.
    throw SyntaxError(line, col, msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(std::string_view s) {
    skip_space();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) error("expected '" + std::string(s) + "'");
  }

  static ProductExpr fold(ProductExpr::Op op, std::vector<ProductExpr> parts) {
    if (parts.size() == 1) return std::move(parts.front());
    return ProductExpr::node(op, std::move(parts));
  }

  ProductExpr expr() {
    std::vector<ProductExpr> parts{alg()};
    while (accept("*")) parts.push_back(alg());
    return fold(ProductExpr::Op::FreeProduct, std::move(parts));
  }

  ProductExpr alg() {
    std::vector<ProductExpr> parts{prod()};
    while (accept("(+)") || accept("⊕")) parts.push_back(prod());
    return fold(ProductExpr::Op::DirectSum, std::move(parts));
  }

  ProductExpr prod() {
    std::vector<ProductExpr> parts{term()};
    while (accept("(x)") || accept("⊗")) parts.push_back(term());
    return fold(ProductExpr::Op::Tensor, std::move(parts));
  }

  ProductExpr term() {
    skip_space();
    if (accept("@")) return file_reference();
    if (!peek("(+)") && !peek("(x)") && accept("(")) {
      ProductExpr e = expr();
      expect(")");
      return e;
    }
    Summand s = literal();
    if (accept(":")) {
      std::string name = identifier();
      std::visit([&](auto& x) { x.label = std::move(name); }, s);
    }
    return ProductExpr::of(Algebra{{}, {std::move(s)}});
  }

  ProductExpr file_reference() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '*') {
        break;
      }
      ++pos_;
    }
    if (pos_ == start) error("expected a file path after '@'");
    const std::string path(text_.substr(start, pos_ - start));
    try {
      return ProductExpr::of(algebra_from_json(read_json_file(path)));
    } catch (const Error& e) {
      error_at(start, e.what());
    }
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const auto c = static_cast<unsigned char>(text_[pos_]);
      if (std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) error("expected a label");
    return std::string(text_.substr(start, pos_ - start));
  }

  Rational rational() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    const auto digits = [&] {
      const std::size_t d = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      return pos_ > d;
    };
    if (!digits()) error_at(start, "expected a rational");
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      if (!digits()) error("expected a denominator");
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const Error& e) {
      error_at(start, e.what());
    }
  }

  std::vector<Rational> rational_list() {
    std::vector<Rational> out{rational()};
    while (accept(",")) out.push_back(rational());
    return out;
  }

  FreeGroupParam param() {
    if (accept("inf") || accept("∞")) return FreeGroupParam::infinite();
    if (accept("?")) return FreeGroupParam::unknown();
    const std::size_t start = pos_;
    const Rational t = rational();
    if (t < 1) error_at(start, "free group parameter must be at least 1");
    return FreeGroupParam::finite(t);
  }

  RatioGroup generators() {
    std::vector<PosRat> gens;
    const std::size_t start = pos_;
    for (const auto& g : rational_list()) {
      if (g <= 0) error_at(start, "group generators must be positive");
      gens.emplace_back(g);
    }
    return group_generate(gens);
  }

  Summand literal() {
    skip_space();
    const std::size_t start = pos_;
    if (accept("M(")) {
      MatrixBlock m{rational_list(), {}};
      expect(")");
      return m;
    }
    if (accept("C(")) {
      MatrixBlock m{{rational()}, {}};
      expect(")");
      return m;
    }
    if (accept("LF(")) {
      FreeGroupFactor f{param(), 0, {}};
      expect(";");
      f.mass = rational();
      expect(")");
      return f;
    }
    if (accept("LZ(")) {
      FreeGroupFactor f{FreeGroupParam::one(), rational(), {}};
      expect(")");
      return f;
    }
    if (accept("T(")) {
      ArakiWoods w{generators(), 0, {}};
      expect(";");
      w.mass = rational();
      expect(")");
      return w;
    }
    if (accept("B(")) {
      TypeIInfinite b;
      if (!peek(";")) b.head = rational_list();
      expect(";");
      b.ratio = rational();
      if (accept(";")) {
        b.tail_start = rational();
      } else {
        Rational head = 0;
        for (const auto& h : b.head) head += h;
        b.tail_start = (1 - head) * (1 - b.ratio);
      }
      expect(")");
      return b;
    }
    if (accept("HT[")) {
      HyperfiniteTensor h;
      do {
        expect("(");
        TensorFactor f{rational_list(), std::nullopt};
        expect(")");
        expect("^");
        if (!accept("inf") && !accept("∞")) {
          const std::size_t at = pos_;
          const Rational n = rational();
          if (n < 1 || boost::multiprecision::denominator(n) != 1) {
            error_at(at, "multiplicity must be a positive integer");
          }
          f.multiplicity = static_cast<std::uint64_t>(n);
        }
        h.factors.push_back(std::move(f));
      } while (accept(","));
      expect(";");
      h.mass = rational();
      expect("]");
      return h;
    }
    error_at(start, "expected an algebra term");
  }
};

std::string join_rats(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(v[i]);
  }
  return out;
}

std::string render_block(const std::vector<Rational>& w) {
  if (w.size() == 1) return "C(" + to_string(w[0]) + ")";
  return "M" + std::to_string(w.size()) + "(" + join_rats(w) + ")";
}

std::string render_diffuse(const DiffusePiece& d) {
  if (const auto* aw = std::get_if<ArakiWoodsPiece>(&d.factor)) {
    return "T_{" + render_group(aw->group) + "}[" + to_string(d.mass) + "]";
  }
  return "L(F_" + to_string(std::get<FreeGroupPiece>(d.factor).t) + ")[" +
         to_string(d.mass) + "]";
}

std::string paint(const std::string& s, const char* code, bool color) {
  if (!color) return s;
  return std::string("\x1b[") + code + "m" + s + "\x1b[0m";
}

}  // namespace

ProductExpr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string render_group(const RatioGroup& g) {
  std::string out = "⟨";
  const auto gens = generator_strings(g);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i > 0) out += ",";
    out += gens[i];
  }
  if (gens.empty()) out += "1";
  return out + "⟩";
}

std::string render_summand(const Summand& s) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MatrixBlock>) {
          return render_block(x.weights);
        } else if constexpr (std::is_same_v<T, TypeIInfinite>) {
          return "B(" + join_rats(x.head) + ";" + to_string(x.ratio) + ";" +
                 to_string(x.tail_start) + ")";
        } else if constexpr (std::is_same_v<T, FreeGroupFactor>) {
          return "L(F_" + to_string(x.t) + ")[" + to_string(x.mass) + "]";
        } else if constexpr (std::is_same_v<T, ArakiWoods>) {
          return "T_{" + render_group(x.group) + "}[" + to_string(x.mass) + "]";
        } else if constexpr (std::is_same_v<T, HyperfiniteTensor>) {
          std::string out = "HT[";
          for (std::size_t i = 0; i < x.factors.size(); ++i) {
            if (i > 0) out += ",";
            const auto& f = x.factors[i];
            out += "(" + join_rats(f.profile) + ")^" +
                   (f.multiplicity ? std::to_string(*f.multiplicity) : std::string("inf"));
          }
          return out + ";" + to_string(x.mass) + "]";
        } else {
          const std::string ti = std::visit(
              [](const auto& t) { return render_summand(Summand(t)); }, x.type_i);
          const std::string d =
              std::holds_alternative<FreeGroupParam>(x.diffuse)
                  ? "L(F_" + to_string(std::get<FreeGroupParam>(x.diffuse)) + ")"
                  : "T_{" + render_group(std::get<RatioGroup>(x.diffuse)) + "}";
          return ti + "⊗" + d + "[" + to_string(x.mass) + "]";
        }
      },
      s);
}

std::string render_text(const Classification& c, bool color) {
  std::vector<std::string> parts;
  if (c.diffuse) parts.push_back(paint(render_diffuse(*c.diffuse), "1;36", color));
  for (const auto& r : c.residuals) {
    parts.push_back(paint(render_block(r.weights), "33", color) + "{ē≤" +
                    r.provenance.block.display() + "∧" + r.provenance.atom.display() + "}");
  }
  for (const auto& s : c.passthrough) parts.push_back(render_summand(s));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += " ⊕ ";
    out += parts[i];
  }
  return out;
}

std::string render_text(const Algebra& a) {
  std::string out;
  for (std::size_t i = 0; i < a.summands.size(); ++i) {
    if (i > 0) out += " ⊕ ";
    out += render_summand(a.summands[i]);
  }
  return out;
}

std::string emit_report(const Classification& c, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(c).dump(2);
  const char* env = std::getenv("VNA_COLOR");
  return render_text(c, env != nullptr && std::string_view(env) == "1");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BothTracial:
    case ErrorCode::TrivialLoopGroup:
    case ErrorCode::UnsupportedInput:
    case ErrorCode::NoMatchingRule:
    case ErrorCode::DiffuseMassNonPositive:
      return 3;
    case ErrorCode::OracleMismatch:
      return 4;
    default:
      return 2;
  }
}

}  // namespace vna
