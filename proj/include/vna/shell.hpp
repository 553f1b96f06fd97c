#pragma once

// Expression language, text rendering and the command-line driver.
//
//   expr := alg ("*" alg)*
//   alg  := prod ("(+)" prod)*
//   prod := term ("(x)" term)*
//   term := literal [":" name] | "(" expr ")" | "@" path
//
// Literals: M(w,..)  C(m)  LF(t;m)  LZ(m)  T(g,..;m)  B(head..;λ[;c])
// and HT[(w,..)^n, (w,..)^inf, ..; m]. "⊕", "⊗" are accepted for "(+)", "(x)".

#include "vna/classify.hpp"
#include "vna/error.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace vna {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// `@path` leaves are read as algebra JSON files.
ProductExpr parse_expression(std::string_view text);

enum class ReportFormat { Json, Text };

std::string render_summand(const Summand& s);
std::string render_group(const RatioGroup& g);
/// Decorated direct-sum notation, e.g. "T_{⟨2/3⟩}[5/6] ⊕ M2(1/10,1/15){ē≤e∧q}".
std::string render_text(const Classification& c, bool color = false);
std::string render_text(const Algebra& a);

/// JSON is the canonical dump; text honours VNA_COLOR=1.
std::string emit_report(const Classification& c, ReportFormat format);

/// 0 ok, 2 parse/validation/IO, 3 out of scope, 4 oracle mismatch.
int exit_code_for(ErrorCode code);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vna
