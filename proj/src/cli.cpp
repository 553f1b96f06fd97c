#include "vna/json_io.hpp"
#include "vna/shell.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

namespace vna {

namespace {

struct Inputs {
  std::vector<std::string> files;
  std::string expr;
  std::string format = "json";
};

void add_inputs(CLI::App* cmd, Inputs& in, const char* files_help) {
  cmd->add_option("files", in.files, files_help);
  cmd->add_option("-e,--expr", in.expr, "expression instead of files");
  cmd->add_option("--format", in.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
}

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

ProductExpr load_expression(const Inputs& in, std::size_t max_files) {
  if (!in.expr.empty()) {
    if (!in.files.empty()) usage("give either files or --expr, not both");
    return parse_expression(in.expr);
  }
  if (in.files.empty() || in.files.size() > max_files) {
    usage("expected " + std::string(max_files == 1 ? "one algebra file" : "two algebra files") +
          " or --expr");
  }
  std::vector<ProductExpr> leaves;
  for (const auto& f : in.files) leaves.push_back(ProductExpr::of(algebra_from_json(read_json_file(f))));
  if (leaves.size() == 1) return leaves.front();
  return ProductExpr::node(ProductExpr::Op::FreeProduct, std::move(leaves));
}

std::pair<Algebra, Algebra> binary_operands(const Inputs& in) {
  const ProductExpr e = load_expression(in, 2);
  if (e.op != ProductExpr::Op::FreeProduct || e.children.size() != 2) {
    usage("derive needs exactly two free factors");
  }
  return {evaluate(e.children[0]), evaluate(e.children[1])};
}

bool text(const Inputs& in) { return in.format == "text"; }

void print(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact classifier for free products of weighted von Neumann algebras"};
  app.require_subcommand(1);

  Inputs classify_in;
  auto* classify = app.add_subcommand("classify", "closed-form free product classification");
  add_inputs(classify, classify_in, "two algebra JSON files");

  Inputs derive_in;
  std::string trace_path;
  std::optional<std::uint64_t> seed;
  auto* derive = app.add_subcommand("derive", "inductive derivation, checked against classify");
  add_inputs(derive, derive_in, "two algebra JSON files");
  derive->add_option("--trace", trace_path, "write the derivation trace here");
  derive->add_option("--seed", seed, "randomize the expansion order");

  std::string graph_file;
  std::optional<std::string> root;
  std::string root_mass = "1";
  std::string graph_format = "json";
  auto* graph = app.add_subcommand("graph", "classify a free graph algebra");
  graph->add_option("file", graph_file, "graph JSON file")->required();
  graph->add_option("--root", root, "root vertex (default: lowest label)");
  graph->add_option("--root-mass", root_mass, "state of the root vertex projection");
  graph->add_option("--format", graph_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  Inputs spectrum_in;
  auto* spectrum = app.add_subcommand("spectrum", "ratio group of an algebra or product");
  add_inputs(spectrum, spectrum_in, "one algebra JSON file");

  Inputs type_in;
  auto* type = app.add_subcommand("type", "Connes type of a free product");
  add_inputs(type, type_in, "two algebra JSON files");

  Inputs eval_in;
  auto* eval = app.add_subcommand("eval", "evaluate an expression to an algebra");
  add_inputs(eval, eval_in, "one algebra JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) {
      const Classification c = simplify_product_expression(load_expression(classify_in, 2));
      out << emit_report(c, text(classify_in) ? ReportFormat::Text : ReportFormat::Json)
          << '\n';
    } else if (derive->parsed()) {
      const auto [a, b] = binary_operands(derive_in);
      DeriveOptions options;
      options.seed = seed;
      const Derivation d = derive_free_product(a, b, options);
      if (!trace_path.empty()) {
        std::ofstream f(trace_path);
        if (!f) usage("cannot write trace file " + trace_path);
        f << to_json(d.trace).dump(2) << '\n';
      }
      out << emit_report(d.classification,
                         text(derive_in) ? ReportFormat::Text : ReportFormat::Json)
          << '\n';
    } else if (graph->parsed()) {
      const WeightedGraph g = graph_from_json(read_json_file(graph_file));
      const GraphClassification c = classify_graph(g, root, PosRat::parse(root_mass));
      if (graph_format == "text") {
        out << "T_{" << render_group(c.loop_group) << "}[" << to_string(c.diffuse_mass) << "]";
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
          if (c.atoms[v]) out << " ⊕ C(" << to_string(*c.atoms[v]) << "){" << g.vertices[v] << "}";
        }
        out << '\n';
      } else {
        print(out, to_json(g, c));
      }
    } else if (spectrum->parsed()) {
      const ProductExpr e = load_expression(spectrum_in, 1);
      RatioGroup group;
      if (e.op == ProductExpr::Op::FreeProduct) {
        const Classification c = simplify_product_expression(e);
        if (c.diffuse && c.diffuse->is_araki_woods()) {
          group = std::get<ArakiWoodsPiece>(c.diffuse->factor).group;
        }
      } else {
        group = point_spectrum(evaluate(e));
      }
      if (text(spectrum_in)) {
        out << render_group(group) << '\n';
      } else {
        print(out, Json{{"generators", to_json(group)}});
      }
    } else if (type->parsed()) {
      const std::string label =
          connes_type(simplify_product_expression(load_expression(type_in, 2)));
      if (text(type_in)) {
        out << label << '\n';
      } else {
        print(out, Json{{"type", label}});
      }
    } else if (eval->parsed()) {
      const Algebra a = evaluate(load_expression(eval_in, 1));
      require_valid(a);
      if (text(eval_in)) {
        out << render_text(a) << '\n';
      } else {
        print(out, to_json(a));
      }
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return 0;
}

}  // namespace vna
