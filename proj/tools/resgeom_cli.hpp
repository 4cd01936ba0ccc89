#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process
// with string streams; resgeom_main.cpp only forwards argv.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resgeom/matrix_io.hpp"
#include "resgeom/resgeom.hpp"

namespace resgeom::cli {

namespace exit_code {
constexpr int ok = 0;
constexpr int check_failed = 1;
constexpr int bad_input = 2;
}  // namespace exit_code

constexpr double kIdentityResidualLimit = 1e-8;

struct Invocation {
  std::string subcommand;
  std::string input = "-";
  io::Format format = io::Format::tsv;
  std::optional<double> tol;
  bool matrix_input = false;
  std::vector<std::string> keep;
  bool sqrt = false;
};

/// What the input document describes: a graph's Laplacian, or (with
/// --matrix) an arbitrary square matrix that may or may not be one.
struct LoadedInput {
  std::vector<std::string> labels;
  Matrix matrix;
};

namespace detail {

inline std::string read_all(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::SyntaxError, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

inline LoadedInput load(const Invocation& inv, std::istream& in) {
  const std::string text = read_all(inv.input, in);
  if (inv.matrix_input) {
    std::istringstream s(text);
    io::LabeledMatrix lm = io::read_matrix_tsv(s);
    return {std::move(lm.labels), std::move(lm.matrix)};
  }
  const WeightedGraph g = parse_graph(text);
  return {g.labels(), build_laplacian(g).matrix()};
}

inline void kv(std::ostream& out, const std::string& key, const std::string& value) { out << key << '\t' << value << '\n'; }

inline std::string num(double x, io::Format f) { return io::format_number(x, f); }

inline std::vector<Index> resolve_labels(const std::vector<std::string>& wanted, const std::vector<std::string>& labels) {
  std::vector<Index> out;
  for (const auto& w : wanted) {
    const auto it = std::find(labels.begin(), labels.end(), w);
    if (it == labels.end()) throw Error(ErrorCode::IndexOutOfRange, "unknown node label '" + w + "'");
    out.push_back(static_cast<Index>(it - labels.begin()));
  }
  return out;
}

// Squared distances of the simplex whose pseudoinverse Gram is `mdag`; the
// resistance matrix when `mdag` is a Laplacian.
inline Matrix distances_of(const Matrix& mdag, const Tolerances& tol) {
  if (validate_laplacian(mdag, tol).verdict()) return resistance_matrix(LaplacianMatrix::from_matrix(mdag, tol)).matrix();
  return squared_distances_from_gram(GramPair::from_pseudoinverse(mdag, tol).gram());
}

}  // namespace detail

/// Executes one parsed invocation; returns the process exit status.
inline int execute(const Invocation& inv, std::istream& in, std::ostream& out, std::ostream& err) {
  const Tolerances tol = inv.tol ? Tolerances::uniform(*inv.tol) : Tolerances{};
  const io::Format f = inv.format;

  LoadedInput input;
  try {
    input = detail::load(inv, in);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  }
  const auto& labels = input.labels;

  try {
    // Subcommands that need a Laplacian validate --matrix input here.
    auto laplacian = [&] { return LaplacianMatrix::from_matrix(input.matrix, tol); };
    const std::string& cmd = inv.subcommand;

    if (cmd == "laplacian") {
      io::write_matrix(out, labels, laplacian().matrix(), f);
    } else if (cmd == "pinv") {
      io::write_matrix(out, labels, laplacian().pseudoinverse(), f);
    } else if (cmd == "resistance") {
      io::write_matrix(out, labels, resistance_matrix(laplacian()).matrix(), f);
    } else if (cmd == "embed") {
      io::write_matrix(out, labels, embed_from_laplacian(laplacian()).vertices(), f);
    } else if (cmd == "reduce") {
      const LaplacianMatrix q = laplacian();
      std::vector<Index> kept;
      try {
        kept = detail::resolve_labels(inv.keep, labels);
        [[maybe_unused]] const Partition partition(q.order(), kept);
      } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::bad_input;
      }
      std::vector<std::string> kept_labels;
      for (Index v : kept) kept_labels.push_back(labels[static_cast<std::size_t>(v)]);
      io::write_matrix(out, kept_labels, schur_complement(q, kept).matrix(), f);
    } else if (cmd == "spanning-trees") {
      const double count = spanning_tree_count(laplacian());
      if (f == io::Format::tsv) {
        detail::kv(out, "spanning_trees", detail::num(count, f));
      } else {
        out << "{\"spanning_trees\": " << detail::num(count, f) << "}\n";
      }
    } else if (cmd == "blocks") {
      const FiedlerBlocks fb = fiedler_blocks(laplacian());
      if (f == io::Format::tsv) {
        out << "node\tzeta\tr\n";
        for (std::size_t k = 0; k < labels.size(); ++k) {
          const auto i = static_cast<Index>(k);
          out << labels[k] << '\t' << detail::num(fb.zeta(i), f) << '\t' << detail::num(fb.r(i), f) << '\n';
        }
        detail::kv(out, "R", detail::num(fb.radius, f));
      } else {
        out << "{\"labels\": " << io::json_labels(labels) << ", \"zeta\": " << io::json_vector(fb.zeta)
            << ", \"r\": " << io::json_vector(fb.r) << ", \"R\": " << detail::num(fb.radius, f) << "}\n";
      }
    } else if (cmd == "angles") {
      const GramPair gp = GramPair::from_pseudoinverse(input.matrix, tol);
      const AngleClassification ac = dihedral_angles(gp, tol);
      const bool hyperacute = ac.count(AngleKind::obtuse) == 0;
      if (f == io::Format::tsv) {
        out << "i\tj\tcosine\tangle\tkind\n";
        for (const auto& p : ac.pairs) {
          out << labels[static_cast<std::size_t>(p.i)] << '\t' << labels[static_cast<std::size_t>(p.j)] << '\t'
              << detail::num(p.cosine, f) << '\t' << detail::num(p.angle, f) << '\t' << to_string(p.kind) << '\n';
        }
        detail::kv(out, "hyperacute", hyperacute ? "true" : "false");
      } else {
        out << "{\"labels\": " << io::json_labels(labels) << ", \"tolerance\": " << detail::num(ac.tolerance, f)
            << ", \"pairs\": [";
        for (std::size_t k = 0; k < ac.pairs.size(); ++k) {
          const auto& p = ac.pairs[k];
          out << (k ? ", " : "") << "{\"i\": " << io::json_string(labels[static_cast<std::size_t>(p.i)])
              << ", \"j\": " << io::json_string(labels[static_cast<std::size_t>(p.j)])
              << ", \"cosine\": " << detail::num(p.cosine, f) << ", \"angle\": " << detail::num(p.angle, f)
              << ", \"kind\": \"" << to_string(p.kind) << "\"}";
        }
        out << "], \"hyperacute\": " << (hyperacute ? "true" : "false") << "}\n";
      }
    } else if (cmd == "metric-check") {
      const Matrix d = detail::distances_of(input.matrix, tol);
      const MetricReport rep = check_metric(d, inv.sqrt ? MetricMode::sqrt : MetricMode::plain, tol);
      const std::string summary = std::to_string(rep.violations) + " violations";
      const char* mode = inv.sqrt ? "sqrt" : "plain";
      std::string worst = "none";
      if (rep.worst) {
        const auto& w = *rep.worst;
        worst = labels[static_cast<std::size_t>(w.i)] + " " + labels[static_cast<std::size_t>(w.j)] + " " +
                labels[static_cast<std::size_t>(w.k)] + " " + detail::num(w.excess, f);
      }
      if (f == io::Format::tsv) {
        detail::kv(out, "mode", mode);
        detail::kv(out, "triples_checked", std::to_string(rep.triples_checked));
        detail::kv(out, "violations", std::to_string(rep.violations));
        detail::kv(out, "indiscernibles", rep.indiscernibles ? "true" : "false");
        detail::kv(out, "worst", worst);
        detail::kv(out, "slack", detail::num(rep.slack, f));
        detail::kv(out, "summary", summary);
      } else {
        out << "{\"mode\": \"" << mode << "\", \"passed\": " << (rep.passed() ? "true" : "false")
            << ", \"triples_checked\": " << rep.triples_checked << ", \"violations\": " << rep.violations
            << ", \"indiscernibles\": " << (rep.indiscernibles ? "true" : "false") << ", \"worst\": ";
        if (rep.worst) {
          const auto& w = *rep.worst;
          out << "{\"i\": " << io::json_string(labels[static_cast<std::size_t>(w.i)])
              << ", \"j\": " << io::json_string(labels[static_cast<std::size_t>(w.j)])
              << ", \"k\": " << io::json_string(labels[static_cast<std::size_t>(w.k)])
              << ", \"excess\": " << detail::num(w.excess, f) << "}";
        } else {
          out << "null";
        }
        out << ", \"slack\": " << detail::num(rep.slack, f) << ", \"summary\": " << io::json_string(summary) << "}\n";
      }
      return rep.passed() ? exit_code::ok : exit_code::check_failed;
    } else if (cmd == "volume") {
      const double vol = cayley_menger_volume(detail::distances_of(input.matrix, tol));
      if (f == io::Format::tsv) {
        detail::kv(out, "volume", detail::num(vol, f));
      } else {
        out << "{\"volume\": " << detail::num(vol, f) << "}\n";
      }
    } else if (cmd == "verify-identity") {
      const bool is_laplacian = validate_laplacian(input.matrix, tol).verdict();
      const IdentityResidual res =
          is_laplacian ? verify_fiedler_identity(laplacian()) : verify_identity_general(input.matrix, tol);
      const bool passed = res.max() <= kIdentityResidualLimit;
      if (f == io::Format::tsv) {
        detail::kv(out, "laplacian", is_laplacian ? "true" : "false");
        detail::kv(out, "residual_ab", detail::num(res.ab, f));
        detail::kv(out, "residual_ba", detail::num(res.ba, f));
        detail::kv(out, "passed", passed ? "true" : "false");
      } else {
        out << "{\"laplacian\": " << (is_laplacian ? "true" : "false") << ", \"residual_ab\": " << detail::num(res.ab, f)
            << ", \"residual_ba\": " << detail::num(res.ba, f) << ", \"passed\": " << (passed ? "true" : "false")
            << "}\n";
      }
      return passed ? exit_code::ok : exit_code::check_failed;
    } else {
      err << "error: unknown subcommand '" << cmd << "'\n";
      return exit_code::bad_input;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::NotALaplacian:
      case ErrorCode::RankDeficient:
      case ErrorCode::DegenerateSimplex:
      case ErrorCode::DegenerateDistanceMatrix:
        return exit_code::check_failed;
      default:
        return exit_code::bad_input;
    }
  }
  return exit_code::ok;
}

/// Parses argv and runs the selected subcommand.
inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laplacians, effective resistances and hyperacute simplices", "resgeom"};
  app.require_subcommand(1, 1);

  Invocation inv;
  std::string format = "tsv";
  std::string keep;

  struct Spec {
    const char* name;
    const char* help;
  };
  const std::vector<Spec> specs = {
      {"laplacian", "Laplacian matrix of the graph"},
      {"pinv", "pseudoinverse Laplacian"},
      {"resistance", "effective resistance matrix"},
      {"embed", "simplex vertex coordinates, (n-1) x n"},
      {"angles", "dihedral angle cosines and acute/right/obtuse labels"},
      {"reduce", "Kron reduction onto the nodes given by --keep"},
      {"metric-check", "triangle inequalities of the resistances (or their square roots with --sqrt)"},
      {"volume", "simplex volume from the Cayley-Menger determinant"},
      {"verify-identity", "residual of the bordered resistance/Laplacian block identity"},
      {"spanning-trees", "(weighted) spanning tree count"},
      {"blocks", "diag of the pseudoinverse, circumcenter coordinates and circumradius"},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("input", inv.input, "edge-list file, or - for standard input")->capture_default_str();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();
    sub->add_option("--tol", inv.tol, "override the validation tolerances")->check(CLI::PositiveNumber);
    sub->add_flag("--matrix", inv.matrix_input, "input is a labelled TSV matrix instead of an edge list");
    if (std::string(s.name) == "reduce") sub->add_option("--keep", keep, "comma-separated labels to keep")->required();
    if (std::string(s.name) == "metric-check") sub->add_flag("--sqrt", inv.sqrt, "check square roots of the distances");
    sub->callback([&inv, name = std::string(s.name)] { inv.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_code::ok : exit_code::bad_input;
  }

  inv.format = format == "json" ? io::Format::json : io::Format::tsv;
  std::stringstream ks(keep);
  for (std::string item; std::getline(ks, item, ',');)
    if (!item.empty()) inv.keep.push_back(item);
  return execute(inv, in, out, err);
}

}  // namespace resgeom::cli
