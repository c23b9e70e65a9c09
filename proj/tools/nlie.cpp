// nlie: command-line front end for the metric Lie n-algebra library.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "nlie/nlie.hpp"

namespace {

using namespace nlie;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

AlgebraFile read_algebra(const std::string& path) {
  const std::string text = read_input(path);
  try {
    return parse_algebra_file(text);
  } catch (const ParseError& e) {
    throw ParseError((path.empty() || path == "-" ? std::string("<stdin>") : path) + ": " + e.what());
  }
}

MetricNAlgebra require_metric(const AlgebraFile& f, const char* verb) {
  if (!f.metric) throw UsageError(std::string(verb) + ": input file has no \"metric\" field");
  return f.metric_algebra();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

SignVector signs_or_default(const std::string& text, std::size_t n) {
  SignVector s = text.empty() ? SignVector::all_plus(n + 1) : SignVector::parse(text);
  if (s.size() != n + 1)
    throw UsageError("--signs must have length arity + 1 = " + std::to_string(n + 1) + ", got " +
                     std::to_string(s.size()));
  return s;
}

Rational positive_scale(const std::string& text) {
  const Rational q = Rational::parse(text);
  if (q.sign() <= 0) throw UsageError("--scale must be positive");
  return q;
}

/// "i..j", 1-based and inclusive.
std::vector<std::size_t> parse_block(const std::string& text, std::size_t dim) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("--block must look like i..j");
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("--block must look like i..j, got '" + text + "'");
    return static_cast<std::size_t>(std::stoul(s));
  };
  const std::size_t lo = number(text.substr(0, dots));
  const std::size_t hi = number(text.substr(dots + 2));
  if (lo < 1 || hi > dim || lo > hi) throw UsageError("--block " + text + " is not a range inside 1.." + std::to_string(dim));
  std::vector<std::size_t> idx;
  for (std::size_t i = lo; i <= hi; ++i) idx.push_back(i - 1);
  return idx;
}

Vector sized_vector(const std::string& text, std::size_t dim, const char* option) {
  Vector v = parse_vector(text);
  if (v.size() != dim)
    throw UsageError(std::string(option) + " needs " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with metric Lie n-algebras over the rationals"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output;
  app.add_option("-o,--output", output, "Write the result here instead of standard output");

  std::function<int()> action;

  // check
  auto* check = app.add_subcommand("check", "Verify the Jacobi identity and/or metric invariance");
  std::string check_file;
  bool check_jacobi_flag = false, check_metric_flag = false, check_all = false;
  check->add_option("FILE", check_file, "Algebra file (default: standard input)");
  check->add_flag("--jacobi", check_jacobi_flag, "Check the n-Jacobi identity");
  check->add_flag("--metric", check_metric_flag, "Check invariance of the metric");
  check->add_flag("--all", check_all, "Run every check that applies (default)");
  check->callback([&] {
    action = [&] {
      const AlgebraFile f = read_algebra(check_file);
      if (!check_jacobi_flag && !check_metric_flag) check_all = true;
      std::string text;
      bool failed = false;
      AdjointMaps ads = adjoint_maps(f.algebra);
      if (check_jacobi_flag || check_all) {
        const auto r = nlie::check_jacobi(f.algebra, ads);
        text += emit_violations(r);
        failed = failed || !r.ok();
      }
      if (check_metric_flag && !f.metric) throw UsageError("check --metric: input file has no \"metric\" field");
      if (f.metric && (check_metric_flag || check_all)) {
        if (!f.metric->nondegenerate()) {
          text += "metric: form is degenerate\n";
          failed = true;
        } else {
          const auto r = nlie::check_metric(f.metric_algebra(), ads);
          text += emit_violations(r);
          failed = failed || !r.ok();
        }
      } else if (check_all) {
        text += "metric: skipped (no metric)\n";
      }
      write_output(output, text);
      return failed ? kCheckFailed : kOk;
    };
  });

  // construct
  auto* construct = app.add_subcommand("construct", "Emit an algebra file for a standard family");
  construct->require_subcommand(1);
  construct->fallthrough();
  std::size_t arity = 0, copies = 0;
  std::string signs_text, scale_text = "1", blocks_text;

  auto* c_simple = construct->add_subcommand("simple", "Simple n-algebra with a sign vector");
  c_simple->add_option("--arity", arity, "n")->required()->check(CLI::Range(2, 64));
  c_simple->add_option("--signs", signs_text, "n+1 characters from '+-' (default all +)");
  c_simple->add_option("--scale", scale_text, "Positive rational scale of the metric (default 1)");
  c_simple->callback([&] {
    action = [&] {
      write_output(output, emit_algebra_file(simple(arity, signs_or_default(signs_text, arity), positive_scale(scale_text))));
      return kOk;
    };
  });

  auto* c_lor = construct->add_subcommand("lorentzian", "Indecomposable lorentzian double extension of m simple blocks");
  c_lor->add_option("--arity", arity, "n (at least 3)")->required()->check(CLI::Range(3, 64));
  c_lor->add_option("--copies", copies, "m (at least 1)")->required()->check(CLI::Range(1, 64));
  c_lor->callback([&] {
    action = [&] {
      write_output(output, emit_algebra_file(theorem_family(arity, copies)));
      return kOk;
    };
  });

  auto* c_med = construct->add_subcommand("medina", "Lorentzian Lie algebra from rotation blocks");
  c_med->add_option("--blocks", blocks_text, "a1,a2,... nonzero rotation speeds")->required();
  c_med->callback([&] {
    action = [&] {
      const Vector a = parse_vector(blocks_text);
      const BilinearForm w = BilinearForm::identity(2 * a.size());
      write_output(output, emit_algebra_file(medina_lorentzian(w, SkewEndomorphism(rotation_blocks(a), w))));
      return kOk;
    };
  });

  auto* c_dual = construct->add_subcommand("dualpair", "s + s* for the simple n-algebra s");
  c_dual->add_option("--arity", arity, "n")->required()->check(CLI::Range(2, 64));
  c_dual->add_option("--signs", signs_text, "Signs of s (default all +)");
  c_dual->add_option("--scale", scale_text, "Metric scale of s (default 1)");
  c_dual->callback([&] {
    action = [&] {
      write_output(output, emit_algebra_file(dual_pair(simple(arity, signs_or_default(signs_text, arity), positive_scale(scale_text)))));
      return kOk;
    };
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Structure report: centre, derived ideal, decomposition");
  std::string analyze_file;
  bool json = false;
  analyze->add_option("FILE", analyze_file, "Algebra file with metric (default: standard input)");
  analyze->add_flag("--json", json, "Print the report as JSON");
  analyze->callback([&] {
    action = [&] {
      const MetricNAlgebra m = require_metric(read_algebra(analyze_file), "analyze");
      const StructureReport r = structure_report(m);
      write_output(output, json ? emit_report_json(r) : emit_report_text(r));
      return (r.jacobi_ok && r.metric_ok && !r.inconsistent) ? kOk : kCheckFailed;
    };
  });

  // reduce
  auto* reduce = app.add_subcommand("reduce", "The (n-1)-algebra [x_1..x_{n-1}, z]");
  std::string reduce_file, element_text;
  reduce->add_option("FILE", reduce_file, "Algebra file (default: standard input)");
  reduce->add_option("--element", element_text, "z as c1,...,cd")->required();
  reduce->callback([&] {
    action = [&] {
      const AlgebraFile f = read_algebra(reduce_file);
      const Vector z = sized_vector(element_text, f.algebra.dim(), "--element");
      const NAlgebra r = reduce_by_element(f.algebra, z);
      write_output(output, emit_algebra_file(r, f.metric ? &*f.metric : nullptr));
      return kOk;
    };
  });

  // quotient
  auto* quotient = app.add_subcommand("quotient", "I / I^perp for a coisotropic ideal I");
  std::string quotient_file, ideal_text;
  quotient->add_option("FILE", quotient_file, "Algebra file with metric (default: standard input)");
  quotient->add_option("--ideal", ideal_text, "Spanning rows r1;r2;... each c1,...,cd")->required();
  quotient->callback([&] {
    action = [&] {
      const MetricNAlgebra m = require_metric(read_algebra(quotient_file), "quotient");
      std::vector<Vector> rows = parse_rows(ideal_text);
      for (const auto& r : rows)
        if (r.size() != m.dim()) throw UsageError("--ideal rows need " + std::to_string(m.dim()) + " entries");
      const QuotientResult q = quotient_coisotropic(m, Subspace::span(rows, m.dim()));
      write_output(output, emit_algebra_file(q.algebra));
      return kOk;
    };
  });

  // twist
  auto* twist = app.add_subcommand("twist", "Isometry moving a simple summand of a double extension into an ideal");
  std::string twist_file, block_text, x_text;
  bool algebra_only = false;
  twist->add_option("FILE", twist_file, "Double extension file, basis (u, v, W) (default: standard input)");
  twist->add_option("--block", block_text, "Basis range i..j (1-based) spanning the summand")->required();
  twist->add_option("--x", x_text, "Central element x of the summand as c1,...,cd")->required();
  twist->add_flag("--algebra-only", algebra_only, "Emit only the transported algebra file");
  twist->callback([&] {
    action = [&] {
      const MetricNAlgebra m = require_metric(read_algebra(twist_file), "twist");
      const auto idx = parse_block(block_text, m.dim());
      const Vector x = sized_vector(x_text, m.dim(), "--x");
      const TwistResult t = build_twist(m, Subspace::coordinate(m.dim(), idx), x);
      // In the transported basis the block itself is the nondegenerate ideal.
      const MetricNAlgebra moved = transport(m, inverse(t.phi));
      const std::string file = emit_algebra_file(moved);
      if (algebra_only) {
        write_output(output, file);
      } else {
        nlohmann::ordered_json j;
        j["phi"] = to_json(t.phi);
        j["calibration"] = t.calibration.str();
        nlohmann::ordered_json rep;
        rep["isometry_ok"] = t.isometry.ok();
        rep["image_is_ideal"] = t.ideal.ok();
        rep["image_nondegenerate"] = t.image_nondegenerate;
        rep["phi_u_norm"] = t.uu.str();
        rep["phi_u_perp_image"] = t.u_perp_image;
        rep["ok"] = t.ok();
        j["report"] = std::move(rep);
        j["algebra"] = nlohmann::ordered_json::parse(file);
        write_output(output, j.dump(2) + "\n");
      }
      return t.ok() ? kOk : kCheckFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const InvalidConstruction& e) {
    std::cerr << "error: " << e.what() << "\n" << emit_violations(e.report());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
