#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlie/algebra.hpp"
#include "nlie/analysis.hpp"
#include "nlie/errors.hpp"
#include "nlie/linalg.hpp"

namespace nlie {

/// Contents of an algebra file; `metric` is absent when the file has no "metric" field.
struct AlgebraFile {
  NAlgebra algebra;
  std::optional<BilinearForm> metric;

  MetricNAlgebra metric_algebra() const {
    if (!metric) throw PreconditionFailed("algebra file has no metric");
    return MetricNAlgebra(algebra, *metric);
  }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

inline std::size_t read_count(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected a non-negative integer");
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

inline Rational read_rational(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a rational string such as \"-3/4\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

inline void only_fields(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& path) {
  auto it = obj.find(name);
  if (it == obj.end()) fail(path.empty() ? name : path, std::string("missing field \"") + name + "\"");
  return *it;
}

}  // namespace detail

/// Parses the algebra file format. Syntax errors report line:column,
/// semantic errors the offending field path (e.g. brackets[2].on).
inline AlgebraFile parse_algebra_file(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = detail::line_col(text, at);
    std::string msg = e.what();
    // Keep only the description that follows "parse error at ...: ".
    if (auto p = msg.find(": syntax error"); p != std::string::npos) msg = msg.substr(p + 2);
    throw ParseError("line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
  if (!doc.is_object()) detail::fail("(top level)", "expected an object");
  detail::only_fields(doc, {"arity", "dim", "brackets", "metric"}, "");

  const std::size_t arity = detail::read_count(detail::field(doc, "arity", ""), "arity");
  if (arity < 2) detail::fail("arity", "must be at least 2");
  const std::size_t dim = detail::read_count(detail::field(doc, "dim", ""), "dim");

  const json& brackets = detail::field(doc, "brackets", "");
  if (!brackets.is_array()) detail::fail("brackets", "expected an array");
  NAlgebra::Table table;
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const std::string path = "brackets[" + std::to_string(b) + "]";
    const json& entry = brackets[b];
    if (!entry.is_object()) detail::fail(path, "expected an object");
    detail::only_fields(entry, {"on", "result"}, path);
    const json& on = detail::field(entry, "on", path + ".on");
    if (!on.is_array()) detail::fail(path + ".on", "expected an array of indices");
    if (on.size() != arity)
      detail::fail(path + ".on", "expected " + std::to_string(arity) + " indices, got " + std::to_string(on.size()));
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < on.size(); ++k) {
      const std::string ip = path + ".on[" + std::to_string(k) + "]";
      const std::size_t i = detail::read_count(on[k], ip);
      if (i < 1 || i > dim) detail::fail(ip, "index " + std::to_string(i) + " out of range 1.." + std::to_string(dim));
      if (!idx.empty() && i - 1 <= idx.back()) detail::fail(path + ".on", "indices must be strictly increasing");
      idx.push_back(i - 1);
    }
    IndexTuple key(std::move(idx));
    if (table.contains(key)) detail::fail(path + ".on", "duplicate bracket on " + key.str());

    const json& result = detail::field(entry, "result", path + ".result");
    if (!result.is_array()) detail::fail(path + ".result", "expected an array");
    Vector value(dim);
    std::vector<bool> seen(dim, false);
    for (std::size_t r = 0; r < result.size(); ++r) {
      const std::string rp = path + ".result[" + std::to_string(r) + "]";
      const json& term = result[r];
      if (!term.is_object()) detail::fail(rp, "expected an object");
      detail::only_fields(term, {"basis", "coeff"}, rp);
      const std::size_t i = detail::read_count(detail::field(term, "basis", rp + ".basis"), rp + ".basis");
      if (i < 1 || i > dim)
        detail::fail(rp + ".basis", "index " + std::to_string(i) + " out of range 1.." + std::to_string(dim));
      if (seen[i - 1]) detail::fail(rp + ".basis", "basis " + std::to_string(i) + " listed twice");
      seen[i - 1] = true;
      value[i - 1] = detail::read_rational(detail::field(term, "coeff", rp + ".coeff"), rp + ".coeff");
    }
    table.emplace(std::move(key), std::move(value));
  }

  AlgebraFile out{NAlgebra(arity, dim, std::move(table)), std::nullopt};
  if (auto it = doc.find("metric"); it != doc.end()) {
    const json& m = *it;
    if (!m.is_array() || m.size() != dim) detail::fail("metric", "expected " + std::to_string(dim) + " rows");
    Matrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const std::string rp = "metric[" + std::to_string(i) + "]";
      if (!m[i].is_array() || m[i].size() != dim) detail::fail(rp, "expected " + std::to_string(dim) + " entries");
      for (std::size_t j = 0; j < dim; ++j) g(i, j) = detail::read_rational(m[i][j], rp + "[" + std::to_string(j) + "]");
    }
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j)
        if (g(i, j) != g(j, i))
          detail::fail("metric[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                       "metric is not symmetric (" + g(i, j).str() + " vs " + g(j, i).str() + ")");
    out.metric = BilinearForm(std::move(g));
  }
  return out;
}

/// Canonical text: fields in the order arity, dim, brackets, metric, one
/// bracket or metric row per line, rationals in lowest terms.
inline std::string emit_algebra_file(const NAlgebra& alg, const BilinearForm* metric = nullptr) {
  std::ostringstream os;
  os << "{\n  \"arity\": " << alg.arity() << ",\n  \"dim\": " << alg.dim() << ",\n  \"brackets\": [";
  bool first = true;
  for (const auto& [key, value] : alg.table()) {
    os << (first ? "\n" : ",\n") << "    {\"on\": [";
    for (std::size_t k = 0; k < key.size(); ++k) os << (k ? ", " : "") << key[k] + 1;
    os << "], \"result\": [";
    bool term = false;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (value[i].is_zero()) continue;
      os << (term ? ", " : "") << "{\"basis\": " << i + 1 << ", \"coeff\": \"" << value[i].str() << "\"}";
      term = true;
    }
    os << "]}";
    first = false;
  }
  os << (first ? "]" : "\n  ]");
  if (metric) {
    os << ",\n  \"metric\": [";
    const Matrix& g = metric->gram();
    for (std::size_t i = 0; i < g.rows(); ++i) {
      os << (i ? ",\n" : "\n") << "    [";
      for (std::size_t j = 0; j < g.cols(); ++j) os << (j ? ", " : "") << '"' << g(i, j).str() << '"';
      os << "]";
    }
    os << (g.rows() ? "\n  ]" : "]");
  }
  os << "\n}\n";
  return os.str();
}

inline std::string emit_algebra_file(const MetricNAlgebra& malg) { return emit_algebra_file(malg.algebra, &malg.form); }

/// "c1,c2,...,cd"
inline Vector parse_vector(std::string_view text) {
  Vector v;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    v.push_back(Rational::parse(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return v;
}

/// "r1;r2;..." with each row as in parse_vector.
inline std::vector<Vector> parse_rows(std::string_view text) {
  std::vector<Vector> rows;
  std::size_t start = 0;
  while (true) {
    const std::size_t semi = text.find(';', start);
    std::string_view item = text.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start);
    if (!item.empty()) rows.push_back(parse_vector(item));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return rows;
}

inline nlohmann::ordered_json to_json(const Signature& s) { return nlohmann::ordered_json::array({s.p, s.q, s.r}); }

inline nlohmann::ordered_json to_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json to_json(const DecompositionResult& d) {
  nlohmann::ordered_json j;
  j["reassembly_ok"] = d.reassembly_ok;
  j["embeddings_ok"] = d.embeddings_ok;
  j["splits"] = nlohmann::ordered_json::array();
  for (const auto& s : d.splits) {
    nlohmann::ordered_json sj;
    sj["ideal_dim"] = s.ideal_dim;
    sj["complement_dim"] = s.complement_dim;
    sj["method"] = s.method;
    sj["verdict"] = to_string(s.verdict);
    j["splits"].push_back(std::move(sj));
  }
  j["factors"] = nlohmann::ordered_json::array();
  for (const auto& f : d.factors) {
    nlohmann::ordered_json fj;
    fj["dim"] = f.algebra.dim();
    fj["signature"] = to_json(f.algebra.form.signature());
    fj["verdict"] = to_string(f.verdict);
    fj["embedding"] = to_json(f.embedding);
    j["factors"].push_back(std::move(fj));
  }
  return j;
}

inline nlohmann::ordered_json to_json(const StructureReport& r) {
  nlohmann::ordered_json j;
  j["arity"] = r.arity;
  j["dim"] = r.dim;
  j["signature"] = to_json(r.signature);
  j["jacobi_ok"] = r.jacobi_ok;
  j["metric_ok"] = r.metric_ok;
  j["centre_dim"] = r.centre_dim;
  j["derived_dim"] = r.derived_dim;
  j["centreperp_equals_derived"] = r.centreperp_equals_derived;
  j["ideal_perp_ok"] = r.ideal_perp_ok;
  j["inconsistent"] = r.inconsistent;
  j["decomposition"] = r.decomposition ? to_json(*r.decomposition) : nlohmann::ordered_json(nullptr);
  return j;
}

inline std::string emit_report_json(const StructureReport& r) { return to_json(r).dump(2) + "\n"; }

inline std::string emit_report_text(const StructureReport& r) {
  std::ostringstream os;
  auto yn = [](bool b) { return b ? "true" : "false"; };
  os << "arity: " << r.arity << "\n"
     << "dim: " << r.dim << "\n"
     << "signature: (" << r.signature.p << "," << r.signature.q << "," << r.signature.r << ")\n"
     << "jacobi_ok: " << yn(r.jacobi_ok) << "\n"
     << "metric_ok: " << yn(r.metric_ok) << "\n"
     << "centre_dim: " << r.centre_dim << "\n"
     << "derived_dim: " << r.derived_dim << "\n"
     << "centreperp_equals_derived: " << yn(r.centreperp_equals_derived) << "\n"
     << "ideal_perp_ok: " << yn(r.ideal_perp_ok) << "\n"
     << "inconsistent: " << yn(r.inconsistent) << "\n";
  if (!r.decomposition) {
    os << "decomposition: not computed\n";
    return os.str();
  }
  const auto& d = *r.decomposition;
  os << "decomposition: " << d.factors.size() << (d.factors.size() == 1 ? " factor" : " factors")
     << " (reassembly " << (d.reassembly_ok ? "ok" : "FAILED") << ", embeddings " << (d.embeddings_ok ? "ok" : "FAILED")
     << ")\n";
  for (std::size_t k = 0; k < d.factors.size(); ++k) {
    const auto& f = d.factors[k];
    const Signature s = f.algebra.form.signature();
    os << "  factor " << k + 1 << ": dim " << f.algebra.dim() << ", signature (" << s.p << "," << s.q << "," << s.r
       << "), " << to_string(f.verdict) << "\n";
  }
  for (const auto& s : d.splits)
    os << "  split " << s.ideal_dim << " + " << s.complement_dim << " via " << s.method << ": " << to_string(s.verdict)
       << "\n";
  return os.str();
}

/// One line per witness: the tuples (1-based) followed by the mismatch vector.
inline std::string emit_violations(const ViolationReport& rep, std::size_t limit = 20) {
  std::ostringstream os;
  os << to_string(rep.kind) << ": ";
  if (rep.ok()) {
    os << "ok\n";
    return os.str();
  }
  os << rep.witnesses.size() << (rep.witnesses.size() == 1 ? " violation\n" : " violations\n");
  for (std::size_t k = 0; k < rep.witnesses.size() && k < limit; ++k) {
    const auto& w = rep.witnesses[k];
    os << " ";
    for (const auto& t : w.tuples) os << " " << t.str();
    os << " ->";
    for (const auto& x : w.mismatch) os << " " << x.str();
    os << "\n";
  }
  if (rep.witnesses.size() > limit) os << "  ... " << rep.witnesses.size() - limit << " more\n";
  return os.str();
}

}  // namespace nlie
