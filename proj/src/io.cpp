#include "orbitlab/io.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <unistd.h>

namespace orbitlab::io {

namespace {

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

const Json& require(const Json& doc, const std::string& field) {
  if (!doc.is_object()) throw FormatError("<root>", "expected a JSON object");
  const auto it = doc.find(field);
  if (it == doc.end()) throw FormatError(field, "missing field");
  return *it;
}

int int_value(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw FormatError(where, "expected an integer");
  return v.get<int>();
}

double number_value(const Json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw FormatError(where, "number is not finite");
  return d;
}

void dump_into(const Json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map: keys already sorted
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_into(v[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_into(v[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", d == 0.0 ? 0.0 : d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(source + " line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)),
                      "invalid JSON");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

InputKind detect_kind(const Json& doc, const std::string& source) {
  if (!doc.is_object()) throw FormatError(source, "expected a JSON object");
  if (doc.contains("brackets")) return InputKind::Algebra;
  if (doc.contains("gram")) return InputKind::InnerProduct;
  if (doc.contains("weights")) return InputKind::Weights;
  if (doc.contains("beta")) return InputKind::Stratum;
  if (doc.contains("theta")) return InputKind::Theta;
  throw FormatError(source, "no recognised key (brackets, gram, weights, beta, theta)");
}

std::optional<double> file_tolerance(const Json& doc) {
  if (!doc.is_object() || !doc.contains("tolerance")) return std::nullopt;
  const double t = number_value(doc["tolerance"], "tolerance");
  if (!(t > 0)) throw FormatError("tolerance", "must be positive");
  return t;
}

LieAlgebra algebra_from_json(const Json& doc, std::optional<double> tolerance) {
  const int dim = int_value(require(doc, "dim"), "dim");
  if (dim < 1) throw FormatError("dim", "must be >= 1");
  const double tol = tolerance ? *tolerance : file_tolerance(doc).value_or(LieAlgebra::kDefaultTolerance);

  std::vector<std::string> labels;
  if (doc.contains("basis")) {
    const Json& basis = doc["basis"];
    if (!basis.is_array() || static_cast<int>(basis.size()) != dim) throw FormatError("basis", "expected dim strings");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!basis[i].is_string()) throw FormatError("basis[" + std::to_string(i) + "]", "expected a string");
      labels.push_back(basis[i].get<std::string>());
    }
  }

  const Json& brackets = require(doc, "brackets");
  if (!brackets.is_array()) throw FormatError("brackets", "expected an array");
  std::vector<BracketEntry> entries;
  std::set<std::tuple<int, int, int>> seen;
  for (std::size_t n = 0; n < brackets.size(); ++n) {
    const std::string where = "brackets[" + std::to_string(n) + "]";
    const Json& e = brackets[n];
    if (!e.is_object()) throw FormatError(where, "expected an object");
    BracketEntry b;
    for (const char* key : {"i", "j", "k", "c"})
      if (!e.contains(key)) throw FormatError(where + "." + key, "missing field");
    b.i = int_value(e["i"], where + ".i");
    b.j = int_value(e["j"], where + ".j");
    b.k = int_value(e["k"], where + ".k");
    b.c = number_value(e["c"], where + ".c");
    for (int idx : {b.i, b.j, b.k})
      if (idx < 0 || idx >= dim) throw FormatError(where, "index out of range [0, dim)");
    if (b.i == b.j && b.c != 0.0) throw FormatError(where, "antisymmetry: [e_i, e_i] must vanish");
    if (b.i >= b.j) throw FormatError(where, "only entries with i < j may be listed (antisymmetry is implied)");
    if (!seen.insert({b.i, b.j, b.k}).second) throw FormatError(where, "duplicate (i, j, k) entry");
    entries.push_back(b);
  }
  return LieAlgebra(dim, labels, entries, tol);
}

Matrix matrix_field(const Json& doc, const std::string& field, int rows, int cols) {
  const Json& a = require(doc, field);
  if (!a.is_array() || a.empty()) throw FormatError(field, "expected a nonempty array of rows");
  const auto r = static_cast<Eigen::Index>(a.size());
  if (!a[0].is_array() || a[0].empty()) throw FormatError(field + "[0]", "expected a nonempty array");
  const auto c = static_cast<Eigen::Index>(a[0].size());
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols))
    throw FormatError(field, "expected " + std::to_string(rows) + " x " + std::to_string(cols) + " entries");
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    const Json& v = a[static_cast<std::size_t>(i)];
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != c) throw FormatError(row, "ragged row");
    for (Eigen::Index j = 0; j < c; ++j)
      m(i, j) = number_value(v[static_cast<std::size_t>(j)], row + "[" + std::to_string(j) + "]");
  }
  return m;
}

InnerProduct inner_product_from_json(const Json& doc, double tolerance) {
  const int dim = int_value(require(doc, "dim"), "dim");
  if (dim < 1) throw FormatError("dim", "must be >= 1");
  return InnerProduct::make(matrix_field(doc, "gram", dim, dim), tolerance);
}

WeightVector weights_from_json(const Json& doc, double tolerance) {
  const Json& a = require(doc, "weights");
  if (!a.is_array() || a.empty()) throw FormatError("weights", "expected a nonempty array");
  std::vector<double> w;
  for (std::size_t i = 0; i < a.size(); ++i) w.push_back(number_value(a[i], "weights[" + std::to_string(i) + "]"));
  return WeightVector(w, tolerance);
}

std::string dump(const Json& doc) {
  std::string out;
  dump_into(doc, out, 0);
  out += "\n";
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot move report into '" + path + "'");
  }
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string algebra_hash(const LieAlgebra& l) {
  std::ostringstream canon;
  canon << l.dim();
  for (const auto& b : l.brackets()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, ";%d,%d,%d,%.17g", b.i, b.j, b.k, b.c);
    canon << buf;
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char hex[32];
  std::snprintf(hex, sizeof hex, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace orbitlab::io
