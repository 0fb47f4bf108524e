#include "schurgk/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace schurgk {

namespace {

// strtod rather than stod: gradual underflow to a subnormal is a valid
// result, only overflow and trailing junk are errors.
double parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || (errno == ERANGE && std::isinf(v)))
    throw std::invalid_argument(text);
  return v;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

void dump_into(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += pad + Json(it.key()).dump() + sep;
        dump_into(out, it.value(), indent, depth + 1);
      }
      out += close + '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); });
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",";
        if (!flat) out += pad;
        dump_into(out, j[i], indent, depth + 1);
      }
      out += flat ? "]" : close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt17(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  return out;
}

// ---------------------------------------------------------------------------

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) bad("empty Matrix Market input");
  std::istringstream head(line);
  std::string banner, object, format, field, symmetry;
  head >> banner >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "array" ||
      lower(field) != "complex" || lower(symmetry) != "general")
    bad("expected a Matrix Market 'matrix array complex general' header");
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  long rows = 0, cols = 0;
  {
    std::istringstream dims(line);
    if (!(dims >> rows >> cols) || rows <= 0 || cols <= 0) bad("bad Matrix Market size line");
  }
  Matrix m(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) {
      std::string re, im;
      if (!(in >> re >> im)) bad("Matrix Market data ends early");
      try {
        m(i, j) = Complex(parse_double(re), parse_double(im));
      } catch (const std::exception&) {
        bad("unparsable Matrix Market entry");
      }
    }
  std::string extra;
  if (in >> extra) bad("trailing data after Matrix Market entries");
  require_finite(m);
  return m;
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  out << "%%MatrixMarket matrix array complex general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << fmt17(m(i, j).real()) << ' ' << fmt17(m(i, j).imag()) << '\n';
}

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  try {
    const long rows = j.at("rows").get<long>();
    const long cols = j.at("cols").get<long>();
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    if (rows <= 0 || cols <= 0) bad("matrix dimensions must be positive");
    if (!re.is_array() || !im.is_array() || re.size() != static_cast<std::size_t>(rows * cols) ||
        im.size() != re.size())
      bad("matrix JSON needs rows*cols entries in both 're' and 'im'");
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long k = 0; k < cols; ++k) {
        const auto idx = static_cast<std::size_t>(i * cols + k);
        if (!re[idx].is_number() || !im[idx].is_number()) bad("matrix JSON entries must be numbers");
        m(i, k) = Complex(re[idx].get<double>(), im[idx].get<double>());
      }
    require_finite(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed matrix JSON: ") + e.what());
  }
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  char c = 0;
  while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
  }
  in.clear();
  in.seekg(0);
  if (c == '{') {
    try {
      return matrix_from_json(Json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      bad(std::string("invalid JSON in '") + path + "': " + e.what());
    }
  }
  return read_matrix_market(in);
}

void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (json)
    out << dump(matrix_to_json(m)) << '\n';
  else
    write_matrix_market(out, m);
}

// ---------------------------------------------------------------------------

Json structure_to_json(const JordanStructure& omega) {
  const GKVector g = gk_numbers(omega);
  Json eigs = Json::array();
  for (const auto& e : omega.entries) {
    Json item;
    item["re"] = e.eigenvalue.real();
    item["im"] = e.eigenvalue.imag();
    item["sizes"] = e.sizes;
    eigs.push_back(std::move(item));
  }
  Json j;
  j["eigs"] = std::move(eigs);
  j["m"] = g.m;
  j["k"] = g.k;
  if (!omega.warnings.empty()) j["warnings"] = omega.warnings;
  return j;
}

Json factorization_to_json(const TriangularJordanFactorization& f) {
  Json map = Json::array();
  for (const auto& block : f.block_map) {
    Json b = Json::array();
    for (int s : block) b.push_back(s + 1);
    map.push_back(std::move(b));
  }
  Json j;
  j["S0"] = matrix_to_json(f.S0);
  j["J0hat"] = matrix_to_json(f.J0hat);
  j["block_map"] = std::move(map);
  return j;
}

namespace {

Json points_to_json(const std::vector<ExperimentPoint>& points) {
  Json arr = Json::array();
  for (const auto& p : points) {
    Json item;
    item["scale"] = p.scale;
    item["input_distance"] = p.input_distance;
    item["schur_distance"] = p.schur_distance;
    arr.push_back(std::move(item));
  }
  return arr;
}

}  // namespace

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["kind"] = to_string(r.kind);
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["points"] = points_to_json(r.points);
  j["per_scale"] = points_to_json(r.per_scale);
  j["fitted_exponent"] = r.fitted_exponent;
  j["fitted_log_constant"] = r.fitted_log_constant;
  j["fit_skipped"] = r.fit_skipped;
  j["max_residual"] = r.max_residual;
  j["warnings"] = r.warnings;
  return j;
}

void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "scale,input_distance,schur_distance\n";
  for (const auto& p : r.points)
    out << fmt17(p.scale) << ',' << fmt17(p.input_distance) << ',' << fmt17(p.schur_distance) << '\n';
}

}  // namespace schurgk
