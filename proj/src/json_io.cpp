#include "acomm/json_io.hpp"

#include <fstream>
#include <sstream>

namespace acomm {

namespace {

std::int64_t as_int(const Json& j) {
  if (!j.is_number_integer()) throw InputError("expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

std::size_t as_size(const Json& j) {
  const std::int64_t v = as_int(j);
  if (v < 0) throw InputError("expected a non-negative integer, got " + j.dump());
  return static_cast<std::size_t>(v);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

const Json& array_of(const Json& j, std::size_t size, const char* what) {
  if (!j.is_array() || j.size() != size)
    throw InputError(std::string(what) + ": expected an array of length " + std::to_string(size));
  return j;
}

Json big(const BigInt& x) { return x.str(); }

BigInt to_big(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (!j.is_string()) throw InputError("expected a decimal string, got " + j.dump());
  const std::string s = j.get<std::string>();
  const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
  if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
    throw InputError("not a decimal integer: " + s);
  return BigInt(s);
}

Json rational(const BigRational& x) { return x.str(); }

BigRational to_rational(const Json& j) {
  if (!j.is_string()) throw InputError("expected a rational string, got " + j.dump());
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return BigRational(to_big(Json(s)));
  const BigInt den = to_big(Json(s.substr(slash + 1)));
  if (den == 0) throw InputError("zero denominator: " + s);
  return BigRational(to_big(Json(s.substr(0, slash))), den);
}

Json complex_matrix(const CMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back({a(i, k).real(), a(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix to_complex_matrix(const Json& j, std::size_t rows, std::size_t cols) {
  array_of(j, rows, "complex matrix");
  CMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    array_of(j[i], cols, "complex matrix row");
    for (std::size_t k = 0; k < cols; ++k) {
      const Json& z = array_of(j[i][k], 2, "complex entry");
      if (!z[0].is_number() || !z[1].is_number()) throw InputError("complex entry must be [re, im]");
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return a;
}

template <class T, class F>
Json matrix_json(const Matrix<T>& a, F&& cell) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < a.cols(); ++k) row.push_back(cell(a(i, k)));
    rows.push_back(row);
  }
  return rows;
}

template <class T, class F>
Matrix<T> matrix_from(const Json& j, F&& cell) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  Matrix<T> a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    array_of(j[i], cols, "matrix row");
    for (std::size_t k = 0; k < cols; ++k) a(i, k) = cell(j[i][k]);
  }
  return a;
}

template <class T>
std::vector<T> list_of(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array, got " + j.dump());
  std::vector<T> out;
  for (const auto& x : j) out.push_back(x.get<T>());
  return out;
}

std::vector<std::int64_t> ints(const Json& j) {
  if (!j.is_array()) throw InputError("expected an integer array, got " + j.dump());
  std::vector<std::int64_t> out;
  for (const auto& x : j) out.push_back(as_int(x));
  return out;
}

}  // namespace

void to_json(Json& j, const Rat1& x) { j = Json::array({x.num(), x.den()}); }

void from_json(const Json& j, Rat1& x) {
  array_of(j, 2, "Q/Z element");
  const std::int64_t den = as_int(j[1]);
  if (den <= 0) throw InputError("Q/Z element needs a positive denominator");
  x = Rat1::make(as_int(j[0]), den);
}

void to_json(Json& j, const IntMatrix& a) {
  j = matrix_json(a, [](std::int64_t v) { return Json(v); });
}

void from_json(const Json& j, IntMatrix& a) { a = matrix_from<std::int64_t>(j, as_int); }

void to_json(Json& j, const SkewQZ& d) {
  j = Json::object();
  j["n"] = d.n();
  j["entries"] = matrix_json(d.entries(), [](const Rat1& x) { return Json(x); });
}

void from_json(const Json& j, SkewQZ& d) {
  const std::size_t n = as_size(field(j, "n"));
  const Json& e = array_of(field(j, "entries"), n, "entries");
  auto entries = matrix_from<Rat1>(e, [](const Json& x) { return x.get<Rat1>(); });
  if (entries.cols() != n) throw InputError("entries must be n x n");
  d = SkewQZ(std::move(entries));
}

void to_json(Json& j, const SkewZ& w) {
  j = Json::object();
  j["n"] = w.n();
  j["entries"] = w.entries();
}

void from_json(const Json& j, SkewZ& w) {
  const std::size_t n = as_size(field(j, "n"));
  IntMatrix e = array_of(field(j, "entries"), n, "entries").get<IntMatrix>();
  if (e.cols() != n) throw InputError("entries must be n x n");
  w = SkewZ(std::move(e));
}

void to_json(Json& j, const NormalFormQZ& f) {
  j = Json::object();
  j["ring"] = "qz";
  j["t"] = f.t;
  j["ds"] = f.ds;
  j["orders"] = f.orders();
  j["transform"] = f.transform;
  j["sigma"] = big(f.order_product());
}

void from_json(const Json& j, NormalFormQZ& f) {
  f.ds = list_of<Rat1>(field(j, "ds"));
  f.t = as_size(field(j, "t"));
  if (f.t != f.ds.size()) throw InputError("normal form: t does not match ds");
  f.transform = field(j, "transform").get<IntMatrix>();
}

void to_json(Json& j, const NormalFormZ& f) {
  j = Json::object();
  j["ring"] = "z";
  j["t"] = f.t;
  j["cs"] = f.cs;
  j["transform"] = f.transform;
}

void from_json(const Json& j, NormalFormZ& f) {
  f.cs = ints(field(j, "cs"));
  f.t = as_size(field(j, "t"));
  if (f.t != f.cs.size()) throw InputError("normal form: t does not match cs");
  f.transform = field(j, "transform").get<IntMatrix>();
}

void to_json(Json& j, const CensusReport& r) {
  j = Json::object();
  j["n"] = r.n;
  j["m"] = r.m;
  j["total"] = big(r.total);
  Json classes = Json::array();
  for (const auto& [orders, count] : r.by_class) classes.push_back({{"orders", orders}, {"count", big(count)}});
  j["by_class"] = classes;
}

void from_json(const Json& j, CensusReport& r) {
  r.n = static_cast<int>(as_int(field(j, "n")));
  r.m = as_int(field(j, "m"));
  r.total = to_big(field(j, "total"));
  r.by_class.clear();
  for (const auto& c : field(j, "by_class")) r.by_class[ints(field(c, "orders"))] = to_big(field(c, "count"));
}

void to_json(Json& j, const ACTuple& t) {
  j = Json::object();
  j["n"] = t.n;
  j["m"] = t.m;
  Json mats = Json::array();
  for (const auto& a : t.mats) mats.push_back(complex_matrix(a));
  j["mats"] = mats;
}

void from_json(const Json& j, ACTuple& t) {
  t.n = as_size(field(j, "n"));
  t.m = as_size(field(j, "m"));
  const Json& mats = array_of(field(j, "mats"), t.n, "mats");
  t.mats.clear();
  for (const auto& a : mats) t.mats.push_back(to_complex_matrix(a, t.m, t.m));
}

void to_json(Json& j, const ZDParameters& p) {
  j = Json::object();
  j["ds"] = p.ds;
  j["n"] = p.n;
  j["l"] = p.l;
  j["alphas"] = p.alphas;
  j["betas"] = p.betas;
}

void from_json(const Json& j, ZDParameters& p) {
  p.ds = list_of<Rat1>(field(j, "ds"));
  p.n = as_size(field(j, "n"));
  p.l = as_size(field(j, "l"));
  p.alphas.clear();
  p.betas.clear();
  for (const auto& row : field(j, "alphas")) p.alphas.push_back(list_of<Rat1>(row));
  for (const auto& row : field(j, "betas")) p.betas.push_back(list_of<Rat1>(row));
}

void to_json(Json& j, const SpectralData& s) {
  j = Json::object();
  j["params"] = s.params;
  j["basis"] = complex_matrix(s.basis);
}

void from_json(const Json& j, SpectralData& s) {
  s.params = field(j, "params").get<ZDParameters>();
  const Json& b = field(j, "basis");
  const std::size_t rows = b.is_array() ? b.size() : 0;
  s.basis = to_complex_matrix(b, rows, rows);
}

void to_json(Json& j, const RelationReport& r) {
  j = Json::object();
  j["passed"] = r.passed;
  j["unitarity_defect"] = r.unitarity_defect;
  Json pairs = Json::array();
  for (const auto& p : r.pairs)
    pairs.push_back({{"i", p.i}, {"j", p.j}, {"scalar_defect", p.scalar_defect}, {"angle_deviation", p.angle_deviation}});
  j["pairs"] = pairs;
  j["failing_pair"] = r.failing_pair ? Json::array({r.failing_pair->first, r.failing_pair->second}) : Json(nullptr);
}

void from_json(const Json& j, RelationReport& r) {
  r.passed = field(j, "passed").get<bool>();
  r.unitarity_defect = field(j, "unitarity_defect").get<double>();
  r.pairs.clear();
  for (const auto& p : field(j, "pairs"))
    r.pairs.push_back({as_size(field(p, "i")), as_size(field(p, "j")), field(p, "scalar_defect").get<double>(),
                       field(p, "angle_deviation").get<double>()});
  const Json& f = field(j, "failing_pair");
  if (f.is_null())
    r.failing_pair.reset();
  else
    r.failing_pair = std::pair{as_size(array_of(f, 2, "failing_pair")[0]), as_size(f[1])};
}

void to_json(Json& j, const CharPolyReport& r) {
  j = Json::object();
  j["passed"] = r.passed;
  j["max_deviation"] = r.max_deviation;
  j["deviations"] = r.deviations;
}

void from_json(const Json& j, CharPolyReport& r) {
  r.passed = field(j, "passed").get<bool>();
  r.max_deviation = field(j, "max_deviation").get<double>();
  r.deviations = field(j, "deviations").get<std::vector<double>>();
}

void to_json(Json& j, const PolyRoot& x) { j = Json{{"k", x.k}, {"a", x.a}, {"mult", x.mult}}; }

void from_json(const Json& j, PolyRoot& x) {
  x.k = as_int(field(j, "k"));
  x.a = as_int(field(j, "a"));
  x.mult = as_int(field(j, "mult"));
}

void to_json(Json& j, const PolySpec& p) { j = Json{{"m", p.m}, {"roots", p.roots}}; }

void from_json(const Json& j, PolySpec& p) {
  p.m = as_int(field(j, "m"));
  p.roots = list_of<PolyRoot>(field(j, "roots"));
  p.validate();
}

void to_json(Json& j, const PolyBlock& b) {
  j = Json{{"root", b.root}, {"d", b.d}, {"sigma", big(b.sigma)}, {"m_j", b.m_j}, {"l_j", b.l_j}};
}

void from_json(const Json& j, PolyBlock& b) {
  b.root = field(j, "root").get<PolyRoot>();
  b.d = field(j, "d").get<SkewQZ>();
  b.sigma = to_big(field(j, "sigma"));
  b.m_j = as_int(field(j, "m_j"));
  b.l_j = as_int(field(j, "l_j"));
}

void to_json(Json& j, const ModuliFactor& f) {
  j = Json{{"torus_dim", f.torus_dim}, {"power", f.power}, {"copies", big(f.copies)}};
}

void from_json(const Json& j, ModuliFactor& f) {
  f.torus_dim = as_size(field(j, "torus_dim"));
  f.power = as_int(field(j, "power"));
  f.copies = to_big(field(j, "copies"));
}

void to_json(Json& j, const CentralExtension& g) {
  j = Json::object();
  j["n"] = g.n;
  j["r"] = g.r;
  Json coeffs = Json::array();
  for (const auto& w : g.coeffs) coeffs.push_back(w.entries());
  j["coeffs"] = coeffs;
}

void from_json(const Json& j, CentralExtension& g) {
  g.n = as_size(field(j, "n"));
  g.r = as_size(field(j, "r"));
  g.coeffs.clear();
  for (const auto& c : array_of(field(j, "coeffs"), g.r, "coeffs")) {
    IntMatrix e = array_of(c, g.n, "coefficient matrix").get<IntMatrix>();
    if (e.cols() != g.n) throw InputError("coefficient matrices must be n x n");
    g.coeffs.emplace_back(std::move(e));
  }
  g.validate();
}

void to_json(Json& j, const OmegaAnalysis& a) {
  j = Json::object();
  j["rank"] = a.rank;
  j["nullity"] = a.nullity;
  j["B"] = big(a.B);
  j["C"] = big(a.C);
  j["P"] = big(a.P);
  j["Q"] = a.Q;
  j["U"] = a.U;
  j["pivots"] = a.pivots;
  j["R"] = matrix_json(a.R, rational);
}

void from_json(const Json& j, OmegaAnalysis& a) {
  a.rank = as_size(field(j, "rank"));
  a.nullity = as_size(field(j, "nullity"));
  a.B = to_big(field(j, "B"));
  a.C = to_big(field(j, "C"));
  a.P = to_big(field(j, "P"));
  a.Q = field(j, "Q").get<IntMatrix>();
  a.U = field(j, "U").get<IntMatrix>();
  a.pivots.clear();
  for (const auto& p : field(j, "pivots")) a.pivots.push_back(as_size(p));
  a.R = matrix_from<BigRational>(field(j, "R"), to_rational);
}

void to_json(Json& j, const EigenBlock& b) { j = Json{{"lam", b.lam}, {"dim", b.dim}}; }

void from_json(const Json& j, EigenBlock& b) {
  b.lam = list_of<Rat1>(field(j, "lam"));
  b.dim = as_int(field(j, "dim"));
}

void to_json(Json& j, const FTerm& t) { j = Json{{"d", t.d}, {"sigma", big(t.sigma)}, {"l", t.l}}; }

void from_json(const Json& j, FTerm& t) {
  t.d = field(j, "d").get<SkewQZ>();
  t.sigma = to_big(field(j, "sigma"));
  t.l = as_int(field(j, "l"));
}

void to_json(Json& j, const FDecomposition& f) { j = Json{{"m", f.m}, {"terms", f.terms}}; }

void from_json(const Json& j, FDecomposition& f) {
  f.m = as_int(field(j, "m"));
  f.terms = list_of<FTerm>(field(j, "terms"));
}

void to_json(Json& j, const FiberInfo& f) {
  j = Json{{"empty", f.empty}, {"components", big(f.components)}, {"torus_dim", f.torus_dim}};
}

void from_json(const Json& j, FiberInfo& f) {
  f.empty = field(j, "empty").get<bool>();
  f.components = to_big(field(j, "components"));
  f.torus_dim = as_size(field(j, "torus_dim"));
}

void to_json(Json& j, const RankRCount& c) {
  j = Json{{"nonempty", c.nonempty},
           {"components", big(c.components)},
           {"P", big(c.P)},
           {"nullity", c.nullity},
           {"descriptor", c.descriptor}};
}

void from_json(const Json& j, RankRCount& c) {
  c.nonempty = field(j, "nonempty").get<bool>();
  c.components = to_big(field(j, "components"));
  c.P = to_big(field(j, "P"));
  c.nullity = as_size(field(j, "nullity"));
  c.descriptor = list_of<ModuliFactor>(field(j, "descriptor"));
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

}  // namespace acomm
