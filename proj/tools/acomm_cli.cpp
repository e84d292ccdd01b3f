#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "acomm/census.hpp"
#include "acomm/errors.hpp"
#include "acomm/gamma_spaces.hpp"
#include "acomm/json_io.hpp"
#include "acomm/skew_forms.hpp"
#include "acomm/tuple_lab.hpp"

using namespace acomm;

namespace {

enum Exit { kOk = 0, kVerify = 1, kInput = 2, kCap = 3 };

struct Globals {
  std::string format = "json";
  double tol = 1e-9;
  std::int64_t max_den = 0;
  std::uint64_t cap = kDefaultCap;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

struct Result {
  Json inputs = Json::object();
  Json output;
  int code = kOk;
  std::string csv;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InputError("not an integer: " + s);
  }
  if (used != s.size()) throw InputError("not an integer: " + s);
  return v;
}

Rat1 parse_rat(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rat1::make(parse_int(s), 1);
  return Rat1::make(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

std::vector<Rat1> parse_rats(const std::string& s) {
  std::vector<Rat1> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_rat(item));
  return out;
}

/// "t,c_1,...,c_t"
Rank1Form parse_rank1(const std::string& s, std::size_t n) {
  const auto items = split(s, ',');
  if (items.empty()) throw InputError("--rank1 expects t,c_1,...,c_t");
  const std::int64_t t = parse_int(items[0]);
  if (t < 0 || static_cast<std::size_t>(t) + 1 != items.size())
    throw InputError("--rank1: expected " + items[0] + " coefficients after t");
  std::vector<std::int64_t> cs;
  for (std::size_t i = 1; i < items.size(); ++i) cs.push_back(parse_int(items[i]));
  return Rank1Form::make(cs, n);
}

/// Accepts a bare payload or a previous command's result object.
Json load_payload(const std::string& path) {
  Json j;
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    j = parse_json(buf.str());
  } else {
    j = read_json_file(path);
  }
  if (j.is_object() && j.contains("command") && j.contains("output")) return j["output"];
  return j;
}

Result run_census(const Globals& g, int n, std::int64_t m, bool oracle) {
  Result res;
  res.inputs = {{"n", n}, {"m", m}, {"oracle", oracle}};
  const BigInt total = n_general(n, m);
  res.output = {{"n", n}, {"m", m}, {"total", total.str()}};
  res.csv = "source,orders,count\nformula,," + total.str() + "\n";
  if (oracle) {
    const CensusReport rep = brute_force_census(n, m, {g.cap, g.jobs});
    const bool match = rep.total == total;
    res.output["oracle"] = rep;
    res.output["match"] = match;
    for (const auto& [orders, count] : rep.by_class) {
      std::string key;
      for (auto o : orders) key += (key.empty() ? "" : ";") + std::to_string(o);
      res.csv += "oracle," + key + "," + count.str() + "\n";
    }
    res.csv += "oracle,total," + rep.total.str() + "\nmatch,," + (match ? "MATCH" : "MISMATCH") + "\n";
    if (!match) res.code = kVerify;
  }
  return res;
}

Result run_normal_form(const Globals& g, const std::string& ring, const std::string& file) {
  Result res;
  res.inputs = {{"ring", ring}, {"file", file}};
  const Json payload = load_payload(file);
  if (ring == "qz") {
    const SkewQZ d = decode<SkewQZ>(payload);
    res.output = congruence_normal_form_qz(d);
    res.output["sigma"] = sigma(d, g.cap).str();
  } else {
    res.output = integer_skew_normal_form(decode<SkewZ>(payload));
  }
  return res;
}

SkewQZ target_form(const std::string& matrix_file, const std::string& ds, std::size_t n) {
  if (!matrix_file.empty()) return decode<SkewQZ>(load_payload(matrix_file));
  if (ds.empty() && n == 0) throw InputError("give --matrix or --ds with --n");
  return standard_block(parse_rats(ds), n);
}

Result run_build(const Globals& g, const std::string& ds, std::size_t n, std::size_t l,
                 const std::string& params_file, const std::string& matrix_file, std::size_t m,
                 bool random_angles, bool conj) {
  Result res;
  std::mt19937_64 rng(g.seed);
  ACTuple tuple;
  if (!matrix_file.empty()) {
    if (m == 0) throw InputError("--matrix requires --m");
    const SkewQZ d = decode<SkewQZ>(load_payload(matrix_file));
    res.inputs = {{"matrix", d}, {"m", m}};
    tuple = realize(d, m, rng);
  } else {
    ZDParameters p;
    if (!params_file.empty()) {
      p = decode<ZDParameters>(load_payload(params_file));
    } else {
      if (n == 0) throw InputError("build-tuple needs --n with --ds, or --params, or --matrix");
      p = ZDParameters::trivial(parse_rats(ds), n, l);
      if (random_angles) {
        std::uniform_int_distribution<std::int64_t> grid(0, 11);
        for (auto& row : p.alphas)
          for (auto& a : row) a = Rat1::make(grid(rng), 12);
        for (auto& row : p.betas)
          for (auto& b : row) b = Rat1::make(grid(rng), 12);
      }
    }
    res.inputs = {{"params", p}};
    tuple = build_zd(p);
  }
  if (conj) tuple = conjugate(tuple, random_unitary(tuple.m, rng));
  res.inputs["conjugate"] = conj;
  res.output = tuple;
  return res;
}

Result run_verify(const Globals& g, const std::string& file, const std::string& matrix_file,
                  const std::string& ds, std::size_t n, const std::string& params_file) {
  Result res;
  const ACTuple tuple = decode<ACTuple>(load_payload(file));
  const SkewQZ d = target_form(matrix_file, ds, n ? n : tuple.n);
  res.inputs = {{"file", file}, {"d", d}};
  const RelationReport rel = verify_relations(tuple, d, g.tol);
  res.output = {{"relations", rel}};
  bool ok = rel.passed;
  if (!params_file.empty()) {
    const auto p = decode<ZDParameters>(load_payload(params_file));
    const CharPolyReport cp = char_poly_check(tuple, p, std::max(g.tol, 1e-6));
    res.output["char_poly"] = cp;
    ok = ok && cp.passed;
  }
  res.output["passed"] = ok;
  if (!ok) res.code = kVerify;
  return res;
}

Result run_classify(const Globals& g, const std::string& file) {
  Result res;
  res.inputs = {{"file", file}};
  res.output = rho_classify(decode<ACTuple>(load_payload(file)), g.tol, g.max_den);
  return res;
}

Result run_extract(const Globals& g, const std::string& file, const std::string& matrix_file,
                   const std::string& ds) {
  Result res;
  const ACTuple tuple = decode<ACTuple>(load_payload(file));
  const SkewQZ d = target_form(matrix_file, ds, tuple.n);
  res.inputs = {{"file", file}, {"d", d}};
  const SpectralData sd = extract_canonical_basis(tuple, d, g.tol, g.max_den);
  res.output = sd;
  res.output["orbit_data"] = normalized_orbit_data(sd.params);
  return res;
}

Result run_gamma(const Globals& g, const std::string& rank1, std::size_t n, const std::string& ext,
                 std::optional<std::int64_t> m, bool enumerate, bool count, bool moduli, bool omega) {
  Result res;
  if (rank1.empty() == ext.empty()) throw InputError("gamma needs exactly one of --rank1 and --ext");
  if (enumerate + count + moduli + omega != 1)
    throw InputError("gamma needs exactly one of --enumerate, --count, --moduli, --omega");
  if (omega) {
    CentralExtension gx;
    if (!ext.empty()) {
      gx = decode<CentralExtension>(load_payload(ext));
      res.inputs = {{"ext", ext}};
    } else {
      const Rank1Form f = parse_rank1(rank1, n);
      gx = CentralExtension::from_rank1(f);
      res.inputs = {{"rank1", {{"n", f.n}, {"cs", f.cs}}}};
    }
    res.inputs["extension"] = gx;
    const IntMatrix om = omega_matrix(gx);
    res.output = {{"omega", om}, {"analysis", omega_analysis(om, g.cap)}};
    return res;
  }
  if (rank1.empty()) throw InputError("--enumerate, --count and --moduli need --rank1");
  if (!m || *m < 1) throw InputError("gamma needs a positive m");
  const Rank1Form f = parse_rank1(rank1, n);
  res.inputs = {{"rank1", {{"n", f.n}, {"cs", f.cs}}}, {"m", *m}};
  if (count) {
    res.output = {{"count", count_components_rank1(f, *m).str()}};
  } else {
    const auto polys = enumerate_polys(f, *m, g.cap);
    Json list = Json::array();
    for (const auto& p : polys) {
      Json item = p;
      if (moduli) {
        item["blocks"] = component_for_poly(f, p);
        item["moduli"] = describe_moduli(f, p);
      }
      list.push_back(item);
    }
    res.output = {{"count", polys.size()}, {"polynomials", list}};
  }
  return res;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Components of spaces of almost commuting unitary tuples"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", g.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-den", g.max_den, "Largest denominator when snapping angles (0 = 720 m)");
  app.add_option("--cap", g.cap, "Enumeration size cap");
  app.add_option("--jobs", g.jobs, "Worker threads for census")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "Random seed");

  std::function<Result()> action;
  std::string name;

  int cn = 0;
  std::int64_t cm = 0;
  bool oracle = false;
  auto* census = app.add_subcommand("census", "Count components of B_n(U(m))");
  census->add_option("n", cn)->required()->check(CLI::Range(2, 64));
  census->add_option("m", cm)->required()->check(CLI::PositiveNumber);
  census->add_flag("--oracle", oracle, "Also run the brute-force census");
  census->callback([&] { action = [&] { return run_census(g, cn, cm, oracle); }; });

  std::string ring = "qz", nf_file;
  auto* nf = app.add_subcommand("normal-form", "Congruence normal form of a skew matrix");
  nf->add_option("--ring", ring)->check(CLI::IsMember({"qz", "z"}));
  nf->add_option("file", nf_file, "Matrix JSON ('-' for stdin)")->required();
  nf->callback([&] { action = [&] { return run_normal_form(g, ring, nf_file); }; });

  std::string ds, params_file, matrix_file;
  std::size_t tn = 0, tl = 1, tm = 0;
  bool random_angles = false, conj = false;
  auto* build = app.add_subcommand("build-tuple", "Build a D-commuting tuple");
  build->add_option("--ds", ds, "Block entries, e.g. 1/2,1/3");
  build->add_option("--n", tn);
  build->add_option("--l", tl)->check(CLI::PositiveNumber);
  build->add_option("--params", params_file, "Spectral parameter JSON");
  build->add_option("--matrix", matrix_file, "Arbitrary skew matrix JSON");
  build->add_option("--m", tm, "Dimension for --matrix");
  build->add_flag("--random-angles", random_angles);
  build->add_flag("--conjugate", conj, "Conjugate by a random unitary");
  build->callback([&] {
    action = [&] { return run_build(g, ds, tn, tl, params_file, matrix_file, tm, random_angles, conj); };
  });

  std::string tuple_file;
  auto* verify = app.add_subcommand("verify-tuple", "Check the commutator relations of a tuple");
  verify->add_option("file", tuple_file)->required();
  verify->add_option("--matrix", matrix_file);
  verify->add_option("--ds", ds);
  verify->add_option("--n", tn);
  verify->add_option("--params", params_file, "Also check characteristic polynomials");
  verify->callback([&] { action = [&] { return run_verify(g, tuple_file, matrix_file, ds, tn, params_file); }; });

  auto* classify = app.add_subcommand("classify", "Commutator phases of a tuple");
  classify->add_option("file", tuple_file)->required();
  classify->callback([&] { action = [&] { return run_classify(g, tuple_file); }; });

  auto* extract = app.add_subcommand("extract", "Spectral parameters and basis of a tuple");
  extract->add_option("file", tuple_file)->required();
  extract->add_option("--matrix", matrix_file);
  extract->add_option("--ds", ds);
  extract->callback([&] { action = [&] { return run_extract(g, tuple_file, matrix_file, ds); }; });

  std::string rank1, ext;
  std::size_t gn = 0;
  std::optional<std::int64_t> gm;
  bool enumerate = false, count = false, moduli = false, omega = false;
  auto* gamma = app.add_subcommand("gamma", "Hom(Gamma, U(m)) for central extensions");
  gamma->add_option("--rank1", rank1, "t,c_1,...,c_t");
  gamma->add_option("--n", gn, "Rank of the quotient lattice (default 2t)");
  gamma->add_option("--ext", ext, "Extension JSON");
  gamma->add_option("m", gm);
  gamma->add_flag("--enumerate", enumerate);
  gamma->add_flag("--count", count);
  gamma->add_flag("--moduli", moduli);
  gamma->add_flag("--omega", omega);
  gamma->callback([&] {
    action = [&] { return run_gamma(g, rank1, gn, ext, gm, enumerate, count, moduli, omega); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  for (auto* sub : app.get_subcommands()) name = sub->get_name();

  const auto start = std::chrono::steady_clock::now();
  try {
    if (g.format == "csv" && name != "census") throw InputError("--format csv is only available for census");
    Result res = action();
    if (g.format == "csv") {
      std::cout << res.csv;
    } else {
      res.inputs["seed"] = g.seed;
      res.inputs["tol"] = g.tol;
      res.inputs["cap"] = g.cap;
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      Json out = {{"command", name}, {"inputs", res.inputs}, {"output", res.output}, {"timing_ms", ms}};
      std::cout << out.dump() << "\n";
    }
    return res.code;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ResourceCapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kCap;
  } catch (const std::overflow_error& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kCap;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerify;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant failed: " << e.what() << "\n";
    return kVerify;
  }
}
