#include "acomm/tuple_lab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "acomm/errors.hpp"

namespace acomm {

namespace {

using Poly = std::vector<Complex>;

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, Complex{0, 0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly poly_pow(const Poly& a, std::size_t e) {
  Poly r{Complex{1, 0}};
  for (std::size_t k = 0; k < e; ++k) r = poly_mul(r, a);
  return r;
}

// z^q - c
Poly binomial_factor(std::size_t q, Complex c) {
  Poly f(q + 1, Complex{0, 0});
  f[0] = -c;
  f[q] = 1;
  return f;
}

CMatrix mpow(const CMatrix& a, std::int64_t e) {
  CMatrix base = e < 0 ? CMatrix(a.adjoint()) : a;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  CMatrix r = CMatrix::Identity(a.rows(), a.cols());
  while (k) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

void check_shape(const ACTuple& tuple) {
  if (tuple.mats.size() != tuple.n) throw InputError("tuple: expected " + std::to_string(tuple.n) + " matrices");
  for (const auto& a : tuple.mats)
    if (static_cast<std::size_t>(a.rows()) != tuple.m || static_cast<std::size_t>(a.cols()) != tuple.m)
      throw InputError("tuple: every matrix must be " + std::to_string(tuple.m) + "x" + std::to_string(tuple.m));
}

Rat1 snap(double angle, std::int64_t max_den, double tol, const std::string& what) {
  const Rat1 r = best_rational_approximation(angle, max_den);
  if (circular_distance(angle, r.to_double()) > tol)
    throw VerificationError(what + ": angle " + std::to_string(angle) + " has no rational within tol with denominator <= " +
                            std::to_string(max_den));
  return r;
}

// p_1 fastest.
std::vector<std::int64_t> decode(std::size_t offset, const std::vector<std::int64_t>& orders) {
  std::vector<std::int64_t> p(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    p[i] = static_cast<std::int64_t>(offset % static_cast<std::size_t>(orders[i]));
    offset /= static_cast<std::size_t>(orders[i]);
  }
  return p;
}

std::size_t encode(const std::vector<std::int64_t>& p, const std::vector<std::int64_t>& orders) {
  std::size_t idx = 0;
  for (std::size_t i = orders.size(); i-- > 0;) idx = idx * static_cast<std::size_t>(orders[i]) + static_cast<std::size_t>(p[i]);
  return idx;
}

CMatrix complement(const CMatrix& filled, Eigen::Index m) {
  if (filled.cols() == 0) return CMatrix::Identity(m, m);
  Eigen::HouseholderQR<CMatrix> qr(filled);
  const CMatrix full = qr.householderQ() * CMatrix::Identity(m, m);
  return full.rightCols(m - filled.cols());
}

// Restricts m to the invariant subspace spanned by s and returns the
// eigenspace of one eigenvalue cluster.
CMatrix first_cluster(const CMatrix& m, const CMatrix& s, double tol) {
  const CMatrix k = s.adjoint() * m * s;
  Eigen::ComplexSchur<CMatrix> schur(k);
  if (schur.info() != Eigen::Success) throw VerificationError("Schur decomposition did not converge");
  const auto& tri = schur.matrixT();
  const Eigen::Index r = k.rows();

  std::vector<std::pair<double, Eigen::Index>> angles;
  for (Eigen::Index i = 0; i < r; ++i) angles.emplace_back(angle_of(tri(i, i)), i);
  std::sort(angles.begin(), angles.end());

  const double split = 10 * tol;
  auto gap_after = [&](std::size_t a) {
    const std::size_t b = (a + 1) % angles.size();
    double g = angles[b].first - angles[a].first;
    if (b == 0) g += 1.0;
    return g;
  };
  std::optional<std::size_t> start;
  // The wrap gap is preferred as a boundary so clusters start at small angles.
  std::vector<std::size_t> order(angles.size());
  for (std::size_t a = 0; a < angles.size(); ++a) order[a] = (a + angles.size() - 1) % angles.size();
  for (std::size_t a : order) {
    const double g = gap_after(a);
    if (g > tol && g <= split)
      throw VerificationError("ambiguous eigenvalue clustering (gap " + std::to_string(g) +
                              "); use a smaller tuple or exact input");
    if (g > split && !start) start = (a + 1) % angles.size();
  }

  std::vector<Eigen::Index> cluster;
  if (!start) {
    for (const auto& a : angles) cluster.push_back(a.second);
  } else {
    std::size_t a = *start;
    for (;;) {
      cluster.push_back(angles[a].second);
      if (gap_after(a) > split) break;
      a = (a + 1) % angles.size();
    }
  }
  std::sort(cluster.begin(), cluster.end());
  CMatrix out(s.rows(), static_cast<Eigen::Index>(cluster.size()));
  const CMatrix u = s * schur.matrixU();
  for (std::size_t c = 0; c < cluster.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = u.col(cluster[c]);
  return out;
}

}  // namespace

std::vector<std::int64_t> ZDParameters::orders() const {
  std::vector<std::int64_t> out;
  for (const auto& d : ds) out.push_back(d.order());
  return out;
}

std::size_t ZDParameters::sigma() const {
  std::size_t s = 1;
  for (const auto& d : ds) s *= static_cast<std::size_t>(d.order());
  return s;
}

ZDParameters ZDParameters::trivial(std::vector<Rat1> ds, std::size_t n, std::size_t l) {
  ZDParameters p;
  p.ds = std::move(ds);
  p.n = n;
  p.l = l;
  const std::size_t t = p.t();
  if (2 * t > n) throw InputError("ZDParameters: 2t exceeds n");
  p.alphas.assign(l, std::vector<Rat1>(n - t));
  p.betas.assign(l, std::vector<Rat1>(t));
  return p;
}

Complex unit(const Rat1& angle) {
  const double theta = 2 * std::numbers::pi * angle.to_double();
  return {std::cos(theta), std::sin(theta)};
}

double angle_of(Complex z) {
  double a = std::arg(z) / (2 * std::numbers::pi);
  if (a < 0) a += 1.0;
  if (a >= 1.0) a -= 1.0;
  return a;
}

ACTuple build_zd(const ZDParameters& p) {
  const std::size_t t = p.t();
  if (2 * t > p.n) throw InputError("build_zd: 2t exceeds n");
  if (p.l == 0) throw InputError("build_zd: l must be positive");
  for (const auto& d : p.ds)
    if (d.is_zero()) throw InputError("build_zd: block parameters must be nonzero");
  if (p.alphas.size() != p.l || p.betas.size() != p.l) throw InputError("build_zd: angle arrays must have l rows");
  for (std::size_t j = 0; j < p.l; ++j)
    if (p.alphas[j].size() != p.n - t || p.betas[j].size() != t)
      throw InputError("build_zd: alphas must be l x (n-t) and betas l x t");

  const auto orders = p.orders();
  const std::size_t sigma = p.sigma();
  ACTuple out;
  out.n = p.n;
  out.m = p.l * sigma;
  const auto m = static_cast<Eigen::Index>(out.m);
  out.mats.assign(p.n, CMatrix::Zero(m, m));

  for (std::size_t j = 0; j < p.l; ++j)
    for (std::size_t offset = 0; offset < sigma; ++offset) {
      const auto idx = static_cast<Eigen::Index>(j * sigma + offset);
      const auto pos = decode(offset, orders);
      for (std::size_t i = 0; i < t; ++i) {
        auto next = pos;
        Complex coef{1, 0};
        if (++next[i] == orders[i]) {
          next[i] = 0;
          coef = unit(p.betas[j][i]);
        }
        out.mats[i](static_cast<Eigen::Index>(j * sigma + encode(next, orders)), idx) = coef;
      }
      for (std::size_t k = 0; k < t; ++k) out.mats[t + k](idx, idx) = unit(pos[k] * p.ds[k] + p.alphas[j][k]);
      for (std::size_t i = 2 * t; i < p.n; ++i) out.mats[i](idx, idx) = unit(p.alphas[j][i - t]);
    }
  return out;
}

ACTuple conjugate(const ACTuple& tuple, const CMatrix& u) {
  check_shape(tuple);
  if (static_cast<std::size_t>(u.rows()) != tuple.m || static_cast<std::size_t>(u.cols()) != tuple.m)
    throw InputError("conjugate: dimension mismatch");
  ACTuple out = tuple;
  const CMatrix ui = u.adjoint();
  for (auto& a : out.mats) a = u * a * ui;
  return out;
}

CMatrix random_unitary(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(m);
  CMatrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = Complex{g(rng), g(rng)} / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b * a.partialPivLu().inverse() * b.partialPivLu().inverse();
}

std::int64_t default_max_den(std::size_t m) { return static_cast<std::int64_t>(std::max<std::size_t>(m, 1)) * 720; }

SkewQZ rho_classify(const ACTuple& tuple, double tol, std::int64_t max_den) {
  check_shape(tuple);
  if (max_den <= 0) max_den = default_max_den(tuple.m);
  const auto m = static_cast<Eigen::Index>(tuple.m);
  SkewQZ d(tuple.n);
  for (std::size_t i = 0; i < tuple.n; ++i)
    for (std::size_t j = i + 1; j < tuple.n; ++j) {
      const CMatrix c = commutator(tuple.mats[i], tuple.mats[j]);
      const Complex s = c.trace() / static_cast<double>(m);
      const double defect = (c - s * CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
      if (defect > tol) throw VerificationError("commutator " + pair_name(i, j) + " is not scalar within tol");
      d.set(i, j, snap(angle_of(s), max_den, tol, "commutator " + pair_name(i, j)));
    }
  return d;
}

RelationReport verify_relations(const ACTuple& tuple, const SkewQZ& d, double tol) {
  check_shape(tuple);
  if (d.n() != tuple.n) throw InputError("verify_relations: D has the wrong dimension");
  const auto m = static_cast<Eigen::Index>(tuple.m);
  const CMatrix id = CMatrix::Identity(m, m);
  RelationReport report;
  for (const auto& a : tuple.mats)
    report.unitarity_defect = std::max(report.unitarity_defect, (a.adjoint() * a - id).cwiseAbs().maxCoeff());
  report.passed = report.unitarity_defect <= tol;
  for (std::size_t i = 0; i < tuple.n; ++i)
    for (std::size_t j = i + 1; j < tuple.n; ++j) {
      const CMatrix c = commutator(tuple.mats[i], tuple.mats[j]);
      const Complex s = c.trace() / static_cast<double>(m);
      PairDefect pd{i, j, 0, 0};
      pd.scalar_defect = std::max((c - s * id).cwiseAbs().maxCoeff(), std::abs(std::abs(s) - 1.0));
      pd.angle_deviation = circular_distance(angle_of(s), d(i, j).to_double());
      if (pd.scalar_defect > tol || pd.angle_deviation > tol) {
        report.passed = false;
        if (!report.failing_pair) report.failing_pair = std::make_pair(i, j);
      }
      report.pairs.push_back(pd);
    }
  return report;
}

std::vector<Complex> char_poly(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw VerificationError("eigenvalue solver did not converge");
  Poly p{Complex{1, 0}};
  for (Eigen::Index i = 0; i < a.rows(); ++i) p = poly_mul(p, Poly{-es.eigenvalues()(i), Complex{1, 0}});
  return p;
}

std::vector<Complex> expected_char_poly(const ZDParameters& p, std::size_t i) {
  const std::size_t t = p.t();
  if (i >= p.n) throw InputError("expected_char_poly: index out of range");
  const auto orders = p.orders();
  const std::size_t sigma = p.sigma();
  Poly out{Complex{1, 0}};
  for (std::size_t j = 0; j < p.l; ++j) {
    if (i < t) {
      const auto q = static_cast<std::size_t>(orders[i]);
      out = poly_mul(out, poly_pow(binomial_factor(q, unit(p.betas[j][i])), sigma / q));
    } else if (i < 2 * t) {
      const auto q = static_cast<std::size_t>(orders[i - t]);
      const Rat1 power = static_cast<std::int64_t>(q) * p.alphas[j][i - t];
      out = poly_mul(out, poly_pow(binomial_factor(q, unit(power)), sigma / q));
    } else {
      out = poly_mul(out, poly_pow(binomial_factor(1, unit(p.alphas[j][i - t])), sigma));
    }
  }
  return out;
}

CharPolyReport char_poly_check(const ACTuple& tuple, const ZDParameters& p, double tol) {
  check_shape(tuple);
  if (tuple.n != p.n || tuple.m != p.m()) throw InputError("char_poly_check: spectral data does not match tuple");
  CharPolyReport report;
  for (std::size_t i = 0; i < tuple.n; ++i) {
    const auto got = char_poly(tuple.mats[i]);
    const auto want = expected_char_poly(p, i);
    double dev = 0;
    for (std::size_t c = 0; c < want.size(); ++c)
      dev = std::max(dev, std::abs(got[c] - want[c]) / std::max(1.0, std::abs(want[c])));
    report.deviations.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.passed = report.max_deviation <= tol;
  return report;
}

double eigen_pattern_defect(const ACTuple& tuple, const SpectralData& sd) {
  const auto& p = sd.params;
  const std::size_t t = p.t();
  const auto orders = p.orders();
  const std::size_t sigma = p.sigma();
  double worst = 0;
  for (std::size_t j = 0; j < p.l; ++j)
    for (std::size_t offset = 0; offset < sigma; ++offset) {
      const auto b = sd.basis.col(static_cast<Eigen::Index>(j * sigma + offset));
      const auto pos = decode(offset, orders);
      for (std::size_t i = t; i < p.n; ++i) {
        const Rat1 angle = i < 2 * t ? pos[i - t] * p.ds[i - t] + p.alphas[j][i - t] : p.alphas[j][i - t];
        worst = std::max(worst, (tuple.mats[i] * b - unit(angle) * b).norm());
      }
    }
  return worst;
}

SpectralData extract_canonical_basis(const ACTuple& tuple, const SkewQZ& d, double tol, std::int64_t max_den) {
  check_shape(tuple);
  auto ds = as_standard_block(d);
  if (!ds) throw InputError("extract_canonical_basis: D must be a standard block D_n(d_1,...,d_t)");
  const auto rel = verify_relations(tuple, d, tol);
  if (!rel.passed) {
    std::string where = rel.failing_pair ? " at pair " + pair_name(rel.failing_pair->first, rel.failing_pair->second) : "";
    throw VerificationError("extract_canonical_basis: tuple is not D-commuting within tol" + where);
  }
  if (max_den <= 0) max_den = default_max_den(tuple.m);

  SpectralData sd;
  auto& p = sd.params;
  p.ds = std::move(*ds);
  p.n = tuple.n;
  const std::size_t t = p.t();
  const auto orders = p.orders();
  const std::size_t sigma = p.sigma();
  if (tuple.m % sigma != 0) throw VerificationError("extract_canonical_basis: sigma(D) does not divide m");
  p.l = tuple.m / sigma;

  std::vector<CMatrix> powers;
  for (std::size_t i = 0; i < t; ++i) powers.push_back(mpow(tuple.mats[i], orders[i]));

  const auto m = static_cast<Eigen::Index>(tuple.m);
  sd.basis = CMatrix::Zero(m, m);
  for (std::size_t j = 0; j < p.l; ++j) {
    const auto filled = static_cast<Eigen::Index>(j * sigma);
    const CMatrix q = complement(sd.basis.leftCols(filled), m);
    CMatrix s = CMatrix::Identity(q.cols(), q.cols());
    for (std::size_t i = t; i < p.n; ++i) s = first_cluster(q.adjoint() * tuple.mats[i] * q, s, tol);
    for (std::size_t i = 0; i < t; ++i) s = first_cluster(q.adjoint() * powers[i] * q, s, tol);
    Eigen::VectorXcd v = q * s.col(0);
    v.normalize();

    std::vector<Rat1> alpha_row, beta_row;
    for (std::size_t i = t; i < p.n; ++i)
      alpha_row.push_back(snap(angle_of(v.dot(tuple.mats[i] * v)), max_den, tol, "alpha"));
    for (std::size_t i = 0; i < t; ++i) beta_row.push_back(snap(angle_of(v.dot(powers[i] * v)), max_den, tol, "beta"));
    p.alphas.push_back(std::move(alpha_row));
    p.betas.push_back(std::move(beta_row));

    sd.basis.col(filled) = v;
    std::size_t stride = 1;
    std::vector<std::size_t> strides;
    for (auto o : orders) {
      strides.push_back(stride);
      stride *= static_cast<std::size_t>(o);
    }
    for (std::size_t offset = 1; offset < sigma; ++offset) {
      const auto pos = decode(offset, orders);
      std::size_t i = 0;
      while (pos[i] == 0) ++i;
      sd.basis.col(filled + static_cast<Eigen::Index>(offset)) =
          tuple.mats[i] * sd.basis.col(filled + static_cast<Eigen::Index>(offset - strides[i]));
    }
  }
  const double ortho = (sd.basis.adjoint() * sd.basis - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
  if (ortho > std::max(tol, 1e-8)) throw VerificationError("extract_canonical_basis: basis is not orthonormal");
  return sd;
}

std::vector<std::vector<Rat1>> normalized_orbit_data(const ZDParameters& p) {
  const std::size_t t = p.t();
  const auto orders = p.orders();
  std::vector<std::vector<Rat1>> rows;
  for (std::size_t j = 0; j < p.l; ++j) {
    std::vector<Rat1> row = p.alphas[j];
    for (std::size_t k = 0; k < t; ++k) {
      const Rat1 a = row[k];
      const std::int64_t q = orders[k];
      const std::int64_t fl = checked_mul(a.num(), q) / a.den();
      row[k] = Rat1::make(checked_sub(checked_mul(a.num(), q), checked_mul(fl, a.den())), checked_mul(a.den(), q));
    }
    row.insert(row.end(), p.betas[j].begin(), p.betas[j].end());
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

ACTuple realize(const SkewQZ& d, std::size_t m, std::mt19937_64& rng) {
  const auto nf = congruence_normal_form_qz(d);
  const BigInt s = nf.order_product();
  if (m == 0 || BigInt(m) % s != 0)
    throw InputError("realize: sigma(D) = " + s.str() + " does not divide m = " + std::to_string(m) +
                     "; no D-commuting tuple exists");
  std::uniform_int_distribution<std::int64_t> grid(0, 11);
  ZDParameters p = ZDParameters::trivial(nf.ds, d.n(), m / static_cast<std::size_t>(s));
  for (auto& row : p.alphas)
    for (auto& a : row) a = Rat1::make(grid(rng), 12);
  for (auto& row : p.betas)
    for (auto& b : row) b = Rat1::make(grid(rng), 12);
  const ACTuple base = build_zd(p);

  const IntMatrix inv = unimodular_inverse(nf.transform);
  ACTuple out = base;
  for (std::size_t j = 0; j < d.n(); ++j) {
    CMatrix c = CMatrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < d.n(); ++k)
      if (inv(k, j) != 0) c = c * mpow(base.mats[k], inv(k, j));
    out.mats[j] = c;
  }
  return out;
}

}  // namespace acomm
