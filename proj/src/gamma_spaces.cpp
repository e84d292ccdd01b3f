#include "acomm/gamma_spaces.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "acomm/errors.hpp"

namespace acomm {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t to_int64(const BigInt& x, const char* what) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error(std::string(what) + ": value exceeds int64");
  return static_cast<std::int64_t>(x);
}

Rat1 to_rat1(const BigRational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt r = num % den;
  if (r < 0) r += den;
  return Rat1::make(to_int64(r, "to_rat1"), to_int64(den, "to_rat1"));
}

struct Echelon {
  Matrix<BigInt> h;
  Matrix<BigInt> u;
  std::vector<std::size_t> pivots;
};

// Integer row echelon form with transform. min_pivot picks the smallest
// nonzero |entry| each round and reduces above the pivots (Hermite form);
// otherwise the first nonzero row is used and nothing above is touched.
Echelon integer_echelon(const IntMatrix& a, bool min_pivot) {
  const std::size_t rows = a.rows(), cols = a.cols();
  Echelon e{Matrix<BigInt>(rows, cols), Matrix<BigInt>::identity(rows), {}};
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) e.h(i, j) = a(i, j);

  auto axpy = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols; ++j) e.h(dst, j) -= q * e.h(src, j);
    for (std::size_t j = 0; j < rows; ++j) e.u(dst, j) -= q * e.u(src, j);
  };
  auto swap = [&](std::size_t x, std::size_t y) {
    e.h.swap_rows(x, y);
    e.u.swap_rows(x, y);
  };

  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    if (min_pivot) {
      for (;;) {
        std::size_t best = rows;
        for (std::size_t i = row; i < rows; ++i)
          if (e.h(i, col) != 0 && (best == rows || abs(e.h(i, col)) < abs(e.h(best, col)))) best = i;
        if (best == rows) break;
        swap(row, best);
        bool clear = true;
        for (std::size_t i = row + 1; i < rows; ++i) {
          if (e.h(i, col) == 0) continue;
          axpy(i, row, floor_div(e.h(i, col), e.h(row, col)));
          if (e.h(i, col) != 0) clear = false;
        }
        if (clear) break;
      }
    } else {
      std::size_t first = row;
      while (first < rows && e.h(first, col) == 0) ++first;
      if (first == rows) continue;
      swap(row, first);
      // Euclid between the pivot row and each lower row
      for (std::size_t i = row + 1; i < rows; ++i)
        while (e.h(i, col) != 0) {
          axpy(row, i, e.h(row, col) / e.h(i, col));
          swap(row, i);
        }
    }
    if (row == rows || e.h(row, col) == 0) continue;
    if (e.h(row, col) < 0) {
      for (std::size_t j = 0; j < cols; ++j) e.h(row, j) = -e.h(row, j);
      for (std::size_t j = 0; j < rows; ++j) e.u(row, j) = -e.u(row, j);
    }
    if (min_pivot)
      for (std::size_t i = 0; i < row; ++i) axpy(i, row, floor_div(e.h(i, col), e.h(row, col)));
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

Matrix<BigRational> rref(const IntMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  Matrix<BigRational> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = a(i, j);
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t p = row;
    while (p < rows && m(p, col) == 0) ++p;
    if (p == rows) continue;
    m.swap_rows(p, row);
    const BigRational piv = m(row, col);
    for (std::size_t j = 0; j < cols; ++j) m(row, j) /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || m(i, col) == 0) continue;
      const BigRational f = m(i, col);
      for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(row, j);
    }
    ++row;
  }
  return m;
}

IntMatrix narrow(const Matrix<BigInt>& m) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_int64(m(i, j), "omega_analysis");
  return out;
}

// D_n(-c_1 q, ..., -c_t q) with zero entries allowed.
SkewQZ twisted_block(const Rank1Form& form, const Rat1& q) {
  SkewQZ d(form.n);
  const std::size_t t = form.t();
  for (std::size_t i = 0; i < t; ++i) d.set(i + t, i, -(form.cs[i] * q));
  return d;
}

}  // namespace

void Rank1Form::validate() const {
  if (2 * t() > n) throw InputError("Rank1Form: 2t exceeds n");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i] <= 0) throw InputError("Rank1Form: coefficients must be positive");
    if (i > 0 && cs[i] % cs[i - 1] != 0) throw InputError("Rank1Form: coefficients must satisfy c_i | c_{i+1}");
  }
}

Rank1Form Rank1Form::make(std::vector<std::int64_t> cs, std::size_t n) {
  Rank1Form f;
  f.n = n == 0 ? 2 * cs.size() : n;
  f.cs = std::move(cs);
  f.validate();
  return f;
}

void PolySpec::validate() const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& r = roots[i];
    if (r.k < 1 || r.mult < 1) throw InputError("PolySpec: order and multiplicity must be positive");
    if (r.a < 0 || (r.k > 1 && r.a >= r.k) || (r.k == 1 && r.a != 0) || std::gcd(r.a, r.k) != 1)
      throw InputError("PolySpec: residue must be coprime to k in [0,k)");
    for (std::size_t j = 0; j < i; ++j)
      if (roots[j].k == r.k && roots[j].a == r.a) throw InputError("PolySpec: repeated root");
    total = checked_add(total, r.mult);
  }
  if (total != m) throw InputError("PolySpec: multiplicities must sum to m");
}

std::int64_t mu_k(const std::vector<std::int64_t>& cs, std::int64_t k) {
  if (k < 1) throw InputError("mu_k: k must be positive");
  std::int64_t mu = 1;
  for (auto c : cs) mu = checked_mul(mu, k / std::gcd(k, c));
  return mu;
}

BigInt count_components_rank1(const Rank1Form& form, std::int64_t m) {
  form.validate();
  if (form.t() == 0) throw InputError("count_components_rank1: k-invariant is zero");
  if (m < 1) throw InputError("count_components_rank1: m must be positive");
  std::vector<BigInt> series(static_cast<std::size_t>(m) + 1, 0);
  series[0] = 1;
  const std::int64_t kmax = checked_mul(m, form.cs.front());
  for (std::int64_t k = 1; k <= kmax; ++k) {
    const std::int64_t mu = mu_k(form.cs, k);
    if (mu > m) continue;
    for (std::int64_t rep = euler_phi(k); rep > 0; --rep)
      for (std::int64_t i = mu; i <= m; ++i) series[i] += series[i - mu];
  }
  return series[m];
}

bool is_good(const Rank1Form& form, const PolySpec& p) {
  try {
    p.validate();
  } catch (const InputError&) {
    return false;
  }
  for (const auto& r : p.roots)
    if (r.mult % mu_k(form.cs, r.k) != 0) return false;
  return true;
}

std::vector<PolySpec> enumerate_polys(const Rank1Form& form, std::int64_t m, std::uint64_t cap) {
  form.validate();
  if (form.t() == 0) throw InputError("enumerate_polys: k-invariant is zero");
  if (m < 1) throw InputError("enumerate_polys: m must be positive");

  struct Candidate {
    std::int64_t k, a, mu;
  };
  std::vector<Candidate> cands;
  for (std::int64_t k = 1; k <= checked_mul(m, form.cs.front()); ++k) {
    const std::int64_t mu = mu_k(form.cs, k);
    if (mu > m) continue;
    for (std::int64_t a = 0; a < k; ++a)
      if (std::gcd(a, k) == 1) cands.push_back({k, a, mu});
  }

  std::vector<PolySpec> out;
  std::vector<PolyRoot> chosen;
  auto recurse = [&](auto&& self, std::size_t from, std::int64_t remaining) -> void {
    if (remaining == 0) {
      if (out.size() >= cap) throw ResourceCapExceeded("enumerate_polys", out.size() + 1, cap);
      out.push_back({m, chosen});
      return;
    }
    for (std::size_t c = from; c < cands.size(); ++c) {
      const auto& cand = cands[c];
      for (std::int64_t mult = cand.mu; mult <= remaining; mult += cand.mu) {
        chosen.push_back({cand.k, cand.a, mult});
        self(self, c + 1, remaining - mult);
        chosen.pop_back();
      }
    }
  };
  recurse(recurse, 0, m);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PolyBlock> component_for_poly(const Rank1Form& form, const PolySpec& p) {
  form.validate();
  p.validate();
  std::vector<PolyBlock> out;
  for (const auto& r : p.roots) {
    PolyBlock b;
    b.root = r;
    b.d = twisted_block(form, r.angle());
    b.sigma = sigma(b.d);
    b.m_j = r.mult;
    if (BigInt(r.mult) % b.sigma != 0)
      throw InputError("component_for_poly: sigma(D_j) = " + b.sigma.str() + " does not divide multiplicity " +
                       std::to_string(r.mult) + " of root " + r.angle().to_string());
    b.l_j = r.mult / static_cast<std::int64_t>(b.sigma);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<ModuliFactor> describe_moduli(const Rank1Form& form, const PolySpec& p) {
  std::vector<ModuliFactor> out;
  for (const auto& b : component_for_poly(form, p)) out.push_back({form.n, b.l_j, 1});
  return out;
}

void CentralExtension::validate() const {
  if (r < 1) throw InputError("CentralExtension: r must be at least 1");
  if (coeffs.size() != r) throw InputError("CentralExtension: expected r coefficient matrices");
  for (const auto& w : coeffs)
    if (w.n() != n) throw InputError("CentralExtension: coefficient matrices must be n x n");
}

CentralExtension CentralExtension::from_rank1(const Rank1Form& form) {
  form.validate();
  CentralExtension g;
  g.n = form.n;
  g.r = 1;
  SkewZ w(form.n);
  for (std::size_t i = 0; i < form.t(); ++i) w.set(i, form.t() + i, form.cs[i]);
  g.coeffs.push_back(w);
  return g;
}

IntMatrix omega_matrix(const CentralExtension& g) {
  g.validate();
  IntMatrix out(g.n * (g.n - 1) / 2, g.r, 0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j, ++row)
      for (std::size_t l = 0; l < g.r; ++l) out(row, l) = g.coeffs[l](i, j);
  return out;
}

OmegaAnalysis omega_analysis(const IntMatrix& omega, std::uint64_t cap) {
  OmegaAnalysis a;
  const Echelon herm = integer_echelon(omega, true);
  const Echelon plain = integer_echelon(omega, false);
  a.rank = herm.pivots.size();
  a.nullity = omega.cols() - a.rank;
  a.pivots = herm.pivots;
  a.Q = narrow(herm.h);
  a.U = narrow(herm.u);
  a.B = 1;
  for (std::size_t s = 0; s < a.rank; ++s) a.B *= herm.h(s, herm.pivots[s]);
  BigInt b2 = 1;
  for (std::size_t s = 0; s < plain.pivots.size(); ++s) b2 *= plain.h(s, plain.pivots[s]);
  if (plain.pivots.size() != a.rank || abs(b2) != a.B)
    throw InvariantViolation("omega_analysis: echelon forms disagree on B");

  a.R = rref(omega);
  std::vector<std::vector<Rat1>> columns(omega.cols(), std::vector<Rat1>(omega.rows()));
  for (std::size_t j = 0; j < omega.cols(); ++j)
    for (std::size_t i = 0; i < omega.rows(); ++i) columns[j][i] = to_rat1(a.R(i, j));
  a.C = qz_subgroup_order(columns, omega.rows(), cap);
  if (a.B % a.C != 0)
    throw InvariantViolation("omega_analysis: C = " + a.C.str() + " does not divide B = " + a.B.str());
  a.P = a.B / a.C;
  return a;
}

SkewQZ omega_lambda(const CentralExtension& g, const std::vector<Rat1>& lam) {
  g.validate();
  if (lam.size() != g.r) throw InputError("omega_lambda: expected r angles");
  SkewQZ d(g.n);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j) {
      Rat1 s;
      for (std::size_t l = 0; l < g.r; ++l) s += g.coeffs[l](i, j) * lam[l];
      d.set(i, j, s);
    }
  return d;
}

namespace {

void check_blocks(const CentralExtension& g, const std::vector<EigenBlock>& blocks) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].dim < 1) throw InputError("eigen block dimensions must be positive");
    if (blocks[b].lam.size() != g.r) throw InputError("eigen block must carry r angles");
    for (std::size_t c = 0; c < b; ++c)
      if (blocks[c].lam == blocks[b].lam) throw InputError("eigenvalue tuples must be distinct");
  }
}

}  // namespace

bool hom_membership(const CentralExtension& g, const std::vector<EigenBlock>& blocks) {
  check_blocks(g, blocks);
  for (const auto& b : blocks)
    if (BigInt(b.dim) % sigma(omega_lambda(g, b.lam)) != 0) return false;
  return true;
}

FDecomposition f_decompose(const CentralExtension& g, const std::vector<EigenBlock>& blocks) {
  if (!hom_membership(g, blocks)) throw InputError("f_decompose: eigen data is not in Hom_Gamma(Z^r, U(m))");
  FDecomposition out;
  for (const auto& b : blocks) {
    out.m = checked_add(out.m, b.dim);
    SkewQZ d = omega_lambda(g, b.lam);
    const BigInt s = sigma(d);
    const std::int64_t l = b.dim / static_cast<std::int64_t>(s);
    auto it = std::find_if(out.terms.begin(), out.terms.end(), [&](const FTerm& f) { return f.d == d; });
    if (it == out.terms.end())
      out.terms.push_back({std::move(d), s, l});
    else
      it->l += l;
  }
  BigInt total = 0;
  for (const auto& f : out.terms) total += f.sigma * f.l;
  if (total != out.m) throw InvariantViolation("f_decompose: sum l_j sigma(D_j) differs from m");
  return out;
}

std::vector<Rat1> skew_to_column(const SkewQZ& d) {
  std::vector<Rat1> out;
  for (std::size_t i = 0; i < d.n(); ++i)
    for (std::size_t j = i + 1; j < d.n(); ++j) out.push_back(d(i, j));
  return out;
}

FiberInfo omega_fiber(const OmegaAnalysis& a, const std::vector<Rat1>& column) {
  if (column.size() != a.U.cols()) throw InputError("omega_fiber: D has the wrong number of entries");
  FiberInfo info;
  for (std::size_t i = a.rank; i < a.U.rows(); ++i) {
    Rat1 s;
    for (std::size_t k = 0; k < column.size(); ++k) s += a.U(i, k) * column[k];
    if (!s.is_zero()) return info;
  }
  info.empty = false;
  info.components = a.P;
  info.torus_dim = a.nullity;
  return info;
}

FiberInfo omega_fiber(const IntMatrix& omega, const SkewQZ& d) {
  return omega_fiber(omega_analysis(omega), skew_to_column(d));
}

RankRCount count_components_rank_r(const CentralExtension& g, const FDecomposition& decomp) {
  const OmegaAnalysis a = omega_analysis(omega_matrix(g));
  RankRCount out;
  out.P = a.P;
  out.nullity = a.nullity;
  for (const auto& term : decomp.terms) {
    if (term.d.n() != g.n) throw InputError("count_components_rank_r: term has the wrong dimension");
    if (omega_fiber(a, skew_to_column(term.d)).empty) return out;
  }
  out.nonempty = true;
  out.components = 1;
  for (const auto& term : decomp.terms) {
    out.components *= binomial(static_cast<std::int64_t>(a.P) + term.l - 1, term.l);
    out.descriptor.push_back({g.n + a.nullity, term.l, a.P});
  }
  return out;
}

}  // namespace acomm
