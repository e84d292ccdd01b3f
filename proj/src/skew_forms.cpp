#include "acomm/skew_forms.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "acomm/errors.hpp"

namespace acomm {

SkewQZ::SkewQZ(Matrix<Rat1> entries) : entries_(std::move(entries)) {
  if (!entries_.square()) throw InputError("SkewQZ: matrix is not square");
  for (std::size_t i = 0; i < n(); ++i) {
    if (!entries_(i, i).is_zero())
      throw InputError("SkewQZ: nonzero diagonal entry at " + std::to_string(i + 1));
    for (std::size_t j = i + 1; j < n(); ++j)
      if (entries_(j, i) != -entries_(i, j))
        throw InputError("SkewQZ: entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") and (" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                         ") are not negatives");
  }
}

void SkewQZ::set(std::size_t i, std::size_t j, Rat1 d) {
  if (i == j) throw InputError("SkewQZ::set: diagonal entries are fixed at zero");
  entries_(i, j) = d;
  entries_(j, i) = -d;
}

bool SkewQZ::is_zero() const {
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = i + 1; j < n(); ++j)
      if (!entries_(i, j).is_zero()) return false;
  return true;
}

std::int64_t SkewQZ::common_denominator() const {
  std::int64_t q = 1;
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = i + 1; j < n(); ++j) q = checked_lcm(q, entries_(i, j).den());
  return q;
}

SkewZ::SkewZ(IntMatrix entries) : entries_(std::move(entries)) {
  if (!entries_.square()) throw InputError("SkewZ: matrix is not square");
  for (std::size_t i = 0; i < n(); ++i) {
    if (entries_(i, i) != 0) throw InputError("SkewZ: nonzero diagonal entry at " + std::to_string(i + 1));
    for (std::size_t j = i + 1; j < n(); ++j)
      if (entries_(j, i) != -entries_(i, j))
        throw InputError("SkewZ: matrix is not skew-symmetric at (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
  }
}

void SkewZ::set(std::size_t i, std::size_t j, std::int64_t w) {
  if (i == j) throw InputError("SkewZ::set: diagonal entries are fixed at zero");
  entries_(i, j) = w;
  entries_(j, i) = checked_mul(w, -1);
}

bool SkewZ::is_zero() const {
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = i + 1; j < n(); ++j)
      if (entries_(i, j) != 0) return false;
  return true;
}

std::vector<std::int64_t> NormalFormQZ::orders() const {
  std::vector<std::int64_t> out;
  out.reserve(ds.size());
  for (const auto& d : ds) out.push_back(d.order());
  return out;
}

BigInt NormalFormQZ::order_product() const {
  BigInt p = 1;
  for (const auto& d : ds) p *= d.order();
  return p;
}

SkewQZ standard_block(std::span<const Rat1> ds, std::size_t n) {
  const std::size_t t = ds.size();
  if (2 * t > n) throw InputError("standard_block: 2t exceeds n");
  SkewQZ d(n);
  for (std::size_t k = 0; k < t; ++k) {
    if (ds[k].is_zero()) throw InputError("standard_block: block parameters must be nonzero");
    d.set(k + t, k, ds[k]);
  }
  return d;
}

std::optional<std::vector<Rat1>> as_standard_block(const SkewQZ& d) {
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < d.n(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!d(i, j).is_zero()) ++nonzero;
  const std::size_t t = nonzero;
  if (2 * t > d.n()) return std::nullopt;
  std::vector<Rat1> ds;
  for (std::size_t k = 0; k < t; ++k) {
    if (d(k + t, k).is_zero()) return std::nullopt;
    ds.push_back(d(k + t, k));
  }
  return ds;
}

Congruence apply_congruence(const SkewQZ& d, const IntMatrix& a) {
  const std::size_t n = d.n();
  if (a.rows() != n || a.cols() != n) throw InputError("apply_congruence: dimension mismatch");
  const BigInt det = determinant(a);
  // (A^T D A)_{ij} = sum_{k,l} A_{ki} D_{kl} A_{lj}
  Matrix<Rat1> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rat1 acc;
      for (std::size_t k = 0; k < n; ++k) {
        if (a(k, i) == 0) continue;
        for (std::size_t l = 0; l < n; ++l) {
          if (a(l, j) == 0 || d(k, l).is_zero()) continue;
          const std::int64_t coeff =
              mod_floor(static_cast<std::int64_t>((static_cast<__int128>(a(k, i)) * a(l, j)) %
                                                  d(k, l).den()),
                        d(k, l).den());
          acc += coeff * d(k, l);
        }
      }
      out(i, j) = acc;
      out(j, i) = -acc;
    }
  return {SkewQZ(std::move(out)), det == 1 || det == -1};
}

SkewZ apply_congruence(const SkewZ& w, const IntMatrix& a) {
  const std::size_t n = w.n();
  if (a.rows() != n || a.cols() != n) throw InputError("apply_congruence: dimension mismatch");
  return SkewZ(multiply(multiply(a.transposed(), w.entries()), a));
}

namespace {

// Working state for symplectic reduction: form(i,j) = omega(e_i, e_j) in the
// current basis, whose vectors are the columns of `basis`.
struct SymplecticReducer {
  IntMatrix form;
  IntMatrix basis;

  explicit SymplecticReducer(IntMatrix w) : form(std::move(w)), basis(IntMatrix::identity(form.rows())) {}

  std::size_t n() const { return form.rows(); }

  // e_k <- e_k + x e_src
  void add_multiple(std::size_t k, std::size_t src, std::int64_t x) {
    if (x == 0) return;
    for (std::size_t r = 0; r < n(); ++r) basis(r, k) = checked_add(basis(r, k), checked_mul(x, basis(r, src)));
    for (std::size_t l = 0; l < n(); ++l) form(k, l) = checked_add(form(k, l), checked_mul(x, form(src, l)));
    for (std::size_t l = 0; l < n(); ++l) form(l, k) = checked_add(form(l, k), checked_mul(x, form(l, src)));
  }

  void negate(std::size_t k) {
    for (std::size_t r = 0; r < n(); ++r) basis(r, k) = -basis(r, k);
    for (std::size_t l = 0; l < n(); ++l) {
      form(k, l) = -form(k, l);
      form(l, k) = -form(l, k);
    }
  }

  struct Pair {
    std::size_t first;
    std::size_t second;
    std::int64_t value;
  };

  // Splits off hyperbolic pairs with positive values c_1 | c_2 | ... .
  std::vector<Pair> reduce() {
    std::vector<std::size_t> remaining(n());
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<Pair> pairs;

    for (;;) {
      std::size_t pi = 0, pj = 0;
      std::int64_t best = 0;
      for (std::size_t a = 0; a < remaining.size(); ++a)
        for (std::size_t b = a + 1; b < remaining.size(); ++b) {
          const std::int64_t v = form(remaining[a], remaining[b]);
          if (v != 0 && (best == 0 || std::abs(v) < best)) {
            best = std::abs(v);
            pi = remaining[a];
            pj = remaining[b];
          }
        }
      if (best == 0) break;

      for (bool settled = false; !settled;) {
        const std::int64_t p = form(pi, pj);
        bool moved = false;
        for (std::size_t k : remaining) {
          if (k == pi || k == pj) continue;
          if (form(pi, k) != 0) {
            add_multiple(k, pj, -(form(pi, k) / p));
            if (form(pi, k) != 0) {
              pj = k;
              moved = true;
              break;
            }
          }
          if (form(pj, k) != 0) {
            add_multiple(k, pi, form(pj, k) / p);
            if (form(pj, k) != 0) {
              pi = pj;
              pj = k;
              moved = true;
              break;
            }
          }
        }
        if (moved) continue;

        // Rows pi, pj are clear; the rest must be divisible by p.
        settled = true;
        for (std::size_t a = 0; a < remaining.size() && settled; ++a)
          for (std::size_t b = a + 1; b < remaining.size() && settled; ++b) {
            const std::size_t k = remaining[a], l = remaining[b];
            if (k == pi || k == pj || l == pi || l == pj) continue;
            if (form(k, l) % p != 0) {
              add_multiple(pi, k, 1);
              settled = false;
            }
          }
      }

      if (form(pi, pj) < 0) negate(pj);
      pairs.push_back({pi, pj, form(pi, pj)});
      std::erase(remaining, pi);
      std::erase(remaining, pj);
    }
    return pairs;
  }

  // Column order: firsts of `pairs`, seconds of `pairs`, then all other indices.
  IntMatrix arranged_basis(const std::vector<Pair>& pairs) const {
    std::vector<std::size_t> order;
    std::vector<bool> used(n(), false);
    for (const auto& p : pairs) {
      order.push_back(p.first);
      used[p.first] = true;
    }
    for (const auto& p : pairs) {
      order.push_back(p.second);
      used[p.second] = true;
    }
    for (std::size_t k = 0; k < n(); ++k)
      if (!used[k]) order.push_back(k);
    IntMatrix out(n(), n());
    for (std::size_t c = 0; c < n(); ++c)
      for (std::size_t r = 0; r < n(); ++r) out(r, c) = basis(r, order[c]);
    return out;
  }
};

}  // namespace

NormalFormZ integer_skew_normal_form(const SkewZ& w) {
  SymplecticReducer reducer(w.entries());
  const auto pairs = reducer.reduce();
  NormalFormZ nf;
  nf.t = pairs.size();
  for (const auto& p : pairs) nf.cs.push_back(p.value);
  nf.transform = reducer.arranged_basis(pairs);

  for (std::size_t i = 0; i + 1 < nf.cs.size(); ++i)
    if (nf.cs[i + 1] % nf.cs[i] != 0) throw InvariantViolation("integer_skew_normal_form: divisibility chain broken");
  const SkewZ reduced = apply_congruence(w, nf.transform);
  SkewZ expected(w.n());
  for (std::size_t k = 0; k < nf.t; ++k) expected.set(k, nf.t + k, nf.cs[k]);
  if (reduced != expected) throw InvariantViolation("integer_skew_normal_form: witness does not reproduce the form");
  return nf;
}

NormalFormQZ congruence_normal_form_qz(const SkewQZ& d) {
  const std::size_t n = d.n();
  const std::int64_t q = d.common_denominator();
  IntMatrix lift(n, n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      lift(i, j) = d(i, j).num() * (q / d(i, j).den());
      lift(j, i) = -lift(i, j);
    }

  // A lift to Z reduces mod q to D; c_k | c_{k+1} over Z turns into
  // |d_{k+1}| | |d_k| for d_k = -c_k/q, and vanishing blocks come last.
  SymplecticReducer reducer(std::move(lift));
  auto pairs = reducer.reduce();
  std::erase_if(pairs, [q](const auto& p) { return p.value % q == 0; });

  NormalFormQZ nf;
  nf.t = pairs.size();
  nf.transform = reducer.arranged_basis(pairs);
  for (const auto& p : pairs) nf.ds.push_back(Rat1::make(-p.value, q));

  for (std::size_t i = 0; i + 1 < nf.ds.size(); ++i)
    if (nf.ds[i].order() % nf.ds[i + 1].order() != 0)
      throw InvariantViolation("congruence_normal_form_qz: order chain broken");
  const auto check = apply_congruence(d, nf.transform);
  if (!check.unimodular || check.matrix != standard_block(nf.ds, n))
    throw InvariantViolation("congruence_normal_form_qz: witness does not reproduce the block form");
  return nf;
}

BigInt row_space_order(const SkewQZ& d, std::uint64_t cap) {
  std::vector<std::vector<Rat1>> rows;
  rows.reserve(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) {
    const auto r = d.entries().row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  return qz_subgroup_order(rows, d.n(), cap);
}

BigInt sigma(const SkewQZ& d, std::uint64_t cap) {
  const BigInt order = row_space_order(d, cap);
  BigInt root = exact_isqrt(order);
  if (root < 0) throw InvariantViolation("sigma: row space order " + order.str() + " is not a perfect square");
  return root;
}

}  // namespace acomm
