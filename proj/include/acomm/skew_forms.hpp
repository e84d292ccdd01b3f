#pragma once

// Skew-symmetric matrices over Q/Z and Z, congruence normal forms with
// GL(n,Z) witnesses, row-space orders and the sigma invariant.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "acomm/exact_arith.hpp"
#include "acomm/matrix.hpp"

namespace acomm {

/// n x n skew-symmetric matrix over Q/Z. Indices are 0-based.
class SkewQZ {
 public:
  SkewQZ() = default;
  explicit SkewQZ(std::size_t n) : entries_(n, n) {}
  /// Validates diagonal zero and (j,i) = -(i,j); throws InputError otherwise.
  explicit SkewQZ(Matrix<Rat1> entries);

  std::size_t n() const noexcept { return entries_.rows(); }
  const Rat1& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  /// Sets (i,j) = d and (j,i) = -d. Requires i != j.
  void set(std::size_t i, std::size_t j, Rat1 d);
  const Matrix<Rat1>& entries() const noexcept { return entries_; }
  bool is_zero() const;
  /// lcm of all entry denominators.
  std::int64_t common_denominator() const;

  friend bool operator==(const SkewQZ&, const SkewQZ&) = default;

 private:
  Matrix<Rat1> entries_;
};

/// n x n skew-symmetric integer matrix (coefficients of a 2-form on Z^n).
class SkewZ {
 public:
  SkewZ() = default;
  explicit SkewZ(std::size_t n) : entries_(n, n, 0) {}
  explicit SkewZ(IntMatrix entries);

  std::size_t n() const noexcept { return entries_.rows(); }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  void set(std::size_t i, std::size_t j, std::int64_t w);
  const IntMatrix& entries() const noexcept { return entries_; }
  bool is_zero() const;

  friend bool operator==(const SkewZ&, const SkewZ&) = default;

 private:
  IntMatrix entries_;
};

/// D congruent to D_n(ds) via transform: transform^T * D * transform = standard_block(ds, n).
/// Orders satisfy |ds[i+1]| divides |ds[i]|.
struct NormalFormQZ {
  std::size_t t = 0;
  std::vector<Rat1> ds;
  IntMatrix transform;

  std::vector<std::int64_t> orders() const;
  /// Product of the block orders; equals sigma of the original matrix.
  BigInt order_product() const;
};

/// w congruent to sum_i cs[i] e_i* ^ e_{t+i}*, with cs[i] | cs[i+1] and all cs positive.
struct NormalFormZ {
  std::size_t t = 0;
  std::vector<std::int64_t> cs;
  IntMatrix transform;
};

struct Congruence {
  SkewQZ matrix;
  /// False when the supplied matrix is not in GL(n,Z); the product is still computed.
  bool unimodular = true;
};

/// Block form D_n(d_1..d_t): entry (k+t, k) = d_k and (k, k+t) = -d_k.
/// Throws InputError if 2t > n or some d_k is zero.
SkewQZ standard_block(std::span<const Rat1> ds, std::size_t n);

/// Recovers ds when D is exactly a standard block, otherwise nullopt.
std::optional<std::vector<Rat1>> as_standard_block(const SkewQZ& d);

/// A^T D A over Q/Z.
Congruence apply_congruence(const SkewQZ& d, const IntMatrix& a);
/// A^T W A over Z.
SkewZ apply_congruence(const SkewZ& w, const IntMatrix& a);

NormalFormQZ congruence_normal_form_qz(const SkewQZ& d);
NormalFormZ integer_skew_normal_form(const SkewZ& w);

/// Cardinality of the subgroup of (Q/Z)^n generated by the rows of D.
BigInt row_space_order(const SkewQZ& d, std::uint64_t cap = kDefaultCap);
/// Square root of row_space_order; throws InvariantViolation if not a square.
BigInt sigma(const SkewQZ& d, std::uint64_t cap = kDefaultCap);

}  // namespace acomm
