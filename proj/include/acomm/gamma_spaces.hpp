#pragma once

// Components of Hom(Gamma, U(m)) for central extensions
// 1 -> Z^r -> Gamma -> Z^n -> 1: rank-one polynomial enumeration and
// generating functions, moduli descriptors, and the rank-r machinery
// (omega map, Hom_Gamma membership, F_{n,m} decomposition, Omega/B/C/P,
// fibers and component counts).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acomm/exact_arith.hpp"
#include "acomm/matrix.hpp"
#include "acomm/skew_forms.hpp"

namespace acomm {

/// Rank-one k-invariant sum_i c_i e_i* ^ e_{t+i}* on Z^n.
struct Rank1Form {
  std::size_t n = 0;
  std::vector<std::int64_t> cs;

  std::size_t t() const noexcept { return cs.size(); }
  /// Throws InputError unless cs is a positive divisibility chain and 2t <= n.
  void validate() const;
  /// n defaults to 2t.
  static Rank1Form make(std::vector<std::int64_t> cs, std::size_t n = 0);
};

/// Root e^{2 pi i a/k}, a coprime to k (a = 0 when k = 1), with multiplicity.
struct PolyRoot {
  std::int64_t k = 1;
  std::int64_t a = 0;
  std::int64_t mult = 1;

  Rat1 angle() const { return Rat1::make(a, k); }
  friend auto operator<=>(const PolyRoot&, const PolyRoot&) = default;
};

struct PolySpec {
  std::int64_t m = 0;
  std::vector<PolyRoot> roots;

  /// Throws InputError unless roots are distinct, primitive, positive and sum to m.
  void validate() const;
  friend auto operator<=>(const PolySpec&, const PolySpec&) = default;
};

std::int64_t mu_k(const std::vector<std::int64_t>& cs, std::int64_t k);

/// Coefficient of x^m in prod_k (1 - x^{mu_k})^{-phi(k)}.
BigInt count_components_rank1(const Rank1Form& form, std::int64_t m);

bool is_good(const Rank1Form& form, const PolySpec& p);

/// All of C[z]^m_Gamma, ordered lexicographically by their root lists.
std::vector<PolySpec> enumerate_polys(const Rank1Form& form, std::int64_t m, std::uint64_t cap = kDefaultCap);

struct PolyBlock {
  PolyRoot root;
  SkewQZ d;
  BigInt sigma;
  std::int64_t m_j = 0;
  std::int64_t l_j = 0;
};

/// D_j = D_n(-c_1 q_j, ..., -c_t q_j), q_j = a_j/k_j, for each root. Vanishing
/// entries are kept in place. Throws InputError if sigma(D_j) does not divide m_j.
std::vector<PolyBlock> component_for_poly(const Rank1Form& form, const PolySpec& p);

/// Factor Sym^{power} of a disjoint union of `copies` tori of dimension torus_dim.
struct ModuliFactor {
  std::size_t torus_dim = 0;
  std::int64_t power = 0;
  BigInt copies = 1;
  friend bool operator==(const ModuliFactor&, const ModuliFactor&) = default;
};

/// One Sym^{l_j} T^n factor per root.
std::vector<ModuliFactor> describe_moduli(const Rank1Form& form, const PolySpec& p);

struct CentralExtension {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<SkewZ> coeffs;

  void validate() const;
  /// r = 1 extension with k-invariant sum c_i e_i* ^ e_{t+i}*.
  static CentralExtension from_rank1(const Rank1Form& form);
};

/// C(n,2) x r, rows (i,j) with i < j in lexicographic order.
IntMatrix omega_matrix(const CentralExtension& g);

struct OmegaAnalysis {
  std::size_t rank = 0;
  std::size_t nullity = 0;
  BigInt B = 1;
  BigInt C = 1;
  BigInt P = 1;
  /// Hermite form Q = U * Omega with positive pivots.
  IntMatrix Q;
  IntMatrix U;
  std::vector<std::size_t> pivots;
  /// Reduced row echelon form over Q.
  Matrix<BigRational> R;
};

/// Throws InvariantViolation if C does not divide B or two echelon forms give
/// different pivot products.
OmegaAnalysis omega_analysis(const IntMatrix& omega, std::uint64_t cap = kDefaultCap);

/// omega(lambda)_{ij} = sum_l omega^l_{ij} lambda_l in Q/Z.
SkewQZ omega_lambda(const CentralExtension& g, const std::vector<Rat1>& lam);

struct EigenBlock {
  std::vector<Rat1> lam;
  std::int64_t dim = 0;
};

bool hom_membership(const CentralExtension& g, const std::vector<EigenBlock>& blocks);

struct FTerm {
  SkewQZ d;
  BigInt sigma;
  std::int64_t l = 0;
};

struct FDecomposition {
  std::int64_t m = 0;
  std::vector<FTerm> terms;
};

/// Groups blocks by omega(lambda); terms are in order of first appearance.
/// Throws InputError when membership fails.
FDecomposition f_decompose(const CentralExtension& g, const std::vector<EigenBlock>& blocks);

struct FiberInfo {
  bool empty = true;
  BigInt components = 0;
  std::size_t torus_dim = 0;
};

/// D' as the column of entries (i,j), i < j.
std::vector<Rat1> skew_to_column(const SkewQZ& d);

FiberInfo omega_fiber(const OmegaAnalysis& a, const std::vector<Rat1>& column);
FiberInfo omega_fiber(const IntMatrix& omega, const SkewQZ& d);

struct RankRCount {
  bool nonempty = false;
  BigInt components = 0;
  BigInt P = 1;
  std::size_t nullity = 0;
  /// Sym^{l_j}(disjoint union of P copies of T^{n + nullity}) per term.
  std::vector<ModuliFactor> descriptor;
};

RankRCount count_components_rank_r(const CentralExtension& g, const FDecomposition& decomp);

}  // namespace acomm
