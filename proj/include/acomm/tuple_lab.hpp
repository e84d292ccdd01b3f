#pragma once

// Explicit D-commuting unitary tuples: the Z_D family, classification by
// commutator phases, relation and characteristic-polynomial checks, and the
// constructive spectral basis of a D-commuting tuple.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "acomm/exact_arith.hpp"
#include "acomm/skew_forms.hpp"

namespace acomm {

using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

struct ACTuple {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<CMatrix> mats;
};

/// Parameters of a point of Z_D for D = D_n(ds). alphas is l x (n - t)
/// (column c holds alpha_{t+1+c, j}), betas is l x t. Angles are in turns.
struct ZDParameters {
  std::vector<Rat1> ds;
  std::size_t n = 0;
  std::size_t l = 1;
  std::vector<std::vector<Rat1>> alphas;
  std::vector<std::vector<Rat1>> betas;

  std::size_t t() const noexcept { return ds.size(); }
  std::vector<std::int64_t> orders() const;
  std::size_t sigma() const;
  std::size_t m() const { return l * sigma(); }
  /// All angles zero.
  static ZDParameters trivial(std::vector<Rat1> ds, std::size_t n, std::size_t l);
};

/// ZDParameters plus the orthonormal basis A_1^{p_1}...A_t^{p_t} v_j as
/// columns, p_1 varying fastest and j slowest.
struct SpectralData {
  ZDParameters params;
  CMatrix basis;
};

Complex unit(const Rat1& angle);
double angle_of(Complex z);

/// Throws InputError on shape mismatch, 2t > n or a zero d.
ACTuple build_zd(const ZDParameters& p);

/// Conjugation (U A_i U^*).
ACTuple conjugate(const ACTuple& tuple, const CMatrix& u);

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
CMatrix random_unitary(std::size_t m, std::mt19937_64& rng);

/// [A,B] = A B A^{-1} B^{-1}.
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Default snapping cap, m * 720.
std::int64_t default_max_den(std::size_t m);

/// Commutator phases as a skew matrix over Q/Z. Throws VerificationError when
/// a commutator is not scalar within tol or its phase does not snap within tol.
/// max_den <= 0 selects default_max_den.
SkewQZ rho_classify(const ACTuple& tuple, double tol, std::int64_t max_den = 0);

struct PairDefect {
  std::size_t i = 0;
  std::size_t j = 0;
  double scalar_defect = 0;
  double angle_deviation = 0;
};

struct RelationReport {
  double unitarity_defect = 0;
  std::vector<PairDefect> pairs;
  bool passed = false;
  /// First pair exceeding tol, if any.
  std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
};

RelationReport verify_relations(const ACTuple& tuple, const SkewQZ& d, double tol);

/// Monic characteristic polynomial, coefficients from constant term upward.
std::vector<Complex> char_poly(const CMatrix& a);
/// Closed form of the characteristic polynomial of A_i (0-based i) from the
/// spectral parameters.
std::vector<Complex> expected_char_poly(const ZDParameters& p, std::size_t i);

struct CharPolyReport {
  std::vector<double> deviations;
  double max_deviation = 0;
  bool passed = false;
};

/// Coefficient deviations are relative to max(1, |expected coefficient|).
CharPolyReport char_poly_check(const ACTuple& tuple, const ZDParameters& p, double tol);

/// Largest residual |A_i b - lambda b| over basis vectors b and i > t, with
/// lambda = gamma^{p} alpha as in the Z_D eigenvalue pattern.
double eigen_pattern_defect(const ACTuple& tuple, const SpectralData& sd);

/// Spectral decomposition of a D-commuting tuple with D a standard block.
/// Throws InputError if d is not a standard block, VerificationError if the
/// relations fail, clustering is ambiguous or an angle does not snap.
SpectralData extract_canonical_basis(const ACTuple& tuple, const SkewQZ& d, double tol,
                                     std::int64_t max_den = 0);

/// Rows (alphas..., betas...) with alpha_{t+k} reduced modulo 1/|d_k|, sorted.
std::vector<std::vector<Rat1>> normalized_orbit_data(const ZDParameters& p);

/// A D-commuting tuple in U(m) for arbitrary D, built from Z_D of the normal
/// form and transported by the inverse witness. Throws InputError when sigma(D)
/// does not divide m.
ACTuple realize(const SkewQZ& d, std::size_t m, std::mt19937_64& rng);

}  // namespace acomm
