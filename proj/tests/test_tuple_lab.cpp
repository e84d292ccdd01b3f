#include "doctest.h"

#include <cmath>
#include <random>

#include "acomm/errors.hpp"
#include "acomm/tuple_lab.hpp"
#include "test_support.hpp"

using namespace acomm;

namespace {

Rat1 r(std::int64_t a, std::int64_t b) { return Rat1::make(a, b); }

constexpr double kTol = 1e-9;
constexpr double kSpectralTol = 1e-6;

ZDParameters six_by_six_example() {
  ZDParameters p = ZDParameters::trivial({r(1, 2), r(1, 3)}, 5, 1);
  p.betas[0] = {r(1, 5), r(2, 7)};
  p.alphas[0] = {r(1, 8), r(3, 10), r(5, 11)};
  return p;
}

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

double tuple_distance(const ACTuple& a, const ACTuple& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.n; ++i) worst = std::max(worst, (a.mats[i] - b.mats[i]).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("build_zd reproduces the 6x6 example") {
  const ZDParameters p = six_by_six_example();
  const ACTuple z = build_zd(p);
  REQUIRE(z.n == 5);
  REQUIRE(z.m == 6);
  const Complex b1 = unit(r(1, 5)), b2 = unit(r(2, 7));
  const Complex a3 = unit(r(1, 8)), a4 = unit(r(3, 10)), a5 = unit(r(5, 11));
  const Complex g2 = unit(r(1, 3));
  const auto& A1 = z.mats[0];
  const auto& A2 = z.mats[1];
  for (int k = 0; k < 3; ++k) {
    CHECK(close(A1(2 * k, 2 * k + 1), b1));
    CHECK(close(A1(2 * k + 1, 2 * k), 1.0));
  }
  CHECK(close(A2(0, 4), b2));
  CHECK(close(A2(1, 5), b2));
  for (int k = 0; k < 4; ++k) CHECK(close(A2(k + 2, k), 1.0));
  CHECK(std::abs(A1.sum() - 3.0 - 3.0 * b1) < 1e-12);
  CHECK(std::abs(A2.sum() - 4.0 - 2.0 * b2) < 1e-12);
  for (int k = 0; k < 6; ++k) {
    CHECK(close(z.mats[2](k, k), k % 2 ? -a3 : a3));
    CHECK(close(z.mats[3](k, k), std::pow(g2, k / 2) * a4));
    CHECK(close(z.mats[4](k, k), a5));
  }
  CHECK(rho_classify(z, kTol) == standard_block(p.ds, 5));
  CHECK(verify_relations(z, standard_block(p.ds, 5), kTol).passed);
}

TEST_CASE("Pauli pair") {
  const ACTuple z = build_zd(ZDParameters::trivial({r(1, 2)}, 2, 1));
  CHECK(z.mats[0].isApprox(CMatrix{{0, 1}, {1, 0}}));
  CHECK(z.mats[1].isApprox(CMatrix{{1, 0}, {0, -1}}));
  CHECK(commutator(z.mats[0], z.mats[1]).isApprox(-CMatrix::Identity(2, 2)));
  CHECK(rho_classify(z, kTol) == standard_block(std::vector<Rat1>{r(1, 2)}, 2));
  const auto report = verify_relations(z, SkewQZ(2), kTol);
  CHECK_FALSE(report.passed);
  REQUIRE(report.failing_pair);
  CHECK(*report.failing_pair == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("t = 0 gives a commuting diagonal tuple") {
  ZDParameters p = ZDParameters::trivial({}, 3, 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 3; ++i) p.alphas[j][i] = r(static_cast<std::int64_t>(i + j), 7);
  const ACTuple z = build_zd(p);
  CHECK(z.m == 4);
  for (const auto& a : z.mats) CHECK((a - CMatrix(a.diagonal().asDiagonal())).norm() == 0);
  CHECK(rho_classify(z, kTol) == SkewQZ(3));
  CHECK(char_poly_check(z, p, kSpectralTol).passed);
  const auto sd = extract_canonical_basis(z, SkewQZ(3), kSpectralTol);
  CHECK(sd.params.l == 4);
  CHECK(normalized_orbit_data(sd.params) == normalized_orbit_data(p));
}

TEST_CASE("build_zd rejects bad shapes") {
  ZDParameters p = ZDParameters::trivial({r(1, 2)}, 3, 2);
  p.alphas.pop_back();
  CHECK_THROWS_AS(build_zd(p), InputError);
  ZDParameters q = ZDParameters::trivial({r(1, 2)}, 3, 1);
  q.betas[0].push_back(Rat1{});
  CHECK_THROWS_AS(build_zd(q), InputError);
  ZDParameters z = ZDParameters::trivial({r(1, 2)}, 2, 1);
  z.ds[0] = Rat1{};
  CHECK_THROWS_AS(build_zd(z), InputError);
}

TEST_CASE("construction soundness on random parameters") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const ZDParameters p = testing::random_zd_parameters(rng);
    const ACTuple z = build_zd(p);
    const SkewQZ d = standard_block(p.ds, p.n);
    CHECK(verify_relations(z, d, kTol).passed);
    CHECK(rho_classify(z, kTol) == d);
    CHECK(char_poly_check(z, p, kSpectralTol).passed);
  }
}

TEST_CASE("conjugation") {
  std::mt19937_64 rng(103);
  const ACTuple z = build_zd(six_by_six_example());
  CHECK(tuple_distance(conjugate(z, CMatrix::Identity(6, 6)), z) == 0);
  const CMatrix u = random_unitary(6, rng);
  CHECK((u.adjoint() * u - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  const ACTuple c = conjugate(z, u);
  CHECK(rho_classify(c, kTol) == rho_classify(z, kTol));
  CHECK(verify_relations(c, rho_classify(z, kTol), kTol).passed);
  CHECK(tuple_distance(conjugate(c, u.adjoint()), z) < 1e-12);
  CHECK_THROWS_AS(conjugate(z, CMatrix::Identity(5, 5)), InputError);
}

TEST_CASE("rho_classify rejects non-central commutators") {
  ACTuple bad;
  bad.n = 2;
  bad.m = 2;
  bad.mats = {CMatrix{{0, 1}, {1, 0}}, CMatrix{{1, 0}, {0, Complex{0, 1}}}};
  CHECK_THROWS_AS(rho_classify(bad, kTol), VerificationError);
  bad.mats.pop_back();
  CHECK_THROWS_AS(rho_classify(bad, kTol), InputError);
}

TEST_CASE("characteristic polynomial closed forms") {
  const ZDParameters p = six_by_six_example();
  const ACTuple z = build_zd(p);
  // (z^2 - beta)^3
  const Complex b = unit(r(1, 5));
  const auto chi1 = expected_char_poly(p, 0);
  REQUIRE(chi1.size() == 7);
  CHECK(close(chi1[6], 1.0));
  CHECK(close(chi1[4], -3.0 * b));
  CHECK(close(chi1[2], 3.0 * b * b));
  CHECK(close(chi1[0], -b * b * b));
  CHECK(close(chi1[1], 0.0));
  // (z - alpha)^6
  const Complex a = unit(r(5, 11));
  const auto chi5 = expected_char_poly(p, 4);
  CHECK(close(chi5[5], -6.0 * a));
  CHECK(close(chi5[0], std::pow(a, 6)));
  const auto report = char_poly_check(z, p, kSpectralTol);
  CHECK(report.passed);
  CHECK(report.deviations.size() == 5);
  // the wrong beta is detected
  ZDParameters wrong = p;
  wrong.betas[0][0] = r(2, 5);
  CHECK_FALSE(char_poly_check(z, wrong, kSpectralTol).passed);
}

TEST_CASE("spectral extraction round trip") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 25; ++trial) {
    const ZDParameters p = testing::random_zd_parameters(rng, 2, 5, 3, 24);
    const SkewQZ d = standard_block(p.ds, p.n);
    const ACTuple c = conjugate(build_zd(p), random_unitary(p.m(), rng));
    const SpectralData sd = extract_canonical_basis(c, d, kSpectralTol);
    CHECK(sd.params.l == p.l);
    CHECK(normalized_orbit_data(sd.params) == normalized_orbit_data(p));
    CHECK(eigen_pattern_defect(c, sd) < kSpectralTol);
    const auto m = static_cast<Eigen::Index>(p.m());
    CHECK((sd.basis.adjoint() * sd.basis - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff() < kSpectralTol);
    // the spectral basis conjugates the tuple back into Z_D
    const ACTuple back = conjugate(c, sd.basis.adjoint());
    CHECK(tuple_distance(back, build_zd(sd.params)) < kSpectralTol);
    const ACTuple rebuilt = build_zd(sd.params);
    CHECK(verify_relations(rebuilt, d, kTol).passed);
    CHECK(char_poly_check(c, sd.params, kSpectralTol).passed);
    for (std::size_t i = 0; i < p.n; ++i) {
      const auto x = char_poly(c.mats[i]);
      const auto y = char_poly(rebuilt.mats[i]);
      for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(x[k] - y[k]) < kSpectralTol * std::max(1.0, std::abs(y[k])));
    }
  }
}

TEST_CASE("extraction errors") {
  const ACTuple z = build_zd(six_by_six_example());
  SkewQZ not_block(5);
  not_block.set(0, 2, r(1, 2));
  CHECK_THROWS_AS(extract_canonical_basis(z, not_block, kSpectralTol), InputError);
  CHECK_THROWS_AS(extract_canonical_basis(z, standard_block(std::vector<Rat1>{r(1, 2)}, 5), kSpectralTol),
                  VerificationError);
}

TEST_CASE("normalized orbit data absorbs the Z_D action") {
  ZDParameters p = six_by_six_example();
  ZDParameters q = p;
  q.alphas[0][0] = q.alphas[0][0] + r(1, 2);
  q.alphas[0][1] = q.alphas[0][1] + r(2, 3);
  CHECK(normalized_orbit_data(p) == normalized_orbit_data(q));
  q.alphas[0][2] = q.alphas[0][2] + r(1, 2);
  CHECK_FALSE(normalized_orbit_data(p) == normalized_orbit_data(q));
}

TEST_CASE("realize arbitrary D") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::int64_t base = 2 + trial % 4;
    const SkewQZ d = testing::random_skew(n, base, rng);
    const auto s = static_cast<std::size_t>(sigma(d));
    const ACTuple a = realize(d, s * (1 + trial % 2), rng);
    CHECK(rho_classify(a, kTol) == d);
    CHECK(verify_relations(a, d, kTol).passed);
    if (s > 1) CHECK_THROWS_AS(realize(d, s + 1, rng), InputError);
  }
}

TEST_CASE("classified tuples always have sigma dividing m") {
  std::mt19937_64 rng(113);
  std::uniform_int_distribution<std::int64_t> phase(0, 999);
  for (int trial = 0; trial < 60; ++trial) {
    const SkewQZ d = testing::random_skew(3, 2 + trial % 5, rng);
    const auto s = static_cast<std::size_t>(sigma(d));
    const std::size_t m = s * (1 + trial % 2);
    if (m > 24) continue;
    ACTuple a = conjugate(realize(d, m, rng), random_unitary(m, rng));
    for (auto& x : a.mats) x *= unit(Rat1::make(phase(rng), 1000));
    const SkewQZ got = rho_classify(a, kTol);
    CHECK(m % static_cast<std::size_t>(sigma(got)) == 0);
  }
}
