#include "doctest.h"

#include <random>

#include "acomm/errors.hpp"
#include "acomm/exact_arith.hpp"
#include "test_support.hpp"

using namespace acomm;

TEST_CASE("Rat1 canonical construction") {
  CHECK(Rat1::make(7, 6) == Rat1::make(1, 6));
  CHECK(Rat1::make(-1, 2) == Rat1::make(1, 2));
  const Rat1 zero = Rat1::make(0, 5);
  CHECK(zero.num() == 0);
  CHECK(zero.den() == 1);
  CHECK(Rat1::make(4, -6) == Rat1::make(1, 3));
  CHECK_THROWS_AS(Rat1::make(1, 0), InputError);
}

TEST_CASE("Rat1 group operations") {
  CHECK(Rat1::make(1, 2) + Rat1::make(2, 3) == Rat1::make(1, 6));
  CHECK(-Rat1::make(1, 3) == Rat1::make(2, 3));
  CHECK(2 * Rat1::make(3, 4) == Rat1::make(1, 2));
  CHECK(-3 * Rat1::make(1, 4) == Rat1::make(1, 4));
  CHECK(Rat1::make(1, 2).order() == 2);
  CHECK(Rat1::make(2, 3).order() == 3);
  CHECK(Rat1{}.order() == 1);
}

TEST_CASE("Rat1 group laws on random elements") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-50, 50), den(1, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const Rat1 x = Rat1::make(num(rng), den(rng));
    const Rat1 y = Rat1::make(num(rng), den(rng));
    const Rat1 z = Rat1::make(num(rng), den(rng));
    CHECK((x + y) + z == x + (y + z));
    CHECK(x + y == y + x);
    CHECK((x + (-x)).is_zero());
    CHECK((x.order() * x).is_zero());
    const std::int64_t a = num(rng), b = den(rng);
    CHECK(Rat1::make(a, b) == Rat1::make(a + b, b));
  }
}

TEST_CASE("euler_phi") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(5) == 4);
  CHECK(euler_phi(12) == testing::brute_force_phi(12));
  CHECK(euler_phi(12) == 4);
  for (std::int64_t k = 1; k <= 1000; ++k) {
    std::int64_t divisor_sum = 0;
    for (std::int64_t d = 1; d <= k; ++d)
      if (k % d == 0) divisor_sum += euler_phi(d);
    REQUIRE(divisor_sum == k);
  }
  for (std::int64_t a = 1; a <= 40; ++a)
    for (std::int64_t b = 1; b <= 40; ++b)
      if (std::gcd(a, b) == 1) CHECK(euler_phi(a * b) == euler_phi(a) * euler_phi(b));
}

TEST_CASE("binomial") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(9, 0) == 1);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}

TEST_CASE("factorize and primality") {
  using F = std::vector<std::pair<std::int64_t, int>>;
  CHECK(factorize(1) == F{});
  CHECK(factorize(360) == F{{2, 3}, {3, 2}, {5, 1}});
  CHECK(is_prime(97));
  CHECK_FALSE(is_prime(91));
}

TEST_CASE("best rational approximation") {
  CHECK(best_rational_approximation(1.0 / 3.0 + 1e-13, 100) == Rat1::make(1, 3));
  CHECK(best_rational_approximation(-0.5, 10) == Rat1::make(1, 2));
  CHECK(best_rational_approximation(0.9999999999999, 10).is_zero());
  // Closest fraction to 5/7 with denominator at most 6 is 3/4.
  CHECK(best_rational_approximation(5.0 / 7.0, 6) == Rat1::make(3, 4));
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> den(1, 720);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t q = den(rng);
    const Rat1 x = Rat1::make(std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng), q);
    CHECK(best_rational_approximation(x.to_double() + 1e-12, 720) == x);
  }
}

TEST_CASE("subgroup order of (Q/Z)^n") {
  const Rat1 h = Rat1::make(1, 2);
  CHECK(qz_subgroup_order({{Rat1{}, h}, {h, Rat1{}}}, 2) == 4);
  CHECK(qz_subgroup_order({{Rat1::make(1, 3), Rat1::make(1, 3)}, {Rat1::make(2, 3), Rat1::make(2, 3)}}, 2) == 3);
  CHECK(qz_subgroup_order({}, 3) == 1);
  CHECK_THROWS_AS(qz_subgroup_order({{Rat1::make(1, 1000), Rat1{}}, {Rat1{}, Rat1::make(1, 999)}}, 2, 1000),
                  ResourceCapExceeded);
}

TEST_CASE("determinant and unimodular inverse") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const IntMatrix a = testing::random_unimodular(5, rng);
    const BigInt det = determinant(a);
    CHECK((det == 1 || det == -1));
    CHECK(multiply(a, unimodular_inverse(a)) == IntMatrix::identity(5));
  }
  CHECK(determinant(IntMatrix{{2, 0}, {0, 3}}) == 6);
  CHECK_THROWS_AS(unimodular_inverse(IntMatrix{{2, 0}, {0, 1}}), InputError);
}
