#pragma once

// Exact arithmetic substrate: elements of Q/Z, checked 64-bit integer
// helpers, arbitrary-precision counts, and finite subgroups of (Q/Z)^n.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acomm/matrix.hpp"

namespace acomm {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr std::uint64_t kDefaultCap = 10'000'000;

// Checked int64 arithmetic; throws std::overflow_error.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

/// Non-negative residue of a modulo m (m > 0).
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// An element of Q/Z stored as a reduced fraction num/den with 0 <= num < den.
/// Zero is 0/1. Equality is structural.
class Rat1 {
 public:
  constexpr Rat1() = default;

  /// a/b reduced mod 1. Throws InputError when b == 0.
  static Rat1 make(std::int64_t a, std::int64_t b);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  /// Additive order in Q/Z.
  std::int64_t order() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }
  /// Representative in [0, 1).
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  BigRational to_rational() const { return BigRational(num_, den_); }

  Rat1 operator-() const;
  friend Rat1 operator+(Rat1 x, Rat1 y);
  friend Rat1 operator-(Rat1 x, Rat1 y) { return x + (-y); }
  friend Rat1 operator*(std::int64_t k, Rat1 x);
  Rat1& operator+=(Rat1 y) { return *this = *this + y; }

  friend bool operator==(const Rat1&, const Rat1&) = default;
  /// Orders by value of the [0,1) representative.
  friend std::strong_ordering operator<=>(const Rat1& x, const Rat1& y);

  std::string to_string() const;

 private:
  constexpr Rat1(std::int64_t num, std::int64_t den) : num_(num), den_(den) {}
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::int64_t euler_phi(std::int64_t k);
/// Binomial coefficient; zero when b > a or b < 0.
BigInt binomial(std::int64_t a, std::int64_t b);
bool is_prime(std::int64_t p);
/// Prime factorization as (prime, exponent) pairs in increasing prime order.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t m);
BigInt ipow(const BigInt& base, unsigned exponent);
/// Integer square root when x is a perfect square, otherwise -1.
BigInt exact_isqrt(const BigInt& x);

/// Best rational approximation of an angle (in turns) with denominator at most
/// max_den, reduced into Q/Z. Uses continued-fraction convergents and
/// semiconvergents.
Rat1 best_rational_approximation(double angle, std::int64_t max_den);

/// Circular distance between two angles measured in turns, in [0, 1/2].
double circular_distance(double a, double b);

/// Order of the subgroup of (Q/Z)^width generated by `generators` (each of
/// length width). Computed by closure in (Z/L)^width, L the lcm of all
/// denominators. Throws ResourceCapExceeded if the closure grows past cap.
BigInt qz_subgroup_order(const std::vector<std::vector<Rat1>>& generators, std::size_t width,
                         std::uint64_t cap = kDefaultCap);

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
BigInt determinant(const IntMatrix& a);
/// Inverse of an integer matrix with determinant +-1. Throws InputError otherwise.
IntMatrix unimodular_inverse(const IntMatrix& a);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

}  // namespace acomm

template <>
struct std::hash<acomm::Rat1> {
  std::size_t operator()(const acomm::Rat1& x) const noexcept {
    return std::hash<std::int64_t>{}(x.num()) * 1000003u ^ std::hash<std::int64_t>{}(x.den());
  }
};
