#include "acomm/exact_arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "acomm/errors.hpp"

namespace acomm {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 addition overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 subtraction overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 multiplication overflow");
  return r;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(std::abs(a) / std::gcd(a, b), std::abs(b));
}

Rat1 Rat1::make(std::int64_t a, std::int64_t b) {
  if (b == 0) throw InputError("Rat1: zero denominator");
  if (b < 0) {
    a = checked_mul(a, -1);
    b = checked_mul(b, -1);
  }
  std::int64_t r = mod_floor(a, b);
  if (r == 0) return Rat1{};
  std::int64_t g = std::gcd(r, b);
  return Rat1{r / g, b / g};
}

Rat1 Rat1::operator-() const {
  if (num_ == 0) return *this;
  return Rat1{den_ - num_, den_};
}

Rat1 operator+(Rat1 x, Rat1 y) {
  const std::int64_t g = std::gcd(x.den_, y.den_);
  const std::int64_t den = checked_mul(x.den_ / g, y.den_);
  __int128 num = static_cast<__int128>(x.num_) * (y.den_ / g) +
                 static_cast<__int128>(y.num_) * (x.den_ / g);
  num %= den;
  return Rat1::make(static_cast<std::int64_t>(num), den);
}

Rat1 operator*(std::int64_t k, Rat1 x) {
  __int128 num = static_cast<__int128>(k % x.den_) * x.num_;
  num %= x.den_;
  return Rat1::make(static_cast<std::int64_t>(num), x.den_);
}

std::strong_ordering operator<=>(const Rat1& x, const Rat1& y) {
  const __int128 lhs = static_cast<__int128>(x.num_) * y.den_;
  const __int128 rhs = static_cast<__int128>(y.num_) * x.den_;
  if (lhs != rhs) return lhs < rhs ? std::strong_ordering::less : std::strong_ordering::greater;
  return x.den_ <=> y.den_;
}

std::string Rat1::to_string() const {
  if (num_ == 0) return "0";
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t euler_phi(std::int64_t k) {
  if (k < 1) throw InputError("euler_phi: argument must be positive");
  std::int64_t result = k;
  for (auto [p, e] : factorize(k)) result = result / p * (p - 1);
  return result;
}

BigInt binomial(std::int64_t a, std::int64_t b) {
  if (b < 0 || a < 0 || b > a) return 0;
  b = std::min(b, a - b);
  BigInt r = 1;
  for (std::int64_t i = 1; i <= b; ++i) {
    r *= a - b + i;
    r /= i;
  }
  return r;
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t m) {
  if (m < 1) throw InputError("factorize: argument must be positive");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    int e = 0;
    while (m % d == 0) {
      m /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

BigInt ipow(const BigInt& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

BigInt exact_isqrt(const BigInt& x) {
  if (x < 0) return -1;
  BigInt r = boost::multiprecision::sqrt(x);
  return r * r == x ? r : BigInt(-1);
}

Rat1 best_rational_approximation(double angle, std::int64_t max_den) {
  if (max_den < 1) throw InputError("best_rational_approximation: max_den must be positive");
  if (!std::isfinite(angle)) throw InputError("best_rational_approximation: non-finite angle");
  double x = angle - std::floor(angle);

  // Convergents h/k of the continued fraction of x.
  std::int64_t h2 = 0, h1 = 1, k2 = 1, k1 = 0;
  double r = x;
  std::int64_t best_h = 0, best_k = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(r);
    if (fl > static_cast<double>(std::numeric_limits<std::int32_t>::max())) break;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t h = a * h1 + h2;
    const std::int64_t k = a * k1 + k2;
    if (k > max_den) {
      // Largest admissible semiconvergent versus the last convergent.
      const std::int64_t s = (max_den - k2) / k1;
      const std::int64_t sh = s * h1 + h2;
      const std::int64_t sk = s * k1 + k2;
      const double err_semi = std::abs(x - static_cast<double>(sh) / static_cast<double>(sk));
      const double err_conv = std::abs(x - static_cast<double>(h1) / static_cast<double>(k1));
      if (sk >= 1 && err_semi < err_conv) {
        best_h = sh;
        best_k = sk;
      }
      break;
    }
    best_h = h;
    best_k = k;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return Rat1::make(best_h, best_k);
}

double circular_distance(double a, double b) {
  double d = std::fmod(a - b, 1.0);
  if (d < 0) d += 1.0;
  return std::min(d, 1.0 - d);
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

BigInt qz_subgroup_order(const std::vector<std::vector<Rat1>>& generators, std::size_t width,
                         std::uint64_t cap) {
  std::int64_t modulus = 1;
  for (const auto& g : generators) {
    if (g.size() != width) throw InputError("qz_subgroup_order: generator width mismatch");
    for (const auto& x : g) modulus = checked_lcm(modulus, x.den());
  }
  if (modulus == 1) return 1;

  std::vector<std::vector<std::int64_t>> gens;
  for (const auto& g : generators) {
    std::vector<std::int64_t> v(width);
    bool nonzero = false;
    for (std::size_t i = 0; i < width; ++i) {
      v[i] = g[i].num() * (modulus / g[i].den());
      nonzero |= v[i] != 0;
    }
    if (nonzero) gens.push_back(std::move(v));
  }

  auto add = [&](std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
    for (std::size_t i = 0; i < width; ++i) a[i] = (a[i] + b[i]) % modulus;
    return a;
  };

  std::vector<std::vector<std::int64_t>> elements{std::vector<std::int64_t>(width, 0)};
  std::unordered_set<std::vector<std::int64_t>, VecHash> members{elements.front()};
  for (const auto& g : gens) {
    // Order of g modulo the current subgroup.
    std::uint64_t index = 1;
    std::vector<std::int64_t> x = g;
    while (!members.contains(x)) {
      x = add(std::move(x), g);
      ++index;
    }
    if (index == 1) continue;
    const std::uint64_t next_size = elements.size() * index;
    if (next_size > cap) throw ResourceCapExceeded("subgroup closure", next_size, cap);
    const std::size_t base = elements.size();
    elements.reserve(next_size);
    std::vector<std::int64_t> shift = g;
    for (std::uint64_t i = 1; i < index; ++i) {
      for (std::size_t e = 0; e < base; ++e) {
        auto y = add(elements[e], shift);
        members.insert(y);
        elements.push_back(std::move(y));
      }
      shift = add(std::move(shift), g);
    }
  }
  return BigInt(elements.size());
}

BigInt determinant(const IntMatrix& a) {
  if (!a.square()) throw InputError("determinant: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Matrix<BigInt> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  if (!a.square()) throw InputError("unimodular_inverse: matrix not square");
  const BigInt det = determinant(a);
  if (det != 1 && det != -1) throw InputError("unimodular_inverse: determinant is not +-1");
  const std::size_t n = a.rows();
  Matrix<BigRational> m(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    m(i, n + i) = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (m(p, c) == 0) ++p;
    m.swap_rows(p, c);
    const BigRational piv = m(c, c);
    for (std::size_t j = 0; j < 2 * n; ++j) m(c, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      const BigRational f = m(i, c);
      for (std::size_t j = 0; j < 2 * n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const BigRational& v = m(i, n + j);
      if (boost::multiprecision::denominator(v) != 1)
        throw InvariantViolation("unimodular_inverse: non-integral entry");
      if (boost::multiprecision::abs(boost::multiprecision::numerator(v)) >
          std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("unimodular_inverse: entry exceeds int64");
      inv(i, j) = static_cast<std::int64_t>(boost::multiprecision::numerator(v));
    }
  return inv;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("multiply: dimension mismatch");
  IntMatrix c(a.rows(), b.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) = checked_add(c(i, j), checked_mul(a(i, k), b(k, j)));
    }
  return c;
}

}  // namespace acomm
