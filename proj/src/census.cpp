#include "acomm/census.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>

#include "acomm/errors.hpp"
#include "acomm/skew_forms.hpp"

namespace acomm {

Partition Partition::from_parts(const std::vector<int>& nonincreasing) {
  Partition out;
  for (std::size_t i = 0; i < nonincreasing.size(); ++i) {
    const int a = nonincreasing[i];
    if (a <= 0) throw InputError("Partition: parts must be positive");
    if (i > 0 && a > nonincreasing[i - 1]) throw InputError("Partition: parts must be non-increasing");
    if (!out.parts.empty() && out.parts.back().size == a)
      ++out.parts.back().copies;
    else
      out.parts.push_back({a, 1});
  }
  return out;
}

std::vector<int> Partition::flat() const {
  std::vector<int> out;
  for (const auto& p : parts) out.insert(out.end(), static_cast<std::size_t>(p.copies), p.size);
  return out;
}

int Partition::total() const {
  int s = 0;
  for (const auto& p : parts) s += p.size * p.copies;
  return s;
}

int Partition::length() const {
  int s = 0;
  for (const auto& p : parts) s += p.copies;
  return s;
}

std::string Partition::to_string() const {
  std::string s;
  for (int a : flat()) {
    if (!s.empty()) s += '+';
    s += std::to_string(a);
  }
  return s;
}

namespace {

void partitions_of(int remaining, int max_part, int max_len, std::vector<int>& prefix,
                   std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(Partition::from_parts(prefix));
    return;
  }
  if (max_len == 0) return;
  for (int a = std::min(remaining, max_part); a >= 1; --a) {
    prefix.push_back(a);
    partitions_of(remaining - a, a, max_len - 1, prefix, out);
    prefix.pop_back();
  }
}

BigRational one_minus_inverse_power(std::int64_t p, int l) {
  const BigInt pl = ipow(BigInt(p), static_cast<unsigned>(l));
  return BigRational(pl - 1, pl);
}

}  // namespace

std::vector<Partition> enumerate_j(int n, int k) {
  if (n < 2 || k < 1) throw InputError("enumerate_j: requires n >= 2 and k >= 1");
  std::vector<Partition> out;
  std::vector<int> prefix;
  for (int total = 1; total <= k; ++total) partitions_of(total, total, n / 2, prefix, out);
  return out;
}

std::vector<std::int64_t> class_orders(std::int64_t p, const Partition& alpha) {
  std::vector<std::int64_t> out;
  for (int a : alpha.flat()) {
    std::int64_t v = 1;
    for (int i = 0; i < a; ++i) v = checked_mul(v, p);
    out.push_back(v);
  }
  return out;
}

BigInt n_p_alpha(std::int64_t p, int n, const Partition& alpha) {
  if (!is_prime(p)) throw InputError("n_p_alpha: p must be prime");
  if (alpha.parts.empty()) throw InputError("n_p_alpha: empty partition");
  if (2 * alpha.length() > n) throw InputError("n_p_alpha: partition has more than n/2 parts");

  // s_i = n - 2 (t_1 + ... + t_i)
  std::vector<int> s{n};
  for (const auto& part : alpha.parts) s.push_back(s.back() - 2 * part.copies);
  const int sj = s.back();

  long long e = static_cast<long long>(sj) * sj;
  long long sum_f = 0;
  long long exponent = 0;
  for (std::size_t i = 0; i < alpha.parts.size(); ++i) {
    const long long t = alpha.parts[i].copies;
    const long long a = alpha.parts[i].size;
    e += t * (s[i] + s[i + 1] + 1);
    const long long f = t * (s[i] + s[i + 1] - 1);
    sum_f += f;
    exponent += a * f;
  }
  if (e + sum_f != static_cast<long long>(n) * n)
    throw InvariantViolation("n_p_alpha: exponent identity e + sum f_i = n^2 fails");

  BigRational value = BigRational(ipow(BigInt(p), static_cast<unsigned>(exponent)));
  for (int l = sj + 1; l <= n; ++l) value *= one_minus_inverse_power(p, l);
  for (const auto& part : alpha.parts)
    for (int l = 1; l <= part.copies; ++l) value /= one_minus_inverse_power(p, 2 * l);

  if (boost::multiprecision::denominator(value) != 1)
    throw InvariantViolation("n_p_alpha: class size " + value.str() + " is not an integer");
  return boost::multiprecision::numerator(value);
}

BigInt n_prime_power(int n, std::int64_t p, int k) {
  BigInt total = 1;
  for (const auto& alpha : enumerate_j(n, k)) total += n_p_alpha(p, n, alpha);
  return total;
}

BigInt n_general(int n, std::int64_t m) {
  if (n < 2 || m < 1) throw InputError("n_general: requires n >= 2 and m >= 1");
  BigInt total = 1;
  for (auto [p, k] : factorize(m)) total *= n_prime_power(n, p, k);
  return total;
}

CensusReport brute_force_census(int n, std::int64_t m, const CensusOptions& options) {
  if (n < 2 || m < 1) throw InputError("brute_force_census: requires n >= 2 and m >= 1");
  const std::size_t slots = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < slots; ++i) {
    if (size > options.cap / static_cast<std::uint64_t>(m)) {
      // Report the true size when it fits in 64 bits.
      BigInt full = ipow(BigInt(m), static_cast<unsigned>(slots));
      const std::uint64_t required =
          full > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<std::uint64_t>(full);
      throw ResourceCapExceeded("brute_force_census(" + std::to_string(n) + "," + std::to_string(m) + ")",
                                required, options.cap);
    }
    size *= static_cast<std::uint64_t>(m);
  }

  std::vector<std::pair<std::size_t, std::size_t>> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) upper.emplace_back(i, j);

  using ClassMap = std::map<std::vector<std::int64_t>, std::uint64_t>;
  auto work = [&](std::uint64_t begin, std::uint64_t end, ClassMap& classes) {
    std::vector<std::int64_t> digits(slots, 0);
    std::uint64_t idx = begin;
    for (std::size_t s = 0; s < slots; ++s) {
      digits[s] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(m));
      idx /= static_cast<std::uint64_t>(m);
    }
    for (std::uint64_t it = begin; it < end; ++it) {
      SkewQZ d(static_cast<std::size_t>(n));
      for (std::size_t s = 0; s < slots; ++s) d.set(upper[s].first, upper[s].second, Rat1::make(digits[s], m));
      const BigInt sg = sigma(d, options.cap);
      if (BigInt(m) % sg == 0) ++classes[congruence_normal_form_qz(d).orders()];
      // odometer step
      for (std::size_t s = 0; s < slots; ++s) {
        if (++digits[s] < m) break;
        digits[s] = 0;
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(std::min<std::uint64_t>(size, 256))));
  std::vector<ClassMap> partial(jobs);
  if (jobs == 1) {
    work(0, size, partial[0]);
  } else {
    std::vector<std::exception_ptr> failures(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      const std::uint64_t begin = size * w / jobs;
      const std::uint64_t end = size * (w + 1) / jobs;
      workers.emplace_back([&, w, begin, end] {
        try {
          work(begin, end, partial[w]);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
  }

  CensusReport report;
  report.n = n;
  report.m = m;
  for (const auto& classes : partial)
    for (const auto& [orders, count] : classes) {
      report.by_class[orders] += count;
      report.total += count;
    }
  return report;
}

}  // namespace acomm
