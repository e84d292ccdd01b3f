#include "doctest.h"

#include <numeric>

#include "acomm/census.hpp"
#include "acomm/errors.hpp"

using namespace acomm;

namespace {

std::vector<std::string> names(const std::vector<Partition>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

// Closed forms for N(n,p) and N(n,p^2).
BigInt closed_prime(int n, std::int64_t p) {
  const BigInt q = p;
  return 1 + (ipow(q, n - 1) - 1) * (ipow(q, n) - 1) / (q * q - 1);
}

BigInt closed_prime_square(int n, std::int64_t p) {
  const BigInt q = p;
  const BigInt tail = ipow(q, 2 * n + 1) - ipow(q, n) - ipow(q, n - 1) + ipow(q, 4) + q * q - 1;
  return 1 + (ipow(q, n - 1) - 1) * (ipow(q, n) - 1) * tail / ((q * q - 1) * (ipow(q, 4) - 1));
}

}  // namespace

TEST_CASE("partitions") {
  const Partition p = Partition::from_parts({2, 1, 1});
  CHECK(p.parts.size() == 2);
  CHECK(p.parts[1].copies == 2);
  CHECK(p.total() == 4);
  CHECK(p.length() == 3);
  CHECK(p.to_string() == "2+1+1");
  CHECK(p.flat() == std::vector<int>{2, 1, 1});
  CHECK_THROWS_AS(Partition::from_parts({1, 2}), InputError);
  CHECK_THROWS_AS(Partition::from_parts({0}), InputError);
}

TEST_CASE("enumerate_j") {
  CHECK(names(enumerate_j(5, 4)) ==
        std::vector<std::string>{"1", "2", "1+1", "3", "2+1", "4", "3+1", "2+2"});
  CHECK(names(enumerate_j(2, 3)) == std::vector<std::string>{"1", "2", "3"});
  CHECK(names(enumerate_j(4, 2)) == std::vector<std::string>{"1", "2", "1+1"});
  CHECK_THROWS_AS(enumerate_j(1, 2), InputError);
  // no duplicates, each respects the part bound
  const auto big = enumerate_j(8, 7);
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(big[i].length() <= 4);
    for (std::size_t j = i + 1; j < big.size(); ++j) CHECK_FALSE(big[i] == big[j]);
  }
}

TEST_CASE("n_p_alpha closed forms") {
  const Partition one = Partition::from_parts({1});
  const Partition two = Partition::from_parts({2});
  CHECK(n_p_alpha(2, 3, one) == 7);
  for (int n = 2; n <= 6; ++n)
    for (std::int64_t p : {2, 3, 5}) {
      const BigInt q = p;
      const BigInt base = (ipow(q, n - 1) - 1) * (ipow(q, n) - 1) / (q * q - 1);
      CHECK(n_p_alpha(p, n, one) == base);
      CHECK(n_p_alpha(p, n, two) == ipow(q, 2 * n - 3) * base);
    }
  CHECK(n_p_alpha(2, 4, Partition::from_parts({1, 1})) == 28);
  CHECK_THROWS_AS(n_p_alpha(4, 3, one), InputError);
  CHECK_THROWS_AS(n_p_alpha(2, 3, Partition::from_parts({1, 1})), InputError);
}

TEST_CASE("prime power and general counts") {
  CHECK(n_prime_power(3, 2, 1) == 8);
  CHECK(n_prime_power(3, 3, 1) == 27);
  CHECK(n_prime_power(4, 2, 2) == closed_prime_square(4, 2));
  CHECK(closed_prime_square(4, 2) == 1184);
  for (int n = 2; n <= 6; ++n)
    for (std::int64_t p : {2, 3, 5, 7}) {
      CHECK(n_prime_power(n, p, 1) == closed_prime(n, p));
      CHECK(n_prime_power(n, p, 2) == closed_prime_square(n, p));
    }
  CHECK(n_general(5, 1) == 1);
  CHECK(n_general(2, 6) == 6);
  CHECK(n_general(2, 4) == 4);
  // beyond 64 bits
  CHECK(n_general(20, 49) > BigInt(UINT64_MAX));
}

TEST_CASE("multiplicativity") {
  for (int n = 2; n <= 5; ++n)
    for (std::int64_t a = 1; a <= 6; ++a)
      for (std::int64_t b = 1; b <= 6; ++b)
        if (std::gcd(a, b) == 1) CHECK(n_general(n, a * b) == n_general(n, a) * n_general(n, b));
}

TEST_CASE("brute force census") {
  CHECK(brute_force_census(2, 2).total == 2);
  CHECK(brute_force_census(3, 2).total == 8);
  CHECK(brute_force_census(2, 1).total == 1);

  CensusOptions tight;
  tight.cap = 100;
  try {
    brute_force_census(4, 3, tight);
    FAIL("expected cap error");
  } catch (const ResourceCapExceeded& e) {
    CHECK(e.required() == 729);
    CHECK(e.cap() == 100);
  }

  CensusOptions threaded;
  threaded.jobs = 3;
  const auto a = brute_force_census(3, 6);
  const auto b = brute_force_census(3, 6, threaded);
  CHECK(a.total == b.total);
  CHECK(a.by_class == b.by_class);
}

TEST_CASE("oracle equivalence") {
  for (int n = 2; n <= 4; ++n)
    for (std::int64_t m = 1; m <= 6; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const auto report = brute_force_census(n, m);
      CHECK(report.total == n_general(n, m));
      BigInt sum = 0;
      for (const auto& [orders, count] : report.by_class) sum += count;
      CHECK(sum == report.total);
    }
}

TEST_CASE("class counts match N_p(alpha)") {
  for (auto [n, p, k] : std::vector<std::tuple<int, std::int64_t, int>>{{3, 2, 1}, {4, 2, 2}, {4, 3, 1}, {3, 5, 1}}) {
    std::int64_t m = 1;
    for (int i = 0; i < k; ++i) m *= p;
    const auto report = brute_force_census(n, m);
    CHECK(report.by_class.at({}) == 1);
    std::size_t seen = 1;
    for (const auto& alpha : enumerate_j(n, k)) {
      const auto key = class_orders(p, alpha);
      const auto it = report.by_class.find(key);
      REQUIRE(it != report.by_class.end());
      CHECK(it->second == n_p_alpha(p, n, alpha));
      ++seen;
    }
    CHECK(seen == report.by_class.size());
  }
}
