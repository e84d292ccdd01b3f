#pragma once

// Counting connected components of spaces of almost commuting n-tuples in
// U(m): partitions indexing congruence classes over Z/p^k, the closed-form
// class sizes, multiplicative assembly over prime powers, and a brute-force
// enumeration of T(n, Z/m) used as an independent oracle.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "acomm/exact_arith.hpp"

namespace acomm {

/// A partition written as t_1 copies of a_1, ..., t_j copies of a_j with
/// a_1 > a_2 > ... > a_j > 0.
struct Partition {
  struct Part {
    int size;
    int copies;
    friend bool operator==(const Part&, const Part&) = default;
  };
  std::vector<Part> parts;

  /// Builds from a non-increasing list of parts, e.g. {2, 1, 1}.
  static Partition from_parts(const std::vector<int>& nonincreasing);
  std::vector<int> flat() const;
  int total() const;
  int length() const;
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// All partitions of every k' in [1, k] with at most floor(n/2) parts, ordered
/// by k' and then by decreasing parts (1, 2, 1+1, 3, 2+1, ...).
std::vector<Partition> enumerate_j(int n, int k);

/// Number of matrices in T(n, Z/p^k) congruent to D_alpha.
BigInt n_p_alpha(std::int64_t p, int n, const Partition& alpha);

/// Number of D in T(n, Z/p^k) with sigma(D) | p^k.
BigInt n_prime_power(int n, std::int64_t p, int k);

/// Number of D in T(n, Z/m) with sigma(D) | m, i.e. the number of path
/// components of the space of almost commuting n-tuples in U(m).
BigInt n_general(int n, std::int64_t m);

struct CensusOptions {
  std::uint64_t cap = kDefaultCap;
  unsigned jobs = 1;
};

/// Brute-force census. by_class is keyed by the normal-form orders
/// (|d_1|, ..., |d_t|) of each qualifying matrix; the zero matrix sits under
/// the empty key, so total equals the sum over by_class.
struct CensusReport {
  int n = 0;
  std::int64_t m = 0;
  BigInt total = 0;
  std::map<std::vector<std::int64_t>, BigInt> by_class;
};

CensusReport brute_force_census(int n, std::int64_t m, const CensusOptions& options = {});

/// Normal-form orders (p^{a_1} repeated t_1 times, ...) of D_alpha.
std::vector<std::int64_t> class_orders(std::int64_t p, const Partition& alpha);

}  // namespace acomm
