#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hecke/modgroup/group.hpp"

namespace hecke::algebra {

using modgroup::GMat;
using modgroup::GroupDescriptor;

// Canonical form of a right coset Gamma g: (coset index of the unimodular
// part, Hermite form). For n = 3 (level 1 only) the coset index is always 0.
struct CosetKey {
  size_t coset;
  GMat h;
  bool operator<(const CosetKey& o) const { return coset != o.coset ? coset < o.coset : h < o.h; }
  bool operator==(const CosetKey& o) const { return coset == o.coset && h == o.h; }
};

CosetKey coset_key(const GroupDescriptor& gamma, const GMat& g);
// Representative rep_coset * h of the coset with this key.
GMat coset_rep(const GroupDescriptor& gamma, const CosetKey& k);

struct Term {
  mpz_class coeff;
  GMat rep;
};

// Sum_j a_j Gamma delta_j with pairwise distinct right cosets, sorted by key.
class DoubleCosetSum {
 public:
  DoubleCosetSum(GroupDescriptor left, GroupDescriptor right, int n = 2);
  const GroupDescriptor& left() const { return left_; }
  const GroupDescriptor& right() const { return right_; }
  int n() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Adds c * Gamma g, merging with an existing coset.
  void add(const mpz_class& c, const GMat& g);
  DoubleCosetSum operator+(const DoubleCosetSum& o) const;
  DoubleCosetSum operator-(const DoubleCosetSum& o) const;
  DoubleCosetSum scaled(const mpz_class& c) const;
  bool operator==(const DoubleCosetSum& o) const;
  bool operator!=(const DoubleCosetSum& o) const { return !(*this == o); }

  // Right invariance under the generators of the right group.
  bool right_invariant() const;
  std::string to_string() const;

 private:
  void check_same(const DoubleCosetSum& o) const;
  GroupDescriptor left_, right_;
  int n_;
  std::map<CosetKey, size_t> index_;
  std::vector<Term> terms_;
  std::vector<CosetKey> keys_;
};

// Generators used to close orbits: Schreier generators (n = 2) or elementary
// matrices (n = 3, level 1).
std::vector<GMat> group_generators(const GroupDescriptor& g, int n = 2);

// Gamma delta Gamma' as right cosets of Gamma.
DoubleCosetSum decompose(const GroupDescriptor& gamma, const GMat& delta, const GroupDescriptor& gamma_prime);
DoubleCosetSum identity_sum(const GroupDescriptor& gamma, int n = 2);

DoubleCosetSum compose(const DoubleCosetSum& a, const DoubleCosetSum& b);
// Formal products before merging (one term per pair).
std::vector<Term> compose_unmerged(const DoubleCosetSum& a, const DoubleCosetSum& b);

// Split a right-invariant sum into double cosets: (coefficient, representative).
std::vector<std::pair<mpz_class, GMat>> double_coset_components(const DoubleCosetSum& t);

// T_p^(m) = Gamma diag(1,..,1,p,..,p) Gamma with m entries p.
DoubleCosetSum hecke_tp(int64_t p, int m, int n, const GroupDescriptor& gamma);
// Sum of the double cosets with determinant a over elementary-divisor types.
DoubleCosetSum hecke_ta(int64_t a, const GroupDescriptor& gamma, int n = 2);
std::vector<std::vector<int64_t>> elementary_divisor_types(int64_t a, int n);

mpz_class degree(const DoubleCosetSum& t);
// Gaussian binomial [n choose m]_p.
mpz_class degree_formula(int64_t p, int m, int n);
// Coefficients of X^k in (sum_j (-1)^j p^{j(j-1)/2} T^(j) X^j)(sum_k T_{p^k} X^k),
// k = 0..k_max.
std::vector<DoubleCosetSum> series_coefficients(int64_t p, int n, int k_max, const GroupDescriptor& gamma);
bool series_check(int64_t p, int n, int k_max);
bool series_check(int64_t p, int n, int k_max, const GroupDescriptor& gamma);

// Finite-level compatibility of (inner, Delta_inner) -> (outer, Delta_outer).
bool check_compatible(const GroupDescriptor& inner, const GroupDescriptor& outer);

bool is_prime64(int64_t n);
std::vector<std::pair<int64_t, int>> factorize(int64_t n);

}  // namespace hecke::algebra
