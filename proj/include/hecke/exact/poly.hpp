#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hecke/exact/matrix.hpp"

namespace hecke::exact {

// Dense univariate polynomial, coefficients low -> high, no trailing zeros.
class Poly {
 public:
  explicit Poly(const Ring* ring) : ring_(ring) {}
  Poly(const Ring* ring, std::vector<Scalar> coeffs);
  static Poly from_ints(const Ring* ring, const std::vector<long>& coeffs);
  static Poly monomial(const Ring* ring, const Scalar& c, size_t deg);
  static Poly x(const Ring* ring) { return monomial(ring, Scalar::one(ring), 1); }
  static Poly constant(const Scalar& c);

  const Ring* ring() const { return ring_; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(size_t i) const { return i < c_.size() ? c_[i] : Scalar::zero(ring_); }
  Scalar lead() const;
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
  Poly monic() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Scalar& s) const;
  bool operator==(const Poly& o) const { return ring_ == o.ring_ && c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }
  // Deterministic total order (degree, then coefficients high -> low).
  bool less(const Poly& o) const;

  Scalar eval(const Scalar& x) const;
  Matrix eval(const Matrix& m) const;
  Poly derivative() const;
  Poly converted(const Ring* target) const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  const Ring* ring_;
  std::vector<Scalar> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
// Monic gcd over a field (zero if both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);
Poly powmod(const Poly& base, const mpz_class& e, const Poly& mod);
Poly pow(const Poly& base, unsigned e);

struct Factor {
  Poly poly;
  int multiplicity;
};

struct Factorization {
  Scalar unit;                  // leading coefficient (content over Q)
  std::vector<Factor> factors;  // monic irreducibles, sorted deterministically
  // Over Q: true iff every reported factor is certified irreducible.
  bool certified = true;
  Poly product() const;
};

// Monic characteristic polynomial det(x I - M) via Hessenberg reduction.
Poly char_poly(const Matrix& m);

// Complete factorization over Q or a finite field F_{p^r}.
Factorization factor(const Poly& f);

// Roots in the coefficient field, with multiplicity.
std::vector<std::pair<Scalar, int>> roots(const Poly& f);

// Finite-field building blocks, exposed for tests.
std::vector<Factor> squarefree_decomposition(const Poly& f);
std::vector<std::pair<Poly, int>> distinct_degree(const Poly& squarefree_monic);
std::vector<Poly> equal_degree(const Poly& f, int d, std::mt19937_64& rng);

}  // namespace hecke::exact
