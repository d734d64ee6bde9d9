#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace hecke::exact {

enum class RingKind { Integer, Rational, ModN, FiniteField };

// Immutable, interned ring descriptor. Two rings are equal iff their
// descriptor pointers are equal; descriptors live for the whole process.
class Ring {
 public:
  static const Ring* integers();
  static const Ring* rationals();
  // Z/n for n >= 2 (not necessarily a field).
  static const Ring* mod(int64_t n);
  // F_{p^r}. The defining polynomial of degree r is the first monic
  // irreducible in lexicographic order of (c_{r-1}, ..., c_0).
  static const Ring* finite_field(int64_t p, int r = 1);

  RingKind kind() const { return kind_; }
  bool is_field() const;
  bool is_finite() const { return kind_ == RingKind::ModN || kind_ == RingKind::FiniteField; }
  // n for Z/n, p for F_{p^r}, 0 otherwise.
  int64_t modulus() const { return modulus_; }
  int64_t characteristic() const;
  int degree() const { return degree_; }
  // Number of elements for finite rings; 0 otherwise.
  int64_t order() const { return order_; }
  // Coefficients c_0..c_r (monic) of the defining polynomial; {0, 1} for prime fields.
  const std::vector<int64_t>& defining_poly() const { return def_poly_; }
  std::string name() const;

  // Finite field internals (codes are base-p digit encodings of the polynomial
  // representative, constant term least significant).
  int64_t ff_add(int64_t a, int64_t b) const;
  int64_t ff_neg(int64_t a) const;
  int64_t ff_mul(int64_t a, int64_t b) const;
  int64_t ff_inv(int64_t a) const;
  // Code of the class of x (the adjoined generator).
  int64_t ff_generator() const;
  // Primitive element g of F_q^* and its discrete-log tables.
  int64_t ff_primitive() const { return exp_.empty() ? 0 : exp_[1 % exp_.size()]; }
  int64_t ff_exp(int64_t k) const;
  int64_t ff_log(int64_t a) const;

  Ring(const Ring&) = delete;
  Ring& operator=(const Ring&) = delete;

 private:
  Ring(RingKind kind, int64_t modulus, int degree);
  void build_extension_tables();

  RingKind kind_;
  int64_t modulus_ = 0;
  int degree_ = 1;
  int64_t order_ = 0;
  std::vector<int64_t> def_poly_;
  std::vector<int64_t> exp_;
  std::vector<int64_t> log_;
};

bool is_prime(int64_t n);

// An element of one of the supported rings. Values are immutable in spirit:
// all arithmetic returns new values, and mixing rings throws.
class Scalar {
 public:
  // Integer zero; mostly for container default construction.
  Scalar();
  Scalar(const Ring* ring, long v);
  Scalar(const Ring* ring, const mpz_class& v);
  // Rational ring only (or a finite field, where the denominator is inverted).
  Scalar(const Ring* ring, const mpq_class& v);

  static Scalar zero(const Ring* ring) { return Scalar(ring, 0L); }
  static Scalar one(const Ring* ring) { return Scalar(ring, 1L); }
  // Raw finite-ring element from its code (residue or digit encoding).
  static Scalar from_code(const Ring* ring, int64_t code);

  const Ring* ring() const { return ring_; }
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar inv() const;
  Scalar pow(int64_t e) const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // Total order within one ring (used for deterministic sorting only).
  bool less(const Scalar& o) const;

  // Accessors; throw if the payload kind does not match.
  const mpz_class& integer() const;
  mpq_class rational() const;
  int64_t code() const;

  // Decimal string: "17", "-3/4", residues as their representative in [0, N),
  // extension field elements as their digit code.
  std::string to_string() const;

 private:
  void check_same(const Scalar& o) const;
  const Ring* ring_;
  std::variant<int64_t, mpz_class, mpq_class> v_;
};

// Image of x in `target` along the canonical map (Z -> anything, Q -> F_p when
// the denominator is prime to p, F_p -> F_{p^r}, identity).
Scalar convert(const Scalar& x, const Ring* target);

// Parse the textual ring names used in records: "Z", "Q", "Z/6", "F5", "F25".
const Ring* parse_ring(const std::string& name);
// Inverse of Scalar::to_string (rationals may also be written "a/b").
Scalar parse_scalar(const Ring* ring, const std::string& text);

}  // namespace hecke::exact
