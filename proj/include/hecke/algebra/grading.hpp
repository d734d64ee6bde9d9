#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hecke/algebra/hecke.hpp"
#include "hecke/exact/matrix.hpp"

namespace hecke::algebra {

using exact::Ring;
using exact::Scalar;

// Synthetic finite abelian group C = prod Z/n_i with a class attached to
// every prime; grade(delta) is the class of (det delta).
class SyntheticClassGroup {
 public:
  using Element = std::vector<int64_t>;
  SyntheticClassGroup() = default;  // trivial group
  explicit SyntheticClassGroup(std::vector<int64_t> moduli);
  // Primes without an assigned class grade to the identity.
  void set_prime_class(int64_t p, Element c);

  const std::vector<int64_t>& moduli() const { return moduli_; }
  Element identity() const { return Element(moduli_.size(), 0); }
  Element add(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element normalize(Element a) const;
  size_t order() const;
  std::vector<Element> elements() const;
  int64_t element_order(const Element& a) const;

  Element grade_of_det(int64_t d) const;
  Element grade(const GMat& delta) const { return grade_of_det(delta.det()); }
  // Common grade of all terms; throws if the sum is not homogeneous.
  Element grade(const DoubleCosetSum& t) const;

 private:
  std::vector<int64_t> moduli_;
  std::map<int64_t, Element> prime_class_;
};

// Character of a subgroup of C with values in a field, stored on every element
// of its domain.
struct ClassCharacter {
  const Ring* ring = nullptr;
  std::map<SyntheticClassGroup::Element, Scalar> values;

  static ClassCharacter trivial(const SyntheticClassGroup& C, const Ring* ring);
  // Values on the standard generators e_i (each must satisfy v^{n_i} = 1).
  static ClassCharacter from_generators(const SyntheticClassGroup& C, const Ring* ring, const std::vector<Scalar>& gens);
  bool defined(const SyntheticClassGroup::Element& c) const { return values.count(c) > 0; }
  Scalar operator()(const SyntheticClassGroup::Element& c) const;
  ClassCharacter operator*(const ClassCharacter& o) const;
  // Agreement on the common domain.
  bool agrees_with(const ClassCharacter& o) const;
};

// Operator label: T_p^(m) for m >= 1, T_a when m == 0 (p holds a).
struct OpLabel {
  int64_t p;
  int m = 1;
  int64_t det() const;
  std::string to_string() const;
  bool operator<(const OpLabel& o) const { return p != o.p ? p < o.p : m < o.m; }
  bool operator==(const OpLabel& o) const { return p == o.p && m == o.m; }
  static OpLabel parse(const std::string& s);
};

struct EigenSystem {
  const Ring* ring = nullptr;
  std::map<OpLabel, Scalar> values;
  std::string to_string() const;
  bool operator==(const EigenSystem& o) const { return ring == o.ring && values == o.values; }
};

// Phi(T_a) = Phi(T_b) Phi(T_c) for recorded coprime b c = a (m = 1 and T_a labels).
bool check_multiplicative(const EigenSystem& phi);

EigenSystem twist_eigensystem(const SyntheticClassGroup& C, const ClassCharacter& chi, const EigenSystem& phi);
// chi with phi = chi (x) psi, on the subgroup generated by classes carrying a
// nonzero value of psi.
ClassCharacter extract_twist(const SyntheticClassGroup& C, const EigenSystem& phi, const EigenSystem& psi);

// Block model of the graded cohomology: one copy of W per class, an operator
// of grade g sends component c to c + g through the same matrix M.
exact::Matrix graded_operator(const SyntheticClassGroup& C, const SyntheticClassGroup::Element& g, const exact::Matrix& m);
// f^chi = sum_c chi(c)^{-1} f_c with f_c = v in every component.
exact::Vector twisted_eigenform(const SyntheticClassGroup& C, const ClassCharacter& chi, const exact::Vector& v);

// Gamma-level image of T in the graded component c (F = Q: relabelling plus the
// grade check; the decomposition is recomputed at the target group).
DoubleCosetSum restrict_to_gamma(const DoubleCosetSum& t, const SyntheticClassGroup& C,
                                 const SyntheticClassGroup::Element& c, const GroupDescriptor& target);

}  // namespace hecke::algebra
