#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hecke/algebra/grading.hpp"
#include "hecke/cohom/cohom.hpp"
#include "hecke/exact/poly.hpp"
#include "json.hpp"

namespace hecke::eigen {

using algebra::EigenSystem;
using algebra::OpLabel;
using cohom::CohomSpace;
using cohom::HeckeMatrix;
using exact::Matrix;
using exact::Poly;
using exact::Ring;
using exact::Scalar;
using modgroup::GroupDescriptor;

// Canonical embedding F_{p^a} -> F_{p^b} for a | b: the generator goes to the
// root of its defining polynomial with the smallest code. Prime fields use
// the reduction map.
Scalar embed(const Scalar& x, const Ring* target);
// Smallest F_{p^c} containing both (nullptr if the table would be too large).
const Ring* common_field(const Ring* a, const Ring* b);

struct SystemEntry {
  EigenSystem system;               // known values (all labels when split)
  std::map<OpLabel, Poly> factors;  // irreducible factor over the base field
  size_t dim = 0;                   // dimension of the generalized space over system.ring
  size_t multiplicity = 0;          // dim / degree()
  bool split = true;
  int degree() const;
  nlohmann::json to_json() const;
};

struct EigenReport {
  const Ring* base = nullptr;
  std::vector<OpLabel> labels;
  size_t space_dim = 0;
  std::vector<SystemEntry> systems;
  // sum of dim over reported systems, with Galois conjugates counted through
  // the degree of the extension used
  bool consistent() const;
  nlohmann::json to_json() const;
};

// Simultaneous generalized eigenspaces of commuting operators (row convention).
// MathError if two operators do not commute.
EigenReport eigensystems(const Ring* F, size_t dim, const std::vector<OpLabel>& labels, const std::vector<Matrix>& ops);
EigenReport eigensystems(const CohomSpace& space, const std::vector<HeckeMatrix>& ops);
EigenReport eigensystems(const CohomSpace& space, const std::vector<OpLabel>& labels);

// phi agrees with the entry on every label of phi, up to a field embedding.
bool matches(const EigenSystem& phi, const SystemEntry& entry);
bool occurs_in(const EigenSystem& phi, const EigenReport& report);
bool occurs_in(const EigenSystem& phi, const CohomSpace& space, const std::vector<HeckeMatrix>& ops);

// {2, 3, 7} without the primes dividing the level.
std::vector<OpLabel> default_labels(int64_t level);

nlohmann::json system_to_json(const EigenSystem& phi);
EigenSystem system_from_json(const nlohmann::json& j);

// --- reduction to one-dimensional coefficients ---------------------------

// Diagonal: target Gamma_diag(N), characters mod M = N.
// Upper: target Gamma1_upper(N L), characters mod M = L.
enum class TargetKind { Diagonal, Upper };
std::string to_string(TargetKind k);

struct ReductionSource {
  GroupDescriptor group = GroupDescriptor::full();
  coeffmod::ModulePtr module;
  int degree = 1;
  nlohmann::json to_json() const;
};

struct ReductionTarget {
  TargetKind kind = TargetKind::Upper;
  int64_t level = 1;    // N
  int64_t modulus = 1;  // M (L for Upper, N for Diagonal)
  modgroup::SignPolicy sign = modgroup::SignPolicy::SL;
  GroupDescriptor group() const;
  nlohmann::json to_json() const;
};

// All characters of {+-1} x (Z/M)^* with values in the smallest F_{ell^r}
// holding the needed roots of unity (ell = 0: the rational ones), ordered by
// their value tuples (sign first, then the unit generators).
std::vector<coeffmod::Character> dirichlet_characters(int64_t M, int64_t ell);
std::vector<std::string> character_key(const coeffmod::Character& chi);

struct Candidate {
  int j = 0;
  coeffmod::Character chi = coeffmod::Character::trivial(1, Ring::rationals());
  EigenReport report;
};

struct ReductionWitness {
  EigenSystem phi;
  nlohmann::json source;
  std::vector<OpLabel> labels;
  ReductionTarget target;
  int j = 0;
  coeffmod::Character chi = coeffmod::Character::trivial(1, Ring::rationals());
  SystemEntry matched;
  bool verified = false;
  nlohmann::json transcript;  // per label: phi value, witness value, field
  nlohmann::json to_json() const;
};

// The (j, chi) candidates are computed once; find() can then be called for
// many systems. Candidates are computed on up to `jobs` threads; the result
// does not depend on the thread count.
class ReductionSearch {
 public:
  ReductionSearch(ReductionTarget target, int max_degree, int64_t ell, std::vector<OpLabel> labels, int jobs = 1);
  const std::vector<Candidate>& candidates() const { return candidates_; }
  const std::vector<OpLabel>& labels() const { return labels_; }
  const ReductionTarget& target() const { return target_; }
  // Indices of all matching candidates, in enumeration order.
  std::vector<size_t> matching(const EigenSystem& phi) const;
  // First witness; MathError("no witness found") if there is none.
  ReductionWitness find(const EigenSystem& phi, const nlohmann::json& source) const;

 private:
  ReductionTarget target_;
  int max_degree_;
  int64_t ell_;
  std::vector<OpLabel> labels_;
  std::vector<Candidate> candidates_;
};

ReductionWitness reduce_to_one_dim(const EigenSystem& phi, const ReductionSource& source, const ReductionTarget& target,
                                   std::optional<int64_t> ell, const std::vector<OpLabel>& labels, int jobs = 1);

// Rebuilds the target space from a certificate and re-checks the match.
bool verify_certificate(const nlohmann::json& cert);

}  // namespace hecke::eigen
