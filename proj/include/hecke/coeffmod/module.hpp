#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hecke/exact/matrix.hpp"
#include "hecke/modgroup/group.hpp"
#include "json.hpp"

namespace hecke::coeffmod {

using exact::Matrix;
using exact::Ring;
using exact::Scalar;
using exact::Vector;
using modgroup::GMat;
using modgroup::GroupDescriptor;

// Element (sign, g mod N) of {+-1} x GL_2(Z/N).
struct SignedElt {
  int sign = 1;
  GMat g;
  bool operator==(const SignedElt& o) const { return sign == o.sign && g == o.g; }
};

// Finite subgroup of {+-1} x GL_2(Z/N), enumerated by BFS from its generators.
class FiniteGroup {
 public:
  FiniteGroup(int64_t N, std::vector<SignedElt> generators);
  // {+-1} x H under GL, {+1} x H under SL.
  static std::shared_ptr<const FiniteGroup> of_descriptor(const GroupDescriptor& d);

  int64_t level() const { return N_; }
  size_t order() const { return elements_.size(); }
  const std::vector<SignedElt>& generators() const { return gens_; }
  const std::vector<SignedElt>& elements() const { return elements_; }
  std::optional<size_t> index_of(const SignedElt& x) const;
  SignedElt multiply(const SignedElt& x, const SignedElt& y) const;
  SignedElt identity() const;
  SignedElt inverse(const SignedElt& x) const;
  // elements()[i] = elements()[parent(i)] * generators()[parent_gen(i)]; root 0.
  size_t parent(size_t i) const { return parent_[i]; }
  size_t parent_gen(size_t i) const { return parent_gen_[i]; }
  SignedElt image(const GMat& delta) const;  // (sign det, delta mod N)
  bool is_subgroup_of(const FiniteGroup& o) const;
  bool is_normal_in(const FiniteGroup& o) const;

 private:
  int64_t key(const SignedElt& x) const;
  int64_t N_;
  std::vector<SignedElt> gens_, elements_;
  std::vector<size_t> parent_, parent_gen_;
  std::unordered_map<int64_t, size_t> index_;
};

// A precomputed linear map on row vectors.
class LinearOp {
 public:
  virtual ~LinearOp() = default;
  virtual Vector apply(const Vector& v) const = 0;
};
using LinearOpPtr = std::shared_ptr<const LinearOp>;

class DenseOp : public LinearOp {
 public:
  explicit DenseOp(Matrix m) : m_(std::move(m)) {}
  Vector apply(const Vector& v) const override { return exact::vec_mat(v, m_); }

 private:
  Matrix m_;
};

// Right module: v -> v * action(delta) on row vectors.
class Module {
 public:
  virtual ~Module() = default;
  virtual const Ring* ring() const = 0;
  virtual size_t dim() const = 0;
  virtual bool admissible() const { return false; }
  virtual Matrix action(const GMat& delta) const = 0;
  virtual Vector apply(const Vector& v, const GMat& delta) const { return exact::vec_mat(v, action(delta)); }
  // For repeated application of one element.
  virtual LinearOpPtr op(const GMat& delta) const { return std::make_shared<DenseOp>(action(delta)); }
  virtual std::string describe() const = 0;
  virtual nlohmann::json to_json() const = 0;
};
using ModulePtr = std::shared_ptr<const Module>;

// Sym^k(F^2) (x) det^e on X^k, X^{k-1} Y, ..., Y^k; (P . delta)(X, Y) = P(aX + bY, cX + dY) det^e.
class SymModule : public Module {
 public:
  SymModule(const Ring* F, int k, int e = 0);
  const Ring* ring() const override { return F_; }
  size_t dim() const override { return static_cast<size_t>(k_ + 1); }
  Matrix action(const GMat& delta) const override;
  std::string describe() const override;
  nlohmann::json to_json() const override;
  int k() const { return k_; }
  int e() const { return e_; }

 private:
  const Ring* F_;
  int k_, e_;
};

// A representation of a finite group G <= {+-1} x GL_2(Z/N), applied to delta
// through (sign det delta, delta mod N). Images of all elements are cached and
// the homomorphism property is checked on every (element, generator) pair.
class AdmissibleModule : public Module {
 public:
  AdmissibleModule(const Ring* F, std::shared_ptr<const FiniteGroup> G, size_t dim, std::vector<Matrix> generator_images,
                   std::string label = "admissible");
  const Ring* ring() const override { return F_; }
  size_t dim() const override { return dim_; }
  bool admissible() const override { return true; }
  Matrix action(const GMat& delta) const override;
  std::string describe() const override { return label_; }
  nlohmann::json to_json() const override;

  const std::shared_ptr<const FiniteGroup>& group() const { return G_; }
  const std::vector<Matrix>& generator_images() const { return gen_images_; }
  const Matrix& image(size_t element) const { return images_[element]; }
  Matrix image_of(const SignedElt& x) const;
  std::shared_ptr<AdmissibleModule> restricted(std::shared_ptr<const FiniteGroup> sub) const;
  std::shared_ptr<AdmissibleModule> converted(const Ring* target) const;

 private:
  const Ring* F_;
  std::shared_ptr<const FiniteGroup> G_;
  std::vector<Matrix> gen_images_;
  std::vector<Matrix> images_;
  size_t dim_;
  std::string label_;
};

// chi: {+-1} x (Z/N)^* -> F^*, stored on every unit.
class Character {
 public:
  // Values on -1 and on the listed units; the closure must be consistent.
  Character(int64_t N, const Ring* F, Scalar sign_value, const std::vector<int64_t>& units, const std::vector<Scalar>& values);
  static Character trivial(int64_t N, const Ring* F);
  // chi(g_i) = zeta^{exps_i}, chi(-1) = zeta^{sign_exp}, zeta a primitive m-th
  // root of unity in the smallest F_{ell^r} containing one (ell = 0: Q, m <= 2).
  static Character from_exponents(int64_t N, int64_t ell, int64_t m, int64_t sign_exp,
                                  const std::vector<int64_t>& units, const std::vector<int64_t>& exps);

  int64_t level() const { return N_; }
  const Ring* ring() const { return F_; }
  Scalar operator()(int sign, int64_t unit) const;
  Scalar on(const SignedElt& x) const;  // chi(sign, det x)
  Scalar sign_value() const { return sign_value_; }
  Character operator*(const Character& o) const;
  Character inverse() const;
  Character converted(const Ring* target) const;
  bool operator==(const Character& o) const;
  nlohmann::json to_json() const;
  static Character from_json(const nlohmann::json& j);

 private:
  Character() = default;
  int64_t N_ = 1;
  const Ring* F_ = nullptr;
  Scalar sign_value_;
  std::vector<int64_t> units_;  // generators as given
  std::unordered_map<int64_t, Scalar> values_;
};

// Greedy generating set of (Z/N)^*, increasing.
std::vector<int64_t> unit_group_generators(int64_t N);
int64_t multiplicative_order(int64_t u, int64_t N);
const Ring* field_with_roots_of_unity(int64_t ell, int64_t m);
Scalar primitive_root_of_unity(const Ring* F, int64_t m);

std::shared_ptr<AdmissibleModule> character_module(const Character& chi, std::shared_ptr<const FiniteGroup> G);
// M(chi): same space, action multiplied by chi(sign, det). Prime-field modules
// are extended to chi's field when needed.
std::shared_ptr<AdmissibleModule> twist_module(const Module& M, const Character& chi);
// F[G] with e_x . g = e_{xg}.
std::shared_ptr<AdmissibleModule> regular_module(const Ring* F, std::shared_ptr<const FiniteGroup> G);
// Permutation module on the row vectors of (Z/N)^2, v . g = v g; signs act trivially.
std::shared_ptr<AdmissibleModule> vector_permutation_module(const Ring* F, std::shared_ptr<const FiniteGroup> G);

// {kind: "sym", k, e, field} | {kind: "admissible", group, rep, sign_matrix, field}
// | {kind: "character", N, field, sign, units, values, group?}
ModulePtr module_from_json(const nlohmann::json& j);

// Checks v.(d1 d2) = (v.d1).d2 on the given elements.
bool action_law_holds(const Module& M, const std::vector<GMat>& elements);

}  // namespace hecke::coeffmod
