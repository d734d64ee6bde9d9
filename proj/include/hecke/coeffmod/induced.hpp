#pragma once

#include <vector>

#include "hecke/coeffmod/module.hpp"

namespace hecke::coeffmod {

// Ind(Gamma, Gamma', V): functions f on Gamma' with f(g h) = f(h) g^{-1} for
// g in Gamma, stored by their values at the coset representatives g_i of
// Gamma \ Gamma' (g_0 = 1). Blocks of the coordinate vector are f(g_i).
//
// delta' in Delta' acts by (f delta')(g_i) = f(g_k) (g_k delta' g_i^{-1}),
// where k is the unique coset with g_k delta' g_i^{-1} in Delta.
class InducedModule : public Module {
 public:
  InducedModule(GroupDescriptor inner, GroupDescriptor outer, ModulePtr V);

  const Ring* ring() const override { return V_->ring(); }
  size_t dim() const override { return reps_.size() * V_->dim(); }
  bool admissible() const override { return V_->admissible(); }
  Matrix action(const GMat& delta) const override;
  Vector apply(const Vector& v, const GMat& delta) const override;
  LinearOpPtr op(const GMat& delta) const override;
  std::string describe() const override;
  nlohmann::json to_json() const override;

  const GroupDescriptor& inner() const { return inner_; }
  const GroupDescriptor& outer() const { return outer_; }
  const ModulePtr& base() const { return V_; }
  size_t index() const { return reps_.size(); }
  const std::vector<GMat>& reps() const { return reps_; }
  // i with Gamma g = Gamma g_i, for g in Gamma'.
  size_t coset_of(const GMat& g) const;

  // Block data of delta': result block i = (block src[i]) * mats[i].
  struct Blocks {
    std::vector<size_t> src;
    std::vector<Matrix> mats;
  };
  Blocks blocks(const GMat& delta) const;

  // f(g) for g in Gamma'.
  Vector evaluate(const Vector& f, const GMat& g) const;
  // Block i of f.
  Vector block(const Vector& f, size_t i) const;

 private:
  GroupDescriptor inner_, outer_;
  ModulePtr V_;
  std::vector<GMat> reps_;
  std::vector<long> pos_of_coset_;  // ambient coset -> position in reps_, or -1
};

}  // namespace hecke::coeffmod
