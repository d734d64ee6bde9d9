#include "hecke/coeffmod/induced.hpp"

#include "hecke/algebra/hecke.hpp"
#include "hecke/error.hpp"

namespace hecke::coeffmod {

InducedModule::InducedModule(GroupDescriptor inner, GroupDescriptor outer, ModulePtr V)
    : inner_(std::move(inner)), outer_(std::move(outer)), V_(std::move(V)) {
  if (inner_.sign_policy() != outer_.sign_policy()) throw ValidationError("inner and outer groups use different sign policies");
  if (!algebra::check_compatible(inner_, outer_)) throw MathError("pairs are not compatible");
  const auto& table = modgroup::presented_group(inner_).cosets();
  pos_of_coset_.assign(table.index(), -1);
  for (size_t c = 0; c < table.index(); ++c)
    if (outer_.contains(table.reps()[c])) {
      pos_of_coset_[c] = static_cast<long>(reps_.size());
      reps_.push_back(table.reps()[c]);
    }
  if (reps_.empty() || reps_[0] != GMat::identity()) throw InternalError("identity coset missing");
}

size_t InducedModule::coset_of(const GMat& g) const {
  const long p = pos_of_coset_[modgroup::presented_group(inner_).cosets().lookup(g)];
  if (p < 0) throw MathError("element outside the outer group");
  return static_cast<size_t>(p);
}

InducedModule::Blocks InducedModule::blocks(const GMat& delta) const {
  const size_t n = reps_.size();
  Blocks b;
  b.src.resize(n);
  b.mats.resize(n);
  if (delta.is_unit()) {
    if (!outer_.contains(delta)) throw MathError("element outside the outer group");
    const GMat di = delta.inverse();
    for (size_t i = 0; i < n; ++i) {
      const size_t k = coset_of(reps_[i] * di);
      b.src[i] = k;
      b.mats[i] = V_->action(reps_[k] * delta * reps_[i].inverse());
    }
    return b;
  }
  if (!outer_.in_semigroup(delta)) throw MathError("element outside the outer semigroup");
  const int64_t det = delta.det();
  if (modgroup::gcd64(det < 0 ? -det : det, inner_.level()) != 1) throw MathError("determinant not prime to level");
  for (size_t i = 0; i < n; ++i) {
    const GMat gi = reps_[i].inverse();
    size_t found = n, count = 0;
    for (size_t k = 0; k < n; ++k)
      if (inner_.in_semigroup(reps_[k] * delta * gi)) {
        if (found == n) found = k;
        ++count;
      }
    if (count != 1) throw InternalError("induced action: " + std::to_string(count) + " solutions for coset " + std::to_string(i));
    b.src[i] = found;
    b.mats[i] = V_->action(reps_[found] * delta * gi);
  }
  return b;
}

Matrix InducedModule::action(const GMat& delta) const {
  const Blocks b = blocks(delta);
  const size_t d = V_->dim();
  Matrix m(ring(), dim(), dim());
  for (size_t i = 0; i < b.src.size(); ++i)
    for (size_t r = 0; r < d; ++r)
      for (size_t c = 0; c < d; ++c) m(b.src[i] * d + r, i * d + c) = b.mats[i](r, c);
  return m;
}

namespace {

class BlockOp : public LinearOp {
 public:
  BlockOp(InducedModule::Blocks b, size_t d) : b_(std::move(b)), d_(d) {}
  Vector apply(const Vector& v) const override {
    if (v.size() != b_.src.size() * d_) throw ValidationError("vector has the wrong length");
    Vector out;
    out.reserve(v.size());
    for (size_t i = 0; i < b_.src.size(); ++i) {
      const auto first = v.begin() + static_cast<long>(b_.src[i] * d_);
      const Vector w = exact::vec_mat(Vector(first, first + static_cast<long>(d_)), b_.mats[i]);
      out.insert(out.end(), w.begin(), w.end());
    }
    return out;
  }

 private:
  InducedModule::Blocks b_;
  size_t d_;
};

}  // namespace

LinearOpPtr InducedModule::op(const GMat& delta) const { return std::make_shared<BlockOp>(blocks(delta), V_->dim()); }

Vector InducedModule::apply(const Vector& v, const GMat& delta) const { return op(delta)->apply(v); }

Vector InducedModule::block(const Vector& f, size_t i) const {
  const size_t d = V_->dim();
  return Vector(f.begin() + static_cast<long>(i * d), f.begin() + static_cast<long>((i + 1) * d));
}

Vector InducedModule::evaluate(const Vector& f, const GMat& g) const {
  const size_t i = coset_of(g);
  const GMat gamma = g * reps_[i].inverse();
  return V_->apply(block(f, i), gamma.inverse());
}

std::string InducedModule::describe() const {
  return "Ind(" + inner_.name() + ", " + outer_.name() + ", " + V_->describe() + ")";
}

nlohmann::json InducedModule::to_json() const {
  return {{"kind", "induced"}, {"inner", inner_.to_json()}, {"outer", outer_.to_json()}, {"base", V_->to_json()}};
}

}  // namespace hecke::coeffmod
