#include "hecke/coeffmod/module.hpp"

#include <deque>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke::coeffmod {

using modgroup::gcd64;
using modgroup::mod_pos;
using nlohmann::json;

namespace {

bool prime_field(const Ring* F) {
  return F->is_finite() && F->degree() == 1 && exact::is_prime(F->modulus());
}

json matrix_json(const Matrix& m) { return m.to_strings(); }

Matrix matrix_from_json(const Ring* F, const json& j, size_t dim) {
  if (!j.is_array() || j.size() != dim) throw ValidationError("matrix has the wrong number of rows");
  Matrix m(F, dim, dim);
  for (size_t r = 0; r < dim; ++r) {
    if (!j[r].is_array() || j[r].size() != dim) throw ValidationError("matrix has the wrong number of columns");
    for (size_t c = 0; c < dim; ++c) {
      const json& x = j[r][c];
      if (x.is_number_integer()) m(r, c) = Scalar(F, static_cast<long>(x.get<int64_t>()));
      else if (x.is_string()) m(r, c) = exact::parse_scalar(F, x.get<std::string>());
      else throw ValidationError("matrix entries must be integers or strings");
    }
  }
  return m;
}

Scalar scalar_from_json(const Ring* F, const json& x) {
  if (x.is_number_integer()) return Scalar(F, static_cast<long>(x.get<int64_t>()));
  if (x.is_string()) return exact::parse_scalar(F, x.get<std::string>());
  throw ValidationError("scalar must be an integer or a string");
}

const Ring* field_of(const json& j) {
  return exact::parse_ring(j.value("field", std::string("Q")));
}

}  // namespace

// --- FiniteGroup -----------------------------------------------------------

FiniteGroup::FiniteGroup(int64_t N, std::vector<SignedElt> generators) : N_(N) {
  if (N < 1 || N > 60) throw ValidationError("level must be in 1..60");
  for (auto& g : generators) {
    if (g.sign != 1 && g.sign != -1) throw ValidationError("sign must be +1 or -1");
    g.g = g.g.reduced(N);
    if (gcd64(mod_pos(g.g.det(), N), N) != 1) throw ValidationError("generator is not invertible mod N");
  }
  gens_ = std::move(generators);
  elements_.push_back(identity());
  parent_.push_back(0);
  parent_gen_.push_back(0);
  index_[key(elements_[0])] = 0;
  for (size_t i = 0; i < elements_.size(); ++i)
    for (size_t s = 0; s < gens_.size(); ++s) {
      SignedElt y = multiply(elements_[i], gens_[s]);
      const int64_t k = key(y);
      if (index_.count(k)) continue;
      if (elements_.size() >= 2000000) throw ValidationError("finite group too large");
      index_[k] = elements_.size();
      elements_.push_back(y);
      parent_.push_back(i);
      parent_gen_.push_back(s);
    }
}

std::shared_ptr<const FiniteGroup> FiniteGroup::of_descriptor(const GroupDescriptor& d) {
  std::vector<SignedElt> gens;
  for (const auto& h : d.h_generators()) gens.push_back({1, h});
  if (d.sign_policy() == modgroup::SignPolicy::GL) gens.push_back({-1, GMat::identity()});
  return std::make_shared<FiniteGroup>(d.level(), gens);
}

int64_t FiniteGroup::key(const SignedElt& x) const {
  const GMat r = x.g.reduced(N_);
  const int64_t code = ((r.a() * N_ + r.b()) * N_ + r.c()) * N_ + r.d();
  return (x.sign < 0 ? N_ * N_ * N_ * N_ : 0) + code;
}

std::optional<size_t> FiniteGroup::index_of(const SignedElt& x) const {
  auto it = index_.find(key(x));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SignedElt FiniteGroup::multiply(const SignedElt& x, const SignedElt& y) const {
  return {x.sign * y.sign, (x.g * y.g).reduced(N_)};
}

SignedElt FiniteGroup::identity() const { return {1, GMat::identity().reduced(N_)}; }

SignedElt FiniteGroup::inverse(const SignedElt& x) const {
  SignedElt y = x, prev = identity();
  const SignedElt e = identity();
  while (!(y == e)) {
    prev = y;
    y = multiply(y, x);
  }
  return prev;
}

SignedElt FiniteGroup::image(const GMat& delta) const { return {delta.sign(), delta.reduced(N_)}; }

bool FiniteGroup::is_subgroup_of(const FiniteGroup& o) const {
  if (N_ != o.N_) return false;
  for (const auto& g : gens_)
    if (!o.index_of(g)) return false;
  return true;
}

bool FiniteGroup::is_normal_in(const FiniteGroup& o) const {
  if (!is_subgroup_of(o)) return false;
  for (const auto& g : o.gens_) {
    const SignedElt gi = o.inverse(g);
    for (const auto& h : gens_)
      if (!index_of(multiply(multiply(gi, h), g))) return false;
  }
  return true;
}

// --- Sym -------------------------------------------------------------------

SymModule::SymModule(const Ring* F, int k, int e) : F_(F), k_(k), e_(e) {
  if (!F->is_field()) throw ValidationError("coefficient modules need a field");
  if (k < 0 || k > 200) throw ValidationError("Sym weight must be in 0..200");
}

Matrix SymModule::action(const GMat& delta) const {
  if (delta.n() != 2) throw ValidationError("Sym acts through 2x2 matrices");
  const int64_t det = delta.det();
  if (det == 0) throw MathError("singular");
  const size_t n = dim();
  // powers of the linear forms aX + bY and cX + dY, coefficients on X^{deg-j} Y^j
  auto powers = [&](int64_t x, int64_t y) {
    std::vector<std::vector<mpz_class>> p{{mpz_class(1)}};
    for (int t = 1; t <= k_; ++t) {
      const auto& q = p.back();
      std::vector<mpz_class> r(q.size() + 1, mpz_class(0));
      for (size_t j = 0; j < q.size(); ++j) {
        r[j] += q[j] * x;
        r[j + 1] += q[j] * y;
      }
      p.push_back(std::move(r));
    }
    return p;
  };
  // integer expansion, then one reduction into F (same as reducing the entries first)
  auto red = [&](int64_t v) { return Scalar(F_, mpz_class(static_cast<long>(v))); };
  auto P = powers(delta.a(), delta.b());
  auto Q = powers(delta.c(), delta.d());
  Matrix m(F_, n, n);
  for (size_t i = 0; i < n; ++i) {
    // X^{k-i} Y^i -> (aX+bY)^{k-i} (cX+dY)^i
    const auto& u = P[static_cast<size_t>(k_) - i];
    const auto& v = Q[i];
    std::vector<mpz_class> w(n, mpz_class(0));
    for (size_t s = 0; s < u.size(); ++s)
      for (size_t t = 0; t < v.size(); ++t) w[s + t] += u[s] * v[t];
    for (size_t j = 0; j < n; ++j) m(i, j) = Scalar(F_, w[j]);
  }
  if (e_ != 0) {
    Scalar f = red(det);
    if (f.is_zero()) throw MathError("determinant is not invertible in the coefficient field");
    m = m.scaled(f.pow(e_));
  }
  return m;
}

std::string SymModule::describe() const {
  std::string s = "Sym^" + std::to_string(k_) + "(" + F_->name() + "^2)";
  if (e_ != 0) s += " x det^" + std::to_string(e_);
  return s;
}

json SymModule::to_json() const { return {{"kind", "sym"}, {"k", k_}, {"e", e_}, {"field", F_->name()}}; }

// --- admissible ------------------------------------------------------------

AdmissibleModule::AdmissibleModule(const Ring* F, std::shared_ptr<const FiniteGroup> G, size_t dim,
                                   std::vector<Matrix> generator_images, std::string label)
    : F_(F), G_(std::move(G)), gen_images_(std::move(generator_images)), dim_(dim), label_(std::move(label)) {
  if (!F->is_field()) throw ValidationError("coefficient modules need a field");
  if (gen_images_.size() != G_->generators().size()) throw ValidationError("one matrix per group generator is required");
  for (const auto& m : gen_images_)
    if (m.rows() != dim_ || m.cols() != dim_ || (dim_ > 0 && m.ring() != F_))
      throw ValidationError("generator image has the wrong shape or ring");
  if (static_cast<double>(G_->order()) * static_cast<double>(dim_ * dim_) > 2e7)
    throw ValidationError("admissible module too large");
  images_.reserve(G_->order());
  images_.push_back(Matrix::identity(F_, dim_));
  for (size_t i = 1; i < G_->order(); ++i) images_.push_back(images_[G_->parent(i)] * gen_images_[G_->parent_gen(i)]);
  // homomorphism check on every (element, generator) pair
  for (size_t i = 0; i < G_->order(); ++i)
    for (size_t s = 0; s < gen_images_.size(); ++s) {
      const size_t j = *G_->index_of(G_->multiply(G_->elements()[i], G_->generators()[s]));
      if (images_[i] * gen_images_[s] != images_[j]) throw ValidationError("generator images do not define a representation");
    }
}

Matrix AdmissibleModule::image_of(const SignedElt& x) const {
  auto i = G_->index_of(x);
  if (!i) throw MathError("element outside the acting group");
  return images_[*i];
}

Matrix AdmissibleModule::action(const GMat& delta) const {
  const int64_t det = delta.det();
  if (det == 0) throw MathError("singular");
  if (gcd64(det < 0 ? -det : det, G_->level()) != 1) throw MathError("determinant not prime to level");
  return image_of(G_->image(delta));
}

json AdmissibleModule::to_json() const {
  json gens = json::array(), rep = json::array();
  for (size_t s = 0; s < gen_images_.size(); ++s) {
    gens.push_back({{"sign", G_->generators()[s].sign}, {"matrix", G_->generators()[s].g.rows()}});
    rep.push_back(matrix_json(gen_images_[s]));
  }
  return {{"kind", "admissible"}, {"N", G_->level()}, {"field", F_->name()}, {"dim", dim_},
          {"generators", gens}, {"rep", rep}, {"label", label_}};
}

std::shared_ptr<AdmissibleModule> AdmissibleModule::restricted(std::shared_ptr<const FiniteGroup> sub) const {
  if (!sub->is_subgroup_of(*G_)) throw ValidationError("restriction to a non-subgroup");
  std::vector<Matrix> gens;
  for (const auto& h : sub->generators()) gens.push_back(image_of(h));
  return std::make_shared<AdmissibleModule>(F_, std::move(sub), dim_, std::move(gens), label_ + " restricted");
}

std::shared_ptr<AdmissibleModule> AdmissibleModule::converted(const Ring* target) const {
  std::vector<Matrix> gens;
  for (const auto& m : gen_images_) gens.push_back(m.converted(target));
  return std::make_shared<AdmissibleModule>(target, G_, dim_, std::move(gens), label_);
}

// --- characters ------------------------------------------------------------

int64_t multiplicative_order(int64_t u, int64_t N) {
  if (N == 1) return 1;
  u = mod_pos(u, N);
  if (gcd64(u, N) != 1) throw ValidationError("not a unit");
  int64_t k = 1;
  for (int64_t x = u; x != 1; x = x * u % N) ++k;
  return k;
}

std::vector<int64_t> unit_group_generators(int64_t N) {
  std::vector<int64_t> gens;
  if (N <= 2) return gens;
  std::vector<bool> in(static_cast<size_t>(N), false);
  in[1] = true;
  std::vector<int64_t> sub{1};
  for (int64_t u : modgroup::units_mod(N)) {
    if (in[static_cast<size_t>(u)]) continue;
    gens.push_back(u);
    // close the subgroup under multiplication by u
    for (size_t i = 0; i < sub.size(); ++i) {
      int64_t x = sub[i] * u % N;
      while (!in[static_cast<size_t>(x)]) {
        in[static_cast<size_t>(x)] = true;
        sub.push_back(x);
        x = x * u % N;
      }
    }
    for (size_t i = 0; i < sub.size(); ++i)
      for (int64_t g : gens) {
        const int64_t x = sub[i] * g % N;
        if (!in[static_cast<size_t>(x)]) {
          in[static_cast<size_t>(x)] = true;
          sub.push_back(x);
        }
      }
  }
  return gens;
}

const Ring* field_with_roots_of_unity(int64_t ell, int64_t m) {
  if (m < 1) throw ValidationError("root of unity order must be positive");
  if (ell == 0) {
    if (m > 2) throw ValidationError("Q only contains the roots of unity +-1");
    return Ring::rationals();
  }
  if (!exact::is_prime(ell)) throw ValidationError("characteristic must be prime");
  if (m % ell == 0) throw ValidationError("no primitive roots of unity of order divisible by the characteristic");
  int r = 1;
  int64_t q = ell;
  while ((q - 1) % m != 0) {
    ++r;
    if (q > (int64_t{1} << 22) / ell) throw ValidationError("required extension field is too large");
    q *= ell;
  }
  return Ring::finite_field(ell, r);
}

Scalar primitive_root_of_unity(const Ring* F, int64_t m) {
  if (F->kind() == exact::RingKind::Rational) {
    if (m == 1) return Scalar::one(F);
    if (m == 2) return Scalar(F, -1L);
    throw ValidationError("Q only contains the roots of unity +-1");
  }
  if (!F->is_finite() || !F->is_field()) throw ValidationError("roots of unity need a field");
  const int64_t q1 = F->order() - 1;
  if (q1 % m != 0) throw MathError("field has no primitive root of unity of this order");
  std::vector<int64_t> primes;
  for (int64_t p = 2, t = q1; t > 1; ++p)
    if (t % p == 0) {
      primes.push_back(p);
      while (t % p == 0) t /= p;
    }
  for (int64_t c = 1; c < F->order(); ++c) {
    const Scalar g = Scalar::from_code(F, c);
    if (g.is_zero()) continue;
    bool generator = true;
    for (int64_t p : primes)
      if (g.pow(q1 / p).is_one()) {
        generator = false;
        break;
      }
    if (generator) return g.pow(q1 / m);
  }
  throw InternalError("finite field without a primitive element");
}

Character::Character(int64_t N, const Ring* F, Scalar sign_value, const std::vector<int64_t>& units,
                     const std::vector<Scalar>& values)
    : N_(N), F_(F), sign_value_(std::move(sign_value)), units_(units) {
  if (N < 1) throw ValidationError("level must be positive");
  if (units.size() != values.size()) throw ValidationError("one value per listed unit is required");
  if (sign_value_.ring() != F || !(sign_value_ * sign_value_).is_one()) throw ValidationError("chi(-1) must be +-1");
  std::vector<int64_t> us;
  for (size_t i = 0; i < units.size(); ++i) {
    if (values[i].ring() != F || values[i].is_zero()) throw ValidationError("character values must be units of the field");
    const int64_t u = mod_pos(units[i], N);
    if (gcd64(u, N) != 1) throw ValidationError("not a unit");
    if (!values[i].pow(multiplicative_order(u, N)).is_one()) throw ValidationError("character value has the wrong order");
    us.push_back(u);
  }
  const int64_t one = mod_pos(1, N);
  values_.emplace(one, Scalar::one(F));
  std::deque<int64_t> queue{one};
  while (!queue.empty()) {
    const int64_t x = queue.front();
    queue.pop_front();
    const Scalar vx = values_.at(x);
    for (size_t i = 0; i < us.size(); ++i) {
      const int64_t y = x * us[i] % N;
      const Scalar vy = vx * values[i];
      auto it = values_.find(y);
      if (it == values_.end()) {
        values_.emplace(y, vy);
        queue.push_back(y);
      } else if (it->second != vy) {
        throw ValidationError("character values are inconsistent");
      }
    }
  }
  if (values_.size() != modgroup::units_mod(N).size()) throw ValidationError("listed units do not generate (Z/N)^*");
}

Character Character::trivial(int64_t N, const Ring* F) {
  const auto gens = unit_group_generators(N);
  return Character(N, F, Scalar::one(F), gens, std::vector<Scalar>(gens.size(), Scalar::one(F)));
}

Character Character::from_exponents(int64_t N, int64_t ell, int64_t m, int64_t sign_exp, const std::vector<int64_t>& units,
                                    const std::vector<int64_t>& exps) {
  const Ring* F = field_with_roots_of_unity(ell, m);
  const Scalar z = primitive_root_of_unity(F, m);
  std::vector<Scalar> vals;
  for (int64_t e : exps) vals.push_back(z.pow(mod_pos(e, m)));
  return Character(N, F, z.pow(mod_pos(sign_exp, m)), units, vals);
}

Scalar Character::operator()(int sign, int64_t unit) const {
  auto it = values_.find(mod_pos(unit, N_));
  if (it == values_.end()) throw ValidationError("not a unit mod " + std::to_string(N_));
  return sign < 0 ? sign_value_ * it->second : it->second;
}

Scalar Character::on(const SignedElt& x) const { return (*this)(x.sign, mod_pos(x.g.det(), N_)); }

Character Character::operator*(const Character& o) const {
  if (N_ != o.N_ || F_ != o.F_) throw ValidationError("characters with different levels or fields");
  Character r = *this;
  r.sign_value_ = sign_value_ * o.sign_value_;
  for (auto& [u, v] : r.values_) v = v * o.values_.at(u);
  return r;
}

Character Character::inverse() const {
  Character r = *this;
  r.sign_value_ = sign_value_.inv();
  for (auto& [u, v] : r.values_) v = v.inv();
  return r;
}

Character Character::converted(const Ring* target) const {
  Character r = *this;
  r.F_ = target;
  r.sign_value_ = exact::convert(sign_value_, target);
  for (auto& [u, v] : r.values_) v = exact::convert(v, target);
  return r;
}

bool Character::operator==(const Character& o) const {
  return N_ == o.N_ && F_ == o.F_ && sign_value_ == o.sign_value_ && values_ == o.values_;
}

json Character::to_json() const {
  json units = json::array(), vals = json::array();
  for (int64_t u : units_) {
    units.push_back(u);
    vals.push_back(values_.at(mod_pos(u, N_)).to_string());
  }
  return {{"kind", "character"}, {"N", N_}, {"field", F_->name()}, {"sign", sign_value_.to_string()},
          {"units", units}, {"values", vals}};
}

Character Character::from_json(const json& j) {
  try {
    const int64_t N = j.at("N").get<int64_t>();
    if (j.contains("m")) {
      return from_exponents(N, j.at("ell").get<int64_t>(), j.at("m").get<int64_t>(), j.value("sign_exp", int64_t{0}),
                            j.at("units").get<std::vector<int64_t>>(), j.at("exps").get<std::vector<int64_t>>());
    }
    const Ring* F = field_of(j);
    std::vector<Scalar> vals;
    for (const auto& v : j.at("values")) vals.push_back(scalar_from_json(F, v));
    return Character(N, F, j.contains("sign") ? scalar_from_json(F, j["sign"]) : Scalar::one(F),
                     j.at("units").get<std::vector<int64_t>>(), vals);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad character record: ") + e.what());
  }
}

// --- constructions ---------------------------------------------------------

std::shared_ptr<AdmissibleModule> character_module(const Character& chi, std::shared_ptr<const FiniteGroup> G) {
  if (chi.level() != G->level()) throw ValidationError("character level differs from the group level");
  std::vector<Matrix> gens;
  for (const auto& g : G->generators()) {
    Matrix m(chi.ring(), 1, 1);
    m(0, 0) = chi.on(g);
    gens.push_back(m);
  }
  return std::make_shared<AdmissibleModule>(chi.ring(), std::move(G), 1, std::move(gens), "F(chi)");
}

std::shared_ptr<AdmissibleModule> twist_module(const Module& M, const Character& chi0) {
  const auto* A = dynamic_cast<const AdmissibleModule*>(&M);
  if (!A) throw ValidationError("twist requires admissible");
  if (chi0.level() != A->group()->level()) throw ValidationError("character level differs from the module level");
  std::shared_ptr<const AdmissibleModule> base(std::shared_ptr<const AdmissibleModule>{}, A);
  Character chi = chi0;
  if (A->ring() != chi.ring()) {
    if (prime_field(A->ring()) && chi.ring()->is_finite() && chi.ring()->characteristic() == A->ring()->modulus()) {
      base = A->converted(chi.ring());
    } else {
      try {
        chi = chi.converted(A->ring());
      } catch (const ValidationError&) {
        throw ValidationError("character and module live over different fields");
      }
    }
  }
  std::vector<Matrix> gens;
  const auto& G = base->group();
  for (size_t s = 0; s < G->generators().size(); ++s)
    gens.push_back(base->generator_images()[s].scaled(chi.on(G->generators()[s])));
  return std::make_shared<AdmissibleModule>(base->ring(), G, base->dim(), std::move(gens), base->describe() + "(chi)");
}

std::shared_ptr<AdmissibleModule> regular_module(const Ring* F, std::shared_ptr<const FiniteGroup> G) {
  const size_t n = G->order();
  std::vector<Matrix> gens;
  for (const auto& g : G->generators()) {
    Matrix m(F, n, n);
    for (size_t x = 0; x < n; ++x) m(x, *G->index_of(G->multiply(G->elements()[x], g))) = Scalar::one(F);
    gens.push_back(std::move(m));
  }
  return std::make_shared<AdmissibleModule>(F, std::move(G), n, std::move(gens), "regular");
}

std::shared_ptr<AdmissibleModule> vector_permutation_module(const Ring* F, std::shared_ptr<const FiniteGroup> G) {
  const int64_t N = G->level();
  const size_t n = static_cast<size_t>(N * N);
  std::vector<Matrix> gens;
  for (const auto& g : G->generators()) {
    Matrix m(F, n, n);
    for (int64_t v0 = 0; v0 < N; ++v0)
      for (int64_t v1 = 0; v1 < N; ++v1) {
        const int64_t w0 = mod_pos(v0 * g.g.a() + v1 * g.g.c(), N), w1 = mod_pos(v0 * g.g.b() + v1 * g.g.d(), N);
        m(static_cast<size_t>(v0 * N + v1), static_cast<size_t>(w0 * N + w1)) = Scalar::one(F);
      }
    gens.push_back(std::move(m));
  }
  return std::make_shared<AdmissibleModule>(F, std::move(G), n, std::move(gens), "permutation module of (Z/N)^2");
}

ModulePtr module_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sym") return std::make_shared<SymModule>(field_of(j), j.at("k").get<int>(), j.value("e", 0));
    if (kind == "character") {
      const Character chi = Character::from_json(j);
      const GroupDescriptor d = j.contains("group") ? GroupDescriptor::from_json(j["group"])
                                                    : GroupDescriptor::full(chi.level(), modgroup::SignPolicy::GL);
      if (d.level() != chi.level()) throw ValidationError("character level differs from the group level");
      return character_module(chi, FiniteGroup::of_descriptor(d));
    }
    if (kind == "admissible") {
      const Ring* F = field_of(j);
      std::shared_ptr<const FiniteGroup> G;
      if (j.contains("group")) {
        G = FiniteGroup::of_descriptor(GroupDescriptor::from_json(j["group"]));
      } else {
        std::vector<SignedElt> gens;
        for (const auto& g : j.at("generators"))
          gens.push_back({g.value("sign", 1), GMat::from_rows(g.at("matrix").get<std::vector<std::vector<int64_t>>>())});
        G = std::make_shared<FiniteGroup>(j.at("N").get<int64_t>(), gens);
      }
      const auto& rep = j.at("rep");
      if (!rep.is_array()) throw ValidationError("rep must be a list of matrices");
      const size_t dim = j.contains("dim") ? j["dim"].get<size_t>() : (rep.empty() ? 0 : rep[0].size());
      std::vector<Matrix> mats;
      for (const auto& m : rep) mats.push_back(matrix_from_json(F, m, dim));
      // descriptor form: sign matrix comes after the H generators
      if (j.contains("group") && mats.size() + 1 == G->generators().size()) {
        if (!j.contains("sign_matrix")) throw ValidationError("sign_matrix is required under the GL policy");
        mats.push_back(matrix_from_json(F, j["sign_matrix"], dim));
      }
      return std::make_shared<AdmissibleModule>(F, G, dim, std::move(mats), j.value("label", std::string("admissible")));
    }
    throw ValidationError("unknown module kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad module record: ") + e.what());
  }
}

bool action_law_holds(const Module& M, const std::vector<GMat>& elements) {
  for (const auto& x : elements)
    for (const auto& y : elements)
      if (M.action(x) * M.action(y) != M.action(x * y)) return false;
  return true;
}

}  // namespace hecke::coeffmod
