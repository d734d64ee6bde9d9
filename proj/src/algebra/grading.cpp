#include "hecke/algebra/grading.hpp"

#include <deque>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke::algebra {

SyntheticClassGroup::SyntheticClassGroup(std::vector<int64_t> moduli) : moduli_(std::move(moduli)) {
  for (int64_t m : moduli_)
    if (m < 1) throw ValidationError("class group moduli must be positive");
}

void SyntheticClassGroup::set_prime_class(int64_t p, Element c) {
  if (!is_prime64(p)) throw ValidationError("class labels are attached to primes");
  if (c.size() != moduli_.size()) throw ValidationError("class label has the wrong length");
  prime_class_[p] = normalize(std::move(c));
}

SyntheticClassGroup::Element SyntheticClassGroup::normalize(Element a) const {
  if (a.size() != moduli_.size()) throw ValidationError("class element has the wrong length");
  for (size_t i = 0; i < a.size(); ++i) a[i] = modgroup::mod_pos(a[i], moduli_[i]);
  return a;
}

SyntheticClassGroup::Element SyntheticClassGroup::add(const Element& a, const Element& b) const {
  if (a.size() != moduli_.size() || b.size() != moduli_.size()) throw ValidationError("class element has the wrong length");
  Element r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = modgroup::mod_pos(a[i] + b[i], moduli_[i]);
  return r;
}

SyntheticClassGroup::Element SyntheticClassGroup::neg(const Element& a) const {
  Element r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = modgroup::mod_pos(-a[i], moduli_[i]);
  return r;
}

size_t SyntheticClassGroup::order() const {
  size_t r = 1;
  for (int64_t m : moduli_) r *= static_cast<size_t>(m);
  return r;
}

std::vector<SyntheticClassGroup::Element> SyntheticClassGroup::elements() const {
  std::vector<Element> out{identity()};
  for (size_t i = 0; i < moduli_.size(); ++i) {
    std::vector<Element> next;
    for (const auto& e : out)
      for (int64_t k = 0; k < moduli_[i]; ++k) {
        Element x = e;
        x[i] = k;
        next.push_back(x);
      }
    out = next;
  }
  return out;
}

int64_t SyntheticClassGroup::element_order(const Element& a) const {
  Element x = normalize(a);
  int64_t k = 1;
  for (Element y = x; y != identity(); y = add(y, x)) ++k;
  return k;
}

SyntheticClassGroup::Element SyntheticClassGroup::grade_of_det(int64_t d) const {
  if (d == 0) throw MathError("singular");
  Element g = identity();
  for (auto [p, e] : factorize(d)) {
    auto it = prime_class_.find(p);
    if (it == prime_class_.end()) continue;
    for (int k = 0; k < e; ++k) g = add(g, it->second);
  }
  return g;
}

SyntheticClassGroup::Element SyntheticClassGroup::grade(const DoubleCosetSum& t) const {
  if (t.empty()) return identity();
  Element g = grade(t.terms().front().rep);
  for (const auto& x : t.terms())
    if (grade(x.rep) != g) throw MathError("sum is not homogeneous for the grading");
  return g;
}

// ---------------------------------------------------------------------------

ClassCharacter ClassCharacter::trivial(const SyntheticClassGroup& C, const Ring* ring) {
  ClassCharacter c;
  c.ring = ring;
  for (const auto& e : C.elements()) c.values.emplace(e, Scalar::one(ring));
  return c;
}

ClassCharacter ClassCharacter::from_generators(const SyntheticClassGroup& C, const Ring* ring,
                                               const std::vector<Scalar>& gens) {
  if (gens.size() != C.moduli().size()) throw ValidationError("one value per cyclic factor is required");
  for (size_t i = 0; i < gens.size(); ++i)
    if (!gens[i].pow(C.moduli()[i]).is_one()) throw ValidationError("character value has the wrong order");
  ClassCharacter c;
  c.ring = ring;
  for (const auto& e : C.elements()) {
    Scalar v = Scalar::one(ring);
    for (size_t i = 0; i < e.size(); ++i) v = v * gens[i].pow(e[i]);
    c.values.emplace(e, v);
  }
  return c;
}

Scalar ClassCharacter::operator()(const SyntheticClassGroup::Element& c) const {
  auto it = values.find(c);
  if (it == values.end()) throw MathError("character is not determined on this class");
  return it->second;
}

ClassCharacter ClassCharacter::operator*(const ClassCharacter& o) const {
  if (ring != o.ring) throw ValidationError("characters with different value fields");
  ClassCharacter r;
  r.ring = ring;
  for (const auto& [k, v] : values) {
    auto it = o.values.find(k);
    if (it != o.values.end()) r.values.emplace(k, v * it->second);
  }
  return r;
}

bool ClassCharacter::agrees_with(const ClassCharacter& o) const {
  if (ring != o.ring) return false;
  for (const auto& [k, v] : values) {
    auto it = o.values.find(k);
    if (it != o.values.end() && it->second != v) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

int64_t OpLabel::det() const {
  if (m == 0) return p;
  int64_t d = 1;
  for (int i = 0; i < m; ++i) d *= p;
  return d;
}

std::string OpLabel::to_string() const {
  if (m == 0) return "Ta" + std::to_string(p);
  if (m == 1) return "T" + std::to_string(p);
  return "T" + std::to_string(p) + "^(" + std::to_string(m) + ")";
}

OpLabel OpLabel::parse(const std::string& s) {
  try {
    if (s.rfind("Ta", 0) == 0) return {std::stoll(s.substr(2)), 0};
    if (s.empty() || s[0] != 'T') throw ValidationError("bad operator label '" + s + "'");
    auto hat = s.find("^(");
    if (hat == std::string::npos) return {std::stoll(s.substr(1)), 1};
    return {std::stoll(s.substr(1, hat - 1)), std::stoi(s.substr(hat + 2))};
  } catch (const std::logic_error&) {
    throw ValidationError("bad operator label '" + s + "'");
  }
}

std::string EigenSystem::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : values) {
    os << (first ? "" : ", ") << k.to_string() << ": " << v.to_string();
    first = false;
  }
  os << "}";
  return os.str();
}

bool check_multiplicative(const EigenSystem& phi) {
  std::map<int64_t, Scalar> ta;
  for (const auto& [k, v] : phi.values)
    if (k.m == 0 || k.m == 1) ta.emplace(k.det(), v);
  for (const auto& [a, v] : ta)
    for (int64_t b = 2; b < a; ++b) {
      if (a % b || modgroup::gcd64(b, a / b) != 1) continue;
      auto x = ta.find(b), y = ta.find(a / b);
      if (x != ta.end() && y != ta.end() && x->second * y->second != v) return false;
    }
  return true;
}

EigenSystem twist_eigensystem(const SyntheticClassGroup& C, const ClassCharacter& chi, const EigenSystem& phi) {
  if (chi.ring != phi.ring) throw ValidationError("character and eigensystem live in different fields");
  EigenSystem r = phi;
  for (auto& [k, v] : r.values) v = v * chi(C.grade_of_det(k.det()));
  return r;
}

ClassCharacter extract_twist(const SyntheticClassGroup& C, const EigenSystem& phi, const EigenSystem& psi) {
  if (phi.ring != psi.ring) throw ValidationError("eigensystems live in different fields");
  if (phi.values.size() != psi.values.size()) throw ValidationError("eigensystems have different label sets");
  const Ring* F = phi.ring;
  std::map<SyntheticClassGroup::Element, Scalar> known;
  known.emplace(C.identity(), Scalar::one(F));
  for (const auto& [k, v] : phi.values) {
    auto it = psi.values.find(k);
    if (it == psi.values.end()) throw ValidationError("eigensystems have different label sets");
    const auto g = C.grade_of_det(k.det());
    if (g == C.identity()) {
      if (v != it->second) throw MathError("eigensystems disagree on the identity component");
      continue;
    }
    if (it->second.is_zero()) {
      if (!v.is_zero()) throw MathError("not a twist pair");
      continue;
    }
    Scalar r = v / it->second;
    auto kn = known.find(g);
    if (kn != known.end() && kn->second != r) throw MathError("not a twist pair");
    known.emplace(g, r);
  }
  // close under the group law and check consistency
  std::vector<std::pair<SyntheticClassGroup::Element, Scalar>> seeds(known.begin(), known.end());
  std::deque<SyntheticClassGroup::Element> queue;
  for (const auto& [k, v] : known) queue.push_back(k);
  while (!queue.empty()) {
    auto a = queue.front();
    queue.pop_front();
    const Scalar va = known.at(a);
    for (const auto& [b, vb] : seeds) {
      auto c = C.add(a, b);
      Scalar vc = va * vb;
      auto it = known.find(c);
      if (it == known.end()) {
        known.emplace(c, vc);
        queue.push_back(c);
      } else if (it->second != vc) {
        throw MathError("not a twist pair");
      }
    }
  }
  ClassCharacter chi;
  chi.ring = F;
  chi.values = known;
  return chi;
}

exact::Matrix graded_operator(const SyntheticClassGroup& C, const SyntheticClassGroup::Element& g, const exact::Matrix& m) {
  const auto els = C.elements();
  std::map<SyntheticClassGroup::Element, size_t> pos;
  for (size_t i = 0; i < els.size(); ++i) pos[els[i]] = i;
  const size_t w = m.rows();
  exact::Matrix big(m.ring(), els.size() * w, els.size() * w);
  for (size_t i = 0; i < els.size(); ++i) {
    const size_t j = pos.at(C.add(els[i], g));
    for (size_t r = 0; r < w; ++r)
      for (size_t c = 0; c < w; ++c) big(i * w + r, j * w + c) = m(r, c);
  }
  return big;
}

exact::Vector twisted_eigenform(const SyntheticClassGroup& C, const ClassCharacter& chi, const exact::Vector& v) {
  exact::Vector out;
  for (const auto& c : C.elements()) {
    const Scalar f = chi(c).inv();
    for (const auto& x : v) out.push_back(f * x);
  }
  return out;
}

DoubleCosetSum restrict_to_gamma(const DoubleCosetSum& t, const SyntheticClassGroup& C,
                                 const SyntheticClassGroup::Element& c, const GroupDescriptor& target) {
  if (C.grade(t) != C.normalize(c)) throw MathError("wrong graded component");
  DoubleCosetSum out(target, target, t.n());
  for (const auto& [coeff, rep] : double_coset_components(t)) out = out + decompose(target, rep, target).scaled(coeff);
  return out;
}

}  // namespace hecke::algebra
