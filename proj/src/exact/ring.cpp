#include "hecke/exact/ring.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "hecke/error.hpp"

namespace hecke::exact {

namespace {

using IPoly = std::vector<int64_t>;  // coefficients low -> high, mod p

int64_t modp(int64_t a, int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

int64_t mulmod(int64_t a, int64_t b, int64_t p) {
  return static_cast<int64_t>((static_cast<__int128>(a) * b) % p);
}

int64_t powmod(int64_t a, int64_t e, int64_t p) {
  int64_t r = 1 % p;
  a = modp(a, p);
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

int64_t invmod(int64_t a, int64_t n) {
  int64_t old_r = n, cur_r = modp(a, n), old_s = 0, cur_s = 1;
  while (cur_r != 0) {
    const int64_t q = old_r / cur_r;
    int64_t t = old_r - q * cur_r;
    old_r = cur_r;
    cur_r = t;
    t = old_s - q * cur_s;
    old_s = cur_s;
    cur_s = t;
  }
  if (old_r != 1) throw MathError("element not invertible modulo " + std::to_string(n));
  return modp(old_s, n);
}

void trim(IPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

IPoly poly_mod(IPoly a, const IPoly& m, int64_t p) {
  trim(a);
  const size_t dm = m.size() - 1;
  const int64_t lead_inv = invmod(m.back(), p);
  while (a.size() > dm) {
    const int64_t c = mulmod(a.back(), lead_inv, p);
    const size_t shift = a.size() - 1 - dm;
    for (size_t i = 0; i <= dm; ++i) a[shift + i] = modp(a[shift + i] - mulmod(c, m[i], p), p);
    trim(a);
  }
  return a;
}

IPoly poly_mulmod(const IPoly& a, const IPoly& b, const IPoly& m, int64_t p) {
  if (a.empty() || b.empty()) return {};
  IPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = modp(c[i + j] + mulmod(a[i], b[j], p), p);
  return poly_mod(std::move(c), m, p);
}

IPoly poly_powmod(IPoly base, int64_t e, const IPoly& m, int64_t p) {
  IPoly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

IPoly poly_gcd(IPoly a, IPoly b, int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    IPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<int64_t> prime_factors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's test.
bool irreducible_mod_p(const IPoly& f, int64_t p) {
  const int r = static_cast<int>(f.size()) - 1;
  if (r <= 0) return false;
  if (r == 1) return true;
  const IPoly x{0, 1};
  // x^{p^k} mod f computed by repeated p-th powering
  auto frob_power = [&](int k) {
    IPoly y = x;
    for (int i = 0; i < k; ++i) y = poly_powmod(y, p, f, p);
    return y;
  };
  IPoly full = frob_power(r);
  IPoly diff = full;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = modp(diff[1] - 1, p);
  trim(diff);
  if (!diff.empty()) return false;
  for (int64_t q : prime_factors(r)) {
    IPoly y = frob_power(static_cast<int>(r / q));
    y.resize(std::max<size_t>(y.size(), 2), 0);
    y[1] = modp(y[1] - 1, p);
    IPoly g = poly_gcd(f, y, p);
    if (g.size() != 1) return false;
  }
  return true;
}

IPoly code_to_poly(int64_t code, int64_t p, int r) {
  IPoly f(r, 0);
  for (int i = 0; i < r; ++i) {
    f[i] = code % p;
    code /= p;
  }
  trim(f);
  return f;
}

int64_t poly_to_code(const IPoly& f, int64_t p) {
  int64_t code = 0;
  for (size_t i = f.size(); i-- > 0;) code = code * p + f[i];
  return code;
}

constexpr int64_t kMaxFieldOrder = int64_t{1} << 22;

struct Registry {
  std::mutex mu;
  std::map<std::pair<int, std::pair<int64_t, int>>, std::unique_ptr<Ring>> rings;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring::Ring(RingKind kind, int64_t modulus, int degree)
    : kind_(kind), modulus_(modulus), degree_(degree) {
  if (kind == RingKind::ModN) order_ = modulus;
  if (kind == RingKind::FiniteField) {
    order_ = 1;
    for (int i = 0; i < degree; ++i) order_ *= modulus;
    if (degree == 1) {
      def_poly_ = {0, 1};
    } else {
      build_extension_tables();
    }
  }
}

void Ring::build_extension_tables() {
  const int64_t p = modulus_;
  const int r = degree_;
  // Lexicographic in (c_{r-1}, ..., c_0): iterate the integer whose most
  // significant base-p digit is c_{r-1}.
  const int64_t count = order_;
  bool found = false;
  for (int64_t k = 0; k < count && !found; ++k) {
    IPoly f(r + 1, 0);
    int64_t t = k;
    for (int i = 0; i < r; ++i) {
      f[i] = t % p;
      t /= p;
    }
    f[r] = 1;
    if (irreducible_mod_p(f, p)) {
      def_poly_ = f;
      found = true;
    }
  }
  if (!found) throw InternalError("no irreducible polynomial found");
  if (!irreducible_mod_p(def_poly_, p)) throw InternalError("defining polynomial reducible");

  const int64_t q1 = order_ - 1;
  const auto qf = prime_factors(q1);
  int64_t prim = -1;
  for (int64_t c = 1; c < order_ && prim < 0; ++c) {
    IPoly g = code_to_poly(c, p, r);
    bool ok = true;
    for (int64_t l : qf) {
      IPoly y = poly_powmod(g, q1 / l, def_poly_, p);
      if (y.size() == 1 && y[0] == 1) {
        ok = false;
        break;
      }
    }
    if (ok) prim = c;
  }
  exp_.assign(q1, 0);
  log_.assign(order_, -1);
  IPoly g = code_to_poly(prim, p, r);
  IPoly cur{1};
  for (int64_t k = 0; k < q1; ++k) {
    const int64_t code = poly_to_code(cur, p);
    exp_[k] = code;
    log_[code] = k;
    cur = poly_mulmod(cur, g, def_poly_, p);
  }
}

const Ring* Ring::integers() {
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto& slot = reg.rings[{0, {0, 0}}];
  if (!slot) slot.reset(new Ring(RingKind::Integer, 0, 1));
  return slot.get();
}

const Ring* Ring::rationals() {
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto& slot = reg.rings[{1, {0, 0}}];
  if (!slot) slot.reset(new Ring(RingKind::Rational, 0, 1));
  return slot.get();
}

const Ring* Ring::mod(int64_t n) {
  if (n < 2) throw ValidationError("modulus must be >= 2");
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto& slot = reg.rings[{2, {n, 1}}];
  if (!slot) slot.reset(new Ring(RingKind::ModN, n, 1));
  return slot.get();
}

const Ring* Ring::finite_field(int64_t p, int r) {
  if (!is_prime(p)) throw ValidationError("field characteristic must be prime");
  if (r < 1) throw ValidationError("extension degree must be positive");
  int64_t q = 1;
  for (int i = 0; i < r; ++i) {
    q *= p;
    if (q > kMaxFieldOrder && r > 1) throw ValidationError("finite field too large for table arithmetic");
  }
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto& slot = reg.rings[{3, {p, r}}];
  if (!slot) slot.reset(new Ring(RingKind::FiniteField, p, r));
  return slot.get();
}

bool Ring::is_field() const {
  switch (kind_) {
    case RingKind::Integer: return false;
    case RingKind::Rational: return true;
    case RingKind::ModN: return is_prime(modulus_);
    case RingKind::FiniteField: return true;
  }
  return false;
}

int64_t Ring::characteristic() const {
  return (kind_ == RingKind::ModN || kind_ == RingKind::FiniteField) ? modulus_ : 0;
}

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::Integer: return "Z";
    case RingKind::Rational: return "Q";
    case RingKind::ModN: return "Z/" + std::to_string(modulus_);
    case RingKind::FiniteField: return "F" + std::to_string(order_);
  }
  return "?";
}

int64_t Ring::ff_add(int64_t a, int64_t b) const {
  if (degree_ == 1) {
    const int64_t s = a + b;
    return s >= modulus_ ? s - modulus_ : s;
  }
  int64_t out = 0, place = 1;
  for (int i = 0; i < degree_; ++i) {
    int64_t d = (a % modulus_) + (b % modulus_);
    if (d >= modulus_) d -= modulus_;
    out += d * place;
    place *= modulus_;
    a /= modulus_;
    b /= modulus_;
  }
  return out;
}

int64_t Ring::ff_neg(int64_t a) const {
  if (degree_ == 1) return a == 0 ? 0 : modulus_ - a;
  int64_t out = 0, place = 1;
  for (int i = 0; i < degree_; ++i) {
    const int64_t d = a % modulus_;
    out += (d == 0 ? 0 : modulus_ - d) * place;
    place *= modulus_;
    a /= modulus_;
  }
  return out;
}

int64_t Ring::ff_mul(int64_t a, int64_t b) const {
  if (degree_ == 1) return mulmod(a, b, modulus_);
  if (a == 0 || b == 0) return 0;
  const int64_t q1 = order_ - 1;
  int64_t k = log_[a] + log_[b];
  if (k >= q1) k -= q1;
  return exp_[k];
}

int64_t Ring::ff_inv(int64_t a) const {
  if (a == 0) throw MathError("division by zero");
  if (degree_ == 1) return invmod(a, modulus_);
  const int64_t q1 = order_ - 1;
  return exp_[(q1 - log_[a]) % q1];
}

int64_t Ring::ff_generator() const { return degree_ == 1 ? 0 : modulus_; }

int64_t Ring::ff_exp(int64_t k) const {
  const int64_t q1 = order_ - 1;
  k %= q1;
  if (k < 0) k += q1;
  if (degree_ == 1) {
    // Prime field: find a primitive root lazily (small p only).
    int64_t g = 2 % modulus_;
    if (modulus_ == 2) g = 1;
    const auto qf = prime_factors(q1);
    for (;; ++g) {
      bool ok = true;
      for (int64_t l : qf)
        if (powmod(g, q1 / l, modulus_) == 1) ok = false;
      if (ok) break;
    }
    return powmod(g, k, modulus_);
  }
  return exp_[k];
}

int64_t Ring::ff_log(int64_t a) const {
  if (a == 0) throw MathError("log of zero");
  if (degree_ > 1) return log_[a];
  for (int64_t k = 0; k < order_ - 1; ++k)
    if (ff_exp(k) == a) return k;
  throw InternalError("discrete log failed");
}

// ---------------------------------------------------------------------------

Scalar::Scalar() : ring_(Ring::integers()), v_(mpz_class(0)) {}

Scalar::Scalar(const Ring* ring, long v) : ring_(ring) {
  switch (ring->kind()) {
    case RingKind::Integer: v_ = mpz_class(v); break;
    case RingKind::Rational: v_ = mpq_class(v); break;
    case RingKind::ModN:
    case RingKind::FiniteField: v_ = modp(v, ring->modulus()); break;
  }
}

Scalar::Scalar(const Ring* ring, const mpz_class& v) : ring_(ring) {
  switch (ring->kind()) {
    case RingKind::Integer: v_ = v; break;
    case RingKind::Rational: v_ = mpq_class(v); break;
    case RingKind::ModN:
    case RingKind::FiniteField: {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(ring->modulus()));
      v_ = static_cast<int64_t>(r.get_si());
      break;
    }
  }
}

Scalar::Scalar(const Ring* ring, const mpq_class& v) : ring_(ring) {
  switch (ring->kind()) {
    case RingKind::Integer:
      if (v.get_den() != 1) throw MathError("non-integral rational in Z");
      v_ = mpz_class(v.get_num());
      break;
    case RingKind::Rational: {
      mpq_class c = v;
      c.canonicalize();
      v_ = c;
      break;
    }
    case RingKind::ModN:
    case RingKind::FiniteField: {
      Scalar num(ring, mpz_class(v.get_num()));
      Scalar den(ring, mpz_class(v.get_den()));
      *this = num / den;
      break;
    }
  }
}

Scalar Scalar::from_code(const Ring* ring, int64_t code) {
  if (!ring->is_finite()) throw ValidationError("codes only exist for finite rings");
  if (code < 0 || code >= ring->order()) throw ValidationError("code out of range");
  Scalar s(ring, 0L);
  s.v_ = code;
  return s;
}

void Scalar::check_same(const Scalar& o) const {
  if (ring_ != o.ring_) throw ValidationError("ring mismatch: " + ring_->name() + " vs " + o.ring_->name());
}

bool Scalar::is_zero() const {
  switch (ring_->kind()) {
    case RingKind::Integer: return std::get<mpz_class>(v_) == 0;
    case RingKind::Rational: return std::get<mpq_class>(v_) == 0;
    default: return std::get<int64_t>(v_) == 0;
  }
}

bool Scalar::is_one() const {
  switch (ring_->kind()) {
    case RingKind::Integer: return std::get<mpz_class>(v_) == 1;
    case RingKind::Rational: return std::get<mpq_class>(v_) == 1;
    default: return std::get<int64_t>(v_) == 1;
  }
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(o);
  Scalar r = *this;
  switch (ring_->kind()) {
    case RingKind::Integer: r.v_ = mpz_class(std::get<mpz_class>(v_) + std::get<mpz_class>(o.v_)); break;
    case RingKind::Rational: r.v_ = mpq_class(std::get<mpq_class>(v_) + std::get<mpq_class>(o.v_)); break;
    case RingKind::ModN: {
      int64_t s = std::get<int64_t>(v_) + std::get<int64_t>(o.v_);
      if (s >= ring_->modulus()) s -= ring_->modulus();
      r.v_ = s;
      break;
    }
    case RingKind::FiniteField: r.v_ = ring_->ff_add(std::get<int64_t>(v_), std::get<int64_t>(o.v_)); break;
  }
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  switch (ring_->kind()) {
    case RingKind::Integer: r.v_ = mpz_class(-std::get<mpz_class>(v_)); break;
    case RingKind::Rational: r.v_ = mpq_class(-std::get<mpq_class>(v_)); break;
    case RingKind::ModN: {
      const int64_t a = std::get<int64_t>(v_);
      r.v_ = a == 0 ? int64_t{0} : ring_->modulus() - a;
      break;
    }
    case RingKind::FiniteField: r.v_ = ring_->ff_neg(std::get<int64_t>(v_)); break;
  }
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(o);
  Scalar r = *this;
  switch (ring_->kind()) {
    case RingKind::Integer: r.v_ = mpz_class(std::get<mpz_class>(v_) * std::get<mpz_class>(o.v_)); break;
    case RingKind::Rational: r.v_ = mpq_class(std::get<mpq_class>(v_) * std::get<mpq_class>(o.v_)); break;
    case RingKind::ModN: r.v_ = mulmod(std::get<int64_t>(v_), std::get<int64_t>(o.v_), ring_->modulus()); break;
    case RingKind::FiniteField: r.v_ = ring_->ff_mul(std::get<int64_t>(v_), std::get<int64_t>(o.v_)); break;
  }
  return r;
}

Scalar Scalar::inv() const {
  if (is_zero()) throw MathError("division by zero");
  Scalar r = *this;
  switch (ring_->kind()) {
    case RingKind::Integer: {
      const auto& a = std::get<mpz_class>(v_);
      if (a != 1 && a != -1) throw MathError("integer not a unit");
      break;
    }
    case RingKind::Rational: r.v_ = mpq_class(1 / std::get<mpq_class>(v_)); break;
    case RingKind::ModN: r.v_ = invmod(std::get<int64_t>(v_), ring_->modulus()); break;
    case RingKind::FiniteField: r.v_ = ring_->ff_inv(std::get<int64_t>(v_)); break;
  }
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const {
  check_same(o);
  return *this * o.inv();
}

Scalar Scalar::pow(int64_t e) const {
  Scalar base = e < 0 ? inv() : *this;
  if (e < 0) e = -e;
  Scalar r = Scalar::one(ring_);
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  if (ring_ != o.ring_) return false;
  return v_ == o.v_;
}

bool Scalar::less(const Scalar& o) const {
  check_same(o);
  switch (ring_->kind()) {
    case RingKind::Integer: return std::get<mpz_class>(v_) < std::get<mpz_class>(o.v_);
    case RingKind::Rational: return std::get<mpq_class>(v_) < std::get<mpq_class>(o.v_);
    default: return std::get<int64_t>(v_) < std::get<int64_t>(o.v_);
  }
}

const mpz_class& Scalar::integer() const {
  if (ring_->kind() != RingKind::Integer) throw ValidationError("not an integer scalar");
  return std::get<mpz_class>(v_);
}

mpq_class Scalar::rational() const {
  if (ring_->kind() == RingKind::Integer) return mpq_class(std::get<mpz_class>(v_));
  if (ring_->kind() != RingKind::Rational) throw ValidationError("not a rational scalar");
  return std::get<mpq_class>(v_);
}

int64_t Scalar::code() const {
  if (!ring_->is_finite()) throw ValidationError("not a finite-ring scalar");
  return std::get<int64_t>(v_);
}

std::string Scalar::to_string() const {
  switch (ring_->kind()) {
    case RingKind::Integer: return std::get<mpz_class>(v_).get_str();
    case RingKind::Rational: return std::get<mpq_class>(v_).get_str();
    default: return std::to_string(std::get<int64_t>(v_));
  }
}

Scalar convert(const Scalar& x, const Ring* target) {
  const Ring* src = x.ring();
  if (src == target) return x;
  switch (src->kind()) {
    case RingKind::Integer: return Scalar(target, x.integer());
    case RingKind::Rational: return Scalar(target, x.rational());
    case RingKind::ModN:
    case RingKind::FiniteField:
      if (src->degree() == 1 && target->is_finite() && target->characteristic() == src->modulus())
        return Scalar(target, static_cast<long>(x.code()));
      if (src->degree() == 1 && target->kind() == RingKind::ModN && src->modulus() % target->modulus() == 0)
        return Scalar(target, static_cast<long>(x.code()));
      break;
  }
  throw ValidationError("no canonical map " + src->name() + " -> " + target->name());
}

const Ring* parse_ring(const std::string& name) {
  if (name == "Z") return Ring::integers();
  if (name == "Q") return Ring::rationals();
  try {
    if (name.rfind("Z/", 0) == 0) return Ring::mod(std::stoll(name.substr(2)));
    if (!name.empty() && name[0] == 'F') {
      const int64_t q = std::stoll(name.substr(1));
      for (int64_t p = 2; p <= q; ++p) {
        if (q % p != 0) continue;
        if (!is_prime(p)) break;
        int r = 0;
        int64_t t = q;
        while (t % p == 0) {
          t /= p;
          ++r;
        }
        if (t != 1) break;
        return Ring::finite_field(p, r);
      }
    }
  } catch (const std::logic_error&) {
  }
  throw ValidationError("unknown ring '" + name + "'");
}

Scalar parse_scalar(const Ring* ring, const std::string& text) {
  try {
    if (ring->kind() == RingKind::FiniteField && ring->degree() > 1) {
      size_t used = 0;
      const long long c = std::stoll(text, &used);
      if (used != text.size() || c < 0 || c >= ring->order()) throw ValidationError("bad element code");
      return Scalar::from_code(ring, c);
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw ValidationError("bad number");
    q.canonicalize();
    if (ring->kind() == RingKind::Integer) {
      if (q.get_den() != 1) throw ValidationError("not an integer");
      return Scalar(ring, mpz_class(q.get_num()));
    }
    return Scalar(ring, q);
  } catch (const std::logic_error&) {
  }
  throw ValidationError("cannot read '" + text + "' as an element of " + ring->name());
}

}  // namespace hecke::exact
