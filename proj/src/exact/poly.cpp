#include "hecke/exact/poly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke::exact {

Poly::Poly(const Ring* ring, std::vector<Scalar> coeffs) : ring_(ring), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (c.ring() != ring_) throw ValidationError("mixed rings in polynomial");
  trim();
}

Poly Poly::from_ints(const Ring* ring, const std::vector<long>& coeffs) {
  std::vector<Scalar> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.emplace_back(ring, v);
  return Poly(ring, std::move(c));
}

Poly Poly::monomial(const Ring* ring, const Scalar& c, size_t deg) {
  std::vector<Scalar> v(deg + 1, Scalar::zero(ring));
  v[deg] = c;
  return Poly(ring, std::move(v));
}

Poly Poly::constant(const Scalar& c) { return Poly(c.ring(), {c}); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar Poly::lead() const { return c_.empty() ? Scalar::zero(ring_) : c_.back(); }

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  return scaled(c_.back().inv());
}

Poly Poly::operator+(const Poly& o) const {
  if (ring_ != o.ring_) throw ValidationError("ring mismatch in polynomial sum");
  std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), Scalar::zero(ring_));
  for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly(ring_, std::move(r));
}

Poly Poly::operator-() const { return scaled(-Scalar::one(ring_)); }
Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (ring_ != o.ring_) throw ValidationError("ring mismatch in polynomial product");
  if (c_.empty() || o.c_.empty()) return Poly(ring_);
  std::vector<Scalar> r(c_.size() + o.c_.size() - 1, Scalar::zero(ring_));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return Poly(ring_, std::move(r));
}

Poly Poly::scaled(const Scalar& s) const {
  std::vector<Scalar> r;
  r.reserve(c_.size());
  for (const auto& c : c_) r.push_back(c * s);
  return Poly(ring_, std::move(r));
}

bool Poly::less(const Poly& o) const {
  if (degree() != o.degree()) return degree() < o.degree();
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == o.c_[i]) continue;
    return c_[i].less(o.c_[i]);
  }
  return false;
}

Scalar Poly::eval(const Scalar& x) const {
  Scalar r = Scalar::zero(ring_);
  for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

Matrix Poly::eval(const Matrix& m) const {
  Matrix r(ring_, m.rows(), m.cols());
  const Matrix id = Matrix::identity(ring_, m.rows());
  for (size_t i = c_.size(); i-- > 0;) r = r * m + id.scaled(c_[i]);
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(ring_);
  std::vector<Scalar> r;
  for (size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * Scalar(ring_, static_cast<long>(i)));
  return Poly(ring_, std::move(r));
}

Poly Poly::converted(const Ring* target) const {
  std::vector<Scalar> r;
  for (const auto& c : c_) r.push_back(convert(c, target));
  return Poly(target, std::move(r));
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const bool unit = c_[i].is_one();
    if (i == 0 || !unit) os << "(" << c_[i].to_string() << ")";
    if (i > 0) os << (unit ? "" : "*") << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw MathError("polynomial division by zero");
  const Ring* ring = a.ring();
  std::vector<Scalar> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly(ring), a};
  std::vector<Scalar> q(static_cast<size_t>(a.degree() - db + 1), Scalar::zero(ring));
  const Scalar inv = b.lead().inv();
  for (int i = a.degree(); i >= db; --i) {
    const Scalar c = r[static_cast<size_t>(i)] * inv;
    if (c.is_zero()) continue;
    q[static_cast<size_t>(i - db)] = c;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i - db + j)] -= c * b.coeffs()[static_cast<size_t>(j)];
  }
  return {Poly(ring, std::move(q)), Poly(ring, std::move(r))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

Poly gcd(const Poly& a0, const Poly& b0) {
  Poly a = a0, b = b0;
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Poly powmod(const Poly& base, const mpz_class& e, const Poly& mod) {
  Poly r = Poly::constant(Scalar::one(base.ring())) % mod;
  Poly b = base % mod;
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = (r * r) % mod;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * b) % mod;
  }
  return r;
}

Poly pow(const Poly& base, unsigned e) {
  Poly r = Poly::constant(Scalar::one(base.ring()));
  for (unsigned i = 0; i < e; ++i) r = r * base;
  return r;
}

Poly Factorization::product() const {
  Poly r = Poly::constant(unit);
  for (const auto& f : factors) r = r * pow(f.poly, static_cast<unsigned>(f.multiplicity));
  return r;
}

Poly char_poly(const Matrix& input) {
  if (input.rows() != input.cols()) throw ValidationError("characteristic polynomial of non-square matrix");
  Matrix h = input.ring()->kind() == RingKind::Integer ? input.converted(Ring::rationals()) : input;
  const Ring* ring = h.ring();
  if (!ring->is_field()) throw MathError("characteristic polynomial requires a field");
  const size_t n = h.rows();
  // Reduce to upper Hessenberg form by similarity transforms.
  for (size_t c = 0; c + 2 < n; ++c) {
    size_t p = c + 1;
    while (p < n && h(p, c).is_zero()) ++p;
    if (p == n) continue;
    if (p != c + 1) {
      for (size_t j = 0; j < n; ++j) std::swap(h(p, j), h(c + 1, j));
      for (size_t i = 0; i < n; ++i) std::swap(h(i, p), h(i, c + 1));
    }
    const Scalar inv = h(c + 1, c).inv();
    for (size_t i = c + 2; i < n; ++i) {
      if (h(i, c).is_zero()) continue;
      const Scalar f = h(i, c) * inv;
      for (size_t j = 0; j < n; ++j) h(i, j) -= f * h(c + 1, j);
      for (size_t r = 0; r < n; ++r) h(r, c + 1) += f * h(r, i);
    }
  }
  std::vector<Poly> P;
  P.push_back(Poly::constant(Scalar::one(ring)));
  const Poly x = Poly::x(ring);
  for (size_t m = 1; m <= n; ++m) {
    Poly pm = (x - Poly::constant(h(m - 1, m - 1))) * P[m - 1];
    Scalar t = Scalar::one(ring);
    for (size_t i = m - 1; i >= 1; --i) {
      t = t * h(i, i - 1);
      pm = pm - P[i - 1].scaled(h(i - 1, m - 1) * t);
    }
    P.push_back(std::move(pm));
  }
  return P[n];
}

// ---------------------------------------------------------------------------
// Finite fields.

namespace {

const Ring* require_finite_field(const Poly& f) {
  const Ring* r = f.ring();
  if (r->kind() == RingKind::ModN && is_prime(r->modulus())) return r;
  if (r->kind() != RingKind::FiniteField) throw ValidationError("expected a finite field");
  return r;
}

Poly pth_root(const Poly& f) {
  const Ring* ring = f.ring();
  const int64_t p = ring->characteristic();
  // a^{1/p} = a^{q/p}
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(ring->degree() - 1));
  std::vector<Scalar> r;
  for (size_t i = 0; i < f.coeffs().size(); i += static_cast<size_t>(p)) {
    Scalar c = f.coeffs()[i];
    r.push_back(c.pow(e.get_si()));
  }
  return Poly(ring, std::move(r));
}

Poly random_poly(const Ring* ring, int deg_bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int64_t> dist(0, ring->order() - 1);
  std::vector<Scalar> c;
  for (int i = 0; i < deg_bound; ++i) c.push_back(Scalar::from_code(ring, dist(rng)));
  return Poly(ring, std::move(c));
}

}  // namespace

std::vector<Factor> squarefree_decomposition(const Poly& f0) {
  const Ring* ring = f0.ring();
  std::vector<Factor> out;
  if (f0.degree() <= 0) return out;
  Poly f = f0.monic();
  const bool finite = ring->is_finite();
  const int64_t p = ring->characteristic();
  std::function<void(const Poly&, int)> rec = [&](const Poly& g, int mult) {
    Poly c = gcd(g, g.derivative());
    Poly w = g / c;
    int i = 1;
    while (w.degree() > 0) {
      Poly y = gcd(w, c);
      Poly fac = w / y;
      if (fac.degree() > 0) out.push_back({fac.monic(), i * mult});
      w = y;
      c = c / y;
      ++i;
    }
    if (c.degree() > 0) {
      if (!finite) throw InternalError("squarefree decomposition did not terminate in characteristic 0");
      rec(pth_root(c.monic()), mult * static_cast<int>(p));
    }
  };
  rec(f, 1);
  // merge equal factors (can happen through the p-th root branch)
  std::vector<Factor> merged;
  for (auto& fac : out) {
    bool found = false;
    for (auto& m : merged)
      if (m.poly == fac.poly) {
        m.multiplicity += fac.multiplicity;
        found = true;
      }
    if (!found) merged.push_back(fac);
  }
  return merged;
}

std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f0) {
  const Ring* ring = require_finite_field(f0);
  std::vector<std::pair<Poly, int>> out;
  Poly f = f0.monic();
  const Poly x = Poly::x(ring);
  Poly h = x % f;
  const mpz_class q(static_cast<long>(ring->order()));
  int d = 0;
  while (f.degree() >= 2 * (d + 1)) {
    ++d;
    h = powmod(h, q, f);
    Poly g = gcd(h - x, f);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, f.degree());
  return out;
}

std::vector<Poly> equal_degree(const Poly& f0, int d, std::mt19937_64& rng) {
  const Ring* ring = require_finite_field(f0);
  Poly f = f0.monic();
  if (f.degree() == d) return {f};
  if (f.degree() % d != 0) throw InternalError("equal-degree input has wrong degree");
  const int64_t p = ring->characteristic();
  mpz_class qd;
  mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned long>(ring->order()), static_cast<unsigned long>(d));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Poly a = random_poly(ring, f.degree(), rng);
    if (a.degree() <= 0) continue;
    Poly b(ring);
    if (p == 2) {
      // trace map a + a^2 + ... + a^{2^{rd-1}}
      const int k = ring->degree() * d;
      Poly t = a % f;
      b = t;
      for (int i = 1; i < k; ++i) {
        t = (t * t) % f;
        b = b + t;
      }
    } else {
      b = powmod(a, mpz_class((qd - 1) / 2), f) - Poly::constant(Scalar::one(ring));
    }
    Poly g = gcd(b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      auto left = equal_degree(g, d, rng);
      auto right = equal_degree(f / g, d, rng);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
  }
  throw InternalError("equal-degree splitting failed to converge");
}

namespace {

void sort_factors(std::vector<Factor>& fs) {
  std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) {
    if (a.poly != b.poly) return a.poly.less(b.poly);
    return a.multiplicity < b.multiplicity;
  });
}

Factorization factor_finite(const Poly& f) {
  Factorization out{f.lead(), {}, true};
  std::mt19937_64 rng(0x5eed);
  for (const auto& sq : squarefree_decomposition(f)) {
    for (const auto& [g, d] : distinct_degree(sq.poly)) {
      for (auto& irr : equal_degree(g, d, rng)) out.factors.push_back({irr, sq.multiplicity});
    }
  }
  sort_factors(out.factors);
  return out;
}

// ---------------------------------------------------------------------------
// Integer polynomials for factoring over Q.

using ZPoly = std::vector<mpz_class>;

void ztrim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int zdeg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ztrim(r);
  return r;
}

void zmod_sym(ZPoly& f, const mpz_class& m) {
  const mpz_class half = m / 2;
  for (auto& c : f) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
  }
  ztrim(f);
}

void zmod_pos(ZPoly& f, const mpz_class& m) {
  for (auto& c : f) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  ztrim(f);
}

mpz_class zcontent(const ZPoly& f) {
  mpz_class g = 0;
  for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

ZPoly zprimitive(ZPoly f) {
  const mpz_class g = zcontent(f);
  if (g == 0) return f;
  for (auto& c : f) c /= g;
  if (!f.empty() && f.back() < 0)
    for (auto& c : f) c = -c;
  return f;
}

// Exact division over Z; returns false if b does not divide a.
bool zdivides(const ZPoly& a, const ZPoly& b, ZPoly& q) {
  ZPoly r = a;
  const int db = zdeg(b);
  if (zdeg(a) < db) return a.empty();
  q.assign(static_cast<size_t>(zdeg(a) - db + 1), 0);
  for (int i = zdeg(a); i >= db; --i) {
    mpz_class c = r[static_cast<size_t>(i)];
    if (c == 0) continue;
    if (!mpz_divisible_p(c.get_mpz_t(), b.back().get_mpz_t())) return false;
    c /= b.back();
    q[static_cast<size_t>(i - db)] = c;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i - db + j)] -= c * b[static_cast<size_t>(j)];
  }
  ztrim(r);
  ztrim(q);
  return r.empty();
}

Poly z_to_fp(const ZPoly& f, const Ring* fp) {
  std::vector<Scalar> c;
  for (const auto& x : f) c.emplace_back(fp, x);
  return Poly(fp, std::move(c));
}

ZPoly fp_to_z(const Poly& f) {
  ZPoly r;
  for (const auto& c : f.coeffs()) r.emplace_back(static_cast<long>(c.code()));
  ztrim(r);
  return r;
}

// Extended Euclid over F_p: s*a + t*b = 1.
void fp_bezout(const Poly& a, const Poly& b, Poly& s, Poly& t) {
  const Ring* ring = a.ring();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(Scalar::one(ring)), s1(ring);
  Poly t0(ring), t1 = Poly::constant(Scalar::one(ring));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = r1;
    r1 = r;
    Poly ns = s0 - q * s1;
    s0 = s1;
    s1 = ns;
    Poly nt = t0 - q * t1;
    t0 = t1;
    t1 = nt;
  }
  if (r0.degree() != 0) throw InternalError("Hensel factors not coprime");
  const Scalar inv = r0.lead().inv();
  s = s0.scaled(inv);
  t = t0.scaled(inv);
}

// Lift F == lc * A * B (mod p) to modulus p^k, A and B monic. Result
// coefficients are in [0, p^k).
void hensel_two(const ZPoly& F, Poly A, Poly B, const Ring* fp, int k, ZPoly& Aout, ZPoly& Bout) {
  const long p = static_cast<long>(fp->modulus());
  Poly s(fp), t(fp);
  fp_bezout(A, B, s, t);
  ZPoly a = fp_to_z(A), b = fp_to_z(B);
  const mpz_class lc = F.back();
  const Scalar lc_inv = Scalar(fp, lc).inv();
  mpz_class m = p;
  for (int step = 1; step < k; ++step) {
    ZPoly prod = zmul(a, b);
    for (auto& c : prod) c *= lc;
    ZPoly e = F;
    e.resize(std::max(e.size(), prod.size()), 0);
    for (size_t i = 0; i < prod.size(); ++i) e[i] -= prod[i];
    ztrim(e);
    for (auto& c : e) {
      if (!mpz_divisible_p(c.get_mpz_t(), m.get_mpz_t())) throw InternalError("Hensel invariant broken");
      c /= m;
    }
    Poly ep = z_to_fp(e, fp).scaled(lc_inv);
    Poly Ap = z_to_fp(a, fp), Bp = z_to_fp(b, fp);
    Poly dA = (t * ep) % Ap;
    Poly dB = (ep - Bp * dA) / Ap;
    ZPoly za = fp_to_z(dA), zb = fp_to_z(dB);
    a.resize(std::max(a.size(), za.size()), 0);
    b.resize(std::max(b.size(), zb.size()), 0);
    for (size_t i = 0; i < za.size(); ++i) a[i] += m * za[i];
    for (size_t i = 0; i < zb.size(); ++i) b[i] += m * zb[i];
    m *= p;
    zmod_pos(a, m);
    zmod_pos(b, m);
  }
  Aout = a;
  Bout = b;
}

// Lift all monic factors of F mod p to mod p^k.
std::vector<ZPoly> hensel_multi(const ZPoly& F, const std::vector<Poly>& facs, const Ring* fp, int k) {
  if (facs.size() == 1) {
    // F / lc mod p^k
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(fp->modulus()), static_cast<unsigned long>(k));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), F.back().get_mpz_t(), m.get_mpz_t());
    ZPoly r = F;
    for (auto& c : r) c *= inv;
    zmod_pos(r, m);
    return {r};
  }
  Poly A = facs[0];
  Poly B = Poly::constant(Scalar::one(fp));
  for (size_t i = 1; i < facs.size(); ++i) B = B * facs[i];
  ZPoly a, b;
  hensel_two(F, A, B, fp, k, a, b);
  std::vector<Poly> rest(facs.begin() + 1, facs.end());
  // b is monic mod p^k; lift the remaining factors against it.
  auto tail = hensel_multi(b, rest, fp, k);
  tail.insert(tail.begin(), a);
  return tail;
}

std::vector<ZPoly> zassenhaus(const ZPoly& G) {
  const int n = zdeg(G);
  if (n <= 1) return {G};
  const mpz_class lc = G.back();
  // choose a good prime with few modular factors
  ZPoly dG;
  for (size_t i = 1; i < G.size(); ++i) dG.push_back(G[i] * static_cast<long>(i));
  const Ring* best = nullptr;
  std::vector<Poly> best_facs;
  int good = 0;
  for (int64_t p = 3; good < 6 && p < 10000; p += 2) {
    if (!is_prime(p)) continue;
    if (mpz_divisible_ui_p(lc.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    const Ring* fp = Ring::finite_field(p, 1);
    Poly gp = z_to_fp(G, fp), dgp = z_to_fp(dG, fp);
    if (gcd(gp, dgp).degree() != 0) continue;
    ++good;
    Factorization fz = factor_finite(gp);
    std::vector<Poly> facs;
    for (auto& f : fz.factors) facs.push_back(f.poly);
    if (facs.size() == 1) return {G};
    if (!best || facs.size() < best_facs.size()) {
      best = fp;
      best_facs = facs;
    }
  }
  if (!best) throw InternalError("no suitable prime for Zassenhaus");
  // coefficient bound: |coeffs of lc*h| <= |lc| * 2^n * ||G||_2
  mpz_class norm2 = 0;
  for (const auto& c : G) norm2 += c * c;
  mpz_class norm;
  mpz_sqrt(norm.get_mpz_t(), norm2.get_mpz_t());
  norm += 1;
  mpz_class bound = abs(lc) * norm;
  bound <<= static_cast<unsigned>(n);
  bound = 2 * bound + 1;
  int k = 1;
  mpz_class m = best->modulus();
  while (m <= bound) {
    m *= best->modulus();
    ++k;
  }
  std::vector<ZPoly> lifted = hensel_multi(G, best_facs, best, k);

  std::vector<ZPoly> out;
  ZPoly cur = G;
  std::vector<ZPoly> remaining = lifted;
  size_t s = 1;
  while (2 * s <= remaining.size()) {
    bool found = false;
    std::vector<size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      ZPoly h{cur.back()};
      for (size_t i : idx) {
        h = zmul(h, remaining[i]);
        zmod_sym(h, m);
      }
      h = zprimitive(h);
      ZPoly q;
      if (zdeg(h) > 0 && zdivides(cur, h, q)) {
        out.push_back(h);
        cur = q;
        std::vector<ZPoly> rest;
        for (size_t i = 0; i < remaining.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest.push_back(remaining[i]);
        remaining = rest;
        found = true;
        break;
      }
      // next combination
      const size_t R = remaining.size();
      size_t i = s;
      while (i > 0 && idx[i - 1] == i - 1 + R - s) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (zdeg(cur) > 0) out.push_back(zprimitive(cur));
  return out;
}

Factorization factor_rational(const Poly& f) {
  const Ring* Q = f.ring();
  Factorization out{f.lead(), {}, true};
  for (const auto& sq : squarefree_decomposition(f)) {
    // clear denominators
    mpz_class den = 1;
    for (const auto& c : sq.poly.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.rational().get_den_mpz_t());
    ZPoly G;
    for (const auto& c : sq.poly.coeffs()) G.push_back(mpz_class(c.rational() * den));
    G = zprimitive(G);
    for (const auto& h : zassenhaus(G)) {
      std::vector<Scalar> c;
      for (const auto& x : h) c.emplace_back(Q, x);
      out.factors.push_back({Poly(Q, std::move(c)).monic(), sq.multiplicity});
    }
  }
  sort_factors(out.factors);
  return out;
}

}  // namespace

Factorization factor(const Poly& f) {
  if (f.is_zero()) throw MathError("cannot factor the zero polynomial");
  const Ring* ring = f.ring();
  if (f.degree() == 0) return {f.lead(), {}, true};
  if (ring->kind() == RingKind::Rational) return factor_rational(f);
  if (ring->kind() == RingKind::Integer) {
    Factorization q = factor_rational(f.converted(Ring::rationals()));
    return q;
  }
  return factor_finite(f);
}

std::vector<std::pair<Scalar, int>> roots(const Poly& f) {
  std::vector<std::pair<Scalar, int>> out;
  for (const auto& fac : factor(f).factors)
    if (fac.poly.degree() == 1) out.emplace_back(-fac.poly.coeff(0), fac.multiplicity);
  return out;
}

}  // namespace hecke::exact
