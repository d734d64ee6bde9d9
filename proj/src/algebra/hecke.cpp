#include "hecke/algebra/hecke.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hecke/error.hpp"

namespace hecke::algebra {

using modgroup::gcd64;
using modgroup::SignPolicy;

bool is_prime64(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
  std::vector<std::pair<int64_t, int>> r;
  if (n < 0) n = -n;
  for (int64_t d = 2; d * d <= n; ++d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) r.emplace_back(d, e);
  }
  if (n > 1) r.emplace_back(n, 1);
  return r;
}

CosetKey coset_key(const GroupDescriptor& gamma, const GMat& g) {
  auto split = modgroup::hnf_split(g);
  if (g.n() == 3) {
    if (gamma.level() != 1) throw ValidationError("3x3 coset arithmetic is only available at level 1");
    return {0, split.h};
  }
  return {modgroup::presented_group(gamma).cosets().lookup(split.u), split.h};
}

GMat coset_rep(const GroupDescriptor& gamma, const CosetKey& k) {
  if (k.h.n() == 3) return k.h;
  return modgroup::presented_group(gamma).cosets().reps()[k.coset] * k.h;
}

// ---------------------------------------------------------------------------

DoubleCosetSum::DoubleCosetSum(GroupDescriptor left, GroupDescriptor right, int n)
    : left_(std::move(left)), right_(std::move(right)), n_(n) {
  if (n != 2 && n != 3) throw ValidationError("only n = 2 and n = 3 are supported");
  if (n == 3 && (left_.level() != 1 || right_.level() != 1))
    throw ValidationError("3x3 coset arithmetic is only available at level 1");
}

void DoubleCosetSum::add(const mpz_class& c, const GMat& g) {
  if (c == 0) return;
  if (g.n() != n_) throw ValidationError("matrix size does not match the algebra");
  CosetKey k = coset_key(left_, g);
  auto it = index_.find(k);
  if (it == index_.end()) {
    // keep terms sorted by key
    auto pos = std::lower_bound(keys_.begin(), keys_.end(), k);
    const size_t at = static_cast<size_t>(pos - keys_.begin());
    keys_.insert(pos, k);
    terms_.insert(terms_.begin() + static_cast<long>(at), Term{c, coset_rep(left_, k)});
    for (size_t i = at; i < keys_.size(); ++i) index_[keys_[i]] = i;
    return;
  }
  Term& t = terms_[it->second];
  t.coeff += c;
  if (t.coeff == 0) {
    const size_t at = it->second;
    index_.erase(it);
    keys_.erase(keys_.begin() + static_cast<long>(at));
    terms_.erase(terms_.begin() + static_cast<long>(at));
    for (size_t i = at; i < keys_.size(); ++i) index_[keys_[i]] = i;
  }
}

void DoubleCosetSum::check_same(const DoubleCosetSum& o) const {
  if (n_ != o.n_ || left_ != o.left_ || right_ != o.right_) throw ValidationError("double coset sums over different groups");
}

DoubleCosetSum DoubleCosetSum::operator+(const DoubleCosetSum& o) const {
  check_same(o);
  DoubleCosetSum r = *this;
  for (const auto& t : o.terms_) r.add(t.coeff, t.rep);
  return r;
}

DoubleCosetSum DoubleCosetSum::operator-(const DoubleCosetSum& o) const { return *this + o.scaled(-1); }

DoubleCosetSum DoubleCosetSum::scaled(const mpz_class& c) const {
  DoubleCosetSum r(left_, right_, n_);
  if (c == 0) return r;
  r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

bool DoubleCosetSum::operator==(const DoubleCosetSum& o) const {
  if (n_ != o.n_ || left_ != o.left_ || right_ != o.right_ || keys_ != o.keys_) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

bool DoubleCosetSum::right_invariant() const {
  for (size_t i = 0; i < terms_.size(); ++i)
    for (const auto& g : group_generators(right_, n_)) {
      auto it = index_.find(coset_key(left_, terms_[i].rep * g));
      if (it == index_.end() || terms_[it->second].coeff != terms_[i].coeff) return false;
    }
  return true;
}

std::string DoubleCosetSum::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " + ";
    os << terms_[i].coeff.get_str() << "*" << terms_[i].rep.to_string();
  }
  return terms_.empty() ? "0" : os.str();
}

// ---------------------------------------------------------------------------

std::vector<GMat> group_generators(const GroupDescriptor& g, int n) {
  if (n == 2) return modgroup::presented_group(g).presentation().gens;
  if (g.level() != 1) throw ValidationError("3x3 coset arithmetic is only available at level 1");
  std::vector<GMat> gens;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      GMat e = GMat::identity(3);
      e.at(i, j) = 1;
      gens.push_back(e);
    }
  if (g.sign_policy() == SignPolicy::GL) gens.push_back(GMat::diag({-1, 1, 1}));
  return gens;
}

namespace {

void check_det(const GroupDescriptor& g, const GMat& delta) {
  const int64_t d = delta.det();
  if (d == 0) throw MathError("singular");
  if (gcd64(d, g.level()) != 1) throw MathError("determinant not prime to level");
  if (delta.n() == 2 && g.sign_policy() == SignPolicy::SL && d < 0)
    throw MathError("negative determinant under the SL sign policy");
}

}  // namespace

DoubleCosetSum decompose(const GroupDescriptor& gamma, const GMat& delta, const GroupDescriptor& gamma_prime) {
  const int n = delta.n();
  check_det(gamma, delta);
  check_det(gamma_prime, delta);
  DoubleCosetSum out(gamma, gamma_prime, n);
  const auto gens = group_generators(gamma_prime, n);
  std::set<CosetKey> seen;
  std::deque<GMat> queue;
  CosetKey k0 = coset_key(gamma, delta);
  seen.insert(k0);
  queue.push_back(coset_rep(gamma, k0));
  while (!queue.empty()) {
    GMat g = queue.front();
    queue.pop_front();
    for (const auto& x : gens) {
      CosetKey k = coset_key(gamma, g * x);
      if (seen.insert(k).second) queue.push_back(coset_rep(gamma, k));
    }
    if (seen.size() > 200000) throw MathError("double coset does not decompose into finitely many cosets");
  }
  for (const auto& k : seen) out.add(1, coset_rep(gamma, k));
  return out;
}

DoubleCosetSum identity_sum(const GroupDescriptor& gamma, int n) {
  DoubleCosetSum r(gamma, gamma, n);
  r.add(1, GMat::identity(n));
  return r;
}

std::vector<Term> compose_unmerged(const DoubleCosetSum& a, const DoubleCosetSum& b) {
  if (a.n() != b.n() || a.right() != b.left()) throw ValidationError("composition needs matching middle groups");
  std::vector<Term> out;
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) out.push_back({x.coeff * y.coeff, x.rep * y.rep});
  return out;
}

DoubleCosetSum compose(const DoubleCosetSum& a, const DoubleCosetSum& b) {
  auto prods = compose_unmerged(a, b);
  DoubleCosetSum r(a.left(), b.right(), a.n());
  for (const auto& t : prods) r.add(t.coeff, t.rep);
  return r;
}

std::vector<std::pair<mpz_class, GMat>> double_coset_components(const DoubleCosetSum& t) {
  std::vector<std::pair<mpz_class, GMat>> out;
  DoubleCosetSum rest = t;
  size_t guard = 0;
  while (!rest.empty()) {
    if (++guard > 10000) throw ValidationError("sum is not right invariant");
    const Term first = rest.terms().front();
    DoubleCosetSum d = decompose(t.left(), first.rep, t.right());
    out.emplace_back(first.coeff, first.rep);
    rest = rest - d.scaled(first.coeff);
  }
  return out;
}

DoubleCosetSum hecke_tp(int64_t p, int m, int n, const GroupDescriptor& gamma) {
  if (!is_prime64(p)) throw ValidationError("p must be prime");
  if (m < 1 || m > n) throw ValidationError("m must satisfy 1 <= m <= n");
  if (gcd64(p, gamma.level()) != 1) throw MathError("determinant not prime to level");
  std::vector<int64_t> d(static_cast<size_t>(n), 1);
  for (int i = n - m; i < n; ++i) d[static_cast<size_t>(i)] = p;
  return decompose(gamma, GMat::diag(d), gamma);
}

std::vector<std::vector<int64_t>> elementary_divisor_types(int64_t a, int n) {
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> cur;
  // d_1 | d_2 | ... | d_n, product a
  std::function<void(int64_t, int64_t)> rec = [&](int64_t rem, int64_t last) {
    const int left = n - static_cast<int>(cur.size());
    if (left == 1) {
      if (rem % last == 0) {
        cur.push_back(rem);
        out.push_back(cur);
        cur.pop_back();
      }
      return;
    }
    for (int64_t d = last; d <= rem; d += last) {
      if (rem % d) continue;
      // remaining entries are multiples of d
      int64_t pw = 1;
      bool ok = true;
      for (int i = 0; i < left; ++i) {
        if (pw > rem / d) {
          ok = false;
          break;
        }
        pw *= d;
      }
      if (!ok || rem % pw) continue;
      cur.push_back(d);
      rec(rem / d, d);
      cur.pop_back();
    }
  };
  if (a < 1) throw ValidationError("a must be positive");
  rec(a, 1);
  return out;
}

DoubleCosetSum hecke_ta(int64_t a, const GroupDescriptor& gamma, int n) {
  if (a < 1) throw ValidationError("a must be positive");
  if (gcd64(a, gamma.level()) != 1) throw MathError("determinant not prime to level");
  DoubleCosetSum r(gamma, gamma, n);
  for (const auto& type : elementary_divisor_types(a, n)) r = r + decompose(gamma, GMat::diag(type), gamma);
  return r;
}

mpz_class degree(const DoubleCosetSum& t) {
  mpz_class d = 0;
  for (const auto& x : t.terms()) d += x.coeff;
  return d;
}

mpz_class degree_formula(int64_t p, int m, int n) {
  mpz_class num = 1, den = 1, P = static_cast<long>(p);
  for (int i = 0; i < m; ++i) {
    mpz_class pn, pi, pm;
    mpz_pow_ui(pn.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(pi.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(i));
    mpz_pow_ui(pm.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(m));
    num *= pn - pi;
    den *= pm - pi;
  }
  return num / den;
}

std::vector<DoubleCosetSum> series_coefficients(int64_t p, int n, int k_max, const GroupDescriptor& gamma) {
  std::vector<DoubleCosetSum> A;
  A.push_back(identity_sum(gamma, n));
  for (int j = 1; j <= n; ++j) {
    mpz_class c;
    mpz_ui_pow_ui(c.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(j * (j - 1) / 2));
    if (j % 2) c = -c;
    A.push_back(hecke_tp(p, j, n, gamma).scaled(c));
  }
  std::vector<DoubleCosetSum> B;
  int64_t pk = 1;
  for (int k = 0; k <= k_max; ++k) {
    B.push_back(k == 0 ? identity_sum(gamma, n) : hecke_ta(pk, gamma, n));
    pk *= p;
  }
  std::vector<DoubleCosetSum> out;
  for (int k = 0; k <= k_max; ++k) {
    DoubleCosetSum c(gamma, gamma, n);
    for (int j = 0; j <= std::min(k, n); ++j) c = c + compose(A[static_cast<size_t>(j)], B[static_cast<size_t>(k - j)]);
    out.push_back(c);
  }
  return out;
}

bool series_check(int64_t p, int n, int k_max, const GroupDescriptor& gamma) {
  auto coeffs = series_coefficients(p, n, k_max, gamma);
  if (coeffs[0] != identity_sum(gamma, n)) return false;
  for (size_t k = 1; k < coeffs.size(); ++k)
    if (!coeffs[k].empty()) return false;
  return true;
}

bool series_check(int64_t p, int n, int k_max) { return series_check(p, n, k_max, GroupDescriptor::full(1)); }

// ---------------------------------------------------------------------------

namespace {

struct FiniteImage {
  int64_t N;
  std::unordered_set<int64_t> set;
  int64_t key(int s, const GMat& m) const {
    return (s < 0 ? 1 : 0) * N * N * N * N + ((m.a() * N + m.b()) * N + m.c()) * N + m.d();
  }
};

std::vector<int> allowed_signs(const GroupDescriptor& g) {
  return g.sign_policy() == SignPolicy::SL ? std::vector<int>{1} : std::vector<int>{1, -1};
}

}  // namespace

bool check_compatible(const GroupDescriptor& inner0, const GroupDescriptor& outer0) {
  int64_t N = std::max(inner0.level(), outer0.level());
  if (N % inner0.level() || N % outer0.level()) throw MathError("incompatible levels");
  const GroupDescriptor inner = inner0.lift(N), outer = outer0.lift(N);
  auto mulmod = [N](const GMat& x, const GMat& y) { return (x * y).reduced(N); };
  const int64_t one = 1 % N, minus = (N - 1) % N;
  auto unit_image = [&](const GroupDescriptor& g) {
    FiniteImage im{N, {}};
    for (const auto& h : g.h_elements())
      for (int s : allowed_signs(g)) {
        const int64_t d = modgroup::mod_pos(h.det(), N);
        if (d == (s > 0 ? one : minus)) im.set.insert(im.key(s, h));
      }
    return im;
  };
  auto semigroup_image = [&](const GroupDescriptor& g) {
    FiniteImage im{N, {}};
    for (const auto& h : g.h_elements())
      for (int s : allowed_signs(g)) im.set.insert(im.key(s, h));
    return im;
  };
  // pi(Gamma) = pi(Gamma') cap pi(Delta) pi(Delta)^{-1}; the latter is signs x H
  FiniteImage g_in = unit_image(inner), g_out = unit_image(outer), dd = semigroup_image(inner);
  FiniteImage inter{N, {}};
  for (int64_t k : g_out.set)
    if (dd.set.count(k)) inter.set.insert(k);
  if (inter.set != g_in.set) return false;
  // pi(Gamma') pi(Delta) = pi(Delta')
  FiniteImage prod{N, {}};
  std::vector<std::pair<int, GMat>> gout_el;
  for (const auto& h : outer.h_elements())
    for (int s : allowed_signs(outer))
      if (g_out.set.count(g_out.key(s, h))) gout_el.emplace_back(s, h);
  for (const auto& [s, g] : gout_el)
    for (const auto& h : inner.h_elements())
      for (int t : allowed_signs(inner)) prod.set.insert(prod.key(s * t, mulmod(g, h)));
  return prod.set == semigroup_image(outer).set;
}

}  // namespace hecke::algebra
