#include <algorithm>
#include <random>

#include "doctest.h"
#include "hecke/error.hpp"
#include "hecke/exact/hnf.hpp"
#include "hecke/exact/matrix.hpp"
#include "hecke/exact/poly.hpp"

using namespace hecke;
using namespace hecke::exact;

namespace {

ZMatrix zm(std::vector<std::vector<long>> rows) {
  ZMatrix r;
  for (auto& row : rows) {
    std::vector<mpz_class> v;
    for (long x : row) v.emplace_back(x);
    r.push_back(v);
  }
  return r;
}

// All 2x2 HNFs of determinant d, then pick the ones in the same left orbit.
ZMatrix brute_hnf2(const ZMatrix& m) {
  const mpz_class det = zmat_det(m);
  const long d = std::abs(det.get_si());
  for (long a = 1; a <= d; ++a) {
    if (d % a) continue;
    const long c = d / a;
    for (long b = 0; b < c; ++b) {
      // m * h^{-1} integral with det +-1?
      ZMatrix h = zm({{a, b}, {0, c}});
      ZMatrix adj = zm({{c, -b}, {0, a}});
      ZMatrix p = zmat_mul(m, adj);
      bool ok = true;
      for (auto& row : p)
        for (auto& x : row)
          if (x % d != 0) ok = false;
      if (ok) return h;
    }
  }
  return {};
}

}  // namespace

TEST_CASE("scalar basics") {
  const Ring* Q = Ring::rationals();
  Scalar a(Q, mpq_class(6, -4));
  CHECK(a.to_string() == "-3/2");
  const Ring* z6 = Ring::mod(6);
  CHECK((Scalar(z6, 5L) + Scalar(z6, 4L)).to_string() == "3");
  const Ring* f9 = Ring::finite_field(3, 2);
  // every nonzero element satisfies x^8 = 1
  for (int64_t c = 1; c < 9; ++c) CHECK(Scalar::from_code(f9, c).pow(8).is_one());
  // inverses
  for (int64_t c = 1; c < 9; ++c) {
    Scalar x = Scalar::from_code(f9, c);
    CHECK((x * x.inv()).is_one());
  }
  CHECK_THROWS_AS(Scalar(Q, 1L) + Scalar(z6, 1L), ValidationError);
}

TEST_CASE("defining polynomials are irreducible") {
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}, {5, 3}, {7, 2}}) {
    const Ring* F = Ring::finite_field(p, r);
    const auto& dp = F->defining_poly();
    REQUIRE(dp.size() == static_cast<size_t>(r + 1));
    // no root in the prime field and (for r <= 3) that suffices
    for (int x = 0; x < p; ++x) {
      long v = 0, pw = 1;
      for (size_t i = 0; i < dp.size(); ++i) {
        v = (v + dp[i] * pw) % p;
        pw = pw * x % p;
      }
      CHECK(v != 0);
    }
  }
}

TEST_CASE("hnf examples") {
  auto h1 = hermite(zm({{1, 0}, {0, 2}}));
  CHECK(h1.h == zm({{1, 0}, {0, 2}}));
  CHECK(h1.u == zmat_identity(2));
  auto h2 = hermite(zm({{0, -1}, {2, 0}}));
  CHECK(h2.h == zm({{2, 0}, {0, 1}}));
  CHECK(zmat_mul(h2.u, zm({{0, -1}, {2, 0}})) == h2.h);
  CHECK(brute_hnf2(zm({{0, -1}, {2, 0}})) == h2.h);
  CHECK(hermite(zm({{2, 0}, {0, 2}})).h == zm({{2, 0}, {0, 2}}));
  CHECK_THROWS_AS(hermite(zm({{1, 2}, {2, 4}})), MathError);
  try {
    hermite(zm({{1, 2}, {2, 4}}));
  } catch (const MathError& e) {
    CHECK(std::string(e.what()).find("singular") != std::string::npos);
  }
}

TEST_CASE("hnf invariant under random unimodular left factors") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> ent(-1000000, 1000000), small(-3, 3), pick(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = trial % 2 ? 3 : 2;
    ZMatrix m(n, std::vector<mpz_class>(n));
    do {
      for (auto& row : m)
        for (auto& x : row) x = ent(rng);
    } while (zmat_det(m) == 0);
    // random unimodular as a product of elementary matrices
    ZMatrix u = zmat_identity(n);
    for (int k = 0; k < 8; ++k) {
      ZMatrix e = zmat_identity(n);
      size_t i = pick(rng) % n, j = pick(rng) % n;
      if (i == j) j = (i + 1) % n;
      e[i][j] = small(rng);
      if (k % 3 == 0) std::swap(e[0], e[1]);
      u = zmat_mul(e, u);
    }
    auto a = hermite(m), b = hermite(zmat_mul(u, m));
    REQUIRE(a.h == b.h);
    REQUIRE(zmat_mul(a.u, m) == a.h);
    REQUIRE(abs(zmat_det(a.u)) == 1);
  }
}

TEST_CASE("hnf agrees with brute force for small 2x2") {
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b)
      for (long c = -4; c <= 4; c += 2)
        for (long d = -3; d <= 3; ++d) {
          ZMatrix m = zm({{a, b}, {c, d}});
          if (zmat_det(m) == 0) continue;
          REQUIRE(hermite(m).h == brute_hnf2(m));
        }
}

TEST_CASE("kernel basis") {
  const Ring* F5 = Ring::finite_field(5);
  auto k0 = kernel_basis(Matrix(F5, 2, 2));
  CHECK(k0.size() == 2);
  const Ring* Q = Ring::rationals();
  CHECK(kernel_basis(Matrix::identity(Q, 3)).empty());
  Matrix m = Matrix::from_ints(Q, {{1, 1}, {2, 2}});
  auto k = kernel_basis(m);
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] == -k[0][1]);
  CHECK(is_zero(mat_vec(m, k[0])));
  // random rank-nullity
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> e(-2, 2);
  for (int t = 0; t < 50; ++t) {
    Matrix r(F5, 4, 6);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 6; ++j) r(i, j) = Scalar(F5, e(rng));
    auto kb = kernel_basis(r);
    CHECK(kb.size() + rank(r) == 6);
    for (auto& v : kb) CHECK(is_zero(mat_vec(r, v)));
  }
  Matrix bad(F5, 1, 2);
  bad(0, 0) = Scalar(Q, 1L);
  CHECK_THROWS(kernel_basis(bad));
}

TEST_CASE("char poly and factorization") {
  const Ring* Q = Ring::rationals();
  Poly cp = char_poly(Matrix::identity(Q, 3));
  auto f = factor(cp);
  REQUIRE(f.factors.size() == 1);
  CHECK(f.factors[0].multiplicity == 3);
  CHECK(f.factors[0].poly == Poly::from_ints(Q, {-1, 1}));

  const Ring* F5 = Ring::finite_field(5);
  auto g = factor(Poly::from_ints(F5, {1, 0, 1}));
  REQUIRE(g.factors.size() == 2);
  // exhaustive root search oracle
  std::vector<long> rts;
  for (long x = 0; x < 5; ++x)
    if ((x * x + 1) % 5 == 0) rts.push_back(x);
  CHECK(rts == std::vector<long>{2, 3});
  std::vector<long> found;
  for (auto& [r, mult] : roots(Poly::from_ints(F5, {1, 0, 1}))) found.push_back(r.code());
  std::sort(found.begin(), found.end());
  CHECK(found == rts);

  auto h = factor(Poly::from_ints(Q, {1, 0, 1}));
  CHECK(h.factors.size() == 1);
  CHECK(h.certified);

  // char poly against a known companion matrix
  Matrix c = Matrix::from_ints(Q, {{0, 0, 6}, {1, 0, -11}, {0, 1, 6}});
  CHECK(char_poly(c) == Poly::from_ints(Q, {-6, 11, -6, 1}));
}

TEST_CASE("factor products reproduce the input") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> e(-9, 9);
  const Ring* Q = Ring::rationals();
  for (int t = 0; t < 60; ++t) {
    // product of random small factors, some repeated
    Poly p = Poly::constant(Scalar(Q, mpq_class(3, 7)));
    int nf = 1 + t % 4;
    for (int k = 0; k < nf; ++k) {
      std::vector<long> c;
      int d = 1 + (t + k) % 3;
      for (int i = 0; i < d; ++i) c.push_back(e(rng));
      c.push_back(1 + (k % 2));
      Poly q = Poly::from_ints(Q, c);
      p = p * q;
      if (k == 0 && t % 3 == 0) p = p * q;
    }
    auto f = factor(p);
    REQUIRE(f.product() == p);
    for (auto& fac : f.factors) CHECK(fac.poly.is_monic());
  }
  for (auto [pp, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {5, 1}, {2, 3}, {3, 2}, {5, 2}}) {
    const Ring* F = Ring::finite_field(pp, r);
    std::uniform_int_distribution<int64_t> code(0, F->order() - 1);
    for (int t = 0; t < 30; ++t) {
      std::vector<Scalar> c;
      int d = 1 + t % 9;
      for (int i = 0; i < d; ++i) c.push_back(Scalar::from_code(F, code(rng)));
      c.push_back(Scalar::from_code(F, 1 + code(rng) % (F->order() - 1)));
      Poly q(F, c);
      Poly p = q * q * Poly::x(F);
      auto f = factor(p);
      REQUIRE(f.product() == p);
      for (auto& fac : f.factors) {
        // irreducible: no nontrivial factor in distinct-degree split beyond itself
        auto dd = distinct_degree(fac.poly);
        REQUIRE(dd.size() == 1);
        CHECK(dd[0].second == fac.poly.degree());
      }
    }
  }
}

TEST_CASE("rational factorization of a high-degree product") {
  const Ring* Q = Ring::rationals();
  // (x^4 - 10x^2 + 1)(x^6 + x + 1)(x - 2049)(x + 24)^2: Swinnerton-Dyer factor splits mod every prime
  Poly a = Poly::from_ints(Q, {1, 0, -10, 0, 1});
  Poly b = Poly::from_ints(Q, {1, 1, 0, 0, 0, 0, 1});
  Poly c = Poly::from_ints(Q, {-2049, 1});
  Poly d = Poly::from_ints(Q, {24, 1});
  Poly p = a * b * c * d * d;
  auto f = factor(p);
  CHECK(f.product() == p);
  CHECK(f.factors.size() == 4);
  auto rts = roots(p);
  CHECK(rts.size() == 2);
}
