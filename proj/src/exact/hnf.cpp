#include "hecke/exact/hnf.hpp"

#include "hecke/error.hpp"

namespace hecke::exact {

ZMatrix zmat_identity(size_t n) {
  ZMatrix r(n, std::vector<mpz_class>(n, 0));
  for (size_t i = 0; i < n; ++i) r[i][i] = 1;
  return r;
}

ZMatrix zmat_mul(const ZMatrix& a, const ZMatrix& b) {
  const size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  ZMatrix r(n, std::vector<mpz_class>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
  return r;
}

mpz_class zmat_det(const ZMatrix& m) {
  // Bareiss fraction-free elimination
  const size_t n = m.size();
  if (n == 0) return 1;
  ZMatrix a = m;
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

namespace {

void row_combine(ZMatrix& a, size_t dst, size_t src, const mpz_class& f) {
  // a[dst] -= f * a[src]
  for (size_t j = 0; j < a[dst].size(); ++j) a[dst][j] -= f * a[src][j];
}

}  // namespace

HermiteForm hermite(const ZMatrix& m) {
  const size_t n = m.size();
  for (const auto& r : m)
    if (r.size() != n) throw ValidationError("hermite form needs a square matrix");
  HermiteForm out{m, zmat_identity(n)};
  ZMatrix& h = out.h;
  ZMatrix& u = out.u;
  for (size_t j = 0; j < n; ++j) {
    // Euclid on column j among rows j..n-1
    while (true) {
      size_t piv = n;
      for (size_t i = j; i < n; ++i)
        if (h[i][j] != 0 && (piv == n || abs(h[i][j]) < abs(h[piv][j]))) piv = i;
      if (piv == n) throw MathError("hermite form of a singular matrix");
      if (piv != j) {
        std::swap(h[piv], h[j]);
        std::swap(u[piv], u[j]);
      }
      bool done = true;
      for (size_t i = j + 1; i < n; ++i) {
        if (h[i][j] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), h[i][j].get_mpz_t(), h[j][j].get_mpz_t());
        row_combine(h, i, j, q);
        row_combine(u, i, j, q);
        if (h[i][j] != 0) done = false;
      }
      if (done) break;
    }
    if (h[j][j] < 0) {
      for (auto& c : h[j]) c = -c;
      for (auto& c : u[j]) c = -c;
    }
    for (size_t i = 0; i < j; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), h[i][j].get_mpz_t(), h[j][j].get_mpz_t());
      if (q == 0) continue;
      row_combine(h, i, j, q);
      row_combine(u, i, j, q);
    }
  }
  return out;
}

}  // namespace hecke::exact
