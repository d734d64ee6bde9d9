#pragma once

#include <gmpxx.h>

#include <vector>

namespace hecke::exact {

using ZMatrix = std::vector<std::vector<mpz_class>>;

struct HermiteForm {
  ZMatrix h;  // upper triangular, positive diagonal, 0 <= h[i][j] < h[j][j] for i < j
  ZMatrix u;  // unimodular, u * m == h
};

// Row-style Hermite normal form of a square nonsingular integer matrix.
HermiteForm hermite(const ZMatrix& m);

ZMatrix zmat_mul(const ZMatrix& a, const ZMatrix& b);
ZMatrix zmat_identity(size_t n);
mpz_class zmat_det(const ZMatrix& m);

}  // namespace hecke::exact
