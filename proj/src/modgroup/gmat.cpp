#include "hecke/modgroup/gmat.hpp"

#include <sstream>

#include "hecke/error.hpp"

namespace hecke::modgroup {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw InternalError("integer overflow in matrix arithmetic");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw InternalError("integer overflow in matrix arithmetic");
  return r;
}

int64_t mod_pos(int64_t a, int64_t n) {
  int64_t r = a % n;
  return r < 0 ? r + n : r;
}

GMat::GMat(int n) : n_(n) {
  if (n != 2 && n != 3) throw ValidationError("only 2x2 and 3x3 matrices are supported");
}

GMat GMat::identity(int n) {
  GMat g(n);
  for (int i = 0; i < n; ++i) g.at(i, i) = 1;
  return g;
}

GMat GMat::of(int64_t a, int64_t b, int64_t c, int64_t d) {
  GMat g(2);
  g.e_[0] = a;
  g.e_[1] = b;
  g.e_[2] = c;
  g.e_[3] = d;
  return g;
}

GMat GMat::diag(const std::vector<int64_t>& d) {
  GMat g(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) g.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return g;
}

GMat GMat::from_rows(const std::vector<std::vector<int64_t>>& rows) {
  GMat g(static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ValidationError("matrix must be square");
    for (size_t j = 0; j < rows.size(); ++j) g.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return g;
}

int64_t GMat::det() const {
  if (n_ == 2) return checked_add(checked_mul(e_[0], e_[3]), -checked_mul(e_[1], e_[2]));
  const auto& m = *this;
  int64_t r = 0;
  for (int j = 0; j < 3; ++j) {
    int64_t minor = checked_add(checked_mul(m(1, (j + 1) % 3), m(2, (j + 2) % 3)),
                                -checked_mul(m(1, (j + 2) % 3), m(2, (j + 1) % 3)));
    r = checked_add(r, checked_mul(m(0, j), minor));
  }
  return r;
}

GMat GMat::operator*(const GMat& o) const {
  if (n_ != o.n_) throw ValidationError("matrix size mismatch");
  GMat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      int64_t s = 0;
      for (int k = 0; k < n_; ++k) s = checked_add(s, checked_mul((*this)(i, k), o(k, j)));
      r.at(i, j) = s;
    }
  return r;
}

GMat GMat::operator-() const {
  GMat r(n_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = -e_[i];
  return r;
}

GMat GMat::adjugate() const {
  GMat r(n_);
  if (n_ == 2) {
    r.e_[0] = e_[3];
    r.e_[1] = -e_[1];
    r.e_[2] = -e_[2];
    r.e_[3] = e_[0];
    return r;
  }
  const auto& m = *this;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // cofactor C_ji goes to (i, j)
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r.at(i, j) = checked_add(checked_mul(m(r0, c0), m(r1, c1)), -checked_mul(m(r0, c1), m(r1, c0)));
    }
  return r;
}

GMat GMat::inverse() const {
  const int64_t d = det();
  if (d != 1 && d != -1) throw MathError("matrix is not invertible over Z");
  GMat a = adjugate();
  if (d == -1) a = -a;
  return a;
}

std::optional<GMat> GMat::div_right(const GMat& o) const {
  const int64_t d = o.det();
  if (d == 0) throw MathError("singular");
  GMat p = (*this) * o.adjugate();
  for (auto& x : p.e_) {
    if (x % d != 0) return std::nullopt;
    x /= d;
  }
  return p;
}

GMat GMat::reduced(int64_t N) const {
  GMat r(n_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = mod_pos(e_[i], N);
  return r;
}

exact::ZMatrix GMat::to_z() const {
  exact::ZMatrix z(static_cast<size_t>(n_), std::vector<mpz_class>(static_cast<size_t>(n_)));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) z[static_cast<size_t>(i)][static_cast<size_t>(j)] = static_cast<long>((*this)(i, j));
  return z;
}

GMat GMat::from_z(const exact::ZMatrix& m) {
  GMat g(static_cast<int>(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j) {
      if (!m[i][j].fits_slong_p()) throw InternalError("matrix entry exceeds 64 bits");
      g.at(static_cast<int>(i), static_cast<int>(j)) = m[i][j].get_si();
    }
  return g;
}

std::vector<std::vector<int64_t>> GMat::rows() const {
  std::vector<std::vector<int64_t>> r(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[static_cast<size_t>(i)].push_back((*this)(i, j));
  return r;
}

std::string GMat::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < n_; ++i) {
    if (i) os << ";";
    for (int j = 0; j < n_; ++j) os << (j ? "," : "") << (*this)(i, j);
  }
  os << ")";
  return os.str();
}

HnfSplit hnf_split(const GMat& m) {
  auto hf = exact::hermite(m.to_z());
  GMat U = GMat::from_z(hf.u);
  return {U.inverse(), GMat::from_z(hf.h)};
}

size_t GMatHash::operator()(const GMat& g) const {
  uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      h ^= static_cast<uint64_t>(g(i, j));
      h *= 1099511628211ull;
    }
  return static_cast<size_t>(h);
}

}  // namespace hecke::modgroup
