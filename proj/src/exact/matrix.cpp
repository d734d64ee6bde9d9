#include "hecke/exact/matrix.hpp"

#include <sstream>

#include "hecke/error.hpp"

namespace hecke::exact {

Vector zero_vector(const Ring* ring, size_t n) { return Vector(n, Scalar::zero(ring)); }

Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ValidationError("vector length mismatch");
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ValidationError("vector length mismatch");
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector scale(const Scalar& c, const Vector& a) {
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

void axpy(Vector& a, const Scalar& c, const Vector& b) {
  if (a.size() != b.size()) throw ValidationError("vector length mismatch");
  if (c.is_zero()) return;
  for (size_t i = 0; i < a.size(); ++i)
    if (!b[i].is_zero()) a[i] += c * b[i];
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Matrix::Matrix(const Ring* ring, size_t rows, size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(ring)) {}

Matrix Matrix::identity(const Ring* ring, size_t n) {
  Matrix m(ring, n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(ring);
  return m;
}

Matrix Matrix::from_rows(const Ring* ring, const std::vector<Vector>& rows, size_t cols) {
  Matrix m(ring, rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

Matrix Matrix::from_ints(const Ring* ring, const std::vector<std::vector<long>>& rows) {
  const size_t c = rows.empty() ? 0 : rows[0].size();
  Matrix m(ring, rows.size(), c);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw ValidationError("ragged matrix");
    for (size_t j = 0; j < c; ++j) m(i, j) = Scalar(ring, rows[i][j]);
  }
  return m;
}

Vector Matrix::row(size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void Matrix::set_row(size_t i, const Vector& v) {
  if (v.size() != cols_) throw ValidationError("row length mismatch");
  for (size_t j = 0; j < cols_; ++j) {
    if (v[j].ring() != ring_) throw ValidationError("mixed rings in matrix");
    (*this)(i, j) = v[j];
  }
}

std::vector<Vector> Matrix::row_list() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw ValidationError("matrix shape mismatch in product");
  if (ring_ != o.ring_ && rows_ * cols_ * o.cols_ != 0) throw ValidationError("mixed rings in product");
  Matrix r(ring_ ? ring_ : o.ring_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (size_t j = 0; j < o.cols_; ++j) {
        const Scalar& b = o(k, j);
        if (!b.is_zero()) r(i, j) += a * b;
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix shape mismatch in sum");
  Matrix r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix shape mismatch in difference");
  Matrix r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix r = *this;
  for (auto& x : r.data_) x = c * x;
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::block(size_t r0, size_t c0, size_t n, size_t m) const {
  Matrix b(ring_, n, m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

Matrix Matrix::converted(const Ring* target) const {
  Matrix r(target, rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = convert(data_[i], target);
  return r;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out[i].push_back((*this)(i, j).to_string());
  return out;
}

Vector vec_mat(const Vector& v, const Matrix& m) {
  if (v.size() != m.rows()) throw ValidationError("shape mismatch in v*M");
  Vector r = zero_vector(m.ring(), m.cols());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    for (size_t j = 0; j < m.cols(); ++j) {
      const Scalar& b = m(i, j);
      if (!b.is_zero()) r[j] += v[i] * b;
    }
  }
  return r;
}

Vector mat_vec(const Matrix& m, const Vector& v) {
  if (v.size() != m.cols()) throw ValidationError("shape mismatch in M*v");
  Vector r = zero_vector(m.ring(), m.rows());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (!v[j].is_zero() && !m(i, j).is_zero()) r[i] += m(i, j) * v[j];
  return r;
}

Echelon rref(const Matrix& input) {
  if (input.empty()) return {Matrix(input.ring(), 0, input.cols()), {}};
  if (!input.ring()->is_field()) throw MathError("row reduction requires a field");
  Matrix m = input;
  const size_t rows = m.rows(), cols = m.cols();
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j)
      if (m(i, j).ring() != m.ring()) throw ValidationError("mixed rings in matrix");
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r)
      for (size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
    const Scalar inv = m(r, c).inv();
    for (size_t j = c; j < cols; ++j)
      if (!m(r, j).is_zero()) m(r, j) = m(r, j) * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Scalar f = m(i, c);
      for (size_t j = c; j < cols; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {m.block(0, 0, r, cols), pivots};
}

size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

Scalar determinant(const Matrix& input) {
  if (input.rows() != input.cols()) throw ValidationError("determinant of non-square matrix");
  const Ring* ring = input.ring();
  const size_t n = input.rows();
  if (n == 0) return Scalar::one(ring);
  if (ring->kind() == RingKind::Integer) {
    Matrix q = input.converted(Ring::rationals());
    return Scalar(ring, determinant(q).rational());
  }
  Matrix m = input;
  Scalar det = Scalar::one(ring);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Scalar::zero(ring);
    if (p != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const Scalar inv = m(c, c).inv();
    for (size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const Scalar f = m(i, c) * inv;
      for (size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  const size_t n = m.rows();
  if (n != m.cols()) throw ValidationError("inverse of non-square matrix");
  Matrix aug(m.ring(), n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Scalar::one(m.ring());
  }
  Echelon e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw MathError("singular");
  return e.reduced.block(0, n, n, n);
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  const size_t cols = m.cols();
  const Ring* ring = m.ring();
  Echelon e = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : e.pivots) is_pivot[c] = true;
  std::vector<Vector> out;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v = zero_vector(ring, cols);
    v[f] = Scalar::one(ring);
    for (size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> left_kernel_basis(const Matrix& m) { return kernel_basis(m.transpose()); }

bool solve_left(const Matrix& a, const Vector& b, Vector& x) {
  RowSpace rs(a.ring(), a.cols());
  std::vector<size_t> used;
  for (size_t i = 0; i < a.rows(); ++i)
    if (rs.add(a.row(i))) used.push_back(i);
  if (!rs.contains(b)) return false;
  Vector c = rs.coordinates(b);
  x = zero_vector(a.ring(), a.rows());
  for (size_t k = 0; k < used.size(); ++k) x[used[k]] = c[k];
  return true;
}

RowSpace::RowSpace(const Ring* ring, size_t ambient_dim) : ring_(ring), n_(ambient_dim) {}

Vector RowSpace::reduce(const Vector& v, Vector* coeffs) const {
  if (v.size() != n_) throw ValidationError("vector length mismatch in row space");
  Vector r = v;
  if (coeffs) *coeffs = zero_vector(ring_, basis_.size());
  for (size_t k = 0; k < ech_.size(); ++k) {
    const Scalar f = r[piv_[k]];
    if (f.is_zero()) continue;
    axpy(r, -f, ech_[k]);
    if (coeffs) axpy(*coeffs, f, ech_coeffs_[k]);
  }
  return r;
}

bool RowSpace::add(const Vector& v) {
  Vector coeffs;
  Vector r = reduce(v, &coeffs);
  size_t p = 0;
  while (p < n_ && r[p].is_zero()) ++p;
  if (p == n_) return false;
  // r = v - sum coeffs * basis; normalize so that r[p] = 1
  const Scalar inv = r[p].inv();
  r = scale(inv, r);
  coeffs.push_back(Scalar::one(ring_));
  for (auto& c : coeffs) c = c * inv;
  // coeffs currently express (v - sum c_i b_i)/lead; fix signs: ech = (v - sum c_i b_i) * inv
  for (size_t i = 0; i + 1 < coeffs.size(); ++i) coeffs[i] = -coeffs[i];
  for (auto& ec : ech_coeffs_) ec.push_back(Scalar::zero(ring_));
  basis_.push_back(v);
  ech_.push_back(std::move(r));
  ech_coeffs_.push_back(std::move(coeffs));
  piv_.push_back(p);
  return true;
}

bool RowSpace::contains(const Vector& v) const { return is_zero(reduce(v, nullptr)); }

Vector RowSpace::coordinates(const Vector& v) const {
  Vector coeffs;
  Vector r = reduce(v, &coeffs);
  if (!is_zero(r)) throw MathError("vector not in row space");
  return coeffs;
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace hecke::exact
