#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hecke/exact/ring.hpp"

namespace hecke::exact {

using Vector = std::vector<Scalar>;

Vector zero_vector(const Ring* ring, size_t n);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Scalar& c, const Vector& a);
// a += c * b
void axpy(Vector& a, const Scalar& c, const Vector& b);
bool is_zero(const Vector& v);

// Dense row-major matrix; all entries live in ring(). Row vectors act on the
// left (v * M), matching the right-module convention used throughout.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const Ring* ring, size_t rows, size_t cols);
  static Matrix identity(const Ring* ring, size_t n);
  static Matrix from_rows(const Ring* ring, const std::vector<Vector>& rows, size_t cols);
  static Matrix from_ints(const Ring* ring, const std::vector<std::vector<long>>& rows);

  const Ring* ring() const { return ring_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  Vector row(size_t i) const;
  void set_row(size_t i, const Vector& v);
  std::vector<Vector> row_list() const;

  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Scalar& c) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const;

  // Rows [r0, r0+n) and columns [c0, c0+m).
  Matrix block(size_t r0, size_t c0, size_t n, size_t m) const;
  Matrix converted(const Ring* target) const;

  std::vector<std::vector<std::string>> to_strings() const;

 private:
  const Ring* ring_ = nullptr;
  size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> data_;
};

// v * M
Vector vec_mat(const Vector& v, const Matrix& m);
// M * v (v as a column)
Vector mat_vec(const Matrix& m, const Vector& v);

struct Echelon {
  Matrix reduced;              // reduced row echelon form, zero rows dropped
  std::vector<size_t> pivots;  // pivot column of each row
};

// Reduced row echelon form over a field.
Echelon rref(const Matrix& m);
size_t rank(const Matrix& m);
Scalar determinant(const Matrix& m);
Matrix inverse(const Matrix& m);

// Echelonized basis of {x : M x = 0}: one vector per free column, with a 1 in
// that column and 0 in the other free columns.
std::vector<Vector> kernel_basis(const Matrix& m);
// Basis of {x : x M = 0}.
std::vector<Vector> left_kernel_basis(const Matrix& m);

// Solve x * A = b; returns false when b is not in the row space of A.
bool solve_left(const Matrix& a, const Vector& b, Vector& x);

// Incremental row space with coordinate extraction. Rows are stored as given
// (not echelonized) so that coordinates refer to the caller's basis.
class RowSpace {
 public:
  RowSpace(const Ring* ring, size_t ambient_dim);
  size_t dim() const { return basis_.size(); }
  size_t ambient_dim() const { return n_; }
  const std::vector<Vector>& basis() const { return basis_; }
  // Adds v if independent; returns true when added.
  bool add(const Vector& v);
  bool contains(const Vector& v) const;
  // Coordinates of v in the stored basis; throws MathError if v is outside.
  Vector coordinates(const Vector& v) const;

 private:
  Vector reduce(const Vector& v, Vector* coeffs) const;
  const Ring* ring_;
  size_t n_;
  std::vector<Vector> basis_;
  // echelon rows with pivots and their expression in basis_
  std::vector<Vector> ech_;
  std::vector<Vector> ech_coeffs_;
  std::vector<size_t> piv_;
};

std::string to_string(const Matrix& m);

}  // namespace hecke::exact
