#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hecke/exact/hnf.hpp"

namespace hecke::modgroup {

// Small integral matrix, n = 2 for everything group-theoretic and n = 3 for
// level-1 coset arithmetic. Arithmetic is overflow-checked.
class GMat {
 public:
  GMat() : GMat(2) {}
  explicit GMat(int n);
  static GMat identity(int n = 2);
  static GMat of(int64_t a, int64_t b, int64_t c, int64_t d);
  static GMat diag(const std::vector<int64_t>& d);
  static GMat from_rows(const std::vector<std::vector<int64_t>>& rows);

  int n() const { return n_; }
  int64_t operator()(int i, int j) const { return e_[static_cast<size_t>(i * n_ + j)]; }
  int64_t& at(int i, int j) { return e_[static_cast<size_t>(i * n_ + j)]; }
  int64_t a() const { return e_[0]; }
  int64_t b() const { return e_[1]; }
  int64_t c() const { return e_[2]; }
  int64_t d() const { return e_[3]; }

  int64_t det() const;
  int sign() const { return det() < 0 ? -1 : 1; }
  bool is_unit() const { int64_t t = det(); return t == 1 || t == -1; }

  GMat operator*(const GMat& o) const;
  GMat operator-() const;
  bool operator==(const GMat& o) const { return n_ == o.n_ && e_ == o.e_; }
  bool operator!=(const GMat& o) const { return !(*this == o); }
  bool operator<(const GMat& o) const { return n_ != o.n_ ? n_ < o.n_ : e_ < o.e_; }

  // Inverse of a unit matrix (throws otherwise).
  GMat inverse() const;
  // Adjugate: adj(M) * M = det(M) * I.
  GMat adjugate() const;
  // this * o^{-1} when it is integral.
  std::optional<GMat> div_right(const GMat& o) const;

  // Entries reduced into [0, N).
  GMat reduced(int64_t N) const;

  exact::ZMatrix to_z() const;
  static GMat from_z(const exact::ZMatrix& m);
  std::vector<std::vector<int64_t>> rows() const;
  std::string to_string() const;

 private:
  int n_;
  std::array<int64_t, 9> e_{};
};

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);
int64_t mod_pos(int64_t a, int64_t n);

// Upper-triangular Hermite form h and unimodular part u with m = u * h.
struct HnfSplit {
  GMat u, h;
};
HnfSplit hnf_split(const GMat& m);

struct GMatHash {
  size_t operator()(const GMat& g) const;
};

}  // namespace hecke::modgroup
