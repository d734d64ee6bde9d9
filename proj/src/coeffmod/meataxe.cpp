#include "hecke/coeffmod/meataxe.hpp"

#include <algorithm>

#include "hecke/error.hpp"
#include "hecke/exact/poly.hpp"

namespace hecke::coeffmod {

namespace {

Scalar random_scalar(const Ring* F, std::mt19937_64& rng) {
  if (F->is_finite()) return Scalar::from_code(F, static_cast<int64_t>(rng() % static_cast<uint64_t>(F->order())));
  return Scalar(F, static_cast<long>(rng() % 7) - 3);
}

Vector random_vector(const Ring* F, size_t n, std::mt19937_64& rng) {
  Vector v;
  for (size_t i = 0; i < n; ++i) v.push_back(random_scalar(F, rng));
  return v;
}

bool is_scalar_matrix(const Matrix& m) {
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (i == j ? m(i, j) != m(0, 0) : !m(i, j).is_zero()) return false;
  return true;
}

MatrixModule dual(const MatrixModule& M) {
  MatrixModule D{M.ring, M.dim, {}};
  for (const auto& g : M.gens) D.gens.push_back(g.transpose());
  return D;
}

Vector unit_vector(const Ring* F, size_t n, size_t i) {
  Vector v = exact::zero_vector(F, n);
  v[i] = Scalar::one(F);
  return v;
}

}  // namespace

std::vector<Vector> spin(const MatrixModule& M, const std::vector<Vector>& seeds) {
  exact::RowSpace rs(M.ring, M.dim);
  std::vector<Vector> queue;
  for (const auto& s : seeds)
    if (rs.add(s)) queue.push_back(s);
  for (size_t i = 0; i < queue.size() && rs.dim() < M.dim; ++i)
    for (const auto& g : M.gens) {
      Vector w = exact::vec_mat(queue[i], g);
      if (rs.add(w)) queue.push_back(std::move(w));
    }
  return rs.basis();
}

MatrixModule submodule(const MatrixModule& M, const std::vector<Vector>& basis) {
  exact::RowSpace rs(M.ring, M.dim);
  for (const auto& b : basis)
    if (!rs.add(b)) throw ValidationError("submodule basis is dependent");
  MatrixModule S{M.ring, basis.size(), {}};
  for (const auto& g : M.gens) {
    std::vector<Vector> rows;
    for (const auto& b : basis) rows.push_back(rs.coordinates(exact::vec_mat(b, g)));
    S.gens.push_back(Matrix::from_rows(M.ring, rows, basis.size()));
  }
  return S;
}

MatrixModule quotient(const MatrixModule& M, const std::vector<Vector>& basis) {
  exact::RowSpace rs(M.ring, M.dim);
  for (const auto& b : basis)
    if (!rs.add(b)) throw ValidationError("submodule basis is dependent");
  const size_t k = basis.size();
  std::vector<Vector> comp;
  for (size_t i = 0; i < M.dim && rs.dim() < M.dim; ++i) {
    Vector e = unit_vector(M.ring, M.dim, i);
    if (rs.add(e)) comp.push_back(e);
  }
  MatrixModule Q{M.ring, comp.size(), {}};
  for (const auto& g : M.gens) {
    std::vector<Vector> rows;
    for (const auto& c : comp) {
      const Vector x = rs.coordinates(exact::vec_mat(c, g));
      rows.emplace_back(x.begin() + static_cast<long>(k), x.end());
    }
    Q.gens.push_back(Matrix::from_rows(M.ring, rows, comp.size()));
  }
  return Q;
}

std::optional<std::vector<Vector>> find_submodule(const MatrixModule& M, std::mt19937_64& rng) {
  const size_t d = M.dim;
  if (d <= 1) return std::nullopt;
  const Ring* F = M.ring;
  if (std::all_of(M.gens.begin(), M.gens.end(), is_scalar_matrix)) return std::vector<Vector>{unit_vector(F, d, 0)};
  // cheap tries first
  for (int t = 0; t < 3; ++t) {
    auto S = spin(M, {t == 0 ? unit_vector(F, d, 0) : random_vector(F, d, rng)});
    if (!S.empty() && S.size() < d) return S;
  }
  std::vector<Matrix> pool = M.gens;
  for (int attempt = 0; attempt < 300; ++attempt) {
    // random element of the algebra: combination of pool words, pool grows by products
    const Matrix& x = pool[rng() % pool.size()];
    const Matrix& y = pool[rng() % pool.size()];
    if (pool.size() < 40) pool.push_back(x * y);
    Matrix theta = Matrix::identity(F, d).scaled(random_scalar(F, rng));
    for (int j = 0; j < 3; ++j) theta = theta + pool[rng() % pool.size()].scaled(random_scalar(F, rng));
    auto fac = exact::factor(exact::char_poly(theta)).factors;
    std::sort(fac.begin(), fac.end(), [](const exact::Factor& a, const exact::Factor& b) {
      return a.poly.degree() < b.poly.degree();
    });
    for (const auto& f : fac) {
      const Matrix phi = f.poly.eval(theta);
      const auto null = exact::left_kernel_basis(phi);
      if (null.empty()) continue;
      std::vector<Vector> tries(null.begin(), null.begin() + static_cast<long>(std::min<size_t>(null.size(), 8)));
      if (null.size() > 1) {
        Vector v = exact::zero_vector(F, d);
        for (const auto& n : null) exact::axpy(v, random_scalar(F, rng), n);
        if (!exact::is_zero(v)) tries.push_back(v);
      }
      for (const auto& v : tries) {
        auto S = spin(M, {v});
        if (S.size() < d) return S;
      }
      if (null.size() == static_cast<size_t>(f.poly.degree())) {
        const auto cnull = exact::kernel_basis(phi);
        const auto W = spin(dual(M), {cnull.at(0)});
        if (W.size() == d) return std::nullopt;  // certified irreducible
        const Matrix Wm = Matrix::from_rows(F, W, d);
        return exact::left_kernel_basis(Wm.transpose());
      }
    }
  }
  throw MathError("irreducibility test did not converge");
}

bool is_irreducible(const MatrixModule& M, uint64_t seed) {
  if (M.dim == 0) return false;
  std::mt19937_64 rng(seed);
  return !find_submodule(M, rng).has_value();
}

std::vector<Matrix> hom_basis(const MatrixModule& S, const MatrixModule& T) {
  if (S.gens.size() != T.gens.size()) throw ValidationError("modules for different generator sets");
  if (S.ring != T.ring) throw ValidationError("modules over different fields");
  const size_t a = S.dim, b = T.dim, n = a * b;
  const Ring* F = S.ring;
  std::vector<Matrix> out;
  if (n == 0) return out;
  Matrix E(F, S.gens.size() * n, n);
  size_t row = 0;
  for (size_t g = 0; g < S.gens.size(); ++g) {
    const Matrix& As = S.gens[g];
    const Matrix& At = T.gens[g];
    for (size_t i = 0; i < a; ++i)
      for (size_t j = 0; j < b; ++j, ++row) {
        // (As X)_{ij} - (X At)_{ij}
        for (size_t l = 0; l < a; ++l)
          if (!As(i, l).is_zero()) E(row, l * b + j) += As(i, l);
        for (size_t l = 0; l < b; ++l)
          if (!At(l, j).is_zero()) E(row, i * b + l) -= At(l, j);
      }
  }
  for (const auto& v : exact::kernel_basis(E)) {
    Matrix X(F, a, b);
    for (size_t i = 0; i < a; ++i)
      for (size_t j = 0; j < b; ++j) X(i, j) = v[i * b + j];
    out.push_back(std::move(X));
  }
  return out;
}

bool isomorphic(const MatrixModule& S, const MatrixModule& T) {
  return S.dim == T.dim && !hom_basis(S, T).empty();
}

std::vector<CompositionFactor> composition_factors(const MatrixModule& M, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<MatrixModule> irreducible, stack{M};
  while (!stack.empty()) {
    MatrixModule X = std::move(stack.back());
    stack.pop_back();
    if (X.dim == 0) continue;
    auto sub = find_submodule(X, rng);
    if (!sub) {
      irreducible.push_back(std::move(X));
      continue;
    }
    stack.push_back(quotient(X, *sub));
    stack.push_back(submodule(X, *sub));
  }
  std::vector<CompositionFactor> out;
  for (auto& s : irreducible) {
    bool merged = false;
    for (auto& f : out)
      if (isomorphic(f.module, s)) {
        ++f.multiplicity;
        merged = true;
        break;
      }
    if (!merged) out.push_back({std::move(s), 1});
  }
  return out;
}

size_t socle_dimension(const MatrixModule& M, uint64_t seed) {
  exact::RowSpace soc(M.ring, M.dim);
  for (const auto& f : composition_factors(M, seed))
    for (const auto& X : hom_basis(f.module, M))
      for (const auto& r : X.row_list()) soc.add(r);
  return soc.dim();
}

bool is_semisimple(const MatrixModule& M, uint64_t seed) { return socle_dimension(M, seed) == M.dim; }

MatrixModule matrix_module(const AdmissibleModule& M) { return {M.ring(), M.dim(), M.generator_images()}; }

std::vector<Constituent> constituents(const AdmissibleModule& M, uint64_t seed) {
  std::vector<Constituent> out;
  for (auto& f : composition_factors(matrix_module(M), seed))
    out.push_back({std::make_shared<AdmissibleModule>(M.ring(), M.group(), f.module.dim, f.module.gens, "constituent"),
                   f.multiplicity});
  return out;
}

}  // namespace hecke::coeffmod
