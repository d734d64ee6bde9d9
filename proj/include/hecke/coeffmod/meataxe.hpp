#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "hecke/coeffmod/module.hpp"

namespace hecke::coeffmod {

// Seed of the randomized spinning; results do not depend on it.
inline constexpr uint64_t kDefaultSeed = 0x5eed;

// A module given only by the matrices of algebra generators (row action).
struct MatrixModule {
  const Ring* ring = nullptr;
  size_t dim = 0;
  std::vector<Matrix> gens;
};

// Basis of the smallest invariant subspace containing the seeds.
std::vector<Vector> spin(const MatrixModule& M, const std::vector<Vector>& seeds);

// Actions on an invariant subspace (basis rows) and on the quotient.
MatrixModule submodule(const MatrixModule& M, const std::vector<Vector>& basis);
MatrixModule quotient(const MatrixModule& M, const std::vector<Vector>& basis);

// A proper nonzero invariant subspace, or nullopt once irreducibility is
// certified (a null space of dimension deg p for an irreducible factor p of a
// random algebra element, spun in the module and in its dual).
std::optional<std::vector<Vector>> find_submodule(const MatrixModule& M, std::mt19937_64& rng);
bool is_irreducible(const MatrixModule& M, uint64_t seed = kDefaultSeed);

// Basis of Hom_A(S, T) as dim S x dim T matrices X with A_S X = X A_T.
std::vector<Matrix> hom_basis(const MatrixModule& S, const MatrixModule& T);
// For irreducible modules.
bool isomorphic(const MatrixModule& S, const MatrixModule& T);

struct CompositionFactor {
  MatrixModule module;
  size_t multiplicity;
};
// Composition factors up to isomorphism.
std::vector<CompositionFactor> composition_factors(const MatrixModule& M, uint64_t seed = kDefaultSeed);
size_t socle_dimension(const MatrixModule& M, uint64_t seed = kDefaultSeed);
bool is_semisimple(const MatrixModule& M, uint64_t seed = kDefaultSeed);

MatrixModule matrix_module(const AdmissibleModule& M);

struct Constituent {
  std::shared_ptr<const AdmissibleModule> module;
  size_t multiplicity;
};
// Semisimplification of an admissible module.
std::vector<Constituent> constituents(const AdmissibleModule& M, uint64_t seed = kDefaultSeed);

}  // namespace hecke::coeffmod
