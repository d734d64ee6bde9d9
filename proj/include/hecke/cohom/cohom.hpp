#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hecke/algebra/grading.hpp"
#include "hecke/algebra/hecke.hpp"
#include "hecke/coeffmod/induced.hpp"
#include "hecke/coeffmod/module.hpp"
#include "json.hpp"

namespace hecke::cohom {

using algebra::DoubleCosetSum;
using algebra::OpLabel;
using coeffmod::ModulePtr;
using exact::Matrix;
using exact::Ring;
using exact::Vector;
using modgroup::GMat;
using modgroup::GroupDescriptor;
using modgroup::Word;

// Ambient: cohomology of the ambient G (SL_2(Z) or GL_2(Z)) with coefficients
// Ind(Gamma, G, M). Direct: cohomology of Gamma through its own presentation.
enum class Path { Ambient, Direct };
std::string to_string(Path p);

// H^0 or H^1 of a finitely presented group. Degree-1 classes are stored as
// inhomogeneous right cocycles f(gh) = f(g) h + f(h), given by their values on
// the generators and concatenated into one vector.
class CohomSpace {
 public:
  static CohomSpace compute(const GroupDescriptor& gamma, ModulePtr M, int degree, Path path = Path::Ambient);

  int degree() const { return d_->degree; }
  Path path() const { return d_->path; }
  const GroupDescriptor& gamma() const { return d_->gamma; }
  const GroupDescriptor& acting_group() const { return d_->acting; }
  const ModulePtr& base_module() const { return d_->base; }
  const ModulePtr& coefficients() const { return d_->coeff; }
  const modgroup::Presentation& presentation() const { return *d_->pres; }
  const Ring* ring() const { return d_->coeff->ring(); }

  size_t dim() const { return d_->basis.size(); }
  // Number of unknowns: generators * dim M (degree 1), dim M (degree 0).
  size_t cochain_dim() const;
  size_t z1_dim() const { return d_->z1_dim; }
  size_t b1_rank() const { return d_->b1_rank; }
  const std::vector<Vector>& basis() const { return d_->basis; }
  const std::vector<Vector>& coboundary_basis() const { return d_->b1; }

  bool is_cocycle(const Vector& x) const;
  bool is_coboundary(const Vector& x) const;
  // Coordinates of a class; MathError if x is not a cocycle (invariant).
  Vector coordinates(const Vector& x) const;

  Word word_for(const GMat& g) const;
  Vector evaluate_word(const Vector& x, const Word& w) const;
  // f(g) for g in the acting group.
  Vector evaluate(const Vector& x, const GMat& g) const;
  // Cochain with the given values on the generators.
  Vector from_values(const std::vector<Vector>& values) const;
  Vector value(const Vector& x, size_t gen) const;

  // Generator actions, cached.
  const coeffmod::LinearOp& gen_op(size_t s, int exp) const;
  std::string hash() const;

 private:
  struct Data {
    int degree = 0;
    Path path = Path::Ambient;
    GroupDescriptor gamma = GroupDescriptor::full(), acting = GroupDescriptor::full();
    ModulePtr base, coeff;
    const modgroup::Presentation* pres;
    const modgroup::PresentedGroup* presented = nullptr;  // direct path
    std::vector<coeffmod::LinearOpPtr> ops, inv_ops;
    Matrix relations;  // x * relations = 0 on cocycles; for degree 0 the invariance conditions
    size_t z1_dim = 0, b1_rank = 0;
    std::vector<Vector> b1, basis;
    std::shared_ptr<exact::RowSpace> coords;  // b1 rows then basis
  };
  explicit CohomSpace(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

CohomSpace h0(const GroupDescriptor& gamma, ModulePtr M, Path path = Path::Ambient);
CohomSpace h1(const GroupDescriptor& gamma, ModulePtr M, Path path = Path::Ambient);

// Matrix of T: H^i(source) -> H^i(target) on the chosen bases (row convention).
// T is a sum over (source acting group, target acting group).
Matrix hecke_action(const DoubleCosetSum& T, const CohomSpace& source, const CohomSpace& target);
// Image cocycle of one cochain.
Vector hecke_cochain(const DoubleCosetSum& T, const CohomSpace& source, const CohomSpace& target, const Vector& x);

// The double coset sum for a label on the space's acting group (level 1 for
// the ambient path, after checking the determinant against the level of Gamma).
DoubleCosetSum operator_for(const CohomSpace& space, const OpLabel& label);

struct HeckeMatrix {
  OpLabel label;
  Matrix matrix;
  const Ring* field = nullptr;
  std::string group_hash, module_hash;
  nlohmann::json to_json() const;
  static HeckeMatrix from_json(const nlohmann::json& j);
};
HeckeMatrix hecke_matrix(const CohomSpace& space, const OpLabel& label);

// Shapiro map H^i(G, Ind(Gamma, G, M)) -> H^i(Gamma, M): f -> (gamma -> f(gamma)(1)).
// Rows: ambient basis. Throws InternalError unless it is an isomorphism.
Matrix shapiro(const CohomSpace& ambient, const CohomSpace& direct);
Matrix shapiro_inverse(const CohomSpace& ambient, const CohomSpace& direct);

// Conjugation square for T over (Gamma, Gamma'): c_g: H(Gamma) -> H(g Gamma g^-1),
// f^(x) = f(g^-1 x g) g^-1, and T^ = sum a_j (g Gamma g^-1)(g delta_j g'^-1).
struct TransportSquare {
  Matrix top;     // T on H(Gamma) -> H(Gamma')
  Matrix bottom;  // T^ on H(g Gamma g^-1) -> H(g' Gamma' g'^-1)
  Matrix left;    // c_g
  Matrix right;   // c_g'
  bool commutes = false;
};
TransportSquare conjugation_transport(const GMat& g, const GMat& gp, const DoubleCosetSum& T, ModulePtr M, int degree);
// c_g as a matrix between two direct-path spaces.
Matrix transport_map(const GMat& g, const CohomSpace& from, const CohomSpace& to);

}  // namespace hecke::cohom
