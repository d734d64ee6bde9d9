#include "hecke/cohom/cohom.hpp"

#include <cstdio>
#include <map>

#include "hecke/error.hpp"

namespace hecke::cohom {

using coeffmod::InducedModule;
using coeffmod::LinearOpPtr;
using modgroup::Presentation;
using modgroup::SignPolicy;

namespace {

std::string fnv_hex(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Vector unit_vector(const Ring* F, size_t n, size_t i) {
  Vector v = exact::zero_vector(F, n);
  v[i] = exact::Scalar::one(F);
  return v;
}

Vector slice(const Vector& v, size_t from, size_t len) {
  return Vector(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + len));
}

}  // namespace

std::string to_string(Path p) { return p == Path::Ambient ? "ambient" : "direct"; }

CohomSpace CohomSpace::compute(const GroupDescriptor& gamma, ModulePtr M, int degree, Path path) {
  if (degree != 0 && degree != 1) throw ValidationError("degree must be 0 or 1");
  if (!M) throw ValidationError("missing coefficient module");
  auto d = std::make_shared<Data>();
  d->degree = degree;
  d->path = path;
  d->gamma = gamma;
  d->base = M;
  if (path == Path::Ambient) {
    d->acting = GroupDescriptor::full(1, gamma.sign_policy());
    d->pres = &modgroup::ambient_presentation(gamma.sign_policy());
    if (modgroup::presented_group(gamma).cosets().index() == 1)
      d->coeff = M;
    else
      d->coeff = std::make_shared<InducedModule>(gamma, d->acting, M);
  } else {
    d->acting = gamma;
    d->presented = &modgroup::presented_group(gamma);
    d->pres = &d->presented->presentation();
    d->coeff = M;
  }
  const Ring* F = d->coeff->ring();
  if (!F->is_field()) throw ValidationError("cohomology needs coefficients in a field");
  const size_t m = d->pres->gens.size(), n = d->coeff->dim();
  for (const auto& g : d->pres->gens) {
    d->ops.push_back(d->coeff->op(g));
    d->inv_ops.push_back(d->coeff->op(g.inverse()));
  }
  // rows e_j g_s - e_j, block s
  std::vector<Vector> cob;
  for (size_t j = 0; j < n; ++j) {
    const Vector e = unit_vector(F, n, j);
    Vector row;
    row.reserve(m * n);
    for (size_t s = 0; s < m; ++s) {
      const Vector w = exact::sub(d->ops[s]->apply(e), e);
      row.insert(row.end(), w.begin(), w.end());
    }
    cob.push_back(std::move(row));
  }
  if (degree == 0) {
    d->relations = Matrix::from_rows(F, cob, m * n);
    d->basis = m == 0 ? std::vector<Vector>{} : exact::left_kernel_basis(d->relations);
    if (m == 0)
      for (size_t j = 0; j < n; ++j) d->basis.push_back(unit_vector(F, n, j));
    d->z1_dim = d->basis.size();
    auto rs = std::make_shared<exact::RowSpace>(F, n);
    for (const auto& b : d->basis) rs->add(b);
    d->coords = rs;
    return CohomSpace(d);
  }
  // linearized relator conditions: f(r) = sum_s x_s C_s(r)
  const auto& rels = d->pres->relators;
  Matrix R(F, m * n, rels.size() * n);
  std::vector<std::vector<Vector>> inv_rows(m);
  for (size_t s = 0; s < m; ++s)
    for (size_t j = 0; j < n; ++j) inv_rows[s].push_back(d->inv_ops[s]->apply(unit_vector(F, n, j)));
  for (size_t r = 0; r < rels.size(); ++r) {
    std::vector<std::vector<Vector>> C(m);  // empty = zero
    for (const auto& l : rels[r]) {
      const auto& op = l.exp > 0 ? d->ops[static_cast<size_t>(l.gen)] : d->inv_ops[static_cast<size_t>(l.gen)];
      for (auto& Cs : C)
        for (auto& row : Cs) row = op->apply(row);
      auto& Cg = C[static_cast<size_t>(l.gen)];
      if (Cg.empty()) Cg.assign(n, exact::zero_vector(F, n));
      for (size_t j = 0; j < n; ++j) {
        if (l.exp > 0) Cg[j][j] += exact::Scalar::one(F);
        else Cg[j] = exact::sub(Cg[j], inv_rows[static_cast<size_t>(l.gen)][j]);
      }
    }
    for (size_t s = 0; s < m; ++s)
      for (size_t i = 0; i < C[s].size(); ++i)
        for (size_t c = 0; c < n; ++c) R(s * n + i, r * n + c) = C[s][i][c];
  }
  d->relations = R;
  const auto z1 = rels.empty() ? std::vector<Vector>{} : exact::left_kernel_basis(R);
  std::vector<Vector> z1v = z1;
  if (rels.empty())
    for (size_t j = 0; j < m * n; ++j) z1v.push_back(unit_vector(F, m * n, j));
  d->z1_dim = z1v.size();
  auto rs = std::make_shared<exact::RowSpace>(F, m * n);
  for (const auto& b : cob)
    if (rs->add(b)) d->b1.push_back(b);
  d->b1_rank = d->b1.size();
  for (const auto& b : d->b1)
    if (!exact::is_zero(exact::vec_mat(b, R))) throw InternalError("coboundary fails the relator conditions");
  for (const auto& z : z1v)
    if (rs->add(z)) d->basis.push_back(z);
  if (d->b1_rank + d->basis.size() != d->z1_dim) throw InternalError("B1 is not contained in Z1");
  d->coords = rs;
  return CohomSpace(d);
}

CohomSpace h0(const GroupDescriptor& gamma, ModulePtr M, Path path) { return CohomSpace::compute(gamma, std::move(M), 0, path); }
CohomSpace h1(const GroupDescriptor& gamma, ModulePtr M, Path path) { return CohomSpace::compute(gamma, std::move(M), 1, path); }

size_t CohomSpace::cochain_dim() const {
  const size_t n = d_->coeff->dim();
  return d_->degree == 0 ? n : n * d_->pres->gens.size();
}

bool CohomSpace::is_cocycle(const Vector& x) const {
  if (x.size() != cochain_dim()) throw ValidationError("cochain has the wrong length");
  if (d_->relations.cols() == 0) return true;
  return exact::is_zero(exact::vec_mat(x, d_->relations));
}

bool CohomSpace::is_coboundary(const Vector& x) const {
  if (!is_cocycle(x)) return false;
  if (d_->degree == 0) return exact::is_zero(x);
  const Vector c = d_->coords->coordinates(x);
  for (size_t i = d_->b1_rank; i < c.size(); ++i)
    if (!c[i].is_zero()) return false;
  return true;
}

Vector CohomSpace::coordinates(const Vector& x) const {
  if (!is_cocycle(x)) throw MathError(d_->degree == 0 ? "vector is not invariant" : "cochain is not a cocycle");
  const Vector c = d_->coords->coordinates(x);
  return Vector(c.begin() + static_cast<long>(d_->b1_rank), c.end());
}

Word CohomSpace::word_for(const GMat& g) const {
  if (!d_->acting.contains(g)) throw MathError("element " + g.to_string() + " is outside " + d_->acting.name());
  if (d_->path == Path::Ambient) return modgroup::to_ambient(modgroup::word_decompose(g), d_->acting.sign_policy());
  return d_->presented->word_for(g);
}

const coeffmod::LinearOp& CohomSpace::gen_op(size_t s, int exp) const {
  return exp > 0 ? *d_->ops.at(s) : *d_->inv_ops.at(s);
}

Vector CohomSpace::value(const Vector& x, size_t gen) const {
  const size_t n = d_->coeff->dim();
  return slice(x, gen * n, n);
}

Vector CohomSpace::evaluate_word(const Vector& x, const Word& w) const {
  if (d_->degree != 1) throw ValidationError("only 1-cochains are evaluated on words");
  const size_t n = d_->coeff->dim();
  Vector acc = exact::zero_vector(ring(), n);
  for (const auto& l : w) {
    const size_t g = static_cast<size_t>(l.gen);
    acc = gen_op(g, l.exp).apply(acc);
    if (l.exp > 0) acc = exact::add(acc, value(x, g));
    else acc = exact::sub(acc, d_->inv_ops[g]->apply(value(x, g)));
  }
  return acc;
}

Vector CohomSpace::evaluate(const Vector& x, const GMat& g) const { return evaluate_word(x, word_for(g)); }

Vector CohomSpace::from_values(const std::vector<Vector>& values) const {
  if (values.size() != d_->pres->gens.size()) throw ValidationError("one value per generator is required");
  Vector x;
  for (const auto& v : values) {
    if (v.size() != d_->coeff->dim()) throw ValidationError("value has the wrong length");
    x.insert(x.end(), v.begin(), v.end());
  }
  return x;
}

std::string CohomSpace::hash() const {
  return fnv_hex(std::to_string(d_->degree) + to_string(d_->path) + d_->gamma.hash() + (d_->gamma.conjugated() ? "c" : "") +
                 d_->base->to_json().dump());
}

// --- Hecke action ------------------------------------------------------------

namespace {

struct PlanTerm {
  mpz_class coeff;
  Word word;  // word for t_j(gen) in the source group
  LinearOpPtr delta_r;
};

struct Plan {
  std::vector<std::vector<PlanTerm>> per_gen;  // degree 1
  std::vector<std::pair<mpz_class, LinearOpPtr>> sum;  // degree 0
};

void check_pair(const DoubleCosetSum& T, const CohomSpace& src, const CohomSpace& tgt) {
  if (src.degree() != tgt.degree()) throw ValidationError("spaces of different degrees");
  if (T.n() != 2) throw ValidationError("cohomology needs 2x2 operators");
  if (T.left() != src.acting_group() || T.right() != tgt.acting_group())
    throw ValidationError("operator groups do not match the spaces");
  if (src.coefficients()->to_json() != tgt.coefficients()->to_json()) throw ValidationError("spaces with different coefficients");
}

Plan make_plan(const DoubleCosetSum& T, const CohomSpace& src, const CohomSpace& tgt) {
  check_pair(T, src, tgt);
  Plan plan;
  const auto& terms = T.terms();
  std::map<GMat, LinearOpPtr> op_cache;
  auto op_of = [&](const GMat& d) {
    auto it = op_cache.find(d);
    if (it != op_cache.end()) return it->second;
    return op_cache[d] = src.coefficients()->op(d);
  };
  if (src.degree() == 0) {
    for (const auto& t : terms) plan.sum.emplace_back(t.coeff, op_of(t.rep));
    return plan;
  }
  std::map<algebra::CosetKey, size_t> where;
  for (size_t j = 0; j < terms.size(); ++j) where[algebra::coset_key(T.left(), terms[j].rep)] = j;
  for (const auto& g : tgt.presentation().gens) {
    std::vector<PlanTerm> row;
    for (const auto& tj : terms) {
      const GMat x = tj.rep * g;
      auto it = where.find(algebra::coset_key(T.left(), x));
      if (it == where.end()) throw MathError("not a Hecke module datum");
      const GMat& dr = terms[it->second].rep;
      auto t = x.div_right(dr);
      if (!t || !t->is_unit() || !src.acting_group().contains(*t)) throw MathError("not a Hecke module datum");
      row.push_back({tj.coeff, src.word_for(*t), op_of(dr)});
    }
    plan.per_gen.push_back(std::move(row));
  }
  return plan;
}

Vector run_plan(const Plan& plan, const CohomSpace& src, const Vector& x) {
  const Ring* F = src.ring();
  if (src.degree() == 0) {
    Vector y = exact::zero_vector(F, x.size());
    for (const auto& [c, op] : plan.sum) exact::axpy(y, exact::Scalar(F, c), op->apply(x));
    return y;
  }
  const size_t n = src.coefficients()->dim();
  Vector out;
  for (const auto& row : plan.per_gen) {
    Vector v = exact::zero_vector(F, n);
    for (const auto& t : row) exact::axpy(v, exact::Scalar(F, t.coeff), t.delta_r->apply(src.evaluate_word(x, t.word)));
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace

Vector hecke_cochain(const DoubleCosetSum& T, const CohomSpace& source, const CohomSpace& target, const Vector& x) {
  return run_plan(make_plan(T, source, target), source, x);
}

Matrix hecke_action(const DoubleCosetSum& T, const CohomSpace& source, const CohomSpace& target) {
  const Plan plan = make_plan(T, source, target);
  std::vector<Vector> rows;
  for (const auto& b : source.basis()) {
    const Vector y = run_plan(plan, source, b);
    if (!target.is_cocycle(y)) throw InternalError("Hecke image is not a cocycle");
    rows.push_back(target.coordinates(y));
  }
  return Matrix::from_rows(source.ring(), rows, target.dim());
}

DoubleCosetSum operator_for(const CohomSpace& space, const OpLabel& label) {
  if (label.p < 1) throw ValidationError("operator index must be positive");
  const int64_t det = label.det();
  if (modgroup::gcd64(det, space.gamma().level()) != 1) throw MathError("determinant not prime to level");
  const auto& G = space.acting_group();
  if (label.m == 0) return algebra::hecke_ta(label.p, G);
  if (label.m > 2) throw ValidationError("T_p^(m) needs m <= 2 for 2x2 matrices");
  if (!algebra::is_prime64(label.p)) throw ValidationError("T_p needs a prime p");
  return algebra::hecke_tp(label.p, label.m, 2, G);
}

HeckeMatrix hecke_matrix(const CohomSpace& space, const OpLabel& label) {
  HeckeMatrix h;
  h.label = label;
  h.matrix = hecke_action(operator_for(space, label), space, space);
  h.field = space.ring();
  h.group_hash = space.gamma().hash();
  h.module_hash = fnv_hex(space.base_module()->to_json().dump());
  return h;
}

nlohmann::json HeckeMatrix::to_json() const {
  return {{"label", {{"p", label.p}, {"m", label.m}}},
          {"name", label.to_string()},
          {"matrix", matrix.to_strings()},
          {"dim", matrix.rows()},
          {"field", field->name()},
          {"group_hash", group_hash},
          {"module_hash", module_hash}};
}

HeckeMatrix HeckeMatrix::from_json(const nlohmann::json& j) {
  try {
    HeckeMatrix h;
    h.label = {j.at("label").at("p").get<int64_t>(), j.at("label").at("m").get<int>()};
    h.field = exact::parse_ring(j.at("field").get<std::string>());
    const auto& rows = j.at("matrix");
    const size_t n = j.contains("dim") ? j["dim"].get<size_t>() : rows.size();
    h.matrix = Matrix(h.field, n, n);
    if (rows.size() != n) throw ValidationError("matrix has the wrong number of rows");
    for (size_t r = 0; r < n; ++r) {
      if (rows[r].size() != n) throw ValidationError("matrix has the wrong number of columns");
      for (size_t c = 0; c < n; ++c) h.matrix(r, c) = exact::parse_scalar(h.field, rows[r][c].get<std::string>());
    }
    h.group_hash = j.at("group_hash").get<std::string>();
    h.module_hash = j.at("module_hash").get<std::string>();
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad Hecke matrix record: ") + e.what());
  }
}

// --- Shapiro -------------------------------------------------------------------

Matrix shapiro(const CohomSpace& ambient, const CohomSpace& direct) {
  if (ambient.path() != Path::Ambient || direct.path() != Path::Direct) throw ValidationError("Shapiro needs an ambient and a direct space");
  if (ambient.gamma() != direct.gamma() || ambient.degree() != direct.degree())
    throw ValidationError("Shapiro spaces for different groups or degrees");
  const auto* ind = dynamic_cast<const InducedModule*>(ambient.coefficients().get());
  const size_t n = direct.coefficients()->dim();
  auto at_identity = [&](const Vector& f) { return ind ? ind->block(f, 0) : f; };
  std::vector<Vector> rows;
  for (const auto& b : ambient.basis()) {
    Vector y;
    if (ambient.degree() == 0) {
      y = at_identity(b);
    } else {
      std::vector<Vector> vals;
      for (const auto& g : direct.presentation().gens) vals.push_back(at_identity(ambient.evaluate(b, g)));
      y = direct.from_values(vals);
    }
    if (y.size() != direct.cochain_dim() || (ind == nullptr && n != ambient.coefficients()->dim()))
      throw InternalError("Shapiro image has the wrong length");
    if (!direct.is_cocycle(y)) throw InternalError("Shapiro image is not a cocycle");
    rows.push_back(direct.coordinates(y));
  }
  Matrix S = Matrix::from_rows(ambient.ring(), rows, direct.dim());
  if (ambient.dim() != direct.dim() || exact::rank(S) != direct.dim()) throw InternalError("Shapiro map is not an isomorphism");
  return S;
}

Matrix shapiro_inverse(const CohomSpace& ambient, const CohomSpace& direct) {
  const Matrix S = shapiro(ambient, direct);
  if (S.rows() == 0) return S;
  return exact::inverse(S);
}

// --- conjugation ---------------------------------------------------------------

Matrix transport_map(const GMat& g, const CohomSpace& from, const CohomSpace& to) {
  if (!g.is_unit()) throw ValidationError("transport needs a unit");
  if (from.degree() != to.degree()) throw ValidationError("spaces of different degrees");
  const GMat gi = g.inverse();
  const auto& M = *from.coefficients();
  std::vector<Vector> rows;
  for (const auto& b : from.basis()) {
    Vector y;
    if (from.degree() == 0) {
      y = M.apply(b, gi);
    } else {
      std::vector<Vector> vals;
      for (const auto& x : to.presentation().gens) vals.push_back(M.apply(from.evaluate(b, gi * x * g), gi));
      y = to.from_values(vals);
    }
    rows.push_back(to.coordinates(y));
  }
  return Matrix::from_rows(from.ring(), rows, to.dim());
}

TransportSquare conjugation_transport(const GMat& g, const GMat& gp, const DoubleCosetSum& T, ModulePtr M, int degree) {
  if (!g.is_unit() || !gp.is_unit()) throw ValidationError("transport needs units");
  const GroupDescriptor L = T.left(), Rt = T.right();
  const GroupDescriptor Lc = L.conjugate(g), Rc = Rt.conjugate(gp);
  const CohomSpace A = CohomSpace::compute(L, M, degree, Path::Direct);
  const CohomSpace B = CohomSpace::compute(Rt, M, degree, Path::Direct);
  const CohomSpace Ac = CohomSpace::compute(Lc, M, degree, Path::Direct);
  const CohomSpace Bc = CohomSpace::compute(Rc, M, degree, Path::Direct);
  DoubleCosetSum Tc(Lc, Rc, 2);
  const GMat gpi = gp.inverse();
  for (const auto& t : T.terms()) Tc.add(t.coeff, g * t.rep * gpi);
  TransportSquare sq;
  sq.top = hecke_action(T, A, B);
  sq.bottom = hecke_action(Tc, Ac, Bc);
  sq.left = transport_map(g, A, Ac);
  sq.right = transport_map(gp, B, Bc);
  sq.commutes = sq.top * sq.right == sq.left * sq.bottom;
  return sq;
}

}  // namespace hecke::cohom
