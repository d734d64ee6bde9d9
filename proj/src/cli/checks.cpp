#include <chrono>
#include <random>

#include "hecke/algebra/grading.hpp"
#include "hecke/cli/cli.hpp"
#include "hecke/coeffmod/meataxe.hpp"
#include "hecke/eigen/eigen.hpp"

namespace hecke::cli {

using coeffmod::FiniteGroup;
using coeffmod::SignedElt;
using exact::Matrix;
using exact::Ring;
using exact::Scalar;
using modgroup::GMat;
using modgroup::GroupDescriptor;

CheckResult timed_check(const std::string& name, const std::function<bool(std::string&)>& f) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.pass = f(r.detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

std::shared_ptr<const FiniteGroup> group_of(int64_t N, const std::vector<GMat>& gens) {
  std::vector<SignedElt> g;
  for (const auto& m : gens) g.push_back({1, m});
  return std::make_shared<FiniteGroup>(N, g);
}

bool affine_f3(uint64_t seed, std::string& detail) {
  const Ring* F3 = Ring::finite_field(3);
  auto H = group_of(3, {GMat::of(1, 1, 0, 1), GMat::of(1, 0, 0, 2)});
  const auto cs = coeffmod::constituents(*coeffmod::regular_module(F3, H), seed);
  size_t total = 0;
  for (const auto& c : cs) {
    total += c.multiplicity * c.module->dim();
    if (c.module->dim() != 1) {
      detail = "constituent of dimension " + std::to_string(c.module->dim());
      return false;
    }
    for (const auto& x : H->elements())
      for (const auto& y : H->elements())
        if ((x.g.det() - y.g.det()) % 3 == 0 && c.module->image_of(x) != c.module->image_of(y)) {
          detail = "constituent does not factor through det";
          return false;
        }
  }
  detail = std::to_string(cs.size()) + " constituents, all of dimension 1";
  return total == H->order();
}

bool gl2_mod4(uint64_t seed, std::string& detail) {
  const Ring* F2 = Ring::finite_field(2);
  auto G = FiniteGroup::of_descriptor(GroupDescriptor::full(4));
  auto B = group_of(4, {GMat::of(1, 1, 0, 1), GMat::of(3, 0, 0, 1), GMat::of(1, 0, 0, 3)});
  struct Item {
    std::string name;
    std::shared_ptr<const FiniteGroup> group;
    std::shared_ptr<coeffmod::AdmissibleModule> module;
  };
  const std::vector<Item> items = {{"vector permutation module", G, coeffmod::vector_permutation_module(F2, G)},
                                   {"regular module of the Borel subgroup", B, coeffmod::regular_module(F2, B)}};
  size_t factors = 0;
  for (const auto& it : items) {
    size_t total = 0;
    for (const auto& c : coeffmod::constituents(*it.module, seed)) {
      ++factors;
      total += c.multiplicity * c.module->dim();
      const Matrix I = Matrix::identity(F2, c.module->dim());
      for (const auto& x : it.group->elements())
        if (x.g.reduced(2) == GMat::identity() && c.module->image_of(x) != I) {
          detail = it.name + ": kernel acts nontrivially";
          return false;
        }
    }
    if (total != it.module->dim()) {
      detail = it.name + ": dimensions do not add up";
      return false;
    }
  }
  detail = std::to_string(factors) + " constituents checked";
  return true;
}

bool restriction_semisimple(uint64_t seed, std::string& detail) {
  struct Case {
    int64_t N;
    std::vector<GMat> G, H;
    int64_t ell;
  };
  const GMat T = GMat::of(1, 1, 0, 1), L = GMat::of(1, 0, 1, 1);
  const std::vector<Case> cases{
      {3, {T, L, GMat::of(1, 0, 0, 2)}, {T, L}, 2},
      {3, {T, L, GMat::of(1, 0, 0, 2)}, {T, L}, 3},
      {3, {T, GMat::of(1, 0, 0, 2)}, {T}, 3},
      {3, {T, GMat::of(1, 0, 0, 2)}, {T}, 2},
      {4, {T, GMat::of(1, 0, 0, 3)}, {T}, 2},
  };
  size_t checked = 0;
  for (const auto& c : cases) {
    auto G = group_of(c.N, c.G);
    auto H = group_of(c.N, c.H);
    if (G->order() > 48 || !H->is_normal_in(*G)) {
      detail = "bad triple";
      return false;
    }
    for (const auto& k : coeffmod::constituents(*coeffmod::regular_module(Ring::finite_field(c.ell), G), seed)) {
      ++checked;
      if (!coeffmod::is_semisimple(coeffmod::matrix_module(*k.module->restricted(H)), seed)) {
        detail = "restriction not semisimple (N = " + std::to_string(c.N) + ", ell = " + std::to_string(c.ell) + ")";
        return false;
      }
    }
  }
  detail = std::to_string(cases.size()) + " triples, " + std::to_string(checked) + " irreducibles";
  return true;
}

coeffmod::ModulePtr sym(const Ring* F, int k) { return std::make_shared<coeffmod::SymModule>(F, k, 0); }

}  // namespace

std::vector<CheckResult> rep_checks(uint64_t seed) {
  return {timed_check("affine group over F3: constituents are characters of det",
                      [&](std::string& d) { return affine_f3(seed, d); }),
          timed_check("GL2(Z/4) over F2: constituents kill the reduction kernel", [&](std::string& d) { return gl2_mod4(seed, d); }),
          timed_check("restriction to normal subgroups is semisimple",
                      [&](std::string& d) { return restriction_semisimple(seed, d); })};
}

std::vector<CheckResult> selftest(uint64_t seed, int jobs) {
  using namespace algebra;
  const Ring* Q = Ring::rationals();
  const Ring* F5 = Ring::finite_field(5);
  std::vector<CheckResult> out;
  out.push_back(timed_check("degree formulas", [](std::string& d) {
    int n_ok = 0;
    for (int n : {2, 3})
      for (int m = 1; m <= n; ++m) {
        for (int64_t p : {2, 3, 5, 7}) {
          if (degree(hecke_tp(p, m, n, GroupDescriptor::full())) != degree_formula(p, m, n)) {
            d = "n=" + std::to_string(n) + " m=" + std::to_string(m) + " p=" + std::to_string(p);
            return false;
          }
          ++n_ok;
        }
      }
    d = std::to_string(n_ok) + " cases";
    return true;
  }));
  out.push_back(timed_check("series identities", [](std::string&) {
    return series_check(2, 2, 2) && series_check(3, 2, 2) && series_check(2, 3, 1) && series_check(3, 3, 1) &&
           series_check(2, 2, 2, GroupDescriptor::gamma0(3));
  }));
  out.push_back(timed_check("Hecke operators commute", [&](std::string& d) {
    struct Case {
      GroupDescriptor g;
      coeffmod::ModulePtr M;
    };
    const std::vector<Case> cases = {{GroupDescriptor::full(), sym(Q, 10)},
                                     {GroupDescriptor::gamma0(3), sym(F5, 2)},
                                     {GroupDescriptor::gamma1_upper(5), sym(F5, 2)},
                                     {GroupDescriptor::gamma0(11), sym(Q, 0)}};
    for (const auto& c : cases) {
      const auto H = cohom::h1(c.g, c.M);
      const auto labels = eigen::default_labels(c.g.level());
      std::vector<Matrix> ms;
      for (const auto& l : labels) ms.push_back(cohom::hecke_matrix(H, l).matrix);
      for (size_t i = 0; i < ms.size(); ++i)
        for (size_t j = i + 1; j < ms.size(); ++j)
          if (ms[i] * ms[j] != ms[j] * ms[i]) {
            d = c.g.name() + " " + labels[i].to_string() + " " + labels[j].to_string();
            return false;
          }
    }
    return true;
  }));
  out.push_back(timed_check("coboundaries map to coboundaries", [&](std::string&) {
    for (const auto& g : {GroupDescriptor::gamma0(3), GroupDescriptor::gamma1_upper(5)}) {
      const auto H = cohom::h1(g, sym(F5, 2), cohom::Path::Direct);
      const auto T = cohom::operator_for(H, {2, 1});
      for (const auto& b : H.coboundary_basis())
        if (!H.is_coboundary(cohom::hecke_cochain(T, H, H, b))) return false;
    }
    return true;
  }));
  out.push_back(timed_check("Shapiro: ambient and direct paths agree", [&](std::string& d) {
    struct Case {
      GroupDescriptor g;
      coeffmod::ModulePtr M;
    };
    const std::vector<Case> cases = {{GroupDescriptor::gamma0(3), sym(Q, 0)},
                                     {GroupDescriptor::gamma0(11), sym(Q, 0)},
                                     {GroupDescriptor::gamma1_upper(5), sym(F5, 2)}};
    for (const auto& c : cases) {
      const auto A = cohom::h1(c.g, c.M), D = cohom::h1(c.g, c.M, cohom::Path::Direct);
      cohom::shapiro(A, D);
      for (const auto& l : eigen::default_labels(c.g.level()))
        if (exact::char_poly(cohom::hecke_matrix(A, l).matrix) != exact::char_poly(cohom::hecke_matrix(D, l).matrix)) {
          d = c.g.name() + " " + l.to_string();
          return false;
        }
    }
    return true;
  }));
  out.push_back(timed_check("eigenvalue -24 of T2 on Sym10", [&](std::string& d) {
    const auto cp = exact::char_poly(cohom::hecke_matrix(cohom::h1(GroupDescriptor::full(), sym(Q, 10)), {2, 1}).matrix);
    const auto f = exact::Poly::from_ints(Q, {24, 1});
    d = cp.to_string();
    return (cp % (f * f)).is_zero();
  }));
  out.push_back(timed_check("flagship reduction (level 5, Sym10 over F5)", [&](std::string& d) {
    const auto g = GroupDescriptor::gamma1_upper(5);
    const std::vector<OpLabel> P = {{2, 1}, {3, 1}, {7, 1}};
    const auto rep = eigen::eigensystems(cohom::h1(g, sym(F5, 10)), P);
    eigen::ReductionTarget t;
    t.level = 1;
    t.modulus = 5;
    eigen::ReductionSearch search(t, 1, 5, P, jobs);
    for (const auto& e : rep.systems)
      if (!search.find(e.system, nlohmann::json::object()).verified) return false;
    d = std::to_string(rep.systems.size()) + " systems witnessed";
    return rep.consistent();
  }));
  for (auto& r : rep_checks(seed)) out.push_back(r);
  out.push_back(timed_check("constituents do not depend on the seed", [&](std::string&) {
    auto G = FiniteGroup::of_descriptor(GroupDescriptor::full(4));
    auto P = coeffmod::vector_permutation_module(Ring::finite_field(2), G);
    auto a = coeffmod::constituents(*P, seed), b = coeffmod::constituents(*P, seed ^ 0x9e3779b97f4a7c15ull);
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].multiplicity != b[i].multiplicity || a[i].module->generator_images() != b[i].module->generator_images())
        return false;
    return true;
  }));
  out.push_back(timed_check("twist composition and extraction", [&](std::string&) {
    const Ring* F7 = Ring::finite_field(7);
    SyntheticClassGroup C({3, 2});
    C.set_prime_class(2, {1, 0});
    C.set_prime_class(3, {0, 1});
    C.set_prime_class(5, {2, 1});
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 10; ++trial) {
      EigenSystem phi{F7, {}};
      for (int64_t p : {2, 3, 5, 11}) phi.values[{p, 1}] = Scalar(F7, static_cast<long>(1 + rng() % 6));
      const auto c1 = ClassCharacter::from_generators(C, F7, {Scalar(F7, 2L), Scalar(F7, -1L)});
      const auto c2 = ClassCharacter::from_generators(C, F7, {Scalar(F7, 4L), Scalar(F7, 1L)});
      if (twist_eigensystem(C, c1, twist_eigensystem(C, c2, phi)) != twist_eigensystem(C, c1 * c2, phi)) return false;
      if (!extract_twist(C, twist_eigensystem(C, c1, phi), phi).agrees_with(c1)) return false;
    }
    return true;
  }));
  return out;
}

}  // namespace hecke::cli
