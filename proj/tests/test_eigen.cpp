#include <random>

#include "doctest.h"
#include "hecke/eigen/eigen.hpp"
#include "hecke/error.hpp"

using namespace hecke;
using namespace hecke::eigen;
using coeffmod::SymModule;

namespace {

const Ring* Q = Ring::rationals();
const Ring* F5 = Ring::finite_field(5);

coeffmod::ModulePtr sym(const Ring* F, int k) { return std::make_shared<SymModule>(F, k, 0); }

EigenSystem sys(const Ring* F, std::vector<std::pair<int64_t, long>> vals) {
  EigenSystem e{F, {}};
  for (const auto& [p, v] : vals) e.values.emplace(OpLabel{p, 1}, Scalar(F, v));
  return e;
}

const std::vector<OpLabel> P237 = {{2, 1}, {3, 1}, {7, 1}};

ReductionTarget upper(int64_t N, int64_t L) {
  ReductionTarget t;
  t.kind = TargetKind::Upper;
  t.level = N;
  t.modulus = L;
  return t;
}

}  // namespace

TEST_CASE("eigensystems on small matrices") {
  SUBCASE("diagonal over F5") {
    const auto r = eigensystems(F5, 2, {{2, 1}}, {Matrix::from_ints(F5, {{1, 0}, {0, 2}})});
    REQUIRE(r.systems.size() == 2);
    CHECK(r.systems[0].system.values.at({2, 1}) == Scalar(F5, 1L));
    CHECK(r.systems[1].system.values.at({2, 1}) == Scalar(F5, 2L));
    CHECK(r.consistent());
  }
  SUBCASE("zero-dimensional") {
    const auto r = eigensystems(cohom::h1(GroupDescriptor::full(), sym(Q, 0)), std::vector<OpLabel>{{2, 1}});
    CHECK(r.systems.empty());
    CHECK(r.consistent());
  }
  SUBCASE("lazy extension") {
    // x^2 - 2 is irreducible mod 5
    const auto r = eigensystems(F5, 2, {{2, 1}}, {Matrix::from_ints(F5, {{0, 1}, {2, 0}})});
    REQUIRE(r.systems.size() == 2);
    for (const auto& e : r.systems) {
      CHECK(e.split);
      CHECK(e.system.ring == Ring::finite_field(5, 2));
      const Scalar v = e.system.values.at({2, 1});
      CHECK(v * v == Scalar(e.system.ring, 2L));
      CHECK(e.factors.at({2, 1}).degree() == 2);
    }
    CHECK(r.systems[0].system.values != r.systems[1].system.values);
    CHECK(r.consistent());
  }
  SUBCASE("non-rational over Q") {
    const auto r = eigensystems(Q, 2, {{2, 1}}, {Matrix::from_ints(Q, {{0, 1}, {2, 0}})});
    REQUIRE(r.systems.size() == 1);
    CHECK_FALSE(r.systems[0].split);
    CHECK(r.systems[0].dim == 2);
    CHECK(r.systems[0].multiplicity == 1);
    CHECK(r.consistent());
  }
  SUBCASE("non-commuting") {
    const Matrix a = Matrix::from_ints(Q, {{1, 1}, {0, 1}}), b = Matrix::from_ints(Q, {{1, 0}, {1, 1}});
    CHECK_THROWS_AS(eigensystems(Q, 2, {{2, 1}, {3, 1}}, {a, b}), MathError);
  }
}

TEST_CASE("field embeddings are ring maps") {
  std::mt19937_64 rng(7);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 4}, {2, 6}, {3, 6}}) {
    const Ring* A = Ring::finite_field(5, a);
    const Ring* B = Ring::finite_field(5, b);
    for (int t = 0; t < 30; ++t) {
      const Scalar x = Scalar::from_code(A, static_cast<int64_t>(rng() % static_cast<uint64_t>(A->order())));
      const Scalar y = Scalar::from_code(A, static_cast<int64_t>(rng() % static_cast<uint64_t>(A->order())));
      CHECK(embed(x + y, B) == embed(x, B) + embed(y, B));
      CHECK(embed(x * y, B) == embed(x, B) * embed(y, B));
    }
  }
  CHECK(common_field(Ring::finite_field(5, 2), Ring::finite_field(5, 3)) == Ring::finite_field(5, 6));
  CHECK(common_field(Q, F5) == nullptr);
}

TEST_CASE("level one Sym10 over Q") {
  const auto H = cohom::h1(GroupDescriptor::full(), sym(Q, 10));
  const auto r = eigensystems(H, std::vector<OpLabel>{{2, 1}});
  REQUIRE(r.systems.size() == 2);
  CHECK(r.systems[0].system.values.at({2, 1}) == Scalar(Q, -24L));
  CHECK(r.systems[0].dim == 2);
  CHECK(r.systems[1].system.values.at({2, 1}) == Scalar(Q, 2049L));
  CHECK(r.systems[1].dim == 1);
}

TEST_CASE("level one Sym22: a non-rational pair") {
  const auto H = cohom::h1(GroupDescriptor::full(), sym(Q, 22));
  REQUIRE(H.dim() == 5);
  const auto r = eigensystems(H, std::vector<OpLabel>{{2, 1}});
  CHECK(r.consistent());
  bool quadratic = false;
  for (const auto& e : r.systems)
    if (!e.split) {
      // the weight 24 cusp forms: x^2 - 1080 x - 20468736
      CHECK(e.factors.at({2, 1}) == exact::Poly::from_ints(Q, {-20468736, -1080, 1}));
      CHECK(e.dim == 4);
      CHECK(e.multiplicity == 2);
      quadratic = true;
    }
  CHECK(quadratic);
}

TEST_CASE("occurrence") {
  const auto H = cohom::h1(GroupDescriptor::full(), sym(F5, 10));
  const std::vector<OpLabel> L = {{2, 1}, {3, 1}};
  const auto r = eigensystems(H, L);
  for (const auto& e : r.systems) {
    CHECK(occurs_in(e.system, r));
    EigenSystem bad = e.system;
    bad.values.at({2, 1}) = bad.values.at({2, 1}) + Scalar::one(F5);
    bool elsewhere = false;
    for (const auto& f : r.systems) elsewhere = elsewhere || f.system == bad;
    CHECK(occurs_in(bad, r) == elsewhere);
    EigenSystem one = e.system;
    one.values.erase({3, 1});
    CHECK(occurs_in(one, r));
  }
  // tau(2) = -24 = 1, tau(3) = 252 = 2 mod 5
  CHECK(occurs_in(sys(F5, {{2, 1}, {3, 2}}), r));
  CHECK_FALSE(occurs_in(sys(F5, {{2, 1}, {3, 3}}), r));
  // an F25 value matches only up to embedding
  const Ring* F25 = Ring::finite_field(5, 2);
  EigenSystem lifted{F25, {{{2, 1}, Scalar(F25, 1L)}, {{3, 1}, Scalar(F25, 2L)}}};
  CHECK(occurs_in(lifted, r));
}

TEST_CASE("Dirichlet characters") {
  CHECK(dirichlet_characters(5, 5).size() == 8);
  CHECK(dirichlet_characters(5, 0).size() == 4);
  CHECK(dirichlet_characters(8, 3).size() == 8);
  CHECK(dirichlet_characters(7, 2).size() == 3);
  CHECK(dirichlet_characters(1, 5).size() == 2);
  const auto chis = dirichlet_characters(5, 5);
  CHECK(chis.front() == coeffmod::Character::trivial(5, F5));
  for (size_t i = 0; i + 1 < chis.size(); ++i) CHECK_FALSE(chis[i] == chis[i + 1]);
}

TEST_CASE("reduction: identity case") {
  const EigenSystem phi = sys(F5, {{2, 3}, {3, 4}, {7, 8}});
  ReductionSource src;
  src.group = GroupDescriptor::full();
  src.module = sym(F5, 0);
  src.degree = 0;
  const auto w = reduce_to_one_dim(phi, src, upper(1, 5), 5, P237);
  CHECK(w.j == 0);
  CHECK(w.chi == coeffmod::Character::trivial(5, F5));
  CHECK(w.verified);
  ReductionTarget diag;
  diag.kind = TargetKind::Diagonal;
  const auto w1 = reduce_to_one_dim(phi, src, diag, 5, P237);
  CHECK(w1.j == 0);
  CHECK(w1.chi == coeffmod::Character::trivial(1, F5));
  CHECK_THROWS_AS(reduce_to_one_dim(sys(F5, {{2, 1}, {3, 4}, {7, 3}}), src, diag, 5, P237), ValidationError);
}

TEST_CASE("reduction: flagship") {
  const auto g = GroupDescriptor::gamma1_upper(5);
  const auto H = cohom::h1(g, sym(F5, 10));
  const auto r = eigensystems(H, P237);
  REQUIRE(r.consistent());
  ReductionSearch search(upper(1, 5), 1, 5, P237);
  ReductionSearch search3(upper(1, 5), 1, 5, P237, 3);
  ReductionSource src{g, sym(F5, 10), 1};
  for (const auto& e : r.systems) {
    const auto w = search.find(e.system, src.to_json());
    CHECK(w.verified);
    CHECK(w.j <= 1);
    CHECK(verify_certificate(w.to_json()));
    CHECK(search3.find(e.system, src.to_json()).to_json() == w.to_json());
  }
  const EigenSystem tau = sys(F5, {{2, 1}, {3, 2}, {7, 1}});
  CHECK(occurs_in(tau, r));
  const auto w = reduce_to_one_dim(tau, src, upper(1, 5), 5, P237);
  CHECK(w.j == 1);
  CHECK(w.chi == coeffmod::Character::trivial(5, F5));
  // tampering with the recorded system breaks the certificate
  auto cert = w.to_json();
  cert["phi"]["values"]["T2"] = "0";
  CHECK_FALSE(verify_certificate(cert));
  try {
    search.find(sys(F5, {{2, 0}, {3, 0}, {7, 0}}), src.to_json());
    CHECK(false);
  } catch (const MathError& e) {
    CHECK(std::string(e.what()) == "no witness found");
  }
}

TEST_CASE("reduction: one-dimensional source recovers itself") {
  const auto g = GroupDescriptor::gamma1_upper(5);
  const auto chi0 = coeffmod::Character(5, F5, Scalar::one(F5), {2}, {Scalar(F5, 2L)});
  auto V = coeffmod::character_module(chi0, coeffmod::FiniteGroup::of_descriptor(g));
  const auto H = cohom::h1(g, V, cohom::Path::Direct);
  const auto r = eigensystems(H, P237);
  REQUIRE(!r.systems.empty());
  ReductionSearch search(upper(1, 5), 1, 5, P237);
  for (const auto& e : r.systems) {
    bool self = false;
    for (size_t i : search.matching(e.system)) {
      const auto& c = search.candidates()[i];
      self = self || (c.j == 1 && c.chi == chi0);
    }
    CHECK(self);
  }
}

TEST_CASE("reduction commutes with twisting") {
  // C = Z/4 = (Z/5)^* through the discrete log base 2
  algebra::SyntheticClassGroup C({4});
  for (auto [p, lg] : std::vector<std::pair<int64_t, int64_t>>{{2, 1}, {3, 3}, {7, 1}}) C.set_prime_class(p, {lg});
  const auto chi0 = algebra::ClassCharacter::from_generators(C, F5, {Scalar(F5, 2L)});
  const auto g = GroupDescriptor::gamma1_upper(5);
  const auto r = eigensystems(cohom::h1(g, sym(F5, 10)), P237);
  ReductionSearch search(upper(1, 5), 1, 5, P237);
  ReductionSource src{g, sym(F5, 10), 1};
  for (const auto& e : r.systems) {
    const EigenSystem tw = algebra::twist_eigensystem(C, chi0, e.system);
    // chi0 is the identity character u -> u mod 5
    for (const auto& l : P237) CHECK(tw.values.at(l) == Scalar(F5, static_cast<long>(l.p)) * e.system.values.at(l));
    const auto w = search.find(e.system, src.to_json());
    const auto wt = search.find(tw, src.to_json());
    CHECK(algebra::extract_twist(C, wt.matched.system, w.matched.system).agrees_with(chi0));
  }
}
