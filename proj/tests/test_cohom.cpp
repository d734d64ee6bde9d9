#include <map>

#include "doctest.h"
#include "hecke/cohom/cohom.hpp"
#include "hecke/error.hpp"
#include "hecke/exact/poly.hpp"

using namespace hecke;
using namespace hecke::cohom;
using coeffmod::SymModule;
using exact::Poly;
using modgroup::SignPolicy;

namespace {

const exact::Ring* Q = exact::Ring::rationals();
const exact::Ring* F5 = exact::Ring::finite_field(5);

ModulePtr sym(const exact::Ring* F, int k, int e = 0) { return std::make_shared<SymModule>(F, k, e); }

// q prod (1 - q^n)^24, coefficients 0..n_max
std::vector<mpz_class> delta_q_expansion(int n_max) {
  std::vector<mpz_class> f(n_max + 1, 0);
  f[1] = 1;
  for (int n = 1; n <= n_max; ++n)
    for (int r = 0; r < 24; ++r)
      for (int i = n_max; i >= n; --i) f[i] -= f[i - n];
  return f;
}

Poly linear(const exact::Ring* F, const mpz_class& root) {
  return Poly(F, {exact::Scalar(F, mpq_class(-root)), exact::Scalar::one(F)});
}

Matrix op(const CohomSpace& H, int64_t p, int m = 1) { return hecke_matrix(H, {p, m}).matrix; }

}  // namespace

TEST_CASE("small cohomology groups") {
  CHECK(h1(GroupDescriptor::full(), sym(Q, 0)).dim() == 0);
  CHECK(h0(GroupDescriptor::full(), sym(F5, 0)).dim() == 1);
  CHECK(h0(GroupDescriptor::full(), sym(Q, 2)).dim() == 0);
  CHECK(h1(GroupDescriptor::gamma0(2), sym(Q, 0)).dim() == 1);
  CHECK(h1(GroupDescriptor::gamma0(2), sym(Q, 0), Path::Direct).dim() == 1);
  const auto H = h1(GroupDescriptor::full(), sym(Q, 10));
  CHECK(H.dim() == 3);
  CHECK(H.z1_dim() == H.b1_rank() + H.dim());
  for (const auto& b : H.coboundary_basis()) CHECK(H.is_coboundary(b));
  for (const auto& b : H.basis()) {
    CHECK(H.is_cocycle(b));
    CHECK_FALSE(H.is_coboundary(b));
  }
  CHECK_THROWS_AS(CohomSpace::compute(GroupDescriptor::full(), sym(Q, 0), 2), ValidationError);
}

TEST_CASE("cocycle evaluation follows the cocycle law") {
  const auto H = h1(GroupDescriptor::gamma0(3), sym(F5, 2), Path::Direct);
  REQUIRE(H.dim() > 0);
  const GMat a = GMat::of(1, 1, 0, 1), b = GMat::of(4, -1, 9, -2), c = GMat::of(-1, 0, 3, -1);
  const auto& M = *H.coefficients();
  for (const auto& x : H.basis()) {
    for (const auto& [g, h] : std::vector<std::pair<GMat, GMat>>{{a, b}, {b, c}, {c, a * b}}) {
      const Vector lhs = H.evaluate(x, g * h);
      const Vector rhs = exact::add(M.apply(H.evaluate(x, g), h), H.evaluate(x, h));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("Sym10 at level 1 against the q-expansion of Delta") {
  const auto tau = delta_q_expansion(8);
  CHECK(tau[2] == -24);
  CHECK(tau[3] == 252);
  const auto H = h1(GroupDescriptor::full(), sym(Q, 10));
  for (int64_t p : {2, 3, 5, 7}) {
    const Poly cp = exact::char_poly(op(H, p));
    mpz_class eis;
    mpz_ui_pow_ui(eis.get_mpz_t(), static_cast<unsigned long>(p), 11);
    eis += 1;
    const Poly expected = linear(Q, tau[p]) * linear(Q, tau[p]) * linear(Q, eis);
    CHECK_MESSAGE(cp == expected, "p = " << p << ": " << cp.to_string());
  }
}

TEST_CASE("degree 0 and the identity coset") {
  const auto H0 = h0(GroupDescriptor::gamma0(3), sym(Q, 0));
  REQUIRE(H0.dim() == 1);
  for (int64_t p : {2, 5, 7}) CHECK(op(H0, p)(0, 0) == exact::Scalar(Q, p + 1));
  for (const auto path : {Path::Ambient, Path::Direct}) {
    const auto H = h1(GroupDescriptor::gamma0(5), sym(F5, 2), path);
    const auto& G = H.acting_group();
    CHECK(hecke_action(algebra::identity_sum(G), H, H) == Matrix::identity(F5, H.dim()));
  }
}

TEST_CASE("Hecke operators preserve coboundaries") {
  const auto H = h1(GroupDescriptor::gamma0(3), sym(Q, 2), Path::Direct);
  for (int64_t p : {2, 5}) {
    const auto T = operator_for(H, {p, 1});
    for (const auto& b : H.coboundary_basis()) CHECK(H.is_coboundary(hecke_cochain(T, H, H, b)));
  }
}

TEST_CASE("Hecke operators commute on cohomology") {
  struct Case {
    int64_t N;
    ModulePtr M;
  };
  const std::vector<Case> cases = {{1, sym(Q, 0)}, {1, sym(F5, 2)}, {1, sym(Q, 10)}, {3, sym(Q, 0)},
                                   {3, sym(F5, 2)}, {5, sym(Q, 0)}, {5, sym(F5, 2)}};
  for (const auto& c : cases) {
    const auto H = h1(GroupDescriptor::gamma0(c.N), c.M);
    std::map<int64_t, Matrix> T;
    for (int64_t p : {2, 3, 7})
      if (p % c.N != 0) T[p] = op(H, p);
    for (const auto& [p, A] : T)
      for (const auto& [q, B] : T) CHECK_MESSAGE(A * B == B * A, "N=" << c.N << " p=" << p << " q=" << q);
  }
}

TEST_CASE("series identity T4 = T2^2 - 2 T2^(2) on Sym10") {
  const auto H = h1(GroupDescriptor::full(), sym(Q, 10));
  const Matrix t2 = op(H, 2), t22 = op(H, 2, 2), t4 = op(H, 4, 0);
  CHECK(t4 == t2 * t2 - t22.scaled(exact::Scalar(Q, 2L)));
  CHECK(t22 == Matrix::identity(Q, 3).scaled(exact::Scalar(Q, 1024L)));
}

TEST_CASE("Shapiro isomorphism") {
  const std::vector<GroupDescriptor> groups = {GroupDescriptor::gamma0(2), GroupDescriptor::gamma0(3),
                                               GroupDescriptor::gamma1_upper(5), GroupDescriptor::gamma0(11)};
  for (const auto& g : groups)
    for (const auto& M : {sym(Q, 0), sym(F5, 2)}) {
      for (int deg : {0, 1}) {
        const auto A = CohomSpace::compute(g, M, deg, Path::Ambient);
        const auto D = CohomSpace::compute(g, M, deg, Path::Direct);
        CHECK_MESSAGE(A.dim() == D.dim(), g.name() << " " << M->describe() << " degree " << deg);
        const Matrix S = shapiro(A, D);
        CHECK(exact::rank(S) == D.dim());
        // Shapiro intertwines the level-one operator on Ind with the operator on Gamma
        for (int64_t p : {2, 3, 7}) {
          if (modgroup::gcd64(p, g.level()) != 1) continue;
          const Matrix ta = op(A, p), td = op(D, p);
          CHECK_MESSAGE(ta * S == S * td, g.name() << " " << M->describe() << " degree " << deg << " p=" << p);
        }
      }
    }
}

TEST_CASE("ambient and direct characteristic polynomials agree") {
  const auto g = GroupDescriptor::gamma0(3);
  const auto A = h1(g, sym(Q, 0)), D = h1(g, sym(Q, 0), Path::Direct);
  for (int64_t p : {2, 5, 7}) CHECK(exact::char_poly(op(A, p)) == exact::char_poly(op(D, p)));
}

TEST_CASE("Gamma0(11) newform") {
  const auto H = h1(GroupDescriptor::gamma0(11), sym(Q, 0));
  REQUIRE(H.dim() == 3);
  // Eisenstein 1 + p, newform a_2 = -2, a_3 = -1
  CHECK(exact::char_poly(op(H, 2)) == linear(Q, 3) * linear(Q, -2) * linear(Q, -2));
  CHECK(exact::char_poly(op(H, 3)) == linear(Q, 4) * linear(Q, -1) * linear(Q, -1));
  const auto Hgl = h1(GroupDescriptor::gamma0(11, SignPolicy::GL), sym(Q, 0));
  // J inverts T, so invariant classes vanish on the cusps: only the newform is left
  CHECK(Hgl.dim() == 1);
  CHECK(exact::char_poly(op(Hgl, 2)) == linear(Q, -2));
  CHECK(h1(GroupDescriptor::gamma0(2, SignPolicy::GL), sym(Q, 0)).dim() == 0);
}

TEST_CASE("operators need determinants prime to the level") {
  const auto H = h1(GroupDescriptor::gamma0(3), sym(Q, 0));
  CHECK_THROWS_AS(op(H, 3), MathError);
  CHECK_THROWS_AS(op(H, 2, 3), ValidationError);
  CHECK_THROWS_AS(H.coordinates(exact::zero_vector(Q, H.cochain_dim() + 1)), ValidationError);
}

TEST_CASE("Hecke matrix records") {
  const auto H = h1(GroupDescriptor::gamma1_upper(5), sym(F5, 2));
  const auto h = hecke_matrix(H, {2, 1});
  const auto back = HeckeMatrix::from_json(h.to_json());
  CHECK(back.matrix == h.matrix);
  CHECK(back.label == h.label);
  CHECK(back.field == F5);
  CHECK(back.group_hash == h.group_hash);
  CHECK(back.module_hash == h.module_hash);
  CHECK(h.module_hash == hecke_matrix(h1(GroupDescriptor::gamma0(5), sym(F5, 2)), {2, 1}).module_hash);
  CHECK_THROWS_AS(HeckeMatrix::from_json(nlohmann::json{{"label", 1}}), ValidationError);
}

TEST_CASE("conjugation transport") {
  const GMat I = GMat::identity(), S = GMat::of(0, -1, 1, 0), mI = GMat::of(-1, 0, 0, -1);
  const auto g4 = GroupDescriptor::gamma0(4);
  const auto T = algebra::hecke_tp(3, 1, 2, g4);
  for (const auto& M : {sym(Q, 0), sym(F5, 2)}) {
    for (int deg : {0, 1}) {
      const auto id = conjugation_transport(I, I, T, M, deg);
      CHECK(id.commutes);
      CHECK(id.left == Matrix::identity(M->ring(), id.left.rows()));
      CHECK(id.top == id.bottom);
      const auto sq = conjugation_transport(S, S, T, M, deg);
      CHECK(sq.commutes);
      CHECK(exact::rank(sq.left) == sq.left.rows());
      CHECK(exact::char_poly(sq.top) == exact::char_poly(sq.bottom));
      CHECK(conjugation_transport(mI, mI, T, M, deg).commutes);
    }
  }
  // different conjugators on the two sides
  const auto g2 = GroupDescriptor::gamma0(2);
  const auto T2 = algebra::decompose(g4, GMat::of(1, 0, 0, 3), g2);
  CHECK(conjugation_transport(S, GMat::of(1, 1, 0, 1), T2, sym(F5, 2), 1).commutes);
}
