#include <random>
#include <set>

#include "doctest.h"
#include "hecke/error.hpp"
#include "hecke/modgroup/group.hpp"

using namespace hecke;
using namespace hecke::modgroup;

namespace {
const GMat S = GMat::of(0, -1, 1, 0);
const GMat T = GMat::of(1, 1, 0, 1);
const GMat J = GMat::of(1, 0, 0, -1);

// oracle: number of lines in (Z/N)^2 = |P^1(Z/N)|
long p1_size(long N) {
  long count = 0;
  for (long a = 0; a < N; ++a)
    for (long b = 0; b < N; ++b) {
      if (gcd64(gcd64(a, b), N) != 1) continue;
      ++count;
    }
  long units = 0;
  for (long u = 1; u <= N; ++u)
    if (gcd64(u, N) == 1) ++units;
  return count / units;
}
}  // namespace

TEST_CASE("membership") {
  auto g0 = GroupDescriptor::gamma0(4);
  CHECK(g0.contains(T));
  CHECK_FALSE(g0.contains(GMat::of(1, 0, 1, 1)));
  auto g1 = GroupDescriptor::gamma1_upper(3, SignPolicy::GL);
  // oracle: enumerate the (1,*)-upper triangular group mod 3 by hand
  std::vector<GMat> H;
  for (int b = 0; b < 3; ++b)
    for (int d = 1; d < 3; ++d) H.push_back(GMat::of(1, b, 0, d));
  CHECK(g1.h_order() == H.size());
  bool in = false;
  for (auto& h : H) in = in || h == J.reduced(3);
  CHECK(in);
  CHECK(g1.contains(J));
  CHECK_FALSE(GroupDescriptor::gamma1_upper(3, SignPolicy::SL).contains(J));
  CHECK(GroupDescriptor::gamma_diag(6).h_order() == 2);
  CHECK_THROWS_AS(GroupDescriptor::custom(5, {GMat::of(1, 1, 0, 1)}), ValidationError);
}

TEST_CASE("descriptor json round trip") {
  auto j = nlohmann::json::parse(R"({"n":2,"N":5,"type":"gamma1_upper","sign":"SL"})");
  auto g = GroupDescriptor::from_json(j);
  CHECK(g == GroupDescriptor::gamma1_upper(5));
  CHECK(GroupDescriptor::from_json(g.to_json()).hash() == g.hash());
  auto c = GroupDescriptor::custom(3, {GMat::of(1, 1, 0, 1), GMat::of(1, 0, 0, 2)}, SignPolicy::GL);
  CHECK(GroupDescriptor::from_json(c.to_json()) == c);
  CHECK(c == GroupDescriptor::gamma1_upper(3, SignPolicy::GL));
  CHECK_THROWS_AS(GroupDescriptor::from_json(nlohmann::json::parse(R"({"N":5,"type":"bogus"})")), ValidationError);
  CHECK_THROWS_AS(GroupDescriptor::from_json(nlohmann::json::parse(R"({"n":3,"N":5,"type":"gamma0"})")), ValidationError);
}

TEST_CASE("coset tables") {
  CHECK(CosetTable(GroupDescriptor::gamma0(2)).index() == 3);
  CHECK(p1_size(2) == 3);
  CHECK(CosetTable(GroupDescriptor::full(1)).index() == 1);
  CHECK(CosetTable(GroupDescriptor::gamma1_upper(5)).index() == 24);
  for (long N : {3, 4, 5, 6, 7, 8, 9, 10, 12}) CHECK(CosetTable(GroupDescriptor::gamma0(N)).index() == p1_size(N));
  // GL ambient: Gamma0(N) with GL policy has the same index
  CHECK(CosetTable(GroupDescriptor::gamma0(6, SignPolicy::GL)).index() == 12);
}

TEST_CASE("coset lookup is right-Gamma-consistent") {
  std::mt19937_64 rng(7);
  for (auto desc : {GroupDescriptor::gamma0(4), GroupDescriptor::gamma1_upper(5), GroupDescriptor::gamma0(6, SignPolicy::GL)}) {
    CosetTable t(desc);
    PresentedGroup pg(desc);
    const auto& gens = pg.presentation().gens;
    std::set<size_t> seen;
    for (size_t i = 0; i < t.index(); ++i) {
      CHECK(t.lookup(t.reps()[i]) == i);
      seen.insert(t.lookup(t.reps()[i]));
    }
    CHECK(seen.size() == t.index());
    // random gamma in Gamma as products of Schreier generators; Gamma g_i = Gamma gamma g_i
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    for (int trial = 0; trial < 200; ++trial) {
      GMat gamma = GMat::identity();
      for (int k = 0; k < 4; ++k) gamma = gamma * gens[pick(rng)];
      const size_t i = trial % t.index();
      CHECK(t.lookup(gamma * t.reps()[i]) == i);
      CHECK(desc.contains(gamma));
    }
  }
}

TEST_CASE("word decomposition examples") {
  CHECK(to_string(word_decompose(T)) == "T");
  CHECK(to_string(word_decompose(S)) == "S");
  GMat L = GMat::of(1, 0, 1, 1);
  CHECK(evaluate(word_decompose(L)) == L);
  CHECK(evaluate(word_decompose(J)) == J);
}

TEST_CASE("word decomposition round trip") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> letter(0, 5), len(0, 40);
  const std::vector<GMat> alphabet = {S, S.inverse(), T, T.inverse(), J, J};
  for (int trial = 0; trial < 10000; ++trial) {
    GMat g = GMat::identity();
    const int n = len(rng);
    for (int k = 0; k < n; ++k) g = g * alphabet[static_cast<size_t>(letter(rng))];
    auto w = word_decompose(g);
    REQUIRE(evaluate(w) == g);
    if (g.det() == 1) REQUIRE(evaluate(sl2_presentation(), to_ambient(w, SignPolicy::SL)) == g);
    REQUIRE(evaluate(gl2_presentation(), to_ambient(w, SignPolicy::GL)) == g);
  }
}

TEST_CASE("ambient presentations") {
  CHECK(relators_hold(sl2_presentation()));
  CHECK(relators_hold(gl2_presentation()));
  for (long N = 2; N <= 12; ++N) {
    CHECK(surjective_mod(sl2_presentation(), N, SignPolicy::SL));
    CHECK(surjective_mod(gl2_presentation(), N, SignPolicy::GL));
  }
  // <S, U> has index 2 in the presented GL group
  CHECK(coset_enumeration_index(gl2_presentation(), {{{0, 1}}, {{1, 1}}}) == 2);
  // sanity of the enumerator: the presented SL group mod <S> ... use finite quotients instead
  Presentation z6 = sl2_presentation();
  z6.relators.push_back({{0, 1}, {1, 1}, {0, -1}, {1, -1}});  // abelianize
  CHECK(coset_enumeration_index(z6, {}) == 12);
}

TEST_CASE("subgroup presentations") {
  auto lvl1 = PresentedGroup(GroupDescriptor::full(1));
  CHECK(lvl1.presentation().gens == sl2_presentation().gens);
  CHECK(lvl1.presentation().relators.size() == sl2_presentation().relators.size());
  auto lvl1gl = PresentedGroup(GroupDescriptor::full(1, SignPolicy::GL));
  CHECK(lvl1gl.presentation().gens == gl2_presentation().gens);

  for (auto desc : {GroupDescriptor::gamma0(2), GroupDescriptor::gamma0(3), GroupDescriptor::gamma1_upper(5),
                    GroupDescriptor::gamma0(4, SignPolicy::GL)}) {
    PresentedGroup pg(desc);
    const size_t idx = pg.cosets().index(), m = pg.ambient().gens.size();
    CHECK(pg.presentation().gens.size() == idx * m - idx + 1);
    CHECK(relators_hold(pg.presentation()));
    for (const auto& g : pg.presentation().gens) CHECK(desc.contains(g));
  }
  // Gamma0(2)/{+-1} is Z * Z/2, so one free generator survives abelianization
  CHECK(abelianization_free_rank(PresentedGroup(GroupDescriptor::gamma0(2)).presentation()) == 1);
  CHECK(abelianization_free_rank(sl2_presentation()) == 0);
  // Gamma1(5) is free of rank 3
  CHECK(abelianization_free_rank(PresentedGroup(GroupDescriptor::gamma1_upper(5)).presentation()) == 3);
}

TEST_CASE("word_for elements of the subgroup") {
  std::mt19937_64 rng(5);
  PresentedGroup pg(GroupDescriptor::gamma0(3));
  std::uniform_int_distribution<size_t> pick(0, pg.presentation().gens.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    GMat g = GMat::identity();
    for (int k = 0; k < 5; ++k) {
      GMat x = pg.presentation().gens[pick(rng)];
      g = g * (trial % 2 ? x : x.inverse());
    }
    CHECK(evaluate(pg.presentation(), pg.word_for(g)) == g);
  }
}

TEST_CASE("conjugated descriptors") {
  auto g = GroupDescriptor::gamma0(4);
  auto c = g.conjugate(S);
  CHECK(c.conjugated());
  // S Gamma0(4) S^-1 is the lower-triangular group
  CHECK(c.contains(GMat::of(1, 0, 4, 1)));
  CHECK_FALSE(c.contains(T));
  CHECK(CosetTable(c).index() == 6);
}
