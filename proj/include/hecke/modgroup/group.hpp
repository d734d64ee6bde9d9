#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hecke/modgroup/gmat.hpp"
#include "json.hpp"

namespace hecke::modgroup {

enum class SignPolicy { SL, GL };
enum class GroupType { Gamma0, Gamma1Upper, GammaDiag, Full, Custom };

std::string to_string(SignPolicy s);
std::string to_string(GroupType t);

// Element of GL_2(Z/N) packed as ((a*N + b)*N + c)*N + d.
using ModCode = int64_t;

// Congruence subgroup of SL_2(Z) or GL_2(Z) given by its level N, the image
// subgroup H of GL_2(Z/N) (fully enumerated) and a sign policy.
class GroupDescriptor {
 public:
  static GroupDescriptor gamma0(int64_t N, SignPolicy s = SignPolicy::SL);
  static GroupDescriptor gamma1_upper(int64_t N, SignPolicy s = SignPolicy::SL);
  static GroupDescriptor gamma_diag(int64_t N, SignPolicy s = SignPolicy::SL);
  static GroupDescriptor full(int64_t N = 1, SignPolicy s = SignPolicy::SL);
  static GroupDescriptor custom(int64_t N, const std::vector<GMat>& generators, SignPolicy s = SignPolicy::SL);
  // {n, N, type, generators?, sign}
  static GroupDescriptor from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int64_t level() const { return N_; }
  SignPolicy sign_policy() const { return sign_; }
  GroupType type() const { return type_; }
  bool conjugated() const { return conjugated_; }
  // H as reduced 2x2 matrices, sorted by code.
  const std::vector<GMat>& h_elements() const { return data_->elements; }
  const std::vector<GMat>& h_generators() const { return data_->generators; }
  size_t h_order() const { return data_->elements.size(); }

  ModCode code(const GMat& g) const;
  GMat decode(ModCode c) const;
  bool h_contains(const GMat& g) const;

  // gamma in Gamma: det allowed by the sign policy and gamma mod N in H.
  bool contains(const GMat& g) const;
  // delta in Delta_H: det != 0, gcd(det, N) = 1, delta mod N in H, det > 0 under SL.
  bool in_semigroup(const GMat& d) const;

  // g Gamma g^{-1} for a unit g (H conjugated by g mod N).
  GroupDescriptor conjugate(const GMat& g) const;
  // Same H viewed at level M (N | M), pulled back along Z/M -> Z/N.
  GroupDescriptor lift(int64_t M) const;

  std::string name() const;
  std::string hash() const;
  bool operator==(const GroupDescriptor& o) const;
  bool operator!=(const GroupDescriptor& o) const { return !(*this == o); }

 private:
  struct Data {
    std::vector<GMat> elements;
    std::vector<GMat> generators;
    std::unordered_map<ModCode, size_t> index;
  };
  GroupDescriptor() = default;
  void finish(std::vector<GMat> elements, std::vector<GMat> generators);

  int64_t N_ = 1;
  SignPolicy sign_ = SignPolicy::SL;
  GroupType type_ = GroupType::Full;
  bool conjugated_ = false;
  std::string label_;
  std::shared_ptr<const Data> data_;
};

int64_t gcd64(int64_t a, int64_t b);
std::vector<int64_t> units_mod(int64_t N);

// --- presentations ---------------------------------------------------------

struct Letter {
  int gen;
  int exp;  // +1 or -1
  bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};
using Word = std::vector<Letter>;

struct Presentation {
  std::vector<std::string> names;
  std::vector<GMat> gens;
  std::vector<Word> relators;
};

// <S, U | S^4, U^6, S^2 U^-3>, S = (0,-1;1,0), U = S*T.
const Presentation& sl2_presentation();
// Adds J = diag(1,-1) with J^2, (JS)^2 and J U J = S^-1 U^-1 S.
const Presentation& gl2_presentation();
const Presentation& ambient_presentation(SignPolicy s);

GMat evaluate(const Presentation& p, const Word& w);
Word inverse(const Word& w);
std::string to_string(const Presentation& p, const Word& w);
bool relators_hold(const Presentation& p);
// The generators' images generate SL_2(Z/N) (resp. GL_2(Z/N), signs included).
bool surjective_mod(const Presentation& p, int64_t N, SignPolicy s);
// Todd-Coxeter index of the subgroup generated by `sub` (0 if the table
// exceeds `limit` cosets).
size_t coset_enumeration_index(const Presentation& p, const std::vector<Word>& sub, size_t limit = 100000);

// --- words in S, T, J ------------------------------------------------------

struct STJLetter {
  char sym;  // 'S', 'T' or 'J'
  int64_t exp;
  bool operator==(const STJLetter& o) const { return sym == o.sym && exp == o.exp; }
};
using STJWord = std::vector<STJLetter>;

// Continued-fraction reduction of the bottom row; result verified.
STJWord word_decompose(const GMat& g);
GMat evaluate(const STJWord& w);
std::string to_string(const STJWord& w);
// Rewrite into the ambient presentation's generators.
Word to_ambient(const STJWord& w, SignPolicy s);

// --- coset tables and subgroup presentations -------------------------------

// Right cosets Gamma \ G for the ambient G of the descriptor's sign policy,
// with a Schreier transversal from a BFS over the ambient generators.
class CosetTable {
 public:
  explicit CosetTable(const GroupDescriptor& g);
  size_t index() const { return reps_.size(); }
  const std::vector<GMat>& reps() const { return reps_; }
  const std::vector<Word>& rep_words() const { return words_; }
  // Coset of an ambient unit.
  size_t lookup(const GMat& g) const;
  // coset of rep_i * gen^exp
  size_t act(size_t coset, int gen, int exp = 1) const;
  // tree edge: coset reached first from parent via generator
  bool is_tree_edge(size_t coset, int gen) const;

 private:
  int64_t key(const GMat& g) const;
  GroupDescriptor desc_;
  const Presentation* amb_;
  std::unordered_map<int64_t, size_t> class_of_;
  std::vector<GMat> reps_;
  std::vector<Word> words_;
  std::vector<std::vector<size_t>> fwd_, bwd_;
  std::vector<std::vector<bool>> tree_;
};

// Gamma with its Reidemeister-Schreier presentation over the ambient one.
class PresentedGroup {
 public:
  explicit PresentedGroup(const GroupDescriptor& g);
  const GroupDescriptor& descriptor() const { return desc_; }
  const Presentation& ambient() const { return *amb_; }
  const CosetTable& cosets() const { return table_; }
  const Presentation& presentation() const { return pres_; }
  // Rewrite an ambient word read from coset `start`; returns end coset too.
  Word rewrite(const Word& w, size_t start, size_t* end = nullptr) const;
  // Word in the Schreier generators for t in Gamma.
  Word word_for(const GMat& t) const;

 private:
  GroupDescriptor desc_;
  const Presentation* amb_;
  CosetTable table_;
  Presentation pres_;
  std::vector<int> schreier_;  // coset * ngens + gen -> generator index, or -1
};

// Process-wide cache keyed by descriptor hash and sign policy.
const PresentedGroup& presented_group(const GroupDescriptor& g);

// Rank of the free part of the abelianization: generators minus the rational
// rank of the relator exponent matrix.
size_t abelianization_free_rank(const Presentation& p);

}  // namespace hecke::modgroup
