#include "hecke/modgroup/group.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "hecke/error.hpp"
#include "hecke/exact/matrix.hpp"

namespace hecke::modgroup {

std::string to_string(SignPolicy s) { return s == SignPolicy::SL ? "SL" : "GL"; }

std::string to_string(GroupType t) {
  switch (t) {
    case GroupType::Gamma0: return "gamma0";
    case GroupType::Gamma1Upper: return "gamma1_upper";
    case GroupType::GammaDiag: return "gamma_diag";
    case GroupType::Full: return "full";
    case GroupType::Custom: return "custom";
  }
  return "?";
}

int64_t gcd64(int64_t a, int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::vector<int64_t> units_mod(int64_t N) {
  std::vector<int64_t> r;
  if (N == 1) return {0};
  for (int64_t x = 1; x < N; ++x)
    if (gcd64(x, N) == 1) r.push_back(x);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

GMat mulmod(const GMat& x, const GMat& y, int64_t N) {
  return GMat::of(mod_pos(x.a() * y.a() + x.b() * y.c(), N), mod_pos(x.a() * y.b() + x.b() * y.d(), N),
                  mod_pos(x.c() * y.a() + x.d() * y.c(), N), mod_pos(x.c() * y.b() + x.d() * y.d(), N));
}

std::vector<GMat> closure(const std::vector<GMat>& gens, int64_t N) {
  std::unordered_set<GMat, GMatHash> seen;
  std::vector<GMat> out;
  GMat id = GMat::identity().reduced(N);
  seen.insert(id);
  out.push_back(id);
  for (size_t i = 0; i < out.size(); ++i)
    for (const auto& g : gens) {
      GMat y = mulmod(out[i], g, N);
      if (seen.insert(y).second) out.push_back(y);
    }
  return out;
}

template <typename Pred>
std::vector<GMat> enumerate_mod(int64_t N, Pred pred) {
  std::vector<GMat> out;
  for (int64_t a = 0; a < N; ++a)
    for (int64_t b = 0; b < N; ++b)
      for (int64_t c = 0; c < N; ++c)
        for (int64_t d = 0; d < N; ++d) {
          if (gcd64(mod_pos(a * d - b * c, N), N) != 1 && N != 1) continue;
          if (pred(a, b, c, d)) out.push_back(GMat::of(a, b, c, d));
        }
  return out;
}

std::string fnv_hex(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ModCode GroupDescriptor::code(const GMat& g) const {
  const int64_t N = N_;
  return ((mod_pos(g.a(), N) * N + mod_pos(g.b(), N)) * N + mod_pos(g.c(), N)) * N + mod_pos(g.d(), N);
}

GMat GroupDescriptor::decode(ModCode c) const {
  const int64_t N = N_;
  int64_t d = c % N;
  c /= N;
  int64_t cc = c % N;
  c /= N;
  int64_t b = c % N;
  c /= N;
  return GMat::of(c, b, cc, d);
}

void GroupDescriptor::finish(std::vector<GMat> elements, std::vector<GMat> generators) {
  auto data = std::make_shared<Data>();
  std::sort(elements.begin(), elements.end(), [&](const GMat& x, const GMat& y) { return code(x) < code(y); });
  data->elements = std::move(elements);
  for (size_t i = 0; i < data->elements.size(); ++i) data->index[code(data->elements[i])] = i;
  if (generators.empty()) {
    // greedy generating set in code order
    std::vector<GMat> gens;
    std::unordered_set<ModCode> span{code(GMat::identity())};
    for (const auto& e : data->elements) {
      if (span.count(code(e))) continue;
      gens.push_back(e);
      span.clear();
      for (const auto& x : closure(gens, N_)) span.insert(code(x));
      if (span.size() == data->elements.size()) break;
    }
    generators = gens;
  }
  data->generators = std::move(generators);
  data_ = data;
  if (!conjugated_) {
    for (int64_t u : units_mod(N_))
      if (!h_contains(GMat::of(1, 0, 0, u)))
        throw ValidationError("H must contain diag(1, u) for every unit u mod N");
  }
}

GroupDescriptor GroupDescriptor::gamma0(int64_t N, SignPolicy s) {
  if (N < 1) throw ValidationError("level must be >= 1");
  GroupDescriptor g;
  g.N_ = N;
  g.sign_ = s;
  g.type_ = GroupType::Gamma0;
  g.label_ = "Gamma0(" + std::to_string(N) + ")";
  g.finish(enumerate_mod(N, [](int64_t, int64_t, int64_t c, int64_t) { return c == 0; }), {});
  return g;
}

GroupDescriptor GroupDescriptor::gamma1_upper(int64_t N, SignPolicy s) {
  if (N < 1) throw ValidationError("level must be >= 1");
  GroupDescriptor g;
  g.N_ = N;
  g.sign_ = s;
  g.type_ = GroupType::Gamma1Upper;
  g.label_ = "Gamma1upper(" + std::to_string(N) + ")";
  const int64_t one = 1 % N;
  g.finish(enumerate_mod(N, [&](int64_t a, int64_t, int64_t c, int64_t) { return c == 0 && a == one; }), {});
  return g;
}

GroupDescriptor GroupDescriptor::gamma_diag(int64_t N, SignPolicy s) {
  if (N < 1) throw ValidationError("level must be >= 1");
  GroupDescriptor g;
  g.N_ = N;
  g.sign_ = s;
  g.type_ = GroupType::GammaDiag;
  g.label_ = "Gammadiag(" + std::to_string(N) + ")";
  const int64_t one = 1 % N;
  g.finish(enumerate_mod(N, [&](int64_t a, int64_t b, int64_t c, int64_t) { return b == 0 && c == 0 && a == one; }),
           {});
  return g;
}

GroupDescriptor GroupDescriptor::full(int64_t N, SignPolicy s) {
  if (N < 1) throw ValidationError("level must be >= 1");
  GroupDescriptor g;
  g.N_ = N;
  g.sign_ = s;
  g.type_ = GroupType::Full;
  g.label_ = N == 1 ? "level1" : "full(" + std::to_string(N) + ")";
  g.finish(enumerate_mod(N, [](int64_t, int64_t, int64_t, int64_t) { return true; }), {});
  return g;
}

GroupDescriptor GroupDescriptor::custom(int64_t N, const std::vector<GMat>& generators, SignPolicy s) {
  if (N < 1) throw ValidationError("level must be >= 1");
  GroupDescriptor g;
  g.N_ = N;
  g.sign_ = s;
  g.type_ = GroupType::Custom;
  std::vector<GMat> red;
  for (const auto& x : generators) {
    if (x.n() != 2) throw ValidationError("generators must be 2x2");
    if (N > 1 && gcd64(mod_pos(x.det(), N), N) != 1) throw ValidationError("generator not invertible mod N");
    red.push_back(x.reduced(N));
  }
  g.label_ = "custom(" + std::to_string(N) + ")";
  g.finish(closure(red, N), red);
  return g;
}

GroupDescriptor GroupDescriptor::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("group descriptor must be an object");
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<int>() != 2))
    throw ValidationError("group descriptor: only n = 2 is supported");
  if (!j.contains("N") || !j["N"].is_number_integer()) throw ValidationError("group descriptor: missing integer N");
  const int64_t N = j["N"].get<int64_t>();
  if (N < 1 || N > 60) throw ValidationError("group descriptor: N out of range [1, 60]");
  SignPolicy s = SignPolicy::SL;
  if (j.contains("sign")) {
    if (!j["sign"].is_string()) throw ValidationError("group descriptor: sign must be a string");
    const auto v = j["sign"].get<std::string>();
    if (v == "SL") s = SignPolicy::SL;
    else if (v == "GL") s = SignPolicy::GL;
    else throw ValidationError("group descriptor: sign must be SL or GL");
  }
  if (!j.contains("type") || !j["type"].is_string()) throw ValidationError("group descriptor: missing type");
  const auto t = j["type"].get<std::string>();
  if (t == "gamma0") return gamma0(N, s);
  if (t == "gamma1_upper") return gamma1_upper(N, s);
  if (t == "gamma_diag") return gamma_diag(N, s);
  if (t == "full") return full(N, s);
  if (t == "custom") {
    if (!j.contains("generators") || !j["generators"].is_array())
      throw ValidationError("group descriptor: custom type needs generators");
    std::vector<GMat> gens;
    for (const auto& m : j["generators"]) {
      if (!m.is_array() || m.size() != 2) throw ValidationError("group descriptor: generator must be 2x2");
      std::vector<std::vector<int64_t>> rows;
      for (const auto& r : m) {
        if (!r.is_array() || r.size() != 2) throw ValidationError("group descriptor: generator must be 2x2");
        std::vector<int64_t> row;
        for (const auto& x : r) {
          if (!x.is_number_integer()) throw ValidationError("group descriptor: generator entries must be integers");
          row.push_back(x.get<int64_t>());
        }
        rows.push_back(row);
      }
      gens.push_back(GMat::from_rows(rows));
    }
    return custom(N, gens, s);
  }
  throw ValidationError("group descriptor: unknown type '" + t + "'");
}

nlohmann::json GroupDescriptor::to_json() const {
  nlohmann::json j;
  j["n"] = 2;
  j["N"] = N_;
  j["type"] = to_string(type_);
  j["sign"] = to_string(sign_);
  if (type_ == GroupType::Custom) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : data_->generators) gens.push_back(g.rows());
    j["generators"] = gens;
  }
  return j;
}

bool GroupDescriptor::h_contains(const GMat& g) const { return data_->index.count(code(g)) > 0; }

bool GroupDescriptor::contains(const GMat& g) const {
  if (g.n() != 2) return false;
  const int64_t d = g.det();
  if (d != 1 && !(d == -1 && sign_ == SignPolicy::GL)) return false;
  return h_contains(g);
}

bool GroupDescriptor::in_semigroup(const GMat& g) const {
  if (g.n() != 2) return false;
  const int64_t d = g.det();
  if (d == 0) return false;
  if (sign_ == SignPolicy::SL && d < 0) return false;
  if (gcd64(d, N_) != 1) return false;
  return h_contains(g);
}

GroupDescriptor GroupDescriptor::conjugate(const GMat& g) const {
  if (!g.is_unit()) throw ValidationError("conjugation requires a unit matrix");
  GroupDescriptor r = *this;
  r.conjugated_ = true;
  r.type_ = GroupType::Custom;
  r.label_ = label_ + "^" + g.to_string();
  const GMat gi = g.inverse();
  std::vector<GMat> el, gens;
  for (const auto& h : h_elements()) el.push_back((g * h * gi).reduced(N_));
  for (const auto& h : h_generators()) gens.push_back((g * h * gi).reduced(N_));
  r.finish(el, gens);
  return r;
}

GroupDescriptor GroupDescriptor::lift(int64_t M) const {
  if (M % N_ != 0) throw MathError("incompatible levels");
  if (M == N_) return *this;
  GroupDescriptor r = *this;
  r.N_ = M;
  r.label_ = label_ + "@" + std::to_string(M);
  std::vector<GMat> el;
  for (const auto& x : enumerate_mod(M, [](int64_t, int64_t, int64_t, int64_t) { return true; }))
    if (h_contains(x)) el.push_back(x);
  r.finish(el, {});
  return r;
}

std::string GroupDescriptor::name() const { return label_ + "[" + to_string(sign_) + "]"; }

std::string GroupDescriptor::hash() const {
  std::ostringstream os;
  os << N_ << "|" << to_string(sign_) << "|";
  for (const auto& e : h_elements()) os << code(e) << ",";
  return fnv_hex(os.str());
}

bool GroupDescriptor::operator==(const GroupDescriptor& o) const {
  if (N_ != o.N_ || sign_ != o.sign_ || h_order() != o.h_order()) return false;
  for (const auto& e : h_elements())
    if (!o.h_contains(e)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Presentations.

namespace {

Word parse_word(const std::vector<std::pair<int, int>>& pairs) {
  Word w;
  for (auto [g, e] : pairs) {
    const int s = e > 0 ? 1 : -1;
    for (int k = 0; k < std::abs(e); ++k) w.push_back({g, s});
  }
  return w;
}

Word free_reduce(const Word& w) {
  Word r;
  for (const auto& l : w) {
    if (!r.empty() && r.back().gen == l.gen && r.back().exp == -l.exp) r.pop_back();
    else r.push_back(l);
  }
  return r;
}

const GMat kS = GMat::of(0, -1, 1, 0);
const GMat kU = GMat::of(0, -1, 1, 1);
const GMat kJ = GMat::of(1, 0, 0, -1);

}  // namespace

const Presentation& sl2_presentation() {
  static const Presentation p = [] {
    Presentation r;
    r.names = {"S", "U"};
    r.gens = {kS, kU};
    r.relators = {parse_word({{0, 4}}), parse_word({{1, 6}}), parse_word({{0, 2}, {1, -3}})};
    if (!relators_hold(r)) throw InternalError("SL2 relators fail");
    return r;
  }();
  return p;
}

const Presentation& gl2_presentation() {
  static const Presentation p = [] {
    Presentation r = sl2_presentation();
    r.names.push_back("J");
    r.gens.push_back(kJ);
    r.relators.push_back(parse_word({{2, 2}}));
    r.relators.push_back(parse_word({{2, 1}, {0, 1}, {2, 1}, {0, 1}}));
    // J U J = S^-1 U^-1 S
    r.relators.push_back(parse_word({{2, 1}, {1, 1}, {2, 1}, {0, -1}, {1, 1}, {0, 1}}));
    if (!relators_hold(r)) throw InternalError("GL2 relators fail");
    return r;
  }();
  return p;
}

const Presentation& ambient_presentation(SignPolicy s) {
  return s == SignPolicy::SL ? sl2_presentation() : gl2_presentation();
}

GMat evaluate(const Presentation& p, const Word& w) {
  GMat r = GMat::identity();
  for (const auto& l : w) r = r * (l.exp > 0 ? p.gens[static_cast<size_t>(l.gen)] : p.gens[static_cast<size_t>(l.gen)].inverse());
  return r;
}

Word inverse(const Word& w) {
  Word r;
  for (size_t i = w.size(); i-- > 0;) r.push_back({w[i].gen, -w[i].exp});
  return r;
}

std::string to_string(const Presentation& p, const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size();) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const long e = static_cast<long>(j - i) * w[i].exp;
    if (i) os << " ";
    os << p.names[static_cast<size_t>(w[i].gen)];
    if (e != 1) os << "^" << e;
    i = j;
  }
  return os.str();
}

bool relators_hold(const Presentation& p) {
  for (const auto& r : p.relators)
    if (evaluate(p, r) != GMat::identity()) return false;
  return true;
}

bool surjective_mod(const Presentation& p, int64_t N, SignPolicy s) {
  if (N < 2) return true;
  // orbit of the identity in {+-1} x GL_2(Z/N)
  std::unordered_set<int64_t> seen;
  std::deque<std::pair<int, GMat>> q;
  auto key = [&](int sg, const GMat& m) {
    return ((((sg < 0 ? 1 : 0) * N + m.a()) * N + m.b()) * N + m.c()) * N + m.d();
  };
  GMat id = GMat::identity().reduced(N);
  seen.insert(key(1, id));
  q.push_back({1, id});
  while (!q.empty()) {
    auto [sg, m] = q.front();
    q.pop_front();
    for (const auto& g : p.gens) {
      GMat y = mulmod(m, g.reduced(N), N);
      int ys = sg * g.sign();
      if (seen.insert(key(ys, y)).second) q.push_back({ys, y});
    }
  }
  size_t sl = 0;
  for (int64_t a = 0; a < N; ++a)
    for (int64_t b = 0; b < N; ++b)
      for (int64_t c = 0; c < N; ++c)
        for (int64_t d = 0; d < N; ++d)
          if (mod_pos(a * d - b * c, N) == 1 % N) ++sl;
  return seen.size() == (s == SignPolicy::SL ? sl : 2 * sl);
}

size_t coset_enumeration_index(const Presentation& p, const std::vector<Word>& sub, size_t limit) {
  // HLT coset enumeration; columns are 2*gen (gen) and 2*gen+1 (gen^-1)
  const size_t ng = p.gens.size();
  const size_t cols = 2 * ng;
  std::vector<std::vector<long>> table;
  std::vector<size_t> parent;
  auto col = [](const Letter& l) { return static_cast<size_t>(2 * l.gen + (l.exp > 0 ? 0 : 1)); };
  auto inv = [](size_t x) { return x ^ 1u; };
  bool overflow = false;
  auto newc = [&]() -> long {
    if (table.size() >= limit) {
      overflow = true;
      return -1;
    }
    table.emplace_back(cols, -1);
    parent.push_back(parent.size());
    return static_cast<long>(table.size() - 1);
  };
  std::function<size_t(size_t)> rep = [&](size_t k) {
    size_t l = k;
    while (parent[l] != l) l = parent[l];
    while (parent[k] != l) {
      size_t n = parent[k];
      parent[k] = l;
      k = n;
    }
    return l;
  };
  auto merge = [&](size_t k, size_t l, std::vector<size_t>& q) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    parent[l] = k;
    q.push_back(l);
  };
  auto coincidence = [&](size_t a, size_t b) {
    std::vector<size_t> q;
    merge(a, b, q);
    for (size_t i = 0; i < q.size(); ++i) {
      const size_t e = q[i];
      for (size_t x = 0; x < cols; ++x) {
        if (table[e][x] < 0) continue;
        const size_t f = static_cast<size_t>(table[e][x]);
        table[f][inv(x)] = -1;
        const size_t e1 = rep(e), f1 = rep(f);
        if (table[e1][x] >= 0) merge(f1, static_cast<size_t>(table[e1][x]), q);
        else if (table[f1][inv(x)] >= 0) merge(e1, static_cast<size_t>(table[f1][inv(x)]), q);
        else {
          table[e1][x] = static_cast<long>(f1);
          table[f1][inv(x)] = static_cast<long>(e1);
        }
      }
    }
  };
  auto define = [&](size_t c, size_t x) {
    long n = newc();
    if (n < 0) return;
    table[c][x] = n;
    table[static_cast<size_t>(n)][inv(x)] = static_cast<long>(c);
  };
  auto scan_fill = [&](size_t c, const Word& w) {
    if (w.empty()) return;
    size_t f = c, b = c;
    long i = 0, j = static_cast<long>(w.size()) - 1;
    while (true) {
      while (i <= j && table[f][col(w[static_cast<size_t>(i)])] >= 0) {
        f = static_cast<size_t>(table[f][col(w[static_cast<size_t>(i)])]);
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && table[b][inv(col(w[static_cast<size_t>(j)]))] >= 0) {
        b = static_cast<size_t>(table[b][inv(col(w[static_cast<size_t>(j)]))]);
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        const size_t x = col(w[static_cast<size_t>(i)]);
        table[f][x] = static_cast<long>(b);
        table[b][inv(x)] = static_cast<long>(f);
        return;
      }
      define(f, col(w[static_cast<size_t>(i)]));
      if (overflow) return;
    }
  };
  newc();
  for (const auto& w : sub) scan_fill(0, w);
  for (size_t c = 0; c < table.size() && !overflow; ++c) {
    if (rep(c) != c) continue;
    for (const auto& r : p.relators) {
      scan_fill(c, r);
      if (rep(c) != c || overflow) break;
    }
    if (rep(c) != c || overflow) continue;
    for (size_t x = 0; x < cols; ++x)
      if (table[c][x] < 0) define(c, x);
  }
  if (overflow) return 0;
  size_t alive = 0;
  for (size_t c = 0; c < table.size(); ++c)
    if (rep(c) == c) ++alive;
  return alive;
}

// ---------------------------------------------------------------------------
// S, T, J words.

namespace {

GMat t_pow(int64_t k) { return GMat::of(1, k, 0, 1); }

GMat s_pow(int64_t k) {
  switch (mod_pos(k, 4)) {
    case 0: return GMat::identity();
    case 1: return kS;
    case 2: return -GMat::identity();
    default: return kS.inverse();
  }
}

void push_merge(STJWord& w, STJLetter l) {
  if (!w.empty() && w.back().sym == l.sym) {
    w.back().exp += l.exp;
  } else {
    w.push_back(l);
  }
  auto& b = w.back();
  if (b.sym == 'S') {
    int64_t e = mod_pos(b.exp, 4);
    b.exp = e == 3 ? -1 : e;
  } else if (b.sym == 'J') {
    b.exp = mod_pos(b.exp, 2);
  }
  if (b.exp == 0) w.pop_back();
}

}  // namespace

STJWord word_decompose(const GMat& g) {
  if (g.n() != 2 || !g.is_unit()) throw ValidationError("word_decompose needs determinant +-1");
  const bool neg = g.det() == -1;
  GMat h = neg ? g * kJ : g;
  std::vector<STJLetter> applied;
  while (h.c() != 0) {
    const int64_t c = h.c(), d = h.d();
    int64_t q = d / c;
    int64_t best = q;
    for (int64_t cand : {q - 1, q + 1})
      if (std::abs(d - c * cand) < std::abs(d - c * best)) best = cand;
    const int64_t k = -best;
    if (k != 0) {
      h = h * t_pow(k);
      applied.push_back({'T', k});
    }
    h = h * kS;
    applied.push_back({'S', 1});
  }
  STJWord w;
  if (h.a() == 1) {
    if (h.b() != 0) push_merge(w, {'T', h.b()});
  } else {
    push_merge(w, {'S', 2});
    if (h.b() != 0) push_merge(w, {'T', -h.b()});
  }
  for (size_t i = applied.size(); i-- > 0;) push_merge(w, {applied[i].sym, -applied[i].exp});
  if (neg) push_merge(w, {'J', 1});
  if (evaluate(w) != g) throw InternalError("word_decompose failed to reproduce " + g.to_string());
  return w;
}

GMat evaluate(const STJWord& w) {
  GMat r = GMat::identity();
  for (const auto& l : w) {
    if (l.sym == 'S') r = r * s_pow(l.exp);
    else if (l.sym == 'T') r = r * t_pow(l.exp);
    else if (l.sym == 'J') r = mod_pos(l.exp, 2) ? r * kJ : r;
    else throw ValidationError("unknown symbol in word");
  }
  return r;
}

std::string to_string(const STJWord& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << " ";
    os << w[i].sym;
    if (w[i].exp != 1) os << "^" << w[i].exp;
  }
  return os.str();
}

Word to_ambient(const STJWord& w, SignPolicy s) {
  Word r;
  for (const auto& l : w) {
    if (l.sym == 'S') {
      for (int64_t k = 0; k < std::abs(l.exp); ++k) r.push_back({0, l.exp > 0 ? 1 : -1});
    } else if (l.sym == 'T') {
      // T = S^-1 U
      for (int64_t k = 0; k < std::abs(l.exp); ++k) {
        if (l.exp > 0) {
          r.push_back({0, -1});
          r.push_back({1, 1});
        } else {
          r.push_back({1, -1});
          r.push_back({0, 1});
        }
      }
    } else {
      if (s == SignPolicy::SL) throw ValidationError("J is not in SL2(Z)");
      if (mod_pos(l.exp, 2)) r.push_back({2, 1});
    }
  }
  return free_reduce(r);
}

// ---------------------------------------------------------------------------
// Coset table.

int64_t CosetTable::key(const GMat& g) const {
  const int64_t N = desc_.level();
  return (g.det() < 0 ? 1 : 0) * N * N * N * N + desc_.code(g);
}

CosetTable::CosetTable(const GroupDescriptor& g)
    : desc_(g), amb_(&ambient_presentation(g.sign_policy())) {
  const int64_t N = g.level();
  // finite image of the ambient group, pairs (sign, matrix mod N)
  struct El {
    int sign;
    GMat m;
  };
  std::vector<El> image;
  std::unordered_map<int64_t, size_t> pos;
  auto k = [&](int s, const GMat& m) { return (s < 0 ? 1 : 0) * N * N * N * N + desc_.code(m); };
  image.push_back({1, GMat::identity().reduced(N)});
  pos[k(1, image[0].m)] = 0;
  for (size_t i = 0; i < image.size(); ++i)
    for (const auto& gen : amb_->gens) {
      El y{image[i].sign * gen.sign(), mulmod(image[i].m, gen.reduced(N), N)};
      auto kk = k(y.sign, y.m);
      if (!pos.count(kk)) {
        pos[kk] = image.size();
        image.push_back(y);
      }
    }
  std::vector<const El*> sub;
  for (const auto& e : image)
    if (desc_.h_contains(e.m)) sub.push_back(&e);
  // classes Gamma-hat * x
  std::unordered_map<int64_t, size_t> cls;
  size_t ncls = 0;
  for (const auto& x : image) {
    if (cls.count(k(x.sign, x.m))) continue;
    for (const El* h : sub) cls[k(h->sign * x.sign, mulmod(h->m, x.m, N))] = ncls;
    ++ncls;
  }
  // BFS over cosets from the identity
  std::vector<long> idx_of_cls(ncls, -1);
  const size_t ng = amb_->gens.size();
  idx_of_cls[cls.at(k(1, image[0].m))] = 0;
  reps_.push_back(GMat::identity());
  words_.push_back({});
  for (size_t i = 0; i < reps_.size(); ++i) {
    fwd_.emplace_back(ng, 0);
    tree_.emplace_back(ng, false);
    for (size_t s = 0; s < ng; ++s) {
      GMat y = reps_[i] * amb_->gens[s];
      size_t c = cls.at(key(y));
      if (idx_of_cls[c] < 0) {
        idx_of_cls[c] = static_cast<long>(reps_.size());
        reps_.push_back(y);
        Word w = words_[i];
        w.push_back({static_cast<int>(s), 1});
        words_.push_back(w);
        tree_[i][s] = true;
      }
      fwd_[i][s] = static_cast<size_t>(idx_of_cls[c]);
    }
  }
  if (reps_.size() != ncls) throw InternalError("coset BFS did not reach every class");
  for (const auto& [kk, c] : cls) class_of_[kk] = static_cast<size_t>(idx_of_cls[c]);
  bwd_.assign(reps_.size(), std::vector<size_t>(ng, 0));
  for (size_t i = 0; i < reps_.size(); ++i)
    for (size_t s = 0; s < ng; ++s) bwd_[fwd_[i][s]][s] = i;
}

size_t CosetTable::lookup(const GMat& g) const {
  if (!g.is_unit() || (desc_.sign_policy() == SignPolicy::SL && g.det() != 1))
    throw ValidationError("element " + g.to_string() + " is not in the ambient group");
  return class_of_.at(key(g));
}

size_t CosetTable::act(size_t coset, int gen, int exp) const {
  return exp > 0 ? fwd_[coset][static_cast<size_t>(gen)] : bwd_[coset][static_cast<size_t>(gen)];
}

bool CosetTable::is_tree_edge(size_t coset, int gen) const { return tree_[coset][static_cast<size_t>(gen)]; }

// ---------------------------------------------------------------------------
// Reidemeister-Schreier.

PresentedGroup::PresentedGroup(const GroupDescriptor& g)
    : desc_(g), amb_(&ambient_presentation(g.sign_policy())), table_(g) {
  const size_t ng = amb_->gens.size();
  const size_t idx = table_.index();
  schreier_.assign(idx * ng, -1);
  for (size_t c = 0; c < idx; ++c)
    for (size_t s = 0; s < ng; ++s) {
      if (table_.is_tree_edge(c, static_cast<int>(s))) continue;
      const size_t d = table_.act(c, static_cast<int>(s));
      GMat m = table_.reps()[c] * amb_->gens[s] * table_.reps()[d].inverse();
      if (!desc_.contains(m)) throw InternalError("Schreier generator outside the group");
      schreier_[c * ng + s] = static_cast<int>(pres_.gens.size());
      pres_.gens.push_back(m);
      pres_.names.push_back(idx == 1 ? amb_->names[s] : amb_->names[s] + "_" + std::to_string(c));
    }
  for (size_t c = 0; c < idx; ++c)
    for (const auto& r : amb_->relators) {
      size_t end = 0;
      Word w = rewrite(r, c, &end);
      if (end != c) throw InternalError("relator does not close in the coset table");
      if (!w.empty()) pres_.relators.push_back(w);
    }
  if (!relators_hold(pres_)) throw InternalError("rewritten relators do not evaluate to the identity");
}

Word PresentedGroup::rewrite(const Word& w, size_t start, size_t* end) const {
  const size_t ng = amb_->gens.size();
  Word out;
  size_t c = start;
  for (const auto& l : w) {
    if (l.exp > 0) {
      int s = schreier_[c * ng + static_cast<size_t>(l.gen)];
      if (s >= 0) out.push_back({s, 1});
      c = table_.act(c, l.gen, 1);
    } else {
      size_t prev = table_.act(c, l.gen, -1);
      int s = schreier_[prev * ng + static_cast<size_t>(l.gen)];
      if (s >= 0) out.push_back({s, -1});
      c = prev;
    }
  }
  if (end) *end = c;
  return free_reduce(out);
}

Word PresentedGroup::word_for(const GMat& t) const {
  if (!desc_.contains(t)) throw InternalError("element " + t.to_string() + " is not in " + desc_.name());
  size_t end = 0;
  Word w = rewrite(to_ambient(word_decompose(t), desc_.sign_policy()), 0, &end);
  if (end != 0) throw InternalError("rewritten word does not return to the trivial coset");
  return w;
}

const PresentedGroup& presented_group(const GroupDescriptor& g) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<PresentedGroup>> cache;
  const std::string key = g.hash() + (g.conjugated() ? "c" : "");
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto pg = std::make_unique<PresentedGroup>(g);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(pg));
  return *it->second;
}

size_t abelianization_free_rank(const Presentation& p) {
  const exact::Ring* Q = exact::Ring::rationals();
  exact::Matrix m(Q, p.relators.size(), p.gens.size());
  for (size_t i = 0; i < p.relators.size(); ++i)
    for (const auto& l : p.relators[i]) m(i, static_cast<size_t>(l.gen)) += exact::Scalar(Q, static_cast<long>(l.exp));
  return p.gens.size() - (p.relators.empty() ? 0 : exact::rank(m));
}

}  // namespace hecke::modgroup
