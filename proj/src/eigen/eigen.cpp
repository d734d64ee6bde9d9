#include "hecke/eigen/eigen.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <thread>

#include "hecke/error.hpp"

namespace hecke::eigen {

using coeffmod::Character;

namespace {

constexpr int64_t kMaxFieldOrder = int64_t(1) << 22;

// p^e, or -1 if it exceeds the table cap
int64_t capped_power(int64_t p, int64_t e) {
  int64_t q = 1;
  for (int64_t i = 0; i < e; ++i) {
    if (q > kMaxFieldOrder / p) return -1;
    q *= p;
  }
  return q;
}

Scalar generator_image(const Ring* src, const Ring* target) {
  static std::mutex mu;
  static std::map<std::pair<const Ring*, const Ring*>, Scalar> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({src, target});
    if (it != cache.end()) return it->second;
  }
  std::vector<Scalar> c;
  for (int64_t v : src->defining_poly()) c.emplace_back(target, static_cast<long>(v));
  auto rs = exact::roots(Poly(target, c));
  if (rs.empty()) throw InternalError("no embedding " + src->name() + " -> " + target->name());
  Scalar best = rs[0].first;
  for (const auto& [r, m] : rs)
    if (r.code() < best.code()) best = r;
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(src, target), best);
  return best;
}

Scalar frobenius(const Scalar& x) { return x.pow(x.ring()->characteristic()); }

std::string label_key(const OpLabel& l) { return l.to_string(); }

struct Leaf {
  std::vector<Matrix> ops;
  std::vector<Poly> facs;
  size_t dim;
};

Matrix restrict_to(const std::vector<exact::Vector>& K, const Matrix& A) {
  const Ring* F = A.ring();
  exact::RowSpace rs(F, A.rows());
  for (const auto& k : K)
    if (!rs.add(k)) throw InternalError("dependent kernel basis");
  std::vector<exact::Vector> rows;
  for (const auto& k : K) rows.push_back(rs.coordinates(exact::vec_mat(k, A)));
  return Matrix::from_rows(F, rows, K.size());
}

void split(const std::vector<Matrix>& ops, size_t idx, std::vector<Poly>& facs, std::vector<Leaf>& out) {
  const size_t w = ops.empty() ? 0 : ops[0].rows();
  if (w == 0) return;
  if (idx == ops.size()) {
    out.push_back({ops, facs, w});
    return;
  }
  const auto fz = exact::factor(exact::char_poly(ops[idx]));
  for (const auto& f : fz.factors) {
    const Matrix P = exact::pow(f.poly, static_cast<unsigned>(f.multiplicity)).eval(ops[idx]);
    const auto K = exact::left_kernel_basis(P);
    if (K.size() != static_cast<size_t>(f.poly.degree() * f.multiplicity))
      throw InternalError("generalized eigenspace has the wrong dimension");
    std::vector<Matrix> sub;
    for (const auto& A : ops) sub.push_back(restrict_to(K, A));
    facs.push_back(f.poly);
    split(sub, idx + 1, facs, out);
    facs.pop_back();
  }
}

Matrix embed_matrix(const Matrix& A, const Ring* E) {
  Matrix B(E, A.rows(), A.cols());
  for (size_t i = 0; i < A.rows(); ++i)
    for (size_t j = 0; j < A.cols(); ++j) B(i, j) = embed(A(i, j), E);
  return B;
}

bool entry_less(const SystemEntry& a, const SystemEntry& b) {
  if (a.split != b.split) return a.split;
  const Ring *ra = a.system.ring, *rb = b.system.ring;
  if (ra != rb) return ra->degree() != rb->degree() ? ra->degree() < rb->degree() : ra->name() < rb->name();
  for (const auto& [l, v] : a.system.values) {
    auto it = b.system.values.find(l);
    if (it == b.system.values.end()) return false;
    if (v != it->second) return v.less(it->second);
  }
  for (const auto& [l, f] : a.factors) {
    auto it = b.factors.find(l);
    if (it != b.factors.end() && f != it->second) return f.less(it->second);
  }
  return a.dim < b.dim;
}

bool values_match(const EigenSystem& phi, const EigenSystem& psi, const std::vector<OpLabel>& labels) {
  if (phi.ring == psi.ring && (phi.ring->kind() == exact::RingKind::Rational || phi.ring->degree() == 1)) {
    for (const auto& l : labels)
      if (phi.values.at(l) != psi.values.at(l)) return false;
    return true;
  }
  const Ring* C = common_field(phi.ring, psi.ring);
  if (!C) return false;
  std::vector<Scalar> a, b;
  for (const auto& l : labels) {
    a.push_back(embed(phi.values.at(l), C));
    b.push_back(embed(psi.values.at(l), C));
  }
  const int c = C->kind() == exact::RingKind::Rational ? 1 : C->degree();
  for (int t = 0; t < c; ++t) {
    if (a == b) return true;
    for (auto& x : a) x = frobenius(x);
  }
  return false;
}

}  // namespace

Scalar embed(const Scalar& x, const Ring* target) {
  const Ring* src = x.ring();
  if (src == target) return x;
  if (src->kind() == exact::RingKind::Rational || src->kind() == exact::RingKind::Integer) return exact::convert(x, target);
  if (!target->is_finite() || target->characteristic() != src->characteristic())
    throw ValidationError("no embedding " + src->name() + " -> " + target->name());
  if (src->degree() == 1) return exact::convert(x, target);
  if (target->degree() % src->degree() != 0) throw ValidationError("no embedding " + src->name() + " -> " + target->name());
  const Scalar theta = generator_image(src, target);
  const int64_t p = src->characteristic();
  int64_t code = x.code();
  Scalar out = Scalar::zero(target), pw = Scalar::one(target);
  while (code > 0) {
    out = out + Scalar(target, static_cast<long>(code % p)) * pw;
    pw = pw * theta;
    code /= p;
  }
  return out;
}

const Ring* common_field(const Ring* a, const Ring* b) {
  if (a == b) return a;
  const bool qa = a->kind() == exact::RingKind::Rational, qb = b->kind() == exact::RingKind::Rational;
  if (qa || qb) return nullptr;
  if (!a->is_finite() || !b->is_finite() || !a->is_field() || !b->is_field() || a->characteristic() != b->characteristic())
    return nullptr;
  const int c = std::lcm(a->degree(), b->degree());
  if (capped_power(a->characteristic(), c) < 0) return nullptr;
  return Ring::finite_field(a->characteristic(), c);
}

int SystemEntry::degree() const {
  if (split) return 1;
  int d = 1;
  for (const auto& [l, f] : factors) d = std::max(d, f.degree());
  return d;
}

nlohmann::json SystemEntry::to_json() const {
  nlohmann::json vals = nlohmann::json::object(), facs = nlohmann::json::object();
  for (const auto& [l, v] : system.values) vals[label_key(l)] = v.to_string();
  for (const auto& [l, f] : factors) {
    std::vector<std::string> c;
    for (const auto& x : f.coeffs()) c.push_back(x.to_string());
    facs[label_key(l)] = c;
  }
  return {{"field", system.ring->name()}, {"values", vals}, {"factors", facs}, {"dim", dim}, {"multiplicity", multiplicity},
          {"split", split}};
}

bool EigenReport::consistent() const {
  size_t total = 0;
  for (const auto& e : systems) {
    if (e.multiplicity * static_cast<size_t>(e.degree()) != e.dim) return false;
    total += e.dim;
  }
  return total == space_dim;
}

nlohmann::json EigenReport::to_json() const {
  nlohmann::json sys = nlohmann::json::array();
  for (const auto& e : systems) sys.push_back(e.to_json());
  std::vector<std::string> ls;
  for (const auto& l : labels) ls.push_back(label_key(l));
  return {{"kind", "eigen-report"}, {"field", base->name()}, {"labels", ls}, {"dim", space_dim}, {"systems", sys}};
}

EigenReport eigensystems(const Ring* F, size_t dim, const std::vector<OpLabel>& labels, const std::vector<Matrix>& ops) {
  if (labels.size() != ops.size()) throw ValidationError("one label per operator is required");
  if (!F->is_field()) throw ValidationError("eigensystems need a field");
  for (const auto& A : ops)
    if (A.rows() != dim || A.cols() != dim || A.ring() != F) throw ValidationError("operator does not act on the space");
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (ops[i] * ops[j] != ops[j] * ops[i])
        throw MathError("operators " + labels[i].to_string() + " and " + labels[j].to_string() + " do not commute");
  EigenReport rep;
  rep.base = F;
  rep.labels = labels;
  rep.space_dim = dim;
  if (dim == 0 || ops.empty()) {
    if (dim > 0) rep.systems.push_back({EigenSystem{F, {}}, {}, dim, dim, true});
    return rep;
  }
  std::vector<Leaf> leaves;
  std::vector<Poly> facs;
  split(ops, 0, facs, leaves);
  for (const auto& leaf : leaves) {
    std::map<OpLabel, Poly> base_facs;
    int lcm_deg = 1;
    for (size_t i = 0; i < labels.size(); ++i) {
      base_facs.emplace(labels[i], leaf.facs[i]);
      lcm_deg = std::lcm(lcm_deg, leaf.facs[i].degree());
    }
    auto linear_entry = [&](const Ring* R, const std::vector<Poly>& fs, size_t d) {
      SystemEntry e;
      e.system.ring = R;
      for (size_t i = 0; i < labels.size(); ++i) e.system.values.emplace(labels[i], -fs[i].coeff(0));
      e.factors = base_facs;
      e.dim = e.multiplicity = d;
      return e;
    };
    if (lcm_deg == 1) {
      rep.systems.push_back(linear_entry(F, leaf.facs, leaf.dim));
      continue;
    }
    const Ring* E = nullptr;
    if (F->is_finite() && capped_power(F->characteristic(), int64_t(F->degree()) * lcm_deg) > 0)
      E = Ring::finite_field(F->characteristic(), F->degree() * lcm_deg);
    if (E) {
      // lazy extension: split again over the field holding all roots
      std::vector<Matrix> eops;
      for (const auto& A : leaf.ops) eops.push_back(embed_matrix(A, E));
      std::vector<Leaf> sub;
      std::vector<Poly> f2;
      split(eops, 0, f2, sub);
      for (const auto& s : sub) {
        for (const auto& f : s.facs)
          if (f.degree() != 1) throw InternalError("extension field does not split the operators");
        rep.systems.push_back(linear_entry(E, s.facs, s.dim));
      }
      continue;
    }
    SystemEntry e;
    e.system.ring = F;
    e.split = false;
    for (size_t i = 0; i < labels.size(); ++i)
      if (leaf.facs[i].degree() == 1) e.system.values.emplace(labels[i], -leaf.facs[i].coeff(0));
    e.factors = base_facs;
    e.dim = leaf.dim;
    e.multiplicity = leaf.dim / static_cast<size_t>(e.degree());
    rep.systems.push_back(e);
  }
  std::sort(rep.systems.begin(), rep.systems.end(), entry_less);
  if (!rep.consistent()) throw InternalError("eigen report dimensions do not add up");
  return rep;
}

EigenReport eigensystems(const CohomSpace& space, const std::vector<HeckeMatrix>& ops) {
  std::vector<OpLabel> labels;
  std::vector<Matrix> ms;
  for (const auto& h : ops) {
    labels.push_back(h.label);
    ms.push_back(h.matrix);
  }
  return eigensystems(space.ring(), space.dim(), labels, ms);
}

EigenReport eigensystems(const CohomSpace& space, const std::vector<OpLabel>& labels) {
  std::vector<HeckeMatrix> ops;
  for (const auto& l : labels) ops.push_back(cohom::hecke_matrix(space, l));
  return eigensystems(space, ops);
}

bool matches(const EigenSystem& phi, const SystemEntry& entry) {
  if (!phi.ring) return false;
  std::vector<OpLabel> labels;
  for (const auto& [l, v] : phi.values) {
    if (!entry.factors.count(l)) return false;
    labels.push_back(l);
  }
  const Ring* er = entry.system.ring;
  if (phi.ring->characteristic() != er->characteristic()) return false;
  if (entry.split) return values_match(phi, entry.system, labels);
  // factor data: each value must be a root of the recorded factor
  for (const auto& l : labels) {
    const Poly& f = entry.factors.at(l);
    const Ring* C = common_field(phi.ring, f.ring());
    if (!C) return false;
    if (!f.converted(C).eval(embed(phi.values.at(l), C)).is_zero()) return false;
  }
  return true;
}

bool occurs_in(const EigenSystem& phi, const EigenReport& report) {
  for (const auto& e : report.systems)
    if (matches(phi, e)) return true;
  return false;
}

bool occurs_in(const EigenSystem& phi, const CohomSpace& space, const std::vector<HeckeMatrix>& ops) {
  return occurs_in(phi, eigensystems(space, ops));
}

std::vector<OpLabel> default_labels(int64_t level) {
  std::vector<OpLabel> out;
  for (int64_t p : {2, 3, 7})
    if (modgroup::gcd64(p, level) == 1) out.push_back({p, 1});
  return out;
}

nlohmann::json system_to_json(const EigenSystem& phi) {
  nlohmann::json vals = nlohmann::json::object();
  for (const auto& [l, v] : phi.values) vals[label_key(l)] = v.to_string();
  return {{"field", phi.ring->name()}, {"values", vals}};
}

EigenSystem system_from_json(const nlohmann::json& j) {
  try {
    EigenSystem phi;
    phi.ring = exact::parse_ring(j.at("field").get<std::string>());
    for (const auto& [k, v] : j.at("values").items())
      phi.values.emplace(OpLabel::parse(k), exact::parse_scalar(phi.ring, v.get<std::string>()));
    return phi;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad eigensystem record: ") + e.what());
  }
}

// --- reduction ---------------------------------------------------------------

std::string to_string(TargetKind k) { return k == TargetKind::Diagonal ? "diagonal" : "upper"; }

nlohmann::json ReductionSource::to_json() const {
  return {{"group", group.to_json()}, {"module", module->to_json()}, {"degree", degree}};
}

GroupDescriptor ReductionTarget::group() const {
  if (level < 1 || modulus < 1) throw ValidationError("target level and modulus must be positive");
  if (kind == TargetKind::Diagonal) {
    if (level % modulus != 0) throw ValidationError("character modulus must divide the target level");
    return GroupDescriptor::gamma_diag(level, sign);
  }
  return GroupDescriptor::gamma1_upper(level * modulus, sign);
}

nlohmann::json ReductionTarget::to_json() const {
  return {{"kind", to_string(kind)}, {"level", level}, {"modulus", modulus}, {"sign", modgroup::to_string(sign)},
          {"group", group().to_json()}};
}

std::vector<std::string> character_key(const Character& chi) {
  std::vector<std::string> k{chi.sign_value().to_string()};
  for (int64_t u : coeffmod::unit_group_generators(chi.level())) k.push_back(chi(1, u).to_string());
  return k;
}

namespace {

bool key_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const std::string& x, const std::string& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
}

int64_t strip_prime(int64_t m, int64_t ell) {
  if (ell > 1)
    while (m % ell == 0) m /= ell;
  return m;
}

// chi viewed at level Nt through Z/Nt -> Z/M
Character lift(const Character& chi, int64_t Nt) {
  if (chi.level() == Nt) return chi;
  std::vector<int64_t> units = coeffmod::unit_group_generators(Nt);
  std::vector<Scalar> vals;
  for (int64_t u : units) vals.push_back(chi(1, u % chi.level()));
  return Character(Nt, chi.ring(), chi.sign_value(), units, vals);
}

}  // namespace

std::vector<Character> dirichlet_characters(int64_t M, int64_t ell) {
  if (M < 1) throw ValidationError("character modulus must be positive");
  if (ell != 0 && !exact::is_prime(ell)) throw ValidationError("ell must be 0 or a prime");
  const std::vector<int64_t> units = coeffmod::unit_group_generators(M);
  std::vector<int64_t> orders;
  int64_t m = 2;
  for (int64_t u : units) {
    orders.push_back(coeffmod::multiplicative_order(u, M));
    m = std::lcm(m, orders.back());
  }
  m = ell == 0 ? 2 : strip_prime(m, ell);
  std::vector<std::vector<int64_t>> choices;  // sign first
  choices.push_back(m % 2 == 0 ? std::vector<int64_t>{0, m / 2} : std::vector<int64_t>{0});
  for (int64_t o : orders) {
    std::vector<int64_t> c;
    const int64_t step = m / std::gcd(m, o);
    for (int64_t t = 0; t < m; t += step) c.push_back(t);
    choices.push_back(c);
  }
  std::vector<Character> out;
  std::vector<std::vector<std::string>> keys;
  std::vector<size_t> idx(choices.size(), 0);
  while (true) {
    std::vector<int64_t> exps;
    for (size_t i = 1; i < choices.size(); ++i) exps.push_back(choices[i][idx[i]]);
    try {
      Character chi = Character::from_exponents(M, ell, m, choices[0][idx[0]], units, exps);
      auto k = character_key(chi);
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        keys.push_back(k);
        out.push_back(chi);
      }
    } catch (const ValidationError&) {
      // dependent generators: this exponent tuple is not a character
    }
    size_t i = 0;
    while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  std::vector<size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return key_less(keys[a], keys[b]); });
  std::vector<Character> sorted;
  for (size_t i : order) sorted.push_back(out[i]);
  return sorted;
}

namespace {

EigenReport candidate_report(const ReductionTarget& target, const Character& chi, int j, const std::vector<OpLabel>& labels) {
  const GroupDescriptor G = target.group();
  const Character chit = lift(chi, G.level());
  auto M = coeffmod::character_module(chit, coeffmod::FiniteGroup::of_descriptor(G));
  const CohomSpace H = CohomSpace::compute(G, M, j, cohom::Path::Direct);
  return eigensystems(H, labels);
}

EigenSystem restricted(const EigenSystem& phi, const std::vector<OpLabel>& labels) {
  EigenSystem r{phi.ring, {}};
  for (const auto& l : labels) {
    auto it = phi.values.find(l);
    if (it == phi.values.end()) throw ValidationError("system has no value for " + l.to_string());
    r.values.emplace(l, it->second);
  }
  return r;
}

}  // namespace

ReductionSearch::ReductionSearch(ReductionTarget target, int max_degree, int64_t ell, std::vector<OpLabel> labels, int jobs)
    : target_(std::move(target)), max_degree_(max_degree), ell_(ell) {
  if (max_degree < 0 || max_degree > 1) throw ValidationError("cohomological degree must be 0 or 1");
  const GroupDescriptor G = target_.group();
  for (const auto& l : labels)
    if (modgroup::gcd64(l.det(), G.level()) == 1) labels_.push_back(l);
  if (labels_.empty()) throw ValidationError("no operator label is prime to the target level");
  modgroup::presented_group(G);
  for (const auto& chi : dirichlet_characters(target_.modulus, ell))
    for (int j = 0; j <= max_degree; ++j) candidates_.push_back({j, chi, {}});
  const size_t n = candidates_.size();
  const size_t workers = std::max<size_t>(1, std::min<size_t>(static_cast<size_t>(std::max(jobs, 1)), n));
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](size_t start) {
    for (size_t i = start; i < n; i += workers) {
      try {
        candidates_[i].report = candidate_report(target_, candidates_[i].chi, candidates_[i].j, labels_);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<size_t> ReductionSearch::matching(const EigenSystem& phi) const {
  const EigenSystem p = restricted(phi, labels_);
  std::vector<size_t> out;
  for (size_t i = 0; i < candidates_.size(); ++i)
    if (occurs_in(p, candidates_[i].report)) out.push_back(i);
  return out;
}

ReductionWitness ReductionSearch::find(const EigenSystem& phi, const nlohmann::json& source) const {
  const auto idx = matching(phi);
  if (idx.empty()) throw MathError("no witness found");
  const Candidate& c = candidates_[idx.front()];
  ReductionWitness w;
  w.phi = restricted(phi, labels_);
  w.source = source;
  w.labels = labels_;
  w.target = target_;
  w.j = c.j;
  w.chi = c.chi;
  for (const auto& e : c.report.systems)
    if (matches(w.phi, e)) {
      w.matched = e;
      break;
    }
  // independent re-verification from scratch
  const EigenReport again = candidate_report(target_, c.chi, c.j, labels_);
  w.verified = occurs_in(w.phi, again);
  w.transcript = nlohmann::json::array();
  for (const auto& l : labels_) {
    nlohmann::json row{{"label", l.to_string()}, {"phi", w.phi.values.at(l).to_string()}, {"phi_field", w.phi.ring->name()}};
    auto it = w.matched.system.values.find(l);
    row["witness"] = it == w.matched.system.values.end() ? nlohmann::json(nullptr) : nlohmann::json(it->second.to_string());
    row["witness_field"] = w.matched.system.ring->name();
    w.transcript.push_back(row);
  }
  if (!w.verified) throw InternalError("witness failed re-verification");
  return w;
}

nlohmann::json ReductionWitness::to_json() const {
  std::vector<std::string> ls;
  for (const auto& l : labels) ls.push_back(l.to_string());
  return {{"kind", "reduction-certificate"},
          {"source", source},
          {"phi", system_to_json(phi)},
          {"labels", ls},
          {"target", target.to_json()},
          {"witness", {{"j", j}, {"character", chi.to_json()}, {"field", chi.ring()->name()}, {"system", matched.to_json()}}},
          {"verification", transcript},
          {"verified", verified}};
}

ReductionWitness reduce_to_one_dim(const EigenSystem& phi, const ReductionSource& source, const ReductionTarget& target,
                                   std::optional<int64_t> ell, const std::vector<OpLabel>& labels, int jobs) {
  if (!source.module) throw ValidationError("missing source module");
  if (source.degree < 0 || source.degree > 1) throw ValidationError("source degree must be 0 or 1");
  const int64_t l = ell ? *ell : source.module->ring()->characteristic();
  if (l != source.module->ring()->characteristic()) throw ValidationError("ell differs from the characteristic of the module");
  const CohomSpace src = CohomSpace::compute(source.group, source.module, source.degree);
  std::vector<OpLabel> used;
  for (const auto& lab : labels)
    if (modgroup::gcd64(lab.det(), source.group.level()) == 1 && modgroup::gcd64(lab.det(), target.group().level()) == 1)
      used.push_back(lab);
  if (!occurs_in(restricted(phi, used), eigensystems(src, used))) throw ValidationError("system does not occur in the source");
  ReductionSearch search(target, source.degree, l, used, jobs);
  return search.find(phi, source.to_json());
}

bool verify_certificate(const nlohmann::json& cert) {
  try {
    ReductionTarget t;
    const auto& tj = cert.at("target");
    t.kind = tj.at("kind").get<std::string>() == "diagonal" ? TargetKind::Diagonal : TargetKind::Upper;
    t.level = tj.at("level").get<int64_t>();
    t.modulus = tj.at("modulus").get<int64_t>();
    t.sign = tj.at("sign").get<std::string>() == "GL" ? modgroup::SignPolicy::GL : modgroup::SignPolicy::SL;
    std::vector<OpLabel> labels;
    for (const auto& l : cert.at("labels")) labels.push_back(OpLabel::parse(l.get<std::string>()));
    const EigenSystem phi = system_from_json(cert.at("phi"));
    const auto& w = cert.at("witness");
    const Character chi = Character::from_json(w.at("character"));
    if (chi.level() != t.modulus) return false;
    return occurs_in(restricted(phi, labels), candidate_report(t, chi, w.at("j").get<int>(), labels));
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

}  // namespace hecke::eigen
