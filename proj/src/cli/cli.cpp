#include "hecke/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "hecke/coeffmod/meataxe.hpp"
#include "hecke/eigen/eigen.hpp"
#include "hecke/error.hpp"
#include "hecke_schema.hpp"

namespace hecke::cli {

using nlohmann::json;
using exact::Ring;
using algebra::OpLabel;
using modgroup::GMat;
using modgroup::GroupDescriptor;
using modgroup::SignPolicy;

const json& config_schema() {
  static const json schema = json::parse(generated::kJobConfigSchema);
  return schema;
}

namespace {

bool has_type(const json& v, const std::string& t) {
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "string") return v.is_string();
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  throw InternalError("schema uses unknown type " + t);
}

}  // namespace

void validate(const json& value, const json& schema, const std::string& path) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(value, t.get<std::string>());
    } else {
      for (const auto& x : t) ok = ok || has_type(value, x.get<std::string>());
    }
    if (!ok) throw ValidationError(path + ": expected type " + t.dump());
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& x : schema["enum"]) found = found || x == value;
    if (!found) throw ValidationError(path + ": value " + value.dump() + " is not one of " + schema["enum"].dump());
  }
  if (value.is_number()) {
    if (schema.contains("minimum") && value.get<double>() < schema["minimum"].get<double>())
      throw ValidationError(path + ": below minimum " + schema["minimum"].dump());
    if (schema.contains("maximum") && value.get<double>() > schema["maximum"].get<double>())
      throw ValidationError(path + ": above maximum " + schema["maximum"].dump());
  }
  if (value.is_object()) {
    for (const auto& r : schema.value("required", json::array()))
      if (!value.contains(r.get<std::string>())) throw ValidationError(path + ": missing required field " + r.dump());
    const json props = schema.value("properties", json::object());
    for (const auto& [k, v] : value.items()) {
      if (props.contains(k)) {
        validate(v, props[k], path + "." + k);
      } else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false) {
        throw ValidationError(path + ": unknown field '" + k + "'");
      }
    }
  }
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema["minItems"].get<size_t>())
      throw ValidationError(path + ": fewer than " + schema["minItems"].dump() + " items");
    if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<size_t>())
      throw ValidationError(path + ": more than " + schema["maxItems"].dump() + " items");
    if (schema.contains("items"))
      for (size_t i = 0; i < value.size(); ++i) validate(value[i], schema["items"], path + "[" + std::to_string(i) + "]");
  }
}

void validate_config(const json& cfg) { validate(cfg, config_schema()); }

uint64_t effective_seed(uint64_t fallback) {
  const char* env = std::getenv("HECKE_ENGINE_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError(std::string("HECKE_ENGINE_SEED is not an unsigned integer: '") + env + "'");
  }
}

namespace {

// --- config interpretation ------------------------------------------------

int64_t get_int(const json& cfg, const char* key, int64_t fallback) {
  return cfg.contains(key) ? cfg[key].get<int64_t>() : fallback;
}

int64_t require_int(const json& cfg, const char* key, const std::string& command) {
  if (!cfg.contains(key)) throw ValidationError(command + " needs --" + std::string(key));
  return cfg[key].get<int64_t>();
}

SignPolicy sign_of(const json& cfg) { return cfg.value("sign", "SL") == "GL" ? SignPolicy::GL : SignPolicy::SL; }

GroupDescriptor named_group(const std::string& name, int64_t N, SignPolicy s) {
  if (name == "gamma0") return GroupDescriptor::gamma0(N, s);
  if (name == "gamma1" || name == "gamma1_upper") return GroupDescriptor::gamma1_upper(N, s);
  if (name == "diag" || name == "gamma_diag") return GroupDescriptor::gamma_diag(N, s);
  if (name == "full") return GroupDescriptor::full(N, s);
  throw ValidationError("unknown group '" + name + "' (gamma0, gamma1, diag, full)");
}

GroupDescriptor group_of(const json& cfg, const std::string& fallback, int64_t level) {
  if (cfg.contains("group") && cfg["group"].is_object()) return GroupDescriptor::from_json(cfg["group"]);
  return named_group(cfg.value("group", fallback), level, sign_of(cfg));
}

const Ring* field_of(const json& cfg) { return exact::parse_ring(cfg.value("field", "Q")); }

coeffmod::ModulePtr module_of(const json& cfg) {
  if (cfg.contains("module") && cfg["module"].is_object()) return coeffmod::module_from_json(cfg["module"]);
  const std::string text = cfg.value("module", "sym:0");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string s; std::getline(ss, s, ':');) parts.push_back(s);
  if (parts.size() < 2 || parts.size() > 4 || parts[0] != "sym")
    throw ValidationError("module must look like sym:k[:e[:field]], got '" + text + "'");
  try {
    const int k = std::stoi(parts[1]);
    const int e = parts.size() > 2 ? std::stoi(parts[2]) : 0;
    if (k < 0) throw ValidationError("negative weight in '" + text + "'");
    const Ring* F = parts.size() > 3 ? exact::parse_ring(parts[3]) : field_of(cfg);
    return std::make_shared<coeffmod::SymModule>(F, k, e);
  } catch (const std::logic_error&) {
    throw ValidationError("module must look like sym:k[:e[:field]], got '" + text + "'");
  }
}

std::vector<OpLabel> labels_of(const json& cfg, int64_t level) {
  if (!cfg.contains("labels")) return eigen::default_labels(level);
  std::vector<OpLabel> out;
  for (const auto& s : cfg["labels"]) out.push_back(OpLabel::parse(s.get<std::string>()));
  if (out.empty()) throw ValidationError("empty label list");
  return out;
}

cohom::Path path_of(const json& cfg) { return cfg.value("path", "ambient") == "direct" ? cohom::Path::Direct : cohom::Path::Ambient; }

cohom::CohomSpace space_of(const json& cfg) {
  const auto g = group_of(cfg, "gamma0", get_int(cfg, "level", 1));
  return cohom::CohomSpace::compute(g, module_of(cfg), static_cast<int>(get_int(cfg, "degree", 1)), path_of(cfg));
}

json strings(const GMat& g) {
  json rows = json::array();
  for (int i = 0; i < g.n(); ++i) {
    json r = json::array();
    for (int j = 0; j < g.n(); ++j) r.push_back(std::to_string(g(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json space_json(const cohom::CohomSpace& H) {
  return {{"group", H.gamma().to_json()}, {"module", H.base_module()->to_json()}, {"degree", H.degree()},
          {"path", cohom::to_string(H.path())}};
}

// --- commands --------------------------------------------------------------

struct Sink {
  std::ostream& out;
  std::vector<json> records;
  void emit(json r) {
    out << r.dump() << '\n';
    records.push_back(std::move(r));
  }
};

int cmd_decompose(const json& cfg, Sink& sink) {
  const int64_t level = get_int(cfg, "level", 1);
  const int n = static_cast<int>(get_int(cfg, "n", 2));
  const auto g = group_of(cfg, "gamma0", level);
  algebra::DoubleCosetSum T(g, g, n);
  if (cfg.contains("delta")) {
    const auto d = cfg["delta"].get<std::vector<int64_t>>();
    const GMat delta = GMat::of(d[0], d[1], d[2], d[3]);
    if (!g.in_semigroup(delta)) {
      if (delta.det() != 0 && std::gcd(delta.det(), level) != 1) throw MathError("determinant not prime to level");
      throw MathError("delta is not in the semigroup of the group");
    }
    T = algebra::decompose(g, delta, g);
  } else {
    const int64_t p = require_int(cfg, "p", "decompose");
    const int m = static_cast<int>(get_int(cfg, "m", 1));
    if (std::gcd(p, level) != 1) throw MathError("determinant not prime to level");
    if (m > n) throw ValidationError("m must not exceed n");
    T = m == 0 ? algebra::hecke_ta(p, g, n) : algebra::hecke_tp(p, m, n, g);
  }
  for (size_t i = 0; i < T.terms().size(); ++i)
    sink.emit({{"kind", "coset"}, {"index", i}, {"coeff", T.terms()[i].coeff.get_str()},
               {"matrix", strings(T.terms()[i].rep)}, {"group_hash", g.hash()}});
  return 0;
}

int cmd_hecke_matrix(const json& cfg, Sink& sink) {
  const auto H = space_of(cfg);
  const OpLabel l{require_int(cfg, "p", "hecke-matrix"), static_cast<int>(get_int(cfg, "m", 1))};
  const auto M = cohom::hecke_matrix(H, l);
  json r = M.to_json();
  r.update(space_json(H));
  r["kind"] = "hecke-matrix";
  r["char_poly"] = exact::char_poly(M.matrix).to_string();
  sink.emit(r);
  return 0;
}

int cmd_eigensystems(const json& cfg, Sink& sink) {
  const auto H = space_of(cfg);
  json r = eigen::eigensystems(H, labels_of(cfg, H.gamma().level())).to_json();
  r.update(space_json(H));
  sink.emit(r);
  return 0;
}

int cmd_degree_check(const json& cfg, Sink& sink) {
  if (cfg.contains("p") && !algebra::is_prime64(cfg["p"].get<int64_t>()))
    throw ValidationError("p = " + std::to_string(cfg["p"].get<int64_t>()) + " is not prime");
  bool all = true;
  for (int n : {2, 3}) {
    if (cfg.contains("n") && cfg["n"] != n) continue;
    for (int m = 1; m <= n; ++m) {
      if (cfg.contains("m") && cfg["m"] != m) continue;
      for (int64_t p : {2, 3, 5, 7}) {
        if (cfg.contains("p") && cfg["p"] != p) continue;
        if (!algebra::is_prime64(p)) continue;
        const auto d = algebra::degree(algebra::hecke_tp(p, m, n, GroupDescriptor::full()));
        const auto f = algebra::degree_formula(p, m, n);
        all = all && d == f;
        sink.emit({{"kind", "degree-check"}, {"n", n}, {"m", m}, {"p", p}, {"degree", d.get_str()},
                   {"formula", f.get_str()}, {"pass", d == f}});
      }
    }
  }
  return all ? 0 : 1;
}

int cmd_series_check(const json& cfg, Sink& sink) {
  struct Case {
    int n;
    int64_t p;
    int k;
  };
  std::vector<Case> cases;
  if (cfg.contains("p") || cfg.contains("n") || cfg.contains("k_max")) {
    const int n = static_cast<int>(get_int(cfg, "n", 2));
    cases.push_back({n, require_int(cfg, "p", "series-check"), static_cast<int>(get_int(cfg, "k_max", n == 2 ? 2 : 1))});
    if (!algebra::is_prime64(cases.back().p)) throw ValidationError("p must be prime");
  } else {
    cases = {{2, 2, 2}, {2, 3, 2}, {3, 2, 1}, {3, 3, 1}};
  }
  const auto g = group_of(cfg, "full", get_int(cfg, "level", 1));
  bool all = true;
  for (const auto& c : cases) {
    if (std::gcd(c.p, g.level()) != 1) throw MathError("determinant not prime to level");
    const bool ok = algebra::series_check(c.p, c.n, c.k, g);
    all = all && ok;
    sink.emit({{"kind", "series-check"}, {"n", c.n}, {"p", c.p}, {"k_max", c.k}, {"group_hash", g.hash()}, {"pass", ok}});
  }
  return all ? 0 : 1;
}

int cmd_reduce(const json& cfg, Sink& sink, int jobs) {
  const int64_t source_level = get_int(cfg, "source_level", get_int(cfg, "level", 1));
  const auto g = group_of(cfg, "gamma1_upper", source_level);
  const auto M = module_of(cfg);
  const int64_t ell = cfg.contains("ell") ? cfg["ell"].get<int64_t>() : M->ring()->characteristic();
  if (ell == 0 || M->ring()->characteristic() != ell)
    throw ValidationError("reduce needs coefficients over a finite field of characteristic ell");

  eigen::ReductionTarget t;
  t.kind = cfg.value("target", "upper") == "diagonal" ? eigen::TargetKind::Diagonal : eigen::TargetKind::Upper;
  t.sign = g.sign_policy();
  if (t.kind == eigen::TargetKind::Upper) {
    t.modulus = get_int(cfg, "modulus", source_level);
    if (!cfg.contains("target_level") && source_level % t.modulus != 0)
      throw ValidationError("modulus must divide the source level unless --target-level is given");
    t.level = get_int(cfg, "target_level", source_level / t.modulus);
  } else {
    t.level = get_int(cfg, "target_level", source_level);
    t.modulus = get_int(cfg, "modulus", t.level);
  }
  const int64_t top = std::lcm(source_level, t.group().level());
  const auto labels = labels_of(cfg, top);
  for (const auto& l : labels)
    if (std::gcd(l.det(), top) != 1) throw MathError("determinant not prime to level");

  const int degree = static_cast<int>(get_int(cfg, "degree", 1));
  const auto H = cohom::CohomSpace::compute(g, M, degree, path_of(cfg));
  const auto report = eigen::eigensystems(H, labels);
  const eigen::ReductionSource source{g, M, degree};
  const eigen::ReductionSearch search(t, 1, ell, labels, jobs);

  size_t witnessed = 0, missing = 0;
  for (const auto& e : report.systems) {
    try {
      const auto w = search.find(e.system, source.to_json());
      sink.emit(w.to_json());
      ++witnessed;
    } catch (const MathError& err) {
      ++missing;
      sink.emit({{"kind", "error"}, {"code", 3}, {"message", err.what()}, {"phi", eigen::system_to_json(e.system)}});
    }
  }
  sink.emit({{"kind", "reduce-summary"}, {"source", source.to_json()}, {"target", t.to_json()}, {"ell", ell},
             {"space_dim", H.dim()}, {"systems", report.systems.size()}, {"witnessed", witnessed},
             {"candidates", search.candidates().size()}});
  return missing == 0 ? 0 : 3;
}

int cmd_rep_check(uint64_t seed, Sink& sink) {
  bool all = true;
  for (const auto& r : rep_checks(seed)) {
    all = all && r.pass;
    sink.emit({{"kind", "rep-check"}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  return all ? 0 : 1;
}

int cmd_selftest(uint64_t seed, int jobs, std::ostream& out) {
  const auto results = selftest(seed, jobs);
  size_t width = 4, passed = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  out << std::left << std::setw(static_cast<int>(width)) << "check" << "  result  seconds  detail\n";
  double total = 0;
  for (const auto& r : results) {
    passed += r.pass ? 1 : 0;
    total += r.seconds;
    out << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << (r.pass ? "PASS  " : "FAIL  ") << "  "
        << std::right << std::setw(7) << std::fixed << std::setprecision(2) << r.seconds << "  " << r.detail << '\n';
  }
  out << "selftest: " << passed << "/" << results.size() << " passed in " << std::fixed << std::setprecision(2) << total
      << " s\n";
  return passed == results.size() ? 0 : 1;
}

// --- argument parsing ----------------------------------------------------

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"decompose", "coset decomposition of a double coset or Hecke operator"},
    {"hecke-matrix", "matrix of a Hecke operator on a cohomology space"},
    {"eigensystems", "simultaneous eigensystems on a cohomology space"},
    {"degree-check", "coset counts against the closed degree formula"},
    {"series-check", "coefficients of the Hecke series identity"},
    {"reduce", "witnesses with one-dimensional coefficients"},
    {"rep-check", "brute-force checks of the representation lemmas"},
    {"selftest", "invariant suite with timings"}};

std::string normalize_label(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) return "T" + s;
  return s;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');)
    if (!t.empty()) out.push_back(t);
  return out;
}

struct Parsed {
  json flags = json::object();
  std::string config_path;
  std::string command;
};

void add_flags(CLI::App& app, Parsed& P, const std::string& cmd) {
  auto int_flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<int64_t>(
        name, [&P, key](const int64_t& v) { P.flags[key] = v; }, help);
  };
  auto str_flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(
        name, [&P, key](const std::string& v) { P.flags[key] = v; }, help);
  };
  const bool space = cmd == "hecke-matrix" || cmd == "eigensystems" || cmd == "reduce";
  if (cmd == "decompose" || space || cmd == "series-check") {
    int_flag("--level", "level", "level N of the group");
    str_flag("--group", "group", "gamma0, gamma1, diag or full");
    str_flag("--sign", "sign", "SL or GL");
  }
  if (cmd == "decompose" || cmd == "hecke-matrix" || cmd == "degree-check" || cmd == "series-check")
    int_flag("--p", "p", "prime (or a, with --m 0)");
  if (cmd == "decompose" || cmd == "hecke-matrix" || cmd == "degree-check")
    int_flag("--m", "m", "operator T_p^(m); 0 selects T_a");
  if (cmd == "decompose" || cmd == "degree-check" || cmd == "series-check") int_flag("--n", "n", "matrix size (2 or 3)");
  if (cmd == "series-check") int_flag("--k-max", "k_max", "highest series coefficient");
  if (cmd == "decompose")
    app.add_option_function<std::string>(
        "--delta",
        [&P](const std::string& v) {
          json d = json::array();
          for (const auto& t : split_commas(v)) {
            try {
              d.push_back(std::stoll(t));
            } catch (const std::logic_error&) {
              throw ValidationError("--delta expects four integers a,b,c,d");
            }
          }
          P.flags["delta"] = d;
        },
        "double coset representative a,b,c,d");
  if (space) {
    str_flag("--module", "module", "sym:k[:e[:field]]");
    str_flag("--field", "field", "default field of the module (Q, F5, F25, ...)");
    int_flag("--degree", "degree", "cohomological degree (0 or 1)");
    str_flag("--path", "path", "ambient or direct");
    app.add_option_function<std::string>(
        "--labels",
        [&P](const std::string& v) {
          json l = json::array();
          for (const auto& t : split_commas(v)) l.push_back(normalize_label(t));
          P.flags["labels"] = l;
        },
        "operator labels, e.g. 2,3,7");
  }
  if (cmd == "reduce") {
    int_flag("--ell", "ell", "residue characteristic");
    int_flag("--source-level", "source_level", "level of the source group");
    str_flag("--target", "target", "upper or diagonal");
    int_flag("--target-level", "target_level", "level N of the target");
    int_flag("--modulus", "modulus", "modulus of the characters");
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config file must hold a JSON object");
  if (j.contains("labels") && j["labels"].is_array())
    for (auto& l : j["labels"]) {
      if (l.is_number_integer()) l = "T" + std::to_string(l.get<int64_t>());
      else if (l.is_string()) l = normalize_label(l.get<std::string>());
    }
  return j;
}

int dispatch(const json& cfg, std::ostream& out) {
  const std::string cmd = cfg["command"];
  const uint64_t seed = effective_seed(cfg.contains("seed") ? cfg["seed"].get<uint64_t>() : coeffmod::kDefaultSeed);
  const int jobs = static_cast<int>(get_int(cfg, "jobs", 1));
  Sink sink{out, {}};
  if (cmd == "decompose") return cmd_decompose(cfg, sink);
  if (cmd == "hecke-matrix") return cmd_hecke_matrix(cfg, sink);
  if (cmd == "eigensystems") return cmd_eigensystems(cfg, sink);
  if (cmd == "degree-check") return cmd_degree_check(cfg, sink);
  if (cmd == "series-check") return cmd_series_check(cfg, sink);
  if (cmd == "reduce") return cmd_reduce(cfg, sink, jobs);
  if (cmd == "rep-check") return cmd_rep_check(seed, sink);
  if (cmd == "selftest") return cmd_selftest(seed, jobs, out);
  throw InternalError("unhandled command " + cmd);
}

int report_error(int code, const std::string& message, std::ostream& out, std::ostream& err) {
  out << json{{"kind", "error"}, {"code", code}, {"message", message}}.dump() << '\n';
  err << "hecke: " << message << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hecke operators on the cohomology of congruence subgroups", "hecke"};
  app.require_subcommand(0, 1);
  Parsed P;
  app.add_option("--config", P.config_path, "JobConfig file (JSON); flags override its fields");
  app.add_option_function<std::string>(
      "--output", [&P](const std::string& v) { P.flags["output"] = v; }, "write records to this file");
  app.add_option_function<int64_t>(
      "--seed", [&P](const int64_t& v) { P.flags["seed"] = v; }, "seed of the randomized parts (HECKE_ENGINE_SEED wins)");
  app.add_option_function<int64_t>(
      "--jobs", [&P](const int64_t& v) { P.flags["jobs"] = v; }, "worker threads");
  app.fallthrough();
  for (const auto& [name, help] : kCommands) {
    auto* sub = app.add_subcommand(name, help);
    add_flags(*sub, P, name);
    sub->callback([&P, n = name] { P.command = n; });
  }

  try {
    try {
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      throw ValidationError(e.what());
    }
    json cfg = P.config_path.empty() ? json::object() : load_config(P.config_path);
    for (const auto& [k, v] : P.flags.items()) cfg[k] = v;
    if (!P.command.empty()) cfg["command"] = P.command;
    if (!cfg.contains("command")) {
      out << app.help();
      return args.empty() ? 0 : 2;
    }
    validate_config(cfg);
    if (!cfg.contains("output")) return dispatch(cfg, out);
    const std::string path = cfg["output"];
    std::ofstream file(path);
    if (!file) throw ValidationError("cannot write '" + path + "'");
    try {
      return dispatch(cfg, file);
    } catch (const ValidationError& e) {
      return report_error(2, e.what(), file, err);
    } catch (const MathError& e) {
      return report_error(3, e.what(), file, err);
    } catch (const json::exception& e) {
      return report_error(2, e.what(), file, err);
    } catch (const std::exception& e) {
      return report_error(4, e.what(), file, err);
    }
  } catch (const ValidationError& e) {
    return report_error(2, e.what(), out, err);
  } catch (const MathError& e) {
    return report_error(3, e.what(), out, err);
  } catch (const json::exception& e) {
    return report_error(2, e.what(), out, err);
  } catch (const CLI::Error& e) {
    return report_error(2, e.what(), out, err);
  } catch (const std::exception& e) {
    return report_error(4, e.what(), out, err);
  }
}

}  // namespace hecke::cli
