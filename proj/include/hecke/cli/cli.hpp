#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hecke::cli {

// One command per call. Records go to `out` one JSON object per line (or to
// the configured output file); `err` gets human-readable diagnostics.
// Exit codes: 0 ok, 1 a check failed, 2 validation error, 3 math error,
// 4 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// The published JobConfig schema and a validator for the subset of JSON
// Schema it uses (type, enum, minimum, maximum, required, properties,
// additionalProperties, items, minItems, maxItems).
const nlohmann::json& config_schema();
// Throws ValidationError naming the offending path.
void validate(const nlohmann::json& value, const nlohmann::json& schema, const std::string& path = "$");
void validate_config(const nlohmann::json& cfg);

// Seed from HECKE_ENGINE_SEED if set, else `fallback`.
uint64_t effective_seed(uint64_t fallback);

struct CheckResult {
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::string detail;
};

// Brute-force checks of the representation lemmas over small finite groups.
std::vector<CheckResult> rep_checks(uint64_t seed);
// The invariant suite behind `selftest`.
std::vector<CheckResult> selftest(uint64_t seed, int jobs);
// Runs f, timing it; exceptions count as failures.
CheckResult timed_check(const std::string& name, const std::function<bool(std::string&)>& f);

}  // namespace hecke::cli
