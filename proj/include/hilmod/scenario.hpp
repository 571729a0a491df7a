#pragma once

// Scenario files, the builtin registry and the report format used by the
// command-line front end.

#include "hilmod/serialize.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hilmod {

inline constexpr const char* kToolVersion = "hilmod 0.1.0";

enum class Action { Certify, Solve, Falsify, FamilySolve, Demo };
std::string_view to_string(Action a) noexcept;
Action parse_action(std::string_view s);

struct FormSpec {
  std::string kind = "identity";  // identity | scaled-identity | random-positive | operator
  double scale = 1.0;             // scaled-identity
  double min_eig = 0.5;           // random-positive
  std::optional<std::uint64_t> seed;
  std::vector<AlgebraElement> entries;  // operator: row-major q x p
};

struct FunctionalSpec {
  std::string kind = "random";  // representer | random | zero
  std::optional<ModuleElement> element;
  std::optional<std::uint64_t> seed;
};

struct SamplingSpec {
  std::size_t states = 16;
  std::size_t probes = 8;
  std::uint64_t seed = 1;
  SamplingStrategy strategy = SamplingStrategy::Random;
};

struct FamilyLevel {
  std::vector<ModuleElement> x;
  std::vector<ModuleElement> y;
};

struct FamilySpec {
  std::string kind = "coordinate-chain";  // coordinate-chain | levels
  std::vector<FamilyLevel> levels;
};

struct DemoSpec {
  std::string kind = "m2-gap";  // m2-gap | sin-counterexample
  std::vector<std::size_t> grids{64, 256, 1024};
  std::vector<double> cs{0.01, 0.1, 1.0};
};

struct Scenario {
  std::string name;
  Action action = Action::Solve;
  AlgebraShape shape{1};
  std::size_t p = 1;
  std::size_t q = 1;
  FormSpec form;
  FunctionalSpec functional;
  std::optional<double> c;
  std::optional<double> k;
  SamplingSpec sampling;
  std::optional<FamilySpec> family;
  std::optional<DemoSpec> demo;
  double tol = 1e-8;
};

Scenario parse_scenario(const io::Json& j);
Scenario load_scenario(const std::string& path);
io::Json to_json(const Scenario& s);

struct BuiltinInfo {
  std::string name;
  std::string description;
};

std::vector<BuiltinInfo> list_builtins();
Scenario builtin_scenario(const std::string& name);

struct Report {
  io::Json body;  // stable key order; "timing" is the only nondeterministic field
  int exit_code = 0;
};

// Exit codes: 0 success, 2 falsification found, 1 error.
Report run_scenario(const Scenario& s);
Report run_scenario(const std::string& path);

// Grid version of the sin(1/t) obstruction on A = C^{n+1}; the report body
// carries per-grid solutions' oscillation on (0, delta).
io::Json demo_counterexample(const std::vector<std::size_t>& grids);

// Report without its timing field, for determinism comparisons.
io::Json strip_timing(io::Json body);

}  // namespace hilmod
