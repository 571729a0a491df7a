// hilmod: batch front end over scenario files and the builtin registry.

#include "hilmod/error.hpp"
#include "hilmod/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string scenario;
  std::string builtin;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::string report;
};

void add_common(CLI::App* cmd, Flags& flags) {
  auto* sc = cmd->add_option("--scenario", flags.scenario, "scenario JSON file");
  auto* bi = cmd->add_option("--builtin", flags.builtin, "builtin scenario name (see 'list')");
  sc->excludes(bi);
  cmd->add_option("--seed", flags.seed, "override the sampling seed");
  cmd->add_option("--samples", flags.samples, "override the number of sampled states")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", flags.tol, "override the solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--report", flags.report, "write the report here instead of stdout");
}

int emit(const hilmod::io::Json& body, const std::string& path) {
  const std::string text = body.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "hilmod: cannot write report to '" << path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

int run(hilmod::Action action, const Flags& flags) {
  using namespace hilmod;
  Scenario s;
  try {
    if (flags.scenario.empty() == flags.builtin.empty()) {
      std::cerr << "hilmod: give exactly one of --scenario or --builtin\n";
      return 1;
    }
    s = flags.builtin.empty() ? load_scenario(flags.scenario) : builtin_scenario(flags.builtin);
  } catch (const Error& e) {
    io::Json err{{"tool_version", kToolVersion},
                 {"outcome", "error"},
                 {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}, {"path", e.path()}}}};
    std::cerr << "hilmod: " << e.what() << "\n";
    emit(err, flags.report);
    return 1;
  }
  s.action = action;
  if (flags.seed) s.sampling.seed = *flags.seed;
  if (flags.samples) s.sampling.states = *flags.samples;
  if (flags.tol) s.tol = *flags.tol;
  const Report rep = run_scenario(s);
  if (emit(rep.body, flags.report) != 0) return 1;
  return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert C*-module coercivity and solve tool"};
  app.set_version_flag("--version", std::string(hilmod::kToolVersion));
  app.require_subcommand(1);

  Flags flags;
  std::optional<hilmod::Action> chosen;
  const std::pair<const char*, hilmod::Action> commands[] = {
      {"certify", hilmod::Action::Certify}, {"solve", hilmod::Action::Solve},
      {"falsify", hilmod::Action::Falsify}, {"family-solve", hilmod::Action::FamilySolve},
      {"demo", hilmod::Action::Demo},
  };
  for (const auto& [name, action] : commands) {
    auto* cmd = app.add_subcommand(name, std::string("run the '") + name + "' action");
    add_common(cmd, flags);
    const hilmod::Action a = action;
    cmd->callback([&chosen, a] { chosen = a; });
  }
  bool listing = false;
  app.add_subcommand("list", "list builtin scenarios")->callback([&listing] { listing = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (listing) {
    hilmod::io::Json out = hilmod::io::Json::array();
    for (const auto& b : hilmod::list_builtins()) out.push_back({{"name", b.name}, {"description", b.description}});
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  return run(*chosen, flags);
}
