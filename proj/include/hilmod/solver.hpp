#pragma once

// Solvers for B(x, y) = tau(y) for all y: the full-space problem, a directed
// family of nested submodules, and the scalar (A = C) specialization.

#include "hilmod/forms.hpp"
#include "hilmod/module.hpp"

#include <cstdint>
#include <vector>

namespace hilmod {

struct SolveOptions {
  double solver_tol = 1e-8;  // relative to max(1, ||tau||)
  double uniqueness_tol = 1e-9;
  double bound_tol = 1e-9;
  std::size_t probes = 100;
  std::uint64_t seed = 0x501e;
  NormEstimateOptions norm{};
};

struct SolveResult {
  ModuleElement solution;
  double residual = 0.0;  // sup over probes of ||B(x,y) - tau(y)|| / ||y||
  double solution_norm = 0.0;
  double tau_norm = 0.0;
  bool tau_norm_is_lower_bound = false;
  double c = 0.0;
  double bound_slack = 0.0;  // ||tau|| / c - ||x||
  bool norm_bound_ok = false;
  double uniqueness_gap = 0.0;
  CoercivityRoute route = CoercivityRoute::Search;
};

// Solves T x = z_tau block by block. Throws SingularOperator or
// ResidualTooLarge.
SolveResult lax_milgram_solve(const SesquilinearForm& b, const DualFunctional& tau, const CoercivityCertificate& cert,
                              const SolveOptions& opts = {});

struct LevelResult {
  ModuleElement solution;
  double c_level = 0.0;     // smallest singular value of the compressed operator
  double residual = 0.0;    // against tau on Y_level
  double distance_to_final = 0.0;
};

struct FamilySolveResult {
  SolveResult final;
  std::vector<LevelResult> levels;
  // sup over probes v drawn from every Y_level of ||B(x, v) - tau(v)|| / ||v||
  double union_residual = 0.0;
};

// Throws NotNested when a family is not increasing, and
// LevelCertificateFailed (index = level) when a compressed level is not
// square or its constant drops below cert.c.
FamilySolveResult directed_family_solve(const SesquilinearForm& b, const DualFunctional& tau,
                                        const std::vector<Submodule>& x_family,
                                        const std::vector<Submodule>& y_family,
                                        const CoercivityCertificate& cert, const SolveOptions& opts = {});

// A = C only.
FamilySolveResult hilbert_space_solve(const SesquilinearForm& b, const DualFunctional& tau,
                                      const std::vector<Submodule>& x_family,
                                      const std::vector<Submodule>& y_family,
                                      const CoercivityCertificate& cert, const SolveOptions& opts = {});

}  // namespace hilmod
