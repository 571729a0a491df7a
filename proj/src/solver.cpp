#include "hilmod/solver.hpp"

#include "hilmod/error.hpp"
#include "hilmod/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hilmod {

namespace {

// sup over probes of ||B(x, y) - tau(y)|| / ||y||, y drawn from `within`.
double probe_residual(const SesquilinearForm& b, const DualFunctional& tau, const ModuleElement& x,
                      const Submodule* within, std::size_t probes, std::uint64_t seed) {
  random::Rng rng(seed);
  double worst = 0.0;
  for (std::size_t probe = 0; probe < probes; ++probe) {
    ModuleElement y = random::random_module_element(b.codomain(), rng);
    if (within != nullptr) y = within->project(y);
    const double n = module_norm(y);
    if (n == 0.0) continue;
    worst = std::max(worst, operator_norm(b(x, y) - tau(y)) / n);
  }
  return worst;
}

void finish(SolveResult& r, const DualFunctional& tau, const CoercivityCertificate& cert,
            const SolveOptions& opts) {
  const NormEstimate tn = functional_norm(tau, opts.norm);
  r.tau_norm = tn.value;
  r.tau_norm_is_lower_bound = tn.lower_bound;
  r.solution_norm = module_norm(r.solution);
  r.c = cert.c;
  r.route = cert.route;
  r.bound_slack = r.tau_norm / cert.c - r.solution_norm;
  r.norm_bound_ok = r.bound_slack >= -opts.bound_tol;
}

}  // namespace

SolveResult lax_milgram_solve(const SesquilinearForm& b, const DualFunctional& tau, const CoercivityCertificate& cert,
                              const SolveOptions& opts) {
  require_same_space(b.codomain(), tau.space(), "lax_milgram_solve");
  if (b.domain().rank != b.codomain().rank)
    throw Error(ErrorKind::SingularOperator, "operator between modules of different rank cannot be invertible");
  if (!(cert.c > 0.0)) throw Error(ErrorKind::ValidationError, "certificate constant must be positive");

  const ModuleElement z = represent_functional(tau);
  std::vector<Matrix> first;
  std::vector<Matrix> second;
  double gap = 0.0;
  for (std::size_t i = 0; i < b.domain().shape.num_blocks(); ++i) {
    const Matrix m = b.op().block_matrix(i);
    const linalg::DenseLu partial(m, linalg::Pivoting::Partial);
    const linalg::DenseLu complete(m, linalg::Pivoting::Complete);
    if (partial.singular() || complete.singular())
      throw Error(ErrorKind::SingularOperator,
                  "operator is singular on block " + std::to_string(i) + " although a certificate was given", i);
    const Matrix rhs = z.stacked(i);
    first.push_back(partial.solve(rhs));
    second.push_back(complete.solve(rhs));
    const double scale = std::max(1.0, first.back().cwiseAbs().maxCoeff());
    gap = std::max(gap, (first.back() - second.back()).cwiseAbs().maxCoeff() / scale);
  }

  SolveResult r;
  r.solution = ModuleElement::from_stacked(b.domain(), first);
  r.uniqueness_gap = gap;
  if (gap > opts.uniqueness_tol)
    throw Error(ErrorKind::SingularOperator, "two pivoting orders disagree by " + std::to_string(gap));
  finish(r, tau, cert, opts);
  r.residual = probe_residual(b, tau, r.solution, nullptr, opts.probes, opts.seed);
  if (r.residual > opts.solver_tol * std::max(1.0, r.tau_norm))
    throw Error(ErrorKind::ResidualTooLarge, "residual " + std::to_string(r.residual) + " exceeds tolerance");
  return r;
}

namespace {

void require_nested(const std::vector<Submodule>& family, const char* which) {
  for (std::size_t l = 0; l + 1 < family.size(); ++l) {
    for (const auto& g : family[l].generators()) {
      if (!family[l + 1].contains(g))
        throw Error(ErrorKind::NotNested,
                    std::string(which) + " family level " + std::to_string(l) + " is not contained in the next",
                    l);
    }
  }
}

}  // namespace

FamilySolveResult directed_family_solve(const SesquilinearForm& b, const DualFunctional& tau,
                                        const std::vector<Submodule>& x_family,
                                        const std::vector<Submodule>& y_family,
                                        const CoercivityCertificate& cert, const SolveOptions& opts) {
  require_same_space(b.codomain(), tau.space(), "directed_family_solve");
  if (x_family.empty() || x_family.size() != y_family.size())
    throw Error(ErrorKind::ValidationError, "families must be non-empty and of equal length");
  for (const auto& s : x_family) require_same_space(b.domain(), s.ambient(), "X family");
  for (const auto& s : y_family) require_same_space(b.codomain(), s.ambient(), "Y family");
  require_nested(x_family, "X");
  require_nested(y_family, "Y");
  if (!(cert.c > 0.0)) throw Error(ErrorKind::ValidationError, "certificate constant must be positive");

  const ModuleElement z = represent_functional(tau);
  const std::size_t nblocks = b.domain().shape.num_blocks();
  FamilySolveResult out;
  for (std::size_t lvl = 0; lvl < x_family.size(); ++lvl) {
    const Submodule& xs = x_family[lvl];
    const Submodule& ys = y_family[lvl];
    LevelResult level;
    std::vector<Matrix> stacked;
    double c_level = -1.0;
    for (std::size_t i = 0; i < nblocks; ++i) {
      const Matrix& qx = xs.column_basis(i);
      const Matrix& qy = ys.column_basis(i);
      if (qx.cols() != qy.cols())
        throw Error(ErrorKind::LevelCertificateFailed,
                    "level " + std::to_string(lvl) + ": X and Y levels have different dimension on block " +
                        std::to_string(i),
                    lvl);
      if (qx.cols() == 0) {
        stacked.push_back(Matrix::Zero(qx.rows(), b.domain().shape.dim(i)));
        continue;
      }
      // <T Q_X c, Q_Y d> restricted to the level: solve (Q_Y* M Q_X) C = Q_Y* Z.
      const Matrix compressed = qy.adjoint() * b.op().block_matrix(i) * qx;
      const double s = linalg::min_singular_value(compressed);
      c_level = c_level < 0.0 ? s : std::min(c_level, s);
      if (s < cert.c * (1.0 - 1e-9))
        throw Error(ErrorKind::LevelCertificateFailed,
                    "level " + std::to_string(lvl) + ": compressed constant " + std::to_string(s) +
                        " is below c = " + std::to_string(cert.c),
                    lvl);
      const linalg::DenseLu lu(compressed, linalg::Pivoting::Partial);
      stacked.push_back(qx * lu.solve(Matrix(qy.adjoint() * z.stacked(i))));
    }
    level.solution = ModuleElement::from_stacked(b.domain(), stacked);
    level.c_level = std::max(c_level, 0.0);
    level.residual = probe_residual(b, tau, level.solution, &ys, opts.probes, opts.seed + lvl);
    out.levels.push_back(std::move(level));
  }

  SolveResult& r = out.final;
  r.solution = out.levels.back().solution;
  finish(r, tau, cert, opts);
  r.residual = out.levels.back().residual;
  for (std::size_t lvl = 0; lvl < out.levels.size(); ++lvl) {
    auto& level = out.levels[lvl];
    level.distance_to_final = module_norm(level.solution - r.solution);
    if (level.residual > opts.solver_tol * std::max(1.0, r.tau_norm))
      throw Error(ErrorKind::ResidualTooLarge, "level " + std::to_string(lvl) + " residual exceeds tolerance", lvl);
    out.union_residual = std::max(
        out.union_residual, probe_residual(b, tau, r.solution, &y_family[lvl], opts.probes, opts.seed + 0x100 + lvl));
  }
  return out;
}

FamilySolveResult hilbert_space_solve(const SesquilinearForm& b, const DualFunctional& tau,
                                      const std::vector<Submodule>& x_family,
                                      const std::vector<Submodule>& y_family,
                                      const CoercivityCertificate& cert, const SolveOptions& opts) {
  if (!(b.domain().shape == AlgebraShape{1}))
    throw Error(ErrorKind::ShapeMismatch, "the scalar solver needs A = C");
  return directed_family_solve(b, tau, x_family, y_family, cert, opts);
}

}  // namespace hilmod
