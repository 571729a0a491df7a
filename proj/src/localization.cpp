#include "hilmod/localization.hpp"

#include "hilmod/error.hpp"
#include "hilmod/flatten.hpp"

#include <cmath>

namespace hilmod {

namespace {

Complex local_form(const PureState& f, const ModuleElement& x, const ModuleElement& y) {
  return evaluate(f, inner_product(y, x));  // (x, y)_f
}

}  // namespace

LocalizedSpacePtr localize_space(const ModuleSpace& x, const PureState& f, double rank_tol) {
  if (f.block() >= x.shape.num_blocks() || f.vector().size() != x.shape.dim(f.block()))
    throw Error(ErrorKind::ShapeMismatch, "state does not live on this algebra");
  const Index n = flat_dim(x);
  std::vector<ModuleElement> e;
  e.reserve(static_cast<std::size_t>(n));
  for (Index a = 0; a < n; ++a) e.push_back(flat_basis_element(x, a));

  // Pivoted Cholesky on G(a, b) = (E_a, E_b)_f.
  Matrix g(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) g(a, b) = local_form(f, e[static_cast<std::size_t>(a)], e[static_cast<std::size_t>(b)]);

  Eigen::VectorXd diag = g.diagonal().real();
  const double top = diag.size() > 0 ? diag.maxCoeff() : 0.0;
  std::vector<Index> pivots;
  Matrix l(n, 0);
  while (top > 0.0) {
    Index best = 0;
    const double value = diag.maxCoeff(&best);
    if (value <= rank_tol * top) break;
    Vector col = g.col(best);
    for (Index j = 0; j < l.cols(); ++j) col -= l.col(j) * std::conj(l(best, j));
    col /= std::sqrt(value);
    l.conservativeResize(Eigen::NoChange, l.cols() + 1);
    l.col(l.cols() - 1) = col;
    for (Index a = 0; a < n; ++a) diag(a) -= std::norm(col(a));
    diag(best) = 0.0;
    pivots.push_back(best);
  }

  auto space = std::make_shared<LocalizedSpace>(LocalizedSpace{x, f, {}, Matrix()});
  const auto d = static_cast<Index>(pivots.size());
  space->gram.resize(d, d);
  for (Index j = 0; j < d; ++j) space->basis.push_back(e[static_cast<std::size_t>(pivots[static_cast<std::size_t>(j)])]);
  for (Index j = 0; j < d; ++j)
    for (Index k = 0; k < d; ++k) space->gram(j, k) = g(pivots[static_cast<std::size_t>(j)], pivots[static_cast<std::size_t>(k)]);
  return space;
}

LocalizedVector localize_vector(const LocalizedSpacePtr& l, const ModuleElement& x) {
  require_same_space(l->source, x.space(), "localize_vector");
  const Index d = l->dimension();
  Vector r(d);
  for (Index j = 0; j < d; ++j) r(j) = local_form(l->state, x, l->basis[static_cast<std::size_t>(j)]);
  if (d == 0) return {l, Vector(0)};
  const linalg::DenseLu lu(l->gram.transpose(), linalg::Pivoting::Partial);
  return {l, lu.solve(r)};
}

LocalizedVector localize_functional(const LocalizedSpacePtr& l, const DualFunctional& tau, const ProbeOptions& opts) {
  require_same_space(l->source, tau.space(), "localize_functional");
  if (!tau.representable()) check_linearity(tau, opts);
  const Index d = l->dimension();
  if (d == 0) return {l, Vector(0)};
  Vector t(d);
  for (Index j = 0; j < d; ++j) t(j) = evaluate(l->state, tau(l->basis[static_cast<std::size_t>(j)]));
  const linalg::DenseLu lu(l->gram, linalg::Pivoting::Partial);
  return {l, lu.solve(t).conjugate()};
}

Complex localized_inner(const LocalizedVector& u, const LocalizedVector& w) {
  if (u.space != w.space) throw Error(ErrorKind::ShapeMismatch, "localized vectors live in different spaces");
  return (u.coordinates.transpose() * u.space->gram * w.coordinates.conjugate())(0, 0);
}

double localized_norm(const LocalizedVector& u) {
  return std::sqrt(std::max(0.0, localized_inner(u, u).real()));
}

double localized_pairing_defect(const LocalizedSpacePtr& l, const DualFunctional& tau, const ModuleElement& x) {
  const LocalizedVector tf = localize_functional(l, tau);
  return std::abs(localized_inner(localize_vector(l, x), tf) - evaluate(l->state, tau(x)));
}

double representation_defect(const DualFunctional& tau, const ModuleElement& x) {
  return (tau(x) - inner_product(represent_functional(tau), x)).max_abs();
}

double functional_pairing_defect(const LocalizedSpacePtr& l, const DualFunctional& tau, const DualFunctional& rho) {
  const ModuleElement zt = represent_functional(tau);
  const ModuleElement zr = represent_functional(rho);
  const Complex lhs = evaluate(l->state, inner_product(zt, zr));
  return std::abs(lhs - localized_inner(localize_functional(l, rho), localize_functional(l, tau)));
}

}  // namespace hilmod
