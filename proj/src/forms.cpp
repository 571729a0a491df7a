#include "hilmod/forms.hpp"

#include "hilmod/error.hpp"
#include "hilmod/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hilmod {

SesquilinearForm SesquilinearForm::inner_product(const ModuleSpace& space) {
  return SesquilinearForm(ModuleOperator::identity(space));
}

AlgebraElement SesquilinearForm::operator()(const ModuleElement& x, const ModuleElement& y) const {
  return hilmod::inner_product(t_.apply(x), y);
}

AlgebraElement evaluate_form(const SesquilinearForm& b, const ModuleElement& x, const ModuleElement& y) {
  require_same_space(b.domain(), x.space(), "evaluate_form (x)");
  require_same_space(b.codomain(), y.space(), "evaluate_form (y)");
  return b(x, y);
}

double form_norm(const SesquilinearForm& b) { return operator_norm(b.op()); }

RecoveredForm operator_of_form(const FormCallable& b, const ModuleSpace& domain, const ModuleSpace& codomain,
                               std::size_t probes, std::uint64_t seed, double tol) {
  require_same_shape(domain.shape, codomain.shape, "operator_of_form");
  random::Rng rng(seed);
  auto fail = [](std::size_t probe, const std::string& what) {
    throw Error(ErrorKind::NotSesquilinear, "probe " + std::to_string(probe) + ": " + what, probe);
  };

  for (std::size_t probe = 0; probe < probes; ++probe) {
    const ModuleElement x1 = random::random_module_element(domain, rng);
    const ModuleElement x2 = random::random_module_element(domain, rng);
    const ModuleElement y = random::random_module_element(codomain, rng);
    const AlgebraElement a = random::random_element(domain.shape, rng);
    const AlgebraElement c = random::random_element(domain.shape, rng);
    const AlgebraElement base = b(x1, y);
    const double scale = std::max(1.0, base.max_abs()) * std::max(1.0, a.max_abs()) * std::max(1.0, c.max_abs());
    if ((b(x1 * a, y * c) - a.adjoint() * base * c).max_abs() > tol * scale * 10.0)
      fail(probe, "B(xa, yb) != a* B(x,y) b");
    if ((b(x1 + x2, y) - base - b(x2, y)).max_abs() > tol * std::max(1.0, base.max_abs()) * 10.0)
      fail(probe, "B is not additive in the first argument");
  }

  std::vector<ModuleElement> columns;
  for (std::size_t k = 0; k < domain.rank; ++k) {
    const ModuleElement ek = ModuleElement::generator(domain, k);
    const DualFunctional row = DualFunctional::black_box(codomain, [&b, ek](const ModuleElement& y) { return b(ek, y); });
    ProbeOptions popts;
    popts.seed = seed + 1 + k;
    popts.tol = tol;
    try {
      columns.push_back(represent_functional(row, popts));
    } catch (const Error& e) {
      fail(k, std::string("B(e_k, .) is not A-linear: ") + e.what());
    }
  }
  std::vector<AlgebraElement> entries;
  for (std::size_t l = 0; l < codomain.rank; ++l)
    for (std::size_t k = 0; k < domain.rank; ++k) entries.push_back(columns[k].component(l));
  RecoveredForm out{SesquilinearForm(ModuleOperator(domain, codomain, std::move(entries))), false, true, 0.0};

  for (std::size_t probe = 0; probe < probes; ++probe) {
    const ModuleElement x = random::random_module_element(domain, rng);
    const ModuleElement y = random::random_module_element(codomain, rng);
    const AlgebraElement expected = b(x, y);
    const double err = (out.form(x, y) - expected).max_abs();
    out.max_probe_error = std::max(out.max_probe_error, err);
    if (err > tol * std::max(1.0, expected.max_abs())) fail(probe, "reconstruction disagrees with the black box");
  }

  if (domain.rank == codomain.rank) {
    out.invertible = true;
    const double norm = operator_norm(out.form.op());
    for (std::size_t i = 0; i < domain.shape.num_blocks(); ++i) {
      if (norm == 0.0 || linalg::min_singular_value(out.form.op().block_matrix(i)) <= 1e-8 * norm) out.invertible = false;
    }
  }
  return out;
}

std::string_view to_string(CoercivityRoute r) noexcept {
  switch (r) {
    case CoercivityRoute::PositiveInvertible: return "positive_invertible";
    case CoercivityRoute::InnerProduct: return "inner_product";
    case CoercivityRoute::Search: return "search";
  }
  return "unknown";
}

std::string_view to_string(WitnessRoute r) noexcept {
  switch (r) {
    case WitnessRoute::Polar: return "polar";
    case WitnessRoute::InnerProduct: return "inner_product";
    case WitnessRoute::Ascent: return "ascent";
  }
  return "unknown";
}

std::string_view to_string(WitnessStatus s) noexcept {
  switch (s) {
    case WitnessStatus::Found: return "found";
    case WitnessStatus::Vacuous: return "vacuous";
    case WitnessStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

CoercivityCertificate certify_positive_invertible(const SesquilinearForm& b, const Tolerances& tol) {
  if (!(b.domain() == b.codomain()))
    throw Error(ErrorKind::NotPositiveOperator, "domain and codomain differ");
  const ModuleOperator& t = b.op();
  double c = 0.0;
  for (std::size_t i = 0; i < b.domain().shape.num_blocks(); ++i) {
    const Matrix m = t.block_matrix(i);
    const double scale = std::max(m.norm(), 1e-300);
    if ((m - m.adjoint()).norm() > tol.hermitian * scale)
      throw Error(ErrorKind::NotPositiveOperator, "operator is not self-adjoint on block " + std::to_string(i), i);
    const linalg::Eigh e = linalg::jacobi_eigh(m);
    const double top = std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
    const double low = e.values(e.values.size() - 1);
    if (low < -tol.hermitian * top)
      throw Error(ErrorKind::NotPositiveOperator, "operator has a negative eigenvalue on block " + std::to_string(i), i);
    if (low <= tol.rank * top) throw Error(ErrorKind::Singular, "operator is singular on block " + std::to_string(i), i);
    c = (i == 0) ? low : std::min(c, low);
  }
  const auto family = fullness_witnesses(b.domain(), {ModuleElement::generator(b.domain(), 0)}, tol);

  CoercivityCertificate cert;
  cert.c = c;
  cert.k = 1.0 / static_cast<double>(family.size());
  cert.route = CoercivityRoute::PositiveInvertible;
  cert.sampled = false;
  cert.form_norm = form_norm(b);
  return cert;
}

namespace {

double state_of_abs(const PureState& f, const ModuleElement& x) { return evaluate(f, abs_module(x)).real(); }

ModuleElement supported_on_block(const ModuleSpace& space, std::size_t block, const Matrix& stacked_block) {
  const auto p = static_cast<Index>(space.rank);
  std::vector<Matrix> stacked;
  for (std::size_t b = 0; b < space.shape.num_blocks(); ++b) {
    const Index n = space.shape.dim(b);
    stacked.push_back(b == block ? stacked_block : Matrix::Zero(p * n, n));
  }
  return ModuleElement::from_stacked(space, stacked);
}

void score(const SesquilinearForm& b, Witness& w, double c, double fx, double k, double tol) {
  w.lhs = std::abs(evaluate(w.f, b(w.x, w.y)));
  w.f_abs_y = state_of_abs(w.f, w.y);
  w.rhs = c * fx * w.f_abs_y;
  w.status = (w.lhs >= w.rhs - tol && w.f_abs_y >= k - tol) ? WitnessStatus::Found : WitnessStatus::Inconclusive;
}

// Isometric completion of the polar factor of w = T x: per block a matrix
// with orthonormal columns U' V* where W = U S V*, so <w, y> = |w|.
ModuleElement closed_form_witness(const ModuleElement& w, const Tolerances& tol) {
  const ModuleSpace& space = w.space();
  std::vector<Matrix> stacked;
  for (std::size_t i = 0; i < space.shape.num_blocks(); ++i) {
    const Matrix wi = w.stacked(i);
    const Index n = wi.cols();
    const linalg::Eigh e = linalg::jacobi_eigh(wi.adjoint() * wi);
    const double top = std::sqrt(std::max(0.0, e.values(0)));
    Index r = 0;
    while (r < n && top > 0.0 && std::sqrt(std::max(0.0, e.values(r))) > tol.rank * top) ++r;
    Matrix ur(wi.rows(), r);
    for (Index j = 0; j < r; ++j) ur.col(j) = wi * e.vectors.col(j) / std::sqrt(e.values(j));
    // One Gram-Schmidt pass against rounding; keeps the column phases.
    for (Index j = 0; j < r; ++j) {
      for (Index l = 0; l < j; ++l) ur.col(j) -= ur.col(l) * ur.col(l).dot(ur.col(j));
      ur.col(j).normalize();
    }
    const Matrix full = linalg::complete_orthonormal(ur, wi.rows());
    stacked.push_back(full.leftCols(n) * e.vectors.adjoint());
  }
  return ModuleElement::from_stacked(space, stacked);
}

}  // namespace

Witness ascent_witness(const SesquilinearForm& b, const PureState& f, const ModuleElement& x, const WitnessOptions& opts) {
  const ModuleSpace& ys = b.codomain();
  const std::size_t i = f.block();
  const Vector& v = f.vector();
  const Vector a = b.op().apply(x).stacked(i) * v;  // f(B(x,y)) = a* (Y_i v)
  const double fx = state_of_abs(f, x);
  const Index rows = static_cast<Index>(ys.rank) * ys.shape.dim(i);

  Witness best{f, x, ModuleElement::zero(ys), -1.0, 0.0, 0.0, WitnessRoute::Ascent, WitnessStatus::Inconclusive};
  const double an = a.norm();
  for (std::size_t restart = 0; restart < std::max<std::size_t>(opts.restarts, 1); ++restart) {
    random::Rng rng(opts.seed + 0x9e3779b97f4a7c15ULL * (restart + 1));
    Matrix y = random::gaussian_matrix(rows, v.size(), rng);
    y /= linalg::spectral_norm(y);
    for (std::size_t step = 0; step <= opts.steps; ++step) {
      Witness cand{f, x, supported_on_block(ys, i, y), 0.0, 0.0, 0.0, WitnessRoute::Ascent, WitnessStatus::Inconclusive};
      score(b, cand, opts.c, fx, opts.k, opts.tol);
      if (cand.f_abs_y >= opts.k - opts.tol && cand.lhs > best.lhs) best = cand;
      if (step == opts.steps || an == 0.0) break;
      const Complex val = a.dot(y * v);
      const Complex phase = std::abs(val) > 0.0 ? val / std::abs(val) : Complex(1.0);
      y += (phase / an) * a * v.adjoint();
      // Project back to the unit sphere: clip singular values at 1, rescale.
      const linalg::Eigh e = linalg::jacobi_eigh(y.adjoint() * y);
      Eigen::VectorXd scale(e.values.size());
      for (Index j = 0; j < scale.size(); ++j) {
        const double s = std::sqrt(std::max(0.0, e.values(j)));
        scale(j) = s > 1.0 ? 1.0 / s : 1.0;
      }
      y = y * e.vectors * scale.cast<Complex>().asDiagonal() * e.vectors.adjoint();
      const double nrm = linalg::spectral_norm(y);
      if (nrm == 0.0) break;
      y /= nrm;
    }
    if (an == 0.0) break;
  }
  if (best.lhs < 0.0) {
    best.y = supported_on_block(ys, i, Matrix::Identity(rows, v.size()));
    score(b, best, opts.c, fx, opts.k, opts.tol);
    best.status = WitnessStatus::Inconclusive;
  }
  return best;
}

Witness witness_for_state(const SesquilinearForm& b, const PureState& f, const ModuleElement& x, const WitnessOptions& opts) {
  require_same_space(b.domain(), x.space(), "witness_for_state");
  if (f.block() >= x.space().shape.num_blocks() || f.vector().size() != x.space().shape.dim(f.block()))
    throw Error(ErrorKind::ShapeMismatch, "state does not live on this algebra");
  if (module_norm(x) == 0.0) throw Error(ErrorKind::ZeroElement, "witness search needs x != 0");

  const double fx = state_of_abs(f, x);
  Witness w{f, x, closed_form_witness(b.op().apply(x), Tolerances{}),
            0.0, 0.0, 0.0,
            b.codomain().rank == 1 ? WitnessRoute::Polar : WitnessRoute::InnerProduct,
            WitnessStatus::Inconclusive};
  score(b, w, opts.c, fx, opts.k, opts.tol);
  if (fx <= opts.tol) {
    w.status = WitnessStatus::Vacuous;
    return w;
  }
  if (w.status == WitnessStatus::Found) return w;
  Witness a = ascent_witness(b, f, x, opts);
  return a.lhs > w.lhs ? a : w;
}

CoercivityCertificate falsify_uniform(const SesquilinearForm& b, double c, const StateSample& sample,
                                      std::size_t probes, std::uint64_t seed, const FalsifyOptions& opts) {
  if (!(c > 0.0)) throw Error(ErrorKind::ValidationError, "coercivity constant must be positive");
  CoercivityCertificate cert;
  cert.c = c;
  cert.route = CoercivityRoute::Search;
  cert.sampled = true;
  cert.seed = seed;
  cert.form_norm = form_norm(b);

  auto check = [&](const PureState& f, const ModuleElement& x, const ModuleElement& y) {
    const double lhs = std::abs(evaluate(f, b(x, y)));
    const double rhs = c * state_of_abs(f, x) * state_of_abs(f, y);
    if (lhs < rhs - opts.tol) {
      cert.violations.push_back({f, x, y, lhs, rhs});
      return true;
    }
    return false;
  };

  for (const auto& cand : opts.candidates) {
    require_same_space(b.domain(), cand.x.space(), "falsify candidate x");
    require_same_space(b.codomain(), cand.y.space(), "falsify candidate y");
    if (check(cand.f, cand.x, cand.y)) return cert;
  }

  const ModuleSpace& xs = b.domain();
  const ModuleSpace& ys = b.codomain();
  for (std::size_t s = 0; s < sample.states.size(); ++s) {
    const PureState& f = sample.states[s];
    const std::size_t i = f.block();
    const Vector& v = f.vector();
    const Matrix m = b.op().block_matrix(i);
    for (std::size_t probe = 0; probe < probes; ++probe) {
      std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(probe)};
      random::Rng rng(sq);
      ModuleElement x = ModuleElement::zero(xs);
      if (probe == 0) {
        // Bottom right singular direction of the block matrix.
        const linalg::Eigh e = linalg::jacobi_eigh(m.adjoint() * m);
        x = supported_on_block(xs, i, e.vectors.col(e.vectors.cols() - 1) * v.adjoint());
      } else {
        x = random::random_unit_element(xs, rng);
      }
      if (state_of_abs(f, x) <= opts.tol) continue;

      const Vector a = b.op().apply(x).stacked(i) * v;
      const double an = a.norm();
      if (a.size() >= 2) {
        Matrix dir = Matrix::Zero(a.size(), 1);
        if (an > 0.0) dir.col(0) = a / an;
        else dir(0, 0) = 1.0;
        const Matrix perp = linalg::complement_basis(dir, a.size());
        if (check(f, x, supported_on_block(ys, i, perp.col(0) * v.adjoint()))) return cert;
      }
      if (an > 0.0 && check(f, x, supported_on_block(ys, i, (a / an) * v.adjoint()))) return cert;
      if (check(f, x, random::random_unit_element(ys, rng))) return cert;
    }
  }
  return cert;
}

}  // namespace hilmod
