#include "hilmod/module.hpp"

#include "hilmod/error.hpp"
#include "hilmod/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hilmod {

ModuleSpace::ModuleSpace(AlgebraShape s, std::size_t p) : shape(std::move(s)), rank(p) {
  if (rank < 1) throw Error(ErrorKind::ValidationError, "module rank must be at least 1");
}

void require_same_space(const ModuleSpace& a, const ModuleSpace& b, const char* where) {
  if (!(a == b)) throw Error(ErrorKind::ShapeMismatch, std::string(where) + ": module spaces differ");
}

ModuleElement::ModuleElement(ModuleSpace space, std::vector<AlgebraElement> components)
    : space_(std::move(space)), components_(std::move(components)) {
  if (components_.size() != space_.rank)
    throw Error(ErrorKind::ShapeMismatch, "component count does not match the module rank");
  for (const auto& c : components_) require_same_shape(space_.shape, c.shape(), "ModuleElement");
}

ModuleElement ModuleElement::zero(const ModuleSpace& space) {
  return {space, std::vector<AlgebraElement>(space.rank, AlgebraElement::zero(space.shape))};
}

ModuleElement ModuleElement::generator(const ModuleSpace& space, std::size_t k) {
  if (k >= space.rank) throw Error(ErrorKind::ShapeMismatch, "generator index out of range");
  ModuleElement e = zero(space);
  e.components_[k] = AlgebraElement::identity(space.shape);
  return e;
}

ModuleElement ModuleElement::from_stacked(const ModuleSpace& space, const std::vector<Matrix>& stacked) {
  if (stacked.size() != space.shape.num_blocks())
    throw Error(ErrorKind::ShapeMismatch, "stacked block count does not match the algebra");
  std::vector<AlgebraElement> comps;
  for (std::size_t k = 0; k < space.rank; ++k) {
    std::vector<Matrix> blocks;
    for (std::size_t i = 0; i < stacked.size(); ++i) {
      const Index n = space.shape.dim(i);
      if (stacked[i].rows() != n * static_cast<Index>(space.rank) || stacked[i].cols() != n)
        throw Error(ErrorKind::ShapeMismatch, "stacked block has the wrong size", i);
      blocks.push_back(stacked[i].middleRows(static_cast<Index>(k) * n, n));
    }
    comps.emplace_back(space.shape, std::move(blocks));
  }
  return {space, std::move(comps)};
}

Matrix ModuleElement::stacked(std::size_t block) const {
  const Index n = space_.shape.dim(block);
  Matrix out(n * static_cast<Index>(components_.size()), n);
  for (std::size_t k = 0; k < components_.size(); ++k)
    out.middleRows(static_cast<Index>(k) * n, n) = components_[k].block(block);
  return out;
}

double ModuleElement::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& o) {
  require_same_space(space_, o.space_, "add");
  for (std::size_t k = 0; k < components_.size(); ++k) components_[k] += o.components_[k];
  return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& o) {
  require_same_space(space_, o.space_, "subtract");
  for (std::size_t k = 0; k < components_.size(); ++k) components_[k] -= o.components_[k];
  return *this;
}

ModuleElement& ModuleElement::operator*=(Complex s) {
  for (auto& c : components_) c *= s;
  return *this;
}

ModuleElement operator*(const ModuleElement& x, const AlgebraElement& a) {
  std::vector<AlgebraElement> comps;
  comps.reserve(x.rank());
  for (const auto& c : x.components()) comps.push_back(c * a);
  return {x.space(), std::move(comps)};
}

AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
  require_same_space(x.space(), y.space(), "inner_product");
  const AlgebraShape& shape = x.space().shape;
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    Matrix acc = Matrix::Zero(shape.dim(i), shape.dim(i));
    for (std::size_t k = 0; k < x.rank(); ++k) acc += x.component(k).block(i).adjoint() * y.component(k).block(i);
    blocks.push_back(std::move(acc));
  }
  return {shape, std::move(blocks)};
}

AlgebraElement abs_module(const ModuleElement& x, const Tolerances& tol) {
  return positive_sqrt(inner_product(x, x), tol);
}

double module_norm(const ModuleElement& x) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.space().shape.num_blocks(); ++i)
    m = std::max(m, linalg::spectral_norm(x.stacked(i)));
  return m;
}

ModuleElement normalized(const ModuleElement& x) {
  const double n = module_norm(x);
  if (n == 0.0) throw Error(ErrorKind::ZeroElement, "cannot normalize the zero element");
  return x * Complex(1.0 / n);
}

// --- functionals ------------------------------------------------------------

DualFunctional DualFunctional::represented_by(ModuleElement z) {
  ModuleSpace space = z.space();
  return DualFunctional(std::move(space), std::move(z));
}

DualFunctional DualFunctional::black_box(ModuleSpace space, Callable fn) {
  return DualFunctional(std::move(space), std::move(fn));
}

AlgebraElement DualFunctional::operator()(const ModuleElement& y) const {
  require_same_space(space_, y.space(), "functional");
  if (const auto* z = std::get_if<ModuleElement>(&impl_)) return inner_product(*z, y);
  AlgebraElement out = std::get<Callable>(impl_)(y);
  require_same_shape(space_.shape, out.shape(), "functional value");
  return out;
}

void check_linearity(const DualFunctional& tau, const ProbeOptions& opts) {
  if (tau.representable()) return;
  random::Rng rng(opts.seed);
  for (std::size_t probe = 0; probe < opts.probes; ++probe) {
    const ModuleElement y1 = random::random_module_element(tau.space(), rng);
    const ModuleElement y2 = random::random_module_element(tau.space(), rng);
    const AlgebraElement b = random::random_element(tau.space().shape, rng);
    const AlgebraElement t1 = tau(y1);
    const AlgebraElement t2 = tau(y2);
    const double scale = std::max({t1.max_abs(), t2.max_abs(), (t1 * b).max_abs()});
    const double add_err = (tau(y1 + y2) - t1 - t2).max_abs();
    const double mod_err = (tau(y1 * b) - t1 * b).max_abs();
    if (add_err > opts.tol * scale || mod_err > opts.tol * scale)
      throw Error(ErrorKind::NotLinear,
                  "A-linearity probe " + std::to_string(probe) + " failed (additivity error " +
                      std::to_string(add_err) + ", module error " + std::to_string(mod_err) + ")",
                  probe);
  }
}

ModuleElement represent_functional(const DualFunctional& tau, const ProbeOptions& opts) {
  if (const ModuleElement* z = tau.representer()) return *z;
  check_linearity(tau, opts);
  std::vector<AlgebraElement> comps;
  for (std::size_t k = 0; k < tau.space().rank; ++k)
    comps.push_back(tau(ModuleElement::generator(tau.space(), k)).adjoint());
  return {tau.space(), std::move(comps)};
}

NormEstimate estimate_functional_norm(const DualFunctional& tau, const NormEstimateOptions& opts) {
  const ModuleSpace& space = tau.space();
  random::Rng rng(opts.seed);
  NormEstimate best{0.0, ModuleElement::zero(space), true};
  auto consider = [&](const ModuleElement& y) {
    const double v = operator_norm(tau(y));
    if (v > best.value) best = {v, y, true};
    return v;
  };
  for (std::size_t s = 0; s < opts.samples; ++s) consider(random::random_unit_element(space, rng));

  // Alternating ascent on block i: with u the top left singular vector of
  // tau(y) and w any unit vector, the probes y_{k,r} (block i of component k
  // equal to e_r w*) give u* tau(y_{k,r}) w = conj((z_k u)_r); the next iterate
  // is the rank-one element with stacked block (z u) w* / ||z u||.
  const auto p = static_cast<Index>(space.rank);
  for (std::size_t i = 0; i < space.shape.num_blocks(); ++i) {
    const Index n = space.shape.dim(i);
    Vector u = random::gaussian_matrix(n, 1, rng).col(0).normalized();
    const Vector w = Vector::Unit(n, 0);
    double last = -1.0;
    for (std::size_t step = 0; step < opts.refine_steps; ++step) {
      Vector zu(p * n);
      for (Index k = 0; k < p; ++k) {
        for (Index r = 0; r < n; ++r) {
          std::vector<Matrix> stacked;
          for (std::size_t b = 0; b < space.shape.num_blocks(); ++b) {
            const Index nb = space.shape.dim(b);
            stacked.push_back(Matrix::Zero(p * nb, nb));
          }
          stacked[i].row(k * n + r) = w.adjoint();
          const AlgebraElement val = tau(ModuleElement::from_stacked(space, stacked));
          zu(k * n + r) = std::conj(u.dot(val.block(i) * w));
        }
      }
      const double c = zu.norm();
      if (c == 0.0) break;
      std::vector<Matrix> stacked;
      for (std::size_t b = 0; b < space.shape.num_blocks(); ++b) {
        const Index nb = space.shape.dim(b);
        stacked.push_back(Matrix::Zero(p * nb, nb));
      }
      stacked[i] = (zu / c) * w.adjoint();
      const ModuleElement y = ModuleElement::from_stacked(space, stacked);
      const double v = consider(y);
      // Next left vector: top left singular vector of tau(y) on block i.
      const Matrix a = tau(y).block(i);
      const linalg::Eigh e = linalg::jacobi_eigh(a * a.adjoint());
      u = e.vectors.col(0);
      if (v <= last * (1.0 + 1e-15)) break;
      last = v;
    }
  }
  return best;
}

NormEstimate functional_norm(const DualFunctional& tau, const NormEstimateOptions& opts) {
  if (const ModuleElement* z = tau.representer()) {
    const double n = module_norm(*z);
    return {n, n > 0.0 ? normalized(*z) : *z, false};
  }
  return estimate_functional_norm(tau, opts);
}

// --- submodules -------------------------------------------------------------

Submodule::Submodule(ModuleSpace ambient, std::vector<ModuleElement> generators, const Tolerances& tol)
    : ambient_(std::move(ambient)), generators_(std::move(generators)) {
  for (const auto& g : generators_) require_same_space(ambient_, g.space(), "Submodule");
  const auto p = static_cast<Index>(ambient_.rank);
  std::vector<Matrix> spans;
  double top = 0.0;
  for (std::size_t i = 0; i < ambient_.shape.num_blocks(); ++i) {
    const Index n = ambient_.shape.dim(i);
    Matrix m(p * n, n * static_cast<Index>(generators_.size()));
    for (std::size_t j = 0; j < generators_.size(); ++j)
      m.middleCols(static_cast<Index>(j) * n, n) = generators_[j].stacked(i);
    if (m.size() > 0) top = std::max(top, linalg::spectral_norm(m));
    spans.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].cols() == 0 || top == 0.0) {
      bases_.push_back(Matrix(spans[i].rows(), 0));
    } else {
      bases_.push_back(linalg::range_basis(spans[i], 0.0, tol.rank * top));
    }
  }
}

Submodule Submodule::whole(const ModuleSpace& space) {
  std::vector<std::size_t> all(space.rank);
  for (std::size_t k = 0; k < space.rank; ++k) all[k] = k;
  return coordinate(space, all);
}

Submodule Submodule::coordinate(const ModuleSpace& space, const std::vector<std::size_t>& indices) {
  std::vector<ModuleElement> gens;
  for (std::size_t k : indices) gens.push_back(ModuleElement::generator(space, k));
  return Submodule(space, std::move(gens));
}

Index Submodule::dimension() const {
  Index d = 0;
  for (std::size_t i = 0; i < bases_.size(); ++i) d += bases_[i].cols() * ambient_.shape.dim(i);
  return d;
}

ModuleElement Submodule::project(const ModuleElement& x) const {
  require_same_space(ambient_, x.space(), "project");
  std::vector<Matrix> stacked;
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    const Matrix& q = bases_[i];
    stacked.push_back(q * (q.adjoint() * x.stacked(i)));
  }
  return ModuleElement::from_stacked(ambient_, stacked);
}

bool Submodule::contains(const ModuleElement& x, double tol) const {
  const double scale = module_norm(x);
  return module_norm(x - project(x)) <= tol * std::max(scale, 1e-300);
}

Submodule orthogonal_complement(const Submodule& y, const Tolerances& tol) {
  const ModuleSpace& space = y.ambient();
  const auto p = static_cast<Index>(space.rank);
  std::vector<ModuleElement> gens;
  for (std::size_t i = 0; i < space.shape.num_blocks(); ++i) {
    const Index n = space.shape.dim(i);
    const Matrix comp = linalg::complement_basis(y.column_basis(i), p * n);
    for (Index c = 0; c < comp.cols(); ++c) {
      std::vector<Matrix> stacked;
      for (std::size_t b = 0; b < space.shape.num_blocks(); ++b) {
        const Index nb = space.shape.dim(b);
        stacked.push_back(Matrix::Zero(p * nb, nb));
      }
      stacked[i].col(0) = comp.col(c);
      gens.push_back(ModuleElement::from_stacked(space, stacked));
    }
  }
  return Submodule(space, std::move(gens), tol);
}

ModuleElement project_onto(const Submodule& y, const ModuleElement& x) { return y.project(x); }

ModuleElement represent_on_submodule(const Submodule& y, const DualFunctional& tau, const ProbeOptions& opts) {
  require_same_space(y.ambient(), tau.space(), "represent_on_submodule");
  const DualFunctional extended = DualFunctional::black_box(
      tau.space(), [&y, &tau](const ModuleElement& v) { return tau(y.project(v)); });
  return y.project(represent_functional(extended, opts));
}

std::vector<ModuleElement> fullness_witnesses(const ModuleSpace& space, const std::vector<ModuleElement>& generators,
                                              const Tolerances& tol) {
  for (const auto& g : generators) require_same_space(space, g.space(), "fullness_witnesses");
  const AlgebraShape& shape = space.shape;
  // Right ideal spanned by the inner products: per block it is
  // {m : range(m) in W_i}, W_i the joint range of the <x_a, x_b>.
  Index missing = 0;
  double top = 0.0;
  std::vector<Matrix> joint;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const Index n = shape.dim(i);
    const auto count = static_cast<Index>(generators.size());
    Matrix m(n, n * count * count);
    for (Index a = 0; a < count; ++a)
      for (Index b = 0; b < count; ++b)
        m.middleCols((a * count + b) * n, n) =
            inner_product(generators[static_cast<std::size_t>(a)], generators[static_cast<std::size_t>(b)]).block(i);
    if (m.size() > 0) top = std::max(top, linalg::spectral_norm(m));
    joint.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const Index n = shape.dim(i);
    const Index w = (joint[i].size() == 0 || top == 0.0) ? 0 : linalg::range_basis(joint[i], 0.0, tol.rank * top).cols();
    missing += n * (n - w);
  }
  if (missing > 0)
    throw Error(ErrorKind::NotFull,
                "inner products of the generators span a proper right ideal (missing dimension " +
                    std::to_string(missing) + ")",
                static_cast<std::size_t>(missing));

  AlgebraElement s = AlgebraElement::zero(shape);
  for (const auto& g : generators) s += inner_product(g, g);
  const HermitianEigensystem eig = hermitian_eigensystem(s, tol);
  const AlgebraElement inv_sqrt = spectral_map(eig, [](double l) { return 1.0 / std::sqrt(l); });
  std::vector<ModuleElement> out;
  for (const auto& g : generators) out.push_back(g * inv_sqrt);
  return out;
}

// --- operators ----------------------------------------------------------------

ModuleOperator::ModuleOperator(ModuleSpace domain, ModuleSpace codomain, std::vector<AlgebraElement> entries)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), entries_(std::move(entries)) {
  require_same_shape(domain_.shape, codomain_.shape, "ModuleOperator");
  if (entries_.size() != domain_.rank * codomain_.rank)
    throw Error(ErrorKind::ShapeMismatch, "operator matrix must be q x p");
  for (const auto& e : entries_) require_same_shape(domain_.shape, e.shape(), "ModuleOperator entry");
}

ModuleOperator ModuleOperator::identity(const ModuleSpace& space) { return scalar(space, Complex(1.0)); }

ModuleOperator ModuleOperator::scalar(const ModuleSpace& space, Complex s) {
  std::vector<AlgebraElement> entries;
  for (std::size_t l = 0; l < space.rank; ++l)
    for (std::size_t k = 0; k < space.rank; ++k)
      entries.push_back(l == k ? AlgebraElement::scalar(space.shape, s) : AlgebraElement::zero(space.shape));
  return {space, space, std::move(entries)};
}

ModuleOperator ModuleOperator::from_block_matrices(const ModuleSpace& domain, const ModuleSpace& codomain,
                                                   const std::vector<Matrix>& blocks) {
  require_same_shape(domain.shape, codomain.shape, "from_block_matrices");
  const AlgebraShape& shape = domain.shape;
  if (blocks.size() != shape.num_blocks()) throw Error(ErrorKind::ShapeMismatch, "block count mismatch");
  std::vector<AlgebraElement> entries;
  for (std::size_t l = 0; l < codomain.rank; ++l) {
    for (std::size_t k = 0; k < domain.rank; ++k) {
      std::vector<Matrix> eb;
      for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
        const Index n = shape.dim(i);
        if (blocks[i].rows() != n * static_cast<Index>(codomain.rank) ||
            blocks[i].cols() != n * static_cast<Index>(domain.rank))
          throw Error(ErrorKind::ShapeMismatch, "block matrix has the wrong size", i);
        eb.push_back(blocks[i].block(static_cast<Index>(l) * n, static_cast<Index>(k) * n, n, n));
      }
      entries.emplace_back(shape, std::move(eb));
    }
  }
  return {domain, codomain, std::move(entries)};
}

const AlgebraElement& ModuleOperator::entry(std::size_t row, std::size_t col) const {
  return entries_.at(row * domain_.rank + col);
}

ModuleElement ModuleOperator::apply(const ModuleElement& x) const {
  require_same_space(domain_, x.space(), "ModuleOperator::apply");
  std::vector<AlgebraElement> out;
  for (std::size_t l = 0; l < codomain_.rank; ++l) {
    AlgebraElement acc = AlgebraElement::zero(domain_.shape);
    for (std::size_t k = 0; k < domain_.rank; ++k) acc += entry(l, k) * x.component(k);
    out.push_back(std::move(acc));
  }
  return {codomain_, std::move(out)};
}

ModuleOperator ModuleOperator::adjoint() const {
  std::vector<AlgebraElement> entries;
  for (std::size_t k = 0; k < domain_.rank; ++k)
    for (std::size_t l = 0; l < codomain_.rank; ++l) entries.push_back(entry(l, k).adjoint());
  return {codomain_, domain_, std::move(entries)};
}

Matrix ModuleOperator::block_matrix(std::size_t block) const {
  const Index n = domain_.shape.dim(block);
  Matrix out(n * static_cast<Index>(codomain_.rank), n * static_cast<Index>(domain_.rank));
  for (std::size_t l = 0; l < codomain_.rank; ++l)
    for (std::size_t k = 0; k < domain_.rank; ++k)
      out.block(static_cast<Index>(l) * n, static_cast<Index>(k) * n, n, n) = entry(l, k).block(block);
  return out;
}

double ModuleOperator::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, e.max_abs());
  return m;
}

double operator_norm(const ModuleOperator& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.domain().shape.num_blocks(); ++i)
    m = std::max(m, linalg::spectral_norm(t.block_matrix(i)));
  return m;
}

}  // namespace hilmod
