#include "hilmod/flatten.hpp"

#include "hilmod/error.hpp"
#include "hilmod/random.hpp"

#include <algorithm>
#include <string>

namespace hilmod {

Index flat_dim(const ModuleSpace& space) {
  return static_cast<Index>(space.rank) * space.shape.algebra_dim();
}

Vector flatten(const ModuleElement& x) {
  Vector v(flat_dim(x.space()));
  Index pos = 0;
  for (const auto& c : x.components()) {
    for (const auto& b : c.blocks()) {
      for (Index r = 0; r < b.rows(); ++r)
        for (Index s = 0; s < b.cols(); ++s) v(pos++) = b(r, s);
    }
  }
  return v;
}

ModuleElement unflatten(const ModuleSpace& space, const Vector& v) {
  if (v.size() != flat_dim(space)) throw Error(ErrorKind::ShapeMismatch, "flattened vector has the wrong length");
  std::vector<AlgebraElement> comps;
  Index pos = 0;
  for (std::size_t k = 0; k < space.rank; ++k) {
    std::vector<Matrix> blocks;
    for (Index n : space.shape.block_dims()) {
      Matrix b(n, n);
      for (Index r = 0; r < n; ++r)
        for (Index s = 0; s < n; ++s) b(r, s) = v(pos++);
      blocks.push_back(std::move(b));
    }
    comps.emplace_back(space.shape, std::move(blocks));
  }
  return {space, std::move(comps)};
}

ModuleElement flat_basis_element(const ModuleSpace& space, Index index) {
  return unflatten(space, Vector::Unit(flat_dim(space), index));
}

FlattenedSystem flatten_map(const ModuleSpace& domain, const ModuleSpace& codomain, const ModuleMap& map,
                            const ProbeOptions& opts) {
  require_same_shape(domain.shape, codomain.shape, "flatten_map");
  const Index n = flat_dim(domain);
  FlattenedSystem sys{domain, codomain, Matrix(flat_dim(codomain), n)};
  for (Index a = 0; a < n; ++a) {
    const ModuleElement image = map(flat_basis_element(domain, a));
    require_same_space(codomain, image.space(), "flatten_map image");
    sys.matrix.col(a) = flatten(image);
  }

  random::Rng rng(opts.seed);
  for (std::size_t probe = 0; probe < opts.probes; ++probe) {
    const ModuleElement x = random::random_module_element(domain, rng);
    const AlgebraElement b = random::random_element(domain.shape, rng);
    const ModuleElement tx = map(x);
    const double scale = std::max({1.0, tx.max_abs(), sys.matrix.cwiseAbs().maxCoeff()});
    const double lin_err = (sys.matrix * flatten(x) - flatten(tx)).cwiseAbs().maxCoeff();
    const double mod_err = (map(x * b) - tx * b).max_abs();
    if (lin_err > opts.tol * scale || mod_err > opts.tol * scale * std::max(1.0, b.max_abs()))
      throw Error(ErrorKind::NotLinear, "flattened map fails the A-linearity probe " + std::to_string(probe), probe);
  }
  return sys;
}

FlattenedSystem flatten(const ModuleOperator& t, const ProbeOptions& opts) {
  return flatten_map(t.domain(), t.codomain(), [&t](const ModuleElement& x) { return t.apply(x); }, opts);
}

}  // namespace hilmod
