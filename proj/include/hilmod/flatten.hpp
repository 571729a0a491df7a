#pragma once

// Scalar coordinates for free modules. A^p is flattened component by
// component, each component block by block, each block row-major, so left
// multiplication by a in M_n acts on a flattened component as a (x) I_n.

#include "hilmod/module.hpp"

#include <functional>

namespace hilmod {

Index flat_dim(const ModuleSpace& space);

Vector flatten(const ModuleElement& x);
ModuleElement unflatten(const ModuleSpace& space, const Vector& v);

// Standard basis element number `index` of the flattened coordinates.
ModuleElement flat_basis_element(const ModuleSpace& space, Index index);

struct FlattenedSystem {
  ModuleSpace domain;
  ModuleSpace codomain;
  Matrix matrix;  // flat_dim(codomain) x flat_dim(domain)

  Vector embed(const ModuleElement& x) const { return flatten(x); }
  ModuleElement extract(const Vector& v) const { return unflatten(codomain, v); }
};

using ModuleMap = std::function<ModuleElement(const ModuleElement&)>;

// Reads the matrix of `map` off the flattened basis, then re-checks on random
// probes that it reproduces the map and that the map commutes with the right
// A-action; throws NotLinear with the failing probe otherwise.
FlattenedSystem flatten_map(const ModuleSpace& domain, const ModuleSpace& codomain, const ModuleMap& map,
                            const ProbeOptions& opts = {});

FlattenedSystem flatten(const ModuleOperator& t, const ProbeOptions& opts = {});

}  // namespace hilmod
