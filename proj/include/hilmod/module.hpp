#pragma once

// Free Hilbert modules X = A^p over a finite-dimensional C*-algebra, their
// A-valued inner product, bounded A-linear functionals, submodules and
// A-linear operators between free modules.
//
// Conventions: X is a right A-module, (x·a)_k = x_k a, and
// <x, y> = sum_k x_k* y_k is A-linear in the second slot. A functional is
// represented by z when tau(y) = <z, y> for all y.

#include "hilmod/algebra.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace hilmod {

struct ModuleSpace {
  AlgebraShape shape;
  std::size_t rank = 1;

  ModuleSpace() = default;
  ModuleSpace(AlgebraShape s, std::size_t p);

  friend bool operator==(const ModuleSpace&, const ModuleSpace&) = default;
};

void require_same_space(const ModuleSpace& a, const ModuleSpace& b, const char* where);

class ModuleElement {
 public:
  ModuleElement() = default;
  ModuleElement(ModuleSpace space, std::vector<AlgebraElement> components);

  static ModuleElement zero(const ModuleSpace& space);
  // e_k · 1
  static ModuleElement generator(const ModuleSpace& space, std::size_t k);
  // Inverse of stacked(): one (p·n_i) x n_i matrix per block.
  static ModuleElement from_stacked(const ModuleSpace& space, const std::vector<Matrix>& stacked);

  const ModuleSpace& space() const noexcept { return space_; }
  std::size_t rank() const noexcept { return components_.size(); }
  const AlgebraElement& component(std::size_t k) const { return components_.at(k); }
  const std::vector<AlgebraElement>& components() const noexcept { return components_; }

  // Block i of all components stacked vertically; right multiplication by a
  // acts on its columns.
  Matrix stacked(std::size_t block) const;

  double max_abs() const;

  ModuleElement& operator+=(const ModuleElement& o);
  ModuleElement& operator-=(const ModuleElement& o);
  ModuleElement& operator*=(Complex s);

  friend ModuleElement operator+(ModuleElement a, const ModuleElement& b) { return a += b; }
  friend ModuleElement operator-(ModuleElement a, const ModuleElement& b) { return a -= b; }
  friend ModuleElement operator*(ModuleElement a, Complex s) { return a *= s; }
  friend ModuleElement operator*(Complex s, ModuleElement a) { return a *= s; }
  // Right module action x·a.
  friend ModuleElement operator*(const ModuleElement& x, const AlgebraElement& a);

 private:
  ModuleSpace space_;
  std::vector<AlgebraElement> components_;
};

AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y);

// |x| = <x,x>^{1/2}
AlgebraElement abs_module(const ModuleElement& x, const Tolerances& tol = {});

// ||x|| = ||<x,x>||^{1/2}
double module_norm(const ModuleElement& x);

// x / ||x||; throws ZeroElement for x = 0.
ModuleElement normalized(const ModuleElement& x);

class DualFunctional {
 public:
  using Callable = std::function<AlgebraElement(const ModuleElement&)>;

  // tau(y) = <z, y>
  static DualFunctional represented_by(ModuleElement z);
  // A black box with declared A-linearity; checked by probes before use.
  static DualFunctional black_box(ModuleSpace space, Callable fn);

  const ModuleSpace& space() const noexcept { return space_; }
  bool representable() const noexcept { return std::holds_alternative<ModuleElement>(impl_); }
  const ModuleElement* representer() const noexcept { return std::get_if<ModuleElement>(&impl_); }

  AlgebraElement operator()(const ModuleElement& y) const;

 private:
  DualFunctional(ModuleSpace space, std::variant<ModuleElement, Callable> impl)
      : space_(std::move(space)), impl_(std::move(impl)) {}

  ModuleSpace space_;
  std::variant<ModuleElement, Callable> impl_;
};

struct ProbeOptions {
  std::size_t probes = 20;
  std::uint64_t seed = 0x5eed;
  double tol = 1e-10;  // relative
};

// Additivity and tau(y·b) = tau(y)·b on random probes; throws NotLinear.
void check_linearity(const DualFunctional& tau, const ProbeOptions& opts = {});

// z with tau(y) = <z, y>, read off the standard generators: z_k = tau(e_k)*.
ModuleElement represent_functional(const DualFunctional& tau, const ProbeOptions& opts = {});

struct NormEstimate {
  double value = 0.0;     // ||tau(y)|| at the witness, so never above ||tau||
  ModuleElement witness;  // unit vector
  bool lower_bound = true;
};

struct NormEstimateOptions {
  std::size_t samples = 1000;
  std::size_t refine_steps = 60;
  std::uint64_t seed = 0x6e6f726d;
};

// Sampled supremum of ||tau(y)|| over unit y, sharpened by an alternating
// ascent per block that only evaluates tau.
NormEstimate estimate_functional_norm(const DualFunctional& tau, const NormEstimateOptions& opts = {});

// Exact (||z_tau||) for representable functionals, the sampled estimate otherwise.
NormEstimate functional_norm(const DualFunctional& tau, const NormEstimateOptions& opts = {});

// Closed submodule given by generators. The projection onto it is computed
// once at construction; the object is immutable afterwards.
class Submodule {
 public:
  Submodule(ModuleSpace ambient, std::vector<ModuleElement> generators, const Tolerances& tol = {});

  static Submodule whole(const ModuleSpace& space);
  // span_A{e_k : k in indices}
  static Submodule coordinate(const ModuleSpace& space, const std::vector<std::size_t>& indices);

  const ModuleSpace& ambient() const noexcept { return ambient_; }
  const std::vector<ModuleElement>& generators() const noexcept { return generators_; }

  // Orthonormal basis of the column space V_i in C^{p·n_i}; the submodule is
  // the set of x whose stacked block i has all columns in V_i.
  const Matrix& column_basis(std::size_t block) const { return bases_.at(block); }
  // Complex dimension of the submodule.
  Index dimension() const;

  ModuleElement project(const ModuleElement& x) const;
  bool contains(const ModuleElement& x, double tol = 1e-9) const;

 private:
  ModuleSpace ambient_;
  std::vector<ModuleElement> generators_;
  std::vector<Matrix> bases_;
};

Submodule orthogonal_complement(const Submodule& y, const Tolerances& tol = {});

ModuleElement project_onto(const Submodule& y, const ModuleElement& x);

// Representer of a functional on Y inside Y: tau is extended by zero on
// Y-perp, represented in X, and the representer lands in Y.
ModuleElement represent_on_submodule(const Submodule& y, const DualFunctional& tau,
                                     const ProbeOptions& opts = {});

// Elements w_a = x_a · s^{-1/2}, s = sum_a <x_a, x_a>, with sum <w_a, w_a> = 1.
// Throws NotFull (index = missing dimension) when the right ideal spanned by
// the <x_a, x_b> is proper.
std::vector<ModuleElement> fullness_witnesses(const ModuleSpace& space,
                                              const std::vector<ModuleElement>& generators,
                                              const Tolerances& tol = {});

// A-linear map A^p -> A^q acting by left multiplication with a q x p matrix
// over A: (T x)_l = sum_k T_lk x_k.
class ModuleOperator {
 public:
  ModuleOperator(ModuleSpace domain, ModuleSpace codomain, std::vector<AlgebraElement> entries);

  static ModuleOperator identity(const ModuleSpace& space);
  static ModuleOperator scalar(const ModuleSpace& space, Complex s);
  // One (q·n_i) x (p·n_i) matrix per block.
  static ModuleOperator from_block_matrices(const ModuleSpace& domain, const ModuleSpace& codomain,
                                            const std::vector<Matrix>& blocks);

  const ModuleSpace& domain() const noexcept { return domain_; }
  const ModuleSpace& codomain() const noexcept { return codomain_; }
  const AlgebraElement& entry(std::size_t row, std::size_t col) const;
  const std::vector<AlgebraElement>& entries() const noexcept { return entries_; }

  ModuleElement apply(const ModuleElement& x) const;
  ModuleOperator adjoint() const;
  Matrix block_matrix(std::size_t block) const;
  double max_abs() const;

 private:
  ModuleSpace domain_;
  ModuleSpace codomain_;
  std::vector<AlgebraElement> entries_;  // row-major, q x p
};

// Operator norm on the Hilbert module: the largest block_matrix spectral norm.
double operator_norm(const ModuleOperator& t);

}  // namespace hilmod
