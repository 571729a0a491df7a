#pragma once

// Localization of A^p at a pure state f: the Hilbert space H_f = X / N_f with
// (x + N_f, y + N_f)_f = f(<y, x>), linear in the first argument, and the map
// tau -> tau_f that represents x -> f(tau(x)) inside H_f.

#include "hilmod/module.hpp"
#include "hilmod/state.hpp"

#include <memory>
#include <string_view>

namespace hilmod {

struct LocalizedSpace {
  ModuleSpace source;
  PureState state;
  std::vector<ModuleElement> basis;  // coset representatives
  Matrix gram;                       // gram(j, k) = f(<basis_k, basis_j>) = (b_j, b_k)_f

  Index dimension() const noexcept { return gram.rows(); }
};

using LocalizedSpacePtr = std::shared_ptr<const LocalizedSpace>;

struct LocalizedVector {
  LocalizedSpacePtr space;
  Vector coordinates;
};

// Null space N_f and the coset basis, chosen by pivoted Cholesky on the
// flattened semi-definite form (pivots below rank_tol times the largest
// diagonal entry are dropped).
LocalizedSpacePtr localize_space(const ModuleSpace& x, const PureState& f, double rank_tol = 1e-10);

LocalizedVector localize_vector(const LocalizedSpacePtr& l, const ModuleElement& x);

// tau_f with (b_j, tau_f)_f = f(tau(b_j)) on the basis.
LocalizedVector localize_functional(const LocalizedSpacePtr& l, const DualFunctional& tau,
                                    const ProbeOptions& opts = {});

// (u, w)_f = u^T gram conj(w)
Complex localized_inner(const LocalizedVector& u, const LocalizedVector& w);
double localized_norm(const LocalizedVector& u);

// Defects of the pairing identities under the library's slot convention (see
// kSlotConventionNote). Each returns the absolute error of one identity.
//   localized pairing:   (x + N_f, tau_f)_f = f(tau(x))
//   representation:      tau(x) = <z_tau, x>   (max-abs over A)
//   functional pairing:  f(<z_tau, z_rho>) = (rho_f, tau_f)_f
double localized_pairing_defect(const LocalizedSpacePtr& l, const DualFunctional& tau, const ModuleElement& x);
double representation_defect(const DualFunctional& tau, const ModuleElement& x);
double functional_pairing_defect(const LocalizedSpacePtr& l, const DualFunctional& tau, const DualFunctional& rho);

inline constexpr std::string_view kSlotConventionNote =
    "slot convention: <x,y> is A-linear in y; functionals are represented as tau(y) = <z_tau, y>; "
    "(x+N_f, y+N_f)_f = f(<y,x>); the pairing of two functionals holds as f(<z_tau, z_rho>) = (rho_f, tau_f)_f, "
    "i.e. with the arguments of the localized product swapped relative to <tau, rho>.";

}  // namespace hilmod
