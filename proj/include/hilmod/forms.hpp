#pragma once

// A-sesquilinear forms B(x, y) = <T x, y>, recovery of T from a black-box
// form, and certification or falsification of the coercivity conditions
//   pointwise:  for each (f, x) some unit y with f(|y|) >= k and
//               |f(B(x,y))| >= c f(|x|) f(|y|)
//   uniform:    |f(B(x,y))| >= c f(|x|) f(|y|) for all f, x, y.

#include "hilmod/module.hpp"
#include "hilmod/state.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace hilmod {

class SesquilinearForm {
 public:
  explicit SesquilinearForm(ModuleOperator t) : t_(std::move(t)) {}

  // B(x, y) = <x, y>
  static SesquilinearForm inner_product(const ModuleSpace& space);

  const ModuleSpace& domain() const noexcept { return t_.domain(); }
  const ModuleSpace& codomain() const noexcept { return t_.codomain(); }
  const ModuleOperator& op() const noexcept { return t_; }

  AlgebraElement operator()(const ModuleElement& x, const ModuleElement& y) const;

 private:
  ModuleOperator t_;
};

// <T x, y>
AlgebraElement evaluate_form(const SesquilinearForm& b, const ModuleElement& x, const ModuleElement& y);

// ||T||, the bound of the form.
double form_norm(const SesquilinearForm& b);

using FormCallable = std::function<AlgebraElement(const ModuleElement&, const ModuleElement&)>;

struct RecoveredForm {
  SesquilinearForm form;
  bool invertible = false;
  bool adjointable = true;  // T* is the transposed matrix of block adjoints
  double max_probe_error = 0.0;
};

// T(e_k) = representer of y -> B(e_k, y). Throws NotSesquilinear with the
// failing probe when the black box violates B(xa, yb) = a* B(x,y) b,
// additivity, or disagrees with the reconstruction.
RecoveredForm operator_of_form(const FormCallable& b, const ModuleSpace& domain, const ModuleSpace& codomain,
                               std::size_t probes = 100, std::uint64_t seed = 0xf0f0, double tol = 1e-9);

enum class CoercivityRoute { PositiveInvertible, InnerProduct, Search };
std::string_view to_string(CoercivityRoute r) noexcept;

enum class WitnessRoute { Polar, InnerProduct, Ascent };
std::string_view to_string(WitnessRoute r) noexcept;

enum class WitnessStatus { Found, Vacuous, Inconclusive };
std::string_view to_string(WitnessStatus s) noexcept;

struct Witness {
  PureState f;
  ModuleElement x;
  ModuleElement y;
  double lhs = 0.0;    // |f(B(x,y))|
  double rhs = 0.0;    // c f(|x|) f(|y|)
  double f_abs_y = 0.0;
  WitnessRoute route = WitnessRoute::Polar;
  WitnessStatus status = WitnessStatus::Inconclusive;
};

struct Violation {
  PureState f;
  ModuleElement x;
  ModuleElement y;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct CoercivityCertificate {
  double c = 0.0;
  double k = 0.0;
  CoercivityRoute route = CoercivityRoute::Search;
  std::vector<Witness> witnesses;
  std::vector<Violation> violations;  // empty, or the first violation found
  bool sampled = false;
  std::uint64_t seed = 0;
  double form_norm = 0.0;
};

// Closed-form certificate for positive invertible T: c = 1/||T^{-1}||, and
// k = 1/m from the fullness witnesses {e_1} (m = 1). Throws
// NotPositiveOperator or Singular.
CoercivityCertificate certify_positive_invertible(const SesquilinearForm& b, const Tolerances& tol = {});

struct WitnessOptions {
  double c = 1.0;
  double k = 1.0;
  std::size_t steps = 200;
  std::size_t restarts = 20;
  std::uint64_t seed = 0x77;
  double tol = 1e-9;
};

// Tries the closed-form witness (unitary polar factor of T x for q = 1, its
// isometric completion otherwise), then projected ascent. Never throws for a
// missing witness; the status says Inconclusive instead.
Witness witness_for_state(const SesquilinearForm& b, const PureState& f, const ModuleElement& x,
                          const WitnessOptions& opts = {});

// Maximizer of |f(B(x,y))| over unit y supported on the block of f by
// projected gradient ascent; the value is the lhs of the returned witness.
Witness ascent_witness(const SesquilinearForm& b, const PureState& f, const ModuleElement& x,
                       const WitnessOptions& opts = {});

struct Candidate {
  PureState f;
  ModuleElement x;
  ModuleElement y;
};

struct FalsifyOptions {
  double tol = 1e-9;
  std::vector<Candidate> candidates;  // tried before the sampled search
};

// Searches (f, x, y) with |f(B(x,y))| < c f(|x|) f(|y|) - tol. Deterministic
// in the seed; returns the first violation in index order.
CoercivityCertificate falsify_uniform(const SesquilinearForm& b, double c, const StateSample& sample,
                                      std::size_t probes, std::uint64_t seed, const FalsifyOptions& opts = {});

}  // namespace hilmod
