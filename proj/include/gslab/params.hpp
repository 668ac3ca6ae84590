#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace gslab {

/// Which radial equation is integrated.
///   P_eps : -Δu + εu - u^{p-1} + u^{q-1} = 0
///   P_zero: the same with ε = 0 (supercritical p only)
///   R_eps : -Δv + v = v^{p-1} - ε^{(q-p)/(p-2)} v^{q-1}
///   R_zero: -Δv + v = v^{p-1} (subcritical p only)
enum class Family { P_eps, P_zero, R_zero, R_eps };

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

struct ProblemParams {
  int N = 3;
  double p = 4.0;
  double q = 6.0;
  double eps = 0.0;
  Family family = Family::P_eps;

  double p_star() const { return 2.0 * N / (N - 2.0); }

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;

  /// Coefficient of the q-term in R_eps, ε^{(q-p)/(p-2)}.
  double r_coupling() const;

  /// Decay rate k of the linearized far field u'' + (N-1)/r u' = k² u;
  /// zero for the algebraically decaying P_zero family.
  double decay_rate() const;

  bool algebraic_far_field() const { return family == Family::P_zero; }
};

/// One power term c·|u|^{e-2}u of the nonlinearity f (so F gets c|u|^e/e).
struct PowerTerm {
  double exponent = 0.0;
  double coeff = 0.0;
};

/// f(u) = Σ c_i |u|^{e_i-2} u so that the radial equation is -Δu = f(u).
class Nonlinearity {
 public:
  explicit Nonlinearity(const ProblemParams& params);

  double f(double u) const;
  double df(double u) const;
  double F(double u) const;

  std::size_t size() const { return count_; }
  const PowerTerm& term(std::size_t i) const { return terms_[i]; }

 private:
  std::array<PowerTerm, 3> terms_{};
  std::size_t count_ = 0;
};

/// Positive equilibria and energy levels of the scalar nonlinearity that
/// bound the shooting search.
struct EquilibriumStructure {
  /// Smaller / larger positive roots of f (beta1 is 0 when f has a single
  /// nonzero root; beta2 is absent for R_zero).
  double beta1 = 0.0;
  std::optional<double> beta2;
  /// Smallest positive root of F; amplitudes below it cannot reach zero
  /// energy. Absent when F <= 0 on (0, ∞), i.e. no ground state exists.
  std::optional<double> zeta1;
};

EquilibriumStructure equilibria(const ProblemParams& params);

/// Threshold ε* above which P_ε has no ground state: the ε at which F_ε
/// acquires a positive double root.
double epsilon_star(double p, double q);

}  // namespace gslab
