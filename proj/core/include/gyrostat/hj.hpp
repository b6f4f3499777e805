#pragma once

#include <array>
#include <functional>
#include <variant>
#include <vector>

#include "gyrostat/algebra.hpp"
#include "gyrostat/dynamics.hpp"
#include "gyrostat/model.hpp"

namespace gyrostat {

/// Values (γ̄₁,…,γ̄₅) of the reduced one-form: Π = (γ̄₁,γ̄₂,γ̄₃), α = γ̄₄, l = γ̄₅.
struct GammaBarSo3 {
    std::array<double, 5> g{};

    So3RotorState state() const;
    static GammaBarSo3 from_state(const So3RotorState& s);
};

/// (γ̄₁,…,γ̄₈): Π = (γ̄₁,γ̄₂,γ̄₃), Γ = (γ̄₄,γ̄₅,γ̄₆), α = γ̄₇, l = γ̄₈.
struct GammaBarSe3 {
    std::array<double, 8> g{};

    Se3RotorState state() const;
    static GammaBarSe3 from_state(const Se3RotorState& s);
};

using HjLiftSo3 = std::array<double, 5>;
using HjLiftSe3 = std::array<double, 8>;

using GammaBarFieldSo3 = std::function<GammaBarSo3(const ConfigurationPoint&)>;
using GammaBarFieldSe3 = std::function<GammaBarSe3(const ConfigurationPoint&)>;

/// Left-hand sides of the reduced Hamilton-Jacobi equations for the
/// coincident-center model, written out in γ̄ components. γ̄ solves the
/// equations at this point iff every entry is zero.
std::array<double, 5> hj_residual_so3(const GammaBarSo3& g, const InertiaParams& p,
                                      const HjLiftSo3& u);

/// Same for the non-coincident-center model (eight equations).
std::array<double, 8> hj_residual_se3(const GammaBarSe3& g, const InertiaParams& p,
                                      const GravityParams& grav, const HjLiftSe3& u);

/// The unique lift making the residual vanish: Uᵢ = −(drift term)ᵢ.
HjLiftSo3 solve_lift(const GammaBarSo3& g, const InertiaParams& p);
HjLiftSe3 solve_lift(const GammaBarSe3& g, const InertiaParams& p, const GravityParams& grav);

struct ZeroLift {};
struct SolveLift {};
template <class Lift>
struct GivenLift {
    Lift lift;
};

using LiftRuleSo3 = std::variant<ZeroLift, SolveLift, GivenLift<HjLiftSo3>>;
using LiftRuleSe3 = std::variant<ZeroLift, SolveLift, GivenLift<HjLiftSe3>>;

struct ResidualReport {
    std::vector<std::vector<double>> residuals;  // one vector per configuration
    std::vector<std::vector<double>> lifts;      // lift applied at each configuration
    std::vector<double> norms;                   // max-norm per configuration
    double max_norm = 0.0;
};

/// Evaluates the field at every configuration, applies the lift rule, and
/// reports max-norm residuals. Throws ValidationError on an empty list;
/// field exceptions propagate.
ResidualReport residual_field_report(const GammaBarFieldSo3& field,
                                     const std::vector<ConfigurationPoint>& configs,
                                     const InertiaParams& p, const LiftRuleSo3& rule);
ResidualReport residual_field_report(const GammaBarFieldSe3& field,
                                     const std::vector<ConfigurationPoint>& configs,
                                     const InertiaParams& p, const GravityParams& grav,
                                     const LiftRuleSe3& rule);

struct EquilibriumOptions {
    double tol = 1e-12;
    int max_iter = 100;
};

template <class State>
struct EquilibriumResult {
    State state;
    double residual_norm = 0.0;
    int iterations = 0;
};

/// Damped Gauss-Newton on the controlled vector field. The field alone is
/// never a regular system (α is cyclic and the orbit invariants are
/// conserved), so the iteration solves the field together with constraints
/// that pin the orbit invariants and α to their values at `guess`. The
/// Jacobian is built by central differences with the poisson-module step
/// rule; each step is halved (at most 30 times) until the residual
/// decreases.
///
/// Throws ConvergenceError after max_iter iterations (or when no damped step
/// decreases the residual) and SingularJacobianError when the augmented
/// Jacobian loses column rank.
EquilibriumResult<So3RotorState> find_equilibrium(const InertiaParams& p,
                                                  const ControlLawSo3& control,
                                                  const So3RotorState& guess,
                                                  const EquilibriumOptions& opts = {});
EquilibriumResult<Se3RotorState> find_equilibrium(const InertiaParams& p, const GravityParams& g,
                                                  const ControlLawSe3& control,
                                                  const Se3RotorState& guess,
                                                  const EquilibriumOptions& opts = {});

}  // namespace gyrostat
