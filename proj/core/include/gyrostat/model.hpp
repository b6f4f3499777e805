#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "gyrostat/algebra.hpp"

namespace gyrostat {

enum class ModelKind { So3, Se3 };

std::string_view to_string(ModelKind kind);

/// Effective principal inertias of carrier plus rotor, and the rotor's
/// axial inertia. The raw carrier/rotor split is optional and, when present,
/// must reproduce `i_bar` (Ī₁ = I₁ + J₃₁, Ī₂ = I₂ + J₃₂, Ī₃ = I₃).
struct InertiaParams {
    Vec3 i_bar = Vec3::Ones();
    double j3 = 1.0;
    std::optional<Vec3> i_carrier;
    std::optional<std::array<double, 2>> j3k;

    static InertiaParams from_components(const Vec3& i_carrier,
                                         const std::array<double, 2>& j3k, double j3);

    void validate() const;
};

/// Restoring-torque coefficient m·g·h and the body-frame unit vector χ from
/// the center of buoyancy to the center of gravity.
struct GravityParams {
    double mgh = 0.0;
    Vec3 chi = Vec3::UnitZ();

    /// Validates and renormalizes χ. Returns true when χ had to be rescaled
    /// (||χ| − 1| > 1e-9); throws when |χ| < 1e-6 or mgh < 0.
    bool normalize();

    void validate() const;
};

/// Reduced phase point (Π, α, l) on so(3)* × R × R.
/// Flattened order: (Π₁, Π₂, Π₃, α, l).
struct So3RotorState {
    static constexpr int kDim = 5;
    using Vector = Eigen::Matrix<double, kDim, 1>;

    Vec3 pi = Vec3::Zero();
    double alpha = 0.0;
    double l = 0.0;

    Vector to_vector() const;
    static So3RotorState from_vector(const Eigen::Ref<const Eigen::VectorXd>& x);
    bool all_finite() const;
};

/// Reduced phase point (Π, Γ, α, l) on se(3)* × R × R.
/// Flattened order: (Π₁, Π₂, Π₃, Γ₁, Γ₂, Γ₃, α, l).
struct Se3RotorState {
    static constexpr int kDim = 8;
    using Vector = Eigen::Matrix<double, kDim, 1>;

    Vec3 pi = Vec3::Zero();
    Vec3 gamma = Vec3::Zero();
    double alpha = 0.0;
    double l = 0.0;

    Vector to_vector() const;
    static Se3RotorState from_vector(const Eigen::Ref<const Eigen::VectorXd>& x);
    bool all_finite() const;
};

struct AngularVelocities {
    Vec3 omega = Vec3::Zero();
    double alpha_dot = 0.0;
};

/// Coadjoint-orbit invariants of a reduced state. Only the fields belonging
/// to `kind` carry meaning.
struct OrbitLabel {
    ModelKind kind = ModelKind::So3;
    double so3_radius = 0.0;
    double se3_pi_dot_gamma = 0.0;
    double se3_gamma_norm = 0.0;
};

/// Inverse Legendre map: Ω = (Π₁/Ī₁, Π₂/Ī₂, (Π₃−l)/Ī₃), α̇ = l/J₃ − (Π₃−l)/Ī₃.
AngularVelocities omega_from_momenta(const So3RotorState& s, const InertiaParams& p);
AngularVelocities omega_from_momenta(const Se3RotorState& s, const InertiaParams& p);

/// Forward Legendre map: Πₖ = ĪₖΩₖ (k=1,2), l = J₃(Ω₃+α̇), Π₃ = Ī₃Ω₃ + l.
So3RotorState momenta_from_velocities(const AngularVelocities& v, double alpha,
                                      const InertiaParams& p);

/// ½[Π₁²/Ī₁ + Π₂²/Ī₂ + (Π₃−l)²/Ī₃ + l²/J₃]
double hamiltonian_so3(const So3RotorState& s, const InertiaParams& p);

/// Kinetic part of hamiltonian_so3 plus mgh·Γ·χ.
double hamiltonian_se3(const Se3RotorState& s, const InertiaParams& p, const GravityParams& g);

struct HamiltonianGradient {
    Vec3 d_pi = Vec3::Zero();
    std::optional<Vec3> d_gamma;  // se(3) model only
    double d_alpha = 0.0;
    double d_l = 0.0;
};

HamiltonianGradient grad_h(const So3RotorState& s, const InertiaParams& p);
HamiltonianGradient grad_h(const Se3RotorState& s, const InertiaParams& p, const GravityParams& g);

OrbitLabel casimirs(const So3RotorState& s);
OrbitLabel casimirs(const Se3RotorState& s);

/// Casimirs of a flattened state; throws ValidationError if the length does
/// not match `kind`.
OrbitLabel casimirs(std::span<const double> x, ModelKind kind);

}  // namespace gyrostat
