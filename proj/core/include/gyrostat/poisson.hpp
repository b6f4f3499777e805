#pragma once

#include <functional>
#include <string_view>

#include <Eigen/Core>

#include "gyrostat/model.hpp"

namespace gyrostat {

/// A real function on the flattened reduced phase space, optionally with
/// its exact gradient. Dimension 5 for so(3)*×R×R, 8 for se(3)*×R×R.
struct ScalarField {
    using Point = Eigen::VectorXd;

    int dimension = 0;
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> gradient;  // optional

    double operator()(const Point& x) const { return value(x); }
    bool has_gradient() const { return static_cast<bool>(gradient); }
};

/// Coordinate function x ↦ xᵢ with its exact gradient.
ScalarField coordinate_field(int dimension, int index);

/// Hamiltonians as fields. Deliberately gradient-free so that brackets
/// built from them go through the finite-difference oracle.
ScalarField hamiltonian_field(const InertiaParams& p);
ScalarField hamiltonian_field(const InertiaParams& p, const GravityParams& g);

/// The five brackets on the reduced spaces:
///   RigidBodySo3  −Π·(∇_ΠF × ∇_ΠK)                                   (dim 5)
///   CanonicalR    ∂F/∂α ∂K/∂l − ∂K/∂α ∂F/∂l on the trailing (α, l)   (dim 5 or 8)
///   ProductSo3    RigidBodySo3 + CanonicalR                          (dim 5)
///   HeavyTopSe3   −Π·(∇_ΠF×∇_ΠK) − Γ·(∇_ΠF×∇_ΓK − ∇_ΠK×∇_ΓF)       (dim 8)
///   ProductSe3    HeavyTopSe3 + CanonicalR                           (dim 8)
enum class BracketKind { RigidBodySo3, CanonicalR, ProductSo3, HeavyTopSe3, ProductSe3 };

std::string_view to_string(BracketKind kind);

/// Default relative step for central differences, ≈ ε^(1/3).
inline constexpr double kFdScale = 6e-6;

/// Central differences with step hᵢ = scale·max(1, |xᵢ|).
Eigen::VectorXd fd_gradient(const ScalarField& f, const Eigen::VectorXd& x,
                            double scale = kFdScale);

/// Evaluates {F, K}(x). Uses each field's analytic gradient when present,
/// otherwise fd_gradient.
double bracket(BracketKind kind, const ScalarField& f, const ScalarField& k,
               const Eigen::VectorXd& x);

/// ({x₁,h}, …, {x_n,h}) at x: the Hamiltonian vector field reconstructed
/// from the bracket alone.
Eigen::VectorXd hamiltonian_vector_field_via_bracket(BracketKind kind, const ScalarField& h,
                                                     const Eigen::VectorXd& x);

}  // namespace gyrostat
