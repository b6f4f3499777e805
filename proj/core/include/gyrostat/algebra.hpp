#pragma once

#include <span>

#include <Eigen/Core>

namespace gyrostat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Standard right-handed cross product.
Vec3 cross(const Vec3& a, const Vec3& b);

/// max|AᵀA − I| + |det A − 1|. Zero for an exact rotation.
double orthonormality_residual(const Mat3& a);

/// Builds a 3×3 matrix from nine reals in row-major order.
Mat3 matrix_from_row_major(std::span<const double, 9> entries);

/// Attitude, drift and rotor angle at which a reduced one-form is sampled.
/// The translation is identically zero for the coincident-center model.
struct ConfigurationPoint {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    double rotor_angle = 0.0;

    /// Throws ValidationError unless `rotation` is in SO(3) to 1e-12.
    void validate() const;
};

}  // namespace gyrostat
