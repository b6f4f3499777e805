#include "gyrostat/algebra.hpp"

#include <cmath>

#include <Eigen/LU>

#include "gyrostat/error.hpp"

namespace gyrostat {

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y() * b.z() - a.z() * b.y(),
            a.z() * b.x() - a.x() * b.z(),
            a.x() * b.y() - a.y() * b.x()};
}

double orthonormality_residual(const Mat3& a) {
    const Mat3 gram = a.transpose() * a - Mat3::Identity();
    return gram.cwiseAbs().maxCoeff() + std::abs(a.determinant() - 1.0);
}

Mat3 matrix_from_row_major(std::span<const double, 9> entries) {
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            m(r, c) = entries[static_cast<std::size_t>(3 * r + c)];
        }
    }
    return m;
}

void ConfigurationPoint::validate() const {
    if (!rotation.allFinite() || !translation.allFinite() || !std::isfinite(rotor_angle)) {
        throw ValidationError("configuration point has non-finite entries");
    }
    const double r = orthonormality_residual(rotation);
    if (r > 1e-12) {
        throw ValidationError("configuration rotation is not in SO(3) (residual " +
                              std::to_string(r) + ")");
    }
}

}  // namespace gyrostat
