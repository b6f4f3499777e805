#include "gyrostat/model.hpp"

#include <cmath>
#include <string>

#include "gyrostat/error.hpp"

namespace gyrostat {

std::string_view to_string(ModelKind kind) {
    return kind == ModelKind::So3 ? "so3" : "se3";
}

InertiaParams InertiaParams::from_components(const Vec3& i_carrier,
                                             const std::array<double, 2>& j3k, double j3) {
    InertiaParams p;
    p.i_bar = {i_carrier.x() + j3k[0], i_carrier.y() + j3k[1], i_carrier.z()};
    p.j3 = j3;
    p.i_carrier = i_carrier;
    p.j3k = j3k;
    p.validate();
    return p;
}

void InertiaParams::validate() const {
    for (int k = 0; k < 3; ++k) {
        if (!std::isfinite(i_bar[k]) || i_bar[k] <= 0.0) {
            throw ValidationError("inertia.i_bar[" + std::to_string(k) +
                                  "] must be strictly positive");
        }
    }
    if (!std::isfinite(j3) || j3 <= 0.0) {
        throw ValidationError("inertia.j3 must be strictly positive");
    }
    if (i_carrier.has_value() != j3k.has_value()) {
        throw ValidationError("inertia.i_carrier and inertia.j3k must be given together");
    }
    if (i_carrier) {
        const Vec3& ic = *i_carrier;
        const double e1 = std::abs(ic.x() + (*j3k)[0] - i_bar.x());
        const double e2 = std::abs(ic.y() + (*j3k)[1] - i_bar.y());
        const double e3 = std::abs(ic.z() - i_bar.z());
        if (e1 > 1e-12 || e2 > 1e-12 || e3 > 1e-12) {
            throw ValidationError(
                "inertia.i_bar is inconsistent with i_carrier + j3k (expected I1+J31, I2+J32, I3)");
        }
    }
}

bool GravityParams::normalize() {
    if (!std::isfinite(mgh) || mgh < 0.0) {
        throw ValidationError("gravity.mgh must be finite and non-negative");
    }
    if (!chi.allFinite()) {
        throw ValidationError("gravity.chi must be finite");
    }
    const double n = chi.norm();
    if (n < 1e-6) {
        throw ValidationError("gravity.chi is (nearly) zero and cannot be normalized");
    }
    if (std::abs(n - 1.0) > 1e-9) {
        chi /= n;
        return true;
    }
    return false;
}

void GravityParams::validate() const {
    if (!std::isfinite(mgh) || mgh < 0.0) {
        throw ValidationError("gravity.mgh must be finite and non-negative");
    }
    if (!chi.allFinite() || std::abs(chi.norm() - 1.0) > 1e-9) {
        throw ValidationError("gravity.chi must be a unit vector");
    }
}

So3RotorState::Vector So3RotorState::to_vector() const {
    Vector x;
    x << pi, alpha, l;
    return x;
}

So3RotorState So3RotorState::from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != kDim) {
        throw ValidationError("so3 state needs 5 components, got " + std::to_string(x.size()));
    }
    return {x.head<3>(), x[3], x[4]};
}

bool So3RotorState::all_finite() const {
    return pi.allFinite() && std::isfinite(alpha) && std::isfinite(l);
}

Se3RotorState::Vector Se3RotorState::to_vector() const {
    Vector x;
    x << pi, gamma, alpha, l;
    return x;
}

Se3RotorState Se3RotorState::from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != kDim) {
        throw ValidationError("se3 state needs 8 components, got " + std::to_string(x.size()));
    }
    return {x.head<3>(), x.segment<3>(3), x[6], x[7]};
}

bool Se3RotorState::all_finite() const {
    return pi.allFinite() && gamma.allFinite() && std::isfinite(alpha) && std::isfinite(l);
}

namespace {

AngularVelocities velocities(const Vec3& pi, double l, const InertiaParams& p) {
    p.validate();
    const Vec3& ib = p.i_bar;
    AngularVelocities v;
    v.omega = {pi.x() / ib.x(), pi.y() / ib.y(), (pi.z() - l) / ib.z()};
    v.alpha_dot = l / p.j3 - v.omega.z();
    return v;
}

double kinetic(const Vec3& pi, double l, const InertiaParams& p) {
    p.validate();
    const Vec3& ib = p.i_bar;
    const double d = pi.z() - l;
    return 0.5 * (pi.x() * pi.x() / ib.x() + pi.y() * pi.y() / ib.y() + d * d / ib.z() +
                  l * l / p.j3);
}

}  // namespace

AngularVelocities omega_from_momenta(const So3RotorState& s, const InertiaParams& p) {
    return velocities(s.pi, s.l, p);
}

AngularVelocities omega_from_momenta(const Se3RotorState& s, const InertiaParams& p) {
    return velocities(s.pi, s.l, p);
}

So3RotorState momenta_from_velocities(const AngularVelocities& v, double alpha,
                                      const InertiaParams& p) {
    p.validate();
    So3RotorState s;
    s.l = p.j3 * (v.omega.z() + v.alpha_dot);
    s.pi = {p.i_bar.x() * v.omega.x(), p.i_bar.y() * v.omega.y(),
            p.i_bar.z() * v.omega.z() + s.l};
    s.alpha = alpha;
    return s;
}

double hamiltonian_so3(const So3RotorState& s, const InertiaParams& p) {
    return kinetic(s.pi, s.l, p);
}

double hamiltonian_se3(const Se3RotorState& s, const InertiaParams& p, const GravityParams& g) {
    return kinetic(s.pi, s.l, p) + g.mgh * s.gamma.dot(g.chi);
}

HamiltonianGradient grad_h(const So3RotorState& s, const InertiaParams& p) {
    const AngularVelocities v = velocities(s.pi, s.l, p);
    HamiltonianGradient g;
    g.d_pi = v.omega;
    g.d_l = -v.omega.z() + s.l / p.j3;
    return g;
}

HamiltonianGradient grad_h(const Se3RotorState& s, const InertiaParams& p,
                           const GravityParams& grav) {
    const AngularVelocities v = velocities(s.pi, s.l, p);
    HamiltonianGradient g;
    g.d_pi = v.omega;
    g.d_gamma = grav.mgh * grav.chi;
    g.d_l = -v.omega.z() + s.l / p.j3;
    return g;
}

OrbitLabel casimirs(const So3RotorState& s) {
    OrbitLabel o;
    o.kind = ModelKind::So3;
    o.so3_radius = s.pi.norm();
    return o;
}

OrbitLabel casimirs(const Se3RotorState& s) {
    OrbitLabel o;
    o.kind = ModelKind::Se3;
    o.se3_pi_dot_gamma = s.pi.dot(s.gamma);
    o.se3_gamma_norm = s.gamma.norm();
    return o;
}

OrbitLabel casimirs(std::span<const double> x, ModelKind kind) {
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    const auto expected = kind == ModelKind::So3 ? So3RotorState::kDim : Se3RotorState::kDim;
    if (v.size() != expected) {
        throw ValidationError("state of length " + std::to_string(x.size()) +
                              " does not match model " + std::string(to_string(kind)));
    }
    return kind == ModelKind::So3 ? casimirs(So3RotorState::from_vector(v))
                                  : casimirs(Se3RotorState::from_vector(v));
}

}  // namespace gyrostat
