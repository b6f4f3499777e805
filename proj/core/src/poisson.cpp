#include "gyrostat/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gyrostat/error.hpp"

namespace gyrostat {

std::string_view to_string(BracketKind kind) {
    switch (kind) {
        case BracketKind::RigidBodySo3: return "rigid_body_so3";
        case BracketKind::CanonicalR: return "canonical_r";
        case BracketKind::ProductSo3: return "product_so3";
        case BracketKind::HeavyTopSe3: return "heavy_top_se3";
        case BracketKind::ProductSe3: return "product_se3";
    }
    return "unknown";
}

ScalarField coordinate_field(int dimension, int index) {
    if (index < 0 || index >= dimension) {
        throw ValidationError("coordinate index out of range");
    }
    ScalarField f;
    f.dimension = dimension;
    f.value = [index](const ScalarField::Point& x) { return x[index]; };
    f.gradient = [dimension, index](const ScalarField::Point&) {
        ScalarField::Point g = ScalarField::Point::Zero(dimension);
        g[index] = 1.0;
        return g;
    };
    return f;
}

ScalarField hamiltonian_field(const InertiaParams& p) {
    p.validate();
    ScalarField f;
    f.dimension = So3RotorState::kDim;
    f.value = [p](const ScalarField::Point& x) {
        return hamiltonian_so3(So3RotorState::from_vector(x), p);
    };
    return f;
}

ScalarField hamiltonian_field(const InertiaParams& p, const GravityParams& g) {
    p.validate();
    g.validate();
    ScalarField f;
    f.dimension = Se3RotorState::kDim;
    f.value = [p, g](const ScalarField::Point& x) {
        return hamiltonian_se3(Se3RotorState::from_vector(x), p, g);
    };
    return f;
}

Eigen::VectorXd fd_gradient(const ScalarField& f, const Eigen::VectorXd& x, double scale) {
    if (x.size() != f.dimension) {
        throw ValidationError("fd_gradient: point dimension " + std::to_string(x.size()) +
                              " does not match field dimension " +
                              std::to_string(f.dimension));
    }
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = scale * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + h;
        const double fp = f(probe);
        probe[i] = x[i] - h;
        const double fm = f(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw Error("fd_gradient: non-finite field value near x");
        }
        // Divide by the realized step so representation error in x ± h cancels.
        g[i] = (fp - fm) / ((x[i] + h) - (x[i] - h));
    }
    return g;
}

namespace {

bool dimension_allowed(BracketKind kind, Eigen::Index n) {
    switch (kind) {
        case BracketKind::RigidBodySo3:
        case BracketKind::ProductSo3: return n == So3RotorState::kDim;
        case BracketKind::HeavyTopSe3:
        case BracketKind::ProductSe3: return n == Se3RotorState::kDim;
        case BracketKind::CanonicalR:
            return n == So3RotorState::kDim || n == Se3RotorState::kDim;
    }
    return false;
}

void check_dimensions(BracketKind kind, const ScalarField& f, const ScalarField& k,
                      const Eigen::VectorXd& x) {
    if (f.dimension != x.size() || k.dimension != x.size() ||
        !dimension_allowed(kind, x.size())) {
        throw ValidationError("bracket " + std::string(to_string(kind)) +
                              ": dimension mismatch (F " + std::to_string(f.dimension) +
                              ", K " + std::to_string(k.dimension) + ", x " +
                              std::to_string(x.size()) + ")");
    }
}

Eigen::VectorXd gradient_of(const ScalarField& f, const Eigen::VectorXd& x) {
    if (f.has_gradient()) {
        Eigen::VectorXd g = f.gradient(x);
        if (g.size() != x.size()) {
            throw ValidationError("analytic gradient has wrong dimension");
        }
        return g;
    }
    return fd_gradient(f, x);
}

double lie_poisson_so3(const Eigen::VectorXd& x, const Eigen::VectorXd& gf,
                       const Eigen::VectorXd& gk) {
    const Vec3 pi = x.head<3>();
    return -pi.dot(cross(gf.head<3>(), gk.head<3>()));
}

double lie_poisson_se3(const Eigen::VectorXd& x, const Eigen::VectorXd& gf,
                       const Eigen::VectorXd& gk) {
    const Vec3 gamma = x.segment<3>(3);
    const Vec3 f_pi = gf.head<3>();
    const Vec3 k_pi = gk.head<3>();
    const Vec3 f_gamma = gf.segment<3>(3);
    const Vec3 k_gamma = gk.segment<3>(3);
    return lie_poisson_so3(x, gf, gk) -
           gamma.dot(cross(f_pi, k_gamma) - cross(k_pi, f_gamma));
}

double canonical(const Eigen::VectorXd& gf, const Eigen::VectorXd& gk) {
    const Eigen::Index a = gf.size() - 2;
    const Eigen::Index l = gf.size() - 1;
    return gf[a] * gk[l] - gk[a] * gf[l];
}

double from_gradients(BracketKind kind, const Eigen::VectorXd& x, const Eigen::VectorXd& gf,
                      const Eigen::VectorXd& gk) {
    switch (kind) {
        case BracketKind::RigidBodySo3: return lie_poisson_so3(x, gf, gk);
        case BracketKind::CanonicalR: return canonical(gf, gk);
        case BracketKind::ProductSo3: return lie_poisson_so3(x, gf, gk) + canonical(gf, gk);
        case BracketKind::HeavyTopSe3: return lie_poisson_se3(x, gf, gk);
        case BracketKind::ProductSe3: return lie_poisson_se3(x, gf, gk) + canonical(gf, gk);
    }
    return 0.0;
}

}  // namespace

double bracket(BracketKind kind, const ScalarField& f, const ScalarField& k,
               const Eigen::VectorXd& x) {
    check_dimensions(kind, f, k, x);
    return from_gradients(kind, x, gradient_of(f, x), gradient_of(k, x));
}

Eigen::VectorXd hamiltonian_vector_field_via_bracket(BracketKind kind, const ScalarField& h,
                                                     const Eigen::VectorXd& x) {
    const auto n = static_cast<int>(x.size());
    check_dimensions(kind, h, h, x);
    const Eigen::VectorXd gh = gradient_of(h, x);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        const ScalarField xi = coordinate_field(n, i);
        v[i] = from_gradients(kind, x, xi.gradient(x), gh);
    }
    return v;
}

}  // namespace gyrostat
