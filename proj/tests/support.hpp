#pragma once

#include <random>
#include <vector>

#include <Eigen/Core>

#include "gyrostat/poisson.hpp"

namespace gyrostat::fixture {

inline Eigen::VectorXd uniform_point(std::mt19937_64& rng, int n, double lo = -5.0,
                                     double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = u(rng);
    return x;
}

// c + a·x + xᵀBx + d·x_p·x_q·x_r with exact gradient.
struct Polynomial {
    double c = 0.0;
    Eigen::VectorXd a;
    Eigen::MatrixXd b;  // symmetric
    double d = 0.0;
    int p = 0, q = 0, r = 0;

    double operator()(const Eigen::VectorXd& x) const {
        return c + a.dot(x) + x.dot(b * x) + d * x[p] * x[q] * x[r];
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
        Eigen::VectorXd g = a + 2.0 * b * x;
        g[p] += d * x[q] * x[r];
        g[q] += d * x[p] * x[r];
        g[r] += d * x[p] * x[q];
        return g;
    }
};

inline Polynomial random_polynomial(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> idx(0, n - 1);
    Polynomial poly;
    poly.c = u(rng);
    poly.a = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) poly.a[i] = u(rng);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    poly.b = 0.5 * (m + m.transpose());
    poly.d = u(rng);
    poly.p = idx(rng);
    poly.q = idx(rng);
    poly.r = idx(rng);
    return poly;
}

inline ScalarField to_field(const Polynomial& poly, int n, bool analytic = true) {
    ScalarField f;
    f.dimension = n;
    f.value = [poly](const Eigen::VectorXd& x) { return poly(x); };
    if (analytic) {
        f.gradient = [poly](const Eigen::VectorXd& x) { return poly.gradient(x); };
    }
    return f;
}

inline ScalarField product_field(const ScalarField& f, const ScalarField& g) {
    ScalarField fg;
    fg.dimension = f.dimension;
    fg.value = [f, g](const Eigen::VectorXd& x) { return f(x) * g(x); };
    if (f.has_gradient() && g.has_gradient()) {
        fg.gradient = [f, g](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return f(x) * g.gradient(x) + g(x) * f.gradient(x);
        };
    }
    return fg;
}

inline double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace gyrostat::fixture
