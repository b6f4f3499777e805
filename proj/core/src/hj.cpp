#include "gyrostat/hj.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

#include "gyrostat/error.hpp"
#include "gyrostat/poisson.hpp"

namespace gyrostat {

So3RotorState GammaBarSo3::state() const {
    return {Vec3{g[0], g[1], g[2]}, g[3], g[4]};
}

GammaBarSo3 GammaBarSo3::from_state(const So3RotorState& s) {
    return {{s.pi.x(), s.pi.y(), s.pi.z(), s.alpha, s.l}};
}

Se3RotorState GammaBarSe3::state() const {
    return {Vec3{g[0], g[1], g[2]}, Vec3{g[3], g[4], g[5]}, g[6], g[7]};
}

GammaBarSe3 GammaBarSe3::from_state(const Se3RotorState& s) {
    return {{s.pi.x(), s.pi.y(), s.pi.z(), s.gamma.x(), s.gamma.y(), s.gamma.z(), s.alpha, s.l}};
}

namespace {

// Drift terms of the reduced H-J equations in expanded component form.
// γ̄₄ (so3) / γ̄₇ (se3) is the rotor angle and never enters.
std::array<double, 5> drift_so3(const std::array<double, 5>& g, const InertiaParams& p) {
    p.validate();
    const double i1 = p.i_bar.x();
    const double i2 = p.i_bar.y();
    const double i3 = p.i_bar.z();
    const double j3 = p.j3;
    return {
        ((i2 - i3) * g[1] * g[2] - i2 * g[1] * g[4]) / (i2 * i3),
        ((i3 - i1) * g[2] * g[0] + i1 * g[0] * g[4]) / (i3 * i1),
        (i1 - i2) * g[0] * g[1] / (i1 * i2),
        -(g[2] - g[4]) / i3 + g[4] / j3,
        0.0,
    };
}

std::array<double, 8> drift_se3(const std::array<double, 8>& g, const InertiaParams& p,
                                const GravityParams& grav) {
    p.validate();
    const double i1 = p.i_bar.x();
    const double i2 = p.i_bar.y();
    const double i3 = p.i_bar.z();
    const double j3 = p.j3;
    const double m = grav.mgh;
    const Vec3& chi = grav.chi;
    return {
        ((i2 - i3) * g[1] * g[2] - i2 * g[1] * g[7]) / (i2 * i3) +
            m * (g[4] * chi.z() - g[5] * chi.y()),
        ((i3 - i1) * g[2] * g[0] + i1 * g[0] * g[7]) / (i3 * i1) +
            m * (g[5] * chi.x() - g[3] * chi.z()),
        (i1 - i2) * g[0] * g[1] / (i1 * i2) + m * (g[3] * chi.y() - g[4] * chi.x()),
        (i2 * g[4] * (g[2] - g[7]) - i3 * g[5] * g[1]) / (i2 * i3),
        (i3 * g[5] * g[0] - i1 * g[3] * (g[2] - g[7])) / (i3 * i1),
        (i1 * g[3] * g[1] - i2 * g[4] * g[0]) / (i1 * i2),
        -(g[2] - g[7]) / i3 + g[7] / j3,
        0.0,
    };
}

template <std::size_t N>
std::array<double, N> add(const std::array<double, N>& a, const std::array<double, N>& b) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

template <std::size_t N>
std::array<double, N> negate(const std::array<double, N>& a) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = -a[i];
    }
    return out;
}

template <std::size_t N>
double max_norm(const std::array<double, N>& a) {
    double m = 0.0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace

std::array<double, 5> hj_residual_so3(const GammaBarSo3& g, const InertiaParams& p,
                                      const HjLiftSo3& u) {
    return add(drift_so3(g.g, p), u);
}

std::array<double, 8> hj_residual_se3(const GammaBarSe3& g, const InertiaParams& p,
                                      const GravityParams& grav, const HjLiftSe3& u) {
    return add(drift_se3(g.g, p, grav), u);
}

HjLiftSo3 solve_lift(const GammaBarSo3& g, const InertiaParams& p) {
    return negate(drift_so3(g.g, p));
}

HjLiftSe3 solve_lift(const GammaBarSe3& g, const InertiaParams& p, const GravityParams& grav) {
    return negate(drift_se3(g.g, p, grav));
}

namespace {

template <class Lift, class Rule, class Solve>
Lift resolve_lift(const Rule& rule, Solve solve) {
    if (std::holds_alternative<ZeroLift>(rule)) {
        return Lift{};
    }
    if (std::holds_alternative<SolveLift>(rule)) {
        return solve();
    }
    return std::get<GivenLift<Lift>>(rule).lift;
}

template <std::size_t N>
void append(ResidualReport& report, const std::array<double, N>& r, const std::array<double, N>& u) {
    report.residuals.emplace_back(r.begin(), r.end());
    report.lifts.emplace_back(u.begin(), u.end());
    const double n = max_norm(r);
    report.norms.push_back(n);
    report.max_norm = std::max(report.max_norm, n);
}

}  // namespace

ResidualReport residual_field_report(const GammaBarFieldSo3& field,
                                     const std::vector<ConfigurationPoint>& configs,
                                     const InertiaParams& p, const LiftRuleSo3& rule) {
    if (configs.empty()) {
        throw ValidationError("residual_field_report: no configurations given");
    }
    p.validate();
    ResidualReport report;
    for (const auto& q : configs) {
        q.validate();
        const GammaBarSo3 g = field(q);
        const HjLiftSo3 u = resolve_lift<HjLiftSo3>(rule, [&] { return solve_lift(g, p); });
        append(report, hj_residual_so3(g, p, u), u);
    }
    return report;
}

ResidualReport residual_field_report(const GammaBarFieldSe3& field,
                                     const std::vector<ConfigurationPoint>& configs,
                                     const InertiaParams& p, const GravityParams& grav,
                                     const LiftRuleSe3& rule) {
    if (configs.empty()) {
        throw ValidationError("residual_field_report: no configurations given");
    }
    p.validate();
    grav.validate();
    ResidualReport report;
    for (const auto& q : configs) {
        q.validate();
        const GammaBarSe3 g = field(q);
        const HjLiftSe3 u =
            resolve_lift<HjLiftSe3>(rule, [&] { return solve_lift(g, p, grav); });
        append(report, hj_residual_se3(g, p, grav, u), u);
    }
    return report;
}

namespace {

using Constraint = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct NewtonOutcome {
    Eigen::VectorXd x;
    double residual_norm;
    int iterations;
};

NewtonOutcome gauss_newton(const Rhs& field, const Constraint& constraint, Eigen::VectorXd x,
                           const EquilibriumOptions& opts) {
    if (!x.allFinite()) {
        throw ValidationError("find_equilibrium: guess has non-finite components");
    }
    if (!(opts.tol > 0.0) || opts.max_iter < 0) {
        throw ValidationError("find_equilibrium: tol must be positive and max_iter >= 0");
    }
    const Eigen::Index n = x.size();
    auto augmented = [&](const Eigen::VectorXd& y) {
        const Eigen::VectorXd f = field(y);
        const Eigen::VectorXd c = constraint(y);
        Eigen::VectorXd out(f.size() + c.size());
        out << f, c;
        return out;
    };
    auto field_norm = [&](const Eigen::VectorXd& y) {
        return field(y).lpNorm<Eigen::Infinity>();
    };

    double residual = field_norm(x);
    for (int iter = 0;; ++iter) {
        if (residual < opts.tol) {
            return {x, residual, iter};
        }
        if (iter >= opts.max_iter) {
            std::ostringstream msg;
            msg << "equilibrium search did not converge in " << opts.max_iter
                << " iterations (last residual " << residual << ")";
            throw ConvergenceError(msg.str(), residual, iter);
        }

        const Eigen::VectorXd g0 = augmented(x);
        Eigen::MatrixXd jac(g0.size(), n);
        Eigen::VectorXd probe = x;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double h = kFdScale * std::max(1.0, std::abs(x[j]));
            probe[j] = x[j] + h;
            const Eigen::VectorXd gp = augmented(probe);
            probe[j] = x[j] - h;
            const Eigen::VectorXd gm = augmented(probe);
            probe[j] = x[j];
            jac.col(j) = (gp - gm) / ((x[j] + h) - (x[j] - h));
        }
        if (!jac.allFinite()) {
            throw ConvergenceError("non-finite Jacobian in equilibrium search", residual, iter);
        }

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
        qr.setThreshold(1e-10);
        if (qr.rank() < n) {
            std::ostringstream msg;
            msg << "singular Jacobian in equilibrium search (rank " << qr.rank() << " of " << n
                << ", residual " << residual << ")";
            throw SingularJacobianError(msg.str(), residual);
        }
        const Eigen::VectorXd step = qr.solve(-g0);

        const double merit0 = g0.norm();
        double lambda = 1.0;
        bool accepted = false;
        for (int halvings = 0; halvings <= 30; ++halvings) {
            const Eigen::VectorXd trial = x + lambda * step;
            if (trial.allFinite()) {
                const Eigen::VectorXd gt = augmented(trial);
                if (gt.allFinite() && gt.norm() < merit0) {
                    x = trial;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "equilibrium search stalled: no damped step reduces the residual (last "
                << residual << ")";
            throw ConvergenceError(msg.str(), residual, iter + 1);
        }
        residual = field_norm(x);
    }
}

}  // namespace

EquilibriumResult<So3RotorState> find_equilibrium(const InertiaParams& p,
                                                  const ControlLawSo3& control,
                                                  const So3RotorState& guess,
                                                  const EquilibriumOptions& opts) {
    const Rhs field = make_rhs(p, control);
    const double radius2 = guess.pi.squaredNorm();
    const double alpha0 = guess.alpha;
    const Constraint pin = [radius2, alpha0](const Eigen::VectorXd& x) {
        Eigen::VectorXd c(2);
        c << x.head<3>().squaredNorm() - radius2, x[3] - alpha0;
        return c;
    };
    const NewtonOutcome out = gauss_newton(field, pin, guess.to_vector(), opts);
    return {So3RotorState::from_vector(out.x), out.residual_norm, out.iterations};
}

EquilibriumResult<Se3RotorState> find_equilibrium(const InertiaParams& p, const GravityParams& g,
                                                  const ControlLawSe3& control,
                                                  const Se3RotorState& guess,
                                                  const EquilibriumOptions& opts) {
    const Rhs field = make_rhs(p, g, control);
    const double pi_dot_gamma = guess.pi.dot(guess.gamma);
    const double gamma2 = guess.gamma.squaredNorm();
    const double alpha0 = guess.alpha;
    const Constraint pin = [=](const Eigen::VectorXd& x) {
        const Vec3 pi = x.head<3>();
        const Vec3 gamma = x.segment<3>(3);
        Eigen::VectorXd c(3);
        c << pi.dot(gamma) - pi_dot_gamma, gamma.squaredNorm() - gamma2, x[6] - alpha0;
        return c;
    };
    const NewtonOutcome out = gauss_newton(field, pin, guess.to_vector(), opts);
    return {Se3RotorState::from_vector(out.x), out.residual_norm, out.iterations};
}

}  // namespace gyrostat
