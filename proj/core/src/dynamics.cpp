#include "gyrostat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gyrostat/algebra.hpp"

namespace gyrostat {

So3RotorState::Vector ControlLiftSo3::to_vector() const {
    So3RotorState::Vector u;
    u << u_pi, u_alpha, u_l;
    return u;
}

ControlLiftSo3 ControlLiftSo3::from_vector(const Eigen::Ref<const Eigen::VectorXd>& u) {
    const So3RotorState s = So3RotorState::from_vector(u);
    return {s.pi, s.alpha, s.l};
}

Se3RotorState::Vector ControlLiftSe3::to_vector() const {
    Se3RotorState::Vector u;
    u << u_pi, u_gamma, u_alpha, u_l;
    return u;
}

ControlLiftSe3 ControlLiftSe3::from_vector(const Eigen::Ref<const Eigen::VectorXd>& u) {
    const Se3RotorState s = Se3RotorState::from_vector(u);
    return {s.pi, s.gamma, s.alpha, s.l};
}

So3RotorState reduced_rhs_so3(const So3RotorState& s, const InertiaParams& p,
                              const ControlLiftSo3& lift) {
    const AngularVelocities v = omega_from_momenta(s, p);
    So3RotorState d;
    d.pi = cross(s.pi, v.omega) + lift.u_pi;
    d.alpha = -(s.pi.z() - s.l) / p.i_bar.z() + s.l / p.j3 + lift.u_alpha;
    d.l = lift.u_l;
    return d;
}

Se3RotorState reduced_rhs_se3(const Se3RotorState& s, const InertiaParams& p,
                              const GravityParams& g, const ControlLiftSe3& lift) {
    const AngularVelocities v = omega_from_momenta(s, p);
    Se3RotorState d;
    d.pi = cross(s.pi, v.omega) + g.mgh * cross(s.gamma, g.chi) + lift.u_pi;
    d.gamma = cross(s.gamma, v.omega) + lift.u_gamma;
    d.alpha = -(s.pi.z() - s.l) / p.i_bar.z() + s.l / p.j3 + lift.u_alpha;
    d.l = lift.u_l;
    return d;
}

Rhs make_rhs(const InertiaParams& p, const ControlLawSo3& control) {
    p.validate();
    return [p, control](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const So3RotorState s = So3RotorState::from_vector(x);
        return reduced_rhs_so3(s, p, control(s)).to_vector();
    };
}

Rhs make_rhs(const InertiaParams& p, const GravityParams& g, const ControlLawSe3& control) {
    p.validate();
    g.validate();
    return [p, g, control](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Se3RotorState s = Se3RotorState::from_vector(x);
        return reduced_rhs_se3(s, p, g, control(s)).to_vector();
    };
}

namespace {

Eigen::VectorXd checked(const Rhs& rhs, const Eigen::VectorXd& x, const char* stage) {
    Eigen::VectorXd f = rhs(x);
    if (!f.allFinite()) {
        throw StepFailure(std::string("non-finite right-hand side at ") + stage);
    }
    return f;
}

}  // namespace

Eigen::VectorXd step_rk4(const Rhs& rhs, const Eigen::VectorXd& x, double dt) {
    if (!(dt > 0.0)) {
        throw ValidationError("step_rk4: dt must be positive");
    }
    const Eigen::VectorXd k1 = checked(rhs, x, "rk4 stage 1");
    const Eigen::VectorXd k2 = checked(rhs, x + 0.5 * dt * k1, "rk4 stage 2");
    const Eigen::VectorXd k3 = checked(rhs, x + 0.5 * dt * k2, "rk4 stage 3");
    const Eigen::VectorXd k4 = checked(rhs, x + dt * k3, "rk4 stage 4");
    Eigen::VectorXd y = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) {
        throw StepFailure("rk4 produced a non-finite state");
    }
    return y;
}

Eigen::VectorXd step_midpoint(const Rhs& rhs, const Eigen::VectorXd& x, double dt, double tol,
                              int max_iter) {
    if (!(dt > 0.0)) {
        throw ValidationError("step_midpoint: dt must be positive");
    }
    Eigen::VectorXd y = x + dt * checked(rhs, x, "midpoint predictor");
    double change = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd mid = 0.5 * (x + y);
        if (!mid.allFinite()) {
            break;
        }
        Eigen::VectorXd f = rhs(mid);
        if (!f.allFinite()) {
            break;
        }
        Eigen::VectorXd next = x + dt * f;
        change = (next - y).lpNorm<Eigen::Infinity>();
        y = std::move(next);
        if (change <= tol * std::max(1.0, y.lpNorm<Eigen::Infinity>())) {
            return y;
        }
    }
    std::ostringstream msg;
    msg << "implicit midpoint did not converge in " << max_iter
        << " fixed-point iterations (last change " << change << ")";
    throw StepFailure(msg.str());
}

void IntegratorOptions::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("integrator.dt must be positive");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ValidationError("integrator.t_end must be positive");
    }
    if (sample_every < 1) {
        throw ValidationError("integrator.sample_every must be >= 1");
    }
    if (!(midpoint_tol > 0.0) || midpoint_max_iter < 1) {
        throw ValidationError("midpoint tolerance and iteration cap must be positive");
    }
}

std::vector<std::string> casimir_names(ModelKind kind) {
    if (kind == ModelKind::So3) {
        return {"pi_norm"};
    }
    return {"pi_dot_gamma", "gamma_norm"};
}

std::vector<std::string> state_component_names(ModelKind kind) {
    if (kind == ModelKind::So3) {
        return {"Pi1", "Pi2", "Pi3", "alpha", "l"};
    }
    return {"Pi1", "Pi2", "Pi3", "Gamma1", "Gamma2", "Gamma3", "alpha", "l"};
}

namespace {

struct StepPlan {
    long long steps;
    double last_dt;
};

StepPlan plan_steps(double dt, double t_end) {
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
        return {static_cast<long long>(nearest), dt};
    }
    const auto n = static_cast<long long>(std::ceil(ratio));
    return {n, t_end - static_cast<double>(n - 1) * dt};
}

template <class Energy, class Casimirs>
Trajectory run(Trajectory traj, const Rhs& rhs, Eigen::VectorXd x, const IntegratorOptions& opts,
               Energy energy, Casimirs casimirs_of) {
    opts.validate();
    if (!x.allFinite()) {
        throw ValidationError("initial state has non-finite components");
    }
    auto record = [&](double t, const Eigen::VectorXd& state) {
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.energy.push_back(energy(state));
        traj.casimirs.push_back(casimirs_of(state));
    };

    const StepPlan plan = plan_steps(opts.dt, opts.t_end);
    record(0.0, x);
    for (long long k = 1; k <= plan.steps; ++k) {
        const bool last = k == plan.steps;
        const double h = last ? plan.last_dt : opts.dt;
        const double t_prev = static_cast<double>(k - 1) * opts.dt;
        try {
            x = opts.method == IntegratorMethod::Rk4
                    ? step_rk4(rhs, x, h)
                    : step_midpoint(rhs, x, h, opts.midpoint_tol, opts.midpoint_max_iter);
        } catch (const StepFailure& e) {
            traj.steps = k - 1;
            std::ostringstream msg;
            msg << "step failure at t = " << t_prev << ": " << e.what();
            throw IntegrationError(msg.str(), t_prev, std::move(traj));
        }
        if (last || k % opts.sample_every == 0) {
            record(last ? opts.t_end : static_cast<double>(k) * opts.dt, x);
        }
    }
    traj.steps = plan.steps;
    return traj;
}

}  // namespace

Trajectory integrate(const InertiaParams& p, const So3RotorState& initial,
                     const ControlLawSo3& control, const IntegratorOptions& opts) {
    Trajectory traj;
    traj.kind = ModelKind::So3;
    traj.params = p;
    return run(
        std::move(traj), make_rhs(p, control), initial.to_vector(), opts,
        [&p](const Eigen::VectorXd& x) { return hamiltonian_so3(So3RotorState::from_vector(x), p); },
        [](const Eigen::VectorXd& x) {
            return std::vector<double>{casimirs(So3RotorState::from_vector(x)).so3_radius};
        });
}

Trajectory integrate(const InertiaParams& p, const GravityParams& g, const Se3RotorState& initial,
                     const ControlLawSe3& control, const IntegratorOptions& opts) {
    Trajectory traj;
    traj.kind = ModelKind::Se3;
    traj.params = p;
    traj.gravity = g;
    return run(
        std::move(traj), make_rhs(p, g, control), initial.to_vector(), opts,
        [&p, &g](const Eigen::VectorXd& x) {
            return hamiltonian_se3(Se3RotorState::from_vector(x), p, g);
        },
        [](const Eigen::VectorXd& x) {
            const OrbitLabel o = casimirs(Se3RotorState::from_vector(x));
            return std::vector<double>{o.se3_pi_dot_gamma, o.se3_gamma_norm};
        });
}

namespace {

DriftStats drift_of(std::string name, const std::vector<double>& series) {
    DriftStats d;
    d.name = std::move(name);
    d.initial = series.front();
    const double denom = std::max(1.0, std::abs(d.initial));
    double sum = 0.0;
    for (double v : series) {
        const double a = std::abs(v - d.initial);
        d.max_abs = std::max(d.max_abs, a);
        sum += a;
    }
    d.mean_abs = sum / static_cast<double>(series.size());
    d.max_rel = d.max_abs / denom;
    d.mean_rel = d.mean_abs / denom;
    return d;
}

}  // namespace

DiagnosticsSummary diagnostics(const Trajectory& traj) {
    if (traj.size() == 0) {
        throw ValidationError("diagnostics: empty trajectory");
    }
    DiagnosticsSummary out;
    out.energy = drift_of("energy", traj.energy);

    const std::vector<std::string> cnames = casimir_names(traj.kind);
    for (std::size_t c = 0; c < cnames.size(); ++c) {
        std::vector<double> series;
        series.reserve(traj.size());
        for (const auto& row : traj.casimirs) {
            series.push_back(row.at(c));
        }
        out.casimirs.push_back(drift_of(cnames[c], series));
    }

    const std::vector<std::string> names = state_component_names(traj.kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        ComponentRange r{names[i], traj.states.front()[static_cast<Eigen::Index>(i)],
                         traj.states.front()[static_cast<Eigen::Index>(i)]};
        for (const auto& x : traj.states) {
            r.min = std::min(r.min, x[static_cast<Eigen::Index>(i)]);
            r.max = std::max(r.max, x[static_cast<Eigen::Index>(i)]);
        }
        out.components.push_back(r);
    }
    return out;
}

}  // namespace gyrostat
