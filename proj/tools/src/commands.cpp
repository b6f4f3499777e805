#include "gyrostat/io/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include "gyrostat/io/csv.hpp"

namespace gyrostat::io {

using nlohmann::json;

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double relative_discrepancy(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).lpNorm<Eigen::Infinity>() / std::max(1.0, a.lpNorm<Eigen::Infinity>());
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

template <class Range>
json range_json(const Range& r) {
    json a = json::array();
    for (double v : r) a.push_back(v);
    return a;
}

json drift_json(const DriftStats& d) {
    return {{"name", d.name},        {"initial", d.initial},   {"abs", d.max_abs},
            {"rel", d.max_rel},      {"mean_abs", d.mean_abs}, {"mean_rel", d.mean_rel}};
}

Eigen::VectorXd analytic_rhs(const Scenario& s, const Eigen::VectorXd& x) {
    if (s.model == ModelKind::So3) {
        return reduced_rhs_so3(So3RotorState::from_vector(x), s.inertia).to_vector();
    }
    return reduced_rhs_se3(Se3RotorState::from_vector(x), s.inertia, *s.gravity).to_vector();
}

void print_warnings(const Scenario& s, std::ostream& err) {
    for (const auto& w : s.warnings) err << "warning: " << w << '\n';
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const json::exception& e) {
        err << "error: invalid JSON: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}

}  // namespace

json bracket_audit_report(const Scenario& s, long samples, std::uint64_t seed) {
    if (samples < 1) {
        throw ValidationError("bracket-audit: --samples must be >= 1");
    }
    const int dim = s.dimension();
    const BracketKind kind =
        s.model == ModelKind::So3 ? BracketKind::ProductSo3 : BracketKind::ProductSe3;
    const ScalarField h = s.model == ModelKind::So3 ? hamiltonian_field(s.inertia)
                                                    : hamiltonian_field(s.inertia, *s.gravity);
    SplitMix64 rng(seed);
    double worst_rel = 0.0;
    double worst_abs = 0.0;
    long worst_index = 0;
    Eigen::VectorXd worst_state = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd x(dim);
    for (long n = 0; n < samples; ++n) {
        for (int i = 0; i < dim; ++i) x[i] = rng.uniform(-5.0, 5.0);
        const Eigen::VectorXd analytic = analytic_rhs(s, x);
        const Eigen::VectorXd oracle = hamiltonian_vector_field_via_bracket(kind, h, x);
        const double rel = relative_discrepancy(analytic, oracle);
        worst_abs = std::max(worst_abs, (analytic - oracle).lpNorm<Eigen::Infinity>());
        if (n == 0 || rel > worst_rel) {
            worst_rel = rel;
            worst_index = n;
            worst_state = x;
        }
    }
    json r;
    r["command"] = "bracket-audit";
    r["model"] = std::string(to_string(s.model));
    r["bracket"] = std::string(to_string(kind));
    r["samples"] = samples;
    r["seed"] = seed;
    r["sample_range"] = {-5.0, 5.0};
    r["tolerance"] = kAuditTolerance;
    r["max_relative_discrepancy"] = worst_rel;
    r["max_abs_discrepancy"] = worst_abs;
    r["worst_sample"] = worst_index;
    r["worst_state"] = vec_json(worst_state);
    r["pass"] = worst_rel < kAuditTolerance;
    return r;
}

namespace {

Eigen::VectorXd equilibrium_state(const Scenario& s, const Eigen::VectorXd& guess, int& iterations,
                                  double& residual) {
    const EquilibriumOptions opts = s.equilibrium ? s.equilibrium->options : EquilibriumOptions{};
    if (s.model == ModelKind::So3) {
        const auto r = find_equilibrium(s.inertia, s.control.so3_law(),
                                        So3RotorState::from_vector(guess), opts);
        iterations = r.iterations;
        residual = r.residual_norm;
        return r.state.to_vector();
    }
    const auto r = find_equilibrium(s.inertia, *s.gravity, s.control.se3_law(),
                                    Se3RotorState::from_vector(guess), opts);
    iterations = r.iterations;
    residual = r.residual_norm;
    return r.state.to_vector();
}

Eigen::VectorXd equilibrium_guess(const Scenario& s) {
    if (s.equilibrium && s.equilibrium->guess) return *s.equilibrium->guess;
    return s.initial;
}

}  // namespace

json hj_check_report(const Scenario& s) {
    if (!s.hj) {
        throw ValidationError("scenario field 'hj': missing required field for hj-check");
    }
    const HjSpec& spec = *s.hj;
    const int dim = s.dimension();

    json r;
    r["command"] = "hj-check";
    r["model"] = std::string(to_string(s.model));

    Eigen::VectorXd value;
    if (spec.field == HjSpec::Field::Equilibrium) {
        Eigen::VectorXd guess = equilibrium_guess(s);
        if (spec.gamma && !(s.equilibrium && s.equilibrium->guess)) {
            guess = Eigen::Map<const Eigen::VectorXd>(spec.gamma->data(), dim);
        }
        int iterations = 0;
        double residual = 0.0;
        value = equilibrium_state(s, guess, iterations, residual);
        r["field"] = "equilibrium";
        r["equilibrium"] = {{"iterations", iterations}, {"residual_norm", residual}};
    } else {
        value = spec.gamma ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(spec.gamma->data(), dim))
                           : s.initial;
        r["field"] = "constant";
    }
    r["gamma"] = vec_json(value);

    ResidualReport report;
    if (s.model == ModelKind::So3) {
        GammaBarSo3 g;
        std::copy(value.data(), value.data() + dim, g.g.begin());
        LiftRuleSo3 rule = ZeroLift{};
        if (spec.lift == HjSpec::Lift::Solve) rule = SolveLift{};
        if (spec.lift == HjSpec::Lift::Given) {
            HjLiftSo3 u{};
            std::copy(spec.given_lift.begin(), spec.given_lift.end(), u.begin());
            rule = GivenLift<HjLiftSo3>{u};
        }
        report = residual_field_report([g](const ConfigurationPoint&) { return g; }, spec.configs,
                                       s.inertia, rule);
    } else {
        GammaBarSe3 g;
        std::copy(value.data(), value.data() + dim, g.g.begin());
        LiftRuleSe3 rule = ZeroLift{};
        if (spec.lift == HjSpec::Lift::Solve) rule = SolveLift{};
        if (spec.lift == HjSpec::Lift::Given) {
            HjLiftSe3 u{};
            std::copy(spec.given_lift.begin(), spec.given_lift.end(), u.begin());
            rule = GivenLift<HjLiftSe3>{u};
        }
        report = residual_field_report([g](const ConfigurationPoint&) { return g; }, spec.configs,
                                       s.inertia, *s.gravity, rule);
    }

    switch (spec.lift) {
        case HjSpec::Lift::Zero: r["lift_rule"] = "zero"; break;
        case HjSpec::Lift::Solve: r["lift_rule"] = "solve"; break;
        case HjSpec::Lift::Given: r["lift_rule"] = "given"; break;
    }
    r["tolerance"] = spec.tolerance;
    r["configs"] = spec.configs.size();
    json residuals = json::array();
    json lifts = json::array();
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
        residuals.push_back(range_json(report.residuals[i]));
        lifts.push_back(range_json(report.lifts[i]));
    }
    r["residuals"] = residuals;
    r["lifts"] = lifts;
    r["norms"] = range_json(report.norms);
    r["max_norm"] = report.max_norm;
    r["pass"] = report.max_norm < spec.tolerance;
    return r;
}

json equilibrium_report(const Scenario& s) {
    int iterations = 0;
    double residual = 0.0;
    const Eigen::VectorXd x = equilibrium_state(s, equilibrium_guess(s), iterations, residual);
    json r;
    r["command"] = "equilibrium";
    r["model"] = std::string(to_string(s.model));
    r["converged"] = true;
    r["state"] = state_to_json(s.model, x);
    r["residual_norm"] = residual;
    r["iterations"] = iterations;
    return r;
}

int cmd_simulate(const std::string& config_path, const std::string& csv_path,
                 const std::string& summary_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load_scenario(config_path);
        print_warnings(s, err);
        if (!s.has_t_end) {
            throw ValidationError("scenario field 'integrator.t_end': missing required field for simulate");
        }

        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw ValidationError("cannot open output file '" + csv_path + "'");
        std::ofstream summary(summary_path, std::ios::binary);
        if (!summary) throw ValidationError("cannot open summary file '" + summary_path + "'");

        const auto start = std::chrono::steady_clock::now();
        Trajectory traj;
        json failures = json::array();
        try {
            traj = s.model == ModelKind::So3
                       ? integrate(s.inertia, So3RotorState::from_vector(s.initial),
                                   s.control.so3_law(), s.integrator)
                       : integrate(s.inertia, *s.gravity, Se3RotorState::from_vector(s.initial),
                                   s.control.se3_law(), s.integrator);
        } catch (const IntegrationError& e) {
            traj = e.partial();
            failures.push_back({{"time", e.failure_time()}, {"message", e.what()}});
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        write_trajectory_csv(csv, traj);

        const DiagnosticsSummary d = diagnostics(traj);
        json casimirs = json::array();
        for (const auto& c : d.casimirs) casimirs.push_back(drift_json(c));
        json ranges = json::array();
        for (const auto& c : d.components) {
            ranges.push_back({{"name", c.name}, {"min", c.min}, {"max", c.max}});
        }
        json j;
        j["scenario"] = to_json(s);
        j["drifts"] = {{"energy", drift_json(d.energy)}, {"casimirs", casimirs}};
        j["ranges"] = ranges;
        j["steps"] = traj.steps;
        j["samples"] = traj.size();
        j["failures"] = failures;
        j["wall_time_s"] = wall;
        summary << j.dump(2) << '\n';

        out << "simulate: " << traj.steps << " steps, " << traj.size() << " samples, energy drift "
            << d.energy.max_rel << " (rel)\n";
        return failures.empty() ? kExitOk : kExitCheckFailed;
    });
}

int cmd_bracket_audit(const std::string& config_path, std::optional<long> samples,
                      std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load_scenario(config_path);
        print_warnings(s, err);
        const json r =
            bracket_audit_report(s, samples.value_or(kDefaultAuditSamples), seed.value_or(s.seed));
        out << r.dump(2) << '\n';
        return r["pass"].get<bool>() ? kExitOk : kExitCheckFailed;
    });
}

int cmd_hj_check(const std::string& config_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load_scenario(config_path);
        print_warnings(s, err);
        const json r = hj_check_report(s);
        out << r.dump(2) << '\n';
        return r["pass"].get<bool>() ? kExitOk : kExitCheckFailed;
    });
}

int cmd_equilibrium(const std::string& config_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load_scenario(config_path);
        print_warnings(s, err);
        try {
            out << equilibrium_report(s).dump(2) << '\n';
            return kExitOk;
        } catch (const ConvergenceError& e) {
            json r{{"command", "equilibrium"}, {"model", std::string(to_string(s.model))},
                   {"converged", false},       {"message", e.what()},
                   {"last_residual", e.last_residual()}, {"iterations", e.iterations()}};
            out << r.dump(2) << '\n';
            err << "error: " << e.what() << '\n';
            return kExitCheckFailed;
        } catch (const SingularJacobianError& e) {
            json r{{"command", "equilibrium"}, {"model", std::string(to_string(s.model))},
                   {"converged", false},       {"message", e.what()},
                   {"last_residual", e.last_residual()}};
            out << r.dump(2) << '\n';
            err << "error: " << e.what() << '\n';
            return kExitCheckFailed;
        }
    });
}

}  // namespace gyrostat::io
