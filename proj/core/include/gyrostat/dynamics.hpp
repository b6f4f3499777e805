#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gyrostat/error.hpp"
#include "gyrostat/model.hpp"

namespace gyrostat {

/// Explicit vertical-lift tuple (𝒰_Π, 𝒰_α, 𝒰_l) added to the reduced
/// so(3) vector field.
struct ControlLiftSo3 {
    Vec3 u_pi = Vec3::Zero();
    double u_alpha = 0.0;
    double u_l = 0.0;

    So3RotorState::Vector to_vector() const;
    static ControlLiftSo3 from_vector(const Eigen::Ref<const Eigen::VectorXd>& u);
};

/// (𝒰_Π, 𝒰_Γ, 𝒰_α, 𝒰_l) for the se(3) model.
struct ControlLiftSe3 {
    Vec3 u_pi = Vec3::Zero();
    Vec3 u_gamma = Vec3::Zero();
    double u_alpha = 0.0;
    double u_l = 0.0;

    Se3RotorState::Vector to_vector() const;
    static ControlLiftSe3 from_vector(const Eigen::Ref<const Eigen::VectorXd>& u);
};

/// Zero, constant, or state-feedback control expressed directly as a lift.
template <class State, class Lift>
class ControlLaw {
public:
    enum class Kind { Zero, Constant, Feedback };
    using FeedbackMap = std::function<Lift(const State&)>;

    ControlLaw() = default;

    static ControlLaw zero() { return {}; }

    static ControlLaw constant(Lift lift) {
        ControlLaw law;
        law.kind_ = Kind::Constant;
        law.lift_ = lift;
        return law;
    }

    static ControlLaw feedback(FeedbackMap map) {
        ControlLaw law;
        law.kind_ = Kind::Feedback;
        law.map_ = std::move(map);
        return law;
    }

    Kind kind() const { return kind_; }

    Lift operator()(const State& s) const {
        switch (kind_) {
            case Kind::Zero: return Lift{};
            case Kind::Constant: return lift_;
            case Kind::Feedback: return map_(s);
        }
        return Lift{};
    }

private:
    Kind kind_ = Kind::Zero;
    Lift lift_{};
    FeedbackMap map_;
};

using ControlLawSo3 = ControlLaw<So3RotorState, ControlLiftSo3>;
using ControlLawSe3 = ControlLaw<Se3RotorState, ControlLiftSe3>;

/// dΠ/dt = Π×Ω + 𝒰_Π, dα/dt = −(Π₃−l)/Ī₃ + l/J₃ + 𝒰_α, dl/dt = 𝒰_l.
/// The returned struct holds time derivatives, not a state.
So3RotorState reduced_rhs_so3(const So3RotorState& s, const InertiaParams& p,
                              const ControlLiftSo3& lift = {});

/// dΠ/dt = Π×Ω + mgh Γ×χ + 𝒰_Π, dΓ/dt = Γ×Ω + 𝒰_Γ, plus the α and l
/// equations of the so(3) model.
Se3RotorState reduced_rhs_se3(const Se3RotorState& s, const InertiaParams& p,
                              const GravityParams& g, const ControlLiftSe3& lift = {});

/// Autonomous vector field on a flattened state.
using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Rhs make_rhs(const InertiaParams& p, const ControlLawSo3& control);
Rhs make_rhs(const InertiaParams& p, const GravityParams& g, const ControlLawSe3& control);

/// Classical fourth-order Runge-Kutta. Throws StepFailure on non-finite stages.
Eigen::VectorXd step_rk4(const Rhs& rhs, const Eigen::VectorXd& x, double dt);

inline constexpr double kMidpointTol = 1e-13;
inline constexpr int kMidpointMaxIter = 50;

/// Implicit midpoint rule solved by fixed-point iteration. Converged when
/// successive iterates differ by ≤ tol·max(1, |y|∞). Throws StepFailure
/// when max_iter is exhausted.
Eigen::VectorXd step_midpoint(const Rhs& rhs, const Eigen::VectorXd& x, double dt,
                              double tol = kMidpointTol, int max_iter = kMidpointMaxIter);

enum class IntegratorMethod { Rk4, Midpoint };

struct IntegratorOptions {
    IntegratorMethod method = IntegratorMethod::Rk4;
    double dt = 1e-3;
    double t_end = 0.0;
    int sample_every = 10;
    double midpoint_tol = kMidpointTol;
    int midpoint_max_iter = kMidpointMaxIter;

    void validate() const;
};

struct Trajectory {
    ModelKind kind = ModelKind::So3;
    InertiaParams params;
    std::optional<GravityParams> gravity;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<double> energy;
    /// so3: {|Π|}; se3: {Π·Γ, |Γ|}.
    std::vector<std::vector<double>> casimirs;
    long long steps = 0;

    std::size_t size() const { return times.size(); }
};

/// Names of the per-sample casimir columns for `kind`.
std::vector<std::string> casimir_names(ModelKind kind);

/// Raised by integrate(); carries the samples recorded before the failure.
class IntegrationError : public StepFailure {
public:
    IntegrationError(const std::string& what, double failure_time, Trajectory partial)
        : StepFailure(what), failure_time_(failure_time), partial_(std::move(partial)) {}

    double failure_time() const { return failure_time_; }
    const Trajectory& partial() const { return partial_; }

private:
    double failure_time_;
    Trajectory partial_;
};

/// Fixed-step integration from t = 0 to t_end. When t_end is not a whole
/// number of steps the final step is shortened to land on t_end. Samples are
/// taken at step 0, every `sample_every` steps, and at t_end.
Trajectory integrate(const InertiaParams& p, const So3RotorState& initial,
                     const ControlLawSo3& control, const IntegratorOptions& opts);
Trajectory integrate(const InertiaParams& p, const GravityParams& g, const Se3RotorState& initial,
                     const ControlLawSe3& control, const IntegratorOptions& opts);

struct DriftStats {
    std::string name;
    double initial = 0.0;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double max_rel = 0.0;
    double mean_rel = 0.0;
};

struct ComponentRange {
    std::string name;
    double min = 0.0;
    double max = 0.0;
};

struct DiagnosticsSummary {
    DriftStats energy;
    std::vector<DriftStats> casimirs;
    std::vector<ComponentRange> components;
};

/// Drifts relative to the t = 0 sample; relative drift divides by
/// max(1, |value at t = 0|). Throws ValidationError on an empty trajectory.
DiagnosticsSummary diagnostics(const Trajectory& traj);

/// Names of the flattened state components for `kind`.
std::vector<std::string> state_component_names(ModelKind kind);

}  // namespace gyrostat
