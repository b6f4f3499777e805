#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "gyrostat/gyrostat.hpp"

namespace gyrostat::io {

/// Control law as written in a scenario file. Lifts are flattened in the
/// model's coordinate order.
struct ControlSpec {
    enum class Type { Zero, Constant, LinearFeedback };

    Type type = Type::Zero;
    Eigen::VectorXd lift;    // Constant
    Eigen::MatrixXd gain;    // LinearFeedback: lift = offset + gain·x
    Eigen::VectorXd offset;  // LinearFeedback

    ControlLawSo3 so3_law() const;
    ControlLawSe3 se3_law() const;
};

struct HjSpec {
    enum class Field { Constant, Equilibrium };
    enum class Lift { Zero, Solve, Given };

    Field field = Field::Constant;
    std::optional<std::vector<double>> gamma;
    Lift lift = Lift::Solve;
    std::vector<double> given_lift;
    double tolerance = 1e-10;
    std::vector<ConfigurationPoint> configs;
};

struct EquilibriumSpec {
    std::optional<Eigen::VectorXd> guess;
    EquilibriumOptions options;
};

struct Scenario {
    ModelKind model = ModelKind::So3;
    InertiaParams inertia;
    std::optional<GravityParams> gravity;
    Eigen::VectorXd initial;
    ControlSpec control;
    IntegratorOptions integrator;
    bool has_t_end = false;
    std::uint64_t seed = 42;
    std::optional<HjSpec> hj;
    std::optional<EquilibriumSpec> equilibrium;
    std::vector<std::string> warnings;

    int dimension() const;
};

/// Parses and validates a scenario document. Throws ValidationError naming
/// the offending field; nlohmann::json::parse_error for malformed JSON.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Canonical echo of a parsed scenario (defaults filled in).
nlohmann::json to_json(const Scenario& s);

nlohmann::json state_to_json(ModelKind kind, const Eigen::VectorXd& x);

}  // namespace gyrostat::io
