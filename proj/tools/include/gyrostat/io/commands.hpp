#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "gyrostat/io/scenario.hpp"

namespace gyrostat::io {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,  // tolerance missed, non-convergence, integrator failure
    kExitBadInput = 2,     // unreadable, malformed or invalid configuration
};

inline constexpr double kAuditTolerance = 1e-6;
inline constexpr long kDefaultAuditSamples = 1000;

/// splitmix64; audits draw state components uniformly in [−5, 5) in
/// flattened coordinate order.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// (next() >> 11)·2⁻⁵³ in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

/// ‖a − b‖∞ / max(1, ‖a‖∞).
double relative_discrepancy(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

nlohmann::json bracket_audit_report(const Scenario& s, long samples, std::uint64_t seed);
nlohmann::json hj_check_report(const Scenario& s);
nlohmann::json equilibrium_report(const Scenario& s);

int cmd_simulate(const std::string& config_path, const std::string& csv_path,
                 const std::string& summary_path, std::ostream& out, std::ostream& err);
int cmd_bracket_audit(const std::string& config_path, std::optional<long> samples,
                      std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err);
int cmd_hj_check(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_equilibrium(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace gyrostat::io
