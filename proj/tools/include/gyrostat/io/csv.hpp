#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gyrostat/dynamics.hpp"

namespace gyrostat::io {

/// Column names in emission order.
///   so3: t,Pi1,Pi2,Pi3,alpha,l,energy,pi_norm
///   se3: t,Pi1,Pi2,Pi3,Gamma1,Gamma2,Gamma3,alpha,l,energy,pi_dot_gamma,gamma_norm
std::vector<std::string> csv_header(ModelKind kind);

/// %.17g, which round-trips every finite double.
std::string format_real(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a table written by write_trajectory_csv. Throws ValidationError on
/// ragged rows or unparsable numbers.
CsvTable read_csv(std::istream& in);

}  // namespace gyrostat::io
