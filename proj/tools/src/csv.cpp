#include "gyrostat/io/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "gyrostat/error.hpp"

namespace gyrostat::io {

std::vector<std::string> csv_header(ModelKind kind) {
    std::vector<std::string> h{"t"};
    for (auto& n : state_component_names(kind)) h.push_back(n);
    h.emplace_back("energy");
    for (auto& n : casimir_names(kind)) h.push_back(n);
    return h;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const auto header = csv_header(traj.kind);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_real(traj.times[k]);
        for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) {
            out << ',' << format_real(traj.states[k][i]);
        }
        out << ',' << format_real(traj.energy[k]);
        for (double c : traj.casimirs[k]) {
            out << ',' << format_real(c);
        }
        out << '\n';
    }
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("csv: missing header row");
    }
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0' || (errno == ERANGE && std::isinf(v))) {
                throw ValidationError("csv line " + std::to_string(lineno) + ": bad number '" +
                                      cell + "'");
            }
            row.push_back(v);
        }
        if (row.size() != table.header.size()) {
            throw ValidationError("csv line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(table.header.size()) + " columns");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace gyrostat::io
