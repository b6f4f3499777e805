#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gyrostat/error.hpp"
#include "gyrostat/io/commands.hpp"
#include "gyrostat/io/csv.hpp"
#include "gyrostat/io/scenario.hpp"

using namespace gyrostat;
using namespace gyrostat::io;
using nlohmann::json;

namespace {

const char* kMinimalSo3 = R"({
  "model": "so3",
  "inertia": {"i_bar": [3, 2, 1], "j3": 1},
  "initial": {"pi": [1, 2, 3], "alpha": 0, "l": 0.5}
})";

json minimal_so3() { return json::parse(kMinimalSo3); }

json minimal_se3() {
    json j = minimal_so3();
    j["model"] = "se3";
    j["gravity"] = {{"mgh", 2}};
    j["initial"]["gamma"] = {0.6, 0, 0.8};
    return j;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("gyrostat_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                 "_" + std::to_string(counter++) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const json& j) const {
        std::ofstream(file(name)) << j.dump(2);
        return file(name);
    }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(const json& j) {
    try {
        parse_scenario(j.dump());
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(ParseScenario, MinimalAppliesDefaults) {
    const Scenario s = parse_scenario(kMinimalSo3);
    EXPECT_EQ(s.model, ModelKind::So3);
    EXPECT_EQ(s.inertia.i_bar, Vec3(3, 2, 1));
    EXPECT_EQ(s.integrator.dt, 1e-3);
    EXPECT_EQ(s.integrator.method, IntegratorMethod::Rk4);
    EXPECT_EQ(s.integrator.sample_every, 10);
    EXPECT_EQ(s.control.type, ControlSpec::Type::Zero);
    EXPECT_FALSE(s.has_t_end);
    EXPECT_FALSE(s.gravity.has_value());
    ASSERT_EQ(s.initial.size(), 5);
    EXPECT_EQ(s.initial[4], 0.5);
}

TEST(ParseScenario, Se3DefaultsChi) {
    const Scenario s = parse_scenario(minimal_se3().dump());
    ASSERT_TRUE(s.gravity.has_value());
    EXPECT_EQ(s.gravity->chi, Vec3::UnitZ());
    EXPECT_EQ(s.gravity->mgh, 2.0);
    EXPECT_EQ(s.initial.size(), 8);
}

TEST(ParseScenario, GravityFromFactorsAndRenormalizedChi) {
    json j = minimal_se3();
    j["gravity"] = {{"m", 2}, {"g", 1}, {"h", 1}, {"chi", {0, 0, 2}}};
    const Scenario s = parse_scenario(j.dump());
    EXPECT_EQ(s.gravity->mgh, 2.0);
    EXPECT_EQ(s.gravity->chi, Vec3::UnitZ());
    EXPECT_EQ(s.warnings.size(), 1u);

    j["gravity"]["mgh"] = 3;
    EXPECT_NE(error_of(j).find("gravity"), std::string::npos);
}

TEST(ParseScenario, NamedFieldErrors) {
    for (const char* key : {"model", "inertia", "initial"}) {
        json j = minimal_so3();
        j.erase(key);
        EXPECT_NE(error_of(j).find(std::string("'") + key), std::string::npos) << key;
    }
    json j = minimal_so3();
    j["model"] = "so4";
    const std::string e = error_of(j);
    EXPECT_NE(e.find("'model'"), std::string::npos);
    EXPECT_NE(e.find("so4"), std::string::npos);
}

TEST(ParseScenario, ValidationErrors) {
    json j = minimal_so3();
    j["inertia"]["i_bar"] = {3, -2, 1};
    EXPECT_FALSE(error_of(j).empty());

    j = minimal_se3();
    j.erase("gravity");
    EXPECT_NE(error_of(j).find("gravity"), std::string::npos);

    j = minimal_so3();
    j["gravity"] = {{"mgh", 1}};
    EXPECT_NE(error_of(j).find("gravity"), std::string::npos);

    j = minimal_so3();
    j["integrator"] = {{"dt", 0}};
    EXPECT_NE(error_of(j).find("integrator.dt"), std::string::npos);

    j = minimal_so3();
    j["integrator"] = {{"sample_every", 0}};
    EXPECT_NE(error_of(j).find("sample_every"), std::string::npos);

    j = minimal_so3();
    j["integrator"] = {{"method", "euler"}};
    EXPECT_NE(error_of(j).find("method"), std::string::npos);

    j = minimal_so3();
    j["initial"]["gamma"] = {0, 0, 1};
    EXPECT_NE(error_of(j).find("gamma"), std::string::npos);

    j = minimal_so3();
    j["inertia"]["j3"] = "one";
    EXPECT_FALSE(error_of(j).empty());

    EXPECT_THROW(parse_scenario("{not json"), json::parse_error);
}

TEST(ParseScenario, RawInertiaComponents) {
    json j = minimal_so3();
    j["inertia"] = {{"i_carrier", {2.5, 1.5, 1}}, {"j3k", {0.5, 0.5}}, {"j3", 1}};
    EXPECT_EQ(parse_scenario(j.dump()).inertia.i_bar, Vec3(3, 2, 1));
    j["inertia"]["i_bar"] = {3, 2, 1.5};
    EXPECT_FALSE(error_of(j).empty());
}

TEST(ParseScenario, ControlSpecs) {
    json j = minimal_so3();
    j["control"] = {{"type", "constant"}, {"u_l", 0.1}, {"u_pi", {1, 0, 0}}};
    Scenario s = parse_scenario(j.dump());
    const auto lift = s.control.so3_law()(So3RotorState{});
    EXPECT_EQ(lift.u_l, 0.1);
    EXPECT_EQ(lift.u_pi, Vec3(1, 0, 0));

    j["control"] = {{"type", "linear_feedback"},
                    {"gain", json::array({json::array({-1, 0, 0, 0, 0}), json::array({0, 0, 0, 0, 0}),
                                          json::array({0, 0, 0, 0, 0}), json::array({0, 0, 0, 0, 0}),
                                          json::array({0, 0, 0, 0, -2})})},
                    {"offset", {0, 0, 0, 0.5, 0}}};
    s = parse_scenario(j.dump());
    const auto fb = s.control.so3_law()(So3RotorState{{3, 0, 0}, 0, 1});
    EXPECT_EQ(fb.u_pi.x(), -3.0);
    EXPECT_EQ(fb.u_alpha, 0.5);
    EXPECT_EQ(fb.u_l, -2.0);

    j["control"]["gain"] = json::array({json::array({1, 2})});
    EXPECT_NE(error_of(j).find("control.gain"), std::string::npos);

    j["control"] = {{"type", "constant"}, {"u_gamma", {1, 0, 0}}};
    EXPECT_NE(error_of(j).find("u_gamma"), std::string::npos);
}

TEST(ParseScenario, HjBlock) {
    json j = minimal_so3();
    j["hj"] = {{"gamma", {1, 2, 3, 0, 0.5, 9}}};
    EXPECT_NE(error_of(j).find("hj.gamma"), std::string::npos);

    j["hj"] = {{"gamma", {1, 2, 3, 0, 0.5}}, {"lift", {1, 2, 3}}};
    EXPECT_NE(error_of(j).find("hj.lift"), std::string::npos);

    j["hj"] = {{"gamma", {1, 2, 3, 0, 0.5}},
               {"configs", json::array({{{"rotation", {1, 0, 0, 0, 1, 0, 0, 0, 2}}}})}};
    EXPECT_NE(error_of(j).find("hj.configs"), std::string::npos);

    j["hj"] = {{"gamma", {1, 2, 3, 0, 0.5}}};
    const Scenario s = parse_scenario(j.dump());
    ASSERT_TRUE(s.hj.has_value());
    EXPECT_EQ(s.hj->lift, HjSpec::Lift::Solve);
    EXPECT_EQ(s.hj->tolerance, 1e-10);
    EXPECT_EQ(s.hj->configs.size(), 1u);
}

TEST(ParseScenario, EchoIsStable) {
    const Scenario s = parse_scenario(minimal_se3().dump());
    const json echo = to_json(s);
    const Scenario again = parse_scenario(echo.dump());
    EXPECT_EQ(to_json(again), echo);
}

TEST(Csv, HeaderOrder) {
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& c : v) s += (s.empty() ? "" : ",") + c;
        return s;
    };
    EXPECT_EQ(join(csv_header(ModelKind::So3)), "t,Pi1,Pi2,Pi3,alpha,l,energy,pi_norm");
    EXPECT_EQ(join(csv_header(ModelKind::Se3)),
              "t,Pi1,Pi2,Pi3,Gamma1,Gamma2,Gamma3,alpha,l,energy,pi_dot_gamma,gamma_norm");
}

TEST(Csv, FormatRoundTripsDoubles) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 4.9e-324, 1.7976931348623157e308, 0.0}) {
        EXPECT_EQ(std::strtod(format_real(v).c_str(), nullptr), v);
    }
}

TEST(Csv, TrajectoryRoundTripIsBitIdentical) {
    IntegratorOptions o;
    o.t_end = 0.5;
    GravityParams g;
    g.mgh = 2;
    const Trajectory traj = integrate(InertiaParams{{3, 2, 1}, 1, {}, {}}, g,
                                      Se3RotorState{{1, 2, 3}, {0.6, 0, 0.8}, 0, 0.5},
                                      ControlLawSe3::zero(), o);
    std::stringstream first;
    write_trajectory_csv(first, traj);
    const CsvTable table = read_csv(first);
    ASSERT_EQ(table.rows.size(), traj.size());
    EXPECT_EQ(table.header, csv_header(ModelKind::Se3));

    Trajectory back;
    back.kind = ModelKind::Se3;
    for (const auto& row : table.rows) {
        back.times.push_back(row[0]);
        back.states.push_back(Eigen::Map<const Eigen::VectorXd>(row.data() + 1, 8));
        back.energy.push_back(row[9]);
        back.casimirs.push_back({row[10], row[11]});
    }
    std::stringstream second;
    write_trajectory_csv(second, back);
    first.clear();
    first.seekg(0);
    EXPECT_EQ(first.str(), second.str());
}

TEST(Csv, RejectsMalformed) {
    std::stringstream ragged("a,b\n1,2\n3\n");
    EXPECT_THROW(read_csv(ragged), ValidationError);
    std::stringstream bad("a,b\n1,x\n");
    EXPECT_THROW(read_csv(bad), ValidationError);
    std::stringstream empty("");
    EXPECT_THROW(read_csv(empty), ValidationError);
}

TEST(SplitMix64, ReferenceSequence) {
    // First outputs for seed 0 from the published reference implementation.
    SplitMix64 rng(0);
    EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
    SplitMix64 u(42);
    for (int k = 0; k < 1000; ++k) {
        const double x = u.uniform(-5, 5);
        EXPECT_GE(x, -5.0);
        EXPECT_LT(x, 5.0);
    }
}

TEST(RelativeDiscrepancy, Definition) {
    Eigen::VectorXd a(3), b(3);
    a << 0.5, 0, 0;
    b << 0.5, 1e-3, 0;
    EXPECT_DOUBLE_EQ(relative_discrepancy(a, b), 1e-3);
    a << 10, 0, 0;
    b << 10, 1, 0;
    EXPECT_DOUBLE_EQ(relative_discrepancy(a, b), 0.1);
}

TEST(BracketAudit, Deterministic) {
    const Scenario s = parse_scenario(minimal_se3().dump());
    const json a = bracket_audit_report(s, 200, 42);
    const json b = bracket_audit_report(s, 200, 42);
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_TRUE(a["pass"].get<bool>());
    EXPECT_LT(a["max_relative_discrepancy"].get<double>(), kAuditTolerance);
    EXPECT_NE(a.dump(), bracket_audit_report(s, 200, 43).dump());
}

TEST(HjCheck, SolveAndZeroLift) {
    json j = minimal_so3();
    j["hj"] = {{"gamma", {1, 2, 3, 0, 0.5}}, {"lift", "solve"}};
    json r = hj_check_report(parse_scenario(j.dump()));
    EXPECT_TRUE(r["pass"].get<bool>());
    EXPECT_EQ(r["max_norm"].get<double>(), 0.0);

    j["hj"]["lift"] = "zero";
    r = hj_check_report(parse_scenario(j.dump()));
    EXPECT_FALSE(r["pass"].get<bool>());
    const auto res = r["residuals"][0].get<std::vector<double>>();
    ASSERT_EQ(res.size(), 5u);
    EXPECT_DOUBLE_EQ(res[0], 2.0);
    EXPECT_DOUBLE_EQ(res[1], -1.5);
    EXPECT_NEAR(res[2], 1.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(res[3], -2.0);
    EXPECT_EQ(res[4], 0.0);
}

TEST(HjCheck, EquilibriumField) {
    json j = minimal_se3();
    j["initial"] = {{"pi", {0.02, 0.01, 2}}, {"gamma", {0.01, -0.01, 1}}, {"l", 0.5}};
    j["hj"] = {{"field", "equilibrium"}, {"lift", "zero"}};
    const json r = hj_check_report(parse_scenario(j.dump()));
    EXPECT_TRUE(r["pass"].get<bool>());
    EXPECT_LT(r["max_norm"].get<double>(), 1e-10);
}

TEST(Equilibrium, Report) {
    json j = minimal_so3();
    j["equilibrium"] = {{"guess", {{"pi", {0, 0, 2}}, {"alpha", 0}, {"l", 1}}}};
    const json r = equilibrium_report(parse_scenario(j.dump()));
    EXPECT_TRUE(r["converged"].get<bool>());
    EXPECT_EQ(r["iterations"].get<int>(), 0);
}

TEST(Commands, SimulateWritesOutputs) {
    TempDir dir;
    json j = minimal_so3();
    j["integrator"] = {{"t_end", 1.0}, {"sample_every", 100}};
    const std::string cfg = dir.write("cfg.json", j);
    std::ostringstream out, err;
    ASSERT_EQ(cmd_simulate(cfg, dir.file("a.csv"), dir.file("a.json"), out, err), kExitOk)
        << err.str();
    std::ifstream csv(dir.file("a.csv"));
    const CsvTable table = read_csv(csv);
    EXPECT_EQ(table.rows.size(), 11u);
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        EXPECT_GT(table.rows[k][0], table.rows[k - 1][0]);
    }
    const json summary = json::parse(slurp(dir.file("a.json")));
    EXPECT_EQ(summary["steps"].get<long long>(), 1000);
    EXPECT_LT(summary["drifts"]["energy"]["rel"].get<double>(), 1e-8);
    EXPECT_TRUE(summary["failures"].empty());
    EXPECT_EQ(summary["scenario"]["model"], "so3");

    ASSERT_EQ(cmd_simulate(cfg, dir.file("b.csv"), dir.file("b.json"), out, err), kExitOk);
    EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));
}

TEST(Commands, SimulateEquilibriumIsConstant) {
    TempDir dir;
    json j = minimal_so3();
    j["initial"] = {{"pi", {2, 0, 0}}, {"alpha", 0.25}, {"l", 0}};
    j["integrator"] = {{"t_end", 0.5}};
    std::ostringstream out, err;
    ASSERT_EQ(cmd_simulate(dir.write("cfg.json", j), dir.file("a.csv"), dir.file("a.json"), out,
                           err),
              kExitOk);
    std::ifstream csv(dir.file("a.csv"));
    const CsvTable table = read_csv(csv);
    for (const auto& row : table.rows) {
        for (std::size_t c = 1; c <= 5; ++c) EXPECT_EQ(row[c], table.rows[0][c]);
    }
}

TEST(Commands, SimulateRejectsBadConfig) {
    TempDir dir;
    std::ostringstream out, err;
    json j = minimal_so3();
    j["integrator"] = {{"dt", 0}, {"t_end", 1}};
    EXPECT_EQ(cmd_simulate(dir.write("cfg.json", j), dir.file("a.csv"), dir.file("a.json"), out,
                           err),
              kExitBadInput);
    EXPECT_NE(err.str().find("integrator.dt"), std::string::npos);

    j = minimal_so3();  // no t_end
    EXPECT_EQ(cmd_simulate(dir.write("cfg.json", j), dir.file("a.csv"), dir.file("a.json"), out,
                           err),
              kExitBadInput);
    EXPECT_EQ(cmd_simulate(dir.file("missing.json"), dir.file("a.csv"), dir.file("a.json"), out,
                           err),
              kExitBadInput);
}

TEST(Commands, SimulateKeepsPartialOutputOnFailure) {
    TempDir dir;
    json j = minimal_so3();
    j["integrator"] = {{"method", "midpoint"}, {"dt", 5.0}, {"t_end", 20.0}, {"sample_every", 1}};
    std::ostringstream out, err;
    EXPECT_EQ(cmd_simulate(dir.write("cfg.json", j), dir.file("a.csv"), dir.file("a.json"), out,
                           err),
              kExitCheckFailed);
    std::ifstream csv(dir.file("a.csv"));
    const CsvTable table = read_csv(csv);
    EXPECT_GE(table.rows.size(), 1u);
    const json summary = json::parse(slurp(dir.file("a.json")));
    ASSERT_EQ(summary["failures"].size(), 1u);
    EXPECT_TRUE(summary["failures"][0].contains("time"));
}

TEST(Commands, BracketAuditExitCodes) {
    TempDir dir;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_bracket_audit(dir.write("so3.json", minimal_so3()), 1000, 42, out, err), kExitOk);
    std::ostringstream out2;
    EXPECT_EQ(cmd_bracket_audit(dir.file("so3.json"), 1000, 42, out2, err), kExitOk);
    EXPECT_EQ(out.str(), out2.str());

    EXPECT_EQ(cmd_bracket_audit(dir.write("se3.json", minimal_se3()), std::nullopt, std::nullopt,
                                out, err),
              kExitOk);

    json bad = minimal_so3();
    bad["inertia"]["i_bar"] = {-3, 2, 1};
    EXPECT_EQ(cmd_bracket_audit(dir.write("bad.json", bad), 10, 1, out, err), kExitBadInput);
}

TEST(Commands, HjCheckExitCodes) {
    TempDir dir;
    std::ostringstream out, err;
    json j = minimal_so3();
    j["hj"] = {{"gamma", {1, 2, 3, 0, 0.5}}, {"lift", "solve"}};
    EXPECT_EQ(cmd_hj_check(dir.write("a.json", j), out, err), kExitOk);
    j["hj"]["lift"] = "zero";
    EXPECT_EQ(cmd_hj_check(dir.write("b.json", j), out, err), kExitCheckFailed);
    j["hj"]["gamma"] = {1, 2, 3, 0, 0.5, 1};
    EXPECT_EQ(cmd_hj_check(dir.write("c.json", j), out, err), kExitBadInput);
    j.erase("hj");
    EXPECT_EQ(cmd_hj_check(dir.write("d.json", j), out, err), kExitBadInput);
}

TEST(Commands, EquilibriumExitCodes) {
    TempDir dir;
    std::ostringstream out, err;
    json j = minimal_so3();
    j["initial"] = {{"pi", {2, 0.01, -0.01}}, {"l", 0}};
    EXPECT_EQ(cmd_equilibrium(dir.write("a.json", j), out, err), kExitOk);
    const json r = json::parse(out.str());
    EXPECT_LT(r["residual_norm"].get<double>(), 1e-12);

    j["initial"] = {{"pi", {3, -4, 2.5}}, {"l", 1.7}};
    j["equilibrium"] = {{"max_iter", 2}};
    std::ostringstream out2;
    EXPECT_EQ(cmd_equilibrium(dir.write("b.json", j), out2, err), kExitCheckFailed);
    const json r2 = json::parse(out2.str());
    EXPECT_FALSE(r2["converged"].get<bool>());
    EXPECT_GT(r2["last_residual"].get<double>(), 1e-12);
}
