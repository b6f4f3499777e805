#include "gyrostat/io/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gyrostat::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ValidationError("scenario field '" + field + "': " + why);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path.empty() ? key : path + "." + key, "missing required field");
    }
    return *it;
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) {
        fail(field, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        fail(field, "must be finite");
    }
    return d;
}

std::vector<double> numbers(const json& v, const std::string& field) {
    if (!v.is_array()) {
        fail(field, "expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Vec3 vec3(const json& v, const std::string& field) {
    const std::vector<double> a = numbers(v, field);
    if (a.size() != 3) {
        fail(field, "expected 3 components, got " + std::to_string(a.size()));
    }
    return {a[0], a[1], a[2]};
}

Eigen::VectorXd vector_of(const std::vector<double>& a) {
    return Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

void require_object(const json& v, const std::string& field) {
    if (!v.is_object()) {
        fail(field, "expected an object");
    }
}

ModelKind parse_model(const json& v) {
    if (!v.is_string()) {
        fail("model", "expected a string (\"so3\" or \"se3\")");
    }
    const auto s = v.get<std::string>();
    if (s == "so3") return ModelKind::So3;
    if (s == "se3") return ModelKind::Se3;
    fail("model", "unknown model \"" + s + "\" (expected \"so3\" or \"se3\")");
}

InertiaParams parse_inertia(const json& v) {
    require_object(v, "inertia");
    const double j3 = number(require(v, "j3", "inertia"), "inertia.j3");
    const bool has_raw = v.contains("i_carrier") || v.contains("j3k");
    InertiaParams p;
    if (has_raw) {
        const Vec3 ic = vec3(require(v, "i_carrier", "inertia"), "inertia.i_carrier");
        const std::vector<double> j3k = numbers(require(v, "j3k", "inertia"), "inertia.j3k");
        if (j3k.size() != 2) {
            fail("inertia.j3k", "expected 2 components");
        }
        p.i_bar = {ic.x() + j3k[0], ic.y() + j3k[1], ic.z()};
        p.i_carrier = ic;
        p.j3k = std::array<double, 2>{j3k[0], j3k[1]};
        if (v.contains("i_bar")) {
            p.i_bar = vec3(v["i_bar"], "inertia.i_bar");
        }
    } else {
        p.i_bar = vec3(require(v, "i_bar", "inertia"), "inertia.i_bar");
    }
    p.j3 = j3;
    p.validate();
    return p;
}

GravityParams parse_gravity(const json& v, std::vector<std::string>& warnings) {
    require_object(v, "gravity");
    GravityParams g;
    const bool has_product = v.contains("mgh");
    const bool has_factors = v.contains("m") || v.contains("g") || v.contains("h");
    if (has_product && has_factors) {
        fail("gravity", "give either mgh or m, g, h, not both");
    }
    if (has_product) {
        g.mgh = number(v["mgh"], "gravity.mgh");
    } else if (has_factors) {
        g.mgh = number(require(v, "m", "gravity"), "gravity.m") *
                number(require(v, "g", "gravity"), "gravity.g") *
                number(require(v, "h", "gravity"), "gravity.h");
    } else {
        fail("gravity.mgh", "missing required field (or m, g, h)");
    }
    if (v.contains("chi")) {
        g.chi = vec3(v["chi"], "gravity.chi");
    }
    if (g.normalize()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "gravity.chi was not a unit vector; renormalized to (" << g.chi.x() << ", "
            << g.chi.y() << ", " << g.chi.z() << ")";
        warnings.push_back(msg.str());
    }
    return g;
}

Eigen::VectorXd parse_state(const json& v, ModelKind model, const std::string& path) {
    require_object(v, path);
    const Vec3 pi = vec3(require(v, "pi", path), join(path, "pi"));
    const double alpha = v.contains("alpha") ? number(v["alpha"], join(path, "alpha")) : 0.0;
    const double l = number(require(v, "l", path), join(path, "l"));
    if (model == ModelKind::So3) {
        if (v.contains("gamma")) {
            fail(join(path, "gamma"), "only valid for model se3");
        }
        return So3RotorState{pi, alpha, l}.to_vector();
    }
    const Vec3 gamma = vec3(require(v, "gamma", path), join(path, "gamma"));
    return Se3RotorState{pi, gamma, alpha, l}.to_vector();
}

ControlSpec parse_control(const json& v, int dim) {
    require_object(v, "control");
    ControlSpec c;
    const std::string type = v.contains("type") ? v["type"].get<std::string>() : "zero";
    if (type == "zero") {
        c.type = ControlSpec::Type::Zero;
    } else if (type == "constant") {
        c.type = ControlSpec::Type::Constant;
        c.lift = Eigen::VectorXd::Zero(dim);
        c.lift.head<3>() = v.contains("u_pi") ? vec3(v["u_pi"], "control.u_pi") : Vec3::Zero();
        if (dim == Se3RotorState::kDim) {
            c.lift.segment<3>(3) =
                v.contains("u_gamma") ? vec3(v["u_gamma"], "control.u_gamma") : Vec3::Zero();
        } else if (v.contains("u_gamma")) {
            fail("control.u_gamma", "only valid for model se3");
        }
        c.lift[dim - 2] = v.contains("u_alpha") ? number(v["u_alpha"], "control.u_alpha") : 0.0;
        c.lift[dim - 1] = v.contains("u_l") ? number(v["u_l"], "control.u_l") : 0.0;
    } else if (type == "linear_feedback") {
        c.type = ControlSpec::Type::LinearFeedback;
        const json& gain = require(v, "gain", "control");
        if (!gain.is_array() || gain.size() != static_cast<std::size_t>(dim)) {
            fail("control.gain", "expected " + std::to_string(dim) + " rows");
        }
        c.gain.resize(dim, dim);
        for (int r = 0; r < dim; ++r) {
            const std::vector<double> row =
                numbers(gain[static_cast<std::size_t>(r)], "control.gain[" + std::to_string(r) + "]");
            if (row.size() != static_cast<std::size_t>(dim)) {
                fail("control.gain[" + std::to_string(r) + "]",
                     "expected " + std::to_string(dim) + " columns");
            }
            c.gain.row(r) = vector_of(row).transpose();
        }
        c.offset = Eigen::VectorXd::Zero(dim);
        if (v.contains("offset")) {
            const std::vector<double> off = numbers(v["offset"], "control.offset");
            if (off.size() != static_cast<std::size_t>(dim)) {
                fail("control.offset", "expected " + std::to_string(dim) + " components");
            }
            c.offset = vector_of(off);
        }
    } else {
        fail("control.type",
             "unknown control type \"" + type + "\" (expected zero, constant, linear_feedback)");
    }
    return c;
}

IntegratorOptions parse_integrator(const json& v, bool& has_t_end) {
    require_object(v, "integrator");
    IntegratorOptions o;
    if (v.contains("method")) {
        const auto m = v["method"].get<std::string>();
        if (m == "rk4") {
            o.method = IntegratorMethod::Rk4;
        } else if (m == "midpoint") {
            o.method = IntegratorMethod::Midpoint;
        } else {
            fail("integrator.method", "unknown method \"" + m + "\" (expected rk4 or midpoint)");
        }
    }
    if (v.contains("dt")) o.dt = number(v["dt"], "integrator.dt");
    if (!(o.dt > 0.0)) fail("integrator.dt", "must be positive");
    has_t_end = v.contains("t_end");
    if (has_t_end) {
        o.t_end = number(v["t_end"], "integrator.t_end");
        if (!(o.t_end > 0.0)) fail("integrator.t_end", "must be positive");
    }
    if (v.contains("sample_every")) {
        if (!v["sample_every"].is_number_integer()) fail("integrator.sample_every", "expected an integer");
        o.sample_every = v["sample_every"].get<int>();
        if (o.sample_every < 1) fail("integrator.sample_every", "must be >= 1");
    }
    if (v.contains("midpoint_tol")) {
        o.midpoint_tol = number(v["midpoint_tol"], "integrator.midpoint_tol");
        if (!(o.midpoint_tol > 0.0)) fail("integrator.midpoint_tol", "must be positive");
    }
    if (v.contains("midpoint_max_iter")) {
        o.midpoint_max_iter = v["midpoint_max_iter"].get<int>();
        if (o.midpoint_max_iter < 1) fail("integrator.midpoint_max_iter", "must be >= 1");
    }
    return o;
}

ConfigurationPoint parse_config_point(const json& v, const std::string& path) {
    require_object(v, path);
    ConfigurationPoint q;
    if (v.contains("rotation")) {
        const std::vector<double> r = numbers(v["rotation"], join(path, "rotation"));
        if (r.size() != 9) fail(join(path, "rotation"), "expected 9 row-major entries");
        q.rotation = matrix_from_row_major(std::span<const double, 9>(r.data(), 9));
    }
    if (v.contains("translation")) q.translation = vec3(v["translation"], join(path, "translation"));
    if (v.contains("rotor_angle")) q.rotor_angle = number(v["rotor_angle"], join(path, "rotor_angle"));
    try {
        q.validate();
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
    return q;
}

HjSpec parse_hj(const json& v, int dim) {
    require_object(v, "hj");
    HjSpec h;
    if (v.contains("field")) {
        const auto f = v["field"].get<std::string>();
        if (f == "constant") {
            h.field = HjSpec::Field::Constant;
        } else if (f == "equilibrium") {
            h.field = HjSpec::Field::Equilibrium;
        } else {
            fail("hj.field", "unknown field \"" + f + "\" (expected constant or equilibrium)");
        }
    }
    if (v.contains("gamma")) {
        std::vector<double> g = numbers(v["gamma"], "hj.gamma");
        if (g.size() != static_cast<std::size_t>(dim)) {
            fail("hj.gamma", "has length " + std::to_string(g.size()) + " but the model needs " +
                                 std::to_string(dim));
        }
        h.gamma = std::move(g);
    }
    if (v.contains("lift")) {
        const json& l = v["lift"];
        if (l.is_string()) {
            const auto s = l.get<std::string>();
            if (s == "zero") {
                h.lift = HjSpec::Lift::Zero;
            } else if (s == "solve") {
                h.lift = HjSpec::Lift::Solve;
            } else {
                fail("hj.lift", "unknown lift rule \"" + s + "\" (expected zero, solve or an array)");
            }
        } else {
            h.lift = HjSpec::Lift::Given;
            h.given_lift = numbers(l, "hj.lift");
            if (h.given_lift.size() != static_cast<std::size_t>(dim)) {
                fail("hj.lift", "has length " + std::to_string(h.given_lift.size()) +
                                    " but the model needs " + std::to_string(dim));
            }
        }
    }
    if (v.contains("tolerance")) {
        h.tolerance = number(v["tolerance"], "hj.tolerance");
        if (!(h.tolerance > 0.0)) fail("hj.tolerance", "must be positive");
    }
    if (v.contains("configs")) {
        const json& cs = v["configs"];
        if (!cs.is_array()) fail("hj.configs", "expected an array");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            h.configs.push_back(parse_config_point(cs[i], "hj.configs[" + std::to_string(i) + "]"));
        }
    }
    if (h.configs.empty()) {
        h.configs.emplace_back();
    }
    return h;
}

EquilibriumSpec parse_equilibrium(const json& v, ModelKind model) {
    require_object(v, "equilibrium");
    EquilibriumSpec e;
    if (v.contains("guess")) e.guess = parse_state(v["guess"], model, "equilibrium.guess");
    if (v.contains("tol")) {
        e.options.tol = number(v["tol"], "equilibrium.tol");
        if (!(e.options.tol > 0.0)) fail("equilibrium.tol", "must be positive");
    }
    if (v.contains("max_iter")) {
        if (!v["max_iter"].is_number_integer()) fail("equilibrium.max_iter", "expected an integer");
        e.options.max_iter = v["max_iter"].get<int>();
        if (e.options.max_iter < 0) fail("equilibrium.max_iter", "must be >= 0");
    }
    return e;
}

}  // namespace

int Scenario::dimension() const {
    return model == ModelKind::So3 ? So3RotorState::kDim : Se3RotorState::kDim;
}

ControlLawSo3 ControlSpec::so3_law() const {
    switch (type) {
        case Type::Zero: return ControlLawSo3::zero();
        case Type::Constant: return ControlLawSo3::constant(ControlLiftSo3::from_vector(lift));
        case Type::LinearFeedback: {
            const Eigen::MatrixXd k = gain;
            const Eigen::VectorXd b = offset;
            return ControlLawSo3::feedback([k, b](const So3RotorState& s) {
                const Eigen::VectorXd u = b + k * Eigen::VectorXd(s.to_vector());
                return ControlLiftSo3::from_vector(u);
            });
        }
    }
    return ControlLawSo3::zero();
}

ControlLawSe3 ControlSpec::se3_law() const {
    switch (type) {
        case Type::Zero: return ControlLawSe3::zero();
        case Type::Constant: return ControlLawSe3::constant(ControlLiftSe3::from_vector(lift));
        case Type::LinearFeedback: {
            const Eigen::MatrixXd k = gain;
            const Eigen::VectorXd b = offset;
            return ControlLawSe3::feedback([k, b](const Se3RotorState& s) {
                const Eigen::VectorXd u = b + k * Eigen::VectorXd(s.to_vector());
                return ControlLiftSe3::from_vector(u);
            });
        }
    }
    return ControlLawSe3::zero();
}

Scenario parse_scenario(std::string_view text) {
    const json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) {
        throw ValidationError("scenario must be a JSON object");
    }
    try {
        Scenario s;
        s.model = parse_model(require(doc, "model", ""));
        s.inertia = parse_inertia(require(doc, "inertia", ""));
        if (s.model == ModelKind::Se3) {
            if (!doc.contains("gravity")) {
                fail("gravity", "missing required field (model se3 needs a gravity block)");
            }
            s.gravity = parse_gravity(doc["gravity"], s.warnings);
        } else if (doc.contains("gravity")) {
            fail("gravity", "only valid for model se3");
        }
        s.initial = parse_state(require(doc, "initial", ""), s.model, "initial");
        if (doc.contains("control")) {
            s.control = parse_control(doc["control"], s.dimension());
        }
        if (doc.contains("integrator")) {
            s.integrator = parse_integrator(doc["integrator"], s.has_t_end);
        }
        if (doc.contains("seed")) {
            if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
            s.seed = doc["seed"].get<std::uint64_t>();
        }
        if (doc.contains("hj")) s.hj = parse_hj(doc["hj"], s.dimension());
        if (doc.contains("equilibrium")) s.equilibrium = parse_equilibrium(doc["equilibrium"], s.model);
        return s;
    } catch (const json::type_error& e) {
        throw ValidationError(std::string("scenario has a field of the wrong type: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

json state_to_json(ModelKind kind, const Eigen::VectorXd& x) {
    json j;
    j["pi"] = {x[0], x[1], x[2]};
    if (kind == ModelKind::Se3) {
        j["gamma"] = {x[3], x[4], x[5]};
    }
    j["alpha"] = x[x.size() - 2];
    j["l"] = x[x.size() - 1];
    return j;
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

}  // namespace

json to_json(const Scenario& s) {
    json j;
    j["model"] = std::string(to_string(s.model));
    json inertia;
    inertia["i_bar"] = {s.inertia.i_bar.x(), s.inertia.i_bar.y(), s.inertia.i_bar.z()};
    inertia["j3"] = s.inertia.j3;
    if (s.inertia.i_carrier) {
        inertia["i_carrier"] = {s.inertia.i_carrier->x(), s.inertia.i_carrier->y(),
                                s.inertia.i_carrier->z()};
        inertia["j3k"] = {(*s.inertia.j3k)[0], (*s.inertia.j3k)[1]};
    }
    j["inertia"] = inertia;
    if (s.gravity) {
        j["gravity"] = {{"mgh", s.gravity->mgh},
                        {"chi", {s.gravity->chi.x(), s.gravity->chi.y(), s.gravity->chi.z()}}};
    }
    j["initial"] = state_to_json(s.model, s.initial);
    json control;
    switch (s.control.type) {
        case ControlSpec::Type::Zero: control["type"] = "zero"; break;
        case ControlSpec::Type::Constant:
            control["type"] = "constant";
            control["lift"] = vec_json(s.control.lift);
            break;
        case ControlSpec::Type::LinearFeedback: {
            control["type"] = "linear_feedback";
            json rows = json::array();
            for (Eigen::Index r = 0; r < s.control.gain.rows(); ++r) {
                rows.push_back(vec_json(s.control.gain.row(r).transpose()));
            }
            control["gain"] = rows;
            control["offset"] = vec_json(s.control.offset);
            break;
        }
    }
    j["control"] = control;
    json integ;
    integ["method"] = s.integrator.method == IntegratorMethod::Rk4 ? "rk4" : "midpoint";
    integ["dt"] = s.integrator.dt;
    if (s.has_t_end) integ["t_end"] = s.integrator.t_end;
    integ["sample_every"] = s.integrator.sample_every;
    j["integrator"] = integ;
    j["seed"] = s.seed;
    return j;
}

}  // namespace gyrostat::io
