#include "tsdyn/problem_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace tsdyn {

using nlohmann::json;

void ConfigOverrides::apply_to(RelaxationConfig& c) const {
    if (d) c.d = *d;
    if (s) c.s = *s;
    if (l) c.l = *l;
    if (beta) c.beta = *beta;
    if (mode) c.mode = *mode;
    if (extension) c.extension = *extension;
}

namespace {

std::vector<std::string> string_list(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("problem file: missing \"") + key + "\"");
    const json& arr = j.at(key);
    if (!arr.is_array()) throw std::invalid_argument(std::string("problem file: \"") + key + "\" must be an array");
    std::vector<std::string> out;
    for (const auto& e : arr) {
        if (!e.is_string()) throw std::invalid_argument(std::string("problem file: \"") + key + "\" entries must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

Polynomial parse_field(const std::string& text, const std::vector<std::string>& vars, const std::string& what) {
    try {
        return parse_polynomial(text, vars);
    } catch (const ParseError& e) {
        throw std::invalid_argument("problem file: cannot parse " + what + " \"" + text + "\" at position " +
                                    std::to_string(e.position()) + ": " + e.what());
    }
}

Box parse_box(const json& j, std::size_t dim) {
    Box box;
    if (j.is_object()) {
        box.lo = j.at("lo").get<std::vector<double>>();
        box.hi = j.at("hi").get<std::vector<double>>();
    } else if (j.is_array()) {
        for (const auto& pair : j) {
            const auto v = pair.get<std::vector<double>>();
            if (v.size() != 2) throw std::invalid_argument("problem file: box intervals must be [lo, hi]");
            box.lo.push_back(v[0]);
            box.hi.push_back(v[1]);
        }
    } else {
        throw std::invalid_argument("problem file: \"box\" must be {\"lo\", \"hi\"} or a list of intervals");
    }
    box.validate(dim);
    return box;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("problem file is not valid JSON: ") + e.what());
    }
    ProblemFile pf;
    pf.name = j.value("name", std::string("unnamed"));
    DynamicalSystem& sys = pf.system;
    sys.variables = string_list(j, "variables");
    if (sys.variables.empty()) throw std::invalid_argument("problem file: no variables");
    const auto dyn = string_list(j, "dynamics");
    if (dyn.size() != sys.variables.size())
        throw std::invalid_argument("problem file: " + std::to_string(dyn.size()) + " dynamics for " +
                                    std::to_string(sys.variables.size()) + " variables");
    for (std::size_t i = 0; i < dyn.size(); ++i) sys.field.push_back(parse_field(dyn[i], sys.variables, "dynamics"));

    if (!j.contains("box"))
        throw std::invalid_argument("problem file: \"box\" is required; the state constraint set must be a box");
    pf.box = parse_box(j.at("box"), sys.dim());

    if (j.contains("constraints")) {
        for (const auto& c : string_list(j, "constraints"))
            sys.constraints.push_back(parse_field(c, sys.variables, "constraint"));
    } else {
        const std::size_t n = sys.dim();
        for (std::size_t i = 0; i < n; ++i) {
            const Polynomial xi = Polynomial::variable(n, i);
            sys.constraints.push_back((xi - Polynomial::constant(n, pf.box.lo[i])) *
                                      (Polynomial::constant(n, pf.box.hi[i]) - xi));
        }
    }
    sys.validate();

    if (j.contains("config")) {
        const json& c = j.at("config");
        if (c.contains("d")) pf.config.d = c.at("d").get<int>();
        if (c.contains("s")) pf.config.s = c.at("s").get<int>();
        if (c.contains("l")) pf.config.l = c.at("l").get<int>();
        if (c.contains("beta")) pf.config.beta = c.at("beta").get<double>();
        if (c.contains("mode")) pf.config.mode = parse_mode(c.at("mode").get<std::string>());
        if (c.contains("extension")) pf.config.extension = parse_extension(c.at("extension").get<std::string>());
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_problem(ss.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string problem_to_json(const ProblemFile& pf) {
    json j;
    j["name"] = pf.name;
    j["variables"] = pf.system.variables;
    json dyn = json::array();
    for (const auto& f : pf.system.field) dyn.push_back(to_string(f, pf.system.variables));
    j["dynamics"] = dyn;
    json cons = json::array();
    for (const auto& p : pf.system.constraints) cons.push_back(to_string(p, pf.system.variables));
    j["constraints"] = cons;
    j["box"] = {{"lo", pf.box.lo}, {"hi", pf.box.hi}};
    json cfg = json::object();
    if (pf.config.d) cfg["d"] = *pf.config.d;
    if (pf.config.s) cfg["s"] = *pf.config.s;
    if (pf.config.l) cfg["l"] = *pf.config.l;
    if (pf.config.beta) cfg["beta"] = *pf.config.beta;
    if (pf.config.mode) cfg["mode"] = to_string(*pf.config.mode);
    if (pf.config.extension) cfg["extension"] = to_string(*pf.config.extension);
    if (!cfg.empty()) j["config"] = cfg;
    return j.dump(2) + "\n";
}

}  // namespace tsdyn
