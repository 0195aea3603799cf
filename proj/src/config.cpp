#include "axireg/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace axireg {

namespace {

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error("config: " + key + " expects a number, got '" + v + "'");
    }
}

long to_integer(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error("config: " + key + " expects an integer, got '" + v + "'");
    }
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const long x = to_integer(key, v);
    if (x < 0) throw Error("config: " + key + " must be nonnegative");
    return static_cast<std::size_t>(x);
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"solver.nu", [](RunConfig& c, auto& k, auto& v) { c.solver.nu = to_double(k, v); }},
        {"solver.dt", [](RunConfig& c, auto& k, auto& v) { c.solver.dt = to_double(k, v); }},
        {"solver.t_end", [](RunConfig& c, auto& k, auto& v) { c.solver.t_end = to_double(k, v); }},
        {"solver.cfl_safety",
         [](RunConfig& c, auto& k, auto& v) { c.solver.cfl_safety = to_double(k, v); }},
        {"solver.projection_tol",
         [](RunConfig& c, auto& k, auto& v) { c.solver.projection_tol = to_double(k, v); }},
        {"solver.r_max", [](RunConfig& c, auto& k, auto& v) { c.grid.r_max = to_double(k, v); }},
        {"solver.z_half", [](RunConfig& c, auto& k, auto& v) { c.grid.z_half = to_double(k, v); }},
        {"solver.n_r", [](RunConfig& c, auto& k, auto& v) { c.grid.n_r = to_count(k, v); }},
        {"solver.n_z", [](RunConfig& c, auto& k, auto& v) { c.grid.n_z = to_count(k, v); }},
        {"solver.stencil_order",
         [](RunConfig& c, auto& k, auto& v) { c.grid.stencil_order = int(to_integer(k, v)); }},
        {"criterion.eps", [](RunConfig& c, auto& k, auto& v) { c.eps = to_double(k, v); }},
        {"criterion.delta0", [](RunConfig& c, auto& k, auto& v) { c.delta0 = to_double(k, v); }},
        {"serrin.s", [](RunConfig& c, auto& k, auto& v) { c.serrin.s = to_double(k, v); }},
        {"serrin.w", [](RunConfig& c, auto& k, auto& v) { c.serrin.w = to_double(k, v); }},
        {"serrin.d", [](RunConfig& c, auto& k, auto& v) { c.serrin.d = to_double(k, v); }},
        {"serrin.delta1", [](RunConfig& c, auto& k, auto& v) { c.serrin.delta1 = to_double(k, v); }},
        {"monitor.name", [](RunConfig& c, auto&, auto& v) { c.monitor.name = v; }},
        {"monitor.out_dir", [](RunConfig& c, auto&, auto& v) { c.monitor.out_dir = v; }},
        {"monitor.cadence",
         [](RunConfig& c, auto& k, auto& v) { c.monitor.cadence = int(to_integer(k, v)); }},
        {"monitor.checkpoint_every",
         [](RunConfig& c, auto& k, auto& v) { c.monitor.checkpoint_every = int(to_integer(k, v)); }},
        {"monitor.chain_eps",
         [](RunConfig& c, auto& k, auto& v) { c.monitor.chain_eps = to_double(k, v); }},
        {"monitor.safety", [](RunConfig& c, auto& k, auto& v) { c.monitor.safety = to_double(k, v); }},
        {"monitor.aq_ensemble",
         [](RunConfig& c, auto& k, auto& v) { c.monitor.aq_ensemble = to_count(k, v); }},
        {"monitor.seed",
         [](RunConfig& c, auto& k, auto& v) { c.monitor.seed = to_count(k, v); }},
        {"initial.recipe", [](RunConfig& c, auto&, auto& v) { c.initial.recipe = v; }},
        {"initial.checkpoint", [](RunConfig& c, auto&, auto& v) { c.initial.checkpoint_path = v; }},
    };
    return table;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it != table.end()) {
        it->second(cfg, key, value);
        return;
    }
    if (key.rfind("initial.", 0) == 0) {
        cfg.initial.params[key.substr(8)] = to_double(key, value);
        return;
    }
    throw Error("config: unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw Error(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw Error("config: key '" + section + "' outside any section");
        for (const auto& [key, value] : body) set_key(cfg, section + "." + key, value.data());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path.string());
    return parse_run_config(in);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw Error("override '" + assignment + "' lacks '='");
    set_key(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json initial = {{"recipe", c.initial.recipe},
                              {"checkpoint", c.initial.checkpoint_path}};
    for (const auto& [k, v] : c.initial.params) initial[k] = v;
    return nlohmann::json{
        {"solver",
         {{"nu", c.solver.nu},
          {"dt", c.solver.dt},
          {"t_end", c.solver.t_end},
          {"cfl_safety", c.solver.cfl_safety},
          {"projection_tol", c.solver.projection_tol},
          {"r_max", c.grid.r_max},
          {"z_half", c.grid.z_half},
          {"n_r", c.grid.n_r},
          {"n_z", c.grid.n_z},
          {"stencil_order", c.grid.stencil_order}}},
        {"criterion", {{"eps", c.eps}, {"delta0", c.delta0}}},
        {"serrin", to_json(c.serrin)},
        {"monitor",
         {{"name", c.monitor.name},
          {"out_dir", c.monitor.out_dir.string()},
          {"cadence", c.monitor.cadence},
          {"checkpoint_every", c.monitor.checkpoint_every},
          {"chain_eps", c.monitor.chain_eps},
          {"safety", c.monitor.safety},
          {"aq_ensemble", c.monitor.aq_ensemble},
          {"seed", c.monitor.seed}}},
        {"initial", initial}};
}

}  // namespace axireg
