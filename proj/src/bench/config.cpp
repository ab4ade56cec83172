#include "isac/bench/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isac::bench {

namespace {

using nlohmann::json;

const json& object_or_empty(const json& j, const char* key) {
    static const json empty = json::object();
    if (!j.contains(key))
        return empty;
    const json& v = j.at(key);
    if (!v.is_object())
        throw std::invalid_argument(std::string("config: '") + key + "' must be an object");
    return v;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || it.key() == a;
        if (!ok)
            throw std::invalid_argument(std::string("config: unknown key '") + it.key() + "' in " + where);
    }
}

}  // namespace

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::PtSweep: return "pt_sweep";
        case ExperimentKind::EtSweep: return "et_sweep";
        case ExperimentKind::Tradeoff: return "tradeoff";
        case ExperimentKind::Timing: return "timing";
    }
    return "?";
}

ExperimentKind parse_kind(const std::string& s) {
    for (ExperimentKind k : {ExperimentKind::Convergence, ExperimentKind::PtSweep, ExperimentKind::EtSweep,
                             ExperimentKind::Tradeoff, ExperimentKind::Timing})
        if (s == kind_name(k))
            return k;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

void ExperimentConfig::validate() const {
    if (schema_version != kSchemaVersion)
        throw std::invalid_argument("config: unsupported schema_version " + std::to_string(schema_version));
    scenario.validate();
    if (snr_db.empty())
        throw std::invalid_argument("config: snr_db must be non-empty");
    if (epsilon.empty())
        throw std::invalid_argument("config: epsilon must be non-empty");
    for (double e : epsilon)
        if (!(e > 0.0 && e < 1.0))
            throw std::invalid_argument("config: epsilon entries must lie in (0, 1)");
    if (variants.empty())
        throw std::invalid_argument("config: variants must be non-empty");
    if (trials < 1 || instances < 1 || inner_max_iter < 1 || !(inner_tol > 0.0))
        throw std::invalid_argument("config: trials, instances, inner budgets must be positive");
    if (admm)
        admm->validate();
}

AdmmConfig ExperimentConfig::admm_for(Variant v) const {
    if (!admm)
        return AdmmConfig::defaults_for(v);
    return *admm;
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: parse error: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be an object");
    check_keys(j, {"schema_version", "experiment", "scenario", "snr_db", "epsilon", "variants", "trials",
                   "instances", "seed", "inner_max_iter", "inner_tol", "admm", "output"},
               "top level");
    if (!j.contains("schema_version"))
        throw std::invalid_argument("config: missing schema_version");
    if (!j.contains("experiment"))
        throw std::invalid_argument("config: missing experiment");
    ExperimentConfig c;
    read(j, "schema_version", c.schema_version);
    std::string kind;
    read(j, "experiment", kind);
    c.kind = parse_kind(kind);

    const json& s = object_or_empty(j, "scenario");
    check_keys(s, {"n_t", "n_r", "l", "k", "qam_order", "power", "snr_sensing_db", "snr_comm_db", "epsilon",
                   "theta_deg", "sigma_alpha_sq", "correlation"},
               "scenario");
    ScenarioParams& p = c.scenario;
    read(s, "n_t", p.n_t);
    read(s, "n_r", p.n_r);
    read(s, "l", p.l);
    read(s, "k", p.k);
    read(s, "qam_order", p.order);
    read(s, "power", p.power);
    read(s, "snr_sensing_db", p.snr_sensing_db);
    read(s, "snr_comm_db", p.snr_comm_db);
    read(s, "epsilon", p.epsilon);
    read(s, "theta_deg", p.theta_deg);
    read(s, "sigma_alpha_sq", p.sigma_alpha_sq);
    read(s, "correlation", p.correlation);

    read(j, "snr_db", c.snr_db);
    read(j, "epsilon", c.epsilon);
    if (j.contains("variants")) {
        std::vector<std::string> names;
        read(j, "variants", names);
        c.variants.clear();
        for (const auto& n : names)
            c.variants.push_back(parse_variant(n));
    }
    read(j, "trials", c.trials);
    read(j, "instances", c.instances);
    read(j, "seed", c.seed);
    read(j, "inner_max_iter", c.inner_max_iter);
    read(j, "inner_tol", c.inner_tol);
    read(j, "output", c.output);
    if (j.contains("admm")) {
        const json& a = object_or_empty(j, "admm");
        check_keys(a, {"rho0", "c_rho", "rho_max", "tol_residual", "tol_objective", "max_outer", "max_inner",
                       "inner_tol"},
                   "admm");
        AdmmConfig ac = AdmmConfig::pt_defaults();
        read(a, "rho0", ac.rho0);
        read(a, "c_rho", ac.c_rho);
        read(a, "rho_max", ac.rho_max);
        read(a, "tol_residual", ac.tol_residual);
        read(a, "tol_objective", ac.tol_objective);
        read(a, "max_outer", ac.max_outer);
        read(a, "max_inner", ac.max_inner);
        read(a, "inner_tol", ac.inner_tol);
        c.admm = ac;
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["experiment"] = kind_name(c.kind);
    const ScenarioParams& p = c.scenario;
    j["scenario"] = {{"n_t", p.n_t},
                     {"n_r", p.n_r},
                     {"l", p.l},
                     {"k", p.k},
                     {"qam_order", p.order},
                     {"power", p.power},
                     {"snr_sensing_db", p.snr_sensing_db},
                     {"snr_comm_db", p.snr_comm_db},
                     {"epsilon", p.epsilon},
                     {"theta_deg", p.theta_deg},
                     {"sigma_alpha_sq", p.sigma_alpha_sq},
                     {"correlation", p.correlation}};
    j["snr_db"] = c.snr_db;
    j["epsilon"] = c.epsilon;
    std::vector<std::string> names;
    for (Variant v : c.variants)
        names.push_back(variant_name(v));
    j["variants"] = names;
    j["trials"] = c.trials;
    j["instances"] = c.instances;
    j["seed"] = c.seed;
    j["inner_max_iter"] = c.inner_max_iter;
    j["inner_tol"] = c.inner_tol;
    if (c.admm) {
        const AdmmConfig& a = *c.admm;
        j["admm"] = {{"rho0", a.rho0},
                     {"c_rho", a.c_rho},
                     {"rho_max", a.rho_max},
                     {"tol_residual", a.tol_residual},
                     {"tol_objective", a.tol_objective},
                     {"max_outer", a.max_outer},
                     {"max_inner", a.max_inner},
                     {"inner_tol", a.inner_tol}};
    }
    if (!c.output.empty())
        j["output"] = c.output;
    return j.dump(2) + "\n";
}

ExperimentConfig smoke_preset(ExperimentKind k) {
    ExperimentConfig c;
    c.kind = k;
    switch (k) {
        case ExperimentKind::Convergence:
            c.variants = {Variant::PT, Variant::ET};
            c.epsilon = {1e-3, 1e-2, 1e-1};
            break;
        case ExperimentKind::PtSweep:
            c.variants = {Variant::PT, Variant::PT_INF};
            c.snr_db = {10.0, 20.0, 30.0};
            c.trials = 50;
            c.scenario.k = 0;
            break;
        case ExperimentKind::EtSweep:
            c.variants = {Variant::ET, Variant::ET_QU};
            c.scenario.n_t = c.scenario.n_r = 4;
            c.scenario.l = 8;
            c.scenario.k = 0;
            c.snr_db = {10.0, 20.0, 30.0, 40.0};
            c.trials = 200;
            break;
        case ExperimentKind::Tradeoff:
            c.variants = {Variant::PT, Variant::PT_INF, Variant::ET, Variant::ET_QU};
            c.epsilon = {1e-3, 1e-2, 1e-1};
            break;
        case ExperimentKind::Timing:
            c.variants = {Variant::PT, Variant::ET};
            c.instances = 2;
            break;
    }
    return c;
}

}  // namespace isac::bench
