#include "gpfv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace gpfv {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) return std::to_string(x);
    return std::string(buf, end);
}

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    require_object(j, where);
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
        if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

double number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& where, double fallback) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

std::uint64_t unsigned_or(const json& j, const std::string& key, const std::string& where, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(where + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string string_field(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    if (!j.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

MarginalShape shape_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    const std::string law = string_field(j, "law", where);
    if (law == "uniform") {
        check_keys(j, where, {"law", "lo", "hi"});
        return UniformShape{number(j, "lo", where), number(j, "hi", where)};
    }
    if (law == "power") {
        check_keys(j, where, {"law", "alpha", "lo", "hi"});
        return PowerShape{number(j, "alpha", where), number(j, "lo", where), number(j, "hi", where)};
    }
    if (law == "point") {
        check_keys(j, where, {"law", "at"});
        return PointShape{number(j, "at", where)};
    }
    throw ConfigError(where + ".law: unknown law '" + law + "' (uniform | power | point)");
}

json shape_to_json(const MarginalShape& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformShape>) return {{"law", "uniform"}, {"lo", v.lo}, {"hi", v.hi}};
            if constexpr (std::is_same_v<T, PowerShape>)
                return {{"law", "power"}, {"alpha", v.alpha}, {"lo", v.lo}, {"hi", v.hi}};
            if constexpr (std::is_same_v<T, PointShape>) return {{"law", "point"}, {"at", v.at}};
        },
        s);
}

JumpComponent component_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    const std::string family = string_field(j, "family", where);
    if (family == "point_masses") {
        check_keys(j, where, {"family", "atoms"});
        if (!j.contains("atoms") || !j.at("atoms").is_array()) throw ConfigError(where + ".atoms: expected a list");
        PointMassList list;
        std::size_t i = 0;
        for (const auto& a : j.at("atoms")) {
            const std::string w = where + ".atoms[" + std::to_string(i++) + "]";
            check_keys(a, w, {"rate", "z_d", "z_b"});
            try {
                list.atoms.push_back({number(a, "rate", w), Event(number(a, "z_d", w), number(a, "z_b", w))});
            } catch (const std::invalid_argument& e) {
                throw ConfigError(w + ": " + e.what());
            }
        }
        return list;
    }
    if (family == "product") {
        check_keys(j, where, {"family", "rate", "death", "birth"});
        if (!j.contains("death") || !j.contains("birth")) throw ConfigError(where + ": product needs 'death' and 'birth'");
        return ProductMeasure{number(j, "rate", where), shape_from_json(j.at("death"), where + ".death"),
                              shape_from_json(j.at("birth"), where + ".birth")};
    }
    if (family == "diagonal_lambda") {
        check_keys(j, where, {"family", "scale", "exponent", "u_min", "birth_scale", "kingman_atom"});
        DiagonalLambda d;
        d.scale = number_or(j, "scale", where, 1.0);
        d.exponent = number_or(j, "exponent", where, 0.0);
        d.u_min = number_or(j, "u_min", where, 0.0);
        d.birth_scale = number_or(j, "birth_scale", where, 1.0);
        d.kingman_atom = number_or(j, "kingman_atom", where, 0.0);
        return d;
    }
    throw ConfigError(where + ".family: unknown family '" + family + "' (point_masses | product | diagonal_lambda)");
}

json component_to_json(const JumpComponent& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMassList>) {
                json atoms = json::array();
                for (const auto& a : v.atoms) atoms.push_back({{"rate", a.rate}, {"z_d", a.z.death}, {"z_b", a.z.birth}});
                return {{"family", "point_masses"}, {"atoms", atoms}};
            }
            if constexpr (std::is_same_v<T, ProductMeasure>) {
                return {{"family", "product"}, {"rate", v.total_rate}, {"death", shape_to_json(v.death)},
                        {"birth", shape_to_json(v.birth)}};
            }
            if constexpr (std::is_same_v<T, DiagonalLambda>) {
                return {{"family", "diagonal_lambda"}, {"scale", v.scale},          {"exponent", v.exponent},
                        {"u_min", v.u_min},            {"birth_scale", v.birth_scale}, {"kingman_atom", v.kingman_atom}};
            }
        },
        c);
}

}  // namespace

Characteristic characteristic_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    if (j.contains("preset")) {
        const std::string preset = string_field(j, "preset", where);
        if (preset == "wright_fisher") {
            check_keys(j, where, {"preset", "k"});
            const double k = number(j, "k", where);
            if (!(k > 0.0 && k <= 2.0)) throw ConfigError(where + ".k: expected 0 < k <= 2");
            return wright_fisher_scaling(k);
        }
        if (preset == "showcase") {
            check_keys(j, where, {"preset"});
            return twenty_type_showcase();
        }
        if (preset == "diagonal_lambda") {
            check_keys(j, where, {"preset", "scale", "exponent", "drift", "birth_scale"});
            try {
                return diagonal_lambda(number_or(j, "scale", where, 1.0), number_or(j, "exponent", where, 0.5),
                                       number_or(j, "drift", where, 1.0), number_or(j, "birth_scale", where, 1.0));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(where + ": " + e.what());
            }
        }
        throw ConfigError(where + ".preset: unknown preset '" + preset + "' (wright_fisher | showcase | diagonal_lambda)");
    }
    check_keys(j, where, {"gamma", "jump", "balance_tol"});
    if (!j.contains("gamma")) throw ConfigError(where + ": missing field 'gamma'");
    const json& g = j.at("gamma");
    Characteristic c;
    if (g.is_array()) {
        if (g.size() != 2 || !g[0].is_number() || !g[1].is_number()) {
            throw ConfigError(where + ".gamma: expected [gamma_d, gamma_b]");
        }
        c.drift = Drift{g[0].get<double>(), g[1].get<double>()};
    } else {
        check_keys(g, where + ".gamma", {"death", "birth"});
        c.drift = Drift{number(g, "death", where + ".gamma"), number(g, "birth", where + ".gamma")};
    }
    c.balance_tol = number_or(j, "balance_tol", where, 1e-9);
    std::vector<JumpComponent> parts;
    if (j.contains("jump")) {
        const json& jump = j.at("jump");
        if (jump.is_array()) {
            for (std::size_t i = 0; i < jump.size(); ++i) {
                parts.push_back(component_from_json(jump[i], where + ".jump[" + std::to_string(i) + "]"));
            }
        } else {
            parts.push_back(component_from_json(jump, where + ".jump"));
        }
    }
    c.jump = JumpMeasure(std::move(parts));
    return c;
}

json characteristic_to_json(const Characteristic& c) {
    json parts = json::array();
    for (const auto& p : c.jump.parts()) parts.push_back(component_to_json(p));
    return {{"gamma", json::array({c.drift.death, c.drift.birth})}, {"jump", parts},
            {"balance_tol", c.balance_tol}};
}

namespace {

const std::map<std::string, ExperimentKind>& experiment_names() {
    static const std::map<std::string, ExperimentKind> names{
        {"popsize", ExperimentKind::popsize},
        {"forward", ExperimentKind::forward},
        {"lookdown", ExperimentKind::lookdown},
        {"prelimit", ExperimentKind::prelimit},
        {"dual", ExperimentKind::dual},
        {"verify-suite", ExperimentKind::verify_suite},
        {"wf-study", ExperimentKind::wf_study},
        {"closedness-study", ExperimentKind::closedness_study},
    };
    return names;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    for (const auto& [name, k] : experiment_names()) {
        if (k == kind) return name;
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& s) {
    const auto& names = experiment_names();
    auto it = names.find(s);
    if (it == names.end()) {
        std::string all;
        for (const auto& [name, _] : names) all += (all.empty() ? "" : " | ") + name;
        throw ConfigError("experiment: unknown kind '" + s + "' (" + all + ")");
    }
    return it->second;
}

RunConfig run_config_from_json(const json& j) {
    check_keys(j, "config",
               {"characteristic", "experiment", "horizon", "replicates", "seed", "grid", "eps", "n0", "frequencies",
                "levels", "m", "y", "x", "out"});
    RunConfig c;
    if (j.contains("characteristic")) c.characteristic = characteristic_from_json(j.at("characteristic"));
    if (j.contains("experiment")) c.experiment = experiment_from_string(string_field(j, "experiment", "config"));
    c.horizon = number_or(j, "horizon", "config", c.horizon);
    if (!(c.horizon >= 0.0) || !std::isfinite(c.horizon)) throw ConfigError("config.horizon: expected a finite T >= 0");
    c.replicates = unsigned_or(j, "replicates", "config", c.replicates);
    if (c.replicates == 0) throw ConfigError("config.replicates: expected at least 1");
    c.seed = unsigned_or(j, "seed", "config", c.seed);
    c.grid = unsigned_or(j, "grid", "config", c.grid);
    if (c.grid == 0) throw ConfigError("config.grid: expected at least 1 interval");
    if (j.contains("eps")) {
        c.eps = number(j, "eps", "config");
        if (!(*c.eps > 0.0)) throw ConfigError("config.eps: expected eps > 0");
    }
    c.n0 = number_or(j, "n0", "config", c.n0);
    if (!(c.n0 > 0.0)) throw ConfigError("config.n0: expected N0 > 0");
    if (j.contains("frequencies")) {
        const auto& f = j.at("frequencies");
        if (!f.is_array() || f.empty()) throw ConfigError("config.frequencies: expected a non-empty list");
        c.frequencies.clear();
        double sum = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!f[i].is_number() || f[i].get<double>() < 0.0) {
                throw ConfigError("config.frequencies[" + std::to_string(i) + "]: expected a number >= 0");
            }
            c.frequencies.push_back(f[i].get<double>());
            sum += c.frequencies.back();
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("config.frequencies: must sum to 1");
    }
    c.levels = unsigned_or(j, "levels", "config", c.levels);
    if (c.levels == 0) throw ConfigError("config.levels: expected at least 1");
    c.m = unsigned_or(j, "m", "config", c.m);
    if (c.m == 0) throw ConfigError("config.m: expected at least 1");
    c.y = unsigned_or(j, "y", "config", c.y);
    if (c.y == 0) throw ConfigError("config.y: expected at least 1");
    c.x = number_or(j, "x", "config", c.x);
    if (!(c.x >= 0.0 && c.x <= 1.0)) throw ConfigError("config.x: expected 0 <= x <= 1");
    if (j.contains("out")) c.out = string_field(j, "out", "config");
    return c;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
    }
}

json run_config_to_json(const RunConfig& c) {
    json j{{"characteristic", characteristic_to_json(c.characteristic)},
           {"experiment", to_string(c.experiment)},
           {"horizon", c.horizon},
           {"replicates", c.replicates},
           {"seed", c.seed},
           {"grid", c.grid},
           {"n0", c.n0},
           {"frequencies", c.frequencies},
           {"levels", c.levels},
           {"m", c.m},
           {"y", c.y},
           {"x", c.x},
           {"out", c.out}};
    if (c.eps) j["eps"] = *c.eps;
    return j;
}

void write_popsize_csv(std::ostream& out, const PopPath& path) {
    out << "t,N,jump_flag,z_d,z_b\n";
    std::size_t g = 0;
    auto grid_row = [&](const GridSample& s) { out << format_double(s.t) << ',' << format_double(s.n) << ",0,0,0\n"; };
    for (const auto& j : path.jumps) {
        while (g < path.grid.size() && path.grid[g].t < j.t) grid_row(path.grid[g++]);
        out << format_double(j.t) << ',' << format_double(j.n_after) << ",1," << format_double(j.z.death) << ','
            << format_double(j.z.birth) << '\n';
    }
    while (g < path.grid.size()) grid_row(path.grid[g++]);
}

void write_trajectory_csv(std::ostream& out, const ForwardPath& path) {
    std::set<double> types;
    for (const auto& [t, m] : path.snapshots) {
        for (const auto& a : m.atoms) types.insert(a.type);
    }
    out << "t,N";
    for (double k : types) out << ",mass_" << format_double(k);
    out << '\n';
    for (const auto& [t, m] : path.snapshots) {
        out << format_double(t) << ',' << format_double(m.total);
        for (double k : types) out << ',' << format_double(m.mass_of(k));
        out << '\n';
    }
}

void write_prelimit_csv(std::ostream& out, const IbPath& path) {
    out << "# m=" << path.m << '\n';
    out << "t,N,N_scaled,w\n";
    for (const auto& s : path.grid) {
        out << format_double(s.t) << ',' << s.count << ',' << format_double(s.scaled) << ',' << format_double(s.w)
            << '\n';
    }
}

void write_lookdown_events_csv(std::ostream& out, const LookdownPath& path) {
    out << "t,z_d,z_b,zbar,J\n";
    for (const auto& e : path.events) {
        out << format_double(e.t) << ',' << format_double(e.z.death) << ',' << format_double(e.z.birth) << ','
            << format_double(e.zbar) << ',';
        for (std::size_t i = 0; i < e.marked.size(); ++i) out << (i ? ";" : "") << e.marked[i];
        out << '\n';
    }
}

}  // namespace gpfv
