#include "coexist/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace coexist {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Reads keys out of one JSON table and rejects anything left over.
class Table {
public:
    Table(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected a table");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) out = as_number(*v, join(path_, key));
    }
    void number(const std::string& key, std::optional<double>& out) {
        if (const json* v = find(key)) out = as_number(*v, join(path_, key));
    }
    void integer(const std::string& key, int& out) {
        if (const json* v = find(key)) out = as_integer(*v, join(path_, key));
    }
    void integer(const std::string& key, std::optional<int>& out) {
        if (const json* v = find(key)) out = as_integer(*v, join(path_, key));
    }
    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) out = as_string(*v, join(path_, key));
    }
    void power(const std::string& key, double& out) {
        if (const json* v = find(key)) out = as_power(*v, join(path_, key));
    }
    void powers(const std::string& key, std::vector<double>& out) {
        const json* v = find(key);
        if (!v) return;
        const auto p = join(path_, key);
        if (!v->is_array()) fail(p, "expected a list");
        out.clear();
        for (std::size_t i = 0; i < v->size(); ++i)
            out.push_back(as_power((*v)[i], p + "[" + std::to_string(i) + "]"));
    }
    void integers(const std::string& key, std::vector<int>& out) {
        const json* v = find(key);
        if (!v) return;
        const auto p = join(path_, key);
        if (!v->is_array()) fail(p, "expected a list");
        out.clear();
        for (std::size_t i = 0; i < v->size(); ++i)
            out.push_back(as_integer((*v)[i], p + "[" + std::to_string(i) + "]"));
    }
    template <typename Fn>
    void sub(const std::string& key, Fn fn) {
        if (const json* v = find(key)) {
            Table t(*v, join(path_, key));
            fn(t);
            t.finish();
        }
    }
    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) fail(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path, "must be finite");
        return d;
    }
    static int as_integer(const json& v, const std::string& path) {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<int>();
    }
    static std::string as_string(const json& v, const std::string& path) {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }
    static double as_power(const json& v, const std::string& path) {
        if (v.is_number()) return as_number(v, path);
        if (!v.is_string()) fail(path, "expected a power in dBm (number or \"<value> dBm|mW|W\")");
        try {
            return parse_power_dbm(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename Fn>
auto with_path(const std::string& path, Fn fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

void check(bool ok, const std::string& path, const std::string& what) {
    if (!ok) fail(path, what);
}

}  // namespace

double parse_power_dbm(const std::string& text) {
    std::istringstream ss(text);
    double value = 0.0;
    if (!(ss >> value)) throw std::invalid_argument("cannot parse power '" + text + "'");
    std::string unit;
    ss >> unit;
    std::string rest;
    if (ss >> rest) throw std::invalid_argument("trailing text in power '" + text + "'");
    std::transform(unit.begin(), unit.end(), unit.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!std::isfinite(value)) throw std::invalid_argument("power must be finite");
    if (unit.empty() || unit == "dbm") return value;
    if (unit == "mw" || unit == "w") {
        if (!(value > 0.0)) throw std::invalid_argument("linear power must be > 0");
        return watts_to_dbm(unit == "mw" ? value * 1e-3 : value);
    }
    throw std::invalid_argument("unknown power unit '" + unit + "' (expected dBm, mW or W)");
}

MechanismToggles parse_toggles(const std::string& csv) {
    MechanismToggles t{false, false};
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        std::transform(item.begin(), item.end(), item.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (item == "fwm") t.fwm = true;
        else if (item == "sprs") t.sprs = true;
        else if (item == "none" || item.empty()) continue;
        else throw std::invalid_argument("unknown mechanism '" + item + "' (expected fwm, sprs)");
    }
    return t;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    json root;
    const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
    if (blank) {
        root = json::object();
    } else {
        try {
            root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
        } catch (const json::parse_error& e) {
            throw ConfigError(origin + ": malformed config: " + e.what());
        }
    }

    RunConfig c;
    Table t(root, "");
    t.sub("fiber", [&](Table& f) {
        f.number("alpha_db_per_km", c.fiber.alpha_db_per_km);
        f.number("beta2_ps2_per_km", c.fiber.beta2_ps2_per_km);
        f.number("gamma_per_w_km", c.fiber.gamma_per_w_km);
        f.number("temperature_k", c.fiber.temperature_k);
        f.string("raman_profile_csv", c.fiber.raman_profile_csv);
        f.number("raman_scale", c.fiber.raman_scale);
    });
    t.sub("grid", [&](Table& g) {
        g.integer("n_slots", c.grid.n_slots);
        g.number("spacing_ghz", c.grid.spacing_ghz);
        g.number("band_start_thz", c.grid.band_start_thz);
    });
    t.sub("qkd", [&](Table& q) {
        q.number("v_a", c.qkd.v_a);
        q.number("eta_b", c.qkd.eta_b);
        q.number("beta", c.qkd.beta);
        q.number("v_el", c.qkd.v_el);
        q.number("b_s_ghz", c.qkd.b_s_ghz);
        q.number("r_s", c.qkd.r_s);
    });
    t.sub("scenario", [&](Table& s) {
        std::string placement, direction;
        s.string("placement", placement);
        if (!placement.empty())
            c.scenario.placement = with_path(s.path("placement"), [&] { return parse_placement(placement); });
        s.integer("quantum_slot", c.scenario.quantum_slot);
        if (c.scenario.quantum_slot && placement.empty()) c.scenario.placement = Placement::Custom;
        s.integer("guardband", c.scenario.guardband);
        s.power("power_dbm", c.scenario.power_dbm);
        s.number("kurtosis", c.scenario.kurtosis);
        s.string("format", c.scenario.format);
        s.string("direction", direction);
        if (!direction.empty())
            c.scenario.direction = with_path(s.path("direction"), [&] { return parse_direction(direction); });
        s.number("distance_km", c.scenario.distance_km);
    });
    t.sub("sweep", [&](Table& s) {
        std::string kind;
        s.string("kind", kind);
        if (!kind.empty()) {
            const SweepKind kinds[] = {SweepKind::Spectral, SweepKind::Guardband, SweepKind::Tradeoff,
                                       SweepKind::Reach, SweepKind::Transition};
            auto it = std::find_if(std::begin(kinds), std::end(kinds),
                                   [&](SweepKind k) { return to_string(k) == kind; });
            if (it == std::end(kinds)) fail(s.path("kind"), "unknown sweep kind '" + kind + "'");
            c.sweep.kind = *it;
        }
        s.integer("guardband_max", c.sweep.guardband_max);
        s.number("distance_max_km", c.sweep.distance_max_km);
        s.number("distance_step_km", c.sweep.distance_step_km);
        s.powers("powers_dbm", c.sweep.powers_dbm);
        s.power("spectral_power_dbm", c.sweep.spectral_power_dbm);
        s.power("tradeoff_power_dbm", c.sweep.tradeoff_power_dbm);
        s.powers("reach_powers_dbm", c.sweep.reach_powers_dbm);
        s.integers("reach_guardbands", c.sweep.reach_guardbands);
        if (const json* v = s.find("toggles")) {
            const auto p = s.path("toggles");
            if (!v->is_array()) fail(p, "expected a list such as [\"fwm\", \"sprs\"]");
            std::string joined;
            for (const auto& item : *v) joined += Table::as_string(item, p) + ",";
            c.sweep.toggles = with_path(p, [&] { return parse_toggles(joined); });
        }
        s.number("skr_floor_bps", c.sweep.skr_floor_bps);
        s.number("capacity_budget_percent", c.sweep.capacity_budget_percent);
        if (const json* v = s.find("calibration_window_bps")) {
            const auto p = s.path("calibration_window_bps");
            if (!v->is_array() || v->size() != 2) fail(p, "expected [low, high]");
            c.sweep.calibration_window_bps = {Table::as_number((*v)[0], p + "[0]"),
                                              Table::as_number((*v)[1], p + "[1]")};
        }
    });
    t.sub("output", [&](Table& o) {
        o.string("directory", c.output.directory);
        o.integer("precision", c.output.precision);
    });
    t.finish();
    c.validate();
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

void RunConfig::validate() const {
    check(fiber.alpha_db_per_km > 0.0, "fiber.alpha_db_per_km", "must be > 0 (got " + num(fiber.alpha_db_per_km) + ")");
    check(fiber.gamma_per_w_km >= 0.0, "fiber.gamma_per_w_km", "must be >= 0");
    check(fiber.temperature_k > 0.0, "fiber.temperature_k", "must be > 0");
    if (fiber.raman_scale) check(*fiber.raman_scale >= 0.0, "fiber.raman_scale", "must be >= 0");

    check(grid.n_slots >= 2, "grid.n_slots", "must be >= 2 (got " + std::to_string(grid.n_slots) + ")");
    check(grid.spacing_ghz > 0.0, "grid.spacing_ghz", "must be > 0");
    if (grid.band_start_thz) check(*grid.band_start_thz > 0.0, "grid.band_start_thz", "must be > 0");

    const std::pair<double, const char*> positive[] = {{qkd.v_a, "qkd.v_a"},   {qkd.eta_b, "qkd.eta_b"},
                                                       {qkd.beta, "qkd.beta"},
                                                       {qkd.b_s_ghz, "qkd.b_s_ghz"}, {qkd.r_s, "qkd.r_s"}};
    for (const auto& [v, path] : positive) check(v > 0.0, path, "must be > 0 (got " + num(v) + ")");
    check(qkd.v_el >= 0.0, "qkd.v_el", "must be >= 0 (got " + num(qkd.v_el) + ")");
    check(qkd.eta_b <= 1.0, "qkd.eta_b", "must be <= 1 (got " + num(qkd.eta_b) + ")");
    check(qkd.beta <= 1.0, "qkd.beta", "must be <= 1 (got " + num(qkd.beta) + ")");

    if (scenario.quantum_slot)
        check(*scenario.quantum_slot >= 1 && *scenario.quantum_slot <= grid.n_slots, "scenario.quantum_slot",
              "must be within [1, " + std::to_string(grid.n_slots) + "]");
    check(scenario.placement != Placement::Custom || scenario.quantum_slot.has_value(), "scenario.quantum_slot",
          "required for custom placement");
    check(scenario.guardband >= 0, "scenario.guardband", "must be >= 0");
    check(scenario.distance_km >= 0.0, "scenario.distance_km", "must be >= 0");
    if (scenario.kurtosis) check(*scenario.kurtosis >= -2.0, "scenario.kurtosis", "must be >= -2");
    else with_path("scenario.format", [&] { return format_kurtosis(scenario.format); });

    check(sweep.guardband_max >= 0, "sweep.guardband_max", "must be >= 0");
    check(sweep.distance_step_km > 0.0, "sweep.distance_step_km", "must be > 0");
    check(sweep.distance_max_km >= sweep.distance_step_km, "sweep.distance_max_km", "must be >= distance_step_km");
    check(!sweep.powers_dbm.empty(), "sweep.powers_dbm", "must not be empty");
    check(!sweep.reach_powers_dbm.empty(), "sweep.reach_powers_dbm", "must not be empty");
    check(!sweep.reach_guardbands.empty(), "sweep.reach_guardbands", "must not be empty");
    for (int g : sweep.reach_guardbands) check(g >= 0, "sweep.reach_guardbands", "entries must be >= 0");
    check(sweep.skr_floor_bps >= 0.0, "sweep.skr_floor_bps", "must be >= 0");
    check(sweep.capacity_budget_percent >= 0.0, "sweep.capacity_budget_percent", "must be >= 0");
    check(sweep.calibration_window_bps.first >= 0.0 &&
              sweep.calibration_window_bps.second > sweep.calibration_window_bps.first,
          "sweep.calibration_window_bps", "must satisfy 0 <= low < high");

    check(!output.directory.empty(), "output.directory", "must not be empty");
    check(output.precision >= 1 && output.precision <= 17, "output.precision", "must be within [1, 17]");
}

Scenario RunConfig::to_scenario() const {
    validate();
    Scenario s;
    const double spacing = grid.spacing_ghz * 1e9;
    const double start = grid.band_start_thz ? *grid.band_start_thz * 1e12
                                             : kDefaultTopSlotHz - (grid.n_slots - 1) * spacing;
    s.grid = with_path("grid", [&] { return build_grid(grid.n_slots, spacing, start); });

    s.fiber = with_path("fiber", [&] {
        return FiberParams::from_engineering(fiber.alpha_db_per_km, fiber.beta2_ps2_per_km, fiber.gamma_per_w_km,
                                             scenario.distance_km, fiber.temperature_k);
    });
    if (!fiber.raman_profile_csv.empty()) {
        try {
            s.fiber.raman = RamanProfile::from_csv(fiber.raman_profile_csv, fiber.raman_scale.value_or(1.0));
        } catch (const std::exception& e) {
            fail("fiber.raman_profile_csv", e.what());
        }
    } else if (fiber.raman_scale) {
        s.fiber.raman = s.fiber.raman.with_scale(*fiber.raman_scale);
    }

    s.qkd.v_a = qkd.v_a;
    s.qkd.eta_b = qkd.eta_b;
    s.qkd.beta_rec = qkd.beta;
    s.qkd.v_el = qkd.v_el;
    s.qkd.b_s = qkd.b_s_ghz * 1e9;
    s.qkd.r_s = qkd.r_s;

    s.placement = scenario.placement;
    s.quantum_slot = scenario.quantum_slot.value_or(grid.n_slots);
    s.qkd.f_q = s.grid.frequency(s.resolved_quantum_slot());
    s.n_gb = scenario.guardband;
    s.power_w = dbm_to_watts(scenario.power_dbm);
    s.format = scenario.format;
    s.kurtosis = scenario.kurtosis ? *scenario.kurtosis : format_kurtosis(scenario.format);
    s.direction = scenario.direction;
    s.toggles = sweep.toggles;
    return s;
}

std::string RunConfig::canonical_json() const {
    json j;
    j["fiber"] = {{"alpha_db_per_km", fiber.alpha_db_per_km},
                  {"beta2_ps2_per_km", fiber.beta2_ps2_per_km},
                  {"gamma_per_w_km", fiber.gamma_per_w_km},
                  {"temperature_k", fiber.temperature_k},
                  {"raman_profile_csv", fiber.raman_profile_csv},
                  {"raman_scale", fiber.raman_scale ? json(*fiber.raman_scale) : json(nullptr)}};
    j["grid"] = {{"n_slots", grid.n_slots},
                 {"spacing_ghz", grid.spacing_ghz},
                 {"band_start_thz", grid.band_start_thz ? json(*grid.band_start_thz) : json(nullptr)}};
    j["qkd"] = {{"v_a", qkd.v_a},   {"eta_b", qkd.eta_b},     {"beta", qkd.beta},
                {"v_el", qkd.v_el}, {"b_s_ghz", qkd.b_s_ghz}, {"r_s", qkd.r_s}};
    j["scenario"] = {{"placement", std::string(to_string(scenario.placement))},
                     {"quantum_slot", scenario.quantum_slot ? json(*scenario.quantum_slot) : json(nullptr)},
                     {"guardband", scenario.guardband},
                     {"power_dbm", scenario.power_dbm},
                     {"kurtosis", scenario.kurtosis ? json(*scenario.kurtosis) : json(nullptr)},
                     {"format", scenario.format},
                     {"direction", std::string(to_string(scenario.direction))},
                     {"distance_km", scenario.distance_km}};
    json toggles = json::array();
    if (sweep.toggles.fwm) toggles.push_back("fwm");
    if (sweep.toggles.sprs) toggles.push_back("sprs");
    j["sweep"] = {{"kind", sweep.kind ? json(std::string(to_string(*sweep.kind))) : json(nullptr)},
                  {"guardband_max", sweep.guardband_max},
                  {"distance_max_km", sweep.distance_max_km},
                  {"distance_step_km", sweep.distance_step_km},
                  {"powers_dbm", sweep.powers_dbm},
                  {"spectral_power_dbm", sweep.spectral_power_dbm},
                  {"tradeoff_power_dbm", sweep.tradeoff_power_dbm},
                  {"reach_powers_dbm", sweep.reach_powers_dbm},
                  {"reach_guardbands", sweep.reach_guardbands},
                  {"toggles", toggles},
                  {"skr_floor_bps", sweep.skr_floor_bps},
                  {"capacity_budget_percent", sweep.capacity_budget_percent},
                  {"calibration_window_bps",
                   {sweep.calibration_window_bps.first, sweep.calibration_window_bps.second}}};
    j["output"] = {{"directory", output.directory}, {"precision", output.precision}};
    return j.dump(2);
}

std::string RunConfig::scenario_hash() const {
    char buf[17];
    // where the files go does not change what is in them
    json j = json::parse(canonical_json());
    j["output"].erase("directory");
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump(2))));
    return buf;
}

}  // namespace coexist
