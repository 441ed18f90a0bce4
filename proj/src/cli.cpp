#include "coexist/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "coexist/config.hpp"
#include "coexist/csv.hpp"
#include "coexist/planner.hpp"
#include "json.hpp"

namespace coexist {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Flags {
    std::string config_path;
    std::optional<std::string> power;
    std::optional<double> distance_km;
    std::optional<int> guardband;
    std::optional<std::string> direction;
    std::optional<std::string> toggles;
    std::optional<std::string> out_dir;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Collects written files and result records for the manifest.
class Run {
public:
    Run(const RunConfig& config, std::string command, std::ostream& out)
        : config_(config), command_(std::move(command)), out_(out), dir_(config.output.directory) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_))
            throw std::runtime_error(dir_.string() + ": output directory not writable");
    }

    int precision() const { return config_.output.precision; }

    void emit(const std::string& stem, const CsvSeries& csv,
              const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
        const std::string name = stem + ".csv";
        write_file(dir_ / name, render(csv));
        files_.push_back(name);
        ordered_json meta = ordered_json::object();
        for (const auto& [k, v] : metadata) meta[k] = v;
        series_[name] = meta;
        out_ << "wrote " << (dir_ / name).string() << '\n';
    }

    void emit(const SweepResult& sweep, const std::string& prefix = "") {
        emit(prefix + sweep.label, to_csv(sweep, precision()), sweep.metadata);
    }

    void result(const std::string& key, ordered_json value) { results_[key] = std::move(value); }

    void finish() {
        ordered_json m;
        m["command"] = command_;
        m["scenario_hash"] = config_.scenario_hash();
        m["config"] = ordered_json::parse(config_.canonical_json());
        std::vector<std::string> sorted = files_;
        std::sort(sorted.begin(), sorted.end());
        m["files"] = sorted;
        ordered_json series = ordered_json::object();
        for (const auto& f : sorted) series[f] = series_[f];
        m["series"] = series;
        m["results"] = results_;
        write_file(dir_ / "run_manifest.json", m.dump(2) + "\n");
    }

private:
    const RunConfig& config_;
    std::string command_;
    std::ostream& out_;
    fs::path dir_;
    std::vector<std::string> files_;
    std::map<std::string, ordered_json> series_;
    ordered_json results_ = ordered_json::object();
};

std::string fmt(double v, int precision = 9) { return format_number(v, precision); }

void apply(RunConfig& c, const Flags& f) {
    try {
        if (f.power) c.scenario.power_dbm = parse_power_dbm(*f.power);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--power: ") + e.what());
    }
    if (f.distance_km) c.scenario.distance_km = *f.distance_km;
    if (f.guardband) c.scenario.guardband = *f.guardband;
    try {
        if (f.direction) c.scenario.direction = parse_direction(*f.direction);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--direction: ") + e.what());
    }
    try {
        if (f.toggles) c.sweep.toggles = parse_toggles(*f.toggles);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--toggles: ") + e.what());
    }
    if (f.out_dir) c.output.directory = *f.out_dir;
    c.validate();
}

std::vector<PropagationDirection> directions(const Flags& f, const RunConfig& c) {
    if (f.direction) return {c.scenario.direction};
    return {PropagationDirection::CoPropagating, PropagationDirection::CounterPropagating};
}

std::vector<double> powers(const Flags& f, const RunConfig& c, const std::vector<double>& preset) {
    if (f.power) return {c.scenario.power_dbm};
    return preset;
}

void do_spectral(Run& run, const Scenario& base, double power_dbm, const std::string& prefix = "") {
    for (const auto& s : sweep_spectral_all(base.at_power_dbm(power_dbm))) run.emit(s, prefix);
}

void do_guardband(Run& run, const Scenario& base, const std::vector<double>& p, int max_gb,
                  const std::string& prefix = "") {
    for (const auto& s : sweep_guardband(base, p, max_gb)) run.emit(s, prefix);
}

void do_tradeoff(Run& run, const Scenario& base, double power_dbm, const std::vector<PropagationDirection>& dirs,
                 int max_gb, const std::string& prefix = "") {
    const auto series =
        sweep_tradeoff(base.at_power_dbm(power_dbm), {Placement::BandEdge, Placement::BandCenter}, dirs, max_gb);
    for (const auto& s : series) run.emit(s, prefix);
}

struct ReachRow {
    double power_dbm;
    int n_gb;
    PropagationDirection direction;
    double reach_km;
};

CsvSeries reach_table(const std::vector<ReachRow>& rows, int precision) {
    CsvSeries csv;
    csv.header = {"Power_dBm", "QSpace", "Direction", "Reach_km"};
    for (const auto& r : rows)
        csv.rows.push_back({fmt(r.power_dbm, precision), std::to_string(r.n_gb), std::string(to_string(r.direction)),
                            fmt(r.reach_km, precision)});
    return csv;
}

ordered_json reach_json(const std::vector<ReachRow>& rows) {
    ordered_json a = ordered_json::array();
    for (const auto& r : rows)
        a.push_back({{"power_dbm", r.power_dbm},
                     {"guardband", r.n_gb},
                     {"direction", std::string(to_string(r.direction))},
                     {"reach_km", r.reach_km}});
    return a;
}

std::vector<ReachRow> do_reach(const RunConfig& c, const Scenario& base, const std::vector<double>& p,
                               const std::vector<int>& gbs, const std::vector<PropagationDirection>& dirs) {
    const ReachOptions opt{c.sweep.skr_floor_bps, c.sweep.distance_max_km, c.sweep.distance_step_km, 0.01};
    std::vector<ReachRow> rows;
    for (double pw : p)
        for (int g : gbs)
            for (auto d : dirs)
                rows.push_back({pw, g, d, reach(base.at_power_dbm(pw).with_guardband(g).with_direction(d), opt)});
    return rows;
}

void do_fig1(Run& run, const RunConfig& c, const Scenario& base) {
    do_spectral(run, base, c.sweep.spectral_power_dbm, "fig1a_");
    do_guardband(run, base, c.sweep.powers_dbm, c.sweep.guardband_max, "fig1b_");
    do_tradeoff(run, base, c.sweep.tradeoff_power_dbm,
                {PropagationDirection::CoPropagating, PropagationDirection::CounterPropagating},
                c.sweep.guardband_max, "fig1c_");

    const std::vector<PropagationDirection> both{PropagationDirection::CoPropagating,
                                                 PropagationDirection::CounterPropagating};
    for (double pw : c.sweep.reach_powers_dbm) {
        for (int g : c.sweep.reach_guardbands) {
            const Scenario s = base.at_power_dbm(pw).with_guardband(g);
            const auto fw = sweep_distance(s.with_direction(PropagationDirection::CoPropagating),
                                           c.sweep.distance_max_km, c.sweep.distance_step_km);
            const auto bw = sweep_distance(s.with_direction(PropagationDirection::CounterPropagating),
                                           c.sweep.distance_max_km, c.sweep.distance_step_km);
            auto meta = fw.metadata;
            meta.erase(std::remove_if(meta.begin(), meta.end(), [](const auto& kv) { return kv.first == "direction"; }),
                       meta.end());
            run.emit("fig1d_distance_" + fmt(pw, 6) + "dBm_gb" + std::to_string(g),
                     merge_directions(fw, bw, run.precision()), meta);
        }
    }
    const auto rows = do_reach(c, base, c.sweep.reach_powers_dbm, c.sweep.reach_guardbands, both);
    run.emit("fig1d_reach", reach_table(rows, run.precision()));
    run.result("reach", reach_json(rows));
}

int dispatch(const std::string& cmd, const Flags& flags, RunConfig c, std::ostream& out, std::ostream& err) {
    apply(c, flags);
    Scenario base = c.to_scenario();
    Run run(c, cmd, out);
    const int prec = c.output.precision;

    if (cmd == "spectral") {
        do_spectral(run, base, flags.power ? c.scenario.power_dbm : c.sweep.spectral_power_dbm);
    } else if (cmd == "guardband") {
        do_guardband(run, base, powers(flags, c, c.sweep.powers_dbm), c.sweep.guardband_max);
    } else if (cmd == "tradeoff") {
        do_tradeoff(run, base, flags.power ? c.scenario.power_dbm : c.sweep.tradeoff_power_dbm, directions(flags, c),
                    c.sweep.guardband_max);
    } else if (cmd == "reach") {
        const std::vector<int> gbs = flags.guardband ? std::vector<int>{c.scenario.guardband} : c.sweep.reach_guardbands;
        const auto rows = do_reach(c, base, powers(flags, c, c.sweep.reach_powers_dbm), gbs, directions(flags, c));
        run.emit("reach", reach_table(rows, prec));
        run.result("reach", reach_json(rows));
        for (const auto& r : rows)
            out << "reach power=" << fmt(r.power_dbm, prec) << " dBm gb=" << r.n_gb
                << " direction=" << to_string(r.direction) << " -> " << fmt(r.reach_km, prec) << " km\n";
    } else if (cmd == "transition") {
        const auto t = find_transition_power(base);
        CsvSeries csv;
        csv.header = {"Distance_km", "Transition_dBm", "Found"};
        csv.rows.push_back({fmt(c.scenario.distance_km, prec), t.found ? fmt(t.power_dbm, prec) : "nan",
                            t.found ? "1" : "0"});
        run.emit("transition", csv);
        run.result("transition", {{"found", t.found}, {"power_dbm", t.found ? ordered_json(t.power_dbm) : nullptr}});
        if (t.found)
            out << "transition at " << fmt(t.power_dbm, prec) << " dBm/ch\n";
        else
            out << "no transition in [" << fmt(t.lower_dbm) << ", " << fmt(t.upper_dbm) << "] dBm/ch\n";
    } else if (cmd == "calibrate") {
        CalibrationPoint point;
        if (flags.power) point.power_dbm = c.scenario.power_dbm;
        if (flags.distance_km) point.distance_km = c.scenario.distance_km;
        if (flags.guardband) point.n_gb = c.scenario.guardband;
        if (flags.direction) point.direction = c.scenario.direction;
        const auto r = calibrate_raman(base, c.sweep.calibration_window_bps, point);
        CsvSeries csv;
        csv.header = {"Scale", "SKR_bps", "Target_bps", "Achievable_min_bps", "Achievable_max_bps", "Attainable"};
        csv.rows.push_back({fmt(r.scale, 17), fmt(r.skr_bps, prec), fmt(r.target_bps, prec),
                            fmt(r.achievable_min_bps, prec), fmt(r.achievable_max_bps, prec),
                            r.attainable ? "1" : "0"});
        run.emit("calibration", csv);
        run.result("calibration", {{"attainable", r.attainable},
                                   {"scale", r.scale},
                                   {"skr_bps", r.skr_bps},
                                   {"achievable_max_bps", r.achievable_max_bps}});
        run.finish();
        if (!r.attainable) {
            err << "calibrate: window [" << fmt(c.sweep.calibration_window_bps.first, prec) << ", "
                << fmt(c.sweep.calibration_window_bps.second, prec)
                << "] bit/s is not attainable; SKR without Raman scattering is only "
                << fmt(r.achievable_max_bps, prec) << " bit/s\n";
            return kExitInfeasible;
        }
        out << "raman scale " << fmt(r.scale, 17) << " gives " << fmt(r.skr_bps, prec) << " bit/s\n";
        return kExitOk;
    } else if (cmd == "fig1") {
        do_fig1(run, c, base);
    } else {
        throw ModelError("unknown sweep kind '" + cmd + "'");
    }
    run.finish();
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coexistence planner for CV-QKD over DWDM fiber", args.empty() ? "coexist" : args.front()};
    app.fallthrough();
    Flags flags;
    bool seedless = false;
    app.add_option("-c,--config", flags.config_path, "JSON run configuration (defaults if omitted)");
    app.add_option("--power", flags.power, "per-channel launch power, dBm or value with unit (mW, W)");
    app.add_option("--distance", flags.distance_km, "fiber length in km")->check(CLI::NonNegativeNumber);
    app.add_option("--gb", flags.guardband, "guardband size in slots per side")->check(CLI::NonNegativeNumber);
    app.add_option("--direction", flags.direction, "co or counter");
    app.add_option("--toggles", flags.toggles, "comma list of mechanisms: fwm,sprs");
    app.add_option("--out", flags.out_dir, "output directory");
    app.add_flag("--seedless", seedless, "deterministic mode (always on)");

    const char* names[][2] = {{"spectral", "SKR against quantum-channel slot, per mechanism"},
                              {"guardband", "SKR against guardband size, per power"},
                              {"tradeoff", "SKR and capacity loss, edge vs center placement"},
                              {"reach", "maximum distance with positive key"},
                              {"transition", "power where FWM overtakes SpRS"},
                              {"calibrate", "fit the Raman scale to an SKR window"},
                              {"fig1", "all four figure panel presets"}};
    for (const auto& n : names) app.add_subcommand(n[0], n[1]);
    app.require_subcommand(0, 1);

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig config = flags.config_path.empty() ? RunConfig{} : parse_config(flags.config_path);
        std::string cmd;
        if (!app.get_subcommands().empty())
            cmd = app.get_subcommands().front()->get_name();
        else if (config.sweep.kind)
            cmd = std::string(to_string(*config.sweep.kind));
        else {
            err << "error: no subcommand given and sweep.kind not set\n" << app.help();
            return kExitUsage;
        }
        return dispatch(cmd, flags, std::move(config), out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace coexist
