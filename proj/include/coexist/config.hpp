#ifndef COEXIST_CONFIG_HPP
#define COEXIST_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coexist/planner.hpp"

namespace coexist {

/// Raised for unreadable, malformed or out-of-range configuration. The
/// message starts with the dotted key path, e.g. "qkd.eta_b: ...".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parsed run configuration. Engineering units as written in the file; the
/// SI conversion happens in to_scenario().
struct RunConfig {
    struct Fiber {
        double alpha_db_per_km = 0.2;
        double beta2_ps2_per_km = -21.7;
        double gamma_per_w_km = 1.3;
        double temperature_k = 300.0;
        std::string raman_profile_csv;         // empty: built-in profile
        std::optional<double> raman_scale;     // unset: built-in calibrated scale
    } fiber;
    struct Grid {
        int n_slots = kDefaultSlots;
        double spacing_ghz = kDefaultSpacingHz / 1e9;
        std::optional<double> band_start_thz;  // unset: top slot at 195.9375 THz
    } grid;
    struct Qkd {
        double v_a = 8.0;
        double eta_b = 0.6;
        double beta = 0.95;
        double v_el = 0.01;
        double b_s_ghz = 32.0;
        double r_s = 5e8;
    } qkd;
    struct ScenarioBlock {
        Placement placement = Placement::BandEdge;
        std::optional<int> quantum_slot;
        int guardband = 0;
        double power_dbm = -1.5;
        std::optional<double> kurtosis;  // unset: from format
        std::string format = "gaussian";
        PropagationDirection direction = PropagationDirection::CoPropagating;
        double distance_km = 10.0;
    } scenario;
    struct Sweep {
        std::optional<SweepKind> kind;
        int guardband_max = 10;
        double distance_max_km = 30.0;
        double distance_step_km = 0.25;
        std::vector<double> powers_dbm{0.5, -1.5, -4.5};
        double spectral_power_dbm = -4.5;
        double tradeoff_power_dbm = -1.5;
        std::vector<double> reach_powers_dbm{0.5, -4.5};
        std::vector<int> reach_guardbands{0, 3};
        MechanismToggles toggles;
        double skr_floor_bps = 0.0;
        double capacity_budget_percent = 5.0;
        std::pair<double, double> calibration_window_bps{95e6, 105e6};
    } sweep;
    struct Output {
        std::string directory = "out";
        int precision = 9;
    } output;

    Scenario to_scenario() const;
    /// Canonical JSON text with every default filled in.
    std::string canonical_json() const;
    /// 64-bit FNV-1a of canonical_json() minus output.directory, as 16 hex digits.
    std::string scenario_hash() const;
    void validate() const;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Accepts a number (dBm) or a string with unit: "-1.5 dBm", "0.7 mW", "1e-3 W".
double parse_power_dbm(const std::string& text);

MechanismToggles parse_toggles(const std::string& csv);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace coexist

#endif  // COEXIST_CONFIG_HPP
