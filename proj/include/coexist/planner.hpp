#ifndef COEXIST_PLANNER_HPP
#define COEXIST_PLANNER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coexist/interference.hpp"
#include "coexist/keyrate.hpp"
#include "coexist/scenario.hpp"
#include "coexist/units.hpp"

namespace coexist {

/// Everything needed to evaluate one operating point.
struct Scenario {
    ChannelPlan grid = build_grid();
    Placement placement = Placement::BandEdge;
    int quantum_slot = kDefaultSlots;  // used when placement is Custom
    double kurtosis = 0.0;
    std::string format = "gaussian";
    FiberParams fiber = FiberParams::metro_default();
    QkdParams qkd;
    double power_w = dbm_to_watts(-1.5);  // per channel; 0 leaves the grid dark
    int n_gb = 0;
    PropagationDirection direction = PropagationDirection::CoPropagating;
    MechanismToggles toggles;

    int resolved_quantum_slot() const;
    /// Grid with quantum slot, guardband and uniform loading applied.
    ChannelPlan plan() const;

    Scenario at_power_dbm(double dbm) const;
    Scenario at_distance_km(double km) const;
    Scenario with_guardband(int n) const;
    Scenario with_direction(PropagationDirection d) const;
    Scenario with_toggles(MechanismToggles t) const;
    Scenario with_placement(Placement p, std::optional<int> slot = std::nullopt) const;
    Scenario with_raman_scale(double scale) const;
};

struct PointResult {
    KeyRateResult key;
    InterferenceBreakdown breakdown;
    double xi = 0.0;
    double transmittance = 1.0;
    double capacity_loss = 0.0;
    int quantum_slot = 0;
};

PointResult evaluate(const Scenario& s);

enum class SweepKind { Spectral, Guardband, Tradeoff, Reach, Transition };
std::string_view to_string(SweepKind k);

struct SweepRow {
    double x = 0.0;
    double skr_bps = 0.0;
    double skr_bits = 0.0;
    double xi = 0.0;
    double transmittance = 1.0;
    InterferenceBreakdown breakdown;
    double capacity_loss = 0.0;
    PropagationDirection direction = PropagationDirection::CoPropagating;
};

struct SweepResult {
    SweepKind kind = SweepKind::Spectral;
    std::string label;   // file stem, e.g. "spectral_fwm_only"
    std::string x_name;  // first CSV column
    std::vector<SweepRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// Quantum channel moved across every slot, remaining slots uniformly loaded.
SweepResult sweep_spectral(const Scenario& base, MechanismToggles toggles);
/// FWM-only, SpRS-only and combined spectral series.
std::vector<SweepResult> sweep_spectral_all(const Scenario& base);

/// SKR against guardband size 0..max_gb, one series per power.
std::vector<SweepResult> sweep_guardband(const Scenario& base, const std::vector<double>& powers_dbm,
                                         int max_gb = 10);

/// One series per (placement, direction); capacity loss follows the placement.
std::vector<SweepResult> sweep_tradeoff(const Scenario& base, const std::vector<Placement>& placements,
                                        const std::vector<PropagationDirection>& directions,
                                        int max_gb = 10);

/// SKR against distance on a uniform km grid starting at step_km.
SweepResult sweep_distance(const Scenario& base, double max_km = 30.0, double step_km = 0.25);

struct ReachOptions {
    double skr_floor_bps = 0.0;
    double max_km = 30.0;
    double step_km = 0.25;
    double tolerance_km = 0.01;
};

/// End of the contiguous SKR > floor region that starts at the first grid
/// step; 0 if the first step already fails.
double reach(const Scenario& base, const ReachOptions& options = {});

struct TransitionResult {
    bool found = false;
    double power_dbm = 0.0;  // valid when found
    double lower_dbm = -20.0;
    double upper_dbm = 10.0;
};

/// Per-channel power where FWM-only and SpRS-only interference are equal.
TransitionResult find_transition_power(const Scenario& base, double lower_dbm = -20.0,
                                       double upper_dbm = 10.0, double tolerance_db = 0.01);

struct CalibrationPoint {
    double power_dbm = -4.5;
    double distance_km = 10.0;
    Placement placement = Placement::BandEdge;
    int n_gb = 0;
    PropagationDirection direction = PropagationDirection::CoPropagating;
};

struct CalibrationResult {
    bool attainable = false;
    double scale = 0.0;
    double skr_bps = 0.0;          // at `scale`
    double target_bps = 0.0;       // window midpoint
    double achievable_min_bps = 0.0;  // over the scanned scale bracket
    double achievable_max_bps = 0.0;  // SKR with zero Raman scattering
    Scenario calibrated;
};

/// Bisection on the Raman scale so the reference point lands at the
/// midpoint of the window.
CalibrationResult calibrate_raman(const Scenario& base, std::pair<double, double> window_bps,
                                  const CalibrationPoint& point = {});

struct GuardbandRecommendation {
    bool feasible = false;
    int n_gb = 0;
    double skr_bps = 0.0;
    double capacity_loss = 0.0;
    double best_skr_bps = 0.0;  // max over the budget-feasible sizes
    std::vector<double> skr_by_gb;
};

/// Smallest guardband within the capacity budget whose SKR reaches 99% of
/// the best budget-feasible SKR.
GuardbandRecommendation recommend_guardband(const Scenario& base, double capacity_budget_percent,
                                            int max_gb = 10);

}  // namespace coexist

#endif  // COEXIST_PLANNER_HPP
