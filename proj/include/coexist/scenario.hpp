#ifndef COEXIST_SCENARIO_HPP
#define COEXIST_SCENARIO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coexist {

enum class Placement { BandEdge, BandCenter, Custom };
enum class PropagationDirection { CoPropagating, CounterPropagating };

std::string_view to_string(Placement p);
std::string_view to_string(PropagationDirection d);
Placement parse_placement(std::string_view s);
PropagationDirection parse_direction(std::string_view s);

struct ClassicalChannel {
    int slot = 0;            // 1-based
    double power_w = 0.0;    // launch power P_h(0)
    double kurtosis = 0.0;   // excess kurtosis of the constellation
    std::string format = "gaussian";
};

/// Excess kurtosis for a named modulation format ("gaussian", "qpsk",
/// "16qam", "64qam", "256qam"; case-insensitive). Throws on unknown names.
double format_kurtosis(std::string_view format);

// Slot frequency of the high-frequency band edge (~1530 nm).
inline constexpr double kDefaultTopSlotHz = 195.9375e12;
inline constexpr double kDefaultSpacingHz = 50e9;
inline constexpr int kDefaultSlots = 88;
inline constexpr double kDefaultBandStartHz =
    kDefaultTopSlotHz - (kDefaultSlots - 1) * kDefaultSpacingHz;

/// A DWDM grid with one quantum slot and a set of classical channels.
/// Value type: every operation below returns a modified copy.
class ChannelPlan {
public:
    ChannelPlan() = default;

    int n_slots() const { return n_slots_; }
    double spacing() const { return spacing_; }
    double band_start() const { return band_start_; }
    std::optional<int> quantum_slot() const { return quantum_slot_; }
    int guardband() const { return guardband_; }
    Placement placement() const { return placement_; }
    const std::vector<ClassicalChannel>& classical() const { return classical_; }

    double frequency(int slot) const;
    bool in_grid(int slot) const { return slot >= 1 && slot <= n_slots_; }
    /// True if `slot` lies within the guardband region of the quantum channel.
    bool in_guardband(int slot) const;
    const ClassicalChannel* channel_at(int slot) const;
    double total_classical_power() const;

    /// Default band-center slot (n/2, i.e. Ch 44 on the 88-slot grid).
    int center_slot() const { return n_slots_ / 2; }

    ChannelPlan with_quantum_slot(int slot, Placement placement) const;
    ChannelPlan with_placement(Placement placement) const;  // edge -> n_slots, center -> n/2
    ChannelPlan with_channels(std::vector<ClassicalChannel> channels) const;

    friend ChannelPlan build_grid(int n_slots, double spacing, double band_start);
    friend ChannelPlan apply_guardband(const ChannelPlan& plan, int n_gb);

private:
    void validate_channels() const;

    int n_slots_ = 0;
    double spacing_ = 0.0;
    double band_start_ = 0.0;
    std::optional<int> quantum_slot_;
    std::vector<ClassicalChannel> classical_;  // sorted by slot
    int guardband_ = 0;
    Placement placement_ = Placement::Custom;
};

ChannelPlan build_grid(int n_slots = kDefaultSlots, double spacing = kDefaultSpacingHz,
                       double band_start = kDefaultBandStartHz);

/// Fills every non-quantum, non-guardband slot with one channel at the given power.
ChannelPlan load_uniform(const ChannelPlan& plan, double power_per_channel_w, double kurtosis = 0.0,
                         std::string format = "gaussian");

/// Clears classical channels within n_gb slots on each side of the quantum
/// channel. Sides that fall off the grid are simply absent.
ChannelPlan apply_guardband(const ChannelPlan& plan, int n_gb);

/// Percentage of grid slots given up to guardbands (counted, not by formula).
double capacity_loss(const ChannelPlan& plan);

}  // namespace coexist

#endif  // COEXIST_SCENARIO_HPP
