#include "coexist/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coexist {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(Placement p) {
    switch (p) {
        case Placement::BandEdge: return "edge";
        case Placement::BandCenter: return "center";
        case Placement::Custom: return "custom";
    }
    return "custom";
}

std::string_view to_string(PropagationDirection d) {
    return d == PropagationDirection::CoPropagating ? "co" : "counter";
}

Placement parse_placement(std::string_view s) {
    const auto v = lower(s);
    if (v == "edge" || v == "band-edge" || v == "bandedge") return Placement::BandEdge;
    if (v == "center" || v == "centre" || v == "band-center" || v == "bandcenter")
        return Placement::BandCenter;
    if (v == "custom") return Placement::Custom;
    throw std::invalid_argument("unknown placement '" + std::string(s) +
                                "' (expected edge, center or custom)");
}

PropagationDirection parse_direction(std::string_view s) {
    const auto v = lower(s);
    if (v == "co" || v == "co-prop" || v == "forward" || v == "fw")
        return PropagationDirection::CoPropagating;
    if (v == "counter" || v == "counter-prop" || v == "backward" || v == "bw")
        return PropagationDirection::CounterPropagating;
    throw std::invalid_argument("unknown direction '" + std::string(s) +
                                "' (expected co or counter)");
}

double format_kurtosis(std::string_view format) {
    // Phi = E|a|^4 / (E|a|^2)^2 - 2 for the unit-energy constellation.
    const auto v = lower(format);
    if (v == "gaussian") return 0.0;
    if (v == "qpsk" || v == "4qam") return -1.0;
    if (v == "16qam") return -0.68;
    if (v == "64qam") return -0.619047619047619;
    if (v == "256qam") return -0.6047058823529412;
    throw std::invalid_argument("unknown modulation format '" + std::string(format) + "'");
}

double ChannelPlan::frequency(int slot) const {
    if (!in_grid(slot))
        throw std::out_of_range("slot " + std::to_string(slot) + " outside grid [1, " +
                                std::to_string(n_slots_) + "]");
    return band_start_ + (slot - 1) * spacing_;
}

bool ChannelPlan::in_guardband(int slot) const {
    if (!quantum_slot_ || guardband_ <= 0) return false;
    const int d = std::abs(slot - *quantum_slot_);
    return d >= 1 && d <= guardband_;
}

const ClassicalChannel* ChannelPlan::channel_at(int slot) const {
    auto it = std::lower_bound(classical_.begin(), classical_.end(), slot,
                               [](const ClassicalChannel& c, int s) { return c.slot < s; });
    if (it != classical_.end() && it->slot == slot) return &*it;
    return nullptr;
}

double ChannelPlan::total_classical_power() const {
    double total = 0.0;
    for (const auto& c : classical_) total += c.power_w;
    return total;
}

ChannelPlan ChannelPlan::with_quantum_slot(int slot, Placement placement) const {
    if (!in_grid(slot))
        throw std::invalid_argument("quantum slot " + std::to_string(slot) + " outside grid [1, " +
                                    std::to_string(n_slots_) + "]");
    ChannelPlan out = *this;
    out.quantum_slot_ = slot;
    out.placement_ = placement;
    std::erase_if(out.classical_, [slot](const ClassicalChannel& c) { return c.slot == slot; });
    return out;
}

ChannelPlan ChannelPlan::with_placement(Placement placement) const {
    switch (placement) {
        case Placement::BandEdge: return with_quantum_slot(n_slots_, placement);
        case Placement::BandCenter: return with_quantum_slot(center_slot(), placement);
        case Placement::Custom: break;
    }
    if (!quantum_slot_) throw std::invalid_argument("custom placement needs an explicit slot");
    return with_quantum_slot(*quantum_slot_, placement);
}

ChannelPlan ChannelPlan::with_channels(std::vector<ClassicalChannel> channels) const {
    ChannelPlan out = *this;
    std::sort(channels.begin(), channels.end(),
              [](const ClassicalChannel& a, const ClassicalChannel& b) { return a.slot < b.slot; });
    out.classical_ = std::move(channels);
    out.validate_channels();
    return out;
}

void ChannelPlan::validate_channels() const {
    for (std::size_t i = 0; i < classical_.size(); ++i) {
        const auto& c = classical_[i];
        if (!in_grid(c.slot))
            throw std::invalid_argument("classical channel slot " + std::to_string(c.slot) +
                                        " outside grid");
        if (quantum_slot_ && c.slot == *quantum_slot_)
            throw std::invalid_argument("classical channel placed on quantum slot " +
                                        std::to_string(c.slot));
        if (!(c.power_w > 0.0) || !std::isfinite(c.power_w))
            throw std::invalid_argument("classical channel " + std::to_string(c.slot) +
                                        ": launch power must be > 0");
        if (!(c.kurtosis >= -2.0))
            throw std::invalid_argument("classical channel " + std::to_string(c.slot) +
                                        ": kurtosis must be >= -2");
        if (i > 0 && classical_[i - 1].slot == c.slot)
            throw std::invalid_argument("duplicate classical channel on slot " +
                                        std::to_string(c.slot));
    }
}

ChannelPlan build_grid(int n_slots, double spacing, double band_start) {
    if (n_slots < 2) throw std::invalid_argument("grid needs at least 2 slots, got " +
                                                 std::to_string(n_slots));
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw std::invalid_argument("grid spacing must be a positive frequency");
    if (!(band_start > 0.0) || !std::isfinite(band_start))
        throw std::invalid_argument("band start must be a positive frequency");
    ChannelPlan plan;
    plan.n_slots_ = n_slots;
    plan.spacing_ = spacing;
    plan.band_start_ = band_start;
    return plan;
}

ChannelPlan load_uniform(const ChannelPlan& plan, double power_per_channel_w, double kurtosis,
                         std::string format) {
    if (!plan.quantum_slot()) throw std::invalid_argument("load_uniform: quantum slot not set");
    std::vector<ClassicalChannel> channels;
    for (int s = 1; s <= plan.n_slots(); ++s) {
        if (s == *plan.quantum_slot() || plan.in_guardband(s)) continue;
        channels.push_back({s, power_per_channel_w, kurtosis, format});
    }
    return plan.with_channels(std::move(channels));
}

ChannelPlan apply_guardband(const ChannelPlan& plan, int n_gb) {
    if (!plan.quantum_slot()) throw std::invalid_argument("apply_guardband: quantum slot not set");
    if (n_gb < 0) throw std::invalid_argument("guardband size must be >= 0");
    ChannelPlan out = plan;
    out.guardband_ = std::max(plan.guardband_, std::min(n_gb, plan.n_slots_));
    std::erase_if(out.classical_, [&out](const ClassicalChannel& c) { return out.in_guardband(c.slot); });
    return out;
}

double capacity_loss(const ChannelPlan& plan) {
    if (!plan.quantum_slot()) throw std::invalid_argument("capacity_loss: quantum slot not set");
    int cleared = 0;
    for (int s = 1; s <= plan.n_slots(); ++s)
        if (plan.in_guardband(s)) ++cleared;
    return 100.0 * cleared / plan.n_slots();
}

}  // namespace coexist
