#ifndef COEXIST_INTERFERENCE_HPP
#define COEXIST_INTERFERENCE_HPP

#include <filesystem>
#include <utility>
#include <vector>

#include "coexist/scenario.hpp"

namespace coexist {

/// Spontaneous Raman scattering density rho_R(|df|) in 1/(m Hz), tabulated
/// against detuning and linearly interpolated. Zero beyond the table.
class RamanProfile {
public:
    struct Point {
        double detuning_hz;
        double density;  // 1/(m Hz), before scale
    };

    RamanProfile() = default;
    RamanProfile(std::vector<Point> table, double scale);

    /// Silica-like shape peaking at 13.2 THz, truncated at 40 THz, with the
    /// default calibrated scale.
    static RamanProfile silica_default();
    /// Two-column CSV: detuning_Hz,density_per_m_per_Hz (header optional).
    static RamanProfile from_csv(const std::filesystem::path& path, double scale = 1.0);

    double density(double abs_detuning_hz) const;  // scaled
    double scale() const { return scale_; }
    RamanProfile with_scale(double scale) const;
    const std::vector<Point>& table() const { return table_; }
    double max_detuning() const { return table_.empty() ? 0.0 : table_.back().detuning_hz; }

private:
    std::vector<Point> table_;
    double scale_ = 1.0;
};

/// Raman scale that puts the default scenario on its reference SKR; see
/// planner::calibrate_raman.
extern const double kDefaultRamanScale;

struct FiberParams {
    double alpha = 0.0;        // 1/m
    double beta2 = 0.0;        // s^2/m
    double gamma = 0.0;        // 1/(W m)
    double length = 0.0;       // m
    double temperature = 300.0;  // K
    RamanProfile raman = RamanProfile::silica_default();

    static FiberParams from_engineering(double alpha_db_per_km, double beta2_ps2_per_km,
                                        double gamma_per_w_km, double length_km,
                                        double temperature_k = 300.0);
    /// alpha 0.2 dB/km, beta2 -21.7 ps^2/km, gamma 1.3 /(W km).
    static FiberParams metro_default(double length_km = 10.0);

    FiberParams with_length(double length_m) const;
    void validate() const;
};

struct MechanismToggles {
    bool fwm = true;
    bool sprs = true;
};

struct InterferenceBreakdown {
    double p_fwm_degenerate = 0.0;     // W
    double p_fwm_nondegenerate = 0.0;  // W
    double p_sprs = 0.0;               // W
    double total = 0.0;                // W
    PropagationDirection direction = PropagationDirection::CoPropagating;

    double fwm() const { return p_fwm_degenerate + p_fwm_nondegenerate; }
};

/// FWM phase mismatch of the product at f_i from pumps f_h, f_l.
double delta_beta(double f_i, double f_h, double f_l, double beta2);

/// |int_0^L exp(-(alpha + i dbeta) z) dz|^2 in m^2.
double fwm_efficiency(double delta_beta, double alpha, double length);

/// (1 - e^{-alpha L}) / alpha.
double effective_length(double alpha, double length);

/// One FWM product landing on the quantum slot. Degenerate triples have h == l.
struct FwmTriple {
    int h = 0;
    int k = 0;
    int l = 0;
    bool degenerate() const { return h == l; }
    friend bool operator==(const FwmTriple&, const FwmTriple&) = default;
    friend auto operator<=>(const FwmTriple&, const FwmTriple&) = default;
};

/// Every (h, k, l) whose pumps and idler are occupied classical slots, with
/// non-degenerate pairs taken unordered (h < l). Sorted.
std::vector<FwmTriple> enumerate_fwm_triples(const ChannelPlan& plan);

/// (degenerate, non-degenerate) FWM power at the quantum channel at z = L.
std::pair<double, double> fwm_power(const ChannelPlan& plan, const FiberParams& fiber,
                                    PropagationDirection direction);

/// SpRS efficiency density eta(df) with df = f_i - f_h, 1/(m Hz).
double raman_efficiency(double delta_f_signed, const RamanProfile& profile, double temperature);

/// SpRS power from all classical channels integrated over b_s.
double sprs_power(const ChannelPlan& plan, const FiberParams& fiber, double b_s,
                  PropagationDirection direction);

InterferenceBreakdown total_interference(const ChannelPlan& plan, const FiberParams& fiber,
                                         double b_s, PropagationDirection direction,
                                         MechanismToggles toggles = {});

}  // namespace coexist

#endif  // COEXIST_INTERFERENCE_HPP
