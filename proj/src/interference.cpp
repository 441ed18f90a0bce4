#include "coexist/interference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coexist/units.hpp"

namespace coexist {

namespace {

// Normalized silica spontaneous-scattering shape (THz, relative density).
// Nothing is scattered within 0.6 THz of a pump, so guardbands of up to a
// few hundred GHz leave the SpRS floor untouched.
constexpr std::pair<double, double> kSilicaShape[] = {
    {0.0, 0.0},   {0.55, 0.0},  {0.6, 0.048}, {1.0, 0.08},  {3.0, 0.22},  {5.0, 0.33},
    {8.0, 0.45},  {10.0, 0.60}, {12.0, 0.85}, {13.2, 1.0},  {14.5, 0.72}, {15.5, 0.55},
    {17.0, 0.42}, {18.5, 0.40}, {20.0, 0.33}, {24.0, 0.12}, {30.0, 0.06}, {35.0, 0.02},
    {40.0, 0.0},
};
// Peak density of the unscaled default table, 1/(m Hz).
constexpr double kSilicaPeakDensity = 1e-23;

struct SlotArrays {
    std::vector<double> power;     // index = slot, 0 when empty
    std::vector<double> kurtosis;
    std::vector<int> occupied;     // ascending slot list
};

SlotArrays slot_arrays(const ChannelPlan& plan) {
    SlotArrays a;
    a.power.assign(plan.n_slots() + 1, 0.0);
    a.kurtosis.assign(plan.n_slots() + 1, 0.0);
    for (const auto& c : plan.classical()) {
        a.power[c.slot] = c.power_w;
        a.kurtosis[c.slot] = c.kurtosis;
        a.occupied.push_back(c.slot);
    }
    return a;
}

int require_quantum_slot(const ChannelPlan& plan, const char* what) {
    if (!plan.quantum_slot())
        throw std::invalid_argument(std::string(what) + ": quantum slot not set");
    return *plan.quantum_slot();
}

}  // namespace

const double kDefaultRamanScale = 6.518360545893529;

RamanProfile::RamanProfile(std::vector<Point> table, double scale)
    : table_(std::move(table)), scale_(scale) {
    if (table_.size() < 2) throw std::invalid_argument("Raman profile needs at least two points");
    if (!(scale_ >= 0.0) || !std::isfinite(scale_))
        throw std::invalid_argument("Raman scale must be finite and >= 0");
    for (std::size_t i = 0; i < table_.size(); ++i) {
        if (!(table_[i].density >= 0.0) || !std::isfinite(table_[i].density))
            throw std::invalid_argument("Raman density must be finite and >= 0");
        if (i > 0 && !(table_[i].detuning_hz > table_[i - 1].detuning_hz))
            throw std::invalid_argument("Raman detuning must be strictly increasing");
    }
    if (table_.front().detuning_hz > 0.0 || table_.back().detuning_hz < 40e12)
        throw std::invalid_argument("Raman profile must cover 0-40 THz detuning");
}

RamanProfile RamanProfile::silica_default() {
    std::vector<Point> table;
    for (const auto& [thz, rel] : kSilicaShape) table.push_back({thz * 1e12, rel * kSilicaPeakDensity});
    return RamanProfile(std::move(table), kDefaultRamanScale);
}

RamanProfile RamanProfile::from_csv(const std::filesystem::path& path, double scale) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open Raman profile '" + path.string() + "'");
    std::vector<Point> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double df = 0.0, rho = 0.0;
        if (!(ss >> df >> rho)) {
            if (table.empty() && lineno == 1) continue;  // header
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected two numeric columns");
        }
        table.push_back({df, rho});
    }
    return RamanProfile(std::move(table), scale);
}

double RamanProfile::density(double abs_detuning_hz) const {
    const double x = std::abs(abs_detuning_hz);
    if (table_.empty() || x > table_.back().detuning_hz) return 0.0;
    auto hi = std::lower_bound(table_.begin(), table_.end(), x,
                               [](const Point& p, double v) { return p.detuning_hz < v; });
    if (hi == table_.begin()) return scale_ * hi->density;
    auto lo = hi - 1;
    const double t = (x - lo->detuning_hz) / (hi->detuning_hz - lo->detuning_hz);
    return scale_ * (lo->density + t * (hi->density - lo->density));
}

RamanProfile RamanProfile::with_scale(double scale) const {
    RamanProfile out = *this;
    if (!(scale >= 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("Raman scale must be finite and >= 0");
    out.scale_ = scale;
    return out;
}

FiberParams FiberParams::from_engineering(double alpha_db_per_km, double beta2_ps2_per_km,
                                          double gamma_per_w_km, double length_km,
                                          double temperature_k) {
    FiberParams f;
    f.alpha = db_per_km_to_per_m(alpha_db_per_km);
    f.beta2 = ps2_per_km_to_s2_per_m(beta2_ps2_per_km);
    f.gamma = per_w_km_to_per_w_m(gamma_per_w_km);
    f.length = length_km * 1000.0;
    f.temperature = temperature_k;
    f.validate();
    return f;
}

FiberParams FiberParams::metro_default(double length_km) {
    return from_engineering(0.2, -21.7, 1.3, length_km, 300.0);
}

FiberParams FiberParams::with_length(double length_m) const {
    FiberParams f = *this;
    f.length = length_m;
    f.validate();
    return f;
}

void FiberParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("fiber alpha must be > 0");
    if (!(length >= 0.0) || !std::isfinite(length)) throw std::invalid_argument("fiber length must be >= 0");
    if (!(temperature > 0.0)) throw std::invalid_argument("fiber temperature must be > 0 K");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("fiber gamma must be >= 0");
    if (!std::isfinite(beta2)) throw std::invalid_argument("fiber beta2 must be finite");
}

double delta_beta(double f_i, double f_h, double f_l, double beta2) {
    return -beta2 * kTwoPi * kTwoPi * (f_i - f_h) * (f_i - f_l);
}

double effective_length(double alpha, double length) { return -std::expm1(-alpha * length) / alpha; }

double fwm_efficiency(double delta_beta, double alpha, double length) {
    if (length <= 0.0) return 0.0;
    // 1 - e^{-(a + ib)L}, written so neither part cancels for small aL or bL.
    const double decay = std::exp(-alpha * length);
    const double half = std::sin(0.5 * delta_beta * length);
    const double re = -std::expm1(-alpha * length) + 2.0 * decay * half * half;
    const double im = decay * std::sin(delta_beta * length);
    return (re * re + im * im) / (alpha * alpha + delta_beta * delta_beta);
}

std::vector<FwmTriple> enumerate_fwm_triples(const ChannelPlan& plan) {
    const int i = require_quantum_slot(plan, "enumerate_fwm_triples");
    const auto a = slot_arrays(plan);
    const int n = plan.n_slots();
    auto occupied = [&](int s) { return s >= 1 && s <= n && a.power[s] > 0.0; };

    std::vector<FwmTriple> out;
    for (int h : a.occupied) {
        const int k = 2 * h - i;
        if (h != i && occupied(k)) out.push_back({h, k, h});
    }
    for (std::size_t x = 0; x < a.occupied.size(); ++x) {
        for (std::size_t y = x + 1; y < a.occupied.size(); ++y) {
            const int h = a.occupied[x];
            const int l = a.occupied[y];
            const int k = h + l - i;
            if (k != h && k != l && occupied(k)) out.push_back({h, k, l});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<double, double> fwm_power(const ChannelPlan& plan, const FiberParams& fiber,
                                    PropagationDirection direction) {
    const int i = require_quantum_slot(plan, "fwm_power");
    if (direction == PropagationDirection::CounterPropagating) return {0.0, 0.0};
    const auto a = slot_arrays(plan);
    const int n = plan.n_slots();
    const double f_i = plan.frequency(i);
    const double L = fiber.length;

    double degenerate = 0.0;
    double nondegenerate = 0.0;
    for (int h : a.occupied) {
        const int k = 2 * h - i;
        if (k < 1 || k > n || a.power[k] <= 0.0) continue;
        const double f_h = plan.frequency(h);
        const double rho = fwm_efficiency(delta_beta(f_i, f_h, f_h, fiber.beta2), fiber.alpha, L);
        degenerate += (a.kurtosis[h] + 2.0) * a.power[h] * a.power[h] * a.power[k] * rho;
    }
    for (std::size_t x = 0; x < a.occupied.size(); ++x) {
        const int h = a.occupied[x];
        const double f_h = plan.frequency(h);
        for (std::size_t y = x + 1; y < a.occupied.size(); ++y) {
            const int l = a.occupied[y];
            const int k = h + l - i;
            if (k < 1 || k > n || k == h || k == l || a.power[k] <= 0.0) continue;
            const double rho =
                fwm_efficiency(delta_beta(f_i, f_h, plan.frequency(l), fiber.beta2), fiber.alpha, L);
            nondegenerate += a.power[h] * a.power[k] * a.power[l] * rho;
        }
    }
    const double coeff = 16.0 * fiber.gamma * fiber.gamma / 81.0 * std::exp(-fiber.alpha * L);
    return {coeff * degenerate, coeff * 4.0 * nondegenerate};
}

double raman_efficiency(double delta_f_signed, const RamanProfile& profile, double temperature) {
    if (delta_f_signed == 0.0) return 0.0;
    const double df = std::abs(delta_f_signed);
    const double rho = profile.density(df);
    if (rho == 0.0) return 0.0;
    const double n_th = 1.0 / std::expm1(kPlanck * df / (kBoltzmann * temperature));
    // Quantum channel below the pump is Stokes-shifted.
    return delta_f_signed < 0.0 ? rho * (n_th + 1.0) : rho * n_th;
}

double sprs_power(const ChannelPlan& plan, const FiberParams& fiber, double b_s,
                  PropagationDirection direction) {
    const int i = require_quantum_slot(plan, "sprs_power");
    if (!(b_s > 0.0)) throw std::invalid_argument("sprs_power: b_s must be > 0");
    const double f_i = plan.frequency(i);
    double coupling = 0.0;  // sum_h eta_ih P_h(0)
    for (const auto& c : plan.classical())
        coupling += raman_efficiency(f_i - plan.frequency(c.slot), fiber.raman, fiber.temperature) *
                    c.power_w;
    const double a = fiber.alpha;
    const double L = fiber.length;
    const double path = direction == PropagationDirection::CoPropagating
                            ? L * std::exp(-a * L)
                            : -std::expm1(-2.0 * a * L) / (2.0 * a);
    return coupling * b_s * path;
}

InterferenceBreakdown total_interference(const ChannelPlan& plan, const FiberParams& fiber,
                                         double b_s, PropagationDirection direction,
                                         MechanismToggles toggles) {
    InterferenceBreakdown out;
    out.direction = direction;
    if (toggles.fwm) {
        const auto [deg, nondeg] = fwm_power(plan, fiber, direction);
        out.p_fwm_degenerate = deg;
        out.p_fwm_nondegenerate = nondeg;
    }
    if (toggles.sprs) out.p_sprs = sprs_power(plan, fiber, b_s, direction);
    out.total = out.p_fwm_degenerate + out.p_fwm_nondegenerate + out.p_sprs;
    return out;
}

}  // namespace coexist
