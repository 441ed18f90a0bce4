#include "coexist/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace coexist {

namespace {

// Evaluates fn(0..n-1) on a few threads; output order is index order.
template <typename Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    std::vector<decltype(fn(std::size_t{}))> out(n);
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

SweepRow to_row(double x, const PointResult& p) {
    SweepRow r;
    r.x = x;
    r.skr_bps = p.key.skr_bps;
    r.skr_bits = p.key.skr_per_symbol;
    r.xi = p.xi;
    r.transmittance = p.transmittance;
    r.breakdown = p.breakdown;
    r.capacity_loss = p.capacity_loss;
    r.direction = p.breakdown.direction;
    return r;
}

std::string toggle_label(MechanismToggles t) {
    if (t.fwm && t.sprs) return "combined";
    if (t.fwm) return "fwm_only";
    if (t.sprs) return "sprs_only";
    return "none";
}

std::string fmt_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void common_metadata(SweepResult& r, const Scenario& s) {
    r.metadata.emplace_back("power_dbm_per_ch", s.power_w > 0.0 ? fmt_number(watts_to_dbm(s.power_w)) : "off");
    r.metadata.emplace_back("distance_km", fmt_number(s.fiber.length / 1000.0));
    r.metadata.emplace_back("direction", std::string(to_string(s.direction)));
    r.metadata.emplace_back("toggles", toggle_label(s.toggles));
}

}  // namespace

std::string_view to_string(SweepKind k) {
    switch (k) {
        case SweepKind::Spectral: return "spectral";
        case SweepKind::Guardband: return "guardband";
        case SweepKind::Tradeoff: return "tradeoff";
        case SweepKind::Reach: return "reach";
        case SweepKind::Transition: return "transition";
    }
    return "spectral";
}

int Scenario::resolved_quantum_slot() const {
    switch (placement) {
        case Placement::BandEdge: return grid.n_slots();
        case Placement::BandCenter: return grid.center_slot();
        case Placement::Custom: return quantum_slot;
    }
    return quantum_slot;
}

ChannelPlan Scenario::plan() const {
    ChannelPlan p = apply_guardband(grid.with_quantum_slot(resolved_quantum_slot(), placement), n_gb);
    if (power_w > 0.0) p = load_uniform(p, power_w, kurtosis, format);
    return p;
}

Scenario Scenario::at_power_dbm(double dbm) const {
    Scenario s = *this;
    s.power_w = dbm_to_watts(dbm);
    return s;
}

Scenario Scenario::at_distance_km(double km) const {
    Scenario s = *this;
    s.fiber = fiber.with_length(km * 1000.0);
    return s;
}

Scenario Scenario::with_guardband(int n) const {
    Scenario s = *this;
    s.n_gb = n;
    return s;
}

Scenario Scenario::with_direction(PropagationDirection d) const {
    Scenario s = *this;
    s.direction = d;
    return s;
}

Scenario Scenario::with_toggles(MechanismToggles t) const {
    Scenario s = *this;
    s.toggles = t;
    return s;
}

Scenario Scenario::with_placement(Placement p, std::optional<int> slot) const {
    Scenario s = *this;
    s.placement = p;
    if (slot) s.quantum_slot = *slot;
    return s;
}

Scenario Scenario::with_raman_scale(double scale) const {
    Scenario s = *this;
    s.fiber.raman = fiber.raman.with_scale(scale);
    return s;
}

PointResult evaluate(const Scenario& s) {
    const ChannelPlan plan = s.plan();
    PointResult out;
    out.quantum_slot = *plan.quantum_slot();
    out.capacity_loss = capacity_loss(plan);
    out.breakdown = total_interference(plan, s.fiber, s.qkd.b_s, s.direction, s.toggles);
    QkdParams qkd = s.qkd;
    qkd.f_q = plan.frequency(out.quantum_slot);
    out.transmittance = transmittance(s.fiber.alpha, s.fiber.length);
    out.xi = excess_noise(out.breakdown.total, out.transmittance, qkd.f_q, qkd.b_s);
    out.key = key_rate(qkd, {out.transmittance, out.xi});
    return out;
}

SweepResult sweep_spectral(const Scenario& base, MechanismToggles toggles) {
    SweepResult r;
    r.kind = SweepKind::Spectral;
    r.label = "spectral_" + toggle_label(toggles);
    r.x_name = "Channel";
    const int n = base.grid.n_slots();
    const auto points = parallel_map(static_cast<std::size_t>(n), [&](std::size_t i) {
        const int slot = static_cast<int>(i) + 1;
        return evaluate(base.with_placement(Placement::Custom, slot).with_toggles(toggles));
    });
    for (int i = 0; i < n; ++i) r.rows.push_back(to_row(i + 1, points[i]));
    common_metadata(r, base.with_toggles(toggles));
    return r;
}

std::vector<SweepResult> sweep_spectral_all(const Scenario& base) {
    return {sweep_spectral(base, {true, false}), sweep_spectral(base, {false, true}),
            sweep_spectral(base, {true, true})};
}

std::vector<SweepResult> sweep_guardband(const Scenario& base, const std::vector<double>& powers_dbm,
                                         int max_gb) {
    if (powers_dbm.empty()) throw std::invalid_argument("sweep_guardband: empty power list");
    if (max_gb < 0) throw std::invalid_argument("sweep_guardband: max guardband must be >= 0");
    std::vector<SweepResult> out;
    for (double p : powers_dbm) {
        const Scenario at = base.at_power_dbm(p);
        SweepResult r;
        r.kind = SweepKind::Guardband;
        r.label = "guardband_" + fmt_number(p) + "dBm";
        r.x_name = "QSpace";
        const auto points = parallel_map(static_cast<std::size_t>(max_gb + 1), [&](std::size_t g) {
            return evaluate(at.with_guardband(static_cast<int>(g)));
        });
        for (int g = 0; g <= max_gb; ++g) r.rows.push_back(to_row(g, points[g]));
        common_metadata(r, at);
        r.metadata.emplace_back("placement", std::string(to_string(at.placement)));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SweepResult> sweep_tradeoff(const Scenario& base, const std::vector<Placement>& placements,
                                        const std::vector<PropagationDirection>& directions,
                                        int max_gb) {
    if (placements.empty() || directions.empty())
        throw std::invalid_argument("sweep_tradeoff: need at least one placement and direction");
    std::vector<SweepResult> out;
    for (Placement pl : placements) {
        for (PropagationDirection d : directions) {
            const Scenario at = base.with_placement(pl).with_direction(d);
            SweepResult r;
            r.kind = SweepKind::Tradeoff;
            r.label = "tradeoff_" + std::string(to_string(pl)) + "_" + std::string(to_string(d));
            r.x_name = "QSpace";
            const auto points = parallel_map(static_cast<std::size_t>(max_gb + 1), [&](std::size_t g) {
                return evaluate(at.with_guardband(static_cast<int>(g)));
            });
            for (int g = 0; g <= max_gb; ++g) r.rows.push_back(to_row(g, points[g]));
            common_metadata(r, at);
            r.metadata.emplace_back("placement", std::string(to_string(pl)));
            out.push_back(std::move(r));
        }
    }
    return out;
}

SweepResult sweep_distance(const Scenario& base, double max_km, double step_km) {
    if (!(step_km > 0.0) || !(max_km >= step_km))
        throw std::invalid_argument("sweep_distance: need 0 < step <= max distance");
    const auto n = static_cast<std::size_t>(std::floor(max_km / step_km + 1e-9));
    SweepResult r;
    r.kind = SweepKind::Reach;
    r.label = "distance_gb" + std::to_string(base.n_gb) + "_" + std::string(to_string(base.direction));
    r.x_name = "z";
    const auto points = parallel_map(n, [&](std::size_t i) {
        return evaluate(base.at_distance_km(step_km * static_cast<double>(i + 1)));
    });
    for (std::size_t i = 0; i < n; ++i) r.rows.push_back(to_row(step_km * static_cast<double>(i + 1), points[i]));
    common_metadata(r, base);
    r.metadata.emplace_back("guardband", std::to_string(base.n_gb));
    return r;
}

double reach(const Scenario& base, const ReachOptions& o) {
    if (!(o.skr_floor_bps >= 0.0)) throw std::invalid_argument("reach: SKR floor must be >= 0");
    if (!(o.step_km > 0.0) || !(o.max_km >= o.step_km) || !(o.tolerance_km > 0.0))
        throw std::invalid_argument("reach: invalid distance grid");
    auto above = [&](double km) { return evaluate(base.at_distance_km(km)).key.skr_bps > o.skr_floor_bps; };

    const auto n = static_cast<long>(std::floor(o.max_km / o.step_km + 1e-9));
    double good = 0.0;
    for (long i = 1; i <= n; ++i) {
        const double km = o.step_km * static_cast<double>(i);
        if (!above(km)) {
            if (i == 1) return 0.0;
            double lo = good, hi = km;
            while (hi - lo > o.tolerance_km) {
                const double mid = 0.5 * (lo + hi);
                (above(mid) ? lo : hi) = mid;
            }
            return lo;
        }
        good = km;
    }
    return good;
}

TransitionResult find_transition_power(const Scenario& base, double lower_dbm, double upper_dbm,
                                       double tolerance_db) {
    TransitionResult r;
    r.lower_dbm = lower_dbm;
    r.upper_dbm = upper_dbm;
    // log(P_fwm / P_sprs); increasing in power (cubic over linear).
    auto gap = [&](double dbm) -> std::optional<double> {
        const Scenario s = base.at_power_dbm(dbm);
        const ChannelPlan plan = s.plan();
        const auto [deg, nondeg] = fwm_power(plan, s.fiber, s.direction);
        const double sprs = sprs_power(plan, s.fiber, s.qkd.b_s, s.direction);
        const double fwm = deg + nondeg;
        if (!(fwm > 0.0) || !(sprs > 0.0)) return std::nullopt;
        return std::log(fwm) - std::log(sprs);
    };
    const auto g_lo = gap(lower_dbm);
    const auto g_hi = gap(upper_dbm);
    if (!g_lo || !g_hi || *g_lo > 0.0 || *g_hi < 0.0) return r;
    double lo = lower_dbm, hi = upper_dbm;
    while (hi - lo > tolerance_db) {
        const double mid = 0.5 * (lo + hi);
        const auto g = gap(mid);
        (g && *g < 0.0 ? lo : hi) = mid;
    }
    r.found = true;
    r.power_dbm = 0.5 * (lo + hi);
    return r;
}

CalibrationResult calibrate_raman(const Scenario& base, std::pair<double, double> window_bps,
                                  const CalibrationPoint& point) {
    const auto [low, high] = window_bps;
    if (!(low >= 0.0) || !(high > low)) throw std::invalid_argument("calibrate_raman: empty target window");
    const Scenario ref = base.at_power_dbm(point.power_dbm)
                             .at_distance_km(point.distance_km)
                             .with_placement(point.placement)
                             .with_guardband(point.n_gb)
                             .with_direction(point.direction)
                             .with_toggles({true, true});
    auto skr_at = [&](double scale) { return evaluate(ref.with_raman_scale(scale)).key.skr_bps; };

    CalibrationResult r;
    r.target_bps = 0.5 * (low + high);
    r.achievable_max_bps = skr_at(0.0);

    double hi = 1.0;
    double skr_hi = skr_at(hi);
    while (skr_hi >= r.target_bps && skr_hi > 0.0 && hi < 1e12) {
        hi *= 2.0;
        skr_hi = skr_at(hi);
    }
    r.achievable_min_bps = skr_hi;
    if (r.achievable_max_bps < r.target_bps) {
        r.attainable = false;
        r.scale = 0.0;
        r.skr_bps = r.achievable_max_bps;
        r.calibrated = base.with_raman_scale(0.0);
        return r;
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (skr_at(mid) >= r.target_bps ? lo : hi) = mid;
    }
    r.scale = 0.5 * (lo + hi);
    r.skr_bps = skr_at(r.scale);
    r.attainable = r.skr_bps >= low && r.skr_bps <= high;
    r.calibrated = base.with_raman_scale(r.scale);
    return r;
}

GuardbandRecommendation recommend_guardband(const Scenario& base, double capacity_budget_percent,
                                            int max_gb) {
    if (!(capacity_budget_percent >= 0.0))
        throw std::invalid_argument("recommend_guardband: budget must be >= 0");
    GuardbandRecommendation rec;
    std::vector<double> loss(max_gb + 1);
    const auto points = parallel_map(static_cast<std::size_t>(max_gb + 1), [&](std::size_t g) {
        return evaluate(base.with_guardband(static_cast<int>(g)));
    });
    for (int g = 0; g <= max_gb; ++g) {
        rec.skr_by_gb.push_back(points[g].key.skr_bps);
        loss[g] = points[g].capacity_loss;
    }
    int best = -1;
    for (int g = 0; g <= max_gb; ++g)
        if (loss[g] <= capacity_budget_percent && (best < 0 || rec.skr_by_gb[g] > rec.skr_by_gb[best])) best = g;
    if (best < 0) {
        // Nothing fits: report the cheapest option.
        rec.n_gb = 0;
        rec.skr_bps = rec.skr_by_gb[0];
        rec.capacity_loss = loss[0];
        return rec;
    }
    rec.best_skr_bps = rec.skr_by_gb[best];
    for (int g = 0; g <= max_gb; ++g) {
        if (loss[g] <= capacity_budget_percent && rec.skr_by_gb[g] >= 0.99 * rec.best_skr_bps) {
            rec.n_gb = g;
            break;
        }
    }
    rec.feasible = rec.best_skr_bps > 0.0;
    rec.skr_bps = rec.skr_by_gb[rec.n_gb];
    rec.capacity_loss = loss[rec.n_gb];
    return rec;
}

}  // namespace coexist
