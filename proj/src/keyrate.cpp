#include "coexist/keyrate.hpp"

#include <cmath>

#include "coexist/units.hpp"

namespace coexist {

namespace {

constexpr double kDiscriminantTolerance = 1e-9;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

// Roots of x^2 - s x + p = 0, as (larger, smaller); p > 0 assumed.
std::pair<double, double> quadratic_roots(double s, double p) {
    double disc = s * s - 4.0 * p;
    if (disc < 0.0) {
        if (disc < -kDiscriminantTolerance * s * s)
            throw UnphysicalStateError("negative symplectic discriminant " + std::to_string(disc));
        disc = 0.0;
    }
    const double big = 0.5 * (s + std::sqrt(disc));
    // Vieta keeps the small root accurate when s^2 >> 4p.
    const double small = big > 0.0 ? p / big : 0.0;
    return {big, small};
}

double symplectic_term(double lambda_sq) {
    const double lambda = std::sqrt(std::max(lambda_sq, 0.0));
    const double x = 0.5 * (lambda - 1.0);
    if (x < -kDiscriminantTolerance)
        throw UnphysicalStateError("symplectic eigenvalue below 1: " + std::to_string(lambda));
    return holevo_g(std::max(x, 0.0));
}

}  // namespace

void QkdParams::validate() const {
    const std::pair<double, const char*> fields[] = {{v_a, "v_a"}, {eta_b, "eta_b"},
                                                     {beta_rec, "beta"}, {b_s, "b_s"}, {f_q, "f_q"}, {r_s, "r_s"}};
    for (const auto& [v, name] : fields) {
        require_finite(v, name);
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
    }
    require_finite(v_el, "v_el");
    if (v_el < 0.0) throw std::invalid_argument("v_el must be >= 0");
    if (eta_b > 1.0) throw std::invalid_argument("eta_b must be <= 1");
    if (beta_rec > 1.0) throw std::invalid_argument("beta must be <= 1");
}

double transmittance(double alpha, double length) {
    if (!(alpha > 0.0) || !(length >= 0.0))
        throw std::invalid_argument("transmittance: need alpha > 0 and length >= 0");
    return std::exp(-alpha * length);
}

double excess_noise(double p_int, double transmittance, double f_q, double b_s) {
    require_finite(p_int, "p_int");
    require_finite(transmittance, "transmittance");
    require_finite(f_q, "f_q");
    require_finite(b_s, "b_s");
    if (!(transmittance > 0.0) || !(f_q > 0.0) || !(b_s > 0.0) || p_int < 0.0)
        throw std::invalid_argument("excess_noise: need T, f, B_s > 0 and P_int >= 0");
    return p_int / (transmittance * kPlanck * f_q * b_s);
}

double holevo_g(double x) {
    if (x <= 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

KeyRateResult key_rate(const QkdParams& params, const ChannelState& state) {
    params.validate();
    const double T = state.transmittance;
    const double xi = state.xi;
    require_finite(T, "transmittance");
    require_finite(xi, "xi");
    if (!(T > 0.0) || T > 1.0) throw std::invalid_argument("transmittance must be in (0, 1]");
    if (xi < 0.0) throw std::invalid_argument("excess noise must be >= 0");

    const double V = params.v_a + 1.0;
    const double chi_line = (1.0 - T) / T + xi;
    const double chi_hom = (1.0 + params.v_el) / params.eta_b - 1.0;
    const double chi_tot = chi_line + chi_hom / T;

    KeyRateResult r;
    r.i_ab = 0.5 * std::log2((V + chi_tot) / (1.0 + chi_tot));

    const double A = V * V * (1.0 - 2.0 * T) + 2.0 * T + T * T * (V + chi_line) * (V + chi_line);
    const double sqrtB = T * (V * chi_line + 1.0);
    const double B = sqrtB * sqrtB;
    const auto [l1, l2] = quadratic_roots(A, B);

    const double denom = T * (V + chi_tot);
    const double C = (A * chi_hom + V * sqrtB + T * (V + chi_line)) / denom;
    const double D = sqrtB * (V + sqrtB * chi_hom) / denom;
    const auto [l3, l4] = quadratic_roots(C, D);

    r.eigenvalues = {std::sqrt(l1), std::sqrt(l2), std::sqrt(l3), std::sqrt(l4)};
    r.chi_be = symplectic_term(l1) + symplectic_term(l2) - symplectic_term(l3) - symplectic_term(l4);
    r.skr_per_symbol = std::max(0.0, params.beta_rec * r.i_ab - r.chi_be);
    r.skr_bps = r.skr_per_symbol * params.r_s;
    return r;
}

}  // namespace coexist
