#ifndef COEXIST_KEYRATE_HPP
#define COEXIST_KEYRATE_HPP

#include <array>
#include <stdexcept>
#include <string>

namespace coexist {

/// Gaussian-modulated CV-QKD link parameters, variances in shot-noise units.
struct QkdParams {
    double v_a = 8.0;
    double eta_b = 0.6;
    double beta_rec = 0.95;
    double v_el = 0.01;
    double b_s = 32e9;        // Hz, bandwidth interference is integrated over
    double f_q = 195.9375e12; // Hz
    double r_s = 5e8;         // symbols/s

    void validate() const;
};

struct ChannelState {
    double transmittance = 1.0;
    double xi = 0.0;  // excess noise, SNU, referred to the channel input
};

struct KeyRateResult {
    double i_ab = 0.0;
    double chi_be = 0.0;
    double skr_per_symbol = 0.0;
    double skr_bps = 0.0;
    std::array<double, 4> eigenvalues{};  // lambda_1..lambda_4
};

/// Raised for covariance matrices that are not physical within tolerance.
class UnphysicalStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double transmittance(double alpha, double length);

/// P_int / (T h f B_s).
double excess_noise(double p_int, double transmittance, double f_q, double b_s);

/// Von Neumann entropy of a thermal state with mean photon number x.
double holevo_g(double x);

/// Reverse reconciliation, homodyne detection, trusted detector noise,
/// collective attacks, asymptotic regime.
KeyRateResult key_rate(const QkdParams& params, const ChannelState& state);

}  // namespace coexist

#endif  // COEXIST_KEYRATE_HPP
