#pragma once

#include <functional>
#include <span>

namespace shapeldpc {

double db_to_linear(double db);
double linear_to_db(double lin);

// binary entropy in bits
double h2(double p);

enum class H2Branch { lower, upper };  // result <= 1/2 or >= 1/2
double h2_inv(double y, H2Branch branch);

// Mutual information of on-off signalling over AWGN in bits per use.
// q0 is the off-probability; gamma_lin the linear SNR (1-q0) A^2 / sigma^2.
double mi_ook(double q0, double gamma_lin);

struct CapacityPoint {
    double rate = 0.0;
    double q0 = 0.5;
};

// max_q0 mi_ook(q0, gamma) and its maximizer
CapacityPoint capacity_ook(double gamma_lin);

// A codeword bit class: fraction of positions, off-probability, and whether
// those positions reach the channel (punctured classes do not).
struct InputClass {
    double fraction = 1.0;
    double q0 = 0.5;
    bool transmitted = true;
};

// Achievable rate per codeword bit of a class mix sharing one amplitude and
// noise level; gamma_lin is normalized to the average transmitted energy.
double ts_rate(std::span<const InputClass> classes, double gamma_lin);

// two-class mix: shaped_fraction at the best off-probability, rest uniform
double ts_best_rate(double shaped_fraction, double gamma_lin);

// SNR (dB) where a monotone rate curve crosses target_rate, within 0.001 dB.
double snr_for_rate(const std::function<double(double)>& rate_of_gamma, double target_rate,
                    double lo_db = -30.0, double hi_db = 50.0);

} // namespace shapeldpc
