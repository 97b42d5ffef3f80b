#pragma once

#include <optional>
#include <vector>

namespace emcomm {

enum class LearningMode { feedback, no_feedback };

// Closed-form regime classification for the symmetric single-coordinate
// reduction of the learning dynamics.
struct RegimeReport {
    double gamma = 0.0;         // selection threshold
    double lambda_alpha = 0.0;  // effective mutation rate
    std::optional<double> x_c;  // communicative fixed-point frequency, if any
    bool noncomm_unstable = false;
    bool comm_exists = false;
    bool bistable = false;
    std::optional<double> predicted_gain_at_fixed_point;
};

// P(D distinct signals dominate) when each of M meanings independently picks
// one of S signals uniformly at random. Index d of the returned vector
// (size S+1) is the probability that exactly d signals are used.
std::vector<double> dominant_count_pmf(int signal_count, int meaning_count);

// Stationary across-agent variability of signal frequencies near the
// non-communicative state: V = lambda / (lambda + 2 p (1 + lambda*alpha))
// with p = A*C + (1 - A*C)/M.
double variability_estimate(double lambda, double alpha, double certainty, double alignment,
                            int meaning_count);

double threshold_gamma_feedback(int meaning_count);
double threshold_gamma_no_feedback(double certainty, double alignment, double variability);
// convenience: variability from the estimate above
double threshold_gamma_no_feedback(double certainty, double alignment, double lambda,
                                   double alpha, int meaning_count);

// x_c = (1 + sqrt(1 - 4*lambda_alpha*(S-1)/(gamma*S^2))) / 2 when the
// discriminant is non-negative and gamma > 0; absent otherwise.
std::optional<double> communicative_fixed_point(double lambda_alpha, double gamma,
                                                int signal_count);

RegimeReport classify_regime(double lambda_alpha, double gamma, int signal_count);

// dx/dt of the symmetric reduction at coordinate x.
double symmetric_rhs(double x, double lambda, double alpha, double gamma, int signal_count,
                     int meaning_count, LearningMode mode);

// Communicative gain of a symmetric system at preferred-signal frequency x;
// independent of the number of meanings.
double predicted_gain(double x, int signal_count);

// Two agents, two signals, fully aligned attention: derivatives of the
// above-average and below-average frequencies of the majority signal, plus
// the variance threshold lambda*alpha/(8C) above which the majority signal's
// mean frequency grows (absent when C = 0).
struct TwoAgentDerivatives {
    double d_phi_plus = 0.0;
    double d_phi_minus = 0.0;
    std::optional<double> growth_threshold;
};
TwoAgentDerivatives two_agent_dynamics(double phi_plus, double phi_minus, double certainty,
                                       double lambda, double alpha, int meaning_count);

// Smallest alpha for which lambda*alpha / Gamma(alpha) equals the target
// ratio in no-feedback mode (Gamma depends weakly on alpha through the
// variability estimate, so this is solved by fixed-point iteration).
double solve_alpha_for_ratio(double target_ratio, double certainty, double alignment,
                             double lambda, int meaning_count);

}  // namespace emcomm
