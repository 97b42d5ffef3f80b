#include "emcomm/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace emcomm {

namespace {

// Neumaier compensated accumulation; the alternating sum below cancels badly
// for large meaning counts otherwise.
struct CompensatedSum {
    long double total = 0.0L;
    long double compensation = 0.0L;
    void add(long double value) {
        const long double t = total + value;
        if (std::fabs(total) >= std::fabs(value)) {
            compensation += (total - t) + value;
        } else {
            compensation += (value - t) + total;
        }
        total = t;
    }
    long double result() const { return total + compensation; }
};

}  // namespace

std::vector<double> dominant_count_pmf(int signal_count, int meaning_count) {
    if (signal_count < 1) throw std::invalid_argument("dominant_count_pmf: S must be >= 1");
    if (meaning_count < 1) throw std::invalid_argument("dominant_count_pmf: M must be >= 1");
    const int S = signal_count;
    const int M = meaning_count;

    // binomial table in long double
    std::vector<std::vector<long double>> choose(static_cast<std::size_t>(S) + 1);
    for (int n = 0; n <= S; ++n) {
        auto& row = choose[static_cast<std::size_t>(n)];
        row.assign(static_cast<std::size_t>(n) + 1, 1.0L);
        for (int k = 1; k < n; ++k) {
            row[static_cast<std::size_t>(k)] = choose[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
                                               choose[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
        }
    }

    std::vector<double> pmf(static_cast<std::size_t>(S) + 1, 0.0);
    for (int d = 1; d <= std::min(S, M); ++d) {
        CompensatedSum sum;
        for (int k = 0; k < d; ++k) {
            const long double term = choose[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)] *
                                     std::pow(static_cast<long double>(d - k) / S, static_cast<long double>(M));
            sum.add((k % 2 == 0) ? term : -term);
        }
        const long double p = choose[static_cast<std::size_t>(S)][static_cast<std::size_t>(d)] * sum.result();
        pmf[static_cast<std::size_t>(d)] = static_cast<double>(p < 0.0L ? 0.0L : p);
    }
    return pmf;
}

double variability_estimate(double lambda, double alpha, double certainty, double alignment,
                            int meaning_count) {
    if (meaning_count < 1) throw std::invalid_argument("variability_estimate: M must be >= 1");
    const double ac = alignment * certainty;
    const double p = ac + (1.0 - ac) / meaning_count;
    return lambda / (lambda + 2.0 * p * (1.0 + lambda * alpha));
}

double threshold_gamma_feedback(int meaning_count) {
    if (meaning_count < 1) throw std::invalid_argument("threshold_gamma_feedback: M must be >= 1");
    return 1.0 / meaning_count;
}

double threshold_gamma_no_feedback(double certainty, double alignment, double variability) {
    if (!(variability >= 0.0 && variability < 1.0)) {
        throw std::invalid_argument("threshold_gamma_no_feedback: V must lie in [0,1)");
    }
    return certainty * (1.0 - variability) *
           (alignment - (1.0 - variability) / (1.0 + variability));
}

double threshold_gamma_no_feedback(double certainty, double alignment, double lambda,
                                   double alpha, int meaning_count) {
    const double v = variability_estimate(lambda, alpha, certainty, alignment, meaning_count);
    return threshold_gamma_no_feedback(certainty, alignment, v);
}

std::optional<double> communicative_fixed_point(double lambda_alpha, double gamma,
                                                int signal_count) {
    if (signal_count < 2) throw std::invalid_argument("communicative_fixed_point: S must be >= 2");
    if (!(gamma > 0.0)) return std::nullopt;
    const double ratio = 4.0 * lambda_alpha * (signal_count - 1) / (gamma * signal_count * signal_count);
    if (ratio > 1.0) return std::nullopt;
    return 0.5 * (1.0 + std::sqrt(1.0 - ratio));
}

RegimeReport classify_regime(double lambda_alpha, double gamma, int signal_count) {
    if (signal_count < 2) throw std::invalid_argument("classify_regime: S must be >= 2");
    RegimeReport report;
    report.gamma = gamma;
    report.lambda_alpha = lambda_alpha;
    report.noncomm_unstable = lambda_alpha < gamma;
    const double saddle = gamma * signal_count * signal_count / (4.0 * (signal_count - 1));
    report.comm_exists = gamma > 0.0 && lambda_alpha < saddle;
    report.bistable = report.comm_exists && !report.noncomm_unstable;
    report.x_c = communicative_fixed_point(lambda_alpha, gamma, signal_count);
    if (report.x_c) report.predicted_gain_at_fixed_point = predicted_gain(*report.x_c, signal_count);
    return report;
}

double symmetric_rhs(double x, double lambda, double alpha, double gamma, int signal_count,
                     int meaning_count, LearningMode mode) {
    if (signal_count < 2) throw std::invalid_argument("symmetric_rhs: S must be >= 2");
    if (meaning_count < 1) throw std::invalid_argument("symmetric_rhs: M must be >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("symmetric_rhs: x must lie in [0,1]");
    const double S = signal_count;
    const double M = meaning_count;
    const double lambda_alpha = lambda * alpha;
    double beta = 1.0;
    if (mode == LearningMode::feedback) {
        beta = (S / M) * (x * x + (1.0 - x) * (1.0 - x) / (S - 1.0));
    }
    const double selection = gamma * S * S / (S - 1.0) * x * (1.0 - x) - lambda_alpha;
    return lambda / (beta + lambda_alpha) / M * selection * (x - 1.0 / S);
}

double predicted_gain(double x, int signal_count) {
    if (signal_count < 2) throw std::invalid_argument("predicted_gain: S must be >= 2");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("predicted_gain: x must lie in [0,1]");
    const double S = signal_count;
    return (S * (x * x + (1.0 - x) * (1.0 - x) / (S - 1.0)) - 1.0) / (S - 1.0);
}

TwoAgentDerivatives two_agent_dynamics(double phi_plus, double phi_minus, double certainty,
                                       double lambda, double alpha, int meaning_count) {
    if (!(phi_minus >= 0.0 && phi_plus >= phi_minus && phi_plus <= 1.0)) {
        throw std::invalid_argument("two_agent_dynamics: need 0 <= phi_minus <= phi_plus <= 1");
    }
    if (meaning_count < 1) throw std::invalid_argument("two_agent_dynamics: M must be >= 1");
    const double lambda_alpha = lambda * alpha;
    const double epsilon = 0.5 * (phi_plus - phi_minus);
    const double prefactor = lambda / ((1.0 + lambda_alpha) * meaning_count);

    TwoAgentDerivatives out;
    out.d_phi_plus = prefactor * (-4.0 * certainty * epsilon * phi_plus * (1.0 - phi_plus) +
                                  lambda_alpha * (0.5 - phi_plus));
    out.d_phi_minus = prefactor * (4.0 * certainty * epsilon * phi_minus * (1.0 - phi_minus) +
                                   lambda_alpha * (0.5 - phi_minus));
    if (certainty > 0.0) out.growth_threshold = lambda_alpha / (8.0 * certainty);
    return out;
}

double solve_alpha_for_ratio(double target_ratio, double certainty, double alignment,
                             double lambda, int meaning_count) {
    if (!(target_ratio > 0.0)) throw std::invalid_argument("solve_alpha_for_ratio: ratio must be > 0");
    double alpha = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double gamma =
            threshold_gamma_no_feedback(certainty, alignment, lambda, alpha, meaning_count);
        if (!(gamma > 0.0)) {
            throw std::domain_error("solve_alpha_for_ratio: no positive selection threshold for these parameters");
        }
        const double next = target_ratio * gamma / lambda;
        if (std::abs(next - alpha) <= 1e-14 * std::max(1.0, std::abs(next))) return next;
        alpha = next;
    }
    return alpha;
}

}  // namespace emcomm
