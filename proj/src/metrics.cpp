#include "emcomm/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "emcomm/society.hpp"

namespace emcomm {

namespace {

// phi tables for all agents plus per-(agent,signal) production mass
// Z_j(s) = sum_mu phi_j(s|mu), the normalization of a blind interpretation.
struct PhiTables {
    int n, m, s;
    std::vector<double> phi;   // [agent][meaning][signal]
    std::vector<double> mass;  // [agent][signal]

    explicit PhiTables(const SocietyState& state) {
        n = state.agent_count();
        m = state.memory(0).meaning_count();
        s = state.memory(0).signal_count();
        phi.assign(static_cast<std::size_t>(n) * m * s, 0.0);
        mass.assign(static_cast<std::size_t>(n) * s, 0.0);
        for (int j = 0; j < n; ++j) {
            const auto& mem = state.memory(j);
            for (int mi = 0; mi < m; ++mi) {
                const std::size_t row = (static_cast<std::size_t>(j) * m + mi) * s;
                mem.production_distribution(mi, std::span<double>(phi.data() + row, static_cast<std::size_t>(s)));
                for (int si = 0; si < s; ++si) {
                    mass[static_cast<std::size_t>(j) * s + si] += phi[row + si];
                }
            }
        }
    }

    double value(int agent, int meaning, int signal) const {
        return phi[(static_cast<std::size_t>(agent) * m + meaning) * s + signal];
    }

    // blind-success term for one ordered pair (i, j)
    double pair_term(int i, int j) const {
        double acc = 0.0;
        for (int mi = 0; mi < m; ++mi) {
            const std::size_t row_i = (static_cast<std::size_t>(i) * m + mi) * s;
            const std::size_t row_j = (static_cast<std::size_t>(j) * m + mi) * s;
            for (int si = 0; si < s; ++si) {
                acc += phi[row_i + si] * phi[row_j + si] / mass[static_cast<std::size_t>(j) * s + si];
            }
        }
        return acc / m;
    }
};

}  // namespace

double blind_success(const SocietyState& state) {
    const int n = state.agent_count();
    if (n < 2) throw std::invalid_argument("blind_success: need at least two agents");
    const PhiTables tables(state);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            total += tables.pair_term(i, j);
        }
    }
    return total / (static_cast<double>(n) * (n - 1));
}

SampledEstimate blind_success_sampled(const SocietyState& state, int pair_samples,
                                      RngStream& rng) {
    const int n = state.agent_count();
    if (n < 2) throw std::invalid_argument("blind_success_sampled: need at least two agents");
    if (pair_samples < 2) throw std::invalid_argument("blind_success_sampled: need >= 2 samples");
    const PhiTables tables(state);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < pair_samples; ++k) {
        const int i = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - 1)));
        if (j >= i) ++j;
        const double t = tables.pair_term(i, j);
        sum += t;
        sum_sq += t * t;
    }
    SampledEstimate est;
    est.value = sum / pair_samples;
    const double var = std::max(0.0, sum_sq / pair_samples - est.value * est.value);
    est.standard_error = std::sqrt(var / (pair_samples - 1));
    return est;
}

double communicative_gain(double p_s, int meaning_count, int signal_count) {
    if (signal_count < 2) throw std::invalid_argument("communicative_gain: S must be >= 2");
    return (meaning_count * p_s - 1.0) / (signal_count - 1.0);
}

DominanceProfile dominance_profile(const SocietyState& state) {
    const int n = state.agent_count();
    const int m = state.memory(0).meaning_count();
    const int s = state.memory(0).signal_count();

    DominanceProfile profile;
    profile.dominant_signal.assign(static_cast<std::size_t>(m), std::nullopt);
    std::vector<bool> signal_dominates(static_cast<std::size_t>(s), false);
    std::vector<double> row(static_cast<std::size_t>(s));
    std::vector<double> mean(static_cast<std::size_t>(s));

    for (int mi = 0; mi < m; ++mi) {
        std::fill(mean.begin(), mean.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            state.memory(j).production_distribution(mi, row);
            for (int si = 0; si < s; ++si) mean[static_cast<std::size_t>(si)] += row[static_cast<std::size_t>(si)];
        }
        for (int si = 0; si < s; ++si) {
            if (mean[static_cast<std::size_t>(si)] / n > 0.5) {  // strict threshold
                profile.dominant_signal[static_cast<std::size_t>(mi)] = si;
                signal_dominates[static_cast<std::size_t>(si)] = true;
                break;
            }
        }
    }
    for (bool d : signal_dominates) profile.distinct_count += d ? 1 : 0;
    return profile;
}

double signal_variability(const SocietyState& state) {
    const int n = state.agent_count();
    if (n < 2) throw std::invalid_argument("signal_variability: need at least two agents");
    const int m = state.memory(0).meaning_count();
    const int s = state.memory(0).signal_count();

    std::vector<double> row(static_cast<std::size_t>(s));
    double total = 0.0;
    int included = 0;
    for (int mi = 0; mi < m; ++mi) {
        double numerator = 0.0;
        double mean_sq = 0.0;
        for (int si = 0; si < s; ++si) {
            double s1 = 0.0, s2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double v = state.memory(j).phi(mi, si);
                s1 += v;
                s2 += v * v;
            }
            const double mean = s1 / n;
            numerator += s2 / n - mean * mean;  // population variance across agents
            mean_sq += mean * mean;
        }
        const double denominator = 1.0 - mean_sq;
        if (denominator < 1e-12) continue;  // society unanimously one-hot on this meaning
        total += numerator / denominator;
        ++included;
    }
    if (included == 0) {
        throw std::domain_error("signal_variability: undefined, every meaning unanimously one-hot");
    }
    return total / included;
}

}  // namespace emcomm
