#include "emcomm/attention.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace emcomm {

AttentionParams::AttentionParams(int M, double C, double A)
    : meaning_count(M), certainty(C), alignment(A) {
    if (M > 0) mean_weights.assign(static_cast<std::size_t>(M), 1.0 / M);
    validate();
}

AttentionParams::AttentionParams(int M, double C, double A, std::vector<double> mean)
    : meaning_count(M), certainty(C), alignment(A), mean_weights(std::move(mean)) {
    validate();
}

void AttentionParams::validate() const {
    std::ostringstream bad;
    if (meaning_count < 2) bad << "meaning_count must be >= 2; ";
    if (!(certainty >= 0.0 && certainty <= 1.0)) bad << "C must lie in [0,1]; ";
    if (!(alignment >= 0.0 && alignment <= 1.0)) bad << "A must lie in [0,1]; ";
    if (mean_weights.size() != static_cast<std::size_t>(meaning_count)) {
        bad << "mean_weights must have one entry per meaning; ";
    } else {
        double total = 0.0;
        bool positive = true;
        for (double w : mean_weights) {
            if (!(w > 0.0)) positive = false;
            total += w;
        }
        if (!positive) bad << "mean_weights entries must be > 0; ";
        if (std::abs(total - 1.0) > 1e-9) bad << "mean_weights must sum to 1; ";
    }
    const std::string msg = bad.str();
    if (!msg.empty()) throw std::invalid_argument("AttentionParams: " + msg);
}

double concentration_from_certainty(double certainty, int meaning_count) {
    if (meaning_count < 2) throw std::invalid_argument("concentration_from_certainty: M must be >= 2");
    if (!(certainty > 0.0 && certainty < 1.0)) {
        throw std::invalid_argument(
            "concentration_from_certainty: C out of range, must lie strictly inside (0,1)");
    }
    return (1.0 - certainty) / (certainty * meaning_count);
}

namespace {

std::size_t sample_mean_index(const AttentionParams& params, RngStream& rng) {
    return rng.categorical(params.mean_weights, 1.0);
}

void fill_one_hot(std::vector<double>& v, std::size_t m, std::size_t count) {
    v.assign(count, 0.0);
    v[m] = 1.0;
}

}  // namespace

void sample_attention_pair_into(const AttentionParams& params, RngStream& rng,
                                AttentionScratch& out) {
    const auto M = static_cast<std::size_t>(params.meaning_count);
    const double C = params.certainty;
    const double A = params.alignment;

    if (C <= 0.0) {
        out.signaller.assign(params.mean_weights.begin(), params.mean_weights.end());
        out.shared = rng.bernoulli(A);
        out.receiver = out.signaller;
        return;
    }
    if (C >= 1.0) {
        fill_one_hot(out.signaller, sample_mean_index(params, rng), M);
        out.shared = rng.bernoulli(A);
        if (out.shared) {
            out.receiver = out.signaller;
        } else {
            fill_one_hot(out.receiver, sample_mean_index(params, rng), M);
        }
        return;
    }

    out.signaller.resize(M);
    out.receiver.resize(M);
    const double total_concentration = (1.0 - C) / C;
    bool uniform_mean = true;
    for (double w : params.mean_weights) {
        if (std::abs(w * params.meaning_count - 1.0) > 1e-12) { uniform_mean = false; break; }
    }
    if (uniform_mean) {
        const double a = total_concentration / params.meaning_count;
        rng.dirichlet_symmetric(a, out.signaller);
        out.shared = rng.bernoulli(A);
        if (out.shared) {
            out.receiver = out.signaller;
        } else {
            rng.dirichlet_symmetric(a, out.receiver);
        }
    } else {
        std::vector<double> conc(M);
        for (std::size_t m = 0; m < M; ++m) conc[m] = params.mean_weights[m] * total_concentration;
        rng.dirichlet(conc, out.signaller);
        out.shared = rng.bernoulli(A);
        if (out.shared) {
            out.receiver = out.signaller;
        } else {
            rng.dirichlet(conc, out.receiver);
        }
    }
}

AttentionDraw sample_attention_pair(const AttentionParams& params, RngStream& rng) {
    AttentionScratch scratch;
    sample_attention_pair_into(params, rng, scratch);
    AttentionDraw draw;
    draw.signaller_weights = std::move(scratch.signaller);
    draw.receiver_weights = std::move(scratch.receiver);
    draw.shared = scratch.shared;
    return draw;
}

double estimate_certainty(std::span<const std::vector<double>> draws) {
    if (draws.size() < 2) throw std::invalid_argument("estimate_certainty: need >= 2 draws");
    const std::size_t M = draws[0].size();
    const double n = static_cast<double>(draws.size());

    double numerator = 0.0;
    double mean_sq_sum = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        double s1 = 0.0, s2 = 0.0;
        for (const auto& d : draws) {
            s1 += d[m];
            s2 += d[m] * d[m];
        }
        const double mean = s1 / n;
        numerator += s2 / n - mean * mean;
        mean_sq_sum += mean * mean;
    }
    const double denominator = 1.0 - mean_sq_sum;
    if (denominator < 1e-12) {
        throw std::domain_error("estimate_certainty: undefined, attention fixed on one meaning");
    }
    return numerator / denominator;
}

double estimate_alignment(std::span<const AttentionDraw> pairs) {
    if (pairs.size() < 2) throw std::invalid_argument("estimate_alignment: need >= 2 pairs");
    const std::size_t M = pairs[0].signaller_weights.size();
    const double n = static_cast<double>(pairs.size());

    double covariance_sum = 0.0;
    double scale_sum = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        double si = 0.0, sj = 0.0, sii = 0.0, sjj = 0.0, sij = 0.0;
        for (const auto& p : pairs) {
            const double a = p.signaller_weights[m];
            const double b = p.receiver_weights[m];
            si += a;
            sj += b;
            sii += a * a;
            sjj += b * b;
            sij += a * b;
        }
        const double mi = si / n;
        const double mj = sj / n;
        const double var_i = sii / n - mi * mi;
        const double var_j = sjj / n - mj * mj;
        covariance_sum += sij / n - mi * mj;
        scale_sum += std::sqrt(std::max(0.0, var_i) * std::max(0.0, var_j));
    }
    if (scale_sum < 1e-12) {
        throw std::domain_error("estimate_alignment: undefined, zero attention variance");
    }
    return covariance_sum / scale_sum;
}

}  // namespace emcomm
