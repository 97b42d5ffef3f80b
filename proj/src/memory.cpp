#include "emcomm/memory.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace emcomm {

namespace {
constexpr double kCountFloor = 1e-300;  // clamp decayed counts below this to 0
}

AssociationMemory::AssociationMemory(int meaning_count, int signal_count, double alpha,
                                     double lambda)
    : meanings_(meaning_count), signals_(signal_count), alpha_(alpha), lambda_(lambda) {
    if (meaning_count < 1) throw std::invalid_argument("AssociationMemory: meaning_count must be >= 1");
    if (signal_count < 1) throw std::invalid_argument("AssociationMemory: signal_count must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("AssociationMemory: alpha must be > 0");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("AssociationMemory: lambda must lie in (0,1)");
    counts_.assign(static_cast<std::size_t>(meaning_count) * signal_count, 0.0);
    row_totals_.assign(static_cast<std::size_t>(meaning_count), 0.0);
}

void AssociationMemory::production_distribution(int m, std::span<double> out) const {
    const double prior = alpha_ / signals_;
    const double denom = row_totals_[static_cast<std::size_t>(m)] + alpha_;
    const std::size_t base = idx(m, 0);
    for (int s = 0; s < signals_; ++s) {
        out[static_cast<std::size_t>(s)] = (counts_[base + s] + prior) / denom;
    }
}

std::vector<double> AssociationMemory::production_distribution(int m) const {
    std::vector<double> out(static_cast<std::size_t>(signals_));
    production_distribution(m, out);
    return out;
}

void AssociationMemory::interpretation_distribution(std::span<const double> receiver_weights,
                                                    int s, std::span<double> out) const {
    double total = 0.0;
    for (int m = 0; m < meanings_; ++m) {
        const double w = phi(m, s) * receiver_weights[static_cast<std::size_t>(m)];
        out[static_cast<std::size_t>(m)] = w;
        total += w;
    }
    // alpha > 0 makes every phi positive, so the normalization cannot vanish
    // for valid receiver weights.
    assert(total > 0.0);
    for (int m = 0; m < meanings_; ++m) out[static_cast<std::size_t>(m)] /= total;
}

std::vector<double> AssociationMemory::interpretation_distribution(
    std::span<const double> receiver_weights, int s) const {
    std::vector<double> out(static_cast<std::size_t>(meanings_));
    interpretation_distribution(receiver_weights, s, out);
    return out;
}

void AssociationMemory::record_interaction(int m, int s, bool store) {
    const std::size_t base = idx(m, 0);
    const double keep = 1.0 - lambda_;
    double total = 0.0;
    for (int k = 0; k < signals_; ++k) {
        double c = counts_[base + k] * keep;
        if (c < kCountFloor) c = 0.0;
        counts_[base + k] = c;
        total += c;
    }
    if (store) {
        counts_[base + s] += 1.0;
        total += 1.0;
    }
    row_totals_[static_cast<std::size_t>(m)] = total;
}

int AssociationMemory::sample_production(int m, RngStream& rng) const {
    const double prior = alpha_ / signals_;
    const double total = row_totals_[static_cast<std::size_t>(m)] + alpha_;
    const std::size_t base = idx(m, 0);
    double target = rng.u01() * total;
    for (int s = 0; s + 1 < signals_; ++s) {
        target -= counts_[base + s] + prior;
        if (target < 0.0) return s;
    }
    return signals_ - 1;
}

int AssociationMemory::sample_interpretation(std::span<const double> receiver_weights, int s,
                                             RngStream& rng, std::span<double> scratch) const {
    double total = 0.0;
    for (int m = 0; m < meanings_; ++m) {
        const double w = phi(m, s) * receiver_weights[static_cast<std::size_t>(m)];
        scratch[static_cast<std::size_t>(m)] = w;
        total += w;
    }
    assert(total > 0.0);
    return static_cast<int>(rng.categorical(scratch.subspan(0, static_cast<std::size_t>(meanings_)), total));
}

void AssociationMemory::set_counts(std::span<const double> values) {
    if (values.size() != counts_.size()) {
        throw std::invalid_argument("set_counts: size mismatch");
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("set_counts: counts must be finite and >= 0");
        }
    }
    counts_.assign(values.begin(), values.end());
    for (int m = 0; m < meanings_; ++m) {
        double total = 0.0;
        for (int s = 0; s < signals_; ++s) total += counts_[idx(m, s)];
        row_totals_[static_cast<std::size_t>(m)] = total;
    }
}

std::vector<double> batch_posterior_predictive(std::span<const InteractionHistoryEntry> history,
                                               double alpha, double lambda, int signal_count,
                                               int meaning_count) {
    if (signal_count < 1 || meaning_count < 1) {
        throw std::invalid_argument("batch_posterior_predictive: table dimensions must be >= 1");
    }
    for (const auto& e : history) {
        if (e.meaning < 0 || e.meaning >= meaning_count || e.signal < 0 || e.signal >= signal_count) {
            throw std::invalid_argument("batch_posterior_predictive: entry index out of range");
        }
    }

    // events per meaning row, in order of occurrence
    std::vector<std::vector<const InteractionHistoryEntry*>> per_meaning(
        static_cast<std::size_t>(meaning_count));
    for (const auto& e : history) per_meaning[static_cast<std::size_t>(e.meaning)].push_back(&e);

    std::vector<double> table(static_cast<std::size_t>(meaning_count) * signal_count);
    const double prior = alpha / signal_count;
    for (int m = 0; m < meaning_count; ++m) {
        const auto& events = per_meaning[static_cast<std::size_t>(m)];
        const std::size_t k = events.size();
        std::vector<double> counts(static_cast<std::size_t>(signal_count), 0.0);
        double mass = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!events[i]->stored) continue;
            const double w = std::pow(1.0 - lambda, static_cast<double>(k - 1 - i));
            counts[static_cast<std::size_t>(events[i]->signal)] += w;
            mass += w;
        }
        const double denom = mass + alpha;
        for (int s = 0; s < signal_count; ++s) {
            table[static_cast<std::size_t>(m) * signal_count + s] =
                (counts[static_cast<std::size_t>(s)] + prior) / denom;
        }
    }
    return table;
}

}  // namespace emcomm
