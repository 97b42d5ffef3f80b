#pragma once

#include <span>
#include <vector>

#include "emcomm/rng.hpp"

namespace emcomm {

// Per-agent association memory: an M x S table of exponentially decayed
// counts n(s|m) plus a fixed prior mass alpha spread evenly over signals.
// The production distribution for meaning m is
//   phi(s|m) = (n(s|m) + alpha/S) / (sum_sigma n(sigma|m) + alpha),
// so an empty memory produces every signal with probability 1/S.
//
// Each time a meaning is interpreted, that row (and only that row) is scaled
// by (1-lambda); if the interaction is stored, the count for the produced
// signal is then incremented by one. The decay clock is therefore per
// meaning: rows of meanings that are never interpreted never decay.
class AssociationMemory {
  public:
    AssociationMemory(int meaning_count, int signal_count, double alpha, double lambda);

    int meaning_count() const { return meanings_; }
    int signal_count() const { return signals_; }
    double alpha() const { return alpha_; }
    double lambda() const { return lambda_; }

    double count(int m, int s) const { return counts_[idx(m, s)]; }
    double row_total(int m) const { return row_totals_[static_cast<std::size_t>(m)]; }

    // posterior predictive probability of producing signal s for meaning m
    double phi(int m, int s) const {
        return (counts_[idx(m, s)] + alpha_ / signals_) /
               (row_totals_[static_cast<std::size_t>(m)] + alpha_);
    }

    void production_distribution(int m, std::span<double> out) const;
    std::vector<double> production_distribution(int m) const;

    // psi(m|s) proportional to phi(s|m) * receiver_weights(m)
    void interpretation_distribution(std::span<const double> receiver_weights, int s,
                                     std::span<double> out) const;
    std::vector<double> interpretation_distribution(std::span<const double> receiver_weights,
                                                    int s) const;

    void record_interaction(int m, int s, bool store);

    int sample_production(int m, RngStream& rng) const;
    int sample_interpretation(std::span<const double> receiver_weights, int s, RngStream& rng,
                              std::span<double> scratch) const;

    std::span<const double> counts() const { return counts_; }
    // Replaces the whole table (snapshot load, constructed test states).
    void set_counts(std::span<const double> values);

  private:
    std::size_t idx(int m, int s) const {
        return static_cast<std::size_t>(m) * static_cast<std::size_t>(signals_) +
               static_cast<std::size_t>(s);
    }

    int meanings_;
    int signals_;
    double alpha_;
    double lambda_;
    std::vector<double> counts_;      // row-major M x S
    std::vector<double> row_totals_;  // exact sums of each row, refreshed per write
};

// One logged interaction as seen by the receiving agent.
struct InteractionHistoryEntry {
    int meaning = 0;  // interpreted meaning
    int signal = 0;
    bool stored = true;
};

// Direct evaluation of the posterior predictive table from a full history,
// independent of the incremental update path: for each meaning row the
// stored entries are weighted by (1-lambda)^(events on that row after them).
// Returns an M x S row-major table of phi values.
std::vector<double> batch_posterior_predictive(std::span<const InteractionHistoryEntry> history,
                                               double alpha, double lambda, int signal_count,
                                               int meaning_count);

}  // namespace emcomm
