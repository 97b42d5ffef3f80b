#pragma once

#include <optional>
#include <vector>

#include "emcomm/rng.hpp"

namespace emcomm {

class SocietyState;

// Society-mean dominant signal per meaning (present when its mean frequency
// strictly exceeds 1/2) and the number of distinct signals dominating at
// least one meaning.
struct DominanceProfile {
    std::vector<std::optional<int>> dominant_signal;  // one entry per meaning
    int distinct_count = 0;
};

struct MetricsRecord {
    double time = 0.0;
    double blind_success = 0.0;
    double gain = 0.0;
    double gain_window = 0.0;  // trailing average over the final-20% window width
    double variability = 0.0;
    DominanceProfile dominance;
};

// Probability that two random agents communicate a uniformly random meaning,
// averaged over ordered pairs. Exact evaluation; the inner per-(agent,signal)
// normalization is precomputed so the cost is O(N^2 M S).
double blind_success(const SocietyState& state);

struct SampledEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};
// Pair-sampled estimator for larger societies: averages the per-pair term
// over `pair_samples` ordered pairs drawn with replacement.
SampledEstimate blind_success_sampled(const SocietyState& state, int pair_samples,
                                      RngStream& rng);

// G = (M p_s - 1) / (S - 1): 0 at the non-communicative state, 1 at the
// maximum p_s = S/M.
double communicative_gain(double p_s, int meaning_count, int signal_count);

DominanceProfile dominance_profile(const SocietyState& state);

// Across-agent variability of signal frequencies, averaged over meanings.
// Meanings where the society is unanimously one-hot are excluded; if every
// meaning is excluded the statistic is undefined and a domain_error is thrown.
double signal_variability(const SocietyState& state);

}  // namespace emcomm
