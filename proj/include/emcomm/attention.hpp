#pragma once

#include <span>
#include <vector>

#include "emcomm/rng.hpp"

namespace emcomm {

// Statistical description of how interacting agents spread their attention
// over meanings: C is the certainty (how concentrated the weights are in any
// one interaction), A the alignment (how strongly signaller and receiver
// weights covary within an interaction).
struct AttentionParams {
    int meaning_count = 2;             // M
    double certainty = 0.0;            // C in [0,1]
    double alignment = 0.0;            // A in [0,1]
    std::vector<double> mean_weights;  // long-run weight per meaning, sums to 1

    AttentionParams(int M, double C, double A);
    AttentionParams(int M, double C, double A, std::vector<double> mean);

    void validate() const;  // throws std::invalid_argument naming each bad field
};

// One interaction's weight pair. `shared` records whether the receiver copied
// the signaller's weights (the copy branch) rather than drawing independently.
struct AttentionDraw {
    std::vector<double> signaller_weights;
    std::vector<double> receiver_weights;
    bool shared = false;
};

// Per-component concentration of the symmetric Dirichlet whose draws have
// certainty exactly C over M meanings: a = (1-C)/(C*M). Valid for 0 < C < 1;
// the C=0 and C=1 limits are handled directly by sample_attention_pair.
double concentration_from_certainty(double certainty, int meaning_count);

AttentionDraw sample_attention_pair(const AttentionParams& params, RngStream& rng);

// Allocation-free variant for the simulation hot loop. Buffers are resized on
// first use and reused afterwards.
struct AttentionScratch {
    std::vector<double> signaller;
    std::vector<double> receiver;
    bool shared = false;
};
void sample_attention_pair_into(const AttentionParams& params, RngStream& rng,
                                AttentionScratch& out);

// Moment estimators inverting the two statistics from samples.
double estimate_certainty(std::span<const std::vector<double>> draws);
double estimate_alignment(std::span<const AttentionDraw> pairs);

}  // namespace emcomm
