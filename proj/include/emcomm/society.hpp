#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "emcomm/attention.hpp"
#include "emcomm/memory.hpp"
#include "emcomm/metrics.hpp"
#include "emcomm/rng.hpp"

namespace emcomm {

// Interaction graph as a list of ordered (signaller, receiver) pairs; the
// complete graph is the default and is sampled directly without
// materializing its edges.
struct NetworkSpec {
    bool complete = true;
    std::vector<std::pair<int, int>> edges;  // used when complete == false
};

struct SocietyConfig {
    int agent_count = 20;    // N
    int meaning_count = 55;  // M
    int signal_count = 11;   // S
    double alpha = 0.05;
    double lambda = 0.01;
    double certainty = 0.1;  // C
    double alignment = 1.0;  // A
    bool feedback = false;   // store only on interpretation == topic
    NetworkSpec network;
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument listing offending fields
};

struct InteractionRecord {
    int signaller = 0;
    int receiver = 0;
    int topic = 0;           // meaning sampled by the signaller
    int signal = 0;
    int interpretation = 0;  // meaning inferred by the receiver
    bool stored = false;
};

// All agent memories plus the interaction clock. One interaction advances the
// clock by 1/N, so each agent receives on average once per unit time. A state
// is strictly sequential; run replicates concurrently by giving each its own
// state with a derived seed.
class SocietyState {
  public:
    explicit SocietyState(const SocietyConfig& config);

    int agent_count() const { return static_cast<int>(memories_.size()); }
    double clock() const { return static_cast<double>(steps_) / agent_count(); }
    std::int64_t step_count() const { return steps_; }

    const AssociationMemory& memory(int agent) const { return memories_[static_cast<std::size_t>(agent)]; }
    AssociationMemory& memory(int agent) { return memories_[static_cast<std::size_t>(agent)]; }

    RngStream& rng() { return rng_; }

  private:
    friend InteractionRecord step(SocietyState&, const SocietyConfig&);

    std::vector<AssociationMemory> memories_;
    AttentionParams attention_;
    RngStream rng_;
    std::int64_t steps_ = 0;
    AttentionScratch attention_scratch_;
    std::vector<double> interpretation_scratch_;
};

SocietyState init_society(const SocietyConfig& config);

// One interaction: pick an ordered pair, draw the attention pair, sample
// topic, signal and interpretation, then update the receiver's memory row.
InteractionRecord step(SocietyState& state, const SocietyConfig& config);

// Executes ceil(duration * N) steps, measuring every `cadence` time units
// (and at the end of the run). gain_window carries a trailing average whose
// width is 20% of `duration`. `on_interaction`, when set, sees every record.
// p_s_sample_pairs > 0 switches blind success to the pair-sampled estimator
// with that many pairs, drawn from a dedicated metrics stream so the
// simulation trajectory is unaffected.
std::vector<MetricsRecord> run(
    SocietyState& state, const SocietyConfig& config, double duration, double cadence,
    const std::function<void(const InteractionRecord&)>& on_interaction = {},
    int p_s_sample_pairs = 0);

}  // namespace emcomm
