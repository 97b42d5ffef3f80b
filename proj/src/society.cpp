#include "emcomm/society.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace emcomm {

void SocietyConfig::validate() const {
    std::ostringstream bad;
    if (agent_count < 2) bad << "N must be >= 2; ";
    if (meaning_count < 2) bad << "M must be >= 2; ";
    if (signal_count < 2) bad << "S must be >= 2; ";
    if (!(alpha > 0.0)) bad << "alpha must be > 0; ";
    if (!(lambda > 0.0 && lambda < 1.0)) bad << "lambda must lie in (0,1); ";
    if (!(certainty >= 0.0 && certainty <= 1.0)) bad << "C must lie in [0,1]; ";
    if (!(alignment >= 0.0 && alignment <= 1.0)) bad << "A must lie in [0,1]; ";
    if (!network.complete) {
        if (network.edges.empty()) bad << "network must contain at least one ordered pair; ";
        for (const auto& [i, j] : network.edges) {
            if (i < 0 || i >= agent_count || j < 0 || j >= agent_count) {
                bad << "network edge agent index out of range; ";
                break;
            }
            if (i == j) {
                bad << "network edges must connect distinct agents; ";
                break;
            }
        }
    }
    const std::string msg = bad.str();
    if (!msg.empty()) throw std::invalid_argument("SocietyConfig: " + msg);
}

namespace {
const SocietyConfig& validated(const SocietyConfig& config) {
    config.validate();
    return config;
}
}  // namespace

SocietyState::SocietyState(const SocietyConfig& config)
    : attention_(validated(config).meaning_count, config.certainty, config.alignment),
      rng_(RngStream::derive(config.seed, 0)) {
    memories_.reserve(static_cast<std::size_t>(config.agent_count));
    for (int agent = 0; agent < config.agent_count; ++agent) {
        memories_.emplace_back(config.meaning_count, config.signal_count, config.alpha,
                               config.lambda);
    }
    interpretation_scratch_.assign(static_cast<std::size_t>(config.meaning_count), 0.0);
}

SocietyState init_society(const SocietyConfig& config) { return SocietyState(config); }

InteractionRecord step(SocietyState& state, const SocietyConfig& config) {
    RngStream& rng = state.rng_;
    const int n = state.agent_count();

    InteractionRecord rec;
    if (config.network.complete) {
        rec.signaller = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        rec.receiver = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - 1)));
        if (rec.receiver >= rec.signaller) ++rec.receiver;
    } else {
        const auto& edge =
            config.network.edges[rng.uniform_index(config.network.edges.size())];
        rec.signaller = edge.first;
        rec.receiver = edge.second;
    }

    sample_attention_pair_into(state.attention_, rng, state.attention_scratch_);
    const auto& signaller_weights = state.attention_scratch_.signaller;
    const auto& receiver_weights = state.attention_scratch_.receiver;

    rec.topic = static_cast<int>(rng.categorical(signaller_weights, 1.0));
    rec.signal = state.memories_[static_cast<std::size_t>(rec.signaller)].sample_production(
        rec.topic, rng);
    rec.interpretation =
        state.memories_[static_cast<std::size_t>(rec.receiver)].sample_interpretation(
            receiver_weights, rec.signal, rng, state.interpretation_scratch_);
    rec.stored = !config.feedback || rec.interpretation == rec.topic;

    state.memories_[static_cast<std::size_t>(rec.receiver)].record_interaction(
        rec.interpretation, rec.signal, rec.stored);
    ++state.steps_;
    return rec;
}

std::vector<MetricsRecord> run(SocietyState& state, const SocietyConfig& config, double duration,
                               double cadence,
                               const std::function<void(const InteractionRecord&)>& on_interaction,
                               int p_s_sample_pairs) {
    if (duration < 0.0) throw std::invalid_argument("run: duration must be >= 0");
    if (!(cadence > 0.0)) throw std::invalid_argument("run: cadence must be > 0");

    const auto n = static_cast<double>(config.agent_count);
    const auto total_steps = static_cast<std::int64_t>(std::ceil(duration * n));
    std::vector<MetricsRecord> series;
    if (total_steps == 0) return series;

    RngStream metrics_rng = RngStream::derive(config.seed, 0x4D45545249435ULL);
    const double window_width = 0.2 * duration;
    const std::int64_t first_step = state.step_count();

    std::int64_t next_measure_index = 1;
    auto measure_step = [&](std::int64_t k) {
        return std::min<std::int64_t>(total_steps,
                                      static_cast<std::int64_t>(std::llround(k * cadence * n)));
    };

    for (std::int64_t t = 1; t <= total_steps; ++t) {
        const InteractionRecord rec = step(state, config);
        if (on_interaction) on_interaction(rec);

        std::int64_t due = measure_step(next_measure_index);
        while (due < t) {
            ++next_measure_index;
            due = measure_step(next_measure_index);
        }
        if (t == due) {
            MetricsRecord record;
            record.time = static_cast<double>(state.step_count() - first_step) / n;
            record.blind_success = p_s_sample_pairs > 0
                                       ? blind_success_sampled(state, p_s_sample_pairs, metrics_rng).value
                                       : blind_success(state);
            record.gain =
                communicative_gain(record.blind_success, config.meaning_count, config.signal_count);
            record.variability = signal_variability(state);
            record.dominance = dominance_profile(state);

            double gain_sum = record.gain;
            int gain_n = 1;
            for (auto it = series.rbegin(); it != series.rend(); ++it) {
                if (record.time - it->time > window_width + 1e-9) break;
                gain_sum += it->gain;
                ++gain_n;
            }
            record.gain_window = gain_sum / gain_n;
            series.push_back(std::move(record));
            ++next_measure_index;
        }
    }
    return series;
}

}  // namespace emcomm
