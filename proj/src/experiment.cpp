#include "emcomm/experiment.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "emcomm/kvconfig.hpp"
#include "emcomm/metrics.hpp"

namespace emcomm {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void run_pool(int jobs, int task_count, const std::function<void(int)>& fn) {
    if (task_count <= 0) return;
    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, task_count);
    if (workers == 1) {
        for (int t = 0; t < task_count; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= task_count) return;
                fn(t);
            }
        });
    }
    for (auto& th : pool) th.join();
}

long long steps_of(const SocietyConfig& society, double duration) {
    return static_cast<long long>(std::ceil(duration * society.agent_count));
}

template <typename Fn>
double window_mean_fn(const std::vector<MetricsRecord>& series, double duration, Fn pick) {
    const double cutoff = 0.8 * duration - 1e-9;
    double sum = 0.0;
    int n = 0;
    for (const auto& r : series) {
        if (r.time < cutoff) continue;
        sum += pick(r);
        ++n;
    }
    return n > 0 ? sum / n : 0.0;
}

ReplicateOutcome run_one_replicate(const ExperimentConfig& cfg, std::uint64_t seed,
                                   const std::string& metrics_path,
                                   const std::string& snapshot_path,
                                   const std::string& interactions_path,
                                   std::uint64_t manifest_hash) {
    ReplicateOutcome out;
    try {
        SocietyConfig society = cfg.society;
        society.seed = seed;
        SocietyState state = init_society(society);

        std::ofstream log;
        std::function<void(const InteractionRecord&)> on_interaction;
        if (!interactions_path.empty()) {
            log.open(interactions_path);
            if (!log) throw std::runtime_error("cannot open " + interactions_path);
            log << "step,time,signaller,receiver,topic,signal,interpretation,stored\n";
            const double n = society.agent_count;
            on_interaction = [&log, n, counter = std::int64_t(0)](const InteractionRecord& rec) mutable {
                ++counter;
                log << counter << ',' << fmt(static_cast<double>(counter) / n) << ','
                    << rec.signaller << ',' << rec.receiver << ',' << rec.topic << ','
                    << rec.signal << ',' << rec.interpretation << ',' << (rec.stored ? 1 : 0)
                    << '\n';
            };
        }

        out.series = run(state, society, cfg.duration, cfg.effective_cadence(), on_interaction,
                         cfg.p_s_sample_pairs);

        out.g_window = window_mean_fn(out.series, cfg.duration,
                                      [](const MetricsRecord& r) { return r.gain; });
        out.v_window = window_mean_fn(out.series, cfg.duration,
                                      [](const MetricsRecord& r) { return r.variability; });
        out.d_window = window_mean_fn(out.series, cfg.duration, [](const MetricsRecord& r) {
            return static_cast<double>(r.dominance.distinct_count);
        });
        if (!out.series.empty()) {
            out.g_final = out.series.back().gain;
            out.v_final = out.series.back().variability;
            out.d_final = out.series.back().dominance.distinct_count;
        }

        if (!metrics_path.empty()) {
            std::ofstream csv(metrics_path);
            if (!csv) throw std::runtime_error("cannot open " + metrics_path);
            csv << "time,p_s,gain,gain_window,variability,dominant_count\n";
            for (const auto& r : out.series) {
                csv << fmt(r.time) << ',' << fmt(r.blind_success) << ',' << fmt(r.gain) << ','
                    << fmt(r.gain_window) << ',' << fmt(r.variability) << ','
                    << r.dominance.distinct_count << '\n';
            }
        }
        if (!snapshot_path.empty()) {
            write_snapshot(snapshot_path, state, society, manifest_hash);
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    society.validate();
    std::ostringstream bad;
    if (!(duration >= 0.0)) bad << "duration must be >= 0; ";
    if (cadence < 0.0) bad << "cadence must be >= 0; ";
    if (replicates < 1) bad << "replicates must be >= 1; ";
    if (jobs < 0) bad << "jobs must be >= 0; ";
    if (p_s_sample_pairs < 0) bad << "p_s_sample_pairs must be >= 0; ";
    if (max_total_steps < 1) bad << "max_total_steps must be >= 1; ";
    if (output_dir.empty()) bad << "output_dir must not be empty; ";
    static const std::vector<std::string> grid_keys = {"alpha", "C", "A", "M", "S", "N"};
    for (const auto& [key, values] : grid) {
        bool known = false;
        for (const auto& k : grid_keys) known = known || k == key;
        if (!known) bad << "grid key '" << key << "' is not sweepable; ";
        if (values.empty()) bad << "grid." << key << " must be non-empty; ";
    }
    if (preset && !is_known_preset(*preset)) bad << "unknown preset '" << *preset << "'; ";
    const std::string msg = bad.str();
    if (!msg.empty()) throw std::invalid_argument("ExperimentConfig: " + msg);
}

Aggregate aggregate_of(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.standard_error =
            std::sqrt(ss / (static_cast<double>(values.size()) - 1.0) / static_cast<double>(values.size()));
    }
    return a;
}

// ---------------------------------------------------------------------------
// config file handling

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    const auto entries = parse_kv_text(text, origin);
    ExperimentConfig cfg;
    bool cadence_set = false;
    std::vector<std::pair<int, int>> edges;
    bool network_explicit = false;

    for (const auto& e : entries) {
        const std::string& k = e.key;
        if (k == "N") cfg.society.agent_count = static_cast<int>(kv_int(e));
        else if (k == "M") cfg.society.meaning_count = static_cast<int>(kv_int(e));
        else if (k == "S") cfg.society.signal_count = static_cast<int>(kv_int(e));
        else if (k == "alpha") cfg.society.alpha = kv_double(e);
        else if (k == "lambda") cfg.society.lambda = kv_double(e);
        else if (k == "C") cfg.society.certainty = kv_double(e);
        else if (k == "A") cfg.society.alignment = kv_double(e);
        else if (k == "feedback") cfg.society.feedback = kv_bool(e);
        else if (k == "seed") cfg.society.seed = kv_uint64(e);
        else if (k == "duration") cfg.duration = kv_double(e);
        else if (k == "cadence") { cfg.cadence = kv_double(e); cadence_set = true; }
        else if (k == "replicates") cfg.replicates = static_cast<int>(kv_int(e));
        else if (k == "jobs") cfg.jobs = static_cast<int>(kv_int(e));
        else if (k == "output_dir") cfg.output_dir = e.value;
        else if (k == "snapshot") cfg.snapshot = kv_bool(e);
        else if (k == "log_interactions") cfg.log_interactions = kv_bool(e);
        else if (k == "p_s_sample_pairs") cfg.p_s_sample_pairs = static_cast<int>(kv_int(e));
        else if (k == "max_total_steps") cfg.max_total_steps = kv_int(e);
        else if (k == "preset") cfg.preset = e.value;
        else if (k == "network") {
            if (e.value == "complete") cfg.society.network.complete = true;
            else if (e.value == "edges") { cfg.society.network.complete = false; network_explicit = true; }
            else {
                std::ostringstream os;
                os << origin << ":" << e.line << ":" << e.column
                   << ": network must be 'complete' or 'edges', got '" << e.value << "'";
                throw std::runtime_error(os.str());
            }
        } else if (k == "edges") {
            std::istringstream in(e.value);
            std::string item;
            while (std::getline(in, item, ';')) {
                const std::size_t gt = item.find('>');
                if (gt == std::string::npos) {
                    std::ostringstream os;
                    os << origin << ":" << e.line << ":" << e.column
                       << ": edges entries must look like 'i>j'";
                    throw std::runtime_error(os.str());
                }
                edges.emplace_back(std::stoi(item.substr(0, gt)), std::stoi(item.substr(gt + 1)));
            }
        } else if (k.rfind("grid.", 0) == 0) {
            cfg.grid[k.substr(5)] = kv_double_list(e);
        } else {
            std::ostringstream os;
            os << origin << ":" << e.line << ":" << e.column << ": unknown key '" << k << "'";
            throw std::runtime_error(os.str());
        }
    }
    if (network_explicit) cfg.society.network.edges = std::move(edges);
    if (!cadence_set) cfg.cadence = 0.0;

    if (cfg.preset) {
        // Apply the preset's pinned base fields; the point grid is resolved at
        // expansion time. User-specified seed/output/replicates survive.
        ExperimentConfig pinned = cfg;
        const auto points = expand_preset(*cfg.preset, cfg);
        if (!points.empty()) {
            pinned.society = points.front().config.society;
            pinned.society.seed = cfg.society.seed;
            pinned.duration = points.front().config.duration;
            pinned.cadence = points.front().config.cadence;
            // Re-derive the sweepable axes actually varied by the preset.
            pinned.grid.clear();
            auto collect = [&](const std::string& key, auto getter) {
                std::vector<double> vals;
                for (const auto& p : points) {
                    const double v = getter(p.config.society);
                    bool seen = false;
                    for (double x : vals) seen = seen || x == v;
                    if (!seen) vals.push_back(v);
                }
                if (vals.size() > 1) pinned.grid[key] = vals;
            };
            collect("alpha", [](const SocietyConfig& s) { return s.alpha; });
            collect("C", [](const SocietyConfig& s) { return s.certainty; });
            collect("A", [](const SocietyConfig& s) { return s.alignment; });
            collect("M", [](const SocietyConfig& s) { return static_cast<double>(s.meaning_count); });
            collect("S", [](const SocietyConfig& s) { return static_cast<double>(s.signal_count); });
            collect("N", [](const SocietyConfig& s) { return static_cast<double>(s.agent_count); });
        }
        cfg = pinned;
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

std::string render_manifest(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "# emcomm run manifest\n";
    os << "N = " << cfg.society.agent_count << "\n";
    os << "M = " << cfg.society.meaning_count << "\n";
    os << "S = " << cfg.society.signal_count << "\n";
    os << "alpha = " << fmt_full(cfg.society.alpha) << "\n";
    os << "lambda = " << fmt_full(cfg.society.lambda) << "\n";
    os << "C = " << fmt_full(cfg.society.certainty) << "\n";
    os << "A = " << fmt_full(cfg.society.alignment) << "\n";
    os << "feedback = " << (cfg.society.feedback ? "true" : "false") << "\n";
    if (cfg.society.network.complete) {
        os << "network = complete\n";
    } else {
        os << "network = edges\n";
        os << "edges = ";
        for (std::size_t i = 0; i < cfg.society.network.edges.size(); ++i) {
            if (i) os << "; ";
            os << cfg.society.network.edges[i].first << '>' << cfg.society.network.edges[i].second;
        }
        os << "\n";
    }
    os << "seed = " << cfg.society.seed << "\n";
    os << "duration = " << fmt_full(cfg.duration) << "\n";
    os << "cadence = " << fmt_full(cfg.effective_cadence()) << "\n";
    os << "replicates = " << cfg.replicates << "\n";
    os << "jobs = " << cfg.jobs << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    os << "snapshot = " << (cfg.snapshot ? "true" : "false") << "\n";
    os << "log_interactions = " << (cfg.log_interactions ? "true" : "false") << "\n";
    os << "p_s_sample_pairs = " << cfg.p_s_sample_pairs << "\n";
    os << "max_total_steps = " << cfg.max_total_steps << "\n";
    for (const auto& [key, values] : cfg.grid) {
        os << "grid." << key << " = ";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) os << ", ";
            os << fmt_full(values[i]);
        }
        os << "\n";
    }
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string text = render_manifest(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// replicate execution

namespace {

ExperimentResult run_replicates_impl(const ExperimentConfig& cfg, std::uint64_t seed_offset,
                                     bool write_files) {
    cfg.validate();
    if (!cfg.grid.empty() && write_files) {
        throw std::invalid_argument("run_experiment: config declares a sweep grid; use sweep()");
    }
    const long long needed = static_cast<long long>(cfg.replicates) * steps_of(cfg.society, cfg.duration);
    if (needed > cfg.max_total_steps) {
        std::ostringstream os;
        os << "experiment budget exceeded: needs " << needed << " steps, max_total_steps = "
           << cfg.max_total_steps;
        throw std::runtime_error(os.str());
    }

    std::uint64_t hash = 0;
    std::string dir = cfg.output_dir;
    if (write_files) {
        hash = config_hash(cfg);
        fs::create_directories(dir);
    }

    ExperimentResult result;
    result.replicates.resize(static_cast<std::size_t>(cfg.replicates));
    run_pool(cfg.jobs, cfg.replicates, [&](int r) {
        char tag[16];
        std::snprintf(tag, sizeof(tag), "%03d", r);
        const std::string metrics_path =
            write_files ? dir + "/metrics_rep" + tag + ".csv" : std::string();
        const std::string snapshot_path =
            (write_files && cfg.snapshot) ? dir + "/snapshot_rep" + tag + ".txt" : std::string();
        const std::string log_path =
            (write_files && cfg.log_interactions) ? dir + "/interactions_rep" + tag + ".csv"
                                                  : std::string();
        result.replicates[static_cast<std::size_t>(r)] =
            run_one_replicate(cfg, derive_seed(cfg.society.seed, seed_offset + static_cast<std::uint64_t>(r)),
                              metrics_path, snapshot_path, log_path, hash);
    });

    std::vector<double> g_window, g_final, v_window, v_final, d_window, d_final;
    for (const auto& rep : result.replicates) {
        if (!rep.ok) continue;
        ++result.ok_count;
        g_window.push_back(rep.g_window);
        g_final.push_back(rep.g_final);
        v_window.push_back(rep.v_window);
        v_final.push_back(rep.v_final);
        d_window.push_back(rep.d_window);
        d_final.push_back(static_cast<double>(rep.d_final));
    }
    result.g_window = aggregate_of(g_window);
    result.g_final = aggregate_of(g_final);
    result.v_window = aggregate_of(v_window);
    result.v_final = aggregate_of(v_final);
    result.d_window = aggregate_of(d_window);
    result.d_final = aggregate_of(d_final);

    if (write_files) {
        std::ofstream agg(dir + "/aggregate.csv");
        if (!agg) throw std::runtime_error("cannot open " + dir + "/aggregate.csv");
        agg << "replicates,ok_replicates,g_window_mean,g_window_se,g_final_mean,g_final_se,"
               "v_window_mean,v_window_se,d_window_mean,d_window_se,d_final_mean,d_final_se\n";
        agg << cfg.replicates << ',' << result.ok_count << ',' << fmt(result.g_window.mean) << ','
            << fmt(result.g_window.standard_error) << ',' << fmt(result.g_final.mean) << ','
            << fmt(result.g_final.standard_error) << ',' << fmt(result.v_window.mean) << ','
            << fmt(result.v_window.standard_error) << ',' << fmt(result.d_window.mean) << ','
            << fmt(result.d_window.standard_error) << ',' << fmt(result.d_final.mean) << ','
            << fmt(result.d_final.standard_error) << '\n';

        std::ofstream manifest(dir + "/manifest.txt");
        if (!manifest) throw std::runtime_error("cannot open " + dir + "/manifest.txt");
        char hash_hex[24];
        std::snprintf(hash_hex, sizeof(hash_hex), "%016" PRIx64, hash);
        manifest << render_manifest(cfg);
        manifest << "# config_hash = " << hash_hex << "\n";
        for (int r = 0; r < cfg.replicates; ++r) {
            const auto& rep = result.replicates[static_cast<std::size_t>(r)];
            manifest << "# replicate " << r << ": " << (rep.ok ? "ok" : "failed: " + rep.error)
                     << "\n";
        }
    }
    return result;
}

}  // namespace

ExperimentResult run_replicates(const ExperimentConfig& cfg) {
    return run_replicates_impl(cfg, 0, false);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    return run_replicates_impl(cfg, 0, true);
}

// ---------------------------------------------------------------------------
// sweeps

namespace {

std::vector<SocietyConfig> expand_grid(const ExperimentConfig& cfg) {
    // canonical nesting order so output rows are reproducible
    static const char* order[] = {"alpha", "C", "A", "M", "S", "N"};
    std::vector<SocietyConfig> points{cfg.society};
    for (const char* key : order) {
        const auto it = cfg.grid.find(key);
        if (it == cfg.grid.end()) continue;
        std::vector<SocietyConfig> next;
        next.reserve(points.size() * it->second.size());
        for (const auto& base : points) {
            for (double v : it->second) {
                SocietyConfig p = base;
                const std::string k = key;
                if (k == "alpha") p.alpha = v;
                else if (k == "C") p.certainty = v;
                else if (k == "A") p.alignment = v;
                else if (k == "M") p.meaning_count = static_cast<int>(std::llround(v));
                else if (k == "S") p.signal_count = static_cast<int>(std::llround(v));
                else if (k == "N") p.agent_count = static_cast<int>(std::llround(v));
                next.push_back(p);
            }
        }
        points = std::move(next);
    }
    return points;
}

SweepRow make_row(const SocietyConfig& point, const ExperimentResult& res) {
    SweepRow row;
    row.point = point;
    row.lambda_alpha = point.lambda * point.alpha;
    row.gamma = point.feedback
                    ? threshold_gamma_feedback(point.meaning_count)
                    : threshold_gamma_no_feedback(point.certainty, point.alignment, point.lambda,
                                                  point.alpha, point.meaning_count);
    row.ratio = row.lambda_alpha / row.gamma;
    row.regime = classify_regime(row.lambda_alpha, row.gamma, point.signal_count);
    row.g_window = res.g_window;
    row.g_final_mean = res.g_final.mean;
    row.v_window_mean = res.v_window.mean;
    row.g_above_half = res.g_window.mean > 0.5;
    return row;
}

}  // namespace

namespace {

// Heterogeneous point list: each point carries its own full config (presets
// vary duration and replicates per point); seeds are drawn flat from the
// master so a single-point sweep reproduces run_experiment exactly.
std::vector<SweepRow> sweep_configs(const std::vector<ExperimentConfig>& cfgs,
                                    std::uint64_t master_seed, int jobs, long long budget) {
    if (cfgs.empty()) throw std::invalid_argument("sweep: empty grid");
    long long needed = 0;
    std::vector<int> first_task(cfgs.size() + 1, 0);
    for (std::size_t p = 0; p < cfgs.size(); ++p) {
        needed += static_cast<long long>(cfgs[p].replicates) *
                  steps_of(cfgs[p].society, cfgs[p].duration);
        first_task[p + 1] = first_task[p] + cfgs[p].replicates;
    }
    if (needed > budget) {
        std::ostringstream os;
        os << "sweep budget exceeded: needs " << needed << " steps, max_total_steps = " << budget;
        throw std::runtime_error(os.str());
    }

    const int total_tasks = first_task.back();
    std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(total_tasks));
    run_pool(jobs, total_tasks, [&](int t) {
        std::size_t point_idx = 0;
        while (first_task[point_idx + 1] <= t) ++point_idx;
        outcomes[static_cast<std::size_t>(t)] = run_one_replicate(
            cfgs[point_idx], derive_seed(master_seed, static_cast<std::uint64_t>(t)), "", "", "",
            0);
    });

    std::vector<SweepRow> rows;
    rows.reserve(cfgs.size());
    for (std::size_t p = 0; p < cfgs.size(); ++p) {
        ExperimentResult res;
        std::vector<double> g_window, g_final, v_window, v_final, d_window, d_final;
        for (int r = first_task[p]; r < first_task[p + 1]; ++r) {
            const auto& o = outcomes[static_cast<std::size_t>(r)];
            res.replicates.push_back(o);
            if (!o.ok) continue;
            ++res.ok_count;
            g_window.push_back(o.g_window);
            g_final.push_back(o.g_final);
            v_window.push_back(o.v_window);
            v_final.push_back(o.v_final);
            d_window.push_back(o.d_window);
            d_final.push_back(static_cast<double>(o.d_final));
        }
        res.g_window = aggregate_of(g_window);
        res.g_final = aggregate_of(g_final);
        res.v_window = aggregate_of(v_window);
        res.v_final = aggregate_of(v_final);
        res.d_window = aggregate_of(d_window);
        res.d_final = aggregate_of(d_final);
        rows.push_back(make_row(cfgs[p].society, res));
    }
    return rows;
}

}  // namespace

std::vector<SweepRow> sweep_points(const ExperimentConfig& base,
                                   const std::vector<SocietyConfig>& points) {
    std::vector<ExperimentConfig> cfgs;
    cfgs.reserve(points.size());
    for (const auto& p : points) {
        ExperimentConfig cfg = base;
        cfg.society = p;
        cfg.society.seed = base.society.seed;
        cfgs.push_back(std::move(cfg));
    }
    return sweep_configs(cfgs, base.society.seed, base.jobs, base.max_total_steps);
}

std::vector<SweepRow> sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<SweepRow> rows;
    if (cfg.preset) {
        std::vector<ExperimentConfig> cfgs;
        for (const auto& p : expand_preset(*cfg.preset, cfg)) cfgs.push_back(p.config);
        rows = sweep_configs(cfgs, cfg.society.seed, cfg.jobs, cfg.max_total_steps);
    } else {
        rows = sweep_points(cfg, expand_grid(cfg));
    }

    fs::create_directories(cfg.output_dir);
    write_sweep_csv(cfg.output_dir + "/sweep.csv", rows);
    std::ofstream manifest(cfg.output_dir + "/manifest.txt");
    if (!manifest) throw std::runtime_error("cannot open " + cfg.output_dir + "/manifest.txt");
    char hash_hex[24];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016" PRIx64, config_hash(cfg));
    manifest << render_manifest(cfg);
    manifest << "# config_hash = " << hash_hex << "\n";
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot open " + path);
    csv << "alpha,C,A,M,S,N,feedback,lambda,lambda_alpha,gamma,ratio,noncomm_unstable,"
           "comm_exists,bistable,x_c,predicted_gain,g_window_mean,g_window_se,g_final_mean,"
           "v_window_mean,g_above_half\n";
    for (const auto& row : rows) {
        csv << fmt(row.point.alpha) << ',' << fmt(row.point.certainty) << ','
            << fmt(row.point.alignment) << ',' << row.point.meaning_count << ','
            << row.point.signal_count << ',' << row.point.agent_count << ','
            << (row.point.feedback ? 1 : 0) << ',' << fmt(row.point.lambda) << ','
            << fmt(row.lambda_alpha) << ',' << fmt(row.gamma) << ',' << fmt(row.ratio) << ','
            << (row.regime.noncomm_unstable ? 1 : 0) << ',' << (row.regime.comm_exists ? 1 : 0)
            << ',' << (row.regime.bistable ? 1 : 0) << ','
            << (row.regime.x_c ? fmt(*row.regime.x_c) : "") << ','
            << (row.regime.predicted_gain_at_fixed_point
                    ? fmt(*row.regime.predicted_gain_at_fixed_point)
                    : "")
            << ',' << fmt(row.g_window.mean) << ',' << fmt(row.g_window.standard_error) << ','
            << fmt(row.g_final_mean) << ',' << fmt(row.v_window_mean) << ','
            << (row.g_above_half ? 1 : 0) << '\n';
    }
}

// ---------------------------------------------------------------------------
// snapshots

void write_snapshot(const std::string& path, const SocietyState& state,
                    const SocietyConfig& society, std::uint64_t hash) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    char hash_hex[24];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016" PRIx64, hash);
    out << "emcomm-snapshot v1\n";
    out << "config_hash " << hash_hex << "\n";
    out << "clock " << fmt_full(state.clock()) << "\n";
    out << "agents " << state.agent_count() << "\n";
    out << "meanings " << society.meaning_count << "\n";
    out << "signals " << society.signal_count << "\n";
    out << "alpha " << fmt_full(society.alpha) << "\n";
    out << "lambda " << fmt_full(society.lambda) << "\n";
    for (int agent = 0; agent < state.agent_count(); ++agent) {
        out << "agent " << agent << "\n";
        const auto counts = state.memory(agent).counts();
        for (int m = 0; m < society.meaning_count; ++m) {
            for (int s = 0; s < society.signal_count; ++s) {
                if (s) out << ' ';
                out << fmt_full(counts[static_cast<std::size_t>(m) * society.signal_count + s]);
            }
            out << "\n";
        }
    }
    out << "end\n";
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line != "emcomm-snapshot v1") throw std::runtime_error(path + ": not an emcomm snapshot");

    Snapshot snap;
    std::string word;
    in >> word >> std::hex >> snap.config_hash >> std::dec;
    if (word != "config_hash") throw std::runtime_error(path + ": malformed snapshot header");
    in >> word >> snap.clock;
    in >> word >> snap.agent_count;
    in >> word >> snap.meaning_count;
    in >> word >> snap.signal_count;
    in >> word >> snap.alpha;
    in >> word >> snap.lambda;
    snap.counts.resize(static_cast<std::size_t>(snap.agent_count));
    for (int agent = 0; agent < snap.agent_count; ++agent) {
        int idx = -1;
        in >> word >> idx;
        if (word != "agent" || idx != agent) throw std::runtime_error(path + ": malformed agent block");
        auto& table = snap.counts[static_cast<std::size_t>(agent)];
        table.resize(static_cast<std::size_t>(snap.meaning_count) *
                     static_cast<std::size_t>(snap.signal_count));
        for (auto& v : table) in >> v;
    }
    in >> word;
    if (word != "end" || !in) throw std::runtime_error(path + ": truncated snapshot");
    return snap;
}

}  // namespace emcomm
