#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "ppq/errors.hpp"
#include "ppq/eval.hpp"
#include "ppq/ingest.hpp"
#include "ppq/pipeline.hpp"
#include "ppq/query.hpp"
#include "ppq/summary.hpp"

namespace {

using namespace ppq;

struct DatasetArgs {
    std::string input;
    std::string format = "canonical";
    size_t min_length = 1;
    size_t max_trajectories = 0;
};

void add_dataset_flags(CLI::App* cmd, DatasetArgs& d) {
    cmd->add_option("--input", d.input, "dataset path (file, or directory for geolife)")
        ->required();
    cmd->add_option("--format", d.format, "canonical|porto|geolife")
        ->check(CLI::IsMember({"canonical", "porto", "geolife"}));
    cmd->add_option("--min-length", d.min_length, "drop trajectories shorter than this");
    cmd->add_option("--max-trajectories", d.max_trajectories, "keep at most this many (0 = all)");
}

std::vector<Trajectory> load_dataset(const DatasetArgs& d) {
    std::vector<Trajectory> trajs;
    if (d.format == "canonical") {
        trajs = parse_canonical(d.input);
        if (d.min_length > 1) {
            std::erase_if(trajs, [&](const Trajectory& t) {
                return t.points.size() < d.min_length;
            });
        }
    } else if (d.format == "porto") {
        trajs = parse_porto(d.input, d.min_length, d.max_trajectories);
    } else {
        trajs = parse_geolife(d.input, d.min_length);
    }
    if (d.max_trajectories > 0 && trajs.size() > d.max_trajectories) {
        trajs.resize(d.max_trajectories);
    }
    validate_trajectories(trajs);
    return trajs;
}

void add_config_flags(CLI::App* cmd, Config& c, std::string& mode, bool& no_cqc) {
    cmd->add_option("--eps1", c.eps1, "spatial deviation threshold (coordinate units)");
    cmd->add_option("--eps-p", c.eps_p, "partition threshold");
    cmd->add_option("--eps-s", c.eps_s, "index partition threshold");
    cmd->add_option("--eps-c", c.eps_c, "region density dropping-rate threshold");
    cmd->add_option("--eps-d", c.eps_d, "index rebuild threshold");
    cmd->add_option("--gc", c.g_c_m, "index grid cell size (meters)");
    cmd->add_option("--gs", c.g_s_m, "correction grid cell size (meters)");
    cmd->add_option("-k,--lag", c.k, "prediction lag order");
    cmd->add_option("--mode", mode, "ppq-s|ppq-a|epq|q-traj");
    cmd->add_option("--units-per-meter", c.units_per_meter, "coordinate units per meter");
    cmd->add_flag("--no-cqc", no_cqc, "disable correction codes");
    cmd->add_option("--page-bytes", c.page_bytes, "logical page size for I/O accounting");
}

int run(int argc, char** argv) {
    CLI::App app{"Trajectory stream summarization and querying"};
    app.require_subcommand(1);

    // --- summarize ---
    auto* summarize = app.add_subcommand("summarize", "build a summary file from a dataset");
    DatasetArgs sum_data;
    Config cfg;
    std::string mode_str = "ppq-s";
    bool no_cqc = false;
    std::string sum_out;
    bool verify = false;
    add_dataset_flags(summarize, sum_data);
    add_config_flags(summarize, cfg, mode_str, no_cqc);
    summarize->add_option("--output", sum_out, "summary file path")->required();
    summarize->add_flag("--verify", verify, "recheck the deviation bound against the input");

    // --- query ---
    auto* query = app.add_subcommand("query", "run a range or path query against a summary");
    std::string q_summary;
    double qx = 0.0, qy = 0.0;
    Timestamp qt = 1, ql = 0;
    bool exact = false;
    std::string verify_raw;
    query->add_option("--summary", q_summary, "summary file")->required();
    query->add_option("--x", qx, "query x (coordinate units)")->required();
    query->add_option("--y", qy, "query y (coordinate units)")->required();
    query->add_option("--t", qt, "query timestamp")->required();
    query->add_option("--l", ql, "path duration; omit for a range query");
    query->add_flag("--exact", exact, "exact answer via local search (default approximate)");
    query->add_option("--verify-raw", verify_raw,
                      "canonical CSV of originals; report raw-point verification separately");

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "compute summary quality metrics");
    std::string e_summary;
    DatasetArgs eval_data;
    bool want_mae = false, want_ratio = false, want_pr = false, want_io = false;
    uint64_t eval_queries = 200;
    uint64_t eval_seed = 1;
    eval->add_option("--summary", e_summary, "summary file")->required();
    add_dataset_flags(eval, eval_data);
    eval->add_flag("--mae", want_mae, "mean absolute error (meters)");
    eval->add_flag("--ratio", want_ratio, "compression ratio");
    eval->add_flag("--pr", want_pr, "precision/recall of exact queries vs full scan");
    eval->add_flag("--io", want_io, "distinct logical pages touched by a random query trace");
    eval->add_option("--queries", eval_queries, "random query count for --pr/--io");
    eval->add_option("--seed", eval_seed, "random query seed");

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic dataset");
    SynthParams sp;
    std::string motion_str = "random_walk";
    std::string synth_out;
    synth->add_option("--n", sp.n, "trajectory count");
    synth->add_option("--steps", sp.steps, "points per trajectory");
    synth->add_option("--motion", motion_str, "random_walk|constant_velocity|ar");
    synth->add_option("--sigma", sp.sigma, "noise scale (coordinate units)");
    synth->add_option("--extent", sp.extent, "start-region side length");
    synth->add_option("--drift-x", sp.drift_x, "constant per-step drift, x");
    synth->add_option("--drift-y", sp.drift_y, "constant per-step drift, y");
    synth->add_option("--seed", sp.seed, "generator seed");
    synth->add_option("--output", synth_out, "canonical CSV path")->required();

    // --- inspect ---
    auto* inspect = app.add_subcommand("inspect", "print summary header and statistics");
    std::string i_summary;
    inspect->add_option("--summary", i_summary, "summary file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // every parse failure is a usage error
    }

    if (summarize->parsed()) {
        cfg.mode = partition_mode_from_string(mode_str);
        cfg.cqc_enabled = !no_cqc;
        cfg.validate();
        auto t0 = std::chrono::steady_clock::now();
        std::vector<Trajectory> trajs = load_dataset(sum_data);
        std::vector<StreamBatch> batches = to_batches(trajs);
        Summarizer summarizer(cfg);
        for (const StreamBatch& b : batches) summarizer.push(b);
        Summary summary = summarizer.finish();
        std::vector<uint8_t> bytes = serialize_summary(summary);
        write_file(sum_out, bytes);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0).count();

        size_t max_parts = 0;
        for (const auto& [t, step] : summary.steps) {
            max_parts = std::max(max_parts, step.partitions.partitions.size());
        }
        std::printf("trajectories: %zu\n", summary.trajectories.size());
        std::printf("points: %llu\n",
                    static_cast<unsigned long long>(summary.total_points()));
        std::printf("codebook: %zu\n", summary.codebook.size());
        std::printf("max partitions per step: %zu\n", max_parts);
        std::printf("periods: %zu\n", summary.index.periods.size());
        std::printf("summary bytes: %zu\n", bytes.size());
        std::printf("elapsed ms: %lld\n", static_cast<long long>(ms));

        if (verify) {
            auto all = oracle_reconstruct_all(summary);
            double worst = 0.0;
            for (const Trajectory& traj : trajs) {
                const auto& pts = all.at(traj.id);
                for (size_t j = 0; j < traj.points.size(); ++j) {
                    worst = std::max(worst, dist(traj.points[j].pos(), pts[j]));
                }
            }
            std::printf("verify: max refined deviation %.9g (bound %.9g)\n", worst,
                        summary.config.cqc_enabled
                            ? std::sqrt(2.0) / 2.0 * summary.config.gs_units()
                            : summary.config.eps1);
        }
        return 0;
    }

    if (query->parsed()) {
        Summary summary = deserialize_summary(read_file(q_summary));
        if (ql > 0) {
            auto res = tpq(summary, {qx, qy, qt, ql});
            std::printf("traj_id,t,x,y\n");
            for (const auto& [id, pts] : res) {
                for (size_t i = 0; i < pts.size(); ++i) {
                    std::printf("%llu,%lld,%.17g,%.17g\n", static_cast<unsigned long long>(id),
                                static_cast<long long>(qt + static_cast<Timestamp>(i)),
                                pts[i].x, pts[i].y);
                }
            }
        } else {
            std::vector<TrajectoryId> ids = exact ? strq_exact(summary, {qx, qy, qt})
                                                  : strq_approx(summary, {qx, qy, qt});
            std::printf("traj_id\n");
            for (TrajectoryId id : ids) {
                std::printf("%llu\n", static_cast<unsigned long long>(id));
            }
            if (!verify_raw.empty()) {
                std::vector<Trajectory> trajs = parse_canonical(verify_raw);
                CellKey qcell = cell_of({qx, qy}, summary.config.gc_units());
                size_t confirmed = 0;
                for (TrajectoryId id : ids) {
                    for (const Trajectory& traj : trajs) {
                        if (traj.id != id) continue;
                        for (const TrajectoryPoint& p : traj.points) {
                            if (p.t == qt && cell_of(p.pos(), summary.config.gc_units()) == qcell) {
                                ++confirmed;
                            }
                        }
                    }
                }
                std::printf("# raw-verified %zu of %zu\n", confirmed, ids.size());
            }
        }
        return 0;
    }

    if (eval->parsed()) {
        std::vector<uint8_t> bytes = read_file(e_summary);
        Summary summary = deserialize_summary(bytes);
        std::vector<Trajectory> trajs = load_dataset(eval_data);
        if (trajs.size() != summary.trajectories.size()) {
            throw DataError("dataset does not match summary (trajectory count differs)");
        }
        auto refined = oracle_reconstruct_all(summary);

        std::printf("metric,value\n");
        if (want_mae) {
            std::vector<Point> orig, recon;
            for (const Trajectory& traj : trajs) {
                auto it = refined.find(traj.id);
                if (it == refined.end() || it->second.size() != traj.points.size()) {
                    throw DataError("dataset does not match summary (trajectory " +
                                    std::to_string(traj.id) + " differs)");
                }
                for (size_t i = 0; i < traj.points.size(); ++i) {
                    orig.push_back(traj.points[i].pos());
                    recon.push_back(it->second[i]);
                }
            }
            std::printf("mae_m,%.9g\n", mae_meters(orig, recon, summary.config.units_per_meter));
        }
        if (want_ratio) {
            std::printf("ratio,%.9g\n",
                        compression_ratio(summary.total_points(), bytes.size()));
        }
        if (want_pr || want_io) {
            std::mt19937_64 rng(eval_seed);
            Timestamp t_max = 1;
            Rect box{0, 0, 0, 0};
            bool first = true;
            for (const Trajectory& traj : trajs) {
                for (const TrajectoryPoint& p : traj.points) {
                    t_max = std::max(t_max, p.t);
                    if (first) {
                        box = {p.x, p.y, p.x, p.y};
                        first = false;
                    } else {
                        box.x0 = std::min(box.x0, p.x);
                        box.y0 = std::min(box.y0, p.y);
                        box.x1 = std::max(box.x1, p.x);
                        box.y1 = std::max(box.y1, p.y);
                    }
                }
            }
            std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(box.y0, box.y1);
            std::uniform_int_distribution<Timestamp> ut(1, t_max);
            std::vector<StrqQuery> trace;
            for (uint64_t i = 0; i < eval_queries; ++i) {
                trace.push_back({ux(rng), uy(rng), ut(rng)});
            }
            if (want_pr) {
                double psum = 0.0, rsum = 0.0;
                for (const StrqQuery& q : trace) {
                    auto [p, r] = precision_recall(strq_exact(summary, q),
                                                   oracle_strq(summary, refined, q));
                    psum += p;
                    rsum += r;
                }
                std::printf("precision,%.9g\n", psum / trace.size());
                std::printf("recall,%.9g\n", rsum / trace.size());
            }
            if (want_io) {
                std::printf("pages,%llu\n", static_cast<unsigned long long>(
                                                page_io_count(bytes, summary, trace)));
            }
        }
        return 0;
    }

    if (synth->parsed()) {
        sp.motion = motion_model_from_string(motion_str);
        write_canonical(synth_out, synth_generate(sp));
        std::printf("wrote %llu trajectories x %llu steps to %s\n",
                    static_cast<unsigned long long>(sp.n),
                    static_cast<unsigned long long>(sp.steps), synth_out.c_str());
        return 0;
    }

    if (inspect->parsed()) {
        std::vector<uint8_t> bytes = read_file(i_summary);
        Summary summary = deserialize_summary(bytes);
        const Config& c = summary.config;
        std::printf("file bytes: %zu\n", bytes.size());
        std::printf("mode: %s\n", to_string(c.mode).c_str());
        std::printf("eps1: %.9g  eps_p: %.9g  eps_s: %.9g  eps_c: %.9g  eps_d: %.9g\n",
                    c.eps1, c.eps_p, c.eps_s, c.eps_c, c.eps_d);
        std::printf("g_c: %.9g m  g_s: %.9g m  k: %d  cqc: %s\n", c.g_c_m, c.g_s_m, c.k,
                    c.cqc_enabled ? "on" : "off");
        std::printf("trajectories: %zu\n", summary.trajectories.size());
        std::printf("points: %llu\n",
                    static_cast<unsigned long long>(summary.total_points()));
        std::printf("codebook: %zu\n", summary.codebook.size());
        std::printf("steps: %zu\n", summary.steps.size());
        std::printf("periods: %zu\n", summary.index.periods.size());
        for (const auto& period : summary.index.periods) {
            std::printf("  period [%lld, %lld]: %zu regions\n",
                        static_cast<long long>(period.start),
                        static_cast<long long>(period.end), period.pi.regions.size());
        }
        std::printf("checkpoints: %zu\n", summary.checkpoints.size());
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ppq::UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const ppq::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const ppq::InvariantError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
}
