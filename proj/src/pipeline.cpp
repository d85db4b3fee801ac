#include "ppq/pipeline.hpp"

#include <algorithm>

#include "ppq/errors.hpp"
#include "ppq/predictor.hpp"

namespace ppq {

Summarizer::Summarizer(const Config& config) : config_(config) {
    config_.validate();
    summary_.config = config_;
    if (config_.cqc_enabled) {
        tree_ = build_coordinate_quadtree(config_.eps1, config_.gs_units());
        cqc1_ = center_cell_code(tree_);
    }
}

std::map<TrajectoryId, Feature> Summarizer::features_for(const StreamBatch& batch) {
    std::map<TrajectoryId, Feature> feats;
    if (config_.mode == PartitionMode::Spatial) {
        for (const auto& [id, p] : batch.entries) feats[id] = {p.x, p.y};
    } else { // Autocorrelation
        for (const auto& [id, p] : batch.entries) {
            const auto& hist = actual_hist_.at(id); // includes the point at t
            feats[id] = fit_ar_feature(hist, config_.k).params;
        }
    }
    return feats;
}

std::map<TrajectoryId, Point> Summarizer::push(const StreamBatch& batch) {
    if (saw_batch_ && batch.t <= last_t_) {
        throw UsageError("batches must arrive in ascending timestamp order");
    }
    if (batch.entries.empty()) {
        last_t_ = batch.t;
        saw_batch_ = true;
        return {};
    }
    const Timestamp t = batch.t;
    const int k = config_.k;

    // Track actual history (autocorrelation features) and contiguity.
    for (const auto& [id, p] : batch.entries) {
        auto rec = summary_.trajectories.find(id);
        if (rec != summary_.trajectories.end() && rec->second.t_last + 1 != t) {
            throw DataError("trajectory " + std::to_string(id) +
                            " has non-contiguous timestamps");
        }
        auto& hist = actual_hist_[id];
        hist.push_back(p);
        size_t cap = static_cast<size_t>(4 * k) + 1;
        if (hist.size() > cap) hist.erase(hist.begin(), hist.end() - cap);
    }

    // Partition.
    StepRecord step;
    bool single = config_.mode == PartitionMode::Single || config_.mode == PartitionMode::None;
    if (single) {
        Partition all;
        for (const auto& [id, p] : batch.entries) all.members.push_back(id);
        step.partitions.t = t;
        step.partitions.partitions.push_back(std::move(all));
    } else {
        std::map<TrajectoryId, Feature> feats = features_for(batch);
        step.partitions = saw_batch_
                              ? incremental_repartition(prev_partitions_, feats, config_.eps_p, t)
                              : partition_points(feats, config_.eps_p, t);
    }

    // Fit per-partition coefficients on members with a full history window.
    for (const auto& part : step.partitions.partitions) {
        std::vector<PredictionWindow> wins;
        if (config_.mode != PartitionMode::None) {
            for (TrajectoryId id : part.members) {
                auto wi = windows_.find(id);
                if (wi == windows_.end() || wi->second.size() < static_cast<size_t>(k)) continue;
                wins.push_back({wi->second, batch.entries.at(id)});
            }
        }
        step.coeffs.push_back(wins.empty() ? CoefficientVector::zeros(k)
                                           : fit_coefficients(wins, k));
    }

    // Predict and quantize.
    std::map<TrajectoryId, Point> predictions;
    std::map<TrajectoryId, Point> errors;
    for (size_t pi = 0; pi < step.partitions.partitions.size(); ++pi) {
        for (TrajectoryId id : step.partitions.partitions[pi].members) {
            auto wi = windows_.find(id);
            Point pred{0.0, 0.0};
            if (config_.mode != PartitionMode::None && wi != windows_.end() &&
                wi->second.size() >= static_cast<size_t>(k)) {
                pred = predict(step.coeffs[pi], wi->second);
            }
            predictions[id] = pred;
            errors[id] = batch.entries.at(id) - pred;
        }
    }
    std::map<TrajectoryId, uint32_t> assignments =
        incremental_quantize(errors, summary_.codebook, config_.eps1);

    // Reconstruct, refine, index.
    std::map<TrajectoryId, Point> refined;
    std::map<TrajectoryId, Point> recon;
    for (const auto& [id, b] : assignments) {
        Point r = predictions[id] + summary_.codebook.codewords[b];
        recon[id] = r;
        if (config_.cqc_enabled) {
            CqcCode cqc2 = encode_deviation(batch.entries.at(id), r, tree_, config_.gs_units());
            refined[id] = refine_reconstruction(r, cqc1_, cqc2, tree_, config_.gs_units());
            summary_.trajectories[id].cqc.push_back(std::move(cqc2));
        } else {
            refined[id] = r;
        }
    }

    // Snapshot the pre-batch reconstruction windows: if the index opens a new
    // period at t, replays for t' >= t start from exactly this state.
    std::map<TrajectoryId, std::vector<Point>> snapshot;
    for (const auto& [id, p] : batch.entries) {
        auto wi = windows_.find(id);
        if (wi != windows_.end() && !wi->second.empty()) snapshot[id] = wi->second;
    }
    size_t periods_before = summary_.index.periods.size();
    update_tpi(summary_.index, refined, t, config_.eps_s, config_.eps_c, config_.eps_d,
               config_.gc_units());
    if (summary_.index.periods.size() > periods_before && !snapshot.empty()) {
        summary_.checkpoints[t] = std::move(snapshot);
    }

    // Advance per-trajectory state and the summary records.
    for (const auto& [id, b] : assignments) {
        auto& w = windows_[id];
        w.push_back(recon[id]);
        if (w.size() > static_cast<size_t>(k)) w.erase(w.begin());
        auto& rec = summary_.trajectories[id];
        if (rec.assignments.empty()) rec.t_first = t;
        rec.t_last = t;
        rec.assignments.push_back(b);
    }
    summary_.steps[t] = std::move(step);
    prev_partitions_ = summary_.steps[t].partitions;
    last_t_ = t;
    saw_batch_ = true;
    return refined;
}

Summary Summarizer::finish() {
    return std::move(summary_);
}

Summary summarize_stream(const std::vector<StreamBatch>& batches, const Config& config) {
    Summarizer s(config);
    for (const auto& b : batches) s.push(b);
    return s.finish();
}

} // namespace ppq
