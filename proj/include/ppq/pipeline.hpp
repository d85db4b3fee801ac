#pragma once

#include <map>
#include <vector>

#include "ppq/cqc.hpp"
#include "ppq/summary.hpp"
#include "ppq/types.hpp"

namespace ppq {

/// Streaming summarization driver: feed batches in ascending timestamp order,
/// then take the finished Summary. One instance per run; single writer.
///
/// Per batch: partition the trajectories (mode-dependent features), fit one
/// coefficient vector per partition on reconstructed history, predict,
/// quantize the prediction errors against the shared codebook, reconstruct,
/// attach a correction code, and advance the temporal index with the refined
/// positions. Prediction always reads reconstructed (not raw) history, so the
/// deviation bound holds at every step without accumulating.
class Summarizer {
public:
    explicit Summarizer(const Config& config);

    /// Processes one timestamp. Batches must arrive in strictly ascending
    /// order and each trajectory's timestamps must be contiguous.
    /// Returns the refined reconstructed positions for the batch.
    std::map<TrajectoryId, Point> push(const StreamBatch& batch);

    /// Finalizes and returns the summary. The instance is spent afterwards.
    Summary finish();

    const Summary& summary() const { return summary_; }

private:
    std::map<TrajectoryId, Feature> features_for(const StreamBatch& batch);

    Config config_;
    Summary summary_;
    CoordinateQuadtree tree_; // unused when correction codes are disabled
    CqcCode cqc1_;
    bool saw_batch_ = false;
    Timestamp last_t_ = 0;
    PartitionSet prev_partitions_;
    std::map<TrajectoryId, std::vector<Point>> windows_;     // last <= k reconstructed
    std::map<TrajectoryId, std::vector<Point>> actual_hist_; // last <= 4k actual, for AR features
};

/// Convenience wrapper: run the whole stream through a Summarizer.
Summary summarize_stream(const std::vector<StreamBatch>& batches, const Config& config);

} // namespace ppq
