#pragma once

#include <map>
#include <vector>

#include "ppq/cqc.hpp"
#include "ppq/index.hpp"
#include "ppq/partitioner.hpp"
#include "ppq/predictor.hpp"
#include "ppq/quantizer.hpp"
#include "ppq/types.hpp"

namespace ppq {

/// Per-timestamp summarization state: the partitions in effect and one
/// coefficient vector per partition (parallel lists).
struct StepRecord {
    PartitionSet partitions;
    std::vector<CoefficientVector> coeffs;
};

/// Compressed representation of one trajectory: a codeword index per step and,
/// when enabled, a correction code per step. Entry i describes timestamp
/// t_first + i.
struct TrajectoryRecord {
    Timestamp t_first = 1;
    Timestamp t_last = 0;
    std::vector<uint32_t> assignments;
    std::vector<CqcCode> cqc; // empty when correction codes are disabled

    size_t length() const { return assignments.size(); }
    bool covers(Timestamp t) const { return t >= t_first && t <= t_last; }
};

/// Reconstruction windows snapshotted at a period start t_s: for each
/// pre-existing trajectory, its most recent (up to k) reconstructed points
/// from timestamps < t_s, oldest first. Replay for t >= t_s can start here
/// instead of at the stream beginning.
using CheckpointMap = std::map<Timestamp, std::map<TrajectoryId, std::vector<Point>>>;

struct Summary {
    Config config;
    std::map<Timestamp, StepRecord> steps;
    Codebook codebook;
    std::map<TrajectoryId, TrajectoryRecord> trajectories;
    CheckpointMap checkpoints;
    TemporalIndex index;

    /// Partition index of `id` within steps.at(t); throws DataError when the
    /// step or membership is missing.
    size_t partition_of(TrajectoryId id, Timestamp t) const;
    const CoefficientVector& coeffs_for(TrajectoryId id, Timestamp t) const;

    uint64_t total_points() const;
};

/// Sectioned binary layout, little-endian throughout: magic "PPQT", version,
/// then length-prefixed sections (config, coefficients, partitions, codebook,
/// assignments, correction codes, checkpoints, index) in fixed order.
/// Deterministic: equal summaries serialize to equal bytes.
std::vector<uint8_t> serialize_summary(const Summary& s);
Summary deserialize_summary(const std::vector<uint8_t>& bytes);

/// Byte span of one posting list inside the serialized file, for logical page
/// accounting.
struct PostingSpan {
    uint64_t offset = 0;
    uint64_t length = 0;
};

/// Walks the index section of a serialized summary and returns the absolute
/// file span of every (timestamp, cell) posting payload.
std::map<std::pair<Timestamp, CellKey>, PostingSpan>
posting_spans(const std::vector<uint8_t>& file_bytes);

} // namespace ppq
