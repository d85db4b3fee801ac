#pragma once

#include <map>
#include <set>
#include <vector>

#include "ppq/query.hpp"
#include "ppq/summary.hpp"
#include "ppq/types.hpp"

namespace ppq {

/// Mean Euclidean distance between aligned point sequences, in meters.
/// Throws UsageError on length mismatch.
double mae_meters(const std::vector<Point>& originals, const std::vector<Point>& reconstructions,
                  double units_per_meter);

/// Standard set ratios. Conventions for empty sets (documented, the usual
/// degenerate cases): empty truth and empty returned -> (1, 1); empty
/// returned with non-empty truth -> (1, 0).
std::pair<double, double> precision_recall(const std::vector<TrajectoryId>& returned,
                                           const std::vector<TrajectoryId>& truth);

/// Raw size (16 bytes per point: two 64-bit floats) divided by the serialized
/// summary size.
double compression_ratio(uint64_t total_points, uint64_t summary_bytes);

/// Full replay of the summarization recurrence for every trajectory, no
/// checkpoints: map id -> refined points for t_first..t_last. The reference
/// for checkpointed reconstruction and query oracles.
std::map<TrajectoryId, std::vector<Point>> oracle_reconstruct_all(const Summary& summary);

/// Brute-force STRQ over precomputed refined points: every id whose refined
/// point at q.t falls in the query's grid cell.
std::vector<TrajectoryId> oracle_strq(const Summary& summary,
                                      const std::map<TrajectoryId, std::vector<Point>>& refined,
                                      const StrqQuery& q);

/// Number of distinct logical pages touched by a trace of STRQ queries
/// against a serialized summary: each query touches the page(s) spanned by
/// its cell's posting payload. Page size comes from the summary config.
uint64_t page_io_count(const std::vector<uint8_t>& file_bytes, const Summary& summary,
                       const std::vector<StrqQuery>& trace);

} // namespace ppq
