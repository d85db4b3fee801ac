#pragma once

#include <map>
#include <vector>

#include "ppq/summary.hpp"
#include "ppq/types.hpp"

namespace ppq {

struct StrqQuery {
    double x = 0.0;
    double y = 0.0;
    Timestamp t = 1;
};

struct TpqQuery {
    double x = 0.0;
    double y = 0.0;
    Timestamp t = 1;
    Timestamp l = 1; // path duration in steps beyond t
};

/// Fast approximate answer: the posting list of the query's grid cell at t.
/// Misses (timestamp outside every period, unindexed cell) return empty.
std::vector<TrajectoryId> strq_approx(const Summary& summary, const StrqQuery& q);

/// Candidate cells for the exact answer: all cells intersecting the disc of
/// radius (sqrt(2)/2)*g_s around the query point when that radius exceeds
/// g_c; otherwise the query's cell plus the adjacent cells whose shared
/// border lies within the radius.
std::vector<CellKey> local_search_cells(const Point& q, double gs_units, double gc_units);

/// Exact answer over refined reconstructions: scans the candidate cells'
/// posting lists, prunes by the refinement error bound, and keeps exactly the
/// trajectories whose refined point at t lies in the query's cell.
std::vector<TrajectoryId> strq_exact(const Summary& summary, const StrqQuery& q);

/// Replays the quantization recurrence for [t_start, t_start + l - 1],
/// starting from the latest checkpoint at or before t_start, and returns the
/// refined points. Bit-identical to a replay from the trajectory's beginning.
/// Throws DataError on unknown ids or uncovered ranges.
std::vector<Point> reconstruct_range(const Summary& summary, TrajectoryId id,
                                     Timestamp t_start, Timestamp l);

/// Path query: exact STRQ at (x, y, t), then each hit's refined positions for
/// t..t+l (clamped to the trajectory's end).
std::map<TrajectoryId, std::vector<Point>> tpq(const Summary& summary, const TpqQuery& q);

} // namespace ppq
