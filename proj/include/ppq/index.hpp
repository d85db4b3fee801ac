#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ppq/geometry.hpp"
#include "ppq/types.hpp"

namespace ppq {

/// Grid cell on the global g_c lattice (cell i covers [i*g_c, (i+1)*g_c) per
/// axis). Anchoring cells globally, rather than to each region's rectangle,
/// keeps cell geometry identical across rebuilds, so answers from the temporal
/// index and from a freshly built per-timestamp index coincide exactly.
struct CellKey {
    int64_t cx = 0;
    int64_t cy = 0;
    bool operator<(const CellKey& o) const {
        return cx != o.cx ? cx < o.cx : cy < o.cy;
    }
    bool operator==(const CellKey& o) const { return cx == o.cx && cy == o.cy; }
};

CellKey cell_of(const Point& p, double gc_units);
Rect cell_rect(const CellKey& c, double gc_units);

/// One non-overlapping index region: a rectangle gridded at g_c, with the
/// trajectory density observed when it became current (its TRD baseline).
struct Region {
    Rect rect;
    double baseline_trd = 0.0;
    Timestamp baseline_t = 1;
};

/// The index of one timestamp: disjoint regions covering the observed points.
struct PartitionIndex {
    std::vector<Region> regions;
    Timestamp created = 1;

    /// Index of the first region containing p, or nullopt. Containment is
    /// closed; list order breaks boundary ties, so every point maps to at
    /// most one region.
    std::optional<size_t> region_of(const Point& p) const;
};

/// One temporal period: a closed timestamp interval sharing one
/// PartitionIndex, with per-timestamp per-cell posting lists.
struct PeriodIndex {
    Timestamp start = 1;
    Timestamp end = 1;
    PartitionIndex pi;
    std::map<Timestamp, std::map<CellKey, std::vector<TrajectoryId>>> postings;
};

struct TemporalIndex {
    std::vector<PeriodIndex> periods;

    const PeriodIndex* period_containing(Timestamp t) const;
    /// Posting list for the cell at t; empty when t or the cell is unknown.
    std::vector<TrajectoryId> ids_at(Timestamp t, const CellKey& cell) const;
    size_t rebuild_count() const { return periods.size(); }
};

/// Fragments `rect` against `existing`: returns disjoint rects covering
/// exactly rect minus the union of existing. Cuts along every edge of every
/// clipped overlapping rect (full grid decomposition), cells emitted in
/// ascending (x, y) slab order, uncovered cells kept unmerged.
std::vector<Rect> remove_overlap(const Rect& rect, const std::vector<Rect>& existing);

/// Builds the index for one timestamp: spatial partitioning of the positions
/// at threshold eps_s, minimum bounding rectangle per partition (degenerate
/// extents widened to one g_c cell), overlaps fragmented away in partition
/// order. Baselines are the densities of `positions` themselves.
PartitionIndex build_pi(const std::map<TrajectoryId, Point>& positions,
                        double eps_s, double gc_units, Timestamp t);

/// Trajectory density of one region: points attributed to it (first-containing
/// rule over pi) divided by its rect area.
double trd(const PartitionIndex& pi, size_t region_idx,
           const std::map<TrajectoryId, Point>& positions);

/// Fraction of regions whose density dropped by more than eps_c relative to
/// their baseline. Regions with baseline 0 contribute 0; the denominator is
/// the total region count.
double adr(const PartitionIndex& pi, const std::map<TrajectoryId, Point>& positions,
           double eps_c);

/// Advances the temporal index to t_e: rebuild into a fresh period when the
/// average dropping rate exceeds eps_d, else absorb uncovered points as new
/// region fragments (with baselines taken at insertion), then record the
/// batch's posting lists. Throws UsageError when t_e is not past the end.
void update_tpi(TemporalIndex& state, const std::map<TrajectoryId, Point>& positions,
                Timestamp t_e, double eps_s, double eps_c, double eps_d,
                double gc_units);

} // namespace ppq
