#include "ppq/query.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ppq/errors.hpp"
#include "ppq/predictor.hpp"

namespace ppq {
namespace {

/// Shared per-call reconstruction context: the correction-code template tree
/// is built once and reused across trajectories.
struct Reconstructor {
    const Summary& summary;
    CoordinateQuadtree tree;
    CqcCode cqc1;

    explicit Reconstructor(const Summary& s) : summary(s) {
        if (s.config.cqc_enabled) {
            tree = build_coordinate_quadtree(s.config.eps1, s.config.gs_units());
            cqc1 = center_cell_code(tree);
        }
    }

    std::vector<Point> range(TrajectoryId id, Timestamp t_start, Timestamp l) const {
        auto it = summary.trajectories.find(id);
        if (it == summary.trajectories.end()) {
            throw DataError("unknown trajectory id " + std::to_string(id));
        }
        const TrajectoryRecord& rec = it->second;
        if (l < 1 || t_start < rec.t_first || t_start + l - 1 > rec.t_last) {
            throw DataError("requested range not covered by trajectory " + std::to_string(id));
        }

        // Latest checkpoint at or before t_start that knows this trajectory.
        Timestamp replay_from = rec.t_first;
        std::vector<Point> window;
        for (auto ci = summary.checkpoints.rbegin(); ci != summary.checkpoints.rend(); ++ci) {
            if (ci->first > t_start || ci->first <= rec.t_first) continue;
            auto ti = ci->second.find(id);
            if (ti == ci->second.end()) continue;
            replay_from = ci->first;
            window = ti->second;
            break;
        }

        const int k = summary.config.k;
        const double gs = summary.config.gs_units();
        std::vector<Point> out;
        out.reserve(static_cast<size_t>(l));
        for (Timestamp t = replay_from; t < t_start + l; ++t) {
            size_t i = static_cast<size_t>(t - rec.t_first);
            Point pred{0.0, 0.0};
            if (summary.config.mode != PartitionMode::None &&
                window.size() >= static_cast<size_t>(k)) {
                pred = predict(summary.coeffs_for(id, t), window);
            }
            Point recon = pred + summary.codebook.codewords.at(rec.assignments.at(i));
            window.push_back(recon);
            if (window.size() > static_cast<size_t>(k)) window.erase(window.begin());
            if (t >= t_start) {
                out.push_back(summary.config.cqc_enabled
                                  ? refine_reconstruction(recon, cqc1, rec.cqc.at(i), tree, gs)
                                  : recon);
            }
        }
        return out;
    }
};

} // namespace

std::vector<TrajectoryId> strq_approx(const Summary& summary, const StrqQuery& q) {
    CellKey cell = cell_of({q.x, q.y}, summary.config.gc_units());
    return summary.index.ids_at(q.t, cell);
}

std::vector<CellKey> local_search_cells(const Point& q, double gs_units, double gc_units) {
    const double r = std::sqrt(2.0) / 2.0 * gs_units;
    CellKey center = cell_of(q, gc_units);
    std::vector<CellKey> cells;
    int64_t span = static_cast<int64_t>(std::floor(r / gc_units)) + 1;
    for (int64_t dx = -span; dx <= span; ++dx) {
        for (int64_t dy = -span; dy <= span; ++dy) {
            CellKey c{center.cx + dx, center.cy + dy};
            if ((c == center) || dist_to_rect(q, cell_rect(c, gc_units)) <= r) {
                cells.push_back(c);
            }
        }
    }
    return cells;
}

std::vector<TrajectoryId> strq_exact(const Summary& summary, const StrqQuery& q) {
    const double gc = summary.config.gc_units();
    const double gs = summary.config.gs_units();
    const double r = std::sqrt(2.0) / 2.0 * gs;
    const CellKey qcell = cell_of({q.x, q.y}, gc);

    std::set<TrajectoryId> candidates;
    for (const CellKey& c : local_search_cells({q.x, q.y}, gs, gc)) {
        for (TrajectoryId id : summary.index.ids_at(q.t, c)) candidates.insert(id);
    }
    for (TrajectoryId id : summary.index.ids_at(q.t, qcell)) candidates.insert(id);

    Reconstructor recon(summary);
    Rect qrect = cell_rect(qcell, gc);
    std::vector<TrajectoryId> out;
    for (TrajectoryId id : candidates) {
        Point p = recon.range(id, q.t, 1).front();
        if (dist_to_rect(p, qrect) > r) continue; // refinement-bound prune
        if (cell_of(p, gc) == qcell) out.push_back(id);
    }
    return out;
}

std::vector<Point> reconstruct_range(const Summary& summary, TrajectoryId id,
                                     Timestamp t_start, Timestamp l) {
    return Reconstructor(summary).range(id, t_start, l);
}

std::map<TrajectoryId, std::vector<Point>> tpq(const Summary& summary, const TpqQuery& q) {
    std::map<TrajectoryId, std::vector<Point>> out;
    Reconstructor recon(summary);
    for (TrajectoryId id : strq_exact(summary, {q.x, q.y, q.t})) {
        Timestamp t_end = std::min(q.t + q.l, summary.trajectories.at(id).t_last);
        out[id] = recon.range(id, q.t, t_end - q.t + 1);
    }
    return out;
}

} // namespace ppq
