#include "ppq/eval.hpp"

#include <algorithm>

#include "ppq/errors.hpp"
#include "ppq/predictor.hpp"

namespace ppq {

double mae_meters(const std::vector<Point>& originals, const std::vector<Point>& reconstructions,
                  double units_per_meter) {
    if (originals.size() != reconstructions.size()) {
        throw UsageError("mae: sequence length mismatch");
    }
    if (originals.empty()) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < originals.size(); ++i) {
        sum += dist(originals[i], reconstructions[i]);
    }
    return sum / static_cast<double>(originals.size()) / units_per_meter;
}

std::pair<double, double> precision_recall(const std::vector<TrajectoryId>& returned,
                                           const std::vector<TrajectoryId>& truth) {
    std::set<TrajectoryId> tset(truth.begin(), truth.end());
    std::set<TrajectoryId> rset(returned.begin(), returned.end());
    size_t hits = 0;
    for (TrajectoryId id : rset) hits += tset.count(id);
    double precision = rset.empty() ? 1.0 : static_cast<double>(hits) / rset.size();
    double recall = tset.empty() ? 1.0 : static_cast<double>(hits) / tset.size();
    return {precision, recall};
}

double compression_ratio(uint64_t total_points, uint64_t summary_bytes) {
    if (summary_bytes == 0) throw UsageError("empty summary");
    return static_cast<double>(total_points * 16) / static_cast<double>(summary_bytes);
}

std::map<TrajectoryId, std::vector<Point>> oracle_reconstruct_all(const Summary& summary) {
    CoordinateQuadtree tree;
    CqcCode cqc1;
    if (summary.config.cqc_enabled) {
        tree = build_coordinate_quadtree(summary.config.eps1, summary.config.gs_units());
        cqc1 = center_cell_code(tree);
    }
    const int k = summary.config.k;
    const double gs = summary.config.gs_units();
    std::map<TrajectoryId, std::vector<Point>> out;
    for (const auto& [id, rec] : summary.trajectories) {
        std::vector<Point> window;
        std::vector<Point>& pts = out[id];
        for (size_t i = 0; i < rec.assignments.size(); ++i) {
            Timestamp t = rec.t_first + static_cast<Timestamp>(i);
            Point pred{0.0, 0.0};
            if (summary.config.mode != PartitionMode::None &&
                window.size() >= static_cast<size_t>(k)) {
                pred = predict(summary.coeffs_for(id, t), window);
            }
            Point recon = pred + summary.codebook.codewords.at(rec.assignments[i]);
            window.push_back(recon);
            if (window.size() > static_cast<size_t>(k)) window.erase(window.begin());
            pts.push_back(summary.config.cqc_enabled
                              ? refine_reconstruction(recon, cqc1, rec.cqc.at(i), tree, gs)
                              : recon);
        }
    }
    return out;
}

std::vector<TrajectoryId> oracle_strq(const Summary& summary,
                                      const std::map<TrajectoryId, std::vector<Point>>& refined,
                                      const StrqQuery& q) {
    const double gc = summary.config.gc_units();
    CellKey qcell = cell_of({q.x, q.y}, gc);
    std::vector<TrajectoryId> out;
    for (const auto& [id, pts] : refined) {
        const TrajectoryRecord& rec = summary.trajectories.at(id);
        if (!rec.covers(q.t)) continue;
        const Point& p = pts.at(static_cast<size_t>(q.t - rec.t_first));
        if (cell_of(p, gc) == qcell) out.push_back(id);
    }
    return out;
}

uint64_t page_io_count(const std::vector<uint8_t>& file_bytes, const Summary& summary,
                       const std::vector<StrqQuery>& trace) {
    auto spans = posting_spans(file_bytes);
    const uint64_t page = summary.config.page_bytes;
    if (page == 0) throw UsageError("page size must be positive");
    std::set<uint64_t> touched;
    for (const StrqQuery& q : trace) {
        CellKey cell = cell_of({q.x, q.y}, summary.config.gc_units());
        auto it = spans.find({q.t, cell});
        if (it == spans.end()) continue;
        uint64_t first = it->second.offset / page;
        uint64_t last = it->second.length == 0
                            ? first
                            : (it->second.offset + it->second.length - 1) / page;
        for (uint64_t p = first; p <= last; ++p) touched.insert(p);
    }
    return touched.size();
}

} // namespace ppq
