#include "ppq/index.hpp"

#include <algorithm>
#include <cmath>

#include "ppq/errors.hpp"
#include "ppq/partitioner.hpp"

namespace ppq {

CellKey cell_of(const Point& p, double gc_units) {
    return {static_cast<int64_t>(std::floor(p.x / gc_units)),
            static_cast<int64_t>(std::floor(p.y / gc_units))};
}

Rect cell_rect(const CellKey& c, double gc_units) {
    return {c.cx * gc_units, c.cy * gc_units,
            (c.cx + 1) * gc_units, (c.cy + 1) * gc_units};
}

std::optional<size_t> PartitionIndex::region_of(const Point& p) const {
    for (size_t i = 0; i < regions.size(); ++i) {
        if (regions[i].rect.contains(p)) return i;
    }
    return std::nullopt;
}

const PeriodIndex* TemporalIndex::period_containing(Timestamp t) const {
    for (const auto& p : periods) {
        if (t >= p.start && t <= p.end) return &p;
    }
    return nullptr;
}

std::vector<TrajectoryId> TemporalIndex::ids_at(Timestamp t, const CellKey& cell) const {
    const PeriodIndex* p = period_containing(t);
    if (!p) return {};
    auto ti = p->postings.find(t);
    if (ti == p->postings.end()) return {};
    auto ci = ti->second.find(cell);
    if (ci == ti->second.end()) return {};
    return ci->second;
}

std::vector<Rect> remove_overlap(const Rect& rect, const std::vector<Rect>& existing) {
    std::vector<const Rect*> overlapping;
    for (const Rect& e : existing) {
        if (rect.overlaps_interior(e)) overlapping.push_back(&e);
    }
    if (overlapping.empty()) return {rect};

    std::vector<double> xs{rect.x0, rect.x1};
    std::vector<double> ys{rect.y0, rect.y1};
    for (const Rect* e : overlapping) {
        Rect c = rect.intersection(*e);
        xs.push_back(c.x0);
        xs.push_back(c.x1);
        ys.push_back(c.y0);
        ys.push_back(c.y1);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    std::vector<Rect> out;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        for (size_t j = 0; j + 1 < ys.size(); ++j) {
            Rect cell{xs[i], ys[j], xs[i + 1], ys[j + 1]};
            if (cell.empty()) continue;
            Point center{(cell.x0 + cell.x1) / 2.0, (cell.y0 + cell.y1) / 2.0};
            bool covered = false;
            for (const Rect* e : overlapping) {
                if (e->contains(center)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) out.push_back(cell);
        }
    }
    return out;
}

namespace {

/// Snaps a bounding rect outward to the g_c lattice and widens degenerate
/// extents to one cell. Lattice-aligned regions keep fragmentation bounded:
/// overlap cuts land on cell borders, so repeated insertions can never
/// accumulate sliver regions. The density denominator also never vanishes.
Rect widen(Rect r, double gc_units) {
    r.x0 = std::floor(r.x0 / gc_units) * gc_units;
    r.y0 = std::floor(r.y0 / gc_units) * gc_units;
    r.x1 = std::ceil(r.x1 / gc_units) * gc_units;
    r.y1 = std::ceil(r.y1 / gc_units) * gc_units;
    if (r.width() < gc_units) r.x1 = r.x0 + gc_units;
    if (r.height() < gc_units) r.y1 = r.y0 + gc_units;
    return r;
}

/// Per-region point counts under the first-containing-region attribution.
std::vector<uint64_t> region_counts(const PartitionIndex& pi,
                                    const std::map<TrajectoryId, Point>& positions) {
    std::vector<uint64_t> counts(pi.regions.size(), 0);
    for (const auto& [id, p] : positions) {
        if (auto r = pi.region_of(p)) ++counts[*r];
    }
    return counts;
}

void set_baselines(PartitionIndex& pi, const std::map<TrajectoryId, Point>& positions,
                   size_t from, Timestamp t) {
    std::vector<uint64_t> counts = region_counts(pi, positions);
    for (size_t i = from; i < pi.regions.size(); ++i) {
        pi.regions[i].baseline_trd =
            static_cast<double>(counts[i]) / pi.regions[i].rect.area();
        pi.regions[i].baseline_t = t;
    }
}

/// Spatially partitions `positions`, appending one fragmented bounding
/// rectangle set per partition to pi.regions. Baselines are left unset.
void append_regions(PartitionIndex& pi, const std::map<TrajectoryId, Point>& positions,
                    double eps_s, double gc_units, Timestamp t) {
    std::map<TrajectoryId, Feature> feats;
    for (const auto& [id, p] : positions) feats[id] = {p.x, p.y};
    PartitionSet ps = partition_points(feats, eps_s, t);

    std::vector<Rect> taken;
    for (const auto& reg : pi.regions) taken.push_back(reg.rect);
    for (const auto& part : ps.partitions) {
        Rect bound{positions.at(part.members.front()).x,
                   positions.at(part.members.front()).y,
                   positions.at(part.members.front()).x,
                   positions.at(part.members.front()).y};
        for (TrajectoryId id : part.members) {
            const Point& p = positions.at(id);
            bound.x0 = std::min(bound.x0, p.x);
            bound.y0 = std::min(bound.y0, p.y);
            bound.x1 = std::max(bound.x1, p.x);
            bound.y1 = std::max(bound.y1, p.y);
        }
        bound = widen(bound, gc_units);
        for (const Rect& frag : remove_overlap(bound, taken)) {
            pi.regions.push_back({frag, 0.0, t});
            taken.push_back(frag);
        }
    }
}

} // namespace

PartitionIndex build_pi(const std::map<TrajectoryId, Point>& positions,
                        double eps_s, double gc_units, Timestamp t) {
    if (positions.empty()) throw UsageError("build_pi needs a non-empty batch");
    PartitionIndex pi;
    pi.created = t;
    append_regions(pi, positions, eps_s, gc_units, t);
    set_baselines(pi, positions, 0, t);
    return pi;
}

double trd(const PartitionIndex& pi, size_t region_idx,
           const std::map<TrajectoryId, Point>& positions) {
    if (region_idx >= pi.regions.size()) throw UsageError("region index out of range");
    return static_cast<double>(region_counts(pi, positions)[region_idx]) /
           pi.regions[region_idx].rect.area();
}

double adr(const PartitionIndex& pi, const std::map<TrajectoryId, Point>& positions,
           double eps_c) {
    if (pi.regions.empty()) return 0.0;
    std::vector<uint64_t> counts = region_counts(pi, positions);
    size_t drops = 0;
    for (size_t i = 0; i < pi.regions.size(); ++i) {
        double base = pi.regions[i].baseline_trd;
        if (base <= 0.0) continue; // cannot drop relative to nothing
        double d = static_cast<double>(counts[i]) / pi.regions[i].rect.area();
        double h1 = (d - base) / base;
        if (h1 < 0.0 && std::abs(h1) > eps_c) ++drops;
    }
    return static_cast<double>(drops) / static_cast<double>(pi.regions.size());
}

void update_tpi(TemporalIndex& state, const std::map<TrajectoryId, Point>& positions,
                Timestamp t_e, double eps_s, double eps_c, double eps_d,
                double gc_units) {
    auto record_postings = [&](PeriodIndex& period) {
        auto& cells = period.postings[t_e];
        for (const auto& [id, p] : positions) {
            cells[cell_of(p, gc_units)].push_back(id); // map order keeps ids ascending
        }
    };

    if (state.periods.empty()) {
        if (positions.empty()) return;
        PeriodIndex period;
        period.start = period.end = t_e;
        period.pi = build_pi(positions, eps_s, gc_units, t_e);
        record_postings(period);
        state.periods.push_back(std::move(period));
        return;
    }

    PeriodIndex& cur = state.periods.back();
    if (t_e <= cur.end) throw UsageError("batches must arrive in ascending timestamp order");
    if (positions.empty()) {
        cur.end = t_e;
        return;
    }

    if (adr(cur.pi, positions, eps_c) > eps_d) {
        // The current period already ends at t_e - 1 (or earlier); rebuild.
        PeriodIndex period;
        period.start = period.end = t_e;
        period.pi = build_pi(positions, eps_s, gc_units, t_e);
        record_postings(period);
        state.periods.push_back(std::move(period));
        return;
    }

    std::map<TrajectoryId, Point> uncovered;
    for (const auto& [id, p] : positions) {
        if (!cur.pi.region_of(p)) uncovered[id] = p;
    }
    if (!uncovered.empty()) {
        size_t first_new = cur.pi.regions.size();
        append_regions(cur.pi, uncovered, eps_s, gc_units, t_e);
        set_baselines(cur.pi, positions, first_new, t_e);
    }
    cur.end = t_e;
    record_postings(cur);
}

} // namespace ppq
