#include "ppq/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppq/errors.hpp"

namespace ppq {
namespace {

constexpr int kMaxLloydIters = 50;
constexpr double kCentroidTol = 1e-9;
constexpr int kRoundStep = 2; // cluster-count growth per round

Feature mean_feature(const std::vector<const Feature*>& fs) {
    Feature m(fs.front()->size(), 0.0);
    for (const Feature* f : fs) {
        for (size_t d = 0; d < m.size(); ++d) m[d] += (*f)[d];
    }
    for (double& v : m) v /= static_cast<double>(fs.size());
    return m;
}

struct Clustering {
    std::vector<Feature> centroids;
    std::vector<std::vector<TrajectoryId>> members;
};

/// Deterministic k-means: first seed is the lowest id's feature, subsequent
/// seeds the farthest point from the chosen set (ties to the lowest id).
Clustering lloyd(const std::vector<TrajectoryId>& ids,
                 const std::vector<const Feature*>& feats, size_t q) {
    const size_t n = ids.size();
    std::vector<Feature> centroids;
    centroids.push_back(*feats[0]);
    std::vector<double> d_near(n);
    for (size_t i = 0; i < n; ++i) d_near[i] = feature_dist(*feats[i], centroids[0]);
    while (centroids.size() < q) {
        size_t far = 0;
        for (size_t i = 1; i < n; ++i) {
            if (d_near[i] > d_near[far]) far = i;
        }
        if (d_near[far] == 0.0) break; // every point coincides with a seed
        centroids.push_back(*feats[far]);
        for (size_t i = 0; i < n; ++i) {
            d_near[i] = std::min(d_near[i], feature_dist(*feats[i], centroids.back()));
        }
    }

    std::vector<size_t> assign(n, 0);
    for (int iter = 0; iter < kMaxLloydIters; ++iter) {
        for (size_t i = 0; i < n; ++i) {
            size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < centroids.size(); ++c) {
                double d = feature_dist(*feats[i], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assign[i] = best;
        }
        std::vector<std::vector<const Feature*>> groups(centroids.size());
        for (size_t i = 0; i < n; ++i) groups[assign[i]].push_back(feats[i]);
        double moved = 0.0;
        std::vector<Feature> next;
        std::vector<size_t> remap(centroids.size(), SIZE_MAX);
        for (size_t c = 0; c < centroids.size(); ++c) {
            if (groups[c].empty()) continue; // dropped
            Feature m = mean_feature(groups[c]);
            moved = std::max(moved, feature_dist(m, centroids[c]));
            remap[c] = next.size();
            next.push_back(std::move(m));
        }
        for (size_t i = 0; i < n; ++i) assign[i] = remap[assign[i]];
        centroids = std::move(next);
        if (moved < kCentroidTol) break;
    }

    Clustering out;
    out.centroids = centroids;
    out.members.resize(centroids.size());
    for (size_t i = 0; i < n; ++i) out.members[assign[i]].push_back(ids[i]);
    return out;
}

bool within_bound(const Clustering& c, const std::vector<const Feature*>& feats,
                  const std::vector<TrajectoryId>& ids, double eps_p) {
    std::map<TrajectoryId, size_t> pos;
    for (size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;
    for (size_t g = 0; g < c.members.size(); ++g) {
        for (TrajectoryId id : c.members[g]) {
            if (feature_dist(*feats[pos[id]], c.centroids[g]) > eps_p) return false;
        }
    }
    return true;
}

} // namespace

double feature_dist(const Feature& a, const Feature& b) {
    if (a.size() != b.size()) throw UsageError("feature dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

PartitionSet partition_points(const std::map<TrajectoryId, Feature>& features,
                              double eps_p, Timestamp t) {
    PartitionSet out;
    out.t = t;
    if (features.empty()) return out;

    std::vector<TrajectoryId> ids;
    std::vector<const Feature*> feats;
    for (const auto& [id, f] : features) {
        ids.push_back(id);
        feats.push_back(&f);
    }

    const size_t n = ids.size();
    size_t q = 1;
    while (true) {
        Clustering c = lloyd(ids, feats, q);
        if (within_bound(c, feats, ids, eps_p) || q >= n) {
            for (size_t g = 0; g < c.members.size(); ++g) {
                out.partitions.push_back({std::move(c.members[g]), std::move(c.centroids[g]), 0});
            }
            return out;
        }
        q = std::min(q + kRoundStep, n);
    }
}

PartitionSet incremental_repartition(const PartitionSet& prev,
                                     const std::map<TrajectoryId, Feature>& features,
                                     double eps_p, Timestamp t) {
    struct Working {
        std::vector<TrajectoryId> members;
        Feature centroid;
        int merge_count = 0;
    };
    std::vector<Working> parts;
    std::vector<TrajectoryId> pool;

    auto recompute = [&](Working& w) {
        std::vector<const Feature*> fs;
        for (TrajectoryId id : w.members) fs.push_back(&features.at(id));
        w.centroid = mean_feature(fs);
    };
    // Repeatedly removes members farther than eps_p from the recomputed centroid.
    auto shed_violators = [&](Working& w) {
        while (!w.members.empty()) {
            recompute(w);
            std::vector<TrajectoryId> keep;
            for (TrajectoryId id : w.members) {
                if (feature_dist(features.at(id), w.centroid) <= eps_p) {
                    keep.push_back(id);
                } else {
                    pool.push_back(id);
                }
            }
            if (keep.size() == w.members.size()) break;
            w.members = std::move(keep);
        }
    };

    // Step 1: carry forward previous memberships, dropping vanished ids.
    std::map<TrajectoryId, bool> placed;
    for (const auto& p : prev.partitions) {
        Working w;
        for (TrajectoryId id : p.members) {
            if (features.count(id)) {
                w.members.push_back(id);
                placed[id] = true;
            }
        }
        if (w.members.empty()) continue;
        shed_violators(w);
        if (!w.members.empty()) parts.push_back(std::move(w));
    }

    // Ids absent at t-1: join the nearest satisfying partition, else pool.
    std::vector<size_t> joined;
    for (const auto& [id, f] : features) {
        if (placed.count(id)) continue;
        size_t best = SIZE_MAX;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < parts.size(); ++i) {
            double d = feature_dist(f, parts[i].centroid);
            if (d <= eps_p && d < best_d) {
                best_d = d;
                best = i;
            }
        }
        if (best != SIZE_MAX) {
            parts[best].members.push_back(id);
            joined.push_back(best);
        } else {
            pool.push_back(id);
        }
    }
    for (size_t i : joined) recompute(parts[i]);

    // Step 2: re-partition pooled points from scratch.
    const size_t first_new = parts.size();
    if (!pool.empty()) {
        std::map<TrajectoryId, Feature> pf;
        for (TrajectoryId id : pool) pf[id] = features.at(id);
        pool.clear();
        PartitionSet fresh = partition_points(pf, eps_p, t);
        for (auto& p : fresh.partitions) {
            parts.push_back({std::move(p.members), std::move(p.centroid), 0});
        }
    }

    // Step 3: merge each fresh partition into the first close partition, each
    // partition participating in at most one merge.
    std::vector<bool> absorbed(parts.size(), false);
    for (size_t i = first_new; i < parts.size(); ++i) {
        if (parts[i].merge_count > 0) continue;
        for (size_t j = 0; j < i; ++j) {
            if (absorbed[j] || parts[j].merge_count > 0) continue;
            if (feature_dist(parts[j].centroid, parts[i].centroid) <= eps_p) {
                parts[j].members.insert(parts[j].members.end(),
                                        parts[i].members.begin(), parts[i].members.end());
                parts[j].merge_count = 1;
                parts[i].merge_count = 1;
                absorbed[i] = true;
                recompute(parts[j]);
                break;
            }
        }
    }

    // Final bound pass; merged partitions are exempt for this timestamp.
    std::vector<Working> kept;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (absorbed[i]) continue;
        if (parts[i].merge_count == 0) shed_violators(parts[i]);
        if (!parts[i].members.empty()) kept.push_back(std::move(parts[i]));
    }
    if (!pool.empty()) {
        std::map<TrajectoryId, Feature> pf;
        for (TrajectoryId id : pool) pf[id] = features.at(id);
        PartitionSet fresh = partition_points(pf, eps_p, t);
        for (auto& p : fresh.partitions) {
            kept.push_back({std::move(p.members), std::move(p.centroid), 0});
        }
    }

    PartitionSet out;
    out.t = t;
    for (auto& w : kept) {
        std::sort(w.members.begin(), w.members.end());
        out.partitions.push_back({std::move(w.members), std::move(w.centroid), w.merge_count});
    }
    return out;
}

bool satisfies_bound(const PartitionSet& ps,
                     const std::map<TrajectoryId, Feature>& features, double eps_p) {
    for (const auto& p : ps.partitions) {
        if (p.merge_count > 0) continue;
        for (TrajectoryId id : p.members) {
            if (feature_dist(features.at(id), p.centroid) > eps_p + 1e-12) return false;
        }
    }
    return true;
}

} // namespace ppq
