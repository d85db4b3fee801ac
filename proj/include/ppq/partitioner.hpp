#pragma once

#include <map>
#include <vector>

#include "ppq/types.hpp"

namespace ppq {

/// Partitioning feature: 2-D position in spatial mode, k AR parameters in
/// autocorrelation mode.
using Feature = std::vector<double>;

struct Partition {
    std::vector<TrajectoryId> members; // sorted ascending
    Feature centroid;
    int merge_count = 0; // a partition may absorb or join a merge at most once per step
};

struct PartitionSet {
    Timestamp t = 1;
    std::vector<Partition> partitions;
};

double feature_dist(const Feature& a, const Feature& b);

/// Clusters features so every member lies within eps_p of its partition
/// centroid. Runs rounds of deterministic k-means (farthest-point seeding from
/// the lowest id), growing the cluster count by 2 per round until the bound
/// holds. Always terminates: singletons trivially satisfy any bound.
PartitionSet partition_points(const std::map<TrajectoryId, Feature>& features,
                              double eps_p, Timestamp t);

/// Carries the previous partitions forward: members violating the bound are
/// re-partitioned from scratch, fresh partitions within eps_p of an existing
/// centroid merge into it (each partition at most once), and a merged pair is
/// exempt from re-splitting for this timestamp.
PartitionSet incremental_repartition(const PartitionSet& prev,
                                     const std::map<TrajectoryId, Feature>& features,
                                     double eps_p, Timestamp t);

/// Checks the eps_p bound for every non-merged partition (test helper).
bool satisfies_bound(const PartitionSet& ps,
                     const std::map<TrajectoryId, Feature>& features, double eps_p);

} // namespace ppq
