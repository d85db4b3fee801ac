#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppq/types.hpp"

namespace ppq {

/// Canonical CSV: header "traj_id,t,x,y", one point per row. Rows may arrive
/// in any order; each trajectory is sorted by t after parsing. Duplicate
/// (id, t) pairs and malformed fields are rejected with their line number.
std::vector<Trajectory> parse_canonical(const std::string& path);
void write_canonical(const std::string& path, const std::vector<Trajectory>& trajectories);

/// Porto taxi CSV: one row per trip, POLYLINE column holding a JSON array of
/// [lon, lat] pairs. The i-th pair becomes timestamp i. Rows shorter than
/// min_length are dropped; rows with malformed JSON are skipped (counted in
/// skipped_rows when non-null). max_rows = 0 means no limit.
std::vector<Trajectory> parse_porto(const std::string& path, size_t min_length = 30,
                                    size_t max_rows = 0, size_t* skipped_rows = nullptr);

/// GeoLife PLT directory: one trajectory per .plt file (6 header lines, then
/// "lat,lon,0,alt,days,date,time" rows); samples map to t = 1..n in file
/// order, x = lon, y = lat. Files are visited in lexicographic path order;
/// files without the 6-line header are skipped (counted when non-null).
std::vector<Trajectory> parse_geolife(const std::string& dir, size_t min_length = 30,
                                      size_t* skipped_files = nullptr);

enum class MotionModel { RandomWalk, ConstantVelocity, Ar };

MotionModel motion_model_from_string(const std::string& s);
std::string to_string(MotionModel m);

struct SynthParams {
    uint64_t n = 100;        // trajectories
    uint64_t steps = 50;     // points per trajectory
    MotionModel motion = MotionModel::RandomWalk;
    double sigma = 1.0;      // per-step noise scale, coordinate units
    double extent = 100.0;   // start positions drawn uniformly from [0, extent)^2
    double drift_x = 0.0;    // constant per-step drift added to every point
    double drift_y = 0.0;
    uint64_t seed = 1;
};

/// Deterministic synthetic trajectories from a fixed, documented generator
/// (splitmix64 stream + Box-Muller normals). Identical params give identical
/// output on every platform.
///
/// random_walk: p[t+1] = p[t] + N(0, sigma^2) per axis.
/// constant_velocity: p[t+1] = p[t] + v + N(0, sigma^2), with v drawn once
///   per trajectory from N(0, sigma^2) when sigma > 0, else a fixed unit
///   velocity; exactly linearly predictable when sigma = 0.
/// ar: velocity follows an AR(1) process, v[t+1] = 0.8*v[t] + N(0, sigma^2).
std::vector<Trajectory> synth_generate(const SynthParams& params);

} // namespace ppq
