#include "ppq/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ppq/errors.hpp"

namespace ppq {
namespace {

double parse_double(const std::string& s, size_t line_no, const char* what) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
    return v;
}

uint64_t parse_u64(const std::string& s, size_t line_no, const char* what) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
    return v;
}

std::vector<std::string> split_plain(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

/// Splits one CSV record, honoring double-quoted fields with "" escapes
/// (the Porto dump quotes its POLYLINE column, which contains commas).
std::vector<std::string> split_quoted(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string trim_cr(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
    return s;
}

} // namespace

std::vector<Trajectory> parse_canonical(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::map<TrajectoryId, std::map<Timestamp, Point>> acc;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(line);
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("traj_id", 0) == 0) continue; // header
        std::vector<std::string> f = split_plain(line);
        if (f.size() != 4) {
            throw DataError("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                            std::to_string(f.size()));
        }
        TrajectoryId id = parse_u64(f[0], line_no, "traj_id");
        Timestamp t = static_cast<Timestamp>(parse_u64(f[1], line_no, "t"));
        if (t < 1) throw DataError("line " + std::to_string(line_no) + ": t must be >= 1");
        Point p{parse_double(f[2], line_no, "x"), parse_double(f[3], line_no, "y")};
        if (!acc[id].emplace(t, p).second) {
            throw DataError("line " + std::to_string(line_no) + ": duplicate point for trajectory " +
                            std::to_string(id) + " at t=" + std::to_string(t));
        }
    }
    std::vector<Trajectory> out;
    for (const auto& [id, pts] : acc) {
        Trajectory traj;
        traj.id = id;
        for (const auto& [t, p] : pts) traj.points.push_back({p.x, p.y, t});
        out.push_back(std::move(traj));
    }
    return out;
}

void write_canonical(const std::string& path, const std::vector<Trajectory>& trajectories) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "traj_id,t,x,y\n";
    char buf[128];
    for (const Trajectory& traj : trajectories) {
        for (const TrajectoryPoint& p : traj.points) {
            std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%" PRId64 ",%.17g,%.17g\n",
                          traj.id, p.t, p.x, p.y);
            out << buf;
        }
    }
    if (!out) throw DataError("write failed for " + path);
}

std::vector<Trajectory> parse_porto(const std::string& path, size_t min_length,
                                    size_t max_rows, size_t* skipped_rows) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) return {};
    std::vector<std::string> header = split_quoted(trim_cr(line));
    size_t poly_col = SIZE_MAX;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "POLYLINE") poly_col = i;
    }
    if (poly_col == SIZE_MAX) throw DataError(path + ": no POLYLINE column in header");

    std::vector<Trajectory> out;
    size_t skipped = 0;
    TrajectoryId next_id = 1;
    while (std::getline(in, line)) {
        if (max_rows > 0 && out.size() >= max_rows) break;
        line = trim_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> f = split_quoted(line);
        if (f.size() <= poly_col) {
            ++skipped;
            continue;
        }
        nlohmann::json poly = nlohmann::json::parse(f[poly_col], nullptr, false);
        if (poly.is_discarded() || !poly.is_array()) {
            ++skipped;
            continue;
        }
        Trajectory traj;
        traj.id = next_id;
        bool ok = true;
        Timestamp t = 1;
        for (const auto& pair : poly) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number()) {
                ok = false;
                break;
            }
            traj.points.push_back({pair[0].get<double>(), pair[1].get<double>(), t++});
        }
        if (!ok) {
            ++skipped;
            continue;
        }
        if (traj.points.size() < min_length) continue;
        ++next_id;
        out.push_back(std::move(traj));
    }
    if (skipped_rows) *skipped_rows = skipped;
    return out;
}

std::vector<Trajectory> parse_geolife(const std::string& dir, size_t min_length,
                                      size_t* skipped_files) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw DataError(dir + " is not a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".plt") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<Trajectory> out;
    size_t skipped = 0;
    TrajectoryId next_id = 1;
    for (const std::string& file : files) {
        std::ifstream in(file);
        std::string line;
        size_t header_lines = 0;
        for (; header_lines < 6 && std::getline(in, line); ++header_lines) {}
        if (header_lines < 6) {
            ++skipped;
            continue;
        }
        Trajectory traj;
        traj.id = next_id;
        Timestamp t = 1;
        bool ok = true;
        size_t line_no = 6;
        while (std::getline(in, line)) {
            ++line_no;
            line = trim_cr(line);
            if (line.empty()) continue;
            std::vector<std::string> f = split_plain(line);
            if (f.size() < 2) {
                ok = false;
                break;
            }
            double lat, lon;
            try {
                lat = parse_double(f[0], line_no, "lat");
                lon = parse_double(f[1], line_no, "lon");
            } catch (const DataError&) {
                ok = false;
                break;
            }
            traj.points.push_back({lon, lat, t++}); // x = lon, y = lat
        }
        if (!ok) {
            ++skipped;
            continue;
        }
        if (traj.points.size() < min_length) continue;
        ++next_id;
        out.push_back(std::move(traj));
    }
    if (skipped_files) *skipped_files = skipped;
    return out;
}

MotionModel motion_model_from_string(const std::string& s) {
    if (s == "random_walk") return MotionModel::RandomWalk;
    if (s == "constant_velocity") return MotionModel::ConstantVelocity;
    if (s == "ar") return MotionModel::Ar;
    throw UsageError("unknown motion model '" + s + "'");
}

std::string to_string(MotionModel m) {
    switch (m) {
        case MotionModel::RandomWalk: return "random_walk";
        case MotionModel::ConstantVelocity: return "constant_velocity";
        case MotionModel::Ar: return "ar";
    }
    throw InvariantError("unhandled motion model");
}

namespace {

/// splitmix64: the fixed generator behind all synthetic data. One sequential
/// stream per dataset, consumed in a fixed order, so output is reproducible
/// bit for bit from the seed alone.
struct SplitMix64 {
    uint64_t state;

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// uniform in (0, 1]
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
    /// standard normal via Box-Muller (consumes two draws)
    double normal() {
        double u1 = uniform_pos();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

} // namespace

std::vector<Trajectory> synth_generate(const SynthParams& params) {
    SplitMix64 rng{params.seed};
    std::vector<Trajectory> out;
    out.reserve(params.n);
    for (uint64_t i = 0; i < params.n; ++i) {
        Trajectory traj;
        traj.id = i + 1;
        Point pos{rng.uniform() * params.extent, rng.uniform() * params.extent};
        Point vel{0.0, 0.0};
        if (params.motion != MotionModel::RandomWalk) {
            if (params.sigma > 0.0) {
                vel = {rng.normal() * params.sigma, rng.normal() * params.sigma};
            } else {
                vel = {1.0, 1.0};
            }
        }
        Point drift{params.drift_x, params.drift_y};
        for (uint64_t s = 0; s < params.steps; ++s) {
            traj.points.push_back({pos.x, pos.y, static_cast<Timestamp>(s + 1)});
            switch (params.motion) {
                case MotionModel::RandomWalk:
                    pos = pos + Point{rng.normal() * params.sigma, rng.normal() * params.sigma};
                    break;
                case MotionModel::ConstantVelocity:
                    pos = pos + vel;
                    if (params.sigma > 0.0) {
                        pos = pos + Point{rng.normal() * params.sigma, rng.normal() * params.sigma};
                    }
                    break;
                case MotionModel::Ar:
                    vel = vel * 0.8 + Point{rng.normal() * params.sigma, rng.normal() * params.sigma};
                    pos = pos + vel;
                    break;
            }
            pos = pos + drift;
        }
        out.push_back(std::move(traj));
    }
    return out;
}

} // namespace ppq
