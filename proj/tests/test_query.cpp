#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ppq/errors.hpp"
#include "ppq/eval.hpp"
#include "ppq/ingest.hpp"
#include "ppq/pipeline.hpp"
#include "ppq/query.hpp"

using namespace ppq;

namespace {

Summary drifting_summary(uint64_t seed = 37) {
    SynthParams sp;
    sp.n = 12;
    sp.steps = 60;
    sp.sigma = 1e-4;
    sp.extent = 0.01;
    sp.drift_x = 8e-4;
    sp.drift_y = 6e-4;
    sp.seed = seed;
    Config cfg;
    cfg.eps_p = 0.005;
    cfg.eps_s = 0.005;
    return summarize_stream(to_batches(synth_generate(sp)), cfg);
}

Summary stationary_summary(uint64_t seed = 43) {
    SynthParams sp;
    sp.n = 20;
    sp.steps = 30;
    sp.sigma = 2e-4;
    sp.extent = 0.01;
    sp.seed = seed;
    Config cfg;
    cfg.eps_p = 0.005;
    cfg.eps_s = 0.005;
    return summarize_stream(to_batches(synth_generate(sp)), cfg);
}

std::vector<CellKey> oracle_cells(const Point& q, double gs, double gc) {
    const double r = std::sqrt(2.0) / 2.0 * gs;
    CellKey center = cell_of(q, gc);
    std::vector<CellKey> out;
    for (int64_t dx = -6; dx <= 6; ++dx) {
        for (int64_t dy = -6; dy <= 6; ++dy) {
            CellKey c{center.cx + dx, center.cy + dy};
            if (c == center || dist_to_rect(q, cell_rect(c, gc)) <= r) out.push_back(c);
        }
    }
    return out;
}

} // namespace

TEST_CASE("local search keeps only the query cell away from borders") {
    const double gc = 1.0;
    const double gs = 0.3 * std::sqrt(2.0); // radius exactly 0.3
    auto cells = local_search_cells({0.5, 0.5}, gs, gc);
    CHECK(cells == std::vector<CellKey>{{0, 0}});
}

TEST_CASE("local search near one border adds the neighbor") {
    const double gc = 1.0;
    const double gs = 0.3 * std::sqrt(2.0);
    auto cells = local_search_cells({0.05, 0.5}, gs, gc);
    std::set<CellKey> got(cells.begin(), cells.end());
    CHECK(got == std::set<CellKey>{{-1, 0}, {0, 0}});
}

TEST_CASE("local search near a corner returns four cells") {
    const double gc = 1.0;
    const double gs = 0.3 * std::sqrt(2.0);
    auto cells = local_search_cells({0.05, 0.05}, gs, gc);
    std::set<CellKey> got(cells.begin(), cells.end());
    CHECK(got == std::set<CellKey>{{-1, -1}, {-1, 0}, {0, -1}, {0, 0}});
}

TEST_CASE("local search matches the disc oracle when the radius spans cells") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const double gc = 1.0, gs = 4.0; // radius ~2.83 cells
    for (int it = 0; it < 200; ++it) {
        Point q{u(rng), u(rng)};
        auto got = local_search_cells(q, gs, gc);
        auto want = oracle_cells(q, gs, gc);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        CHECK(got == want);
    }
}

TEST_CASE("approximate answers come straight from the posting list") {
    Summary s = stationary_summary();
    auto refined = oracle_reconstruct_all(s);
    const double gc = s.config.gc_units();
    for (Timestamp t : {1, 10, 30}) {
        for (const auto& [id, pts] : refined) {
            const Point& p = pts[t - 1];
            auto got = strq_approx(s, {p.x, p.y, t});
            CHECK(std::find(got.begin(), got.end(), id) != got.end());
            // and the approximate set is exactly the ids indexed in this cell
            CHECK(got == s.index.ids_at(t, cell_of(p, gc)));
        }
    }
    CHECK(strq_approx(s, {0.0, 0.0, 999}).empty());
}

TEST_CASE("exact answers match the brute-force oracle") {
    Summary s = stationary_summary();
    auto refined = oracle_reconstruct_all(s);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-0.002, 0.012);
    int nonempty = 0;
    for (int it = 0; it < 300; ++it) {
        StrqQuery q{u(rng), u(rng), 1 + static_cast<Timestamp>(rng() % 30)};
        auto got = strq_exact(s, q);
        auto want = oracle_strq(s, refined, q);
        CHECK(got == want);
        if (!want.empty()) ++nonempty;
    }
    CHECK(nonempty > 20); // the trace actually exercises hits
}

TEST_CASE("exact answers also match on a drifting stream with several periods") {
    Summary s = drifting_summary();
    REQUIRE(s.index.rebuild_count() >= 2);
    auto refined = oracle_reconstruct_all(s);
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(-0.005, 0.06);
    for (int it = 0; it < 200; ++it) {
        StrqQuery q{u(rng), u(rng), 1 + static_cast<Timestamp>(rng() % 60)};
        CHECK(strq_exact(s, q) == oracle_strq(s, refined, q));
    }
    // query every refined point directly so recall is exercised at every t
    for (Timestamp t = 1; t <= 60; ++t) {
        for (const auto& [id, pts] : refined) {
            const Point& p = pts[t - 1];
            auto got = strq_exact(s, {p.x, p.y, t});
            CHECK(std::find(got.begin(), got.end(), id) != got.end());
        }
    }
}

TEST_CASE("range reconstruction is bit-identical to a full replay") {
    Summary s = drifting_summary();
    REQUIRE(!s.checkpoints.empty());
    auto refined = oracle_reconstruct_all(s);
    std::mt19937_64 rng(61);
    for (int it = 0; it < 100; ++it) {
        TrajectoryId id = 1 + rng() % 12;
        const TrajectoryRecord& rec = s.trajectories.at(id);
        Timestamp t_start = rec.t_first + static_cast<Timestamp>(rng() % rec.length());
        Timestamp max_l = rec.t_last - t_start + 1;
        Timestamp l = 1 + static_cast<Timestamp>(rng() % max_l);
        auto got = reconstruct_range(s, id, t_start, l);
        REQUIRE(got.size() == static_cast<size_t>(l));
        for (Timestamp t = t_start; t < t_start + l; ++t) {
            CHECK(got[t - t_start] == refined.at(id)[t - rec.t_first]); // bit-identical
        }
    }
    // explicitly past a checkpoint, where replay must start mid-stream
    Timestamp t_last = s.trajectories.at(1).t_last;
    Timestamp late = std::min<Timestamp>(s.checkpoints.rbegin()->first + 1, t_last - 2);
    auto got = reconstruct_range(s, 1, late, 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(got[i] == refined.at(1)[late + i - s.trajectories.at(1).t_first]);
    }
}

TEST_CASE("range reconstruction rejects bad arguments") {
    Summary s = stationary_summary();
    CHECK_THROWS_AS(reconstruct_range(s, 999, 1, 1), DataError);
    CHECK_THROWS_AS(reconstruct_range(s, 1, 0, 1), DataError);
    CHECK_THROWS_AS(reconstruct_range(s, 1, 1, 0), DataError);
    CHECK_THROWS_AS(reconstruct_range(s, 1, 29, 5), DataError); // runs past the end
}

TEST_CASE("path queries return the exact hits with their onward paths") {
    Summary s = stationary_summary();
    auto refined = oracle_reconstruct_all(s);
    const Point& anchor = refined.at(5)[9]; // trajectory 5 at t = 10
    TpqQuery q{anchor.x, anchor.y, 10, 7};
    auto got = tpq(s, q);

    auto hits = strq_exact(s, {q.x, q.y, q.t});
    REQUIRE(got.size() == hits.size());
    for (TrajectoryId id : hits) {
        REQUIRE(got.count(id) == 1);
        const auto& path = got.at(id);
        Timestamp t_end = std::min<Timestamp>(10 + 7, s.trajectories.at(id).t_last);
        REQUIRE(path.size() == static_cast<size_t>(t_end - 10 + 1));
        for (size_t i = 0; i < path.size(); ++i) {
            CHECK(path[i] == refined.at(id)[10 + i - 1]);
        }
    }
}

TEST_CASE("a path query with zero extra duration returns single points") {
    Summary s = stationary_summary();
    auto refined = oracle_reconstruct_all(s);
    const Point& anchor = refined.at(3)[4];
    auto got = tpq(s, {anchor.x, anchor.y, 5, 0});
    REQUIRE(got.count(3) == 1);
    CHECK(got.at(3) == std::vector<Point>{refined.at(3)[4]});
}

TEST_CASE("paths clamp at the trajectory end") {
    Summary s = stationary_summary();
    auto refined = oracle_reconstruct_all(s);
    const Point& anchor = refined.at(7)[27]; // t = 28 of 30
    auto got = tpq(s, {anchor.x, anchor.y, 28, 100});
    REQUIRE(got.count(7) == 1);
    CHECK(got.at(7).size() == 3); // t = 28, 29, 30
}
