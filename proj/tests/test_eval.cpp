#include <doctest.h>

#include <set>

#include "ppq/errors.hpp"
#include "ppq/eval.hpp"
#include "ppq/ingest.hpp"
#include "ppq/pipeline.hpp"

using namespace ppq;

TEST_CASE("mae averages euclidean distances and converts units") {
    std::vector<Point> a{{0.0, 0.0}, {1.0, 1.0}};
    std::vector<Point> b{{3.0, 4.0}, {1.0, 1.0}};
    // distances 5 and 0, mean 2.5 units; at 0.5 units per meter that's 5 m
    CHECK(mae_meters(a, b, 0.5) == doctest::Approx(5.0));
    CHECK(mae_meters(a, a, 0.5) == 0.0);
    CHECK(mae_meters({}, {}, 1.0) == 0.0);
    CHECK_THROWS_AS(mae_meters(a, {}, 1.0), UsageError);
}

TEST_CASE("precision and recall follow the standard conventions") {
    auto [p1, r1] = precision_recall({1, 2, 3}, {2, 3, 4});
    CHECK(p1 == doctest::Approx(2.0 / 3.0));
    CHECK(r1 == doctest::Approx(2.0 / 3.0));

    auto [p2, r2] = precision_recall({}, {1, 2});
    CHECK(p2 == 1.0); // nothing wrong was returned
    CHECK(r2 == 0.0);

    auto [p3, r3] = precision_recall({1}, {});
    CHECK(p3 == 0.0);
    CHECK(r3 == 1.0);

    auto [p4, r4] = precision_recall({}, {});
    CHECK(p4 == 1.0);
    CHECK(r4 == 1.0);

    // duplicates in either list do not inflate the counts
    auto [p5, r5] = precision_recall({1, 1, 2}, {1, 2, 2});
    CHECK(p5 == 1.0);
    CHECK(r5 == 1.0);
}

TEST_CASE("compression ratio is raw point bytes over summary bytes") {
    CHECK(compression_ratio(100, 400) == doctest::Approx(4.0));
    CHECK(compression_ratio(0, 10) == 0.0);
    CHECK_THROWS_AS(compression_ratio(10, 0), UsageError);
}

TEST_CASE("a real summary compresses the raw points") {
    // enough co-located trajectories that posting lists and the codebook
    // amortize; tiny sparse datasets are dominated by per-cell overhead
    SynthParams sp;
    sp.n = 200;
    sp.steps = 200;
    sp.sigma = 5e-5;
    sp.extent = 0.002;
    sp.seed = 5;
    Config cfg;
    cfg.eps_p = 0.005;
    cfg.eps_s = 0.005;
    Summary s = summarize_stream(to_batches(synth_generate(sp)), cfg);
    std::vector<uint8_t> bytes = serialize_summary(s);
    CHECK(compression_ratio(s.total_points(), bytes.size()) > 1.0);
}

TEST_CASE("page accounting counts only the pages a trace touches") {
    SynthParams sp;
    sp.n = 15;
    sp.steps = 25;
    sp.sigma = 2e-4;
    sp.extent = 0.01;
    sp.seed = 9;
    Config cfg;
    cfg.eps_p = 0.005;
    cfg.eps_s = 0.005;
    cfg.page_bytes = 256; // tiny pages so queries spread across several
    Summary s = summarize_stream(to_batches(synth_generate(sp)), cfg);
    std::vector<uint8_t> bytes = serialize_summary(s);
    auto refined = oracle_reconstruct_all(s);

    CHECK(page_io_count(bytes, s, {}) == 0);
    // a miss touches nothing
    CHECK(page_io_count(bytes, s, {{1000.0, 1000.0, 1}}) == 0);

    const Point& p = refined.at(1)[0];
    uint64_t one = page_io_count(bytes, s, {{p.x, p.y, 1}});
    CHECK(one >= 1);
    // repeating the same query touches no additional pages
    CHECK(page_io_count(bytes, s, {{p.x, p.y, 1}, {p.x, p.y, 1}}) == one);

    // a full trace touches at least as many pages as any subset, and the
    // span arithmetic agrees with a direct computation
    std::vector<StrqQuery> trace;
    for (Timestamp t = 1; t <= 25; ++t) {
        for (TrajectoryId id = 1; id <= 15; ++id) {
            const Point& q = refined.at(id)[t - 1];
            trace.push_back({q.x, q.y, t});
        }
    }
    uint64_t all = page_io_count(bytes, s, trace);
    CHECK(all >= one);
    auto spans = posting_spans(bytes);
    std::set<uint64_t> expect;
    for (const StrqQuery& q : trace) {
        auto it = spans.find({q.t, cell_of({q.x, q.y}, cfg.gc_units())});
        REQUIRE(it != spans.end());
        for (uint64_t b = it->second.offset / 256;
             b <= (it->second.offset + it->second.length - 1) / 256; ++b) {
            expect.insert(b);
        }
    }
    CHECK(all == expect.size());
}

TEST_CASE("the strq oracle only reports trajectories alive at t") {
    std::vector<StreamBatch> batches;
    batches.push_back({1, {{1, {0.0, 0.0}}}});
    batches.push_back({2, {{1, {0.0001, 0.0}}, {2, {0.0002, 0.0}}}});
    Config cfg;
    cfg.eps_p = 0.005;
    cfg.eps_s = 0.005;
    Summary s = summarize_stream(batches, cfg);
    auto refined = oracle_reconstruct_all(s);
    const Point& p0 = refined.at(1)[0];
    auto at1 = oracle_strq(s, refined, {p0.x, p0.y, 1});
    CHECK(at1 == std::vector<TrajectoryId>{1}); // id 2 not born yet
    auto at9 = oracle_strq(s, refined, {p0.x, p0.y, 9});
    CHECK(at9.empty());
}
