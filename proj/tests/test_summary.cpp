#include <doctest.h>

#include "ppq/errors.hpp"
#include "ppq/ingest.hpp"
#include "ppq/pipeline.hpp"
#include "ppq/summary.hpp"

using namespace ppq;

namespace {

Summary small_summary(uint64_t seed = 3, bool cqc = true) {
    SynthParams sp;
    sp.n = 12;
    sp.steps = 18;
    sp.sigma = 2e-4;
    sp.extent = 0.01;
    sp.seed = seed;
    Config cfg;
    cfg.eps_p = 0.005;
    cfg.eps_s = 0.005;
    cfg.cqc_enabled = cqc;
    return summarize_stream(to_batches(synth_generate(sp)), cfg);
}

} // namespace

TEST_CASE("serialization round-trips every section") {
    Summary s = small_summary();
    std::vector<uint8_t> bytes = serialize_summary(s);
    Summary back = deserialize_summary(bytes);

    CHECK(back.config.eps1 == s.config.eps1);
    CHECK(back.config.mode == s.config.mode);
    CHECK(back.config.cqc_enabled == s.config.cqc_enabled);
    CHECK(back.codebook.codewords == s.codebook.codewords);
    REQUIRE(back.trajectories.size() == s.trajectories.size());
    for (const auto& [id, rec] : s.trajectories) {
        const TrajectoryRecord& b = back.trajectories.at(id);
        CHECK(b.t_first == rec.t_first);
        CHECK(b.t_last == rec.t_last);
        CHECK(b.assignments == rec.assignments);
        CHECK(b.cqc == rec.cqc);
    }
    REQUIRE(back.steps.size() == s.steps.size());
    for (const auto& [t, step] : s.steps) {
        const StepRecord& b = back.steps.at(t);
        REQUIRE(b.partitions.partitions.size() == step.partitions.partitions.size());
        for (size_t i = 0; i < step.partitions.partitions.size(); ++i) {
            CHECK(b.partitions.partitions[i].members == step.partitions.partitions[i].members);
        }
        CHECK(b.coeffs == step.coeffs);
    }
    CHECK(back.checkpoints == s.checkpoints);
    REQUIRE(back.index.periods.size() == s.index.periods.size());
    for (size_t i = 0; i < s.index.periods.size(); ++i) {
        const PeriodIndex& a = s.index.periods[i];
        const PeriodIndex& b = back.index.periods[i];
        CHECK(a.start == b.start);
        CHECK(a.end == b.end);
        REQUIRE(a.pi.regions.size() == b.pi.regions.size());
        for (size_t r = 0; r < a.pi.regions.size(); ++r) {
            CHECK(a.pi.regions[r].rect == b.pi.regions[r].rect);
            CHECK(a.pi.regions[r].baseline_trd == b.pi.regions[r].baseline_trd);
            CHECK(a.pi.regions[r].baseline_t == b.pi.regions[r].baseline_t);
        }
        CHECK(a.postings == b.postings);
    }
}

TEST_CASE("serialization is byte-deterministic and stable under round trips") {
    Summary a = small_summary(7);
    Summary b = small_summary(7);
    std::vector<uint8_t> ba = serialize_summary(a);
    CHECK(ba == serialize_summary(b));
    // deserialize -> serialize reproduces the same bytes
    CHECK(serialize_summary(deserialize_summary(ba)) == ba);
}

TEST_CASE("the file starts with the magic and version") {
    std::vector<uint8_t> bytes = serialize_summary(small_summary());
    REQUIRE(bytes.size() > 6);
    CHECK(bytes[0] == 'P');
    CHECK(bytes[1] == 'P');
    CHECK(bytes[2] == 'Q');
    CHECK(bytes[3] == 'T');
    CHECK(bytes[4] == 1); // version 1, little-endian u16
    CHECK(bytes[5] == 0);
}

TEST_CASE("corrupted input is rejected") {
    std::vector<uint8_t> bytes = serialize_summary(small_summary());
    std::vector<uint8_t> bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(deserialize_summary(bad), DataError);
    bad = bytes;
    bad[4] = 9; // unknown version
    CHECK_THROWS_AS(deserialize_summary(bad), DataError);
    bad.assign(bytes.begin(), bytes.begin() + 20); // truncated
    CHECK_THROWS_AS(deserialize_summary(bad), DataError);
    CHECK_THROWS_AS(deserialize_summary({}), DataError);
}

TEST_CASE("summaries without correction codes round-trip too") {
    Summary s = small_summary(5, false);
    for (const auto& [id, rec] : s.trajectories) CHECK(rec.cqc.empty());
    std::vector<uint8_t> bytes = serialize_summary(s);
    Summary back = deserialize_summary(bytes);
    CHECK(!back.config.cqc_enabled);
    CHECK(serialize_summary(back) == bytes);
}

TEST_CASE("partition_of and coeffs_for agree with the step records") {
    Summary s = small_summary();
    for (const auto& [t, step] : s.steps) {
        for (size_t pi = 0; pi < step.partitions.partitions.size(); ++pi) {
            for (TrajectoryId id : step.partitions.partitions[pi].members) {
                CHECK(s.partition_of(id, t) == pi);
                CHECK(s.coeffs_for(id, t) == step.coeffs[pi]);
            }
        }
    }
    CHECK_THROWS_AS(s.partition_of(9999, 1), DataError);
    CHECK_THROWS_AS(s.partition_of(1, 9999), DataError);
}

TEST_CASE("total_points counts every stored step") {
    Summary s = small_summary();
    uint64_t expected = 0;
    for (const auto& [id, rec] : s.trajectories) expected += rec.length();
    CHECK(s.total_points() == expected);
    CHECK(s.total_points() == 12 * 18);
}

TEST_CASE("posting spans cover every indexed cell and match the stored lists") {
    Summary s = small_summary();
    std::vector<uint8_t> bytes = serialize_summary(s);
    auto spans = posting_spans(bytes);

    size_t expected_lists = 0;
    for (const auto& period : s.index.periods) {
        for (const auto& [t, cells] : period.postings) expected_lists += cells.size();
    }
    CHECK(spans.size() == expected_lists);

    for (const auto& [key, span] : spans) {
        CHECK(span.length > 0);
        CHECK(span.offset + span.length <= bytes.size());
        // the span must describe a cell the index actually stores
        CHECK(!s.index.ids_at(key.first, key.second).empty());
    }
}
