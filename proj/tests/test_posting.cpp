#include <doctest.h>

#include <random>
#include <set>

#include "ppq/errors.hpp"
#include "ppq/posting.hpp"

using namespace ppq;

TEST_CASE("delta extraction") {
    CHECK(deltas_of({}) == std::vector<uint64_t>{});
    CHECK(deltas_of({5}) == std::vector<uint64_t>{5});
    CHECK(deltas_of({3, 4, 9}) == std::vector<uint64_t>{3, 1, 5});
    CHECK_THROWS_AS(deltas_of({3, 3}), UsageError);
    CHECK_THROWS_AS(deltas_of({5, 2}), UsageError);
}

TEST_CASE("empty and singleton posting lists") {
    CHECK(decode_ids(encode_ids({})) == std::vector<TrajectoryId>{});
    CHECK(encode_ids({}).size() == 1); // just the zero count
    CHECK(decode_ids(encode_ids({5})) == std::vector<TrajectoryId>{5});
}

TEST_CASE("round trip on structured lists") {
    std::vector<std::vector<TrajectoryId>> cases = {
        {1, 2, 3, 4, 5, 6, 7, 8},
        {10, 20, 30, 40},
        {1, 1000000, 1000001},
        {0, 1, 2},
        {18446744073709551615ull},
    };
    for (const auto& ids : cases) {
        CHECK(decode_ids(encode_ids(ids)) == ids);
    }
}

TEST_CASE("round trip on 10000-element random sorted lists, smaller than raw") {
    std::mt19937_64 rng(101);
    std::set<TrajectoryId> s;
    while (s.size() < 10000) s.insert(rng() % 2000000);
    std::vector<TrajectoryId> ids(s.begin(), s.end());
    std::vector<uint8_t> enc = encode_ids(ids);
    CHECK(decode_ids(enc) == ids);
    CHECK(enc.size() < ids.size() * 8);
}

TEST_CASE("dense lists of at least 8 ids beat the raw encoding") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = 8 + rng() % 64;
        TrajectoryId start = rng() % 10000;
        std::set<TrajectoryId> s;
        while (s.size() < n) s.insert(start + rng() % (4 * n)); // dense range
        std::vector<TrajectoryId> ids(s.begin(), s.end());
        std::vector<uint8_t> enc = encode_ids(ids);
        CHECK(decode_ids(enc) == ids);
        CHECK(enc.size() < ids.size() * 8);
    }
}

TEST_CASE("codec is bijective on random inputs") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 500; ++trial) {
        size_t n = rng() % 50;
        std::set<TrajectoryId> s;
        while (s.size() < n) s.insert(rng() % 100000);
        std::vector<TrajectoryId> ids(s.begin(), s.end());
        CHECK(decode_ids(encode_ids(ids)) == ids);
    }
}

TEST_CASE("Huffman tables are deterministic and canonical") {
    std::map<uint64_t, uint64_t> freq{{1, 10}, {2, 10}, {3, 5}, {4, 1}};
    HuffmanTable a = HuffmanTable::build(freq);
    HuffmanTable b = HuffmanTable::build(freq);
    ByteWriter wa, wb;
    a.serialize(wa);
    b.serialize(wb);
    CHECK(wa.data() == wb.data());

    // more frequent symbols never get longer codes
    CHECK(a.code_length(1) <= a.code_length(3));
    CHECK(a.code_length(3) <= a.code_length(4));
}

TEST_CASE("single-symbol table uses zero-bit codes") {
    HuffmanTable t = HuffmanTable::build({{7, 100}});
    CHECK(t.code_length(7) == 0);
    BitWriter bw;
    t.encode(bw, 7);
    CHECK(bw.bit_count() == 0);
}

TEST_CASE("table round-trips through serialization") {
    std::mt19937_64 rng(109);
    std::map<uint64_t, uint64_t> freq;
    for (int i = 0; i < 40; ++i) freq[rng() % 500] = 1 + rng() % 1000;
    HuffmanTable t = HuffmanTable::build(freq);
    ByteWriter w;
    t.serialize(w);
    ByteReader r(w.data());
    HuffmanTable back = HuffmanTable::deserialize(r);
    // identical coding behavior
    for (const auto& [sym, f] : freq) {
        BitWriter b1, b2;
        t.encode(b1, sym);
        back.encode(b2, sym);
        CHECK(b1.data() == b2.data());
        CHECK(b1.bit_count() == b2.bit_count());
    }
}

TEST_CASE("shared-table encoding round-trips") {
    std::mt19937_64 rng(113);
    std::vector<std::vector<TrajectoryId>> lists;
    std::map<uint64_t, uint64_t> freq;
    for (int l = 0; l < 30; ++l) {
        std::set<TrajectoryId> s;
        size_t n = 1 + rng() % 40;
        while (s.size() < n) s.insert(rng() % 5000);
        lists.emplace_back(s.begin(), s.end());
        for (uint64_t d : deltas_of(lists.back())) ++freq[d];
    }
    HuffmanTable table = HuffmanTable::build(freq);
    ByteWriter w;
    for (const auto& ids : lists) encode_ids_with(ids, table, w);
    ByteReader r(w.data());
    for (const auto& ids : lists) {
        CHECK(decode_ids_with(r, table) == ids);
    }
    CHECK(r.remaining() == 0);
}

TEST_CASE("unknown symbols are rejected") {
    HuffmanTable t = HuffmanTable::build({{1, 5}, {2, 5}});
    BitWriter bw;
    CHECK_THROWS_AS(t.encode(bw, 3), UsageError);
    CHECK_THROWS_AS(t.code_length(3), UsageError);
}
