#include "ppq/summary.hpp"

#include <algorithm>
#include <bit>

#include "ppq/errors.hpp"
#include "ppq/posting.hpp"

namespace ppq {
namespace {

constexpr char kMagic[4] = {'P', 'P', 'Q', 'T'};
constexpr uint16_t kVersion = 1;
constexpr size_t kSectionCount = 8;

int assignment_bits(size_t codebook_size) {
    if (codebook_size <= 1) return 1;
    return static_cast<int>(std::bit_width(codebook_size - 1));
}

void write_config(ByteWriter& w, const Config& c) {
    w.f64(c.eps1);
    w.f64(c.eps_p);
    w.f64(c.eps_s);
    w.f64(c.eps_c);
    w.f64(c.eps_d);
    w.f64(c.g_c_m);
    w.f64(c.g_s_m);
    w.u32(static_cast<uint32_t>(c.k));
    w.str(to_string(c.mode));
    w.f64(c.units_per_meter);
    w.u8(c.cqc_enabled ? 1 : 0);
    w.u64(c.page_bytes);
}

Config read_config(ByteReader& r) {
    Config c;
    c.eps1 = r.f64();
    c.eps_p = r.f64();
    c.eps_s = r.f64();
    c.eps_c = r.f64();
    c.eps_d = r.f64();
    c.g_c_m = r.f64();
    c.g_s_m = r.f64();
    c.k = static_cast<int>(r.u32());
    c.mode = partition_mode_from_string(r.str());
    c.units_per_meter = r.f64();
    c.cqc_enabled = r.u8() != 0;
    c.page_bytes = r.u64();
    return c;
}

void write_coefficients(ByteWriter& w, const Summary& s) {
    w.varint(s.steps.size());
    for (const auto& [t, step] : s.steps) {
        w.i64(t);
        w.varint(step.coeffs.size());
        for (const auto& cv : step.coeffs) {
            w.varint(cv.coeffs.size());
            for (double c : cv.coeffs) w.f64(c);
        }
    }
}

void read_coefficients(ByteReader& r, Summary& s) {
    size_t nsteps = r.varint();
    for (size_t i = 0; i < nsteps; ++i) {
        Timestamp t = r.i64();
        StepRecord& step = s.steps[t];
        size_t np = r.varint();
        step.coeffs.resize(np);
        for (auto& cv : step.coeffs) {
            cv.coeffs.resize(r.varint());
            for (double& c : cv.coeffs) c = r.f64();
        }
    }
}

void write_partitions(ByteWriter& w, const Summary& s) {
    w.varint(s.steps.size());
    for (const auto& [t, step] : s.steps) {
        w.i64(t);
        w.varint(step.partitions.partitions.size());
        for (const auto& p : step.partitions.partitions) {
            w.varint(p.members.size());
            TrajectoryId prev = 0;
            for (TrajectoryId id : p.members) { // sorted ascending
                w.varint(id - prev);
                prev = id;
            }
        }
    }
}

void read_partitions(ByteReader& r, Summary& s) {
    size_t nsteps = r.varint();
    for (size_t i = 0; i < nsteps; ++i) {
        Timestamp t = r.i64();
        StepRecord& step = s.steps[t];
        step.partitions.t = t;
        size_t np = r.varint();
        step.partitions.partitions.resize(np);
        for (auto& p : step.partitions.partitions) {
            size_t m = r.varint();
            TrajectoryId prev = 0;
            for (size_t j = 0; j < m; ++j) {
                prev += r.varint();
                p.members.push_back(prev);
            }
        }
    }
}

void write_codebook(ByteWriter& w, const Codebook& cb) {
    w.varint(cb.codewords.size());
    for (const Point& p : cb.codewords) {
        w.f64(p.x);
        w.f64(p.y);
    }
}

Codebook read_codebook(ByteReader& r) {
    Codebook cb;
    size_t n = r.varint();
    cb.codewords.resize(n);
    for (Point& p : cb.codewords) {
        p.x = r.f64();
        p.y = r.f64();
    }
    return cb;
}

void write_assignments(ByteWriter& w, const Summary& s) {
    const int bits = assignment_bits(s.codebook.codewords.size());
    w.u8(static_cast<uint8_t>(bits));
    w.varint(s.trajectories.size());
    for (const auto& [id, rec] : s.trajectories) {
        w.varint(id);
        w.i64(rec.t_first);
        w.i64(rec.t_last);
        BitWriter bw;
        for (uint32_t a : rec.assignments) bw.bits(a, bits);
        w.bytes(bw.data());
    }
}

void read_assignments(ByteReader& r, Summary& s) {
    const int bits = r.u8();
    size_t n = r.varint();
    for (size_t i = 0; i < n; ++i) {
        TrajectoryId id = r.varint();
        TrajectoryRecord& rec = s.trajectories[id];
        rec.t_first = r.i64();
        rec.t_last = r.i64();
        size_t len = static_cast<size_t>(rec.t_last - rec.t_first + 1);
        std::vector<uint8_t> payload = r.bytes((len * bits + 7) / 8);
        BitReader br(payload);
        rec.assignments.reserve(len);
        for (size_t j = 0; j < len; ++j) {
            rec.assignments.push_back(static_cast<uint32_t>(br.bits(bits)));
        }
    }
}

void write_cqc(ByteWriter& w, const Summary& s) {
    w.u8(s.config.cqc_enabled ? 1 : 0);
    if (!s.config.cqc_enabled) return;
    for (const auto& [id, rec] : s.trajectories) {
        if (rec.cqc.size() != rec.assignments.size()) {
            throw InvariantError("correction code count does not match point count");
        }
        for (const CqcCode& c : rec.cqc) c.serialize(w);
    }
}

void read_cqc(ByteReader& r, Summary& s) {
    if (r.u8() == 0) return;
    for (auto& [id, rec] : s.trajectories) {
        rec.cqc.reserve(rec.assignments.size());
        for (size_t i = 0; i < rec.assignments.size(); ++i) {
            rec.cqc.push_back(CqcCode::deserialize(r));
        }
    }
}

void write_checkpoints(ByteWriter& w, const CheckpointMap& cps) {
    w.varint(cps.size());
    for (const auto& [ts, per_traj] : cps) {
        w.i64(ts);
        w.varint(per_traj.size());
        for (const auto& [id, pts] : per_traj) {
            w.varint(id);
            w.varint(pts.size());
            for (const Point& p : pts) {
                w.f64(p.x);
                w.f64(p.y);
            }
        }
    }
}

CheckpointMap read_checkpoints(ByteReader& r) {
    CheckpointMap cps;
    size_t n = r.varint();
    for (size_t i = 0; i < n; ++i) {
        Timestamp ts = r.i64();
        size_t m = r.varint();
        auto& per_traj = cps[ts];
        for (size_t j = 0; j < m; ++j) {
            TrajectoryId id = r.varint();
            size_t np = r.varint();
            auto& pts = per_traj[id];
            pts.resize(np);
            for (Point& p : pts) {
                p.x = r.f64();
                p.y = r.f64();
            }
        }
    }
    return cps;
}

void write_index(ByteWriter& w, const TemporalIndex& idx) {
    w.varint(idx.periods.size());
    for (const auto& period : idx.periods) {
        w.i64(period.start);
        w.i64(period.end);
        w.varint(period.pi.regions.size());
        for (const auto& reg : period.pi.regions) {
            w.f64(reg.rect.x0);
            w.f64(reg.rect.y0);
            w.f64(reg.rect.x1);
            w.f64(reg.rect.y1);
            w.f64(reg.baseline_trd);
            w.i64(reg.baseline_t);
        }
        // one Huffman table per period, shared by all of its posting lists
        std::map<uint64_t, uint64_t> freq;
        for (const auto& [t, cells] : period.postings) {
            for (const auto& [cell, ids] : cells) {
                for (uint64_t d : deltas_of(ids)) ++freq[d];
            }
        }
        HuffmanTable table = HuffmanTable::build(freq);
        table.serialize(w);
        w.varint(period.postings.size());
        for (const auto& [t, cells] : period.postings) {
            w.i64(t);
            w.varint(cells.size());
            for (const auto& [cell, ids] : cells) {
                w.i64(cell.cx);
                w.i64(cell.cy);
                encode_ids_with(ids, table, w);
            }
        }
    }
}

TemporalIndex read_index(ByteReader& r) {
    TemporalIndex idx;
    size_t nperiods = r.varint();
    for (size_t i = 0; i < nperiods; ++i) {
        PeriodIndex period;
        period.start = r.i64();
        period.end = r.i64();
        size_t nregions = r.varint();
        period.pi.created = period.start;
        for (size_t j = 0; j < nregions; ++j) {
            Region reg;
            reg.rect.x0 = r.f64();
            reg.rect.y0 = r.f64();
            reg.rect.x1 = r.f64();
            reg.rect.y1 = r.f64();
            reg.baseline_trd = r.f64();
            reg.baseline_t = r.i64();
            period.pi.regions.push_back(reg);
        }
        HuffmanTable table = HuffmanTable::deserialize(r);
        size_t nts = r.varint();
        for (size_t j = 0; j < nts; ++j) {
            Timestamp t = r.i64();
            size_t ncells = r.varint();
            auto& cells = period.postings[t];
            for (size_t c = 0; c < ncells; ++c) {
                CellKey key{r.i64(), r.i64()};
                cells[key] = decode_ids_with(r, table);
            }
        }
        idx.periods.push_back(std::move(period));
    }
    return idx;
}

struct SectionSpan {
    uint64_t offset; // payload start, absolute
    uint64_t length;
};

std::vector<SectionSpan> section_spans(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    std::vector<uint8_t> magic = r.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic)) {
        throw DataError("not a summary file (bad magic)");
    }
    if (r.u16() != kVersion) throw DataError("unsupported summary version");
    std::vector<SectionSpan> spans;
    for (size_t i = 0; i < kSectionCount; ++i) {
        uint64_t len = r.u64();
        spans.push_back({r.pos(), len});
        r.skip(len);
    }
    return spans;
}

} // namespace

size_t Summary::partition_of(TrajectoryId id, Timestamp t) const {
    auto it = steps.find(t);
    if (it == steps.end()) throw DataError("no summarization step at requested timestamp");
    const auto& parts = it->second.partitions.partitions;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (std::binary_search(parts[i].members.begin(), parts[i].members.end(), id)) {
            return i;
        }
    }
    throw DataError("trajectory not a member of any partition at requested timestamp");
}

const CoefficientVector& Summary::coeffs_for(TrajectoryId id, Timestamp t) const {
    size_t p = partition_of(id, t);
    return steps.at(t).coeffs.at(p);
}

uint64_t Summary::total_points() const {
    uint64_t n = 0;
    for (const auto& [id, rec] : trajectories) n += rec.length();
    return n;
}

std::vector<uint8_t> serialize_summary(const Summary& s) {
    ByteWriter out;
    out.bytes({kMagic[0], kMagic[1], kMagic[2], kMagic[3]});
    out.u16(kVersion);
    auto section = [&out](auto&& fill) {
        ByteWriter w;
        fill(w);
        out.u64(w.size());
        out.bytes(w.data());
    };
    section([&](ByteWriter& w) { write_config(w, s.config); });
    section([&](ByteWriter& w) { write_coefficients(w, s); });
    section([&](ByteWriter& w) { write_partitions(w, s); });
    section([&](ByteWriter& w) { write_codebook(w, s.codebook); });
    section([&](ByteWriter& w) { write_assignments(w, s); });
    section([&](ByteWriter& w) { write_cqc(w, s); });
    section([&](ByteWriter& w) { write_checkpoints(w, s.checkpoints); });
    section([&](ByteWriter& w) { write_index(w, s.index); });
    return out.take();
}

Summary deserialize_summary(const std::vector<uint8_t>& bytes) {
    std::vector<SectionSpan> spans = section_spans(bytes);
    auto reader = [&](size_t i) {
        return ByteReader(bytes.data() + spans[i].offset, spans[i].length);
    };
    Summary s;
    {
        ByteReader r = reader(0);
        s.config = read_config(r);
    }
    {
        ByteReader r = reader(1);
        read_coefficients(r, s);
    }
    {
        ByteReader r = reader(2);
        read_partitions(r, s);
    }
    {
        ByteReader r = reader(3);
        s.codebook = read_codebook(r);
    }
    {
        ByteReader r = reader(4);
        read_assignments(r, s);
    }
    {
        ByteReader r = reader(5);
        read_cqc(r, s);
    }
    {
        ByteReader r = reader(6);
        s.checkpoints = read_checkpoints(r);
    }
    {
        ByteReader r = reader(7);
        s.index = read_index(r);
    }
    return s;
}

std::map<std::pair<Timestamp, CellKey>, PostingSpan>
posting_spans(const std::vector<uint8_t>& file_bytes) {
    std::vector<SectionSpan> spans = section_spans(file_bytes);
    const SectionSpan& idx = spans.back();
    ByteReader r(file_bytes.data() + idx.offset, idx.length);
    std::map<std::pair<Timestamp, CellKey>, PostingSpan> out;
    size_t nperiods = r.varint();
    for (size_t i = 0; i < nperiods; ++i) {
        r.i64();
        r.i64();
        size_t nregions = r.varint();
        r.skip(nregions * (5 * 8 + 8));
        HuffmanTable::deserialize(r); // advance past the table
        size_t nts = r.varint();
        for (size_t j = 0; j < nts; ++j) {
            Timestamp t = r.i64();
            size_t ncells = r.varint();
            for (size_t c = 0; c < ncells; ++c) {
                CellKey key{r.i64(), r.i64()};
                r.varint(); // id count
                uint64_t nbytes = r.varint();
                out[{t, key}] = {idx.offset + r.pos(), nbytes};
                r.skip(nbytes);
            }
        }
    }
    return out;
}

} // namespace ppq
