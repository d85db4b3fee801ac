#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ppq/io.hpp"
#include "ppq/types.hpp"

namespace ppq {

/// Canonical Huffman code over uint64 symbols (posting-list deltas).
/// Codes are assigned by (length, symbol value), so the table is fully
/// determined by the symbol frequencies — no tree layout is stored.
class HuffmanTable {
public:
    /// Builds optimal code lengths from frequencies. Ties between subtrees
    /// resolve by creation order (leaves enter in ascending symbol order),
    /// which makes the lengths deterministic. A single-symbol table gets a
    /// zero-length code.
    static HuffmanTable build(const std::map<uint64_t, uint64_t>& freq);

    /// Table layout: varint symbol count, then per symbol varint value and a
    /// one-byte code length (symbols in canonical order).
    void serialize(ByteWriter& w) const;
    static HuffmanTable deserialize(ByteReader& r);

    void encode(BitWriter& bw, uint64_t symbol) const;
    uint64_t decode(BitReader& br) const;

    size_t symbol_count() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    /// Code length of a symbol in bits; throws UsageError for unknown symbols.
    int code_length(uint64_t symbol) const;

private:
    void assign_codes(); // canonical codes from lengths

    // parallel arrays, sorted by (length, symbol value)
    std::vector<uint64_t> symbols_;
    std::vector<uint8_t> lengths_;
    std::vector<uint64_t> codes_;
    std::map<uint64_t, size_t> index_; // symbol -> position
    // first canonical code, first symbol position, and symbol count per code
    // length, for decoding
    std::vector<uint64_t> first_code_;
    std::vector<size_t> first_pos_;
    std::vector<uint64_t> len_count_;
};

/// Strictly ascending ids -> delta values (first delta is ids[0] itself).
std::vector<uint64_t> deltas_of(const std::vector<TrajectoryId>& ids);

/// Self-contained posting blob: varint count, embedded Huffman table over the
/// list's own deltas, bit-packed payload. Throws UsageError on non-ascending
/// input.
std::vector<uint8_t> encode_ids(const std::vector<TrajectoryId>& ids);
std::vector<TrajectoryId> decode_ids(const std::vector<uint8_t>& bytes);

/// Table-less variants used inside the summary index section, where one
/// Huffman table per period is shared by all of its cells.
void encode_ids_with(const std::vector<TrajectoryId>& ids, const HuffmanTable& table,
                     ByteWriter& w);
std::vector<TrajectoryId> decode_ids_with(ByteReader& r, const HuffmanTable& table);

} // namespace ppq
