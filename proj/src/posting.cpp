#include "ppq/posting.hpp"

#include <algorithm>
#include <queue>

#include "ppq/errors.hpp"

namespace ppq {

HuffmanTable HuffmanTable::build(const std::map<uint64_t, uint64_t>& freq) {
    HuffmanTable t;
    if (freq.empty()) return t;

    struct TreeNode {
        uint64_t weight;
        int left = -1, right = -1; // -1 for leaves
        uint64_t symbol = 0;
    };
    std::vector<TreeNode> nodes;
    using Entry = std::pair<uint64_t, int>; // (weight, node index); index breaks ties
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (const auto& [sym, w] : freq) { // ascending symbol order
        nodes.push_back({w, -1, -1, sym});
        heap.push({w, static_cast<int>(nodes.size() - 1)});
    }
    while (heap.size() > 1) {
        auto [wa, a] = heap.top(); heap.pop();
        auto [wb, b] = heap.top(); heap.pop();
        nodes.push_back({wa + wb, a, b, 0});
        heap.push({wa + wb, static_cast<int>(nodes.size() - 1)});
    }

    std::vector<std::pair<uint64_t, uint8_t>> len_of; // (symbol, length)
    if (nodes.size() == 1) {
        len_of.push_back({nodes[0].symbol, 0}); // lone symbol: zero-bit code
    } else {
        std::vector<std::pair<int, int>> stack{{static_cast<int>(nodes.size() - 1), 0}};
        while (!stack.empty()) {
            auto [ni, depth] = stack.back();
            stack.pop_back();
            if (nodes[ni].left < 0) {
                if (depth > 255) throw InvariantError("Huffman code longer than 255 bits");
                len_of.push_back({nodes[ni].symbol, static_cast<uint8_t>(depth)});
            } else {
                stack.push_back({nodes[ni].left, depth + 1});
                stack.push_back({nodes[ni].right, depth + 1});
            }
        }
    }

    std::sort(len_of.begin(), len_of.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });
    for (const auto& [sym, len] : len_of) {
        t.symbols_.push_back(sym);
        t.lengths_.push_back(len);
    }
    t.assign_codes();
    return t;
}

void HuffmanTable::assign_codes() {
    codes_.assign(symbols_.size(), 0);
    index_.clear();
    uint8_t max_len = symbols_.empty() ? 0 : lengths_.back();
    first_code_.assign(max_len + 1, 0);
    first_pos_.assign(max_len + 1, SIZE_MAX);
    len_count_.assign(max_len + 1, 0);
    uint64_t code = 0;
    uint8_t prev_len = symbols_.empty() ? 0 : lengths_.front();
    for (size_t i = 0; i < symbols_.size(); ++i) {
        code <<= (lengths_[i] - prev_len);
        prev_len = lengths_[i];
        codes_[i] = code;
        if (first_pos_[lengths_[i]] == SIZE_MAX) {
            first_pos_[lengths_[i]] = i;
            first_code_[lengths_[i]] = code;
        }
        ++len_count_[lengths_[i]];
        index_[symbols_[i]] = i;
        ++code;
    }
}

void HuffmanTable::serialize(ByteWriter& w) const {
    w.varint(symbols_.size());
    for (size_t i = 0; i < symbols_.size(); ++i) {
        w.varint(symbols_[i]);
        w.u8(lengths_[i]);
    }
}

HuffmanTable HuffmanTable::deserialize(ByteReader& r) {
    HuffmanTable t;
    size_t n = r.varint();
    uint8_t prev = 0;
    for (size_t i = 0; i < n; ++i) {
        uint64_t sym = r.varint();
        uint8_t len = r.u8();
        if (len < prev) throw DataError("Huffman table lengths not ascending");
        prev = len;
        t.symbols_.push_back(sym);
        t.lengths_.push_back(len);
    }
    t.assign_codes();
    return t;
}

int HuffmanTable::code_length(uint64_t symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) throw UsageError("symbol not in Huffman table");
    return lengths_[it->second];
}

void HuffmanTable::encode(BitWriter& bw, uint64_t symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) throw UsageError("symbol not in Huffman table");
    bw.bits(codes_[it->second], lengths_[it->second]);
}

uint64_t HuffmanTable::decode(BitReader& br) const {
    if (symbols_.empty()) throw DataError("decode with empty Huffman table");
    if (lengths_.back() == 0) return symbols_.front(); // single zero-bit symbol
    uint64_t code = 0;
    for (uint8_t len = 1; len <= lengths_.back(); ++len) {
        code = (code << 1) | (br.bit() ? 1 : 0);
        if (len_count_[len] == 0) continue;
        if (code >= first_code_[len] && code < first_code_[len] + len_count_[len]) {
            return symbols_[first_pos_[len] + (code - first_code_[len])];
        }
    }
    throw DataError("invalid Huffman code in posting payload");
}

std::vector<uint64_t> deltas_of(const std::vector<TrajectoryId>& ids) {
    std::vector<uint64_t> d;
    d.reserve(ids.size());
    TrajectoryId prev = 0;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i > 0 && ids[i] <= prev) throw UsageError("posting ids must be strictly ascending");
        d.push_back(ids[i] - prev);
        prev = ids[i];
    }
    return d;
}

std::vector<uint8_t> encode_ids(const std::vector<TrajectoryId>& ids) {
    ByteWriter w;
    w.varint(ids.size());
    if (!ids.empty()) {
        std::vector<uint64_t> deltas = deltas_of(ids);
        std::map<uint64_t, uint64_t> freq;
        for (uint64_t d : deltas) ++freq[d];
        HuffmanTable table = HuffmanTable::build(freq);
        table.serialize(w);
        BitWriter bw;
        for (uint64_t d : deltas) table.encode(bw, d);
        w.bytes(bw.data());
    }
    return w.take();
}

std::vector<TrajectoryId> decode_ids(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    size_t n = r.varint();
    std::vector<TrajectoryId> ids;
    if (n == 0) return ids;
    HuffmanTable table = HuffmanTable::deserialize(r);
    std::vector<uint8_t> payload = r.bytes(r.remaining());
    BitReader br(payload);
    ids.reserve(n);
    TrajectoryId prev = 0;
    for (size_t i = 0; i < n; ++i) {
        prev += table.decode(br);
        ids.push_back(prev);
    }
    return ids;
}

void encode_ids_with(const std::vector<TrajectoryId>& ids, const HuffmanTable& table,
                     ByteWriter& w) {
    w.varint(ids.size());
    std::vector<uint64_t> deltas = deltas_of(ids);
    BitWriter bw;
    for (uint64_t d : deltas) table.encode(bw, d);
    w.varint(bw.data().size());
    w.bytes(bw.data());
}

std::vector<TrajectoryId> decode_ids_with(ByteReader& r, const HuffmanTable& table) {
    size_t n = r.varint();
    std::vector<uint8_t> payload = r.bytes(r.varint());
    BitReader br(payload);
    std::vector<TrajectoryId> ids;
    ids.reserve(n);
    TrajectoryId prev = 0;
    for (size_t i = 0; i < n; ++i) {
        prev += table.decode(br);
        ids.push_back(prev);
    }
    return ids;
}

} // namespace ppq
