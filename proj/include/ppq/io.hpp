#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "ppq/errors.hpp"

namespace ppq {

/// Little-endian byte sink used by all summary sections.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16(uint16_t v) { raw(&v, 2); }
    void u32(uint32_t v) { raw(&v, 4); }
    void u64(uint64_t v) { raw(&v, 8); }
    void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

    void varint(uint64_t v) {
        while (v >= 0x80) {
            buf_.push_back(static_cast<uint8_t>(v) | 0x80);
            v >>= 7;
        }
        buf_.push_back(static_cast<uint8_t>(v));
    }

    void bytes(const std::vector<uint8_t>& b) {
        buf_.insert(buf_.end(), b.begin(), b.end());
    }
    void str(const std::string& s) {
        varint(s.size());
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    size_t size() const { return buf_.size(); }
    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    void raw(const void* p, size_t n) {
        static_assert(std::endian::native == std::endian::little,
                      "big-endian hosts need byte swaps here");
        const auto* b = static_cast<const uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    std::vector<uint8_t> buf_;
};

class ByteReader {
public:
    ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
    explicit ByteReader(const std::vector<uint8_t>& b) : data_(b.data()), size_(b.size()) {}

    uint8_t u8() { return take(1)[0]; }
    uint16_t u16() { uint16_t v; std::memcpy(&v, take(2), 2); return v; }
    uint32_t u32() { uint32_t v; std::memcpy(&v, take(4), 4); return v; }
    uint64_t u64() { uint64_t v; std::memcpy(&v, take(8), 8); return v; }
    int64_t i64() { return static_cast<int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }

    uint64_t varint() {
        uint64_t v = 0;
        int shift = 0;
        while (true) {
            uint8_t b = u8();
            v |= static_cast<uint64_t>(b & 0x7f) << shift;
            if (!(b & 0x80)) break;
            shift += 7;
            if (shift >= 64) throw DataError("varint overflow");
        }
        return v;
    }

    std::vector<uint8_t> bytes(size_t n) {
        const uint8_t* p = take(n);
        return {p, p + n};
    }
    std::string str() {
        size_t n = varint();
        const uint8_t* p = take(n);
        return {reinterpret_cast<const char*>(p), n};
    }

    size_t remaining() const { return size_ - pos_; }
    size_t pos() const { return pos_; }
    void skip(size_t n) { take(n); }

private:
    const uint8_t* take(size_t n) {
        if (pos_ + n > size_) throw DataError("truncated input");
        const uint8_t* p = data_ + pos_;
        pos_ += n;
        return p;
    }
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

/// MSB-first bit packer for CQC codes and posting payloads.
class BitWriter {
public:
    void bit(bool b) {
        if (nbits_ % 8 == 0) buf_.push_back(0);
        if (b) buf_.back() |= static_cast<uint8_t>(0x80u >> (nbits_ % 8));
        ++nbits_;
    }
    void bits(uint64_t value, int count) {
        for (int i = count - 1; i >= 0; --i) bit((value >> i) & 1);
    }
    size_t bit_count() const { return nbits_; }
    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
    size_t nbits_ = 0;
};

class BitReader {
public:
    BitReader(const uint8_t* data, size_t nbytes) : data_(data), nbytes_(nbytes) {}
    explicit BitReader(const std::vector<uint8_t>& b) : data_(b.data()), nbytes_(b.size()) {}

    bool bit() {
        if (pos_ >= nbytes_ * 8) throw DataError("bitstream exhausted");
        bool b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
        ++pos_;
        return b;
    }
    uint64_t bits(int count) {
        uint64_t v = 0;
        for (int i = 0; i < count; ++i) v = (v << 1) | (bit() ? 1 : 0);
        return v;
    }

private:
    const uint8_t* data_;
    size_t nbytes_;
    size_t pos_ = 0;
};

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);

} // namespace ppq
