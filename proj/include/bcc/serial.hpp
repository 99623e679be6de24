// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>

#include "bcc/bytes.hpp"
#include "bcc/result.hpp"

namespace bcc {

// Canonical wire layout, shared by hashing, signing and the ledger file:
//   - integers are big-endian, fixed width
//   - signed integers are two's complement of the same width
//   - variable byte/string fields carry a u32 big-endian length prefix
//     and are rejected above their declared maximum
//   - fixed-width fields (digests, keys, signatures) are written raw
//   - union alternatives are introduced by a single tag byte
//
// Field maxima.
inline constexpr std::size_t kMaxIdLen = 64;     // location and item ids
inline constexpr std::size_t kMaxMetaLen = 256;  // opaque block meta
inline constexpr std::size_t kMaxDumpReadings = 4320;  // 30 days at 10-minute cadence

class Writer {
  public:
    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u16(std::uint16_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
        buf_.push_back(static_cast<std::uint8_t>(v));
    }

    void u32(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    }

    void u64(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    }

    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

    void raw(const std::uint8_t* data, std::size_t len) {
        buf_.insert(buf_.end(), data, data + len);
    }

    template <std::size_t N>
    void raw(const std::array<std::uint8_t, N>& data) {
        raw(data.data(), N);
    }

    void var_bytes(const std::uint8_t* data, std::size_t len, std::size_t max, const char* field) {
        if (len > max) {
            fail(field);
            return;
        }
        u32(static_cast<std::uint32_t>(len));
        raw(data, len);
    }

    void var_bytes(const Bytes& data, std::size_t max, const char* field) {
        var_bytes(data.data(), data.size(), max, field);
    }

    void str(const std::string& s, std::size_t max, const char* field) {
        var_bytes(reinterpret_cast<const std::uint8_t*>(s.data()), s.size(), max, field);
    }

    bool failed() const { return failed_; }

    Result<Bytes> take() && {
        if (failed_) return Error(Err::OversizeField, oversize_field_);
        return std::move(buf_);
    }

    // For writers that are statically known not to overflow.
    Bytes take_unchecked() && { return std::move(buf_); }

  private:
    void fail(const char* field) {
        if (!failed_) oversize_field_ = field;
        failed_ = true;
    }

    Bytes buf_;
    bool failed_ = false;
    std::string oversize_field_;
};

class Reader {
  public:
    Reader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}
    explicit Reader(const Bytes& data) : Reader(data.data(), data.size()) {}

    std::uint8_t u8() {
        if (!need(1)) return 0;
        return data_[pos_++];
    }

    std::uint32_t u32() {
        if (!need(4)) return 0;
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }

    std::uint64_t u64() {
        if (!need(8)) return 0;
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }

    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

    template <std::size_t N>
    std::array<std::uint8_t, N> raw() {
        std::array<std::uint8_t, N> out{};
        if (!need(N)) return out;
        std::memcpy(out.data(), data_ + pos_, N);
        pos_ += N;
        return out;
    }

    Bytes var_bytes(std::size_t max) {
        std::uint32_t n = u32();
        if (n > max || !need(n)) {
            failed_ = true;
            return {};
        }
        Bytes out(data_ + pos_, data_ + pos_ + n);
        pos_ += n;
        return out;
    }

    std::string str(std::size_t max) {
        Bytes b = var_bytes(max);
        return std::string(b.begin(), b.end());
    }

    bool exhausted() const { return pos_ == len_; }
    std::size_t remaining() const { return len_ - pos_; }
    bool ok() const { return !failed_; }

    /// Whole-buffer parse succeeded: no overruns and nothing left over.
    bool done() const { return ok() && exhausted(); }

  private:
    bool need(std::size_t n) {
        if (failed_ || len_ - pos_ < n) {
            failed_ = true;
            return false;
        }
        return true;
    }

    const std::uint8_t* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
    bool failed_ = false;
};

}  // namespace bcc
