// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>

namespace bcc {

/// Seeded splitmix64 stream. Deliberately not std::uniform_int_distribution:
/// that one is implementation-defined, and trace and scenario bytes must be
/// reproducible everywhere from the seed alone.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [lo, hi], inclusive. Debiased by rejection.
    std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t span = hi - lo + 1;
        if (span == 0) return next_u64();  // full range
        std::uint64_t limit = (~0ull / span) * span;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return lo + v % span;
    }

    std::int64_t uniform_i64(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform_u64(0, static_cast<std::uint64_t>(hi - lo)));
    }

    /// Derives an independent stream, e.g. one per subsystem of a scenario.
    Rng fork(std::uint64_t stream_id) {
        return Rng(next_u64() ^ (stream_id * 0x9e3779b97f4a7c15ull));
    }

  private:
    std::uint64_t state_;
};

}  // namespace bcc
