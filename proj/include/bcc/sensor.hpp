// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcc/result.hpp"
#include "bcc/rng.hpp"
#include "bcc/tx.hpp"

namespace bcc {

inline constexpr std::uint64_t kMaxLoggerIntervalSecs = 600;  // 10-minute cadence ceiling

/// A simulated electronic temperature logger at one location.
struct SensorProfile {
    LocationId location;
    CentiCelsius base_temp = 500;
    CentiCelsius noise_amp = 0;       // uniform in [-noise_amp, +noise_amp]
    std::uint64_t interval = kMaxLoggerIntervalSecs;  // seconds between readings
    CentiCelsius drift_per_day = 0;   // linear drift

    Result<void> validate() const {
        if (location.empty() || location.size() > kMaxIdLen)
            return Error(Err::BadProfile, "location id");
        if (interval == 0 || interval > kMaxLoggerIntervalSecs)
            return Error(Err::BadProfile, "interval must be in (0, 600] seconds");
        if (noise_amp < 0) return Error(Err::BadProfile, "negative noise amplitude");
        return {};
    }
};

/// A window in which readings are forced toward a target temperature, with
/// linear ramps of `ramp` seconds on both edges.
struct ExcursionSpec {
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    CentiCelsius target_temp = 0;
    std::uint64_t ramp = 0;

    Result<void> validate() const {
        if (start >= end) return Error(Err::WindowOutOfRange, "start must precede end");
        if (ramp > (end - start) / 2)
            return Error(Err::WindowOutOfRange, "ramp exceeds half the window");
        return {};
    }
};

/// Periodic readings at exact interval ticks after t0; count is
/// floor(duration / interval). Same seed, same trace, byte for byte.
inline Result<std::vector<TemperatureReading>> generate_trace(const SensorProfile& profile,
                                                              std::uint64_t t0,
                                                              std::uint64_t duration,
                                                              std::uint64_t seed) {
    auto valid = profile.validate();
    if (!valid) return valid.error();
    if (duration == 0) return Error(Err::BadProfile, "duration must be positive");
    Rng rng(seed);
    std::vector<TemperatureReading> trace;
    std::uint64_t ticks = duration / profile.interval;
    trace.reserve(ticks);
    for (std::uint64_t k = 1; k <= ticks; ++k) {
        std::uint64_t elapsed = k * profile.interval;
        std::int64_t noise =
            profile.noise_amp == 0
                ? 0
                : rng.uniform_i64(-static_cast<std::int64_t>(profile.noise_amp),
                                  profile.noise_amp);
        std::int64_t drift = static_cast<std::int64_t>(profile.drift_per_day) *
                             static_cast<std::int64_t>(elapsed) / 86400;
        trace.push_back(TemperatureReading{
            profile.location, t0 + elapsed,
            static_cast<CentiCelsius>(profile.base_temp + noise + drift)});
    }
    return trace;
}

/// Overwrites readings inside the excursion window: target temperature in
/// the plateau [start+ramp, end-ramp], integer-linear interpolation from
/// the original value across both ramps, untouched outside [start, end].
inline Result<std::vector<TemperatureReading>> inject_excursion(
    std::vector<TemperatureReading> trace, const ExcursionSpec& spec) {
    auto valid = spec.validate();
    if (!valid) return valid.error();
    if (trace.empty() || spec.start < trace.front().ts || spec.end > trace.back().ts)
        return Error(Err::WindowOutOfRange, "excursion window outside the trace span");
    for (auto& reading : trace) {
        if (reading.ts < spec.start || reading.ts > spec.end) continue;
        std::int64_t original = reading.temp;
        std::int64_t target = spec.target_temp;
        if (reading.ts < spec.start + spec.ramp) {
            std::int64_t dt = static_cast<std::int64_t>(reading.ts - spec.start);
            reading.temp = static_cast<CentiCelsius>(
                original + (target - original) * dt / static_cast<std::int64_t>(spec.ramp));
        } else if (reading.ts > spec.end - spec.ramp) {
            std::int64_t dt = static_cast<std::int64_t>(spec.end - reading.ts);
            reading.temp = static_cast<CentiCelsius>(
                original + (target - original) * dt / static_cast<std::int64_t>(spec.ramp));
        } else {
            reading.temp = spec.target_temp;
        }
    }
    return trace;
}

/// True iff the reading breaches the safe range on either side; bounds are
/// inclusive, so a reading exactly at a bound is fine.
inline bool alarm_check(CentiCelsius temp, CentiCelsius safe_min, CentiCelsius safe_max) {
    return temp < safe_min || temp > safe_max;
}

}  // namespace bcc
