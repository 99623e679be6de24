// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace bcc {

// Failure codes shared across the ledger, contract, store and simulator.
// The names are a stable contract: the CLI prints them verbatim on stderr.
enum class Err {
    OversizeField,
    UnknownSubmitter,
    InvalidSignature,
    NonMonotonicTimestamp,
    LinkMismatch,
    HeightMismatch,
    BadBlockHash,
    EmptyBlock,
    Unauthorized,
    UnknownItem,
    UnknownLocation,
    CustodyConflict,
    StaleTimestamp,
    InactiveLocation,
    DuplicateId,
    DuplicateDeploy,
    BadRange,
    OutOfGlobalBounds,
    Missing,
    CorruptPayload,
    NodeDown,
    UnknownNode,
    InvalidCandidate,
    WindowOutOfRange,
    BadProfile,
    ScenarioError,
    MalformedRecord,
    IoError,
};

inline const char* err_name(Err code) {
    switch (code) {
        case Err::OversizeField: return "OversizeField";
        case Err::UnknownSubmitter: return "UnknownSubmitter";
        case Err::InvalidSignature: return "InvalidSignature";
        case Err::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
        case Err::LinkMismatch: return "LinkMismatch";
        case Err::HeightMismatch: return "HeightMismatch";
        case Err::BadBlockHash: return "BadBlockHash";
        case Err::EmptyBlock: return "EmptyBlock";
        case Err::Unauthorized: return "Unauthorized";
        case Err::UnknownItem: return "UnknownItem";
        case Err::UnknownLocation: return "UnknownLocation";
        case Err::CustodyConflict: return "CustodyConflict";
        case Err::StaleTimestamp: return "StaleTimestamp";
        case Err::InactiveLocation: return "InactiveLocation";
        case Err::DuplicateId: return "DuplicateId";
        case Err::DuplicateDeploy: return "DuplicateDeploy";
        case Err::BadRange: return "BadRange";
        case Err::OutOfGlobalBounds: return "OutOfGlobalBounds";
        case Err::Missing: return "Missing";
        case Err::CorruptPayload: return "CorruptPayload";
        case Err::NodeDown: return "NodeDown";
        case Err::UnknownNode: return "UnknownNode";
        case Err::InvalidCandidate: return "InvalidCandidate";
        case Err::WindowOutOfRange: return "WindowOutOfRange";
        case Err::BadProfile: return "BadProfile";
        case Err::ScenarioError: return "ScenarioError";
        case Err::MalformedRecord: return "MalformedRecord";
        case Err::IoError: return "IoError";
    }
    return "UnknownError";
}

struct Error {
    Err code;
    std::string detail;

    Error(Err c, std::string d = {}) : code(c), detail(std::move(d)) {}

    std::string to_string() const {
        if (detail.empty()) return err_name(code);
        return std::string(err_name(code)) + ": " + detail;
    }
};

// Minimal expected-style result; ok value or an Error, never both.
template <typename T>
class Result {
  public:
    Result(T value) : value_(std::move(value)) {}
    Result(Error error) : value_(std::move(error)) {}
    Result(Err code, std::string detail = {}) : value_(Error(code, std::move(detail))) {}

    bool ok() const { return std::holds_alternative<T>(value_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        assert(ok());
        return std::get<T>(value_);
    }
    T& value() & {
        assert(ok());
        return std::get<T>(value_);
    }
    T&& take() && {
        assert(ok());
        return std::get<T>(std::move(value_));
    }

    const Error& error() const {
        assert(!ok());
        return std::get<Error>(value_);
    }
    Err code() const { return error().code; }

  private:
    std::variant<T, Error> value_;
};

template <>
class Result<void> {
  public:
    Result() = default;
    Result(Error error) : error_(std::move(error)) {}
    Result(Err code, std::string detail = {}) : error_(Error(code, std::move(detail))) {}

    bool ok() const { return !error_.has_value(); }
    explicit operator bool() const { return ok(); }

    const Error& error() const {
        assert(!ok());
        return *error_;
    }
    Err code() const { return error().code; }

  private:
    std::optional<Error> error_;
};

}  // namespace bcc
