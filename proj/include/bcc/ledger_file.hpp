// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "bcc/chain.hpp"
#include "bcc/result.hpp"

namespace bcc {

// Ledger file: magic "BCC1", then one length-prefixed canonical block
// record per block (u32 big-endian length). Appending a block appends
// exactly one record; existing bytes are never rewritten.
inline constexpr char kLedgerMagic[4] = {'B', 'C', 'C', '1'};

inline Result<void> write_ledger(const std::filesystem::path& path, const Chain& chain) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return Error(Err::IoError, "cannot open " + path.string());
    out.write(kLedgerMagic, 4);
    for (const auto& block : chain.blocks()) {
        auto record = serialize_block(block);
        if (!record) return record.error();
        const Bytes& bytes = record.value();
        std::uint8_t len[4] = {static_cast<std::uint8_t>(bytes.size() >> 24),
                               static_cast<std::uint8_t>(bytes.size() >> 16),
                               static_cast<std::uint8_t>(bytes.size() >> 8),
                               static_cast<std::uint8_t>(bytes.size())};
        out.write(reinterpret_cast<const char*>(len), 4);
        out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    }
    if (!out) return Error(Err::IoError, "write failed: " + path.string());
    return {};
}

inline Result<void> append_ledger_record(const std::filesystem::path& path, const Block& block) {
    auto record = serialize_block(block);
    if (!record) return record.error();
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) return Error(Err::IoError, "cannot open " + path.string());
    const Bytes& bytes = record.value();
    std::uint8_t len[4] = {static_cast<std::uint8_t>(bytes.size() >> 24),
                           static_cast<std::uint8_t>(bytes.size() >> 16),
                           static_cast<std::uint8_t>(bytes.size() >> 8),
                           static_cast<std::uint8_t>(bytes.size())};
    out.write(reinterpret_cast<const char*>(len), 4);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    if (!out) return Error(Err::IoError, "append failed: " + path.string());
    return {};
}

/// Loads and structurally parses a ledger file. Chain-level validity is
/// the caller's business (validate_chain / replay); a parse failure names
/// the failing block index.
inline Result<Chain> read_ledger(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Error(Err::IoError, "cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != std::string(kLedgerMagic, 4))
        return Error(Err::MalformedRecord, "bad ledger magic");
    std::vector<Block> blocks;
    while (true) {
        std::uint8_t len_buf[4];
        in.read(reinterpret_cast<char*>(len_buf), 4);
        if (in.eof() && in.gcount() == 0) break;
        if (!in || in.gcount() != 4) return Error(Err::MalformedRecord, "truncated record length");
        std::uint32_t len = (std::uint32_t(len_buf[0]) << 24) | (std::uint32_t(len_buf[1]) << 16) |
                            (std::uint32_t(len_buf[2]) << 8) | std::uint32_t(len_buf[3]);
        if (len > (1u << 26)) return Error(Err::MalformedRecord, "record length out of range");
        Bytes record(len);
        in.read(reinterpret_cast<char*>(record.data()), len);
        if (!in || static_cast<std::uint32_t>(in.gcount()) != len)
            return Error(Err::MalformedRecord,
                         "block " + std::to_string(blocks.size()) + ": truncated record");
        auto block = parse_block(record);
        if (!block)
            return Error(block.error().code,
                         "block " + std::to_string(blocks.size()) + ": " + block.error().detail);
        blocks.push_back(std::move(block).take());
    }
    return Chain::from_blocks_unchecked(std::move(blocks));
}

}  // namespace bcc
