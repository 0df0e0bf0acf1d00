#pragma once

#include <string>

#include "ucutlass/config.hpp"

namespace ucutlass {

struct ConfigHash {
    std::string hex;        // 64-char lowercase hex SHA-256 digest
    std::string name_space; // "ucutlass_" + first 16 hex chars

    bool operator==(const ConfigHash&) const = default;
};

// Serializes a lowered config to the deterministic "UCL1" byte format
// documented in docs/serialization.md. Fields are emitted in a fixed schema
// order with a fixed absence marker for unset optionals; the result is
// independent of source binding order and excludes presentation-only data
// (source text, defaulting notes).
std::string canonical_serialize(const AnyConfig& config);
std::string canonical_serialize(const KernelConfig& config);
std::string canonical_serialize(const PipelineConfig& config);

// SHA-256 of the canonical serialization plus the derived namespace.
ConfigHash config_hash(const AnyConfig& config);
ConfigHash config_hash(const KernelConfig& config);
ConfigHash config_hash(const PipelineConfig& config);

// SHA-256 of an arbitrary byte string as lowercase hex.
std::string sha256_hex(const std::string& bytes);

}  // namespace ucutlass
