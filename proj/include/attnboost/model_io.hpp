#pragma once

#include "attnboost/fusion.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace attnboost {

/// Unreadable model file: bad magic, unknown version, truncation or a checksum
/// mismatch (the message names the section).
class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Layout: "ATNB" magic, u32 version, u32 section count, then per section a
/// 4-byte tag (META, PREP, ATTN, ENSM), u64 payload length, u64 FNV-1a of the
/// payload, payload. All integers and doubles little-endian.
std::vector<unsigned char> serialize_model(const AttnBoostModel& model, const std::string& fingerprint = {});

struct LoadedModel {
    AttnBoostModel model;
    std::string fingerprint;
};

LoadedModel deserialize_model(const std::vector<unsigned char>& bytes);

/// Written to a sibling temp file, then renamed into place.
void save_model(const AttnBoostModel& model, const std::filesystem::path& path,
                const std::string& fingerprint = {});

LoadedModel load_model(const std::filesystem::path& path);

/// Replaces `path` with `contents` via temp file + rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace attnboost
