#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ensemblekit/ensemble.hpp"

namespace ensemblekit {

inline constexpr int kArchiveFormatVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string artifact_version = kArtifactVersion;
};

struct ModelArchive {
    EnsembleModel model;
    Provenance provenance;
};

/// Top-level keys, in order: format_version, method, classes, input_dim, provenance, model.
nlohmann::ordered_json archive_to_json(const ModelArchive& archive);
ModelArchive archive_from_json(const nlohmann::ordered_json& doc);

/// Pretty-printed JSON with a trailing newline. save -> load -> save is byte-identical.
std::string serialize_archive(const ModelArchive& archive);
ModelArchive parse_archive(const std::string& text);

void save_archive(const ModelArchive& archive, const std::filesystem::path& path);
ModelArchive load_archive(const std::filesystem::path& path);

/// FNV-1a 64-bit, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace ensemblekit
