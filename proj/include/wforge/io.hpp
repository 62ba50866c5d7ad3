#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wforge/statesets.hpp"
#include "wforge/witness.hpp"

namespace wforge {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Writes to a sibling temp file and renames it over `path`.
void atomic_write(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

// 16 hex digits of FNV-1a 64.
std::string digest_hex(const std::string& bytes);
std::string file_digest(const fs::path& path);

json witness_to_json(const Witness& w);
Witness witness_from_json(const json& j);
void write_witness(const fs::path& path, const Witness& w);
Witness read_witness(const fs::path& path);

// Sample files: '#' comment lines, a header row "label,origin,<features>", one
// row per sample. Separable and entangled samples go to separate files.
std::string samples_to_csv(const TrainingSet& data, int label);
void read_samples_csv(const fs::path& path, TrainingSet& into);

}  // namespace wforge
