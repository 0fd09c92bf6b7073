#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gauge_dehaze/scatter.hpp"

namespace gdh {

struct CorruptedRecord {
    std::string path;      // relative to the dataset root
    int level_index = 0;   // 0-based position in the ladder
    CorruptionSpec params;
    std::string split;     // inherited from the clear image; "" before splitting
};

struct DatasetEntry {
    std::string clear_id;
    std::string clear_path;
    std::string depth_path;
    std::vector<CorruptedRecord> corrupted;  // exactly one per ladder level
    std::string split;  // "" | train | val | test
};

struct GeneratorProvenance {
    uint64_t seed = 0;
    int width = 256;
    int height = 256;
    std::vector<double> beta_ladder;
    AtmosphericLight airlight;
    // smoke field parameters (ignored for haze)
    int octaves = 4;
    double lacunarity = 2.0;
    double gain = 0.5;
    double density_scale = 1.0;
    uint64_t split_seed = 0;
    std::array<double, 3> split_ratios = {0.0, 0.0, 0.0};
};

struct DatasetManifest {
    int schema_version = 1;
    std::string kind;  // "haze" | "smoke"
    GeneratorProvenance generator;
    std::vector<DatasetEntry> entries;

    bool is_split() const;
};

struct GenerateOptions {
    int width = 256;
    int height = 256;
    int jobs = 1;
    std::vector<double> beta_ladder;  // empty -> default ladder
    // smoke noise parameters
    int octaves = 4;
    double lacunarity = 2.0;
    double gain = 0.5;
    double density_scale = 1.0;
};

// Renders n_scenes clear/depth pairs and corrupts each at every ladder level;
// writes clear/, depth/, <kind>/ under out_root and returns the manifest.
// Fully deterministic per seed.
DatasetManifest generate_dataset(int n_scenes, const std::string& kind,
                                 const std::filesystem::path& out_root, uint64_t seed,
                                 const GenerateOptions& options = {});

// Seeded permutation of clear ids partitioned by floor allocation with
// remainders to train; corrupted records inherit their clear image's split.
DatasetManifest split_manifest(const DatasetManifest& manifest,
                               const std::array<double, 3>& ratios, uint64_t seed);

// File existence, 1:ladder pairing, split partition/inheritance and level
// monotonicity. Violations are data, not errors; empty means valid.
std::vector<std::string> validate_manifest(const DatasetManifest& manifest,
                                           const std::filesystem::path& root);

std::string manifest_to_json_string(const DatasetManifest& manifest);
DatasetManifest manifest_from_json_string(const std::string& text);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace gdh
