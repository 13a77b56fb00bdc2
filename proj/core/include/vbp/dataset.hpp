#pragma once

#include "vbp/audio.hpp"
#include "vbp/clustering.hpp"
#include "vbp/rng.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vbp {

struct ManifestRow {
    std::string clip_path;  // relative to the manifest's directory
    double systolic = 0.0;
    double diastolic = 0.0;
    int age = 0;
    char sex = 'M';  // 'M' or 'F'
};

struct DatasetManifest {
    std::filesystem::path base_dir;
    std::vector<ManifestRow> rows;

    std::filesystem::path resolve(const ManifestRow& row) const;
};

// Strict CSV with the exact header
// clip_path,systolic,diastolic,age,sex
// Every label must satisfy systolic > diastolic > 0.
DatasetManifest load_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows);

BpLabel label_of(const ManifestRow& row);

struct Split {
    std::vector<std::size_t> train;  // ascending indices
    std::vector<std::size_t> test;   // ascending indices
};

// Per-class shuffle-and-cut. Each class contributes round(count * percent /
// 100) training rows, clamped so no class loses all of them; the overall
// split must leave at least one test row.
Split stratified_split(std::span<const BpClass> classes, int training_percent, Rng& rng);

} // namespace vbp
