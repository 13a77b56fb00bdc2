#pragma once

#include "vbp/audio.hpp"
#include "vbp/clustering.hpp"
#include "vbp/dataset.hpp"
#include "vbp/features.hpp"
#include "vbp/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vbp {

enum class Method {
    ffi_fusion,   // fused soft memberships of the k-means and searched models
    kmeans_only,  // batch k-means plus streaming epochs
    ffi_only,     // label-fitness centroid search
    tlo_only,     // the same search restricted to the guide move
};

const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct OptimizerParams {
    int population_size = 20;
    int max_iterations = 150;
    double objective_tolerance = 0.0;
    double a4_epsilon = 0.1;
};

struct ExperimentConfig {
    int training_percent = 90;
    int epochs = 10;  // streaming replay passes over the training rows
    int k = 3;
    std::uint64_t seed = 7;
    Method method = Method::ffi_fusion;
    int kmeans_max_iterations = 100;
    PreprocessConfig preprocess;
    FeatureConfig features;
    OptimizerParams optimizer;

    void validate() const;
    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
};

// Loads and preprocesses every clip, extracts features (clips with no voiced
// frames are excluded and counted), splits by class, fits imputation and
// standardization on the training rows, trains the method's model(s), and
// scores: label metrics (homogeneity, completeness, jaccard, accuracy) on
// the held-out rows, geometry metrics (davies_bouldin, silhouette, dunn) on
// the whole corpus's assignments.
EvaluationReport run_experiment(const DatasetManifest& manifest, const ExperimentConfig& config);

struct SweepGrid {
    std::vector<int> training_percents{70, 80, 90};
    std::vector<int> epochs{10, 20};
    std::vector<Method> methods{Method::kmeans_only, Method::ffi_fusion};
    ExperimentConfig base;

    static SweepGrid from_json(const std::string& text);
};

struct SweepCell {
    std::string cell_id;  // "<method>_tp<percent>_ep<epochs>"
    ExperimentConfig config;
    bool ok = false;
    EvaluationReport report;
    std::string error;  // "<kind>: <message>" when !ok
};

// Runs every grid cell (methods x training_percents x epochs, in that
// order). A failing cell is recorded, not fatal.
std::vector<SweepCell> run_sweep(const DatasetManifest& manifest, const SweepGrid& grid);

// sweep.csv (one row per successful cell), failures.csv when any cell
// failed, and optionally one SVG line plot per score column.
void write_sweep_outputs(const std::filesystem::path& out_dir, std::span<const SweepCell> cells,
                         bool plots);

} // namespace vbp
