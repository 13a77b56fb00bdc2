// Command-line front end: synthetic corpus generation, single experiment
// runs, grid sweeps, and raw feature dumps.

#include <CLI11.hpp>
#include <json.hpp>

#include "vbp/audio.hpp"
#include "vbp/dataset.hpp"
#include "vbp/errors.hpp"
#include "vbp/experiment.hpp"
#include "vbp/features.hpp"
#include "vbp/synthesis.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw vbp::IoFailure("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw vbp::IoFailure("read failed for " + path.string());
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw vbp::IoFailure("cannot create " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw vbp::IoFailure("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw vbp::IoFailure("write failed for " + path.string());
}

int run_generate(const std::string& spec_path, const std::string& out_dir) {
    const vbp::SyntheticSpec spec = vbp::SyntheticSpec::from_json(read_file(spec_path));
    const vbp::DatasetManifest manifest = vbp::generate_synthetic(spec, out_dir);
    std::cout << "wrote " << manifest.rows.size() << " clips under " << out_dir << '\n';
    return 0;
}

int run_run(const std::string& manifest_path, const std::string& config_path,
            const std::string& out_path) {
    const vbp::DatasetManifest manifest = vbp::load_manifest(manifest_path);
    const vbp::ExperimentConfig config =
        config_path.empty() ? vbp::ExperimentConfig{}
                            : vbp::ExperimentConfig::from_json(read_file(config_path));
    const vbp::EvaluationReport report = vbp::run_experiment(manifest, config);
    write_file(out_path, report.to_json() + "\n");
    std::cout << report.to_json() << '\n';
    return 0;
}

int run_sweep_cmd(const std::string& manifest_path, const std::string& grid_path,
                  const std::string& out_dir, bool plots) {
    const vbp::DatasetManifest manifest = vbp::load_manifest(manifest_path);
    const vbp::SweepGrid grid =
        grid_path.empty() ? vbp::SweepGrid{} : vbp::SweepGrid::from_json(read_file(grid_path));
    const auto cells = vbp::run_sweep(manifest, grid);
    vbp::write_sweep_outputs(out_dir, cells, plots);

    std::size_t failed = 0;
    for (const auto& cell : cells) {
        if (!cell.ok) ++failed;
    }
    std::cout << "ran " << cells.size() << " cells (" << failed << " failed) into " << out_dir
              << '\n';
    return 0;
}

int run_features(const std::string& manifest_path, const std::string& out_path,
                 const vbp::PreprocessConfig& preprocess_cfg) {
    const vbp::DatasetManifest manifest = vbp::load_manifest(manifest_path);
    if (manifest.rows.empty()) throw vbp::InsufficientData("manifest has no rows");

    std::vector<std::string> ids;
    std::vector<vbp::FeatureVector> rows;
    std::size_t excluded = 0;
    for (const auto& row : manifest.rows) {
        vbp::AudioClip clip = vbp::load_wav(manifest.resolve(row));
        const vbp::AudioClip cleaned = vbp::preprocess(clip, preprocess_cfg);
        try {
            rows.push_back(vbp::extract_feature_vector(cleaned));
        } catch (const vbp::NoVoicedFrames&) {
            ++excluded;
            std::cerr << "excluding " << row.clip_path << ": no voiced frames\n";
            continue;
        }
        ids.push_back(clip.id);
    }
    if (rows.empty()) throw vbp::NoVoicedFrames("no clip produced voiced frames");

    // Feature dumps have no train/test split; impute over everything kept.
    std::vector<std::size_t> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    vbp::impute_missing_formants(rows, all);

    std::string csv = vbp::feature_csv_header() + "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv += vbp::feature_csv_row(ids[i], rows[i]) + "\n";
    }
    write_file(out_path, csv);
    std::cout << "wrote " << rows.size() << " feature rows (" << excluded << " excluded) to "
              << out_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"voice-based blood pressure classification toolkit"};
    app.require_subcommand(1);

    std::string spec_path, manifest_path, config_path, grid_path, out_path;
    bool plots = false;
    vbp::PreprocessConfig preprocess_cfg;

    auto* generate = app.add_subcommand("generate", "synthesize a labeled corpus");
    generate->add_option("--spec", spec_path, "synthesis spec JSON")->required();
    generate->add_option("--out", out_path, "output directory")->required();

    auto* run = app.add_subcommand("run", "run one experiment");
    run->add_option("--manifest", manifest_path, "dataset manifest CSV")->required();
    run->add_option("--config", config_path, "experiment config JSON (defaults when omitted)");
    run->add_option("--out", out_path, "report JSON path")->required();

    auto* sweep = app.add_subcommand("sweep", "run a config grid");
    sweep->add_option("--manifest", manifest_path, "dataset manifest CSV")->required();
    sweep->add_option("--grid", grid_path, "sweep grid JSON (defaults when omitted)");
    sweep->add_option("--out", out_path, "output directory")->required();
    sweep->add_flag("--plots", plots, "also write SVG plots");

    auto* features = app.add_subcommand("features", "dump per-clip features as CSV");
    features->add_option("--manifest", manifest_path, "dataset manifest CSV")->required();
    features->add_option("--out", out_path, "feature CSV path")->required();
    features->add_option("--filter-order", preprocess_cfg.filter_order,
                         "line enhancer taps (default 32)");
    features->add_option("--step-size", preprocess_cfg.step_size, "NLMS step (default 0.1)");
    features->add_option("--reference-delay-ms", preprocess_cfg.reference_delay_ms,
                         "enhancer reference delay (default 25)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return run_generate(spec_path, out_path);
        if (run->parsed()) return run_run(manifest_path, config_path, out_path);
        if (sweep->parsed()) return run_sweep_cmd(manifest_path, grid_path, out_path, plots);
        if (features->parsed()) return run_features(manifest_path, out_path, preprocess_cfg);
    } catch (const vbp::Error& e) {
        nlohmann::json j;
        j["error"] = {{"type", e.kind()}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json j;
        j["error"] = {{"type", "Error"}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 1;
    }
    return 0;
}
