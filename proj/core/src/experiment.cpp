#include "vbp/experiment.hpp"

#include "vbp/errors.hpp"
#include "vbp/optimizer.hpp"
#include "text_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <utility>

namespace vbp {

namespace {

// Child-stream salts; distinct stages must never share a draw sequence.
constexpr std::uint64_t kSplitSalt = 11;
constexpr std::uint64_t kKmeansSalt = 21;
constexpr std::uint64_t kSearchSalt = 31;

PreprocessConfig preprocess_from_json(const nlohmann::json& j, PreprocessConfig defaults) {
    defaults.filter_order = j.value("filter_order", defaults.filter_order);
    defaults.step_size = j.value("step_size", defaults.step_size);
    defaults.reference_delay_ms = j.value("reference_delay_ms", defaults.reference_delay_ms);
    return defaults;
}

FeatureConfig features_from_json(const nlohmann::json& j, FeatureConfig defaults) {
    defaults.frame_ms = j.value("frame_ms", defaults.frame_ms);
    defaults.hop_ms = j.value("hop_ms", defaults.hop_ms);
    defaults.pitch_min_hz = j.value("pitch_min_hz", defaults.pitch_min_hz);
    defaults.pitch_max_hz = j.value("pitch_max_hz", defaults.pitch_max_hz);
    defaults.voicing_threshold = j.value("voicing_threshold", defaults.voicing_threshold);
    defaults.preemphasis = j.value("preemphasis", defaults.preemphasis);
    defaults.formant_max_bandwidth_hz =
        j.value("formant_max_bandwidth_hz", defaults.formant_max_bandwidth_hz);
    defaults.mel_filters = j.value("mel_filters", defaults.mel_filters);
    defaults.mfcc_coeffs = j.value("mfcc_coeffs", defaults.mfcc_coeffs);
    return defaults;
}

OptimizerParams optimizer_from_json(const nlohmann::json& j, OptimizerParams defaults) {
    defaults.population_size = j.value("population_size", defaults.population_size);
    defaults.max_iterations = j.value("max_iterations", defaults.max_iterations);
    defaults.objective_tolerance = j.value("objective_tolerance", defaults.objective_tolerance);
    defaults.a4_epsilon = j.value("a4_epsilon", defaults.a4_epsilon);
    return defaults;
}

ExperimentConfig config_from_json_object(const nlohmann::json& j) {
    ExperimentConfig config;
    config.training_percent = j.value("training_percent", config.training_percent);
    config.epochs = j.value("epochs", config.epochs);
    config.k = j.value("k", config.k);
    config.seed = j.value("seed", config.seed);
    if (j.contains("method")) {
        config.method = method_from_string(j.at("method").get<std::string>());
    }
    config.kmeans_max_iterations = j.value("kmeans_max_iterations", config.kmeans_max_iterations);
    if (j.contains("preprocess")) {
        config.preprocess = preprocess_from_json(j.at("preprocess"), config.preprocess);
    }
    if (j.contains("features")) {
        config.features = features_from_json(j.at("features"), config.features);
    }
    if (j.contains("optimizer")) {
        config.optimizer = optimizer_from_json(j.at("optimizer"), config.optimizer);
    }
    config.validate();
    return config;
}

nlohmann::json config_to_json_object(const ExperimentConfig& config) {
    nlohmann::json j;
    j["training_percent"] = config.training_percent;
    j["epochs"] = config.epochs;
    j["k"] = config.k;
    j["seed"] = config.seed;
    j["method"] = to_string(config.method);
    j["kmeans_max_iterations"] = config.kmeans_max_iterations;
    j["preprocess"] = {
        {"filter_order", config.preprocess.filter_order},
        {"step_size", config.preprocess.step_size},
        {"reference_delay_ms", config.preprocess.reference_delay_ms},
    };
    j["features"] = {
        {"frame_ms", config.features.frame_ms},
        {"hop_ms", config.features.hop_ms},
        {"pitch_min_hz", config.features.pitch_min_hz},
        {"pitch_max_hz", config.features.pitch_max_hz},
        {"voicing_threshold", config.features.voicing_threshold},
        {"preemphasis", config.features.preemphasis},
        {"formant_max_bandwidth_hz", config.features.formant_max_bandwidth_hz},
        {"mel_filters", config.features.mel_filters},
        {"mfcc_coeffs", config.features.mfcc_coeffs},
    };
    j["optimizer"] = {
        {"population_size", config.optimizer.population_size},
        {"max_iterations", config.optimizer.max_iterations},
        {"objective_tolerance", config.optimizer.objective_tolerance},
        {"a4_epsilon", config.optimizer.a4_epsilon},
    };
    return j;
}

struct PreparedData {
    std::vector<std::vector<double>> rows;  // standardized features, kept clips
    std::vector<BpClass> classes;
    Split split;
    int excluded = 0;
};

PreparedData prepare(const DatasetManifest& manifest, const ExperimentConfig& config) {
    if (manifest.rows.size() < static_cast<std::size_t>(config.k)) {
        throw InsufficientData("manifest has fewer clips than clusters");
    }

    std::vector<FeatureVector> features;
    std::vector<BpClass> classes;
    int excluded = 0;
    for (const auto& row : manifest.rows) {
        AudioClip clip = load_wav(manifest.resolve(row));
        clip.label = label_of(row);
        const AudioClip cleaned = preprocess(clip, config.preprocess);
        try {
            features.push_back(extract_feature_vector(cleaned, config.features));
        } catch (const NoVoicedFrames&) {
            ++excluded;
            continue;
        }
        classes.push_back(bp_class_from_label(*clip.label));
    }
    if (features.size() < static_cast<std::size_t>(config.k)) {
        throw InsufficientData("too few voiced clips to cluster");
    }

    Rng split_rng(Rng::derive(config.seed, kSplitSalt));
    Split split = stratified_split(classes, config.training_percent, split_rng);
    if (split.train.size() < static_cast<std::size_t>(config.k)) {
        throw InsufficientData("training split has fewer rows than clusters");
    }

    // Imputation and scaling are fit on the training rows only, then applied
    // everywhere, so the held-out rows never leak into the fit.
    impute_missing_formants(features, split.train);
    const Standardizer scaler = Standardizer::fit(features, split.train);

    PreparedData data;
    data.rows.reserve(features.size());
    for (const auto& fv : features) {
        const auto vals = scaler.transform(fv).values();
        data.rows.emplace_back(vals.begin(), vals.end());
    }
    data.classes = std::move(classes);
    data.split = std::move(split);
    data.excluded = excluded;
    return data;
}

std::vector<std::vector<double>> gather(const std::vector<std::vector<double>>& rows,
                                        std::span<const std::size_t> indices) {
    std::vector<std::vector<double>> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(rows[i]);
    return out;
}

std::vector<BpClass> gather_classes(std::span<const BpClass> classes,
                                    std::span<const std::size_t> indices) {
    std::vector<BpClass> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(classes[i]);
    return out;
}

ClusterModel train_kmeans(const std::vector<std::vector<double>>& train_rows,
                          std::span<const BpClass> train_classes,
                          const ExperimentConfig& config) {
    KmeansResult batch = kmeans_batch(train_rows, config.k, config.kmeans_max_iterations,
                                      Rng::derive(config.seed, kKmeansSalt));
    ClusterModel model = std::move(batch.model);

    // Streaming refinement: every epoch replays the training rows through the
    // one-point running-mean update, in manifest order.
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (const auto& row : train_rows) incremental_update(model, row);
    }

    std::vector<std::size_t> assignments(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        assignments[i] = assign(model, train_rows[i]).cluster;
    }
    map_clusters_to_classes(model, assignments, train_classes);
    return model;
}

ClusterModel train_search(const std::vector<std::vector<double>>& train_rows,
                          std::span<const BpClass> train_classes,
                          const ExperimentConfig& config) {
    FfiConfig fcfg;
    fcfg.population_size = config.optimizer.population_size;
    fcfg.max_iterations = config.optimizer.max_iterations;
    fcfg.objective_tolerance = config.optimizer.objective_tolerance;
    fcfg.a4_epsilon = config.optimizer.a4_epsilon;
    fcfg.seed = Rng::derive(config.seed, kSearchSalt);
    fcfg.scheme =
        config.method == Method::tlo_only ? UpdateScheme::instructor_only : UpdateScheme::full;
    return ffi_cluster(train_rows, train_classes, config.k, fcfg).model;
}

MembershipMatrix class_memberships(const ClusterModel& model,
                                   const std::vector<std::vector<double>>& rows) {
    MembershipMatrix out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(class_membership(model, row));
    return out;
}

} // namespace

const char* to_string(Method method) {
    switch (method) {
        case Method::ffi_fusion: return "ffi_fusion";
        case Method::kmeans_only: return "kmeans_only";
        case Method::ffi_only: return "ffi_only";
        case Method::tlo_only: return "tlo_only";
    }
    throw InvalidConfig("unknown method value");
}

Method method_from_string(const std::string& name) {
    if (name == "ffi_fusion") return Method::ffi_fusion;
    if (name == "kmeans_only") return Method::kmeans_only;
    if (name == "ffi_only") return Method::ffi_only;
    if (name == "tlo_only") return Method::tlo_only;
    throw InvalidConfig("unknown method name: " + name);
}

void ExperimentConfig::validate() const {
    if (training_percent < 1 || training_percent > 99) {
        throw InvalidConfig("training_percent must be within [1, 99]");
    }
    if (epochs < 0) throw InvalidConfig("epochs must be >= 0");
    if (k < 1) throw InvalidConfig("k must be >= 1");
    if (kmeans_max_iterations < 1) throw InvalidConfig("kmeans_max_iterations must be >= 1");
    if (optimizer.population_size < 4) throw InvalidConfig("population_size must be >= 4");
    if (optimizer.max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
    if (!(optimizer.a4_epsilon > 0.0)) throw InvalidConfig("a4_epsilon must be positive");
    if (optimizer.objective_tolerance < 0.0) {
        throw InvalidConfig("objective_tolerance must be >= 0");
    }
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("experiment config JSON: ") + e.what());
    }
    try {
        return config_from_json_object(j);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("experiment config JSON: ") + e.what());
    }
}

std::string ExperimentConfig::to_json() const {
    return config_to_json_object(*this).dump(2);
}

EvaluationReport run_experiment(const DatasetManifest& manifest, const ExperimentConfig& config) {
    config.validate();
    const PreparedData data = prepare(manifest, config);

    const auto train_rows = gather(data.rows, data.split.train);
    const auto train_classes = gather_classes(data.classes, data.split.train);
    const auto test_rows = gather(data.rows, data.split.test);
    const auto test_classes = gather_classes(data.classes, data.split.test);

    ClusterModel kmeans_model;
    ClusterModel search_model;
    const bool wants_kmeans =
        config.method == Method::kmeans_only || config.method == Method::ffi_fusion;
    const bool wants_search = config.method != Method::kmeans_only;
    if (wants_kmeans) kmeans_model = train_kmeans(train_rows, train_classes, config);
    if (wants_search) search_model = train_search(train_rows, train_classes, config);

    // Held-out predictions plus the cluster labeling used by the pair/entropy
    // metrics. For single-model methods the cluster id is the label; fusion
    // predicts straight in class space.
    std::vector<BpClass> predicted;
    std::vector<int> test_labels;
    std::vector<std::size_t> corpus_assignments(data.rows.size());
    if (config.method == Method::ffi_fusion) {
        const FuseResult fused_test = fuse(class_memberships(kmeans_model, test_rows),
                                           class_memberships(search_model, test_rows));
        for (int c : fused_test.classes) {
            predicted.push_back(static_cast<BpClass>(c));
            test_labels.push_back(c);
        }
        const FuseResult fused_all = fuse(class_memberships(kmeans_model, data.rows),
                                          class_memberships(search_model, data.rows));
        for (std::size_t i = 0; i < data.rows.size(); ++i) {
            corpus_assignments[i] = static_cast<std::size_t>(fused_all.classes[i]);
        }
    } else {
        const ClusterModel& model =
            config.method == Method::kmeans_only ? kmeans_model : search_model;
        for (const auto& row : test_rows) {
            const std::size_t cluster = assign(model, row).cluster;
            predicted.push_back(model.cluster_classes[cluster]);
            test_labels.push_back(static_cast<int>(cluster));
        }
        for (std::size_t i = 0; i < data.rows.size(); ++i) {
            corpus_assignments[i] = assign(model, data.rows[i]).cluster;
        }
    }

    std::vector<int> truth_labels;
    truth_labels.reserve(test_classes.size());
    for (BpClass c : test_classes) truth_labels.push_back(static_cast<int>(c));

    // Geometry metrics score the whole corpus's partition; a handful of
    // held-out points cannot carry cluster diameters on their own.
    std::size_t max_id = 0;
    for (std::size_t a : corpus_assignments) max_id = std::max(max_id, a);
    std::vector<std::vector<double>> group_means(max_id + 1,
                                                 std::vector<double>(data.rows[0].size(), 0.0));
    std::vector<std::size_t> group_sizes(max_id + 1, 0);
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        const std::size_t g = corpus_assignments[i];
        for (std::size_t d = 0; d < data.rows[i].size(); ++d) {
            group_means[g][d] += data.rows[i][d];
        }
        group_sizes[g] += 1;
    }
    for (std::size_t g = 0; g <= max_id; ++g) {
        if (group_sizes[g] == 0) continue;
        for (double& v : group_means[g]) v /= static_cast<double>(group_sizes[g]);
    }

    const HomogeneityCompleteness hc = homogeneity_completeness(truth_labels, test_labels);

    EvaluationReport report;
    report.davies_bouldin = davies_bouldin(data.rows, corpus_assignments, group_means);
    report.homogeneity = hc.homogeneity;
    report.completeness = hc.completeness;
    report.jaccard = jaccard_similarity(truth_labels, test_labels);
    report.silhouette = silhouette(data.rows, corpus_assignments);
    report.dunn = dunn_index(data.rows, corpus_assignments);
    report.accuracy = accuracy_fitness(predicted, test_classes);
    report.seed = config.seed;
    report.training_percent = config.training_percent;
    report.epochs = config.epochs;
    report.method = to_string(config.method);
    report.excluded_clips = data.excluded;
    return report;
}

SweepGrid SweepGrid::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("sweep grid JSON: ") + e.what());
    }
    SweepGrid grid;
    try {
        if (j.contains("training_percents")) {
            grid.training_percents = j.at("training_percents").get<std::vector<int>>();
        }
        if (j.contains("epochs")) grid.epochs = j.at("epochs").get<std::vector<int>>();
        if (j.contains("methods")) {
            grid.methods.clear();
            for (const auto& name : j.at("methods")) {
                grid.methods.push_back(method_from_string(name.get<std::string>()));
            }
        }
        if (j.contains("base")) grid.base = config_from_json_object(j.at("base"));
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("sweep grid JSON: ") + e.what());
    }
    if (grid.training_percents.empty() || grid.epochs.empty() || grid.methods.empty()) {
        throw InvalidConfig("sweep grid axes must be non-empty");
    }
    return grid;
}

std::vector<SweepCell> run_sweep(const DatasetManifest& manifest, const SweepGrid& grid) {
    if (grid.training_percents.empty() || grid.epochs.empty() || grid.methods.empty()) {
        throw InvalidConfig("sweep grid axes must be non-empty");
    }

    std::vector<SweepCell> cells;
    for (Method method : grid.methods) {
        for (int percent : grid.training_percents) {
            for (int epochs : grid.epochs) {
                SweepCell cell;
                cell.config = grid.base;
                cell.config.method = method;
                cell.config.training_percent = percent;
                cell.config.epochs = epochs;
                cell.cell_id = std::string(to_string(method)) + "_tp" + std::to_string(percent) +
                               "_ep" + std::to_string(epochs);
                try {
                    cell.report = run_experiment(manifest, cell.config);
                    cell.ok = true;
                } catch (const Error& e) {
                    cell.error = e.kind() + ": " + e.what();
                } catch (const std::exception& e) {
                    cell.error = std::string("Error: ") + e.what();
                }
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

namespace {

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // sorted by x
};

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Minimal line plot: axes, one polyline per series, legend down the right.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& y_label, const std::vector<PlotSeries>& series) {
    constexpr double kW = 640.0, kH = 420.0;
    constexpr double kL = 70.0, kR = 170.0, kT = 50.0, kB = 50.0;

    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_lo = x_hi = x;
                y_lo = y_hi = y;
                first = false;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                y_lo = std::min(y_lo, y);
                y_hi = std::max(y_hi, y);
            }
        }
    }
    if (x_hi - x_lo < 1e-12) {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    if (y_hi - y_lo < 1e-12) {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    const auto sx = [&](double x) { return kL + (x - x_lo) / (x_hi - x_lo) * (kW - kL - kR); };
    const auto sy = [&](double y) { return kH - kB - (y - y_lo) / (y_hi - y_lo) * (kH - kT - kB); };

    static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";

    out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
        << kH - kB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (kL + kW - kR) / 2
        << "\" y=\"" << kH - 12
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
           "epochs</text>\n";
    out << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 18 "
        << (kT + kH - kB) / 2 << ")\">" << y_label << "</text>\n";

    for (double frac : {0.0, 0.5, 1.0}) {
        const double xv = x_lo + frac * (x_hi - x_lo);
        const double yv = y_lo + frac * (y_hi - y_lo);
        out << "<text x=\"" << svg_num(sx(xv)) << "\" y=\"" << kH - kB + 18
            << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">"
            << svg_num(xv) << "</text>\n";
        out << "<text x=\"" << kL - 8 << "\" y=\"" << svg_num(sy(yv) + 3)
            << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << svg_num(yv)
            << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[s].points) {
            out << svg_num(sx(x)) << ',' << svg_num(sy(y)) << ' ';
        }
        out << "\"/>\n";
        for (const auto& [x, y] : series[s].points) {
            out << "<circle cx=\"" << svg_num(sx(x)) << "\" cy=\"" << svg_num(sy(y))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kT + 16.0 * static_cast<double>(s);
        out << "<line x1=\"" << kW - kR + 12 << "\" y1=\"" << ly << "\" x2=\"" << kW - kR + 32
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << kW - kR + 38 << "\" y=\"" << ly + 4
            << "\" font-size=\"10\" font-family=\"sans-serif\">" << series[s].name << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoFailure("write failed for " + path.string());
}

} // namespace

void write_sweep_outputs(const std::filesystem::path& out_dir, std::span<const SweepCell> cells,
                         bool plots) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoFailure("cannot create " + out_dir.string());

    {
        std::ofstream out(out_dir / "sweep.csv", std::ios::trunc);
        if (!out) throw IoFailure("cannot open " + (out_dir / "sweep.csv").string());
        out << "cell_id," << EvaluationReport::csv_header() << '\n';
        for (const auto& cell : cells) {
            if (!cell.ok) continue;
            out << cell.cell_id << ',' << cell.report.to_csv_row() << '\n';
        }
        if (!out) throw IoFailure("write failed for " + (out_dir / "sweep.csv").string());
    }

    const bool any_failed =
        std::any_of(cells.begin(), cells.end(), [](const SweepCell& c) { return !c.ok; });
    if (any_failed) {
        std::ofstream out(out_dir / "failures.csv", std::ios::trunc);
        if (!out) throw IoFailure("cannot open " + (out_dir / "failures.csv").string());
        out << "cell_id,error\n";
        for (const auto& cell : cells) {
            if (cell.ok) continue;
            std::string sanitized = cell.error;
            std::replace(sanitized.begin(), sanitized.end(), ',', ';');
            std::replace(sanitized.begin(), sanitized.end(), '\n', ' ');
            out << cell.cell_id << ',' << sanitized << '\n';
        }
        if (!out) throw IoFailure("write failed for " + (out_dir / "failures.csv").string());
    }

    if (!plots) return;

    struct Column {
        const char* name;
        double EvaluationReport::*field;
    };
    static constexpr Column kColumns[] = {
        {"davies_bouldin", &EvaluationReport::davies_bouldin},
        {"homogeneity", &EvaluationReport::homogeneity},
        {"completeness", &EvaluationReport::completeness},
        {"jaccard", &EvaluationReport::jaccard},
        {"silhouette", &EvaluationReport::silhouette},
        {"dunn", &EvaluationReport::dunn},
        {"accuracy", &EvaluationReport::accuracy},
    };
    for (const auto& column : kColumns) {
        // One series per (method, training percent) pair, x = epochs.
        std::map<std::string, PlotSeries> by_series;
        for (const auto& cell : cells) {
            if (!cell.ok) continue;
            const std::string key = std::string(cell.report.method) + " tp" +
                                    std::to_string(cell.report.training_percent);
            auto& series = by_series[key];
            series.name = key;
            series.points.emplace_back(static_cast<double>(cell.report.epochs),
                                       cell.report.*column.field);
        }
        std::vector<PlotSeries> series;
        series.reserve(by_series.size());
        for (auto& [key, s] : by_series) {
            std::sort(s.points.begin(), s.points.end());
            series.push_back(std::move(s));
        }
        if (series.empty()) continue;
        write_line_plot(out_dir / (std::string("plot_") + column.name + ".svg"),
                        std::string(column.name) + " by epochs", column.name, series);
    }
}

} // namespace vbp
