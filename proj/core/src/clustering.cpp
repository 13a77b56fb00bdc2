#include "vbp/clustering.hpp"

#include "vbp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

namespace vbp {

namespace {

constexpr double kSoftDistanceFloor = 1e-9;

void check_model(const ClusterModel& model) {
    if (model.k < 1 || model.dim < 1) throw InvalidConfig("cluster model needs k >= 1, dim >= 1");
    const auto k = static_cast<std::size_t>(model.k);
    if (model.centroids.size() != k || model.sums.size() != k || model.counts.size() != k) {
        throw ShapeMismatch("cluster model arrays must all have k entries");
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (model.centroids[j].size() != static_cast<std::size_t>(model.dim) ||
            model.sums[j].size() != static_cast<std::size_t>(model.dim)) {
            throw ShapeMismatch("cluster model rows must all have dim entries");
        }
    }
}

void check_point(const ClusterModel& model, std::span<const double> point) {
    if (point.size() != static_cast<std::size_t>(model.dim)) {
        throw ShapeMismatch("point dimension does not match the model");
    }
}

void check_data(const std::vector<std::vector<double>>& data) {
    if (data.empty()) throw InsufficientData("no data points");
    const std::size_t dim = data.front().size();
    if (dim == 0) throw ShapeMismatch("points must have at least one dimension");
    for (const auto& row : data) {
        if (row.size() != dim) throw ShapeMismatch("ragged data rows");
    }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

std::size_t nearest_centroid(const std::vector<std::vector<double>>& centroids,
                             std::span<const double> point, double* distance2 = nullptr) {
    std::size_t best = 0;
    double best_d2 = squared_distance(centroids[0], point);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
        const double d2 = squared_distance(centroids[j], point);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    if (distance2 != nullptr) *distance2 = best_d2;
    return best;
}

// Majority vote per cluster; empty clusters inherit the overall majority.
// All ties resolve to the lower class index.
std::vector<BpClass> majority_classes(std::span<const std::size_t> assignments,
                                      std::span<const BpClass> truth, int k) {
    std::vector<std::array<std::size_t, kBpClassCount>> votes(
        static_cast<std::size_t>(k), std::array<std::size_t, kBpClassCount>{});
    std::array<std::size_t, kBpClassCount> overall{};
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const auto c = static_cast<std::size_t>(truth[i]);
        votes[assignments[i]][c] += 1;
        overall[c] += 1;
    }
    const auto argmax = [](const std::array<std::size_t, kBpClassCount>& tally) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < kBpClassCount; ++c) {
            if (tally[c] > tally[best]) best = c;
        }
        return static_cast<BpClass>(best);
    };
    const BpClass fallback = argmax(overall);

    std::vector<BpClass> classes(static_cast<std::size_t>(k), fallback);
    for (std::size_t j = 0; j < classes.size(); ++j) {
        std::size_t total = 0;
        for (std::size_t c = 0; c < kBpClassCount; ++c) total += votes[j][c];
        if (total > 0) classes[j] = argmax(votes[j]);
    }
    return classes;
}

} // namespace

const char* to_string(BpClass c) {
    switch (c) {
        case BpClass::low: return "low";
        case BpClass::normal: return "normal";
        case BpClass::high: return "high";
    }
    throw InvalidConfig("unknown class value");
}

BpClass bp_class_from_string(const std::string& name) {
    if (name == "low") return BpClass::low;
    if (name == "normal") return BpClass::normal;
    if (name == "high") return BpClass::high;
    throw InvalidConfig("unknown class name: " + name);
}

BpClass bp_class_from_label(const BpLabel& label) {
    if (!is_valid_label(label)) {
        throw InvalidConfig("label needs systolic > diastolic > 0");
    }
    if (label.systolic_mmhg >= 140.0 || label.diastolic_mmhg >= 90.0) return BpClass::high;
    if (label.systolic_mmhg < 90.0 || label.diastolic_mmhg < 60.0) return BpClass::low;
    return BpClass::normal;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw LengthMismatch("euclidean: dimensions differ");
    return std::sqrt(squared_distance(a, b));
}

Assignment assign(const ClusterModel& model, std::span<const double> point) {
    check_model(model);
    check_point(model, point);
    double d2 = 0.0;
    const std::size_t j = nearest_centroid(model.centroids, point, &d2);
    return {j, std::sqrt(d2)};
}

std::size_t incremental_update(ClusterModel& model, std::span<const double> point) {
    const std::size_t j = assign(model, point).cluster;
    incremental_update_assigned(model, point, j);
    return j;
}

void incremental_update_assigned(ClusterModel& model, std::span<const double> point,
                                 std::size_t cluster) {
    check_model(model);
    check_point(model, point);
    if (cluster >= static_cast<std::size_t>(model.k)) {
        throw InvalidConfig("cluster index out of range");
    }
    auto& sum = model.sums[cluster];
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += point[d];
    model.counts[cluster] += 1;
    const double inv = 1.0 / static_cast<double>(model.counts[cluster]);
    for (std::size_t d = 0; d < sum.size(); ++d) model.centroids[cluster][d] = sum[d] * inv;
}

std::vector<double> soft_membership(const ClusterModel& model, std::span<const double> point) {
    check_model(model);
    check_point(model, point);
    std::vector<double> weights(static_cast<std::size_t>(model.k));
    double total = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const double d2 = squared_distance(model.centroids[j], point);
        weights[j] = 1.0 / (d2 + kSoftDistanceFloor);
        total += weights[j];
    }
    for (double& w : weights) w /= total;
    return weights;
}

std::vector<double> class_membership(const ClusterModel& model, std::span<const double> point) {
    if (model.cluster_classes.size() != static_cast<std::size_t>(model.k)) {
        throw InvalidConfig("model has no class mapping");
    }
    const std::vector<double> soft = soft_membership(model, point);
    std::vector<double> folded(kBpClassCount, 0.0);
    for (std::size_t j = 0; j < soft.size(); ++j) {
        folded[static_cast<std::size_t>(model.cluster_classes[j])] += soft[j];
    }
    return folded;
}

KmeansResult kmeans_batch(const std::vector<std::vector<double>>& data, int k,
                          int max_iterations, std::uint64_t seed) {
    if (k < 1) throw InvalidConfig("k must be >= 1");
    if (max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
    check_data(data);
    const std::size_t n = data.size();
    if (n < static_cast<std::size_t>(k)) {
        throw InsufficientData("fewer points than clusters");
    }
    const std::size_t dim = data.front().size();

    Rng rng(seed);

    // Squared-distance seeding: each next centroid is drawn with probability
    // proportional to the distance from the ones already chosen.
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(data[rng.index(n)]);
    std::vector<double> dist2(n);
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = squared_distance(centroids[0], data[i]);
            for (std::size_t j = 1; j < centroids.size(); ++j) {
                best = std::min(best, squared_distance(centroids[j], data[i]));
            }
            dist2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double threshold = rng.uniform01() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc >= threshold) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.index(n);  // every point already coincides with a centroid
        }
        centroids.push_back(data[pick]);
    }

    std::vector<std::size_t> assignments(n, 0);
    std::vector<std::size_t> previous;
    std::vector<double> point_d2(n, 0.0);
    std::vector<double> losses;
    for (int iter = 0; iter < max_iterations; ++iter) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            assignments[i] = nearest_centroid(centroids, data[i], &point_d2[i]);
            loss += point_d2[i];
        }
        losses.push_back(loss);
        if (assignments == previous) break;
        previous = assignments;

        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) sums[assignments[i]][d] += data[i][d];
            counts[assignments[i]] += 1;
        }
        std::vector<double> repair_d2 = point_d2;
        for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
            if (counts[j] > 0) {
                for (std::size_t d = 0; d < dim; ++d) {
                    centroids[j][d] = sums[j][d] / static_cast<double>(counts[j]);
                }
            } else {
                // Reseed to the point currently farthest from its centroid;
                // each empty cluster takes a different point.
                std::size_t far = 0;
                for (std::size_t i = 1; i < n; ++i) {
                    if (repair_d2[i] > repair_d2[far]) far = i;
                }
                centroids[j] = data[far];
                repair_d2[far] = -1.0;
            }
        }
    }

    KmeansResult result;
    result.model.k = k;
    result.model.dim = static_cast<int>(dim);
    result.model.sums.assign(static_cast<std::size_t>(k), std::vector<double>(dim, 0.0));
    result.model.counts.assign(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) result.model.sums[assignments[i]][d] += data[i][d];
        result.model.counts[assignments[i]] += 1;
    }
    result.model.centroids = centroids;
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
        if (result.model.counts[j] > 0) {
            for (std::size_t d = 0; d < dim; ++d) {
                result.model.centroids[j][d] =
                    result.model.sums[j][d] / static_cast<double>(result.model.counts[j]);
            }
        }
    }
    result.assignments = std::move(assignments);
    result.loss_per_iteration = std::move(losses);
    return result;
}

double accuracy_fitness(std::span<const BpClass> predicted, std::span<const BpClass> truth) {
    if (predicted.size() != truth.size()) {
        throw LengthMismatch("accuracy_fitness: sequence lengths differ");
    }
    if (truth.empty()) throw InsufficientData("accuracy_fitness needs at least one sample");

    std::array<bool, kBpClassCount> present{};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        present[static_cast<std::size_t>(truth[i])] = true;
        present[static_cast<std::size_t>(predicted[i])] = true;
    }

    const double n = static_cast<double>(truth.size());
    double acc = 0.0;
    int classes = 0;
    for (std::size_t c = 0; c < kBpClassCount; ++c) {
        if (!present[c]) continue;
        ++classes;
        std::size_t correct = 0;  // tp + tn of the one-vs-rest problem
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool in_truth = static_cast<std::size_t>(truth[i]) == c;
            const bool in_predicted = static_cast<std::size_t>(predicted[i]) == c;
            if (in_truth == in_predicted) ++correct;
        }
        acc += static_cast<double>(correct) / n;
    }
    return acc / classes;
}

void map_clusters_to_classes(ClusterModel& model, std::span<const std::size_t> assignments,
                             std::span<const BpClass> truth) {
    check_model(model);
    if (assignments.size() != truth.size()) {
        throw LengthMismatch("map_clusters_to_classes: sequence lengths differ");
    }
    if (assignments.empty()) throw InsufficientData("map_clusters_to_classes needs samples");
    for (std::size_t a : assignments) {
        if (a >= static_cast<std::size_t>(model.k)) {
            throw InvalidConfig("assignment index out of range");
        }
    }
    model.cluster_classes = majority_classes(assignments, truth, model.k);
}

FfiClusterResult ffi_cluster(const std::vector<std::vector<double>>& data,
                             std::span<const BpClass> truth, int k, const FfiConfig& base) {
    if (k < 1) throw InvalidConfig("k must be >= 1");
    check_data(data);
    if (truth.size() != data.size()) throw LengthMismatch("ffi_cluster: labels do not match data");
    const std::size_t n = data.size();
    if (n < static_cast<std::size_t>(k)) throw InsufficientData("fewer points than clusters");
    const std::size_t dim = data.front().size();

    // Search box: the data's bounding box per feature, repeated once per
    // centroid. Flat features are widened so the box stays a box.
    Bounds feature_box(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        double lo = data[0][f];
        double hi = data[0][f];
        for (const auto& row : data) {
            lo = std::min(lo, row[f]);
            hi = std::max(hi, row[f]);
        }
        if (hi - lo < 1e-9) {
            lo -= 0.5;
            hi += 0.5;
        }
        feature_box[f] = {lo, hi};
    }

    FfiConfig cfg = base;
    cfg.dimension = static_cast<int>(static_cast<std::size_t>(k) * dim);
    cfg.bounds.clear();
    cfg.bounds.reserve(static_cast<std::size_t>(cfg.dimension));
    for (int j = 0; j < k; ++j) {
        cfg.bounds.insert(cfg.bounds.end(), feature_box.begin(), feature_box.end());
    }

    const auto decode_assign = [&](std::span<const double> flat, std::vector<std::size_t>& out) {
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
                double d2 = 0.0;
                const double* c = flat.data() + j * dim;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = data[i][d] - c[d];
                    d2 += diff * diff;
                }
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = j;
                }
            }
            out[i] = best;
        }
    };

    const FunctionObjective objective([&](std::span<const double> flat) {
        std::vector<std::size_t> assignment;
        decode_assign(flat, assignment);
        const std::vector<BpClass> classes = majority_classes(assignment, truth, k);
        std::vector<BpClass> predicted(n);
        for (std::size_t i = 0; i < n; ++i) predicted[i] = classes[assignment[i]];
        return 1.0 - accuracy_fitness(predicted, truth);
    });

    const OptimizeResult opt = optimize(objective, cfg);

    FfiClusterResult result;
    decode_assign(opt.best.position, result.assignments);

    ClusterModel& model = result.model;
    model.k = k;
    model.dim = static_cast<int>(dim);
    model.sums.assign(static_cast<std::size_t>(k), std::vector<double>(dim, 0.0));
    model.counts.assign(static_cast<std::size_t>(k), 0);
    model.centroids.assign(static_cast<std::size_t>(k), std::vector<double>(dim, 0.0));
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
        for (std::size_t d = 0; d < dim; ++d) {
            model.centroids[j][d] = opt.best.position[j * dim + d];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            model.sums[result.assignments[i]][d] += data[i][d];
        }
        model.counts[result.assignments[i]] += 1;
    }
    // Snap occupied centroids to their members' mean so the running-sum
    // bookkeeping stays exact; unoccupied ones keep the searched position.
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
        if (model.counts[j] == 0) continue;
        for (std::size_t d = 0; d < dim; ++d) {
            model.centroids[j][d] = model.sums[j][d] / static_cast<double>(model.counts[j]);
        }
    }
    model.cluster_classes = majority_classes(result.assignments, truth, k);
    result.training_accuracy = 1.0 - opt.best.objective;
    result.trace = opt.trace;
    return result;
}

FuseResult fuse(const MembershipMatrix& first, const MembershipMatrix& second) {
    if (first.size() != second.size()) throw ShapeMismatch("fuse: row counts differ");
    if (first.empty()) throw InsufficientData("fuse needs at least one row");
    const std::size_t cols = first.front().size();
    if (cols == 0) throw ShapeMismatch("fuse: rows must be non-empty");

    FuseResult out;
    out.combined.reserve(first.size());
    out.classes.reserve(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i].size() != cols || second[i].size() != cols) {
            throw ShapeMismatch("fuse: ragged membership rows");
        }
        std::vector<double> row(cols);
        double total = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            if (first[i][c] < 0.0 || second[i][c] < 0.0) {
                throw InvalidConfig("fuse: memberships must be non-negative");
            }
            row[c] = first[i][c] * second[i][c];
            total += row[c];
        }
        if (total > 0.0) {
            for (double& v : row) v /= total;
        } else {
            // The sources fully disagree; trust the second (label-driven) one.
            double fallback_total = 0.0;
            for (double v : second[i]) fallback_total += v;
            if (fallback_total > 0.0) {
                for (std::size_t c = 0; c < cols; ++c) row[c] = second[i][c] / fallback_total;
            } else {
                std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(cols));
            }
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < cols; ++c) {
            if (row[c] > row[best]) best = c;
        }
        out.combined.push_back(std::move(row));
        out.classes.push_back(static_cast<int>(best));
    }
    return out;
}

std::string model_to_json(const ClusterModel& model) {
    check_model(model);
    nlohmann::json j;
    j["k"] = model.k;
    j["dim"] = model.dim;
    j["centroids"] = model.centroids;
    j["sums"] = model.sums;
    j["counts"] = model.counts;
    auto classes = nlohmann::json::array();
    for (BpClass c : model.cluster_classes) classes.push_back(to_string(c));
    j["cluster_classes"] = classes;
    return j.dump(2);
}

ClusterModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("model JSON: ") + e.what());
    }
    ClusterModel model;
    try {
        model.k = j.at("k").get<int>();
        model.dim = j.at("dim").get<int>();
        model.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
        model.sums = j.at("sums").get<std::vector<std::vector<double>>>();
        model.counts = j.at("counts").get<std::vector<std::uint64_t>>();
        for (const auto& name : j.at("cluster_classes")) {
            model.cluster_classes.push_back(bp_class_from_string(name.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("model JSON: ") + e.what());
    }
    if (!model.cluster_classes.empty() &&
        model.cluster_classes.size() != static_cast<std::size_t>(model.k)) {
        throw CorruptFile("model JSON: class mapping does not cover k clusters");
    }
    check_model(model);
    return model;
}

void save_model(const std::filesystem::path& path, const ClusterModel& model) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << model_to_json(model) << '\n';
    if (!out) throw IoFailure("write failed for " + path.string());
}

ClusterModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoFailure("read failed for " + path.string());
    return model_from_json(buffer.str());
}

} // namespace vbp
