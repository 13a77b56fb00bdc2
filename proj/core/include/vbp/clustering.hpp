#pragma once

#include "vbp/audio.hpp"
#include "vbp/optimizer.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vbp {

enum class BpClass : int { low = 0, normal = 1, high = 2 };

inline constexpr std::size_t kBpClassCount = 3;

const char* to_string(BpClass c);
BpClass bp_class_from_string(const std::string& name);

// High when systolic >= 140 or diastolic >= 90; otherwise low when
// systolic < 90 or diastolic < 60; otherwise normal.
BpClass bp_class_from_label(const BpLabel& label);

// Centroid model with running sums/counts so it can absorb points one at a
// time. Whenever counts[j] > 0, centroids[j] == sums[j] / counts[j].
struct ClusterModel {
    int k = 0;
    int dim = 0;
    std::vector<std::vector<double>> centroids;  // k x dim
    std::vector<std::vector<double>> sums;       // k x dim
    std::vector<std::uint64_t> counts;           // points absorbed per cluster
    std::vector<BpClass> cluster_classes;        // empty until mapped
};

struct Assignment {
    std::size_t cluster = 0;
    double distance = 0.0;
};

double euclidean(std::span<const double> a, std::span<const double> b);

// Nearest centroid (ties go to the lower index).
Assignment assign(const ClusterModel& model, std::span<const double> point);

// Absorbs the point into its nearest cluster; the centroid becomes
// (sum + x) / (count + 1). Returns the cluster index.
std::size_t incremental_update(ClusterModel& model, std::span<const double> point);

// Same running-mean update but into a chosen cluster (stream replay).
void incremental_update_assigned(ClusterModel& model, std::span<const double> point,
                                 std::size_t cluster);

// Inverse-squared-distance weights over the k clusters; sums to 1.
std::vector<double> soft_membership(const ClusterModel& model, std::span<const double> point);

// Soft memberships folded per mapped class, aligned to BpClass order.
std::vector<double> class_membership(const ClusterModel& model, std::span<const double> point);

struct KmeansResult {
    ClusterModel model;
    std::vector<std::size_t> assignments;
    std::vector<double> loss_per_iteration;  // summed squared distances, non-increasing
};

// Lloyd iterations over the full batch, seeded by squared-distance sampling.
// Empty clusters are reseeded to the point farthest from its centroid.
KmeansResult kmeans_batch(const std::vector<std::vector<double>>& data, int k,
                          int max_iterations, std::uint64_t seed);

// Mean one-vs-rest accuracy over the classes present in either sequence;
// equals plain binary accuracy when only two classes appear.
double accuracy_fitness(std::span<const BpClass> predicted, std::span<const BpClass> truth);

// Majority class of the training points in each cluster; an empty cluster
// inherits the overall majority. Ties go to the lower class index.
void map_clusters_to_classes(ClusterModel& model, std::span<const std::size_t> assignments,
                             std::span<const BpClass> truth);

struct FfiClusterResult {
    ClusterModel model;
    std::vector<std::size_t> assignments;  // training-point assignments
    double training_accuracy = 0.0;
    std::vector<double> trace;  // best (1 - accuracy) per optimizer iteration
};

// Searches centroid space directly for the placement whose majority-class
// labeling scores best on the training labels. base.dimension/bounds are
// derived from the data; the rest of base (population, iterations, seed,
// scheme, ...) is honored as given.
FfiClusterResult ffi_cluster(const std::vector<std::vector<double>>& data,
                             std::span<const BpClass> truth, int k, const FfiConfig& base);

using MembershipMatrix = std::vector<std::vector<double>>;

struct FuseResult {
    MembershipMatrix combined;  // renormalized elementwise products
    std::vector<int> classes;   // argmax per row, ties to the lower index
};

// Multiplicative fusion of two class-aligned membership matrices. Rows whose
// product vanishes fall back to the second argument's row.
FuseResult fuse(const MembershipMatrix& first, const MembershipMatrix& second);

std::string model_to_json(const ClusterModel& model);
ClusterModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const ClusterModel& model);
ClusterModel load_model(const std::filesystem::path& path);

} // namespace vbp
