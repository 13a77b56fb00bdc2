#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vbp {

// Mean over clusters of the worst (s_i + s_j) / d(c_i, c_j) ratio, where s_i
// is the mean distance of cluster i's points to its centroid. Lower is
// tighter. Needs >= 2 non-empty clusters with distinct centroids.
double davies_bouldin(const std::vector<std::vector<double>>& data,
                      std::span<const std::size_t> assignments,
                      const std::vector<std::vector<double>>& centroids);

// Entropy-based homogeneity h = 1 - H(truth|clusters) / H(truth) and
// completeness c = 1 - H(clusters|truth) / H(clusters); each is 1 when the
// corresponding denominator entropy is 0. Swapping the arguments swaps the
// two scores.
struct HomogeneityCompleteness {
    double homogeneity = 0.0;
    double completeness = 0.0;
};
HomogeneityCompleteness homogeneity_completeness(std::span<const int> truth,
                                                 std::span<const int> clusters);

// Pair-counting Jaccard: |pairs together in both| / |pairs together in
// either|; 1 when no pair is together in either labeling.
double jaccard_similarity(std::span<const int> truth, std::span<const int> clusters);

// Mean silhouette width; singleton clusters score 0, as do points whose
// max(a, b) is 0. Needs >= 2 clusters.
double silhouette(const std::vector<std::vector<double>>& data,
                  std::span<const std::size_t> assignments);

// Minimum single-linkage inter-cluster distance over the maximum cluster
// diameter. Raises ZeroDiameter when every cluster has diameter 0.
double dunn_index(const std::vector<std::vector<double>>& data,
                  std::span<const std::size_t> assignments);

struct RegressionStats {
    double multiple_r = 0.0;
    double r_square = 0.0;
    double adjusted_r_square = 0.0;
    double standard_error = 0.0;
};

// Least squares with an intercept. The single-predictor overload is the
// multiple one with one column. R^2 is defined as 0 when the response is
// constant.
RegressionStats ols_regression(std::span<const double> x, std::span<const double> y);
RegressionStats ols_regression(const std::vector<std::vector<double>>& predictors,
                               std::span<const double> y);

// One experiment's scores plus the configuration that produced them. The
// field order here is the CSV column order.
struct EvaluationReport {
    double davies_bouldin = 0.0;
    double homogeneity = 0.0;
    double completeness = 0.0;
    double jaccard = 0.0;
    double silhouette = 0.0;
    double dunn = 0.0;
    double accuracy = 0.0;
    std::uint64_t seed = 0;
    int training_percent = 0;
    int epochs = 0;
    std::string method;
    int excluded_clips = 0;

    std::string to_json() const;
    static EvaluationReport from_json(const std::string& text);
    static std::string csv_header();
    std::string to_csv_row() const;
};

} // namespace vbp
