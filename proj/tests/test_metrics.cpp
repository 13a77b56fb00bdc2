#include <doctest.h>

#include "vbp/errors.hpp"
#include "vbp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

using namespace vbp;

namespace {

std::vector<std::vector<double>> line_points(std::initializer_list<double> xs) {
    std::vector<std::vector<double>> out;
    for (double x : xs) out.push_back({x});
    return out;
}

std::vector<std::vector<double>> scale_all(const std::vector<std::vector<double>>& data,
                                           double c) {
    auto out = data;
    for (auto& row : out) {
        for (double& v : row) v *= c;
    }
    return out;
}

} // namespace

TEST_CASE("davies-bouldin on two tight line clusters") {
    const auto data = line_points({0.0, 2.0, 10.0, 12.0});
    const std::vector<std::size_t> assignments = {0, 0, 1, 1};
    const std::vector<std::vector<double>> centroids = {{1.0}, {11.0}};
    // Scatter 1 on each side, centroid gap 10: (1 + 1) / 10.
    CHECK(davies_bouldin(data, assignments, centroids) == 0.2);
}

TEST_CASE("davies-bouldin edge cases") {
    // Two singletons have zero scatter.
    const auto singles = line_points({0.0, 5.0});
    const std::vector<std::size_t> one_each = {0, 1};
    const std::vector<std::vector<double>> centers = {{0.0}, {5.0}};
    CHECK(davies_bouldin(singles, one_each, centers) == 0.0);

    // Empty clusters are skipped, not scored.
    const auto data = line_points({0.0, 2.0, 10.0, 12.0});
    const std::vector<std::size_t> skip_middle = {0, 0, 2, 2};
    const std::vector<std::vector<double>> three = {{1.0}, {50.0}, {11.0}};
    CHECK(davies_bouldin(data, skip_middle, three) == 0.2);

    // Coincident centroids cannot be compared.
    const std::vector<std::vector<double>> coincident = {{1.0}, {1.0}};
    const std::vector<std::size_t> assignments = {0, 0, 1, 1};
    CHECK_THROWS_AS(davies_bouldin(data, assignments, coincident), DegenerateClusters);

    // A single non-empty cluster is not scoreable either.
    const std::vector<std::size_t> all_zero = {0, 0, 0, 0};
    const std::vector<std::vector<double>> pair = {{6.0}, {99.0}};
    CHECK_THROWS_AS(davies_bouldin(data, all_zero, pair), DegenerateClusters);

    const std::vector<std::size_t> short_assign = {0, 0};
    CHECK_THROWS_AS(davies_bouldin(data, short_assign, pair), LengthMismatch);
    const std::vector<std::size_t> out_of_range = {0, 0, 1, 9};
    CHECK_THROWS_AS(davies_bouldin(data, out_of_range, pair), ShapeMismatch);
}

TEST_CASE("davies-bouldin is scale covariant") {
    const auto data = line_points({0.0, 1.0, 2.0, 9.0, 11.0, 13.0});
    const std::vector<std::size_t> assignments = {0, 0, 0, 1, 1, 1};
    const std::vector<std::vector<double>> centroids = {{1.0}, {11.0}};
    const double base = davies_bouldin(data, assignments, centroids);

    const auto scaled = scale_all(data, 3.0);
    const std::vector<std::vector<double>> scaled_centroids = {{3.0}, {33.0}};
    CHECK(davies_bouldin(scaled, assignments, scaled_centroids) ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("homogeneity and completeness on the split-cluster example") {
    // Truth AABB, clusters {0,0},{1},{2}: pure clusters, split class B.
    const std::vector<int> truth = {0, 0, 1, 1};
    const std::vector<int> clusters = {0, 0, 1, 2};
    const HomogeneityCompleteness hc = homogeneity_completeness(truth, clusters);
    CHECK(hc.homogeneity == doctest::Approx(1.0).epsilon(1e-9));
    // H(clusters|truth) = 0.5 bit against H(clusters) = 1.5 bit.
    CHECK(hc.completeness == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("homogeneity and completeness swap when the arguments swap") {
    const std::vector<int> truth = {0, 0, 1, 1};
    const std::vector<int> clusters = {0, 0, 1, 2};
    const HomogeneityCompleteness forward = homogeneity_completeness(truth, clusters);
    const HomogeneityCompleteness backward = homogeneity_completeness(clusters, truth);
    CHECK(forward.homogeneity == doctest::Approx(backward.completeness).epsilon(1e-12));
    CHECK(forward.completeness == doctest::Approx(backward.homogeneity).epsilon(1e-12));
}

TEST_CASE("homogeneity and completeness degenerate and perfect cases") {
    const std::vector<int> truth = {0, 0, 1, 1};
    const HomogeneityCompleteness perfect = homogeneity_completeness(truth, truth);
    CHECK(perfect.homogeneity == 1.0);
    CHECK(perfect.completeness == 1.0);

    // One cluster holding two balanced classes: nothing homogeneous,
    // trivially complete.
    const std::vector<int> lumped = {7, 7, 7, 7};
    const HomogeneityCompleteness hc = homogeneity_completeness(truth, lumped);
    CHECK(hc.homogeneity == 0.0);
    CHECK(hc.completeness == 1.0);

    // Relabeling clusters changes nothing.
    const std::vector<int> clusters = {0, 0, 1, 2};
    const std::vector<int> relabeled = {5, 5, 9, 3};
    const HomogeneityCompleteness a = homogeneity_completeness(truth, clusters);
    const HomogeneityCompleteness b = homogeneity_completeness(truth, relabeled);
    CHECK(a.homogeneity == doctest::Approx(b.homogeneity).epsilon(1e-15));
    CHECK(a.completeness == doctest::Approx(b.completeness).epsilon(1e-15));

    const std::vector<int> shorter = {0, 0, 1};
    CHECK_THROWS_AS(homogeneity_completeness(truth, shorter), LengthMismatch);
    CHECK_THROWS_AS(homogeneity_completeness(std::vector<int>{}, std::vector<int>{}),
                    InsufficientData);
}

TEST_CASE("pair-counting jaccard similarity") {
    const std::vector<int> truth = {0, 0, 1, 1};
    // Together in both: {0,1}. Together in either: {0,1},{2,3},{0,2},{1,2}.
    const std::vector<int> lopsided = {0, 0, 0, 1};
    CHECK(jaccard_similarity(truth, lopsided) == 0.25);

    // Together in both: {0,1}. Together in either: {0,1},{2,3}.
    const std::vector<int> split = {0, 0, 1, 2};
    CHECK(jaccard_similarity(truth, split) == 0.5);

    CHECK(jaccard_similarity(truth, truth) == 1.0);

    // No pair together anywhere counts as full agreement.
    const std::vector<int> distinct_truth = {0, 1, 2};
    const std::vector<int> distinct_clusters = {5, 6, 7};
    CHECK(jaccard_similarity(distinct_truth, distinct_clusters) == 1.0);

    // Cluster ids are labels, not values.
    const std::vector<int> relabeled = {9, 9, 9, 4};
    CHECK(jaccard_similarity(truth, relabeled) == 0.25);

    const std::vector<int> shorter = {0, 0, 1};
    CHECK_THROWS_AS(jaccard_similarity(truth, shorter), LengthMismatch);
    const std::vector<int> single = {0};
    CHECK_THROWS_AS(jaccard_similarity(single, single), InsufficientData);
}

TEST_CASE("silhouette on two tight line blobs") {
    const auto data = line_points({0.0, 0.1, 10.0, 10.1});
    const std::vector<std::size_t> assignments = {0, 0, 1, 1};
    // a = 0.1 everywhere; b averages 10.05; mean width ~0.99005.
    CHECK(silhouette(data, assignments) ==
          doctest::Approx(0.9899997499937521).epsilon(1e-9));
}

TEST_CASE("silhouette edge cases") {
    // Identical points: max(a, b) = 0 scores 0.
    const auto identical = line_points({2.0, 2.0, 2.0, 2.0});
    const std::vector<std::size_t> halves = {0, 0, 1, 1};
    CHECK(silhouette(identical, halves) == 0.0);

    // Singleton clusters score 0 by definition.
    const auto singles = line_points({0.0, 9.0});
    const std::vector<std::size_t> one_each = {0, 1};
    CHECK(silhouette(singles, one_each) == 0.0);

    const auto data = line_points({0.0, 0.1, 10.0, 10.1});
    const std::vector<std::size_t> lumped = {3, 3, 3, 3};
    CHECK_THROWS_AS(silhouette(data, lumped), DegenerateClusters);
}

TEST_CASE("dunn index on two compact line clusters") {
    const auto data = line_points({0.0, 1.0, 10.0, 11.0});
    const std::vector<std::size_t> assignments = {0, 0, 1, 1};
    // Closest cross-cluster gap 9 over largest diameter 1.
    CHECK(dunn_index(data, assignments) == 9.0);
}

TEST_CASE("dunn index edge cases") {
    // A point shared between clusters collapses the numerator.
    const auto shared = line_points({0.0, 1.0, 1.0, 5.0});
    const std::vector<std::size_t> overlapping = {0, 0, 1, 1};
    CHECK(dunn_index(shared, overlapping) == 0.0);

    // All-singleton clusterings have no positive diameter.
    const auto singles = line_points({0.0, 4.0, 9.0});
    const std::vector<std::size_t> one_each = {0, 1, 2};
    CHECK_THROWS_AS(dunn_index(singles, one_each), ZeroDiameter);

    const auto data = line_points({0.0, 1.0});
    const std::vector<std::size_t> lumped = {0, 0};
    CHECK_THROWS_AS(dunn_index(data, lumped), DegenerateClusters);
}

TEST_CASE("dunn index is scale covariant and relabel invariant") {
    const auto data = line_points({0.0, 1.0, 2.0, 10.0, 11.5, 13.0});
    const std::vector<std::size_t> assignments = {0, 0, 0, 1, 1, 1};
    const double base = dunn_index(data, assignments);
    CHECK(dunn_index(scale_all(data, 7.0), assignments) == doctest::Approx(base).epsilon(1e-12));

    const std::vector<std::size_t> relabeled = {4, 4, 4, 2, 2, 2};
    CHECK(dunn_index(data, relabeled) == base);
}

TEST_CASE("regression recovers an exact linear relationship") {
    std::vector<double> x(10), y(10);
    for (std::size_t i = 0; i < 10; ++i) {
        x[i] = static_cast<double>(i + 1);
        y[i] = 2.0 * x[i] + 1.0;
    }
    const RegressionStats stats = ols_regression(x, y);
    CHECK(stats.r_square == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats.multiple_r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats.adjusted_r_square == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(stats.standard_error) <= 1e-9);
}

TEST_CASE("regression matches the normal equations on the five-point case") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> y = {2.0, 2.9, 4.2, 3.9, 5.1};
    // Fit y = 1.46 + 0.72 x: SSE 0.564, SST 5.748.
    const RegressionStats stats = ols_regression(x, y);
    CHECK(stats.r_square == doctest::Approx(0.9018789144050104).epsilon(1e-9));
    CHECK(stats.multiple_r == doctest::Approx(0.949673056585797).epsilon(1e-9));
    CHECK(stats.adjusted_r_square == doctest::Approx(0.8691718858733473).epsilon(1e-9));
    CHECK(stats.standard_error == doctest::Approx(0.43358966777357605).epsilon(1e-9));
    CHECK(stats.multiple_r * stats.multiple_r == doctest::Approx(stats.r_square).epsilon(1e-12));
    CHECK(stats.adjusted_r_square <= stats.r_square);
}

TEST_CASE("regression defines a constant response as unexplained") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y(4, 5.0);
    const RegressionStats stats = ols_regression(x, y);
    CHECK(stats.r_square == 0.0);
    CHECK(stats.multiple_r == 0.0);
    CHECK(std::abs(stats.standard_error) <= 1e-9);
}

TEST_CASE("multi-predictor regression and failure modes") {
    const std::vector<std::vector<double>> predictors = {
        {1.0, 2.0}, {2.0, 1.0}, {3.0, 5.0}, {4.0, 2.0}, {5.0, 7.0}, {6.0, 3.0}};
    std::vector<double> y;
    for (const auto& row : predictors) y.push_back(3.0 + 2.0 * row[0] - 0.5 * row[1]);
    const RegressionStats exact = ols_regression(predictors, y);
    CHECK(exact.r_square == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(exact.standard_error) <= 1e-6);

    // A constant predictor duplicates the intercept column.
    const std::vector<double> x_const(5, 2.0);
    const std::vector<double> y5 = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK_THROWS_AS(ols_regression(x_const, y5), SingularDesign);

    // Collinear predictor pair.
    const std::vector<std::vector<double>> collinear = {
        {1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}, {4.0, 8.0}, {5.0, 10.0}};
    CHECK_THROWS_AS(ols_regression(collinear, y5), SingularDesign);

    // Too few rows for the coefficient count.
    const std::vector<double> two_x = {1.0, 2.0};
    const std::vector<double> two_y = {1.0, 2.0};
    CHECK_THROWS_AS(ols_regression(two_x, two_y), InsufficientData);

    const std::vector<double> short_y = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(ols_regression(predictors, short_y), LengthMismatch);
    CHECK_THROWS_AS(ols_regression(std::vector<std::vector<double>>{}, std::vector<double>{}),
                    InsufficientData);
}

TEST_CASE("evaluation reports round trip through json") {
    EvaluationReport report;
    report.davies_bouldin = 0.9876543210123456;
    report.homogeneity = 0.961;
    report.completeness = 2.0 / 3.0;
    report.jaccard = 0.25;
    report.silhouette = -0.125;
    report.dunn = 9.0;
    report.accuracy = 26.0 / 30.0;
    report.seed = 1234567890123456789ULL;
    report.training_percent = 90;
    report.epochs = 40;
    report.method = "ffi_fusion";
    report.excluded_clips = 2;

    const EvaluationReport restored = EvaluationReport::from_json(report.to_json());
    CHECK(restored.davies_bouldin == report.davies_bouldin);
    CHECK(restored.homogeneity == report.homogeneity);
    CHECK(restored.completeness == report.completeness);
    CHECK(restored.jaccard == report.jaccard);
    CHECK(restored.silhouette == report.silhouette);
    CHECK(restored.dunn == report.dunn);
    CHECK(restored.accuracy == report.accuracy);
    CHECK(restored.seed == report.seed);
    CHECK(restored.training_percent == report.training_percent);
    CHECK(restored.epochs == report.epochs);
    CHECK(restored.method == report.method);
    CHECK(restored.excluded_clips == report.excluded_clips);

    CHECK_THROWS_AS(EvaluationReport::from_json("not json"), CorruptFile);
}

TEST_CASE("evaluation report csv puts scores before the config echo") {
    const std::string header = EvaluationReport::csv_header();
    CHECK(header.rfind("davies_bouldin,homogeneity,completeness,jaccard,silhouette,dunn,accuracy",
                       0) == 0);

    EvaluationReport report;
    report.davies_bouldin = 0.5;
    report.method = "kmeans_only";
    const std::string row = report.to_csv_row();
    const auto commas = static_cast<std::size_t>(std::count(row.begin(), row.end(), ','));
    const auto header_commas = static_cast<std::size_t>(
        std::count(header.begin(), header.end(), ','));
    CHECK(commas == header_commas);
    CHECK(row.rfind("0.5,", 0) == 0);
    CHECK(row.find("kmeans_only") != std::string::npos);
}
