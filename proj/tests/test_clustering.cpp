#include <doctest.h>

#include "test_support.hpp"

#include "vbp/clustering.hpp"
#include "vbp/errors.hpp"
#include "vbp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

using namespace vbp;
using namespace vbp_test;

namespace {

ClusterModel two_cluster_line() {
    ClusterModel model;
    model.k = 2;
    model.dim = 1;
    model.centroids = {{1.0}, {10.0}};
    model.sums = {{1.0}, {10.0}};
    model.counts = {1, 1};
    return model;
}

// 30 well-separated 2-D points, 10 per class.
struct Blobs {
    std::vector<std::vector<double>> data;
    std::vector<BpClass> truth;
};

Blobs separable_blobs() {
    Blobs blobs;
    Rng rng(5);
    const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 10; ++i) {
            blobs.data.push_back({centers[c][0] + rng.uniform(-0.5, 0.5),
                                  centers[c][1] + rng.uniform(-0.5, 0.5)});
            blobs.truth.push_back(static_cast<BpClass>(c));
        }
    }
    return blobs;
}

} // namespace

TEST_CASE("blood pressure classes follow the threshold precedence") {
    CHECK(bp_class_from_label({120.0, 80.0}) == BpClass::normal);
    CHECK(bp_class_from_label({150.0, 95.0}) == BpClass::high);
    CHECK(bp_class_from_label({85.0, 55.0}) == BpClass::low);

    // Boundaries: >= 140 / >= 90 is high, < 90 / < 60 is low.
    CHECK(bp_class_from_label({140.0, 80.0}) == BpClass::high);
    CHECK(bp_class_from_label({120.0, 90.0}) == BpClass::high);
    CHECK(bp_class_from_label({139.9, 89.9}) == BpClass::normal);
    CHECK(bp_class_from_label({89.9, 70.0}) == BpClass::low);
    CHECK(bp_class_from_label({90.0, 60.0}) == BpClass::normal);
    CHECK(bp_class_from_label({100.0, 59.9}) == BpClass::low);
    // High takes precedence even when the low rule would also match.
    CHECK(bp_class_from_label({150.0, 55.0}) == BpClass::high);

    // Labels must keep systolic above diastolic and both positive.
    CHECK_THROWS_AS(bp_class_from_label({85.0, 95.0}), InvalidConfig);
    CHECK_THROWS_AS(bp_class_from_label({120.0, 0.0}), InvalidConfig);
}

TEST_CASE("class names round trip") {
    for (BpClass c : {BpClass::low, BpClass::normal, BpClass::high}) {
        CHECK(bp_class_from_string(to_string(c)) == c);
    }
    CHECK_THROWS_AS(bp_class_from_string("severe"), InvalidConfig);
}

TEST_CASE("euclidean distance and nearest-centroid assignment") {
    const std::vector<double> a = {0.0, 3.0};
    const std::vector<double> b = {4.0, 0.0};
    CHECK(euclidean(a, b) == 5.0);
    const std::vector<double> short_vec = {1.0};
    CHECK_THROWS_AS(euclidean(a, short_vec), LengthMismatch);

    const ClusterModel model = two_cluster_line();
    const std::vector<double> near_first = {3.0};
    const Assignment assignment = assign(model, near_first);
    CHECK(assignment.cluster == 0);
    CHECK(assignment.distance == 2.0);

    // Equidistant points go to the lower cluster index.
    const std::vector<double> middle = {5.5};
    CHECK(assign(model, middle).cluster == 0);

    const std::vector<double> wrong_dim = {1.0, 2.0};
    CHECK_THROWS_AS(assign(model, wrong_dim), ShapeMismatch);
}

TEST_CASE("incremental update moves the running mean") {
    ClusterModel model = two_cluster_line();
    const std::vector<double> point = {3.0};
    const std::size_t chosen = incremental_update(model, point);
    CHECK(chosen == 0);
    CHECK(model.centroids[0][0] == 2.0);
    CHECK(model.sums[0][0] == 4.0);
    CHECK(model.counts[0] == 2);
    CHECK(model.centroids[1][0] == 10.0);

    // Absorbing a point already at the centroid leaves it in place.
    const std::vector<double> at_centroid = {2.0};
    incremental_update(model, at_centroid);
    CHECK(model.centroids[0][0] == 2.0);
    CHECK(model.counts[0] == 3);
}

TEST_CASE("incremental updates keep centroids equal to sums over counts") {
    ClusterModel model;
    model.k = 3;
    model.dim = 2;
    model.centroids = {{0.0, 0.0}, {5.0, 5.0}, {-5.0, 5.0}};
    model.sums.assign(3, std::vector<double>(2, 0.0));
    model.counts.assign(3, 0);

    Rng rng(17);
    std::vector<std::vector<std::vector<double>>> members(3);
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> p = {rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        members[incremental_update(model, p)].push_back(p);
    }

    std::uint64_t total = 0;
    for (std::size_t j = 0; j < 3; ++j) {
        total += model.counts[j];
        REQUIRE(model.counts[j] == members[j].size());
        if (model.counts[j] == 0) continue;
        for (std::size_t d = 0; d < 2; ++d) {
            double mean = 0.0;
            for (const auto& p : members[j]) mean += p[d];
            mean /= static_cast<double>(members[j].size());
            CHECK(model.centroids[j][d] == doctest::Approx(mean).epsilon(1e-12));
            CHECK(model.centroids[j][d] ==
                  doctest::Approx(model.sums[j][d] / static_cast<double>(model.counts[j]))
                      .epsilon(1e-15));
        }
    }
    CHECK(total == 100);
}

TEST_CASE("forced-assignment updates land in the requested cluster") {
    ClusterModel model = two_cluster_line();
    const std::vector<double> point = {3.0};
    incremental_update_assigned(model, point, 1);  // not the nearest
    CHECK(model.counts[1] == 2);
    CHECK(model.centroids[1][0] == 6.5);
    CHECK_THROWS_AS(incremental_update_assigned(model, point, 7), InvalidConfig);
}

TEST_CASE("batch k-means separates two line blobs") {
    const std::vector<std::vector<double>> data = {{0.0},  {0.1},  {0.2},
                                                   {10.0}, {10.1}, {10.2}};
    const KmeansResult result = kmeans_batch(data, 2, 50, 1);

    std::vector<double> centers = {result.model.centroids[0][0], result.model.centroids[1][0]};
    std::sort(centers.begin(), centers.end());
    CHECK(centers[0] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(centers[1] == doctest::Approx(10.1).epsilon(1e-9));

    CHECK(result.assignments[0] == result.assignments[1]);
    CHECK(result.assignments[1] == result.assignments[2]);
    CHECK(result.assignments[3] == result.assignments[4]);
    CHECK(result.assignments[0] != result.assignments[3]);

    REQUIRE(!result.loss_per_iteration.empty());
    for (std::size_t i = 1; i < result.loss_per_iteration.size(); ++i) {
        CHECK(result.loss_per_iteration[i] <= result.loss_per_iteration[i - 1] + 1e-12);
    }
    CHECK(result.loss_per_iteration.back() == doctest::Approx(0.04).epsilon(1e-9));
}

TEST_CASE("k-means with as many clusters as points is exact") {
    const std::vector<std::vector<double>> data = {{0.0, 0.0}, {3.0, 1.0}, {-2.0, 4.0}};
    const KmeansResult result = kmeans_batch(data, 3, 20, 7);
    CHECK(result.loss_per_iteration.back() == 0.0);
    std::vector<std::size_t> seen = result.assignments;
    std::sort(seen.begin(), seen.end());
    CHECK(seen == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("k-means tolerates duplicate points") {
    const std::vector<std::vector<double>> data(6, std::vector<double>{2.5});
    const KmeansResult result = kmeans_batch(data, 2, 20, 3);
    CHECK(result.model.centroids[0][0] == 2.5);
    CHECK(result.model.centroids[1][0] == 2.5);
    CHECK(result.loss_per_iteration.back() == 0.0);
}

TEST_CASE("k-means is deterministic per seed") {
    Rng rng(31);
    std::vector<std::vector<double>> data;
    for (int i = 0; i < 60; ++i) {
        data.push_back({rng.normal(), rng.normal(), rng.normal()});
    }
    const KmeansResult a = kmeans_batch(data, 4, 50, 12);
    const KmeansResult b = kmeans_batch(data, 4, 50, 12);
    CHECK(a.assignments == b.assignments);
    CHECK(a.model.centroids == b.model.centroids);
    CHECK(a.loss_per_iteration == b.loss_per_iteration);
}

TEST_CASE("k-means validates inputs") {
    const std::vector<std::vector<double>> data = {{0.0}, {1.0}};
    CHECK_THROWS_AS(kmeans_batch(data, 0, 10, 1), InvalidConfig);
    CHECK_THROWS_AS(kmeans_batch(data, 3, 10, 1), InsufficientData);
    CHECK_THROWS_AS(kmeans_batch(data, 1, 0, 1), InvalidConfig);
    CHECK_THROWS_AS(kmeans_batch({}, 1, 10, 1), InsufficientData);
    const std::vector<std::vector<double>> ragged = {{0.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(kmeans_batch(ragged, 1, 10, 1), ShapeMismatch);
}

TEST_CASE("replaying a batch fit through incremental updates reproduces it") {
    for (std::uint64_t seed : {101u, 202u, 303u}) {
        Rng rng(seed);
        std::vector<std::vector<double>> data;
        for (int i = 0; i < 300; ++i) {
            std::vector<double> row(8);
            const double center = static_cast<double>(i % 3) * 6.0;
            for (double& v : row) v = center + rng.normal();
            data.push_back(std::move(row));
        }

        const KmeansResult batch = kmeans_batch(data, 3, 100, seed);

        ClusterModel replay;
        replay.k = 3;
        replay.dim = 8;
        replay.centroids.assign(3, std::vector<double>(8, 0.0));
        replay.sums.assign(3, std::vector<double>(8, 0.0));
        replay.counts.assign(3, 0);
        for (std::size_t i = 0; i < data.size(); ++i) {
            incremental_update_assigned(replay, data[i], batch.assignments[i]);
        }

        for (int j = 0; j < 3; ++j) {
            for (int d = 0; d < 8; ++d) {
                CHECK(std::abs(replay.centroids[j][d] - batch.model.centroids[j][d]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("class-balanced accuracy reduces to binary accuracy for two classes") {
    // 8 A-A, 7 B-B, 3 B-A, 2 A-B: 15 of 20 agree.
    std::vector<BpClass> truth, predicted;
    const BpClass a = BpClass::low, b = BpClass::high;
    for (int i = 0; i < 8; ++i) { truth.push_back(a); predicted.push_back(a); }
    for (int i = 0; i < 7; ++i) { truth.push_back(b); predicted.push_back(b); }
    for (int i = 0; i < 3; ++i) { truth.push_back(b); predicted.push_back(a); }
    for (int i = 0; i < 2; ++i) { truth.push_back(a); predicted.push_back(b); }
    CHECK(accuracy_fitness(predicted, truth) == 0.75);

    CHECK(accuracy_fitness(truth, truth) == 1.0);
}

TEST_CASE("class-balanced accuracy on a three-class confusion") {
    // Confusion rows (truth low/normal/high): [2,1,0], [0,3,0], [1,0,3].
    std::vector<BpClass> truth, predicted;
    const auto add = [&](BpClass t, BpClass p, int n) {
        for (int i = 0; i < n; ++i) {
            truth.push_back(t);
            predicted.push_back(p);
        }
    };
    add(BpClass::low, BpClass::low, 2);
    add(BpClass::low, BpClass::normal, 1);
    add(BpClass::normal, BpClass::normal, 3);
    add(BpClass::high, BpClass::low, 1);
    add(BpClass::high, BpClass::high, 3);
    CHECK(accuracy_fitness(predicted, truth) == doctest::Approx(26.0 / 30.0).epsilon(1e-15));

    // Order of the sample pairs does not matter.
    std::vector<std::size_t> order(truth.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(9);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
    }
    std::vector<BpClass> truth_shuffled, predicted_shuffled;
    for (std::size_t idx : order) {
        truth_shuffled.push_back(truth[idx]);
        predicted_shuffled.push_back(predicted[idx]);
    }
    CHECK(accuracy_fitness(predicted_shuffled, truth_shuffled) ==
          accuracy_fitness(predicted, truth));
}

TEST_CASE("class-balanced accuracy handles edge inputs") {
    const std::vector<BpClass> ones(5, BpClass::normal);
    CHECK(accuracy_fitness(ones, ones) == 1.0);

    const std::vector<BpClass> shorter(4, BpClass::normal);
    CHECK_THROWS_AS(accuracy_fitness(ones, shorter), LengthMismatch);
    CHECK_THROWS_AS(accuracy_fitness(std::vector<BpClass>{}, std::vector<BpClass>{}),
                    InsufficientData);
}

TEST_CASE("cluster-to-class mapping takes the member majority") {
    ClusterModel model;
    model.k = 3;
    model.dim = 1;
    model.centroids = {{0.0}, {1.0}, {2.0}};
    model.sums = model.centroids;
    model.counts = {1, 1, 1};

    const std::vector<std::size_t> assignments = {0, 0, 1, 1, 2};
    const std::vector<BpClass> truth = {BpClass::low, BpClass::low, BpClass::normal,
                                        BpClass::high, BpClass::high};
    map_clusters_to_classes(model, assignments, truth);
    REQUIRE(model.cluster_classes.size() == 3);
    CHECK(model.cluster_classes[0] == BpClass::low);
    // Cluster 1 ties normal/high; the lower class index wins.
    CHECK(model.cluster_classes[1] == BpClass::normal);
    CHECK(model.cluster_classes[2] == BpClass::high);

    const std::vector<BpClass> short_truth = {BpClass::low};
    CHECK_THROWS_AS(map_clusters_to_classes(model, assignments, short_truth), LengthMismatch);
    const std::vector<std::size_t> bad = {9, 0, 0, 0, 0};
    CHECK_THROWS_AS(map_clusters_to_classes(model, bad, truth), InvalidConfig);
}

TEST_CASE("clusters with no members inherit the overall majority") {
    ClusterModel model;
    model.k = 2;
    model.dim = 1;
    model.centroids = {{0.0}, {100.0}};
    model.sums = model.centroids;
    model.counts = {1, 1};

    const std::vector<std::size_t> assignments = {0, 0, 0};
    const std::vector<BpClass> truth = {BpClass::high, BpClass::high, BpClass::low};
    map_clusters_to_classes(model, assignments, truth);
    CHECK(model.cluster_classes[0] == BpClass::high);
    CHECK(model.cluster_classes[1] == BpClass::high);  // empty cluster, overall majority
}

TEST_CASE("soft membership weights are inverse squared distance") {
    ClusterModel model;
    model.k = 2;
    model.dim = 1;
    model.centroids = {{0.0}, {10.0}};
    model.sums = model.centroids;
    model.counts = {1, 1};

    const std::vector<double> at_centroid = {0.0};
    const auto sharp = soft_membership(model, at_centroid);
    REQUIRE(sharp.size() == 2);
    CHECK(sharp[0] > 0.999);
    CHECK(sharp[0] + sharp[1] == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> middle = {5.0};
    const auto even = soft_membership(model, middle);
    CHECK(even[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(even[1] == doctest::Approx(0.5).epsilon(1e-12));

    ClusterModel single;
    single.k = 1;
    single.dim = 1;
    single.centroids = {{3.0}};
    single.sums = {{3.0}};
    single.counts = {1};
    const std::vector<double> anywhere = {7.0};
    CHECK(soft_membership(single, anywhere) == std::vector<double>{1.0});
}

TEST_CASE("class membership folds clusters that share a class") {
    ClusterModel model;
    model.k = 3;
    model.dim = 1;
    model.centroids = {{0.0}, {1.0}, {10.0}};
    model.sums = model.centroids;
    model.counts = {1, 1, 1};

    const std::vector<double> point = {0.5};
    CHECK_THROWS_AS(class_membership(model, point), InvalidConfig);  // unmapped

    model.cluster_classes = {BpClass::low, BpClass::low, BpClass::high};
    const auto folded = class_membership(model, point);
    REQUIRE(folded.size() == kBpClassCount);
    const auto raw = soft_membership(model, point);
    CHECK(folded[0] == doctest::Approx(raw[0] + raw[1]).epsilon(1e-12));
    CHECK(folded[1] == 0.0);
    CHECK(folded[2] == doctest::Approx(raw[2]).epsilon(1e-12));
    CHECK(folded[0] + folded[1] + folded[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fusion multiplies memberships and renormalizes") {
    const MembershipMatrix first = {{0.6, 0.3, 0.1}};
    const MembershipMatrix second = {{0.5, 0.4, 0.1}};
    const FuseResult fused = fuse(first, second);
    REQUIRE(fused.combined.size() == 1);
    // Products (0.30, 0.12, 0.01) sum to 0.43.
    CHECK(fused.combined[0][0] == doctest::Approx(0.30 / 0.43).epsilon(1e-12));
    CHECK(fused.combined[0][1] == doctest::Approx(0.12 / 0.43).epsilon(1e-12));
    CHECK(fused.combined[0][2] == doctest::Approx(0.01 / 0.43).epsilon(1e-12));
    CHECK(fused.classes == std::vector<int>{0});

    // A confident row dominates an ambivalent one.
    const FuseResult confident = fuse({{1.0, 0.0, 0.0}}, {{0.1, 0.8, 0.1}});
    CHECK(confident.combined[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(confident.classes == std::vector<int>{0});
}

TEST_CASE("fusion falls back to the second matrix when products vanish") {
    const FuseResult fallback = fuse({{0.0, 1.0, 0.0}}, {{0.8, 0.0, 0.2}});
    CHECK(fallback.combined[0] == std::vector<double>{0.8, 0.0, 0.2});
    CHECK(fallback.classes == std::vector<int>{0});
}

TEST_CASE("fusion properties and validation") {
    const MembershipMatrix a = {{0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}};
    const MembershipMatrix b = {{0.5, 0.4, 0.1}, {0.1, 0.2, 0.7}};

    const FuseResult ab = fuse(a, b);
    const FuseResult ba = fuse(b, a);
    CHECK(ab.classes == ba.classes);  // elementwise products commute
    for (const auto& row : ab.combined) {
        double sum = 0.0;
        for (double v : row) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Ties resolve to the lower class index.
    const FuseResult tie = fuse({{0.5, 0.5, 0.0}}, {{0.5, 0.5, 0.0}});
    CHECK(tie.classes == std::vector<int>{0});

    CHECK_THROWS_AS(fuse(a, {{0.5, 0.4, 0.1}}), ShapeMismatch);
    CHECK_THROWS_AS(fuse({{0.5, 0.5}}, {{0.5, 0.4, 0.1}}), ShapeMismatch);
    CHECK_THROWS_AS(fuse({{0.5, -0.5, 1.0}}, {{0.5, 0.4, 0.1}}), InvalidConfig);
    CHECK_THROWS_AS(fuse({}, {}), InsufficientData);
}

TEST_CASE("label-driven centroid search nails separable blobs") {
    const Blobs blobs = separable_blobs();
    FfiConfig base;
    base.population_size = 20;
    base.max_iterations = 200;
    base.seed = 9;

    const FfiClusterResult result = ffi_cluster(blobs.data, blobs.truth, 3, base);
    CHECK(result.training_accuracy == 1.0);
    CHECK(result.assignments.size() == blobs.data.size());
    REQUIRE(result.model.k == 3);
    CHECK(result.model.dim == 2);
    REQUIRE(result.model.cluster_classes.size() == 3);

    // The search's winning objective is 1 - accuracy.
    REQUIRE(!result.trace.empty());
    CHECK(result.trace.back() == doctest::Approx(1.0 - result.training_accuracy).epsilon(1e-12));
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        CHECK(result.trace[i] <= result.trace[i - 1]);
    }

    // Returned centroids are snapped to their members' means.
    std::vector<std::vector<double>> sums(3, std::vector<double>(2, 0.0));
    std::vector<std::uint64_t> counts(3, 0);
    for (std::size_t i = 0; i < blobs.data.size(); ++i) {
        const std::size_t j = result.assignments[i];
        counts[j] += 1;
        for (std::size_t d = 0; d < 2; ++d) sums[j][d] += blobs.data[i][d];
    }
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(result.model.counts[j] == counts[j]);
        if (counts[j] == 0) continue;
        for (std::size_t d = 0; d < 2; ++d) {
            CHECK(std::abs(result.model.centroids[j][d] -
                           sums[j][d] / static_cast<double>(counts[j])) <= 1e-9);
            CHECK(result.model.centroids[j][d] ==
                  doctest::Approx(result.model.sums[j][d] /
                                  static_cast<double>(result.model.counts[j]))
                      .epsilon(1e-12));
        }
    }

    const FfiClusterResult again = ffi_cluster(blobs.data, blobs.truth, 3, base);
    CHECK(again.model.centroids == result.model.centroids);
    CHECK(again.training_accuracy == result.training_accuracy);
}

TEST_CASE("label-driven centroid search validates inputs") {
    const Blobs blobs = separable_blobs();
    FfiConfig base;
    CHECK_THROWS_AS(ffi_cluster(blobs.data, blobs.truth, 0, base), InvalidConfig);

    std::vector<BpClass> short_truth(blobs.truth.begin(), blobs.truth.end() - 1);
    CHECK_THROWS_AS(ffi_cluster(blobs.data, short_truth, 3, base), LengthMismatch);

    const std::vector<std::vector<double>> two_points = {{0.0}, {1.0}};
    const std::vector<BpClass> two_truth = {BpClass::low, BpClass::high};
    CHECK_THROWS_AS(ffi_cluster(two_points, two_truth, 3, base), InsufficientData);
}

TEST_CASE("cluster models survive a json round trip exactly") {
    ClusterModel model;
    model.k = 2;
    model.dim = 2;
    model.centroids = {{0.1234567890123456, -7.5}, {3.0e-17, 42.0}};
    model.sums = {{0.2469135780246912, -15.0}, {9.0e-17, 126.0}};
    model.counts = {2, 3};
    model.cluster_classes = {BpClass::high, BpClass::low};

    const ClusterModel restored = model_from_json(model_to_json(model));
    CHECK(restored.k == model.k);
    CHECK(restored.dim == model.dim);
    CHECK(restored.centroids == model.centroids);  // bit-exact doubles
    CHECK(restored.sums == model.sums);
    CHECK(restored.counts == model.counts);
    CHECK(restored.cluster_classes == model.cluster_classes);

    TempDir dir;
    const auto path = dir / "model.json";
    save_model(path, model);
    const ClusterModel loaded = load_model(path);
    CHECK(loaded.centroids == model.centroids);
    CHECK(loaded.cluster_classes == model.cluster_classes);
}

TEST_CASE("malformed model files are rejected") {
    CHECK_THROWS_AS(model_from_json("{ not json"), CorruptFile);
    CHECK_THROWS_AS(model_from_json("{}"), CorruptFile);  // missing keys
    // Class mapping that does not cover k clusters.
    CHECK_THROWS_AS(model_from_json(R"({"k":2,"dim":1,"centroids":[[0.0],[1.0]],)"
                                    R"("sums":[[0.0],[1.0]],"counts":[1,1],)"
                                    R"("cluster_classes":["low"]})"),
                    CorruptFile);
    // Structurally valid JSON whose arrays disagree with k.
    CHECK_THROWS_AS(model_from_json(R"({"k":2,"dim":1,"centroids":[[0.0]],)"
                                    R"("sums":[[0.0]],"counts":[1],"cluster_classes":[]})"),
                    ShapeMismatch);

    TempDir dir;
    CHECK_THROWS_AS(load_model(dir / "missing.json"), IoFailure);
}
