#include "vbp/metrics.hpp"

#include "vbp/errors.hpp"
#include "text_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace vbp {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

void check_points(const std::vector<std::vector<double>>& data,
                  std::span<const std::size_t> assignments) {
    if (data.empty()) throw InsufficientData("no data points");
    if (assignments.size() != data.size()) {
        throw LengthMismatch("assignments do not match the data");
    }
    const std::size_t dim = data.front().size();
    if (dim == 0) throw ShapeMismatch("points must have at least one dimension");
    for (const auto& row : data) {
        if (row.size() != dim) throw ShapeMismatch("ragged data rows");
    }
}

// Indices of each cluster's members, keyed by cluster id, insertion-ordered
// by id for determinism.
std::map<std::size_t, std::vector<std::size_t>> group_by_cluster(
    std::span<const std::size_t> assignments) {
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        groups[assignments[i]].push_back(i);
    }
    return groups;
}

double entropy(const std::map<int, std::size_t>& counts, double n) {
    double h = 0.0;
    for (const auto& [label, count] : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        h -= p * std::log(p);
    }
    return h;
}

} // namespace

double davies_bouldin(const std::vector<std::vector<double>>& data,
                      std::span<const std::size_t> assignments,
                      const std::vector<std::vector<double>>& centroids) {
    check_points(data, assignments);
    for (std::size_t a : assignments) {
        if (a >= centroids.size()) throw ShapeMismatch("assignment index outside centroid list");
    }
    for (const auto& c : centroids) {
        if (c.size() != data.front().size()) {
            throw ShapeMismatch("centroid dimension does not match the data");
        }
    }

    const auto groups = group_by_cluster(assignments);
    if (groups.size() < 2) {
        throw DegenerateClusters("davies_bouldin needs at least two non-empty clusters");
    }

    std::vector<std::size_t> ids;
    std::vector<double> scatter;
    for (const auto& [id, members] : groups) {
        double mean_dist = 0.0;
        for (std::size_t i : members) mean_dist += distance(data[i], centroids[id]);
        ids.push_back(id);
        scatter.push_back(mean_dist / static_cast<double>(members.size()));
    }

    double total = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            const double separation = distance(centroids[ids[i]], centroids[ids[j]]);
            if (separation <= 0.0) {
                throw DegenerateClusters("davies_bouldin: coincident centroids");
            }
            worst = std::max(worst, (scatter[i] + scatter[j]) / separation);
        }
        total += worst;
    }
    return total / static_cast<double>(ids.size());
}

HomogeneityCompleteness homogeneity_completeness(std::span<const int> truth,
                                                 std::span<const int> clusters) {
    if (truth.size() != clusters.size()) {
        throw LengthMismatch("homogeneity_completeness: sequence lengths differ");
    }
    if (truth.empty()) throw InsufficientData("homogeneity_completeness needs samples");

    const double n = static_cast<double>(truth.size());
    std::map<int, std::size_t> truth_counts;
    std::map<int, std::size_t> cluster_counts;
    std::map<std::pair<int, int>, std::size_t> joint;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        truth_counts[truth[i]] += 1;
        cluster_counts[clusters[i]] += 1;
        joint[{truth[i], clusters[i]}] += 1;
    }

    const double h_truth = entropy(truth_counts, n);
    const double h_cluster = entropy(cluster_counts, n);

    // H(truth | clusters) and H(clusters | truth) from the joint counts.
    double h_truth_given_cluster = 0.0;
    double h_cluster_given_truth = 0.0;
    for (const auto& [pair, count] : joint) {
        const double p_joint = static_cast<double>(count) / n;
        const double p_cluster =
            static_cast<double>(cluster_counts[pair.second]) / n;
        const double p_truth = static_cast<double>(truth_counts[pair.first]) / n;
        h_truth_given_cluster -= p_joint * std::log(p_joint / p_cluster);
        h_cluster_given_truth -= p_joint * std::log(p_joint / p_truth);
    }

    HomogeneityCompleteness out;
    out.homogeneity = h_truth > 0.0 ? 1.0 - h_truth_given_cluster / h_truth : 1.0;
    out.completeness = h_cluster > 0.0 ? 1.0 - h_cluster_given_truth / h_cluster : 1.0;
    return out;
}

double jaccard_similarity(std::span<const int> truth, std::span<const int> clusters) {
    if (truth.size() != clusters.size()) {
        throw LengthMismatch("jaccard_similarity: sequence lengths differ");
    }
    if (truth.size() < 2) throw InsufficientData("jaccard_similarity needs at least 2 samples");

    std::size_t both = 0;
    std::size_t either = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (std::size_t j = i + 1; j < truth.size(); ++j) {
            const bool together_truth = truth[i] == truth[j];
            const bool together_cluster = clusters[i] == clusters[j];
            if (together_truth && together_cluster) ++both;
            if (together_truth || together_cluster) ++either;
        }
    }
    if (either == 0) return 1.0;  // no pair is together anywhere: labelings agree
    return static_cast<double>(both) / static_cast<double>(either);
}

double silhouette(const std::vector<std::vector<double>>& data,
                  std::span<const std::size_t> assignments) {
    check_points(data, assignments);
    const auto groups = group_by_cluster(assignments);
    if (groups.size() < 2) throw DegenerateClusters("silhouette needs at least two clusters");

    const std::size_t n = data.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& own = groups.at(assignments[i]);
        if (own.size() == 1) continue;  // singleton scores 0

        double a = 0.0;
        for (std::size_t j : own) {
            if (j != i) a += distance(data[i], data[j]);
        }
        a /= static_cast<double>(own.size() - 1);

        double b = std::numeric_limits<double>::infinity();
        for (const auto& [id, members] : groups) {
            if (id == assignments[i]) continue;
            double mean_dist = 0.0;
            for (std::size_t j : members) mean_dist += distance(data[i], data[j]);
            b = std::min(b, mean_dist / static_cast<double>(members.size()));
        }

        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double dunn_index(const std::vector<std::vector<double>>& data,
                  std::span<const std::size_t> assignments) {
    check_points(data, assignments);
    const auto groups = group_by_cluster(assignments);
    if (groups.size() < 2) throw DegenerateClusters("dunn_index needs at least two clusters");

    double max_diameter = 0.0;
    for (const auto& [id, members] : groups) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                max_diameter = std::max(max_diameter, distance(data[members[i]], data[members[j]]));
            }
        }
    }
    if (max_diameter <= 0.0) {
        throw ZeroDiameter("dunn_index: every cluster has zero diameter");
    }

    double min_separation = std::numeric_limits<double>::infinity();
    std::vector<const std::vector<std::size_t>*> member_lists;
    for (const auto& [id, members] : groups) member_lists.push_back(&members);
    for (std::size_t a = 0; a < member_lists.size(); ++a) {
        for (std::size_t b = a + 1; b < member_lists.size(); ++b) {
            for (std::size_t i : *member_lists[a]) {
                for (std::size_t j : *member_lists[b]) {
                    min_separation = std::min(min_separation, distance(data[i], data[j]));
                }
            }
        }
    }
    return min_separation / max_diameter;
}

RegressionStats ols_regression(std::span<const double> x, std::span<const double> y) {
    std::vector<std::vector<double>> predictors(x.size(), std::vector<double>(1));
    for (std::size_t i = 0; i < x.size(); ++i) predictors[i][0] = x[i];
    return ols_regression(predictors, y);
}

RegressionStats ols_regression(const std::vector<std::vector<double>>& predictors,
                               std::span<const double> y) {
    if (predictors.size() != y.size()) {
        throw LengthMismatch("ols_regression: predictors and response differ in length");
    }
    if (predictors.empty()) throw InsufficientData("ols_regression needs samples");
    const std::size_t n = predictors.size();
    const std::size_t p = predictors.front().size();
    if (p == 0) throw ShapeMismatch("ols_regression needs at least one predictor");
    for (const auto& row : predictors) {
        if (row.size() != p) throw ShapeMismatch("ols_regression: ragged predictor rows");
    }
    if (n <= p + 1) {
        throw InsufficientData("ols_regression needs more samples than coefficients");
    }

    // Normal equations (X'X) beta = X'y with an intercept column prepended,
    // solved by Gaussian elimination with partial pivoting.
    const std::size_t cols = p + 1;
    std::vector<std::vector<double>> xtx(cols, std::vector<double>(cols, 0.0));
    std::vector<double> xty(cols, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(cols);
        row[0] = 1.0;
        for (std::size_t f = 0; f < p; ++f) row[f + 1] = predictors[i][f];
        for (std::size_t a = 0; a < cols; ++a) {
            for (std::size_t b = 0; b < cols; ++b) xtx[a][b] += row[a] * row[b];
            xty[a] += row[a] * y[i];
        }
    }

    double scale = 0.0;
    for (const auto& row : xtx) {
        for (double v : row) scale = std::max(scale, std::abs(v));
    }
    const double pivot_floor = 1e-12 * std::max(scale, 1.0);

    std::vector<double> beta = xty;
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < cols; ++r) {
            if (std::abs(xtx[r][col]) > std::abs(xtx[pivot][col])) pivot = r;
        }
        if (std::abs(xtx[pivot][col]) < pivot_floor) {
            throw SingularDesign("ols_regression: predictors are collinear");
        }
        std::swap(xtx[col], xtx[pivot]);
        std::swap(beta[col], beta[pivot]);
        for (std::size_t r = col + 1; r < cols; ++r) {
            const double factor = xtx[r][col] / xtx[col][col];
            for (std::size_t c = col; c < cols; ++c) xtx[r][c] -= factor * xtx[col][c];
            beta[r] -= factor * beta[col];
        }
    }
    for (std::size_t col = cols; col-- > 0;) {
        for (std::size_t c = col + 1; c < cols; ++c) beta[col] -= xtx[col][c] * beta[c];
        beta[col] /= xtx[col][col];
    }

    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(n);

    double sse = 0.0;
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = beta[0];
        for (std::size_t f = 0; f < p; ++f) fit += beta[f + 1] * predictors[i][f];
        const double residual = y[i] - fit;
        sse += residual * residual;
        sst += (y[i] - y_mean) * (y[i] - y_mean);
    }

    RegressionStats stats;
    const double r2 = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 0.0;
    stats.r_square = r2;
    stats.multiple_r = std::sqrt(r2);
    const double dof = static_cast<double>(n - p - 1);
    stats.adjusted_r_square = 1.0 - (1.0 - r2) * static_cast<double>(n - 1) / dof;
    stats.standard_error = std::sqrt(std::max(sse, 0.0) / dof);
    return stats;
}

std::string EvaluationReport::to_json() const {
    nlohmann::json j;
    j["davies_bouldin"] = davies_bouldin;
    j["homogeneity"] = homogeneity;
    j["completeness"] = completeness;
    j["jaccard"] = jaccard;
    j["silhouette"] = silhouette;
    j["dunn"] = dunn;
    j["accuracy"] = accuracy;
    j["seed"] = seed;
    j["training_percent"] = training_percent;
    j["epochs"] = epochs;
    j["method"] = method;
    j["excluded_clips"] = excluded_clips;
    return j.dump(2);
}

EvaluationReport EvaluationReport::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("report JSON: ") + e.what());
    }
    EvaluationReport report;
    try {
        report.davies_bouldin = j.at("davies_bouldin").get<double>();
        report.homogeneity = j.at("homogeneity").get<double>();
        report.completeness = j.at("completeness").get<double>();
        report.jaccard = j.at("jaccard").get<double>();
        report.silhouette = j.at("silhouette").get<double>();
        report.dunn = j.at("dunn").get<double>();
        report.accuracy = j.at("accuracy").get<double>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.training_percent = j.at("training_percent").get<int>();
        report.epochs = j.at("epochs").get<int>();
        report.method = j.at("method").get<std::string>();
        report.excluded_clips = j.at("excluded_clips").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("report JSON: ") + e.what());
    }
    return report;
}

std::string EvaluationReport::csv_header() {
    return "davies_bouldin,homogeneity,completeness,jaccard,silhouette,dunn,accuracy,"
           "seed,training_percent,epochs,method,excluded_clips";
}

std::string EvaluationReport::to_csv_row() const {
    std::string out;
    out += detail::format_g17(davies_bouldin);
    out += ',';
    out += detail::format_g17(homogeneity);
    out += ',';
    out += detail::format_g17(completeness);
    out += ',';
    out += detail::format_g17(jaccard);
    out += ',';
    out += detail::format_g17(silhouette);
    out += ',';
    out += detail::format_g17(dunn);
    out += ',';
    out += detail::format_g17(accuracy);
    out += ',';
    out += std::to_string(seed);
    out += ',';
    out += std::to_string(training_percent);
    out += ',';
    out += std::to_string(epochs);
    out += ',';
    out += method;
    out += ',';
    out += std::to_string(excluded_clips);
    return out;
}

} // namespace vbp
