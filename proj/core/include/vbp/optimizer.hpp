#pragma once

#include "vbp/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace vbp {

class ObjectiveFunction {
public:
    virtual ~ObjectiveFunction() = default;
    virtual double evaluate(std::span<const double> position) const = 0;
};

// Adapter so plain callables can be handed to optimize().
class FunctionObjective final : public ObjectiveFunction {
public:
    explicit FunctionObjective(std::function<double(std::span<const double>)> fn)
        : fn_(std::move(fn)) {}

    double evaluate(std::span<const double> position) const override { return fn_(position); }

private:
    std::function<double(std::span<const double>)> fn_;
};

struct Agent {
    std::vector<double> position;
    double objective = std::numeric_limits<double>::infinity();
};

using Bounds = std::vector<std::pair<double, double>>;

enum class UpdateScheme {
    full,             // searcher moves, gated refinement, guide, pursuit phases
    instructor_only,  // every agent moves by the guide rule only (ablation baseline)
};

struct FfiConfig {
    int population_size = 20;  // searchers and pursuers each; must be >= 4
    int max_iterations = 100;
    int dimension = 0;
    Bounds bounds;  // per-dimension (lo, hi), lo < hi
    double objective_tolerance = 0.0;
    double a4_epsilon = 0.1;  // lower clamp on |A4| so the pursuit step stays finite
    std::uint64_t seed = 0;
    UpdateScheme scheme = UpdateScheme::full;
};

struct Population {
    std::vector<Agent> fact_finders;
    std::vector<Agent> chasers;
    Agent instructor;
    Agent best;
    int iteration = 0;
};

struct OptimizeResult {
    Agent best;
    std::vector<double> trace;  // best objective recorded once per iteration
    int iterations = 0;         // iterations actually run (== trace.size())
};

// --- move formulas (pure; candidates are produced before any clamping) ------

// D' = D + A o (D_d - (D_q + D_p) / 2), with A drawn per dimension.
std::vector<double> suspect_first_move(std::span<const double> position,
                                       std::span<const double> informant_d,
                                       std::span<const double> informant_q,
                                       std::span<const double> informant_p,
                                       std::span<const double> amplitude);

// Probability that each agent gets a refinement move: the best objective maps
// to 1, the worst to 0, and a flat group gets all ones so it keeps moving.
std::vector<double> location_probability(std::span<const double> objectives);

// D'' = D_best + D_b + a5 * (D_self - D_p).
std::vector<double> suspect_second_move(std::span<const double> best_position,
                                        std::span<const double> informant_b,
                                        std::span<const double> self_position,
                                        std::span<const double> informant_p,
                                        double a5);

// D' = D + (a3 - 0.5) * 2 * mean_of_pursuers / a4 (per dimension).
std::vector<double> chaser_move(std::span<const double> position,
                                std::span<const double> pursuer_mean,
                                double a3, double a4);

// D' = D + A1 o (D - T * population_mean), teaching factor T in {1, 2}.
std::vector<double> instructor_move(std::span<const double> position,
                                    std::span<const double> population_mean,
                                    double teaching_factor,
                                    std::span<const double> amplitude);

// Equal-weight blend of the pursuit and guide candidates.
std::vector<double> combined_move(std::span<const double> chaser_candidate,
                                  std::span<const double> instructor_candidate);

// Keeps |a4| >= epsilon while preserving its sign (0 counts as positive).
double clamp_away_from_zero(double a4, double epsilon);

// ----------------------------------------------------------------------------

Population init_population(const FfiConfig& cfg, const ObjectiveFunction& objective, Rng& rng);

// Runs the population search. The trace records the best objective after the
// tolerance check of each iteration, so a run that stops immediately still
// has one entry. Raises ObjectiveNotFinite if any evaluation is NaN/inf.
OptimizeResult optimize(const ObjectiveFunction& objective, const FfiConfig& cfg);

// One "iteration,best_objective" row per trace entry, deterministic bytes.
void write_trace_csv(const std::filesystem::path& path, std::span<const double> trace);

} // namespace vbp
