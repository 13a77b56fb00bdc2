#include "vbp/optimizer.hpp"

#include "vbp/errors.hpp"
#include "text_format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

namespace vbp {

namespace {

void check_config(const FfiConfig& cfg) {
    if (cfg.dimension < 1) throw InvalidConfig("dimension must be >= 1");
    if (cfg.bounds.size() != static_cast<std::size_t>(cfg.dimension)) {
        throw InvalidConfig("bounds must cover every dimension");
    }
    for (const auto& [lo, hi] : cfg.bounds) {
        if (!(lo < hi)) throw InvalidConfig("each bound needs lo < hi");
    }
    if (cfg.population_size < 4) {
        // The exploration move samples three partners distinct from the mover.
        throw InvalidConfig("population_size must be >= 4");
    }
    if (cfg.max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
    if (std::isnan(cfg.objective_tolerance)) throw InvalidConfig("objective_tolerance is NaN");
    if (!(cfg.a4_epsilon > 0.0)) throw InvalidConfig("a4_epsilon must be positive");
}

double checked_eval(const ObjectiveFunction& objective, std::span<const double> position) {
    const double value = objective.evaluate(position);
    if (!std::isfinite(value)) {
        throw ObjectiveNotFinite("objective returned a non-finite value");
    }
    return value;
}

void clamp_to_bounds(std::vector<double>& position, const Bounds& bounds) {
    for (std::size_t d = 0; d < position.size(); ++d) {
        position[d] = std::clamp(position[d], bounds[d].first, bounds[d].second);
    }
}

// Greedy acceptance: the candidate replaces the agent only when strictly
// better; the global best is refreshed on adoption.
bool try_accept(Agent& agent, std::vector<double> candidate,
                const ObjectiveFunction& objective, const Bounds& bounds, Agent& best) {
    clamp_to_bounds(candidate, bounds);
    const double value = checked_eval(objective, candidate);
    if (value < agent.objective) {
        agent.position = std::move(candidate);
        agent.objective = value;
        if (value < best.objective) best = agent;
        return true;
    }
    return false;
}

std::size_t draw_distinct(Rng& rng, std::size_t n, std::initializer_list<std::size_t> taken) {
    for (;;) {
        const std::size_t i = rng.index(n);
        bool clash = false;
        for (std::size_t t : taken) {
            if (t == i) {
                clash = true;
                break;
            }
        }
        if (!clash) return i;
    }
}

std::vector<double> group_mean(const std::vector<Agent>& agents, std::size_t dim) {
    std::vector<double> mean(dim, 0.0);
    for (const Agent& agent : agents) {
        for (std::size_t d = 0; d < dim; ++d) mean[d] += agent.position[d];
    }
    for (double& v : mean) v /= static_cast<double>(agents.size());
    return mean;
}

std::vector<double> population_mean(const Population& pop, std::size_t dim) {
    std::vector<double> mean(dim, 0.0);
    for (const Agent& agent : pop.fact_finders) {
        for (std::size_t d = 0; d < dim; ++d) mean[d] += agent.position[d];
    }
    for (const Agent& agent : pop.chasers) {
        for (std::size_t d = 0; d < dim; ++d) mean[d] += agent.position[d];
    }
    const double count = static_cast<double>(pop.fact_finders.size() + pop.chasers.size());
    for (double& v : mean) v /= count;
    return mean;
}

void run_full_iteration(Population& pop, const ObjectiveFunction& objective,
                        const FfiConfig& cfg, Rng& rng) {
    const std::size_t count = pop.fact_finders.size();
    const auto dim = static_cast<std::size_t>(cfg.dimension);

    // Phase 1: exploration. Each searcher moves relative to three partners.
    for (std::size_t tau = 0; tau < count; ++tau) {
        const std::size_t d = draw_distinct(rng, count, {tau});
        const std::size_t q = draw_distinct(rng, count, {tau, d});
        const std::size_t p = draw_distinct(rng, count, {tau, d, q});
        std::vector<double> amplitude(dim);
        for (double& a : amplitude) a = (rng.uniform01() - 0.5) * 2.0;
        try_accept(pop.fact_finders[tau],
                   suspect_first_move(pop.fact_finders[tau].position,
                                      pop.fact_finders[d].position,
                                      pop.fact_finders[q].position,
                                      pop.fact_finders[p].position, amplitude),
                   objective, cfg.bounds, pop.best);
    }

    // Phase 2: refinement around the best location, gated per agent by its
    // standing in the group.
    std::vector<double> objectives(count);
    for (std::size_t i = 0; i < count; ++i) objectives[i] = pop.fact_finders[i].objective;
    const std::vector<double> probs = location_probability(objectives);
    for (std::size_t tau = 0; tau < count; ++tau) {
        if (rng.uniform01() >= probs[tau]) continue;
        const std::size_t b = draw_distinct(rng, count, {tau});
        const std::size_t p = draw_distinct(rng, count, {tau, b});
        const double a5 = rng.uniform01();
        try_accept(pop.fact_finders[tau],
                   suspect_second_move(pop.best.position, pop.fact_finders[b].position,
                                       pop.fact_finders[tau].position,
                                       pop.fact_finders[p].position, a5),
                   objective, cfg.bounds, pop.best);
    }

    // Phase 3: guide update around the mean of the whole population. The
    // candidate also feeds the blended pursuit move below, whether or not
    // the guide itself adopts it.
    const std::vector<double> mean_all = population_mean(pop, dim);
    const double teaching_factor = static_cast<double>(1 + rng.index(2));
    std::vector<double> amplitude1(dim);
    for (double& a : amplitude1) a = rng.uniform01();
    std::vector<double> guide_candidate =
        instructor_move(pop.instructor.position, mean_all, teaching_factor, amplitude1);
    clamp_to_bounds(guide_candidate, cfg.bounds);
    const double guide_value = checked_eval(objective, guide_candidate);
    if (guide_value < pop.instructor.objective) {
        pop.instructor.position = guide_candidate;
        pop.instructor.objective = guide_value;
        if (guide_value < pop.best.objective) pop.best = pop.instructor;
    }

    // Phase 4: pursuit relative to the pursuers' own mean, then an
    // equal-weight blend with the guide candidate.
    const std::vector<double> pursuer_mean = group_mean(pop.chasers, dim);
    for (std::size_t tau = 0; tau < count; ++tau) {
        const double a3 = rng.uniform01();
        const double a4 = clamp_away_from_zero(rng.uniform(-1.0, 1.0), cfg.a4_epsilon);
        std::vector<double> pursuit = chaser_move(pop.chasers[tau].position, pursuer_mean, a3, a4);
        clamp_to_bounds(pursuit, cfg.bounds);
        const double pursuit_value = checked_eval(objective, pursuit);
        if (pursuit_value < pop.chasers[tau].objective) {
            pop.chasers[tau].position = pursuit;
            pop.chasers[tau].objective = pursuit_value;
            if (pursuit_value < pop.best.objective) pop.best = pop.chasers[tau];
        }
        try_accept(pop.chasers[tau], combined_move(pursuit, guide_candidate), objective,
                   cfg.bounds, pop.best);
    }
}

// Ablation baseline: the guide rule applied to every agent against the
// population mean snapshotted at the top of the iteration.
void run_instructor_only_iteration(Population& pop, const ObjectiveFunction& objective,
                                   const FfiConfig& cfg, Rng& rng) {
    const auto dim = static_cast<std::size_t>(cfg.dimension);
    const std::vector<double> mean_all = population_mean(pop, dim);

    const auto move_agent = [&](Agent& agent) {
        const double teaching_factor = static_cast<double>(1 + rng.index(2));
        std::vector<double> amplitude(dim);
        for (double& a : amplitude) a = rng.uniform01();
        try_accept(agent, instructor_move(agent.position, mean_all, teaching_factor, amplitude),
                   objective, cfg.bounds, pop.best);
    };
    for (Agent& agent : pop.fact_finders) move_agent(agent);
    for (Agent& agent : pop.chasers) move_agent(agent);
    move_agent(pop.instructor);
}

} // namespace

std::vector<double> suspect_first_move(std::span<const double> position,
                                       std::span<const double> informant_d,
                                       std::span<const double> informant_q,
                                       std::span<const double> informant_p,
                                       std::span<const double> amplitude) {
    const std::size_t dim = position.size();
    if (informant_d.size() != dim || informant_q.size() != dim || informant_p.size() != dim ||
        amplitude.size() != dim) {
        throw LengthMismatch("suspect_first_move: all positions must share one dimension");
    }
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] = position[i] +
                 amplitude[i] * (informant_d[i] - (informant_q[i] + informant_p[i]) / 2.0);
    }
    return out;
}

std::vector<double> location_probability(std::span<const double> objectives) {
    if (objectives.empty()) throw InvalidConfig("location_probability needs objectives");
    const auto [lo, hi] = std::minmax_element(objectives.begin(), objectives.end());
    // A flat group keeps every probability at 1 so all agents stay eligible
    // for the follow-up move instead of stalling.
    std::vector<double> probs(objectives.size(), 1.0);
    if (*hi > *lo) {
        for (std::size_t i = 0; i < objectives.size(); ++i) {
            probs[i] = (*hi - objectives[i]) / (*hi - *lo);
        }
    }
    return probs;
}

std::vector<double> suspect_second_move(std::span<const double> best_position,
                                        std::span<const double> informant_b,
                                        std::span<const double> self_position,
                                        std::span<const double> informant_p,
                                        double a5) {
    const std::size_t dim = best_position.size();
    if (informant_b.size() != dim || self_position.size() != dim || informant_p.size() != dim) {
        throw LengthMismatch("suspect_second_move: all positions must share one dimension");
    }
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] = best_position[i] + informant_b[i] + a5 * (self_position[i] - informant_p[i]);
    }
    return out;
}

std::vector<double> chaser_move(std::span<const double> position,
                                std::span<const double> pursuer_mean, double a3, double a4) {
    if (pursuer_mean.size() != position.size()) {
        throw LengthMismatch("chaser_move: mean and position must share one dimension");
    }
    if (a4 == 0.0) throw InvalidConfig("chaser_move: a4 must be nonzero");
    std::vector<double> out(position.size());
    for (std::size_t i = 0; i < position.size(); ++i) {
        out[i] = position[i] + (a3 - 0.5) * 2.0 * pursuer_mean[i] / a4;
    }
    return out;
}

std::vector<double> instructor_move(std::span<const double> position,
                                    std::span<const double> population_mean,
                                    double teaching_factor, std::span<const double> amplitude) {
    const std::size_t dim = position.size();
    if (population_mean.size() != dim || amplitude.size() != dim) {
        throw LengthMismatch("instructor_move: all vectors must share one dimension");
    }
    if (teaching_factor != 1.0 && teaching_factor != 2.0) {
        throw InvalidConfig("instructor_move: teaching factor must be 1 or 2");
    }
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] = position[i] + amplitude[i] * (position[i] - teaching_factor * population_mean[i]);
    }
    return out;
}

std::vector<double> combined_move(std::span<const double> chaser_candidate,
                                  std::span<const double> instructor_candidate) {
    if (chaser_candidate.size() != instructor_candidate.size()) {
        throw LengthMismatch("combined_move: candidates must share one dimension");
    }
    std::vector<double> out(chaser_candidate.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = 0.5 * chaser_candidate[i] + 0.5 * instructor_candidate[i];
    }
    return out;
}

double clamp_away_from_zero(double a4, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidConfig("clamp_away_from_zero: epsilon must be positive");
    if (std::abs(a4) >= epsilon) return a4;
    return std::signbit(a4) ? -epsilon : epsilon;
}

Population init_population(const FfiConfig& cfg, const ObjectiveFunction& objective, Rng& rng) {
    check_config(cfg);
    const auto count = static_cast<std::size_t>(cfg.population_size);
    const auto dim = static_cast<std::size_t>(cfg.dimension);

    Population pop;
    const auto spawn = [&]() {
        Agent agent;
        agent.position.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            agent.position[d] = rng.uniform(cfg.bounds[d].first, cfg.bounds[d].second);
        }
        agent.objective = checked_eval(objective, agent.position);
        return agent;
    };
    pop.fact_finders.reserve(count);
    pop.chasers.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pop.fact_finders.push_back(spawn());
    for (std::size_t i = 0; i < count; ++i) pop.chasers.push_back(spawn());

    pop.best = pop.fact_finders.front();
    for (const Agent& agent : pop.fact_finders) {
        if (agent.objective < pop.best.objective) pop.best = agent;
    }
    for (const Agent& agent : pop.chasers) {
        if (agent.objective < pop.best.objective) pop.best = agent;
    }
    pop.instructor = pop.best;
    return pop;
}

OptimizeResult optimize(const ObjectiveFunction& objective, const FfiConfig& cfg) {
    check_config(cfg);
    Rng rng(cfg.seed);
    Population pop = init_population(cfg, objective, rng);

    OptimizeResult result;
    for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
        pop.iteration = iteration;
        if (pop.best.objective <= cfg.objective_tolerance) {
            result.trace.push_back(pop.best.objective);
            break;
        }
        if (cfg.scheme == UpdateScheme::full) {
            run_full_iteration(pop, objective, cfg, rng);
        } else {
            run_instructor_only_iteration(pop, objective, cfg, rng);
        }
        result.trace.push_back(pop.best.objective);
    }
    result.best = pop.best;
    result.iterations = static_cast<int>(result.trace.size());
    return result;
}

void write_trace_csv(const std::filesystem::path& path, std::span<const double> trace) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << "iteration,best_objective\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << i + 1 << ',' << detail::format_g17(trace[i]) << '\n';
    }
    if (!out) throw IoFailure("write failed for " + path.string());
}

} // namespace vbp
