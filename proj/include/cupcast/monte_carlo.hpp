#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cupcast/config.hpp"
#include "cupcast/match_model.hpp"
#include "cupcast/tournament.hpp"

namespace cupcast {

// Aggregated results of n_runs independent tournaments. Everything is an
// integer count indexed by the configuration's team order, so merging partial
// results is exact and order-independent.
struct SimulationSummary {
    std::uint64_t n_runs = 0;
    std::uint64_t seed = 0;
    Variant variant = Variant::WithThirds;
    std::vector<std::string> team_ids;
    std::vector<std::string> team_names;
    std::vector<char> team_group;

    // Cumulative stage counts: a champion also counts for every earlier stage.
    std::vector<std::int64_t> champion;
    std::vector<std::int64_t> reached_final;
    std::vector<std::int64_t> reached_semifinal;
    std::vector<std::int64_t> reached_quarterfinal;
    std::vector<std::int64_t> reached_last16;

    // Group outcomes; ranks 1..4 sum to n_runs for every team.
    std::vector<std::int64_t> group_rank[4];
    std::vector<std::int64_t> third_qualified;
    std::vector<std::int64_t> advanced;  // left the group stage alive
};

// Runs n tournaments with per-run streams derived from (seed, run index).
// The jobs parameter only distributes work; results are identical for any
// worker count.
SimulationSummary run_simulations(const TournamentConfig& config, const TeamModelMap& models,
                                  const EloTable& base, std::uint64_t n, std::uint64_t seed,
                                  Variant variant, int jobs = 1);

struct StageProbabilities {
    std::uint64_t n_runs = 0;
    std::vector<std::string> team_ids;
    std::vector<std::string> team_names;
    // champion, final, semifinal, quarterfinal, last16; rows sorted by
    // champion probability (then the later columns, then id).
    std::vector<std::array<double, 5>> p;
};

StageProbabilities stage_probabilities(const SimulationSummary& summary);

struct GroupRow {
    std::string team_id;
    std::string team_name;
    std::array<double, 4> rank;  // P(1st) .. P(4th)
    double advanced = 0.0;
};

struct GroupProbabilities {
    std::uint64_t n_runs = 0;
    std::vector<std::pair<char, std::vector<GroupRow>>> groups;  // label order
};

GroupProbabilities group_probabilities(const SimulationSummary& summary);

// Per-team stage probability differences, a minus b, in percentage points.
// Rows are ordered by b's champion probability.
struct StageDiff {
    std::vector<std::string> team_ids;
    std::vector<std::string> team_names;
    std::vector<std::array<double, 5>> p_a;
    std::vector<std::array<double, 5>> p_b;
    std::vector<std::array<double, 5>> delta_pp;
};

StageDiff diff_summaries(const SimulationSummary& a, const SimulationSummary& b);

// Binomial standard error sqrt(p (1 - p) / n).
double standard_error(double p, std::uint64_t n);

}  // namespace cupcast
