#pragma once

#include <map>
#include <string>

#include "cupcast/types.hpp"

namespace cupcast {

// Mutable rating state evolved inside a single simulated tournament.
struct EloState {
    std::map<std::string, double> ratings;
    double k_factor = 50.0;

    double at(const std::string& team) const;
};

// Win expectancy of the first team: 1 / (10^(-d/400) + 1) with d = r_a - r_b.
double expected_score(double rating_a, double rating_b);

// Margin-of-victory scaling: 1 for margins up to one goal, 1.5 for two,
// (11 + margin) / 8 beyond that. Negative margins are invalid.
double goal_multiplier(int margin);

// Applies one result. Team a gains exactly what team b loses, so the rating
// pool is conserved. goals are the team's full-time score; a draw credits
// half a win to each side.
void update(EloState& state, const std::string& team_a, const std::string& team_b,
            int goals_a, int goals_b);

// Like update but with the match outcome overridden (e.g. a shootout winner
// credited as a win despite level scores). outcome_a is 1, 0.5 or 0.
void update_with_outcome(EloState& state, const std::string& team_a,
                         const std::string& team_b, int goals_a, int goals_b,
                         double outcome_a);

// Functional form of update, for callers that want the original kept.
EloState updated(EloState state, const std::string& team_a, const std::string& team_b,
                 int goals_a, int goals_b);

// Fresh state from the baseline table. Every simulation run starts here, so
// rating drift never leaks across runs.
EloState reset(const EloTable& base, double k_factor);

}  // namespace cupcast
