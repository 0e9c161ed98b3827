#include "cupcast/elo.hpp"

#include <cmath>
#include <stdexcept>

#include "cupcast/errors.hpp"

namespace cupcast {

double EloState::at(const std::string& team) const {
    auto it = ratings.find(team);
    if (it == ratings.end()) throw DataError("no rating for team '" + team + "'");
    return it->second;
}

double expected_score(double rating_a, double rating_b) {
    double d = rating_a - rating_b;
    return 1.0 / (std::pow(10.0, -d / 400.0) + 1.0);
}

double goal_multiplier(int margin) {
    if (margin < 0) throw std::invalid_argument("goal_multiplier: margin must be >= 0");
    if (margin <= 1) return 1.0;
    if (margin == 2) return 1.5;
    return (11.0 + margin) / 8.0;
}

void update_with_outcome(EloState& state, const std::string& team_a,
                         const std::string& team_b, int goals_a, int goals_b,
                         double outcome_a) {
    if (goals_a < 0 || goals_b < 0) throw std::invalid_argument("negative goal count");
    if (outcome_a != 0.0 && outcome_a != 0.5 && outcome_a != 1.0) {
        throw std::invalid_argument("outcome must be 0, 0.5 or 1");
    }
    double ra = state.at(team_a);
    double rb = state.at(team_b);
    double delta = state.k_factor * goal_multiplier(std::abs(goals_a - goals_b)) *
                   (outcome_a - expected_score(ra, rb));
    state.ratings[team_a] = ra + delta;
    state.ratings[team_b] = rb - delta;
}

void update(EloState& state, const std::string& team_a, const std::string& team_b,
            int goals_a, int goals_b) {
    double outcome = goals_a > goals_b ? 1.0 : (goals_a == goals_b ? 0.5 : 0.0);
    update_with_outcome(state, team_a, team_b, goals_a, goals_b, outcome);
}

EloState updated(EloState state, const std::string& team_a, const std::string& team_b,
                 int goals_a, int goals_b) {
    update(state, team_a, team_b, goals_a, goals_b);
    return state;
}

EloState reset(const EloTable& base, double k_factor) {
    EloState s;
    s.ratings = base.ratings;
    s.k_factor = k_factor;
    return s;
}

}  // namespace cupcast
