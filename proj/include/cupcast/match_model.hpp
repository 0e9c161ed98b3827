#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cupcast/data_ingestion.hpp"
#include "cupcast/glm.hpp"
#include "cupcast/types.hpp"

namespace cupcast {

// Per-team regressions, all Poisson with log link:
//   attack:  own goals  ~ 1 + opponent rating
//   concede: goals conceded ~ 1 + opponent rating
//   nested:  own goals  ~ 1 + opponent rating + opponent goals
// The nested fit drives the weaker side's conditional scoring rate.
struct TeamModel {
    TeamId team;
    GlmFit attack;
    GlmFit concede;
    GlmFit nested;
    int n_matches = 0;
    bool fallback = false;  // pooled coefficients substituted for thin data
};

using TeamModelMap = std::map<std::string, TeamModel>;

// Fits every listed team from its match history. Teams with fewer than
// min_matches appearances get coefficients pooled over all teams' rows; if no
// team reaches the minimum the fit is refused outright.
TeamModelMap fit_team_models(std::span<const MatchRecord> records,
                             std::span<const TeamId> teams, int min_matches = 8);

// One fixture, oriented so "strong" is the higher-rated side (ties broken by
// smaller team id). The strong side scores at a fixed rate; the weak side's
// rate depends on how many the strong side scored.
struct MatchForecast {
    std::string strong;
    std::string weak;
    double strong_elo = 0.0;
    double weak_elo = 0.0;
    double lambda_strong = 0.0;   // mean goals of the stronger team
    double weak_log_base = 0.0;   // log rate of the weaker team given 0 goals
    double weak_goal_coef = 0.0;  // per-goal adjustment on the log scale
    bool swapped = false;         // true when (a, b) arrived as (weak, strong)

    double weak_rate(int strong_goals) const;
};

MatchForecast forecast(const TeamModelMap& models, const std::string& team_a, double elo_a,
                       const std::string& team_b, double elo_b);
MatchForecast forecast(const TeamModelMap& models, const EloTable& elo,
                       const std::string& team_a, const std::string& team_b);

struct Score {
    int goals_strong = 0;
    int goals_weak = 0;
};

// Strong side first from the fixed rate, weak side from the rate conditioned
// on that draw. Two rng consumptions per call.
Score simulate_match(const MatchForecast& forecast, RngStream& rng);

// (max_goals + 2)^2 probabilities; the last row/column absorb everything
// beyond max_goals, so the matrix sums to one. Rows index the strong side.
Eigen::MatrixXd score_matrix(const MatchForecast& forecast, int max_goals);

struct WinDrawLoss {
    double strong_win = 0.0;
    double draw = 0.0;
    double weak_win = 0.0;
};

WinDrawLoss win_draw_loss(const MatchForecast& forecast);

// Versioned JSON bundle round trip. Loading an unknown format version or a
// structurally broken bundle raises DataError.
void save_models(const std::filesystem::path& file, const TeamModelMap& models);
TeamModelMap load_models(const std::filesystem::path& file);

}  // namespace cupcast
