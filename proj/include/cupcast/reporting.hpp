#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cupcast/data_ingestion.hpp"
#include "cupcast/match_model.hpp"
#include "cupcast/monte_carlo.hpp"

namespace cupcast {

enum class TableFormat { Csv, Json, Text };

// Fixed-decimal rendering with ties rounded away from zero; the workhorse for
// byte-deterministic tables. format_percent maps a probability to "15.40".
std::string format_fixed(double value, int decimals);
std::string format_percent(double probability);

struct RegressionCurve {
    std::string team_id;
    std::string team_name;
    std::string kind;  // "attack" or "concede"
    std::vector<std::pair<double, double>> fitted;  // (opponent rating, mean goals)
    std::vector<std::pair<double, int>> observed;   // (opponent rating, goals)
};

// Fitted mean curve over a rating grid plus the observed points behind it.
RegressionCurve regression_curve(const TeamModel& model, std::span<const HistoryRow> history,
                                 const std::string& kind, std::span<const double> grid);

struct TeamGofRow {
    std::string team_id;
    std::string team_name;
    int n_matches = 0;
    bool fallback = false;
    // Pearson chi-square of each regression against the team's own matches;
    // absent when there are no residual degrees of freedom.
    std::optional<GofResult> attack, concede, nested;
    // Deviance tests of the team's own fits; absent for pooled coefficients.
    std::optional<GofResult> attack_dev, concede_dev, nested_dev;
};

struct GofReport {
    std::vector<TeamGofRow> rows;
    std::optional<double> mean_attack_p, mean_concede_p, mean_nested_p, mean_p;
};

GofReport gof_report(const TeamModelMap& models,
                     const std::map<std::string, std::vector<HistoryRow>>& histories);

// Score matrix oriented so rows follow first_team regardless of which side
// the model treats as stronger.
struct ScoreMatrixTable {
    std::string row_team, row_name;
    std::string col_team, col_name;
    int max_goals = 0;
    Eigen::MatrixXd probs;  // (max_goals + 2)^2, last row/column absorb the tails
};

ScoreMatrixTable oriented_score_matrix(const MatchForecast& forecast, int max_goals,
                                       const std::string& first_team,
                                       const TeamModelMap& models);

std::string render_stage_table(const StageProbabilities& table, TableFormat format);
std::string render_group_table(const GroupProbabilities& table, char label, TableFormat format);
std::string render_diff_table(const StageDiff& diff, TableFormat format);
std::string render_score_matrix(const ScoreMatrixTable& table, TableFormat format);
std::string render_gof(const GofReport& report, TableFormat format);
std::string render_curve(const RegressionCurve& curve, TableFormat format);

// Raw counts as JSON, for machine consumption.
nlohmann::json summary_to_json(const SimulationSummary& summary);

}  // namespace cupcast
