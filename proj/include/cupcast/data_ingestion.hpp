#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "cupcast/types.hpp"

namespace cupcast {

// CSV with header "date,team_a,team_b,goals_a,goals_b,elo_a,elo_b,neutral".
// Strict: any malformed row raises DataError naming the 1-based line number.
std::vector<MatchRecord> load_matches(const std::filesystem::path& file);

// Inverse of load_matches; a round trip reproduces the records exactly.
void save_matches(const std::filesystem::path& file, std::span<const MatchRecord> records);

// CSV with header "team,elo". Duplicate teams are an error.
EloTable load_elo(const std::filesystem::path& file);

// One team per line, either "ID" or "ID,Display Name". '#' lines are comments.
std::vector<TeamId> load_team_list(const std::filesystem::path& file);

// Keeps records with from <= date <= to, optionally neutral-site rows only.
// Preserves input order.
std::vector<MatchRecord> training_window(std::span<const MatchRecord> records, Date from,
                                         Date to, bool neutral_only);

// One match from a single team's perspective. opponent_goals equals
// goals_against by definition; both names exist because the regressions use
// the same number once as a response and once as a covariate.
struct HistoryRow {
    double opponent_elo = 0.0;
    int goals_for = 0;
    int goals_against = 0;
    int opponent_goals = 0;
};

// Rows for every appearance of the team, in input order.
std::vector<HistoryRow> team_history(std::span<const MatchRecord> records,
                                     const std::string& team);

}  // namespace cupcast
