#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cupcast/config.hpp"
#include "cupcast/elo.hpp"
#include "cupcast/match_model.hpp"
#include "cupcast/rng.hpp"
#include "cupcast/types.hpp"

namespace cupcast {

// Best stage a team reached, ordered so comparisons mean "got at least this far".
enum class Stage : int {
    GroupEliminated = 0,
    Last16 = 1,
    Quarterfinal = 2,
    Semifinal = 3,
    Final = 4,
    Champion = 5,
};

enum class Variant { WithThirds, WithoutThirds };

struct GroupMatchResult {
    int home = 0;  // global team indices
    int away = 0;
    int goals_home = 0;
    int goals_away = 0;
};

struct TeamGroupStats {
    int points = 0;
    int played = 0;
    int goals_for = 0;
    int goals_against = 0;

    int goal_diff() const { return goals_for - goals_against; }
};

struct GroupStanding {
    int group_index = 0;
    std::array<int, 4> members{};           // global indices in configured order
    std::array<TeamGroupStats, 4> stats{};  // aligned with members
    std::array<int, 4> ranked{};            // global indices, best first

    int at_rank(int rank) const { return ranked[rank - 1]; }
};

struct ThirdEntry {
    int team = 0;
    char group_label = 0;
    TeamGroupStats stats;
};

struct LoggedMatch {
    std::string label;  // "group A", "R16-3", "QF-1", ...
    int home = 0;
    int away = 0;
    int goals_home = 0;
    int goals_away = 0;
    bool shootout = false;  // knockout tie decided after a level score
};

struct TournamentOutcome {
    std::vector<Stage> stage;        // per team index
    std::vector<int> group_rank;     // 1..4 per team index
    std::vector<bool> third_qualified;
    int champion = -1;
    std::vector<LoggedMatch> log;    // filled only when requested
    std::vector<std::pair<std::string, int>> byes;  // slot name, advancing team
};

// Orders four teams by: points; then head-to-head points and goal difference
// among the teams still tied; then overall goal difference, overall goals; any
// remaining tie is broken by drawing lots from the run's stream.
std::array<int, 4> rank_group(std::span<const int, 4> teams,
                              std::span<const GroupMatchResult> results, RngStream& rng);

// Plays the six fixtures of one group, updating ratings after every match.
GroupStanding simulate_group(const TournamentConfig& config, int group_index,
                             const TeamModelMap& models, EloState& elo, RngStream& rng,
                             std::vector<LoggedMatch>* log);

// Picks the best four thirds by points, goal difference, goals, then lots.
std::vector<ThirdEntry> rank_thirds(std::vector<ThirdEntry> entries, RngStream& rng);

struct R16Pairing {
    std::string slot;
    std::optional<int> home;  // empty when the seed is an eliminated third
    std::optional<int> away;
};

// Resolves the first knockout round from final standings. qualified_thirds is
// ignored for the variant that drops the third-place qualifiers.
std::vector<R16Pairing> build_round_of_16(const TournamentConfig& config,
                                          const std::vector<GroupStanding>& standings,
                                          const std::vector<ThirdEntry>& qualified_thirds,
                                          Variant variant);

// Plays one knockout tie. A level score is settled by a draw weighted by the
// pre-match win expectancy; ratings update from the 90-minute result unless
// the config credits shootout winners with a win.
int resolve_knockout_match(const TournamentConfig& config, const TeamModelMap& models,
                           EloState& elo, int team_home, int team_away, RngStream& rng,
                           const std::string& label, std::vector<LoggedMatch>* log);

TournamentOutcome simulate_tournament(const TournamentConfig& config,
                                      const TeamModelMap& models, const EloTable& base,
                                      RngStream& rng, Variant variant,
                                      bool record_log = false);

}  // namespace cupcast
