#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace cupcast {

enum class SeedKind { Winner, RunnerUp, Third };

// One side of a first-knockout-round pairing: a group winner ("1A"), a group
// runner-up ("2C"), or a best third drawn from an allowed set ("3ABF").
struct SlotSeed {
    SeedKind kind = SeedKind::Winner;
    char group = 0;       // Winner / RunnerUp
    std::string allowed;  // Third: sorted group labels
};

struct R16Slot {
    std::string name;
    SlotSeed home;
    SlotSeed away;
};

// A later knockout tie fed by the winners of two earlier slots.
struct KnockoutTie {
    std::string name;
    std::string feed_home;
    std::string feed_away;
};

struct GroupDef {
    char label = 0;
    std::array<int, 4> members{};  // global team indices
};

class TournamentConfig {
  public:
    static TournamentConfig load(const std::filesystem::path& file);
    static TournamentConfig from_json(const nlohmann::json& j);

    const std::vector<std::string>& team_ids() const { return team_ids_; }
    int team_count() const { return static_cast<int>(team_ids_.size()); }
    // Throws ConfigError for unknown ids.
    int team_index(const std::string& id) const;
    int group_of(int team_index) const { return group_of_[team_index]; }

    const std::vector<GroupDef>& groups() const { return groups_; }
    const std::vector<std::pair<int, int>>& group_schedule() const { return schedule_; }
    const std::vector<R16Slot>& r16_template() const { return r16_; }
    // Key: sorted labels of the four qualified groups, e.g. "ABDF".
    // Value: third-taking slot name -> group label whose third fills it.
    const std::map<std::string, std::map<std::string, char>>& third_lookup() const {
        return third_lookup_;
    }
    const std::vector<KnockoutTie>& quarterfinals() const { return quarterfinals_; }
    const std::vector<KnockoutTie>& semifinals() const { return semifinals_; }
    const KnockoutTie& final_tie() const { return final_; }

    double elo_k() const { return elo_k_; }
    std::uint64_t simulations() const { return simulations_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& host() const { return host_; }
    double host_bonus() const { return host_bonus_; }
    bool shootout_as_draw() const { return shootout_as_draw_; }

  private:
    std::vector<std::string> team_ids_;
    std::map<std::string, int> index_;
    std::vector<int> group_of_;
    std::vector<GroupDef> groups_;
    std::vector<std::pair<int, int>> schedule_;
    std::vector<R16Slot> r16_;
    std::map<std::string, std::map<std::string, char>> third_lookup_;
    std::vector<KnockoutTie> quarterfinals_;
    std::vector<KnockoutTie> semifinals_;
    KnockoutTie final_;
    double elo_k_ = 50.0;
    std::uint64_t simulations_ = 100000;
    std::uint64_t seed_ = 2019;
    std::string host_;
    double host_bonus_ = 0.0;
    bool shootout_as_draw_ = true;
};

}  // namespace cupcast
