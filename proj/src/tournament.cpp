#include "cupcast/tournament.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cupcast/errors.hpp"

namespace cupcast {

namespace {

struct GroupTable {
    std::array<TeamGroupStats, 4> stats{};
    // Points and goal difference earned by member i in its match against j.
    int h2h_points[4][4] = {};
    int h2h_gd[4][4] = {};
};

GroupTable tabulate(std::span<const int, 4> teams, std::span<const GroupMatchResult> results) {
    if (results.size() != 6) throw Error("group needs exactly 6 results");
    auto member_of = [&](int team) {
        for (int i = 0; i < 4; ++i) {
            if (teams[i] == team) return i;
        }
        throw Error("result references a team outside the group");
    };
    GroupTable t;
    bool seen[4][4] = {};
    for (const auto& r : results) {
        int h = member_of(r.home);
        int a = member_of(r.away);
        if (h == a || seen[h][a] || seen[a][h]) throw Error("pair plays more than once");
        if (r.goals_home < 0 || r.goals_away < 0) throw Error("negative goal count");
        seen[h][a] = seen[a][h] = true;
        t.stats[h].played++;
        t.stats[a].played++;
        t.stats[h].goals_for += r.goals_home;
        t.stats[h].goals_against += r.goals_away;
        t.stats[a].goals_for += r.goals_away;
        t.stats[a].goals_against += r.goals_home;
        int ph = r.goals_home > r.goals_away ? 3 : (r.goals_home == r.goals_away ? 1 : 0);
        int pa = r.goals_home < r.goals_away ? 3 : (r.goals_home == r.goals_away ? 1 : 0);
        t.stats[h].points += ph;
        t.stats[a].points += pa;
        t.h2h_points[h][a] = ph;
        t.h2h_points[a][h] = pa;
        t.h2h_gd[h][a] = r.goals_home - r.goals_away;
        t.h2h_gd[a][h] = r.goals_away - r.goals_home;
    }
    return t;
}

// Draws one uniform per contender and orders the run by it.
template <typename It, typename Proj>
void break_ties_by_lots(It begin, It end, Proj equal, RngStream& rng) {
    for (It run = begin; run != end;) {
        It stop = run + 1;
        while (stop != end && equal(*run, *stop)) ++stop;
        if (stop - run > 1) {
            std::vector<std::pair<double, It>> lots;
            for (It it = run; it != stop; ++it) lots.emplace_back(rng.next_double(), it);
            std::stable_sort(lots.begin(), lots.end(),
                             [](const auto& x, const auto& y) { return x.first > y.first; });
            std::vector<typename std::iterator_traits<It>::value_type> tmp;
            tmp.reserve(lots.size());
            for (const auto& [u, it] : lots) tmp.push_back(*it);
            std::copy(tmp.begin(), tmp.end(), run);
        }
        run = stop;
    }
}

}  // namespace

std::array<int, 4> rank_group(std::span<const int, 4> teams,
                              std::span<const GroupMatchResult> results, RngStream& rng) {
    GroupTable t = tabulate(teams, results);

    std::array<int, 4> order = {0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return t.stats[x].points > t.stats[y].points; });

    // Within a block of equal points, compare records restricted to the block.
    struct Key {
        int h2h_points, h2h_gd, gd, gf;
        auto operator<=>(const Key&) const = default;
    };
    std::array<Key, 4> key{};
    for (auto b = order.begin(); b != order.end();) {
        auto e = b + 1;
        while (e != order.end() && t.stats[*e].points == t.stats[*b].points) ++e;
        if (e - b > 1) {
            for (auto it = b; it != e; ++it) {
                Key k{0, 0, t.stats[*it].goal_diff(), t.stats[*it].goals_for};
                for (auto jt = b; jt != e; ++jt) {
                    if (jt == it) continue;
                    k.h2h_points += t.h2h_points[*it][*jt];
                    k.h2h_gd += t.h2h_gd[*it][*jt];
                }
                key[*it] = k;
            }
            std::stable_sort(b, e, [&](int x, int y) { return key[y] < key[x]; });
            break_ties_by_lots(
                b, e, [&](int x, int y) { return key[x] == key[y]; }, rng);
        }
        b = e;
    }

    std::array<int, 4> ranked;
    for (int i = 0; i < 4; ++i) ranked[i] = teams[order[i]];
    return ranked;
}

namespace {

double effective_rating(const TournamentConfig& config, const EloState& elo,
                        const std::string& id) {
    double r = elo.at(id);
    if (!config.host().empty() && id == config.host()) r += config.host_bonus();
    return r;
}

// Plays one fixture with the current ratings and applies the rating update.
Score play_match(const TournamentConfig& config, const TeamModelMap& models, EloState& elo,
                 const std::string& id_home, const std::string& id_away, RngStream& rng) {
    double eff_home = effective_rating(config, elo, id_home);
    double eff_away = effective_rating(config, elo, id_away);
    MatchForecast f = forecast(models, id_home, eff_home, id_away, eff_away);
    Score s = simulate_match(f, rng);
    if (f.swapped) std::swap(s.goals_strong, s.goals_weak);
    // goals_strong now means the home side's goals.
    update(elo, id_home, id_away, s.goals_strong, s.goals_weak);
    return s;
}

}  // namespace

GroupStanding simulate_group(const TournamentConfig& config, int group_index,
                             const TeamModelMap& models, EloState& elo, RngStream& rng,
                             std::vector<LoggedMatch>* log) {
    const GroupDef& group = config.groups().at(group_index);
    GroupStanding standing;
    standing.group_index = group_index;
    standing.members = group.members;

    std::vector<GroupMatchResult> results;
    results.reserve(6);
    std::string label = std::string("group ") + group.label;
    for (const auto& [hi, ai] : config.group_schedule()) {
        int home = group.members[hi];
        int away = group.members[ai];
        const std::string& id_home = config.team_ids()[home];
        const std::string& id_away = config.team_ids()[away];
        Score s = play_match(config, models, elo, id_home, id_away, rng);
        results.push_back({home, away, s.goals_strong, s.goals_weak});
        if (log) log->push_back({label, home, away, s.goals_strong, s.goals_weak, false});
    }

    GroupTable t = tabulate(standing.members, results);
    standing.stats = t.stats;
    standing.ranked = rank_group(standing.members, results, rng);
    return standing;
}

std::vector<ThirdEntry> rank_thirds(std::vector<ThirdEntry> entries, RngStream& rng) {
    if (entries.size() != 6) throw Error("expected one third per group");
    auto tuple_of = [](const ThirdEntry& e) {
        return std::array{e.stats.points, e.stats.goal_diff(), e.stats.goals_for};
    };
    std::stable_sort(entries.begin(), entries.end(), [&](const ThirdEntry& x, const ThirdEntry& y) {
        return tuple_of(y) < tuple_of(x);
    });
    break_ties_by_lots(
        entries.begin(), entries.end(),
        [&](const ThirdEntry& x, const ThirdEntry& y) { return tuple_of(x) == tuple_of(y); },
        rng);
    return entries;
}

std::vector<R16Pairing> build_round_of_16(const TournamentConfig& config,
                                          const std::vector<GroupStanding>& standings,
                                          const std::vector<ThirdEntry>& qualified_thirds,
                                          Variant variant) {
    if (standings.size() != config.groups().size()) throw Error("missing group standings");
    std::map<char, const GroupStanding*> by_label;
    for (const auto& s : standings) by_label[config.groups().at(s.group_index).label] = &s;

    std::map<char, int> third_team;
    const std::map<std::string, char>* assignment = nullptr;
    if (variant == Variant::WithThirds) {
        if (qualified_thirds.size() != 4) throw Error("expected four qualified thirds");
        std::string key;
        for (const auto& e : qualified_thirds) {
            third_team[e.group_label] = e.team;
            key.push_back(e.group_label);
        }
        std::sort(key.begin(), key.end());
        auto it = config.third_lookup().find(key);
        if (it == config.third_lookup().end()) {
            throw Error("no lookup entry for thirds '" + key + "'");
        }
        assignment = &it->second;
    }

    auto resolve = [&](const SlotSeed& seed, const std::string& slot) -> std::optional<int> {
        switch (seed.kind) {
            case SeedKind::Winner:
                return by_label.at(seed.group)->at_rank(1);
            case SeedKind::RunnerUp:
                return by_label.at(seed.group)->at_rank(2);
            case SeedKind::Third:
                if (variant == Variant::WithoutThirds) return std::nullopt;
                return third_team.at(assignment->at(slot));
        }
        throw Error("unreachable seed kind");
    };

    std::vector<R16Pairing> out;
    out.reserve(config.r16_template().size());
    for (const auto& slot : config.r16_template()) {
        out.push_back({slot.name, resolve(slot.home, slot.name), resolve(slot.away, slot.name)});
    }
    return out;
}

int resolve_knockout_match(const TournamentConfig& config, const TeamModelMap& models,
                           EloState& elo, int team_home, int team_away, RngStream& rng,
                           const std::string& label, std::vector<LoggedMatch>* log) {
    const std::string& id_home = config.team_ids()[team_home];
    const std::string& id_away = config.team_ids()[team_away];

    double eff_home = effective_rating(config, elo, id_home);
    double eff_away = effective_rating(config, elo, id_away);
    MatchForecast f = forecast(models, id_home, eff_home, id_away, eff_away);
    Score s = simulate_match(f, rng);
    if (f.swapped) std::swap(s.goals_strong, s.goals_weak);
    int goals_home = s.goals_strong;
    int goals_away = s.goals_weak;

    int winner;
    bool shootout = false;
    if (goals_home != goals_away) {
        winner = goals_home > goals_away ? team_home : team_away;
    } else {
        // Level after ninety minutes: settled by a draw weighted by the
        // pre-match win expectancy.
        shootout = true;
        winner = rng.next_double() < expected_score(eff_home, eff_away) ? team_home : team_away;
    }

    if (!shootout || config.shootout_as_draw()) {
        update(elo, id_home, id_away, goals_home, goals_away);
    } else {
        update_with_outcome(elo, id_home, id_away, goals_home, goals_away,
                            winner == team_home ? 1.0 : 0.0);
    }
    if (log) log->push_back({label, team_home, team_away, goals_home, goals_away, shootout});
    return winner;
}

TournamentOutcome simulate_tournament(const TournamentConfig& config,
                                      const TeamModelMap& models, const EloTable& base,
                                      RngStream& rng, Variant variant, bool record_log) {
    const int n = config.team_count();
    TournamentOutcome o;
    o.stage.assign(n, Stage::GroupEliminated);
    o.group_rank.assign(n, 0);
    o.third_qualified.assign(n, false);

    EloState elo = reset(base, config.elo_k());
    for (int t = 0; t < n; ++t) {
        if (!base.has(config.team_ids()[t])) {
            throw DataError("no baseline rating for team '" + config.team_ids()[t] + "'");
        }
    }

    std::vector<LoggedMatch>* log = record_log ? &o.log : nullptr;
    std::vector<GroupStanding> standings;
    standings.reserve(config.groups().size());
    for (std::size_t g = 0; g < config.groups().size(); ++g) {
        standings.push_back(simulate_group(config, static_cast<int>(g), models, elo, rng, log));
    }
    for (const auto& s : standings) {
        for (int r = 1; r <= 4; ++r) o.group_rank[s.at_rank(r)] = r;
    }

    std::vector<ThirdEntry> qualified;
    if (variant == Variant::WithThirds) {
        std::vector<ThirdEntry> thirds;
        for (const auto& s : standings) {
            int team = s.at_rank(3);
            int member = 0;
            for (int i = 0; i < 4; ++i) {
                if (s.members[i] == team) member = i;
            }
            thirds.push_back({team, config.groups().at(s.group_index).label, s.stats[member]});
        }
        auto ranked = rank_thirds(std::move(thirds), rng);
        qualified.assign(ranked.begin(), ranked.begin() + 4);
        for (const auto& e : qualified) o.third_qualified[e.team] = true;
    }

    auto promote = [&](int team, Stage stage) {
        if (o.stage[team] < stage) o.stage[team] = stage;
    };

    for (const auto& s : standings) {
        promote(s.at_rank(1), Stage::Last16);
        promote(s.at_rank(2), Stage::Last16);
    }
    for (const auto& e : qualified) promote(e.team, Stage::Last16);

    std::map<std::string, int> advanced;
    for (const auto& pairing : build_round_of_16(config, standings, qualified, variant)) {
        if (!pairing.home || !pairing.away) {
            int walk_over = pairing.home ? *pairing.home : *pairing.away;
            advanced[pairing.slot] = walk_over;
            o.byes.emplace_back(pairing.slot, walk_over);
            continue;
        }
        advanced[pairing.slot] = resolve_knockout_match(config, models, elo, *pairing.home,
                                                        *pairing.away, rng, pairing.slot, log);
    }

    auto play_round = [&](const std::vector<KnockoutTie>& ties, Stage entered) {
        for (const auto& tie : ties) {
            int home = advanced.at(tie.feed_home);
            int away = advanced.at(tie.feed_away);
            promote(home, entered);
            promote(away, entered);
            advanced[tie.name] =
                resolve_knockout_match(config, models, elo, home, away, rng, tie.name, log);
        }
    };
    play_round(config.quarterfinals(), Stage::Quarterfinal);
    play_round(config.semifinals(), Stage::Semifinal);

    const KnockoutTie& final_tie = config.final_tie();
    int home = advanced.at(final_tie.feed_home);
    int away = advanced.at(final_tie.feed_away);
    promote(home, Stage::Final);
    promote(away, Stage::Final);
    o.champion =
        resolve_knockout_match(config, models, elo, home, away, rng, final_tie.name, log);
    promote(o.champion, Stage::Champion);
    return o;
}

}  // namespace cupcast
