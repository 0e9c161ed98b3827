#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace cupcast {

// Calendar date. Comparison is lexicographic on (year, month, day), which
// matches chronological order for valid dates.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    // Strict ISO-8601 "YYYY-MM-DD". Returns nullopt on any formatting or
    // calendar violation (bad month, day outside month length, leap years
    // handled).
    static std::optional<Date> parse(std::string_view text);

    std::string to_string() const;
    bool valid() const;

    friend auto operator<=>(const Date&, const Date&) = default;
};

// A team identifier plus an optional human-readable name. Identity is the
// short id; the display name never participates in comparisons.
struct TeamId {
    std::string id;
    std::string display_name;

    const std::string& name() const { return display_name.empty() ? id : display_name; }

    friend bool operator==(const TeamId& a, const TeamId& b) { return a.id == b.id; }
    friend auto operator<=>(const TeamId& a, const TeamId& b) { return a.id <=> b.id; }
};

// One historical match. team_a / team_b carry no home/away meaning for
// neutral-site rows; elo_a / elo_b are the ratings going into the match.
struct MatchRecord {
    Date date;
    std::string team_a;
    std::string team_b;
    int goals_a = 0;
    int goals_b = 0;
    double elo_a = 0.0;
    double elo_b = 0.0;
    bool neutral = false;

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Rating snapshot used to seed simulations. as_of is informational only.
struct EloTable {
    std::string as_of;
    std::map<std::string, double> ratings;

    bool has(const std::string& team) const { return ratings.count(team) > 0; }
    // Throws DataError when the team is absent.
    double at(const std::string& team) const;
};

}  // namespace cupcast
