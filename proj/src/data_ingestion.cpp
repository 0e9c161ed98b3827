#include "cupcast/data_ingestion.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "cupcast/errors.hpp"

namespace cupcast {

namespace {

[[noreturn]] void bad_row(const std::filesystem::path& file, std::size_t line,
                          const std::string& what) {
    throw DataError(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

int parse_int(const std::string& s, const std::filesystem::path& file, std::size_t line,
              const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        bad_row(file, line, std::string("invalid ") + what + " '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, const std::filesystem::path& file, std::size_t line,
                    const char* what) {
    if (s.empty()) bad_row(file, line, std::string("empty ") + what);
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        bad_row(file, line, std::string("invalid ") + what + " '" + s + "'");
    }
}

bool parse_bool(const std::string& s, const std::filesystem::path& file, std::size_t line) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    bad_row(file, line, "invalid neutral flag '" + s + "' (want true/false)");
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open '" + file.string() + "'");
    return in;
}

}  // namespace

std::vector<MatchRecord> load_matches(const std::filesystem::path& file) {
    auto in = open_or_throw(file);
    std::string line;
    if (!std::getline(in, line)) throw DataError(file.string() + ": empty file");
    if (strip_cr(line) != "date,team_a,team_b,goals_a,goals_b,elo_a,elo_b,neutral") {
        bad_row(file, 1, "unexpected header");
    }
    std::vector<MatchRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 8) bad_row(file, lineno, "expected 8 fields, got " + std::to_string(f.size()));
        MatchRecord r;
        auto d = Date::parse(f[0]);
        if (!d) bad_row(file, lineno, "invalid date '" + f[0] + "'");
        r.date = *d;
        r.team_a = f[1];
        r.team_b = f[2];
        if (r.team_a.empty() || r.team_b.empty()) bad_row(file, lineno, "empty team id");
        if (r.team_a == r.team_b) bad_row(file, lineno, "team plays itself");
        r.goals_a = parse_int(f[3], file, lineno, "goals_a");
        r.goals_b = parse_int(f[4], file, lineno, "goals_b");
        if (r.goals_a < 0 || r.goals_b < 0) bad_row(file, lineno, "negative goal count");
        r.elo_a = parse_double(f[5], file, lineno, "elo_a");
        r.elo_b = parse_double(f[6], file, lineno, "elo_b");
        if (r.elo_a <= 0 || r.elo_b <= 0) bad_row(file, lineno, "rating must be positive");
        r.neutral = parse_bool(f[7], file, lineno);
        out.push_back(std::move(r));
    }
    return out;
}

void save_matches(const std::filesystem::path& file, std::span<const MatchRecord> records) {
    std::ofstream out(file);
    if (!out) throw DataError("cannot write '" + file.string() + "'");
    out << "date,team_a,team_b,goals_a,goals_b,elo_a,elo_b,neutral\n";
    out.precision(17);
    for (const auto& r : records) {
        out << r.date.to_string() << ',' << r.team_a << ',' << r.team_b << ',' << r.goals_a
            << ',' << r.goals_b << ',' << r.elo_a << ',' << r.elo_b << ','
            << (r.neutral ? "true" : "false") << '\n';
    }
}

EloTable load_elo(const std::filesystem::path& file) {
    auto in = open_or_throw(file);
    std::string line;
    if (!std::getline(in, line)) throw DataError(file.string() + ": empty file");
    if (strip_cr(line) != "team,elo") bad_row(file, 1, "unexpected header");
    EloTable table;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 2) bad_row(file, lineno, "expected 2 fields, got " + std::to_string(f.size()));
        if (f[0].empty()) bad_row(file, lineno, "empty team id");
        double elo = parse_double(f[1], file, lineno, "elo");
        if (elo <= 0) bad_row(file, lineno, "rating must be positive");
        if (!table.ratings.emplace(f[0], elo).second) {
            bad_row(file, lineno, "duplicate team '" + f[0] + "'");
        }
    }
    return table;
}

std::vector<TeamId> load_team_list(const std::filesystem::path& file) {
    auto in = open_or_throw(file);
    std::vector<TeamId> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        TeamId t;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            t.id = line;
        } else {
            t.id = line.substr(0, comma);
            t.display_name = line.substr(comma + 1);
        }
        if (t.id.empty()) bad_row(file, lineno, "empty team id");
        if (!seen.insert(t.id).second) bad_row(file, lineno, "duplicate team '" + t.id + "'");
        out.push_back(std::move(t));
    }
    if (out.empty()) throw DataError(file.string() + ": no teams listed");
    return out;
}

std::vector<MatchRecord> training_window(std::span<const MatchRecord> records, Date from,
                                         Date to, bool neutral_only) {
    if (to < from) throw DataError("training window end precedes start");
    std::vector<MatchRecord> out;
    for (const auto& r : records) {
        if (r.date < from || to < r.date) continue;
        if (neutral_only && !r.neutral) continue;
        out.push_back(r);
    }
    return out;
}

std::vector<HistoryRow> team_history(std::span<const MatchRecord> records,
                                     const std::string& team) {
    std::vector<HistoryRow> out;
    for (const auto& r : records) {
        if (r.team_a == team) {
            out.push_back({r.elo_b, r.goals_a, r.goals_b, r.goals_b});
        } else if (r.team_b == team) {
            out.push_back({r.elo_a, r.goals_b, r.goals_a, r.goals_a});
        }
    }
    return out;
}

}  // namespace cupcast
