#include "cupcast/types.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "cupcast/errors.hpp"

namespace cupcast {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> len = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return len[month - 1];
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    std::string_view ys = text.substr(0, 4);
    std::string_view ms = text.substr(5, 2);
    std::string_view ds = text.substr(8, 2);
    if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) return std::nullopt;
    Date d;
    d.year = (ys[0] - '0') * 1000 + (ys[1] - '0') * 100 + (ys[2] - '0') * 10 + (ys[3] - '0');
    d.month = (ms[0] - '0') * 10 + (ms[1] - '0');
    d.day = (ds[0] - '0') * 10 + (ds[1] - '0');
    if (!d.valid()) return std::nullopt;
    return d;
}

bool Date::valid() const {
    if (year < 1 || month < 1 || month > 12 || day < 1) return false;
    return day <= days_in_month(year, month);
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

double EloTable::at(const std::string& team) const {
    auto it = ratings.find(team);
    if (it == ratings.end()) throw DataError("no rating for team '" + team + "'");
    return it->second;
}

}  // namespace cupcast
