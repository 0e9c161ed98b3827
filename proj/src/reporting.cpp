#include "cupcast/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cupcast/errors.hpp"

namespace cupcast {

std::string format_fixed(double value, int decimals) {
    if (decimals < 0 || decimals > 9) throw Error("format_fixed: decimals out of range");
    if (!std::isfinite(value)) throw Error("format_fixed: non-finite value");
    double scale = std::pow(10.0, decimals);
    long long scaled = static_cast<long long>(std::floor(std::fabs(value) * scale + 0.5));
    long long unit = static_cast<long long>(scale);
    long long whole = scaled / unit;
    long long frac = scaled % unit;
    char buf[64];
    if (decimals == 0) {
        std::snprintf(buf, sizeof buf, "%s%lld", value < 0 && scaled != 0 ? "-" : "", whole);
    } else {
        std::snprintf(buf, sizeof buf, "%s%lld.%0*lld", value < 0 && scaled != 0 ? "-" : "",
                      whole, decimals, frac);
    }
    return buf;
}

std::string format_percent(double probability) {
    return format_fixed(probability * 100.0, 2);
}

RegressionCurve regression_curve(const TeamModel& model, std::span<const HistoryRow> history,
                                 const std::string& kind, std::span<const double> grid) {
    const GlmFit* fit = nullptr;
    if (kind == "attack") {
        fit = &model.attack;
    } else if (kind == "concede") {
        fit = &model.concede;
    } else {
        throw Error("regression curve kind must be 'attack' or 'concede'");
    }
    RegressionCurve c;
    c.team_id = model.team.id;
    c.team_name = model.team.name();
    c.kind = kind;
    for (double elo : grid) {
        c.fitted.emplace_back(elo, predict_mean(*fit, std::array{1.0, elo}));
    }
    for (const auto& row : history) {
        int goals = kind == "attack" ? row.goals_for : row.goals_against;
        c.observed.emplace_back(row.opponent_elo, goals);
    }
    return c;
}

GofReport gof_report(const TeamModelMap& models,
                     const std::map<std::string, std::vector<HistoryRow>>& histories) {
    GofReport report;
    double sum_a = 0, sum_c = 0, sum_n = 0;
    int cnt_a = 0, cnt_c = 0, cnt_n = 0;

    for (const auto& [id, model] : models) {
        TeamGofRow row;
        row.team_id = id;
        row.team_name = model.team.name();
        row.fallback = model.fallback;

        auto hit = histories.find(id);
        const std::vector<HistoryRow> empty;
        const auto& rows = hit != histories.end() ? hit->second : empty;
        row.n_matches = static_cast<int>(rows.size());

        if (!rows.empty()) {
            std::vector<double> gf, ga, elo, og;
            for (const auto& r : rows) {
                gf.push_back(r.goals_for);
                ga.push_back(r.goals_against);
                elo.push_back(r.opponent_elo);
                og.push_back(r.opponent_goals);
            }
            auto try_pearson = [](const GlmFit& fit, const DesignMatrix& d)
                -> std::optional<GofResult> {
                try {
                    return pearson_gof(fit, d);
                } catch (const FitError&) {
                    return std::nullopt;
                }
            };
            row.attack = try_pearson(model.attack, make_design(gf, {elo}));
            row.concede = try_pearson(model.concede, make_design(ga, {elo}));
            row.nested = try_pearson(model.nested, make_design(gf, {elo, og}));
        }
        if (!model.fallback) {
            auto try_dev = [](const GlmFit& fit) -> std::optional<GofResult> {
                try {
                    return deviance_test(fit);
                } catch (const FitError&) {
                    return std::nullopt;
                }
            };
            row.attack_dev = try_dev(model.attack);
            row.concede_dev = try_dev(model.concede);
            row.nested_dev = try_dev(model.nested);
        }
        if (row.attack) sum_a += row.attack->p_value, ++cnt_a;
        if (row.concede) sum_c += row.concede->p_value, ++cnt_c;
        if (row.nested) sum_n += row.nested->p_value, ++cnt_n;
        report.rows.push_back(std::move(row));
    }
    if (cnt_a) report.mean_attack_p = sum_a / cnt_a;
    if (cnt_c) report.mean_concede_p = sum_c / cnt_c;
    if (cnt_n) report.mean_nested_p = sum_n / cnt_n;
    if (cnt_a + cnt_c + cnt_n) {
        report.mean_p = (sum_a + sum_c + sum_n) / (cnt_a + cnt_c + cnt_n);
    }
    return report;
}

ScoreMatrixTable oriented_score_matrix(const MatchForecast& forecast, int max_goals,
                                       const std::string& first_team,
                                       const TeamModelMap& models) {
    if (first_team != forecast.strong && first_team != forecast.weak) {
        throw Error("team '" + first_team + "' is not part of this forecast");
    }
    ScoreMatrixTable t;
    t.max_goals = max_goals;
    t.probs = score_matrix(forecast, max_goals);
    bool first_is_strong = first_team == forecast.strong;
    t.row_team = first_is_strong ? forecast.strong : forecast.weak;
    t.col_team = first_is_strong ? forecast.weak : forecast.strong;
    if (!first_is_strong) t.probs.transposeInPlace();
    auto name_of = [&](const std::string& id) {
        auto it = models.find(id);
        return it != models.end() ? it->second.team.name() : id;
    };
    t.row_name = name_of(t.row_team);
    t.col_name = name_of(t.col_team);
    return t;
}

namespace {

const char* kStageColumns[5] = {"champion", "final", "semifinal", "quarterfinal", "last16"};

std::string text_pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string text_pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string render_stage_table(const StageProbabilities& table, TableFormat format) {
    if (format == TableFormat::Csv) {
        std::string out = "team,name,champion,final,semifinal,quarterfinal,last16\n";
        for (std::size_t i = 0; i < table.team_ids.size(); ++i) {
            out += table.team_ids[i] + ',' + table.team_names[i];
            for (double p : table.p[i]) out += ',' + format_percent(p);
            out += '\n';
        }
        return out;
    }
    if (format == TableFormat::Json) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < table.team_ids.size(); ++i) {
            nlohmann::json row{{"team", table.team_ids[i]}, {"name", table.team_names[i]}};
            for (int c = 0; c < 5; ++c) row[kStageColumns[c]] = table.p[i][c];
            rows.push_back(row);
        }
        return nlohmann::json{{"n_runs", table.n_runs}, {"rows", rows}}.dump(2) + "\n";
    }
    std::size_t name_w = 4;
    for (const auto& n : table.team_names) name_w = std::max(name_w, n.size());
    std::string out = text_pad("team", name_w + 5);
    for (const char* c : kStageColumns) out += text_pad_left(c, 13);
    out += '\n';
    for (std::size_t i = 0; i < table.team_ids.size(); ++i) {
        out += text_pad(table.team_ids[i] + " " + table.team_names[i], name_w + 5);
        for (double p : table.p[i]) out += text_pad_left(format_percent(p), 13);
        out += '\n';
    }
    return out;
}

std::string render_group_table(const GroupProbabilities& table, char label,
                               TableFormat format) {
    const std::vector<GroupRow>* rows = nullptr;
    for (const auto& [l, r] : table.groups) {
        if (l == label) rows = &r;
    }
    if (!rows) throw Error(std::string("no group '") + label + "'");

    if (format == TableFormat::Csv) {
        std::string out = "team,name,first,second,third,fourth,advance\n";
        for (const auto& row : *rows) {
            out += row.team_id + ',' + row.team_name;
            for (double p : row.rank) out += ',' + format_percent(p);
            out += ',' + format_percent(row.advanced) + '\n';
        }
        return out;
    }
    if (format == TableFormat::Json) {
        nlohmann::json jrows = nlohmann::json::array();
        for (const auto& row : *rows) {
            jrows.push_back({{"team", row.team_id},
                             {"name", row.team_name},
                             {"first", row.rank[0]},
                             {"second", row.rank[1]},
                             {"third", row.rank[2]},
                             {"fourth", row.rank[3]},
                             {"advance", row.advanced}});
        }
        return nlohmann::json{{"group", std::string(1, label)},
                              {"n_runs", table.n_runs},
                              {"rows", jrows}}
                   .dump(2) +
               "\n";
    }
    std::size_t name_w = 4;
    for (const auto& row : *rows) name_w = std::max(name_w, row.team_name.size());
    std::string out = "group " + std::string(1, label) + "\n";
    out += text_pad("team", name_w + 5);
    for (const char* c : {"first", "second", "third", "fourth", "advance"}) {
        out += text_pad_left(c, 10);
    }
    out += '\n';
    for (const auto& row : *rows) {
        out += text_pad(row.team_id + " " + row.team_name, name_w + 5);
        for (double p : row.rank) out += text_pad_left(format_percent(p), 10);
        out += text_pad_left(format_percent(row.advanced), 10);
        out += '\n';
    }
    return out;
}

std::string render_diff_table(const StageDiff& diff, TableFormat format) {
    if (format == TableFormat::Csv) {
        std::string out = "team,name,champion,final,semifinal,quarterfinal,last16\n";
        for (std::size_t i = 0; i < diff.team_ids.size(); ++i) {
            out += diff.team_ids[i] + ',' + diff.team_names[i];
            for (double d : diff.delta_pp[i]) out += ',' + format_fixed(d, 2);
            out += '\n';
        }
        return out;
    }
    if (format == TableFormat::Json) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < diff.team_ids.size(); ++i) {
            nlohmann::json row{{"team", diff.team_ids[i]}, {"name", diff.team_names[i]}};
            for (int c = 0; c < 5; ++c) {
                row[kStageColumns[c]] = {{"a", diff.p_a[i][c]},
                                         {"b", diff.p_b[i][c]},
                                         {"delta_pp", diff.delta_pp[i][c]}};
            }
            rows.push_back(row);
        }
        return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
    }
    std::size_t name_w = 4;
    for (const auto& n : diff.team_names) name_w = std::max(name_w, n.size());
    std::string out = text_pad("team", name_w + 5);
    for (const char* c : kStageColumns) out += text_pad_left(c, 13);
    out += '\n';
    for (std::size_t i = 0; i < diff.team_ids.size(); ++i) {
        out += text_pad(diff.team_ids[i] + " " + diff.team_names[i], name_w + 5);
        for (double d : diff.delta_pp[i]) out += text_pad_left(format_fixed(d, 2), 13);
        out += '\n';
    }
    return out;
}

std::string render_score_matrix(const ScoreMatrixTable& table, TableFormat format) {
    const int m = table.max_goals + 2;
    auto col_label = [&](int j) {
        return j <= table.max_goals ? std::to_string(j) : std::string("more");
    };
    if (format == TableFormat::Csv) {
        std::string out = "goals";
        for (int j = 0; j < m; ++j) out += ',' + col_label(j);
        out += '\n';
        for (int i = 0; i < m; ++i) {
            out += col_label(i);
            for (int j = 0; j < m; ++j) out += ',' + format_percent(table.probs(i, j));
            out += '\n';
        }
        return out;
    }
    if (format == TableFormat::Json) {
        nlohmann::json cells = nlohmann::json::array();
        for (int i = 0; i < m; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < m; ++j) row.push_back(table.probs(i, j));
            cells.push_back(row);
        }
        return nlohmann::json{{"row_team", table.row_team},
                              {"col_team", table.col_team},
                              {"max_goals", table.max_goals},
                              {"cells", cells}}
                   .dump(2) +
               "\n";
    }
    std::string out = table.row_name + " (rows) vs " + table.col_name + " (columns), percent\n";
    out += text_pad("", 6);
    for (int j = 0; j < m; ++j) out += text_pad_left(col_label(j), 8);
    out += '\n';
    for (int i = 0; i < m; ++i) {
        out += text_pad(col_label(i), 6);
        for (int j = 0; j < m; ++j) out += text_pad_left(format_percent(table.probs(i, j)), 8);
        out += '\n';
    }
    return out;
}

namespace {

std::string gof_cell(const std::optional<GofResult>& r, int part) {
    if (!r) return "";
    switch (part) {
        case 0:
            return format_fixed(r->statistic, 4);
        case 1:
            return std::to_string(r->df);
        default:
            return format_fixed(r->p_value, 4);
    }
}

}  // namespace

std::string render_gof(const GofReport& report, TableFormat format) {
    if (format == TableFormat::Json) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : report.rows) {
            nlohmann::json row{{"team", r.team_id},
                               {"name", r.team_name},
                               {"n_matches", r.n_matches},
                               {"fallback", r.fallback}};
            auto put = [&](const char* key, const std::optional<GofResult>& g) {
                if (g) {
                    row[key] = {{"statistic", g->statistic}, {"df", g->df}, {"p", g->p_value}};
                } else {
                    row[key] = nullptr;
                }
            };
            put("attack", r.attack);
            put("concede", r.concede);
            put("nested", r.nested);
            put("attack_deviance", r.attack_dev);
            put("concede_deviance", r.concede_dev);
            put("nested_deviance", r.nested_dev);
            rows.push_back(row);
        }
        nlohmann::json j{{"rows", rows}};
        if (report.mean_p) j["mean_p"] = *report.mean_p;
        if (report.mean_attack_p) j["mean_attack_p"] = *report.mean_attack_p;
        if (report.mean_concede_p) j["mean_concede_p"] = *report.mean_concede_p;
        if (report.mean_nested_p) j["mean_nested_p"] = *report.mean_nested_p;
        return j.dump(2) + "\n";
    }
    // The CSV layout also serves as the text layout.
    std::string out =
        "team,name,n_matches,fallback,attack_x2,attack_df,attack_p,concede_x2,concede_df,"
        "concede_p,nested_x2,nested_df,nested_p\n";
    for (const auto& r : report.rows) {
        out += r.team_id + ',' + r.team_name + ',' + std::to_string(r.n_matches) + ',' +
               (r.fallback ? "true" : "false");
        for (const auto* g : {&r.attack, &r.concede, &r.nested}) {
            for (int part = 0; part < 3; ++part) out += ',' + gof_cell(*g, part);
        }
        out += '\n';
    }
    return out;
}

std::string render_curve(const RegressionCurve& curve, TableFormat format) {
    if (format == TableFormat::Json) {
        nlohmann::json fitted = nlohmann::json::array();
        for (const auto& [elo, mean] : curve.fitted) fitted.push_back({{"elo", elo}, {"mean", mean}});
        nlohmann::json observed = nlohmann::json::array();
        for (const auto& [elo, goals] : curve.observed) {
            observed.push_back({{"elo", elo}, {"goals", goals}});
        }
        return nlohmann::json{{"team", curve.team_id},
                              {"kind", curve.kind},
                              {"fitted", fitted},
                              {"observed", observed}}
                   .dump(2) +
               "\n";
    }
    std::string out = "series,elo,value\n";
    for (const auto& [elo, mean] : curve.fitted) {
        out += "fit," + format_fixed(elo, 1) + ',' + format_fixed(mean, 6) + '\n';
    }
    for (const auto& [elo, goals] : curve.observed) {
        out += "obs," + format_fixed(elo, 1) + ',' + std::to_string(goals) + '\n';
    }
    return out;
}

nlohmann::json summary_to_json(const SimulationSummary& summary) {
    nlohmann::json teams = nlohmann::json::array();
    for (std::size_t t = 0; t < summary.team_ids.size(); ++t) {
        teams.push_back({{"team", summary.team_ids[t]},
                         {"name", summary.team_names[t]},
                         {"group", std::string(1, summary.team_group[t])},
                         {"champion", summary.champion[t]},
                         {"final", summary.reached_final[t]},
                         {"semifinal", summary.reached_semifinal[t]},
                         {"quarterfinal", summary.reached_quarterfinal[t]},
                         {"last16", summary.reached_last16[t]},
                         {"rank1", summary.group_rank[0][t]},
                         {"rank2", summary.group_rank[1][t]},
                         {"rank3", summary.group_rank[2][t]},
                         {"rank4", summary.group_rank[3][t]},
                         {"third_qualified", summary.third_qualified[t]},
                         {"advanced", summary.advanced[t]}});
    }
    return nlohmann::json{
        {"n_runs", summary.n_runs},
        {"seed", summary.seed},
        {"variant", summary.variant == Variant::WithThirds ? "with-thirds" : "without-thirds"},
        {"teams", teams}};
}

}  // namespace cupcast
