#include "cupcast/match_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "cupcast/errors.hpp"
#include "cupcast/stats.hpp"

namespace cupcast {

using nlohmann::json;

namespace {

struct TeamDesigns {
    DesignMatrix attack;
    DesignMatrix concede;
    DesignMatrix nested;
};

TeamDesigns designs_from(const std::vector<HistoryRow>& rows) {
    std::vector<double> gf, ga, elo, og;
    gf.reserve(rows.size());
    ga.reserve(rows.size());
    elo.reserve(rows.size());
    og.reserve(rows.size());
    for (const auto& r : rows) {
        gf.push_back(r.goals_for);
        ga.push_back(r.goals_against);
        elo.push_back(r.opponent_elo);
        og.push_back(r.opponent_goals);
    }
    TeamDesigns d;
    d.attack = make_design(gf, {elo});
    d.concede = make_design(ga, {elo});
    d.nested = make_design(gf, {elo, og});
    return d;
}

}  // namespace

TeamModelMap fit_team_models(std::span<const MatchRecord> records,
                             std::span<const TeamId> teams, int min_matches) {
    if (teams.empty()) throw FitError("no teams to fit");
    if (min_matches < 1) throw FitError("min_matches must be >= 1");

    std::map<std::string, std::vector<HistoryRow>> histories;
    std::vector<HistoryRow> pooled_rows;
    int teams_with_enough = 0;
    for (const auto& t : teams) {
        auto rows = team_history(records, t.id);
        if (static_cast<int>(rows.size()) >= min_matches) ++teams_with_enough;
        pooled_rows.insert(pooled_rows.end(), rows.begin(), rows.end());
        histories[t.id] = std::move(rows);
    }
    if (teams_with_enough == 0) {
        throw FitError("no team has at least " + std::to_string(min_matches) +
                       " matches in the training window");
    }

    // Pooled coefficients over every team's rows; fitted on first use.
    std::optional<TeamDesigns> pooled_designs;
    std::optional<TeamModel> pooled_fit;
    auto pooled = [&]() -> const TeamModel& {
        if (!pooled_fit) {
            pooled_designs = designs_from(pooled_rows);
            TeamModel m;
            m.attack = fit_poisson(pooled_designs->attack);
            m.concede = fit_poisson(pooled_designs->concede);
            m.nested = fit_poisson(pooled_designs->nested);
            pooled_fit = std::move(m);
        }
        return *pooled_fit;
    };

    TeamModelMap out;
    for (const auto& t : teams) {
        const auto& rows = histories[t.id];
        TeamModel m;
        m.team = t;
        m.n_matches = static_cast<int>(rows.size());
        if (m.n_matches >= min_matches) {
            TeamDesigns d = designs_from(rows);
            try {
                m.attack = fit_poisson(d.attack);
            } catch (const FitError&) {
                m.attack = pooled().attack;
                m.fallback = true;
            }
            try {
                m.concede = fit_poisson(d.concede);
            } catch (const FitError&) {
                m.concede = pooled().concede;
                m.fallback = true;
            }
            try {
                m.nested = fit_poisson(d.nested);
            } catch (const FitError&) {
                m.nested = pooled().nested;
                m.fallback = true;
            }
        } else {
            m.attack = pooled().attack;
            m.concede = pooled().concede;
            m.nested = pooled().nested;
            m.fallback = true;
        }
        out[t.id] = std::move(m);
    }
    return out;
}

double MatchForecast::weak_rate(int strong_goals) const {
    return std::exp(weak_log_base + weak_goal_coef * strong_goals);
}

MatchForecast forecast(const TeamModelMap& models, const std::string& team_a, double elo_a,
                       const std::string& team_b, double elo_b) {
    if (team_a == team_b) throw FitError("cannot forecast a team against itself");
    auto find = [&](const std::string& id) -> const TeamModel& {
        auto it = models.find(id);
        if (it == models.end()) throw DataError("no fitted model for team '" + id + "'");
        return it->second;
    };

    MatchForecast f;
    bool a_strong = elo_a > elo_b || (elo_a == elo_b && team_a < team_b);
    f.strong = a_strong ? team_a : team_b;
    f.weak = a_strong ? team_b : team_a;
    f.strong_elo = a_strong ? elo_a : elo_b;
    f.weak_elo = a_strong ? elo_b : elo_a;
    f.swapped = !a_strong;

    const TeamModel& strong = find(f.strong);
    const TeamModel& weak = find(f.weak);

    double mu = predict_mean(strong.attack, std::array{1.0, f.weak_elo});
    double nu = predict_mean(weak.concede, std::array{1.0, f.strong_elo});
    f.lambda_strong = 0.5 * (mu + nu);

    const auto& g = weak.nested.coefficients;
    f.weak_log_base = g[0] + g[1] * f.strong_elo;
    f.weak_goal_coef = g[2];
    return f;
}

MatchForecast forecast(const TeamModelMap& models, const EloTable& elo,
                       const std::string& team_a, const std::string& team_b) {
    return forecast(models, team_a, elo.at(team_a), team_b, elo.at(team_b));
}

Score simulate_match(const MatchForecast& forecast, RngStream& rng) {
    Score s;
    s.goals_strong = poisson_sample(forecast.lambda_strong, rng);
    s.goals_weak = poisson_sample(forecast.weak_rate(s.goals_strong), rng);
    return s;
}

Eigen::MatrixXd score_matrix(const MatchForecast& forecast, int max_goals) {
    if (max_goals < 0) throw std::invalid_argument("score_matrix: max_goals must be >= 0");
    const int m = max_goals + 2;
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, m);

    for (int i = 0; i <= max_goals; ++i) {
        double pa = poisson_pmf(i, forecast.lambda_strong);
        double rate = forecast.weak_rate(i);
        double row_sum = 0.0;
        for (int j = 0; j <= max_goals; ++j) {
            double pb = poisson_pmf(j, rate);
            mat(i, j) = pa * pb;
            row_sum += pb;
        }
        mat(i, m - 1) = pa * std::max(0.0, 1.0 - row_sum);
    }

    // Strong-side tail: walk the distribution until its mass is exhausted.
    double strong_tail_left = 1.0;
    for (int i = 0; i <= max_goals; ++i) strong_tail_left -= poisson_pmf(i, forecast.lambda_strong);
    int i = max_goals + 1;
    double walked = 0.0;
    while (walked < strong_tail_left - 1e-16 && i < max_goals + 4000) {
        double pa = poisson_pmf(i, forecast.lambda_strong);
        double rate = forecast.weak_rate(i);
        for (int j = 0; j <= max_goals; ++j) {
            mat(m - 1, j) += pa * poisson_pmf(j, rate);
        }
        walked += pa;
        ++i;
    }

    // The corner absorbs whatever probability the grid has not covered, which
    // pins the total to one exactly.
    double total = 0.0;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            if (r == m - 1 && c == m - 1) continue;
            total += mat(r, c);
        }
    }
    mat(m - 1, m - 1) = std::max(0.0, 1.0 - total);
    return mat;
}

WinDrawLoss win_draw_loss(const MatchForecast& forecast) {
    const int cap = 25;
    Eigen::MatrixXd mat = score_matrix(forecast, cap);
    const int m = cap + 2;
    WinDrawLoss w;
    for (int i = 0; i <= cap; ++i) {
        for (int j = 0; j <= cap; ++j) {
            if (i > j) {
                w.strong_win += mat(i, j);
            } else if (i == j) {
                w.draw += mat(i, j);
            } else {
                w.weak_win += mat(i, j);
            }
        }
        w.weak_win += mat(i, m - 1);    // weak side beyond the cap
        w.strong_win += mat(m - 1, i);  // strong side beyond the cap
    }
    w.draw += mat(m - 1, m - 1);
    return w;
}

namespace {

json fit_to_json(const GlmFit& fit) {
    return json{{"coefficients", fit.coefficients},
                {"standard_errors", fit.standard_errors},
                {"null_deviance", fit.null_deviance},
                {"residual_deviance", fit.residual_deviance},
                {"n_obs", fit.n_obs},
                {"iterations", fit.iterations},
                {"converged", fit.converged}};
}

GlmFit fit_from_json(const json& j, std::size_t n_coefs) {
    GlmFit fit;
    fit.coefficients = j.at("coefficients").get<std::vector<double>>();
    fit.standard_errors = j.at("standard_errors").get<std::vector<double>>();
    if (fit.coefficients.size() != n_coefs || fit.standard_errors.size() != n_coefs) {
        throw DataError("model bundle: wrong coefficient count");
    }
    for (double v : fit.coefficients) {
        if (!std::isfinite(v)) throw DataError("model bundle: non-finite coefficient");
    }
    fit.null_deviance = j.at("null_deviance").get<double>();
    fit.residual_deviance = j.at("residual_deviance").get<double>();
    fit.n_obs = j.at("n_obs").get<int>();
    fit.p_params = static_cast<int>(n_coefs);
    fit.iterations = j.at("iterations").get<int>();
    fit.converged = j.at("converged").get<bool>();
    return fit;
}

}  // namespace

void save_models(const std::filesystem::path& file, const TeamModelMap& models) {
    json teams = json::object();
    for (const auto& [id, m] : models) {
        teams[id] = json{{"display_name", m.team.display_name},
                         {"n_matches", m.n_matches},
                         {"fallback", m.fallback},
                         {"attack", fit_to_json(m.attack)},
                         {"concede", fit_to_json(m.concede)},
                         {"nested", fit_to_json(m.nested)}};
    }
    json bundle{{"format_version", 1}, {"kind", "team-models"}, {"teams", teams}};
    std::ofstream out(file);
    if (!out) throw DataError("cannot write '" + file.string() + "'");
    out << bundle.dump(2) << '\n';
}

TeamModelMap load_models(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open '" + file.string() + "'");
    json bundle;
    try {
        in >> bundle;
    } catch (const json::exception& e) {
        throw DataError(file.string() + ": " + e.what());
    }
    try {
        if (bundle.at("format_version").get<int>() != 1) {
            throw DataError("model bundle: unsupported format version");
        }
        if (bundle.at("kind").get<std::string>() != "team-models") {
            throw DataError("model bundle: unexpected kind");
        }
        TeamModelMap out;
        for (const auto& [id, jm] : bundle.at("teams").items()) {
            TeamModel m;
            m.team.id = id;
            m.team.display_name = jm.at("display_name").get<std::string>();
            m.n_matches = jm.at("n_matches").get<int>();
            m.fallback = jm.at("fallback").get<bool>();
            m.attack = fit_from_json(jm.at("attack"), 2);
            m.concede = fit_from_json(jm.at("concede"), 2);
            m.nested = fit_from_json(jm.at("nested"), 3);
            out[id] = std::move(m);
        }
        if (out.empty()) throw DataError("model bundle: no teams");
        return out;
    } catch (const json::exception& e) {
        throw DataError(file.string() + ": " + e.what());
    }
}

}  // namespace cupcast
