#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "cupcast/errors.hpp"
#include "cupcast/match_model.hpp"
#include "cupcast/rng.hpp"
#include "cupcast/stats.hpp"

using namespace cupcast;
namespace fs = std::filesystem;

namespace {

GlmFit hand_fit(std::vector<double> coefs) {
    GlmFit f;
    f.coefficients = std::move(coefs);
    f.standard_errors.assign(f.coefficients.size(), 0.1);
    f.n_obs = 30;
    f.p_params = static_cast<int>(f.coefficients.size());
    f.converged = true;
    f.iterations = 5;
    return f;
}

// Two teams with hand-set coefficients:
//   stronger side attack:   exp(2.73 - 0.00145 * opponent_rating)
//   weaker side concede:    exp(-4.0158 + 0.00243 * opponent_rating)
//   weaker side conditional: exp(1.431 - 0.000728 * opponent_rating + 0.137 * opponent_goals)
TeamModelMap worked_example_models() {
    TeamModelMap m;
    TeamModel sen;
    sen.team = {"SEN", "Senegal"};
    sen.attack = hand_fit({2.73, -0.00145});
    sen.concede = hand_fit({-4.7, 0.0021});
    sen.nested = hand_fit({1.2, -0.0006, 0.1});
    sen.n_matches = 29;
    m["SEN"] = sen;

    TeamModel civ;
    civ.team = {"CIV", "Ivory Coast"};
    civ.attack = hand_fit({2.5, -0.0014});
    civ.concede = hand_fit({-4.0158, 0.00243});
    civ.nested = hand_fit({1.431, -0.000728, 0.137});
    civ.n_matches = 31;
    m["CIV"] = civ;
    return m;
}

std::vector<MatchRecord> synthetic_league(const std::vector<std::pair<std::string, double>>& teams,
                                          int rounds, RngStream& rng) {
    std::vector<MatchRecord> records;
    Date d = *Date::parse("2015-01-01");
    auto bump = [&]() {
        d.day++;
        if (d.day > 28) {
            d.day = 1;
            d.month++;
        }
        if (d.month > 12) {
            d.month = 1;
            d.year++;
        }
    };
    for (int r = 0; r < rounds; ++r) {
        for (std::size_t i = 0; i < teams.size(); ++i) {
            for (std::size_t j = i + 1; j < teams.size(); ++j) {
                MatchRecord rec;
                rec.date = d;
                bump();
                rec.team_a = teams[i].first;
                rec.team_b = teams[j].first;
                rec.elo_a = teams[i].second + 40.0 * (rng.next_double() - 0.5);
                rec.elo_b = teams[j].second + 40.0 * (rng.next_double() - 0.5);
                rec.neutral = true;
                // Independent scoring at rate exp(2.3 - 0.001 * opponent rating).
                rec.goals_a = poisson_sample(std::exp(2.3 - 0.001 * rec.elo_b), rng);
                rec.goals_b = poisson_sample(std::exp(2.3 - 0.001 * rec.elo_a), rng);
                records.push_back(rec);
            }
        }
    }
    return records;
}

}  // namespace

TEST_CASE("forecast blends attack and concede rates for the worked pairing") {
    TeamModelMap m = worked_example_models();
    MatchForecast f = forecast(m, "SEN", 1764.0, "CIV", 1612.0);
    CHECK(f.strong == "SEN");
    CHECK(f.weak == "CIV");
    CHECK(!f.swapped);
    // exp(2.73 - 0.00145*1612) = 1.4809 and exp(-4.0158 + 0.00243*1764) = 1.3109,
    // averaging to 1.3959; all three by direct evaluation.
    double mu = std::exp(2.73 - 0.00145 * 1612.0);
    double nu = std::exp(-4.0158 + 0.00243 * 1764.0);
    CHECK(mu == doctest::Approx(1.48).epsilon(0.005));
    CHECK(nu == doctest::Approx(1.31).epsilon(0.005));
    CHECK(f.lambda_strong == doctest::Approx(0.5 * (mu + nu)).epsilon(1e-12));
    CHECK(f.lambda_strong == doctest::Approx(1.395).epsilon(0.005));
    // Weak side given one goal conceded: exp(1.431 - 0.000728*1764 + 0.137).
    CHECK(f.weak_rate(1) == doctest::Approx(1.33).epsilon(0.005));
    CHECK(f.weak_rate(0) == doctest::Approx(std::exp(1.431 - 0.000728 * 1764.0)).epsilon(1e-12));
}

TEST_CASE("forecast orientation is by rating with id as the tiebreak") {
    TeamModelMap m = worked_example_models();
    MatchForecast f = forecast(m, "CIV", 1612.0, "SEN", 1764.0);
    CHECK(f.strong == "SEN");
    CHECK(f.swapped);
    MatchForecast g = forecast(m, "SEN", 1600.0, "CIV", 1600.0);
    CHECK(g.strong == "CIV");  // lexicographically smaller id wins the tie
    CHECK(g.swapped);
    CHECK_THROWS_AS(forecast(m, "SEN", 1700.0, "SEN", 1600.0), FitError);
    CHECK_THROWS_AS(forecast(m, "SEN", 1700.0, "GHA", 1600.0), DataError);
}

TEST_CASE("forecast via a rating table uses the listed ratings") {
    TeamModelMap m = worked_example_models();
    EloTable elo;
    elo.ratings = {{"SEN", 1764.0}, {"CIV", 1612.0}};
    MatchForecast f = forecast(m, elo, "SEN", "CIV");
    CHECK(f.strong_elo == 1764.0);
    CHECK(f.weak_elo == 1612.0);
    elo.ratings.erase("CIV");
    CHECK_THROWS_AS(forecast(m, elo, "SEN", "CIV"), DataError);
}

TEST_CASE("score matrix sums to one with faithful interior cells") {
    TeamModelMap m = worked_example_models();
    MatchForecast f = forecast(m, "SEN", 1764.0, "CIV", 1612.0);
    Eigen::MatrixXd mat = score_matrix(f, 8);
    REQUIRE(mat.rows() == 10);
    REQUIRE(mat.cols() == 10);
    CHECK(mat.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // Interior cells are exact products of the two conditional densities.
    for (int i = 0; i <= 8; ++i) {
        double pa = poisson_pmf(i, f.lambda_strong);
        for (int j = 0; j <= 8; ++j) {
            CHECK(mat(i, j) == doctest::Approx(pa * poisson_pmf(j, f.weak_rate(i))).epsilon(1e-12));
        }
    }
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) CHECK(mat(i, j) >= 0.0);
    }
    // The most likely cell for this pairing is one all.
    Eigen::Index bi, bj;
    mat.maxCoeff(&bi, &bj);
    CHECK(bi == 1);
    CHECK(bj == 1);
}

TEST_CASE("score matrix with max_goals zero is a 2x2 split") {
    TeamModelMap m = worked_example_models();
    MatchForecast f = forecast(m, "SEN", 1764.0, "CIV", 1612.0);
    Eigen::MatrixXd mat = score_matrix(f, 0);
    REQUIRE(mat.rows() == 2);
    CHECK(mat.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mat(0, 0) ==
          doctest::Approx(poisson_pmf(0, f.lambda_strong) * poisson_pmf(0, f.weak_rate(0)))
              .epsilon(1e-12));
    CHECK_THROWS_AS(score_matrix(f, -1), std::invalid_argument);
}

TEST_CASE("win-draw-loss probabilities agree with a direct double sum") {
    TeamModelMap m = worked_example_models();
    MatchForecast f = forecast(m, "SEN", 1764.0, "CIV", 1612.0);
    WinDrawLoss w = win_draw_loss(f);
    CHECK(w.strong_win + w.draw + w.weak_win == doctest::Approx(1.0).epsilon(1e-9));
    // Oracle: truncated double sum to 60 goals, written out directly.
    double win = 0, draw = 0, loss = 0;
    for (int i = 0; i <= 60; ++i) {
        double pa = poisson_pmf(i, f.lambda_strong);
        for (int j = 0; j <= 60; ++j) {
            double p = pa * poisson_pmf(j, f.weak_rate(i));
            if (i > j) {
                win += p;
            } else if (i == j) {
                draw += p;
            } else {
                loss += p;
            }
        }
    }
    CHECK(w.strong_win == doctest::Approx(win).epsilon(1e-9));
    CHECK(w.draw == doctest::Approx(draw).epsilon(1e-9));
    CHECK(w.weak_win == doctest::Approx(loss).epsilon(1e-9));
}

TEST_CASE("simulated matches reproduce the analytic score distribution") {
    TeamModelMap m = worked_example_models();
    MatchForecast f = forecast(m, "SEN", 1764.0, "CIV", 1612.0);
    RngStream rng(314159);
    const int n = 100000;
    double mean_strong = 0.0;
    int count_10 = 0, count_00 = 0;
    for (int i = 0; i < n; ++i) {
        Score s = simulate_match(f, rng);
        mean_strong += s.goals_strong;
        if (s.goals_strong == 1 && s.goals_weak == 0) ++count_10;
        if (s.goals_strong == 0 && s.goals_weak == 0) ++count_00;
    }
    mean_strong /= n;
    CHECK(std::fabs(mean_strong - f.lambda_strong) < 4.0 * std::sqrt(f.lambda_strong / n));
    Eigen::MatrixXd mat = score_matrix(f, 6);
    auto near = [&](int count, double p) {
        double se = std::sqrt(p * (1 - p) / n);
        return std::fabs(count / static_cast<double>(n) - p) < 4.0 * se;
    };
    CHECK(near(count_10, mat(1, 0)));
    CHECK(near(count_00, mat(0, 0)));
}

TEST_CASE("per-team fits recover the generating coefficients") {
    RngStream rng(555);
    std::vector<std::pair<std::string, double>> league = {
        {"AAA", 1750}, {"BBB", 1650}, {"CCC", 1550}, {"DDD", 1450}};
    auto records = synthetic_league(league, 40, rng);  // 240 matches, 120 per team
    std::vector<TeamId> teams;
    for (const auto& [id, elo] : league) teams.push_back({id, ""});
    TeamModelMap models = fit_team_models(records, teams, 8);
    REQUIRE(models.size() == 4);
    for (const auto& [id, m] : models) {
        CHECK(!m.fallback);
        CHECK(m.n_matches == 120);
        // Generator used intercept 2.3 and slope -0.001 for both directions.
        CHECK(std::fabs(m.attack.coefficients[0] - 2.3) <= 4.0 * m.attack.standard_errors[0]);
        CHECK(std::fabs(m.attack.coefficients[1] + 0.001) <= 4.0 * m.attack.standard_errors[1]);
        CHECK(std::fabs(m.concede.coefficients[0] - 2.3) <= 4.0 * m.concede.standard_errors[0]);
        // Goals were independent, so the conditional term should be near zero.
        CHECK(std::fabs(m.nested.coefficients[2]) <= 4.0 * m.nested.standard_errors[2]);
    }
}

TEST_CASE("thin teams get pooled coefficients and the fallback flag") {
    RngStream rng(556);
    std::vector<std::pair<std::string, double>> league = {
        {"AAA", 1700}, {"BBB", 1600}, {"CCC", 1500}};
    auto records = synthetic_league(league, 30, rng);
    // EEE appears in just two matches.
    MatchRecord thin;
    thin.date = *Date::parse("2018-05-01");
    thin.team_a = "EEE";
    thin.team_b = "AAA";
    thin.goals_a = 1;
    thin.goals_b = 2;
    thin.elo_a = 1400;
    thin.elo_b = 1700;
    thin.neutral = true;
    records.push_back(thin);
    thin.date = *Date::parse("2018-06-01");
    thin.team_b = "BBB";
    thin.goals_b = 3;
    records.push_back(thin);

    std::vector<TeamId> teams = {{"AAA", ""}, {"BBB", ""}, {"CCC", ""}, {"EEE", ""}};
    TeamModelMap models = fit_team_models(records, teams, 8);
    CHECK(!models.at("AAA").fallback);
    CHECK(models.at("EEE").fallback);
    CHECK(models.at("EEE").n_matches == 2);

    // The pooled coefficients come from every team's rows stacked together.
    std::vector<double> y, elo;
    for (const auto& id : {"AAA", "BBB", "CCC", "EEE"}) {
        for (const auto& row : team_history(records, id)) {
            y.push_back(row.goals_for);
            elo.push_back(row.opponent_elo);
        }
    }
    GlmFit pooled = fit_poisson(make_design(y, {elo}));
    CHECK(models.at("EEE").attack.coefficients[0] ==
          doctest::Approx(pooled.coefficients[0]).epsilon(1e-12));
    CHECK(models.at("EEE").attack.coefficients[1] ==
          doctest::Approx(pooled.coefficients[1]).epsilon(1e-12));
}

TEST_CASE("fitting fails when no team has enough data") {
    RngStream rng(557);
    std::vector<std::pair<std::string, double>> league = {{"AAA", 1700}, {"BBB", 1600}};
    auto records = synthetic_league(league, 2, rng);  // two matches per team
    std::vector<TeamId> teams = {{"AAA", ""}, {"BBB", ""}};
    CHECK_THROWS_AS(fit_team_models(records, teams, 8), FitError);
}

TEST_CASE("model bundles survive a save and load round trip") {
    TeamModelMap m = worked_example_models();
    fs::path file = fs::temp_directory_path() /
                    ("cupcast-bundle-" + std::to_string(::getpid()) + ".json");
    save_models(file, m);
    TeamModelMap loaded = load_models(file);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded.at("SEN").team.display_name == "Senegal");
    CHECK(loaded.at("SEN").attack.coefficients == m.at("SEN").attack.coefficients);
    CHECK(loaded.at("CIV").nested.coefficients == m.at("CIV").nested.coefficients);
    CHECK(loaded.at("CIV").n_matches == 31);

    // Forecasts from the loaded bundle are identical.
    MatchForecast f0 = forecast(m, "SEN", 1764.0, "CIV", 1612.0);
    MatchForecast f1 = forecast(loaded, "SEN", 1764.0, "CIV", 1612.0);
    CHECK(f0.lambda_strong == f1.lambda_strong);
    CHECK(f0.weak_log_base == f1.weak_log_base);
    fs::remove(file);
}

TEST_CASE("broken bundles are rejected") {
    fs::path dir = fs::temp_directory_path();
    auto write = [&](const std::string& name, const std::string& content) {
        fs::path p = dir / ("cupcast-bad-" + std::to_string(::getpid()) + name);
        std::ofstream(p) << content;
        return p;
    };
    CHECK_THROWS_AS(load_models(dir / "does-not-exist.json"), DataError);
    auto bad_json = write("1.json", "{ not json");
    CHECK_THROWS_AS(load_models(bad_json), DataError);
    auto bad_version = write("2.json", R"({"format_version": 99, "kind": "team-models", "teams": {}})");
    CHECK_THROWS_AS(load_models(bad_version), DataError);
    auto bad_kind = write("3.json", R"({"format_version": 1, "kind": "something", "teams": {}})");
    CHECK_THROWS_AS(load_models(bad_kind), DataError);
    auto empty = write("4.json", R"({"format_version": 1, "kind": "team-models", "teams": {}})");
    CHECK_THROWS_AS(load_models(empty), DataError);
    auto wrong_coefs = write(
        "5.json",
        R"({"format_version": 1, "kind": "team-models", "teams": {"X": {
            "display_name": "", "n_matches": 9, "fallback": false,
            "attack": {"coefficients": [1.0], "standard_errors": [0.1],
                       "null_deviance": 1, "residual_deviance": 1, "n_obs": 9,
                       "iterations": 3, "converged": true},
            "concede": {"coefficients": [1.0, 2.0], "standard_errors": [0.1, 0.1],
                       "null_deviance": 1, "residual_deviance": 1, "n_obs": 9,
                       "iterations": 3, "converged": true},
            "nested": {"coefficients": [1.0, 2.0, 3.0], "standard_errors": [0.1, 0.1, 0.1],
                       "null_deviance": 1, "residual_deviance": 1, "n_obs": 9,
                       "iterations": 3, "converged": true}}}})");
    CHECK_THROWS_AS(load_models(wrong_coefs), DataError);
    for (const char* n : {"1.json", "2.json", "3.json", "4.json", "5.json"}) {
        fs::remove(dir / ("cupcast-bad-" + std::to_string(::getpid()) + n));
    }
}
