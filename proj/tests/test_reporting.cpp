#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "model_fixture.hpp"
#include "cupcast/errors.hpp"
#include "cupcast/reporting.hpp"

using namespace cupcast;

TEST_CASE("fixed-decimal rendering rounds ties away from zero") {
    CHECK(format_fixed(0.125, 2) == "0.13");
    CHECK(format_fixed(-0.125, 2) == "-0.13");
    CHECK(format_fixed(0.375, 1) == "0.4");
    CHECK(format_fixed(1.5, 0) == "2");
    CHECK(format_fixed(-1.5, 0) == "-2");
    CHECK(format_fixed(2.5, 0) == "3");
    CHECK(format_fixed(3.14159, 3) == "3.142");
    CHECK(format_fixed(123.456, 2) == "123.46");
    CHECK(format_fixed(0.999, 2) == "1.00");  // carry into the whole part
    CHECK(format_fixed(0.0, 2) == "0.00");
    CHECK(format_fixed(-0.0001, 2) == "0.00");  // never "-0.00"
    CHECK(format_fixed(-0.005, 2) == "-0.01");
    CHECK(format_fixed(7.0, 4) == "7.0000");
    CHECK_THROWS_AS(format_fixed(1.0, -1), Error);
    CHECK_THROWS_AS(format_fixed(1.0, 10), Error);
    CHECK_THROWS_AS(format_fixed(std::nan(""), 2), Error);
    CHECK_THROWS_AS(format_fixed(INFINITY, 2), Error);
}

TEST_CASE("probabilities render as two-decimal percentages") {
    CHECK(format_percent(0.154) == "15.40");
    CHECK(format_percent(0.0) == "0.00");
    CHECK(format_percent(1.0) == "100.00");
    CHECK(format_percent(0.33) == "33.00");
    CHECK(format_percent(0.005) == "0.50");
}

TEST_CASE("regression curves evaluate the fitted mean over the grid") {
    TeamModel model;
    model.team = {"SEN", "Senegal"};
    model.attack = fixture::hand_fit({2.73, -0.00145});
    model.concede = fixture::hand_fit({-4.0158, 0.00243});
    model.nested = fixture::hand_fit({1.431, -0.000728, 0.137});

    std::vector<HistoryRow> history = {
        {1500.0, 2, 1, 1},
        {1620.0, 0, 3, 3},
    };
    std::vector<double> grid = {1400.0, 1612.0};
    RegressionCurve c = regression_curve(model, history, "attack", grid);
    CHECK(c.team_id == "SEN");
    CHECK(c.team_name == "Senegal");
    CHECK(c.kind == "attack");
    REQUIRE(c.fitted.size() == 2);
    CHECK(c.fitted[0].second == doctest::Approx(std::exp(2.73 - 0.00145 * 1400.0)).epsilon(1e-12));
    CHECK(c.fitted[1].second == doctest::Approx(std::exp(2.73 - 0.00145 * 1612.0)).epsilon(1e-12));
    REQUIRE(c.observed.size() == 2);
    CHECK(c.observed[0] == std::pair{1500.0, 2});
    CHECK(c.observed[1] == std::pair{1620.0, 0});

    RegressionCurve cc = regression_curve(model, history, "concede", grid);
    CHECK(cc.observed[0].second == 1);  // conceded counts, not scored
    CHECK(cc.observed[1].second == 3);
    CHECK(cc.fitted[0].second ==
          doctest::Approx(std::exp(-4.0158 + 0.00243 * 1400.0)).epsilon(1e-12));

    CHECK_THROWS_AS(regression_curve(model, history, "nested", grid), Error);
}

namespace {

// A team model actually fitted to its own short history, so the diagnostic
// statistics are well defined.
std::pair<TeamModelMap, std::map<std::string, std::vector<HistoryRow>>> fitted_fixture() {
    std::vector<HistoryRow> rows = {
        {1400, 3, 0, 0}, {1450, 2, 1, 1}, {1500, 2, 0, 0}, {1520, 1, 1, 1},
        {1550, 2, 2, 2}, {1600, 1, 0, 0}, {1620, 0, 1, 1}, {1650, 1, 2, 2},
        {1680, 0, 1, 1}, {1700, 1, 3, 3}, {1720, 0, 2, 2}, {1750, 0, 1, 1},
        {1760, 1, 2, 2}, {1780, 0, 3, 3},
    };
    std::vector<double> gf, ga, elo, og;
    for (const auto& r : rows) {
        gf.push_back(r.goals_for);
        ga.push_back(r.goals_against);
        elo.push_back(r.opponent_elo);
        og.push_back(r.opponent_goals);
    }
    TeamModel m;
    m.team = {"AAA", "Alpha"};
    m.attack = fit_poisson(make_design(gf, {elo}));
    m.concede = fit_poisson(make_design(ga, {elo}));
    m.nested = fit_poisson(make_design(gf, {elo, og}));
    m.n_matches = static_cast<int>(rows.size());

    TeamModelMap models;
    models["AAA"] = m;
    std::map<std::string, std::vector<HistoryRow>> histories;
    histories["AAA"] = rows;
    return {models, histories};
}

}  // namespace

TEST_CASE("the diagnostics report covers every regression of every team") {
    auto [models, histories] = fitted_fixture();
    GofReport report = gof_report(models, histories);
    REQUIRE(report.rows.size() == 1);
    const TeamGofRow& row = report.rows[0];
    CHECK(row.team_id == "AAA");
    CHECK(row.n_matches == 14);
    CHECK(!row.fallback);
    REQUIRE(row.attack.has_value());
    REQUIRE(row.concede.has_value());
    REQUIRE(row.nested.has_value());
    CHECK(row.attack->df == 12);  // 14 observations, 2 parameters
    CHECK(row.nested->df == 11);
    CHECK(row.attack->p_value >= 0.0);
    CHECK(row.attack->p_value <= 1.0);
    REQUIRE(row.attack_dev.has_value());
    CHECK(row.attack_dev->df == 12);  // residual deviance keeps the n - p convention
    REQUIRE(report.mean_p.has_value());
    CHECK(*report.mean_attack_p == row.attack->p_value);
    CHECK(*report.mean_p >= 0.0);
    CHECK(*report.mean_p <= 1.0);

    // Pooled coefficients carry no per-team deviance comparison.
    models.at("AAA").fallback = true;
    GofReport fb = gof_report(models, histories);
    CHECK(fb.rows[0].attack.has_value());
    CHECK(!fb.rows[0].attack_dev.has_value());

    std::string csv = render_gof(report, TableFormat::Csv);
    CHECK(csv.find("team,name,n_matches,fallback,attack_x2,attack_df,attack_p") == 0);
    CHECK(csv.find("AAA,Alpha,14,false,") != std::string::npos);
    std::string json_text = render_gof(report, TableFormat::Json);
    auto j = nlohmann::json::parse(json_text);
    CHECK(j["rows"][0]["attack"]["df"] == 12);
    CHECK(j["rows"][0]["team"] == "AAA");
}

TEST_CASE("the score table follows the requested orientation") {
    TournamentConfig cfg = fixture::fixture_config();
    TeamModelMap models = fixture::fixture_models(cfg);
    MatchForecast f = forecast(models, "T01", 1780.0, "T02", 1650.0);
    REQUIRE(f.strong == "T01");

    ScoreMatrixTable strong_first = oriented_score_matrix(f, 5, "T01", models);
    CHECK(strong_first.row_team == "T01");
    CHECK(strong_first.col_team == "T02");
    CHECK(strong_first.row_name == "Team T01");

    ScoreMatrixTable weak_first = oriented_score_matrix(f, 5, "T02", models);
    CHECK(weak_first.row_team == "T02");
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            CHECK(weak_first.probs(i, j) == strong_first.probs(j, i));
        }
    }
    CHECK_THROWS_AS(oriented_score_matrix(f, 5, "T03", models), Error);
}

TEST_CASE("stage tables render exactly") {
    StageProbabilities t;
    t.n_runs = 1000;
    t.team_ids = {"SEN", "EGY"};
    t.team_names = {"Senegal", "Egypt"};
    t.p = {{0.154, 0.2, 0.33, 0.5, 0.75}, {0.1, 0.18, 0.3, 0.45, 0.7}};

    std::string csv = render_stage_table(t, TableFormat::Csv);
    CHECK(csv ==
          "team,name,champion,final,semifinal,quarterfinal,last16\n"
          "SEN,Senegal,15.40,20.00,33.00,50.00,75.00\n"
          "EGY,Egypt,10.00,18.00,30.00,45.00,70.00\n");

    auto j = nlohmann::json::parse(render_stage_table(t, TableFormat::Json));
    CHECK(j["n_runs"] == 1000);
    CHECK(j["rows"][0]["team"] == "SEN");
    CHECK(j["rows"][0]["champion"] == doctest::Approx(0.154));
    CHECK(j["rows"][1]["last16"] == doctest::Approx(0.7));

    std::string text = render_stage_table(t, TableFormat::Text);
    CHECK(text.find("team") == 0);
    CHECK(text.find("champion") != std::string::npos);
    CHECK(text.find("SEN Senegal") != std::string::npos);
    CHECK(text.find("15.40") != std::string::npos);
}

TEST_CASE("group tables render exactly") {
    GroupProbabilities gp;
    gp.n_runs = 100;
    GroupRow row;
    row.team_id = "EGY";
    row.team_name = "Egypt";
    row.rank = {0.5, 0.25, 0.15, 0.1};
    row.advanced = 0.75;
    gp.groups.emplace_back('A', std::vector<GroupRow>{row});

    std::string csv = render_group_table(gp, 'A', TableFormat::Csv);
    CHECK(csv ==
          "team,name,first,second,third,fourth,advance\n"
          "EGY,Egypt,50.00,25.00,15.00,10.00,75.00\n");

    auto j = nlohmann::json::parse(render_group_table(gp, 'A', TableFormat::Json));
    CHECK(j["group"] == "A");
    CHECK(j["rows"][0]["first"] == doctest::Approx(0.5));

    std::string text = render_group_table(gp, 'A', TableFormat::Text);
    CHECK(text.find("group A") == 0);
    CHECK(text.find("advance") != std::string::npos);

    CHECK_THROWS_AS(render_group_table(gp, 'B', TableFormat::Csv), Error);
}

TEST_CASE("difference tables carry signed percentage points") {
    StageDiff d;
    d.team_ids = {"SEN"};
    d.team_names = {"Senegal"};
    d.p_a = {{0.12, 0.2, 0.3, 0.4, 0.5}};
    d.p_b = {{0.155, 0.2, 0.2875, 0.40005, 0.4}};
    d.delta_pp = {{-3.5, 0.0, 1.25, -0.005, 10.0}};

    std::string csv = render_diff_table(d, TableFormat::Csv);
    CHECK(csv ==
          "team,name,champion,final,semifinal,quarterfinal,last16\n"
          "SEN,Senegal,-3.50,0.00,1.25,-0.01,10.00\n");

    auto j = nlohmann::json::parse(render_diff_table(d, TableFormat::Json));
    CHECK(j["rows"][0]["champion"]["a"] == doctest::Approx(0.12));
    CHECK(j["rows"][0]["champion"]["b"] == doctest::Approx(0.155));
    CHECK(j["rows"][0]["champion"]["delta_pp"] == doctest::Approx(-3.5));

    std::string text = render_diff_table(d, TableFormat::Text);
    CHECK(text.find("-3.50") != std::string::npos);
}

TEST_CASE("score matrices render with an absorbing last line") {
    ScoreMatrixTable t;
    t.row_team = "SEN";
    t.row_name = "Senegal";
    t.col_team = "CIV";
    t.col_name = "Ivory Coast";
    t.max_goals = 1;
    t.probs = Eigen::MatrixXd(3, 3);
    t.probs << 0.50, 0.20, 0.05,
               0.10, 0.10, 0.02,
               0.01, 0.01, 0.012;

    std::string csv = render_score_matrix(t, TableFormat::Csv);
    CHECK(csv ==
          "goals,0,1,more\n"
          "0,50.00,20.00,5.00\n"
          "1,10.00,10.00,2.00\n"
          "more,1.00,1.00,1.20\n");

    auto j = nlohmann::json::parse(render_score_matrix(t, TableFormat::Json));
    CHECK(j["row_team"] == "SEN");
    CHECK(j["cells"][2][2] == doctest::Approx(0.012));

    std::string text = render_score_matrix(t, TableFormat::Text);
    CHECK(text.find("Senegal (rows) vs Ivory Coast (columns), percent\n") == 0);
    CHECK(text.find("more") != std::string::npos);
}

TEST_CASE("curve tables list the fit before the observations") {
    RegressionCurve c;
    c.team_id = "SEN";
    c.team_name = "Senegal";
    c.kind = "attack";
    c.fitted = {{1400.0, 1.5}, {1500.5, 0.25}};
    c.observed = {{1450.25, 2}};

    std::string csv = render_curve(c, TableFormat::Csv);
    CHECK(csv ==
          "series,elo,value\n"
          "fit,1400.0,1.500000\n"
          "fit,1500.5,0.250000\n"
          "obs,1450.3,2\n");

    auto j = nlohmann::json::parse(render_curve(c, TableFormat::Json));
    CHECK(j["team"] == "SEN");
    CHECK(j["fitted"][1]["mean"] == doctest::Approx(0.25));
    CHECK(j["observed"][0]["goals"] == 2);
}

TEST_CASE("raw counts serialize for machine use") {
    SimulationSummary s;
    s.n_runs = 10;
    s.seed = 42;
    s.variant = Variant::WithoutThirds;
    s.team_ids = {"SEN", "EGY"};
    s.team_names = {"Senegal", "Egypt"};
    s.team_group = {'A', 'B'};
    s.champion = {6, 4};
    s.reached_final = {7, 5};
    s.reached_semifinal = {8, 6};
    s.reached_quarterfinal = {9, 7};
    s.reached_last16 = {10, 8};
    for (int r = 0; r < 4; ++r) s.group_rank[r] = {r == 0 ? 10 : 0, r == 1 ? 10 : 0};
    s.third_qualified = {0, 0};
    s.advanced = {10, 8};

    nlohmann::json j = summary_to_json(s);
    CHECK(j["n_runs"] == 10);
    CHECK(j["seed"] == 42);
    CHECK(j["variant"] == "without-thirds");
    REQUIRE(j["teams"].size() == 2);
    CHECK(j["teams"][0]["team"] == "SEN");
    CHECK(j["teams"][0]["group"] == "A");
    CHECK(j["teams"][0]["champion"] == 6);
    CHECK(j["teams"][1]["rank2"] == 10);
    CHECK(j["teams"][1]["advanced"] == 8);

    s.variant = Variant::WithThirds;
    CHECK(summary_to_json(s)["variant"] == "with-thirds");
}
