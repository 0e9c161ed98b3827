#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "cupcast/config.hpp"
#include "cupcast/data_ingestion.hpp"
#include "cupcast/elo.hpp"
#include "cupcast/errors.hpp"
#include "cupcast/match_model.hpp"
#include "cupcast/monte_carlo.hpp"
#include "cupcast/reporting.hpp"
#include "cupcast/tournament.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct WindowFlags {
    std::string from = "2010-01-01";
    std::string to = "2019-04-12";
    bool neutral_only = true;
};

void add_window_flags(CLI::App* cmd, WindowFlags& w) {
    cmd->add_option("--from", w.from, "start of the training window (YYYY-MM-DD)")
        ->capture_default_str();
    cmd->add_option("--to", w.to, "end of the training window, inclusive (YYYY-MM-DD)")
        ->capture_default_str();
    cmd->add_option("--neutral-only", w.neutral_only,
                    "restrict training to neutral-venue matches")
        ->capture_default_str();
}

cupcast::Date parse_date_flag(const std::string& s, const char* what) {
    auto d = cupcast::Date::parse(s);
    if (!d) throw cupcast::DataError(std::string(what) + ": invalid date '" + s + "'");
    return *d;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw cupcast::DataError("cannot create directory '" + dir.string() + "'");
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cupcast::DataError("cannot write '" + path.string() + "'");
    out << content;
}

// Inputs and knobs that shape the results. Deliberately excludes the output
// directory and the worker count: neither may influence what gets written.
void write_manifest(const fs::path& out_dir, json extra) {
    extra["tool"] = "cupcast";
    extra["tool_version"] = kVersion;
    write_file(out_dir / "manifest.json", extra.dump(2) + "\n");
}

cupcast::Variant parse_variant(const std::string& s) {
    if (s == "with-thirds") return cupcast::Variant::WithThirds;
    if (s == "without-thirds") return cupcast::Variant::WithoutThirds;
    throw cupcast::ConfigError("unknown variant '" + s + "'");
}

std::map<std::string, std::vector<cupcast::HistoryRow>> windowed_histories(
    const std::vector<cupcast::MatchRecord>& records, const WindowFlags& w,
    const std::vector<std::string>& team_ids) {
    auto windowed = cupcast::training_window(records, parse_date_flag(w.from, "--from"),
                                             parse_date_flag(w.to, "--to"), w.neutral_only);
    std::map<std::string, std::vector<cupcast::HistoryRow>> out;
    for (const auto& id : team_ids) out[id] = cupcast::team_history(windowed, id);
    return out;
}

int cmd_fit(const std::string& matches_path, const std::string& teams_path,
            const std::string& out_dir, const WindowFlags& w, int min_matches) {
    auto records = cupcast::load_matches(matches_path);
    auto teams = cupcast::load_team_list(teams_path);
    auto windowed = cupcast::training_window(records, parse_date_flag(w.from, "--from"),
                                             parse_date_flag(w.to, "--to"), w.neutral_only);
    auto models = cupcast::fit_team_models(windowed, teams, min_matches);

    ensure_dir(out_dir);
    cupcast::save_models(fs::path(out_dir) / "models.json", models);
    write_manifest(out_dir, json{{"command", "fit"},
                                 {"matches", matches_path},
                                 {"teams", teams_path},
                                 {"from", w.from},
                                 {"to", w.to},
                                 {"neutral_only", w.neutral_only},
                                 {"min_matches", min_matches},
                                 {"training_rows", windowed.size()}});

    int fallbacks = 0;
    for (const auto& [id, m] : models) fallbacks += m.fallback ? 1 : 0;
    std::cout << "fitted " << models.size() << " teams on " << windowed.size()
              << " matches (" << fallbacks << " with pooled coefficients)\n";
    std::cout << "wrote " << (fs::path(out_dir) / "models.json").string() << "\n";
    return 0;
}

int cmd_forecast(const std::string& models_path, const std::string& elo_path,
                 const std::string& out_dir, int max_goals, const std::string& team_a,
                 const std::string& team_b) {
    auto models = cupcast::load_models(models_path);
    auto elo = cupcast::load_elo(elo_path);
    auto fc = cupcast::forecast(models, elo, team_a, team_b);
    auto table = cupcast::oriented_score_matrix(fc, max_goals, team_a, models);

    ensure_dir(out_dir);
    fs::path out = fs::path(out_dir) / ("score_matrix_" + team_a + "_" + team_b + ".csv");
    write_file(out, cupcast::render_score_matrix(table, cupcast::TableFormat::Csv));
    write_manifest(out_dir, json{{"command", "forecast"},
                                 {"models", models_path},
                                 {"elo", elo_path},
                                 {"team_a", team_a},
                                 {"team_b", team_b},
                                 {"max_goals", max_goals}});

    std::cout << cupcast::render_score_matrix(table, cupcast::TableFormat::Text);
    auto wdl = cupcast::win_draw_loss(fc);
    double p_a = fc.strong == team_a ? wdl.strong_win : wdl.weak_win;
    double p_b = fc.strong == team_a ? wdl.weak_win : wdl.strong_win;
    std::cout << "win " << team_a << " " << cupcast::format_percent(p_a) << "  draw "
              << cupcast::format_percent(wdl.draw) << "  win " << team_b << " "
              << cupcast::format_percent(p_b) << "\n";
    // E[weak goals] = exp(base) * E[exp(coef * strong goals)], a Poisson mgf.
    double weak_mean = std::exp(fc.weak_log_base) *
                       std::exp(fc.lambda_strong * (std::exp(fc.weak_goal_coef) - 1.0));
    double mean_a = fc.strong == team_a ? fc.lambda_strong : weak_mean;
    double mean_b = fc.strong == team_a ? weak_mean : fc.lambda_strong;
    std::cout << "expected goals: " << team_a << " " << cupcast::format_fixed(mean_a, 3) << ", "
              << team_b << " " << cupcast::format_fixed(mean_b, 3) << "\n";
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

json simulation_manifest(const char* command, const std::string& models_path,
                         const std::string& elo_path, const std::string& config_path,
                         std::uint64_t runs, std::uint64_t seed) {
    return json{{"command", command}, {"models", models_path},     {"elo", elo_path},
                {"config", config_path}, {"runs", runs},           {"seed", seed}};
}

int cmd_simulate(const std::string& models_path, const std::string& elo_path,
                 const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> runs_flag, std::optional<std::uint64_t> seed_flag,
                 const std::string& variant_flag, int jobs) {
    auto models = cupcast::load_models(models_path);
    auto elo = cupcast::load_elo(elo_path);
    auto config = cupcast::TournamentConfig::load(config_path);
    std::uint64_t runs = runs_flag.value_or(config.simulations());
    std::uint64_t seed = seed_flag.value_or(config.seed());
    cupcast::Variant variant = parse_variant(variant_flag);

    auto summary = cupcast::run_simulations(config, models, elo, runs, seed, variant, jobs);
    auto stages = cupcast::stage_probabilities(summary);
    auto groups = cupcast::group_probabilities(summary);

    ensure_dir(out_dir);
    write_file(fs::path(out_dir) / "stages.csv",
               cupcast::render_stage_table(stages, cupcast::TableFormat::Csv));
    for (const auto& [label, rows] : groups.groups) {
        write_file(fs::path(out_dir) / (std::string("group_") + label + ".csv"),
                   cupcast::render_group_table(groups, label, cupcast::TableFormat::Csv));
    }
    write_file(fs::path(out_dir) / "summary.json",
               cupcast::summary_to_json(summary).dump(2) + "\n");
    json manifest = simulation_manifest("simulate", models_path, elo_path, config_path, runs, seed);
    manifest["variant"] = variant_flag;
    write_manifest(out_dir, manifest);

    std::cout << cupcast::render_stage_table(stages, cupcast::TableFormat::Text);
    std::cout << "n_runs " << runs << ", seed " << seed << ", variant " << variant_flag << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "stages.csv").string() << " and "
              << groups.groups.size() << " group tables\n";
    return 0;
}

int cmd_compare(const std::string& models_path, const std::string& elo_path,
                const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> runs_flag, std::optional<std::uint64_t> seed_flag,
                const std::string& variant_a, const std::string& variant_b, int jobs) {
    auto models = cupcast::load_models(models_path);
    auto elo = cupcast::load_elo(elo_path);
    auto config = cupcast::TournamentConfig::load(config_path);
    std::uint64_t runs = runs_flag.value_or(config.simulations());
    std::uint64_t seed = seed_flag.value_or(config.seed());

    auto sum_a =
        cupcast::run_simulations(config, models, elo, runs, seed, parse_variant(variant_a), jobs);
    auto sum_b =
        cupcast::run_simulations(config, models, elo, runs, seed, parse_variant(variant_b), jobs);
    auto diff = cupcast::diff_summaries(sum_a, sum_b);

    ensure_dir(out_dir);
    write_file(fs::path(out_dir) / "diff.csv",
               cupcast::render_diff_table(diff, cupcast::TableFormat::Csv));
    json manifest = simulation_manifest("compare", models_path, elo_path, config_path, runs, seed);
    manifest["variant_a"] = variant_a;
    manifest["variant_b"] = variant_b;
    write_manifest(out_dir, manifest);

    std::cout << cupcast::render_diff_table(diff, cupcast::TableFormat::Text);
    std::cout << "delta = " << variant_a << " minus " << variant_b
              << ", percentage points\n";
    std::cout << "wrote " << (fs::path(out_dir) / "diff.csv").string() << "\n";
    return 0;
}

int cmd_gof(const std::string& models_path, const std::string& matches_path,
            const std::string& out_dir, const WindowFlags& w,
            const std::vector<std::string>& curves) {
    auto models = cupcast::load_models(models_path);
    auto records = cupcast::load_matches(matches_path);
    std::vector<std::string> ids;
    for (const auto& [id, m] : models) ids.push_back(id);
    auto histories = windowed_histories(records, w, ids);
    auto report = cupcast::gof_report(models, histories);

    ensure_dir(out_dir);
    write_file(fs::path(out_dir) / "gof.csv",
               cupcast::render_gof(report, cupcast::TableFormat::Csv));

    for (const auto& request : curves) {
        auto colon = request.find(':');
        if (colon == std::string::npos) {
            throw cupcast::DataError("curve argument must be TEAM:KIND, got '" + request + "'");
        }
        std::string team = request.substr(0, colon);
        std::string kind = request.substr(colon + 1);
        auto it = models.find(team);
        if (it == models.end()) throw cupcast::DataError("no fitted model for team '" + team + "'");
        const auto& hist = histories[team];
        if (hist.empty()) throw cupcast::DataError("no matches for team '" + team + "' in window");
        double lo = hist[0].opponent_elo, hi = hist[0].opponent_elo;
        for (const auto& r : hist) {
            lo = std::min(lo, r.opponent_elo);
            hi = std::max(hi, r.opponent_elo);
        }
        std::vector<double> grid;
        for (double e = std::floor(lo / 10.0) * 10.0; e <= hi + 10.0; e += 10.0) grid.push_back(e);
        auto curve = cupcast::regression_curve(it->second, hist, kind, grid);
        write_file(fs::path(out_dir) / ("curve_" + team + "_" + kind + ".csv"),
                   cupcast::render_curve(curve, cupcast::TableFormat::Csv));
    }

    write_manifest(out_dir, json{{"command", "gof"},
                                 {"models", models_path},
                                 {"matches", matches_path},
                                 {"from", w.from},
                                 {"to", w.to},
                                 {"neutral_only", w.neutral_only},
                                 {"curves", curves}});

    auto fmt = [](const std::optional<double>& p) {
        return p ? cupcast::format_fixed(*p, 4) : std::string("n/a");
    };
    std::cout << "mean Pearson p: attack " << fmt(report.mean_attack_p) << ", concede "
              << fmt(report.mean_concede_p) << ", conditional " << fmt(report.mean_nested_p)
              << ", overall " << fmt(report.mean_p) << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "gof.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tournament forecaster driven by rating-conditioned goal regressions"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "fit per-team goal regressions from match history");
    std::string fit_matches, fit_teams, fit_out;
    WindowFlags fit_window;
    int fit_min_matches = 8;
    fit->add_option("--matches", fit_matches, "match history CSV")->required();
    fit->add_option("--teams", fit_teams, "participating teams, one per line")->required();
    fit->add_option("--out", fit_out, "output directory")->required();
    fit->add_option("--min-matches", fit_min_matches,
                    "fewest matches before a team gets its own coefficients")
        ->capture_default_str();
    add_window_flags(fit, fit_window);

    // forecast
    auto* fo = app.add_subcommand("forecast", "score distribution for a single fixture");
    std::string fo_models, fo_elo, fo_out, fo_team_a, fo_team_b;
    int fo_max_goals = 10;
    fo->add_option("--models", fo_models, "fitted model bundle (models.json)")->required();
    fo->add_option("--elo", fo_elo, "rating table CSV")->required();
    fo->add_option("--out", fo_out, "output directory")->required();
    fo->add_option("--max-goals", fo_max_goals, "largest goal count shown explicitly")
        ->capture_default_str()
        ->check(CLI::Range(0, 100));
    fo->add_option("team_a", fo_team_a, "first team id")->required();
    fo->add_option("team_b", fo_team_b, "second team id")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo tournament simulation");
    std::string sim_models, sim_elo, sim_config, sim_out, sim_variant = "with-thirds";
    std::optional<std::uint64_t> sim_runs, sim_seed;
    int sim_jobs = 1;
    sim->add_option("--models", sim_models, "fitted model bundle (models.json)")->required();
    sim->add_option("--elo", sim_elo, "baseline rating table CSV")->required();
    sim->add_option("--config", sim_config, "tournament structure JSON")->required();
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_option("--runs", sim_runs, "number of simulated tournaments (default from config)");
    sim->add_option("--seed", sim_seed, "master seed (default from config)");
    sim->add_option("--variant", sim_variant, "with-thirds or without-thirds")
        ->capture_default_str()
        ->check(CLI::IsMember({"with-thirds", "without-thirds"}));
    sim->add_option("--jobs", sim_jobs, "worker threads; never changes the results")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));

    // gof
    auto* gof = app.add_subcommand("gof", "goodness-of-fit diagnostics for a fitted bundle");
    std::string gof_models, gof_matches, gof_out;
    WindowFlags gof_window;
    std::vector<std::string> gof_curves;
    gof->add_option("--models", gof_models, "fitted model bundle (models.json)")->required();
    gof->add_option("--matches", gof_matches, "match history CSV")->required();
    gof->add_option("--out", gof_out, "output directory")->required();
    gof->add_option("--curve", gof_curves,
                    "also write a fitted-curve table, TEAM:KIND with KIND attack|concede");
    add_window_flags(gof, gof_window);

    // compare
    auto* cmp = app.add_subcommand("compare", "stage probability differences between variants");
    std::string cmp_models, cmp_elo, cmp_config, cmp_out;
    std::string cmp_variant_a = "without-thirds", cmp_variant_b = "with-thirds";
    std::optional<std::uint64_t> cmp_runs, cmp_seed;
    int cmp_jobs = 1;
    cmp->add_option("--models", cmp_models, "fitted model bundle (models.json)")->required();
    cmp->add_option("--elo", cmp_elo, "baseline rating table CSV")->required();
    cmp->add_option("--config", cmp_config, "tournament structure JSON")->required();
    cmp->add_option("--out", cmp_out, "output directory")->required();
    cmp->add_option("--runs", cmp_runs, "number of simulated tournaments per variant");
    cmp->add_option("--seed", cmp_seed, "master seed (default from config)");
    cmp->add_option("--variant-a", cmp_variant_a, "left side of the difference")
        ->capture_default_str()
        ->check(CLI::IsMember({"with-thirds", "without-thirds"}));
    cmp->add_option("--variant-b", cmp_variant_b, "right side of the difference")
        ->capture_default_str()
        ->check(CLI::IsMember({"with-thirds", "without-thirds"}));
    cmp->add_option("--jobs", cmp_jobs, "worker threads; never changes the results")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit->parsed()) {
            return cmd_fit(fit_matches, fit_teams, fit_out, fit_window, fit_min_matches);
        }
        if (fo->parsed()) {
            return cmd_forecast(fo_models, fo_elo, fo_out, fo_max_goals, fo_team_a, fo_team_b);
        }
        if (sim->parsed()) {
            return cmd_simulate(sim_models, sim_elo, sim_config, sim_out, sim_runs, sim_seed,
                                sim_variant, sim_jobs);
        }
        if (gof->parsed()) {
            return cmd_gof(gof_models, gof_matches, gof_out, gof_window, gof_curves);
        }
        if (cmp->parsed()) {
            return cmd_compare(cmp_models, cmp_elo, cmp_config, cmp_out, cmp_runs, cmp_seed,
                               cmp_variant_a, cmp_variant_b, cmp_jobs);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
