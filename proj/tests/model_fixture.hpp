#pragma once

// Hand-set team models and a spread of baseline ratings for the canonical
// 24-team configuration. Every team shares the same coefficients, so match
// outcomes are driven purely by the rating gap.

#include <string>
#include <vector>

#include "config_fixture.hpp"
#include "cupcast/config.hpp"
#include "cupcast/data_ingestion.hpp"
#include "cupcast/glm.hpp"
#include "cupcast/match_model.hpp"

namespace fixture {

inline cupcast::GlmFit hand_fit(std::vector<double> coefs) {
    cupcast::GlmFit f;
    f.coefficients = std::move(coefs);
    f.standard_errors.assign(f.coefficients.size(), 0.1);
    f.n_obs = 30;
    f.p_params = static_cast<int>(f.coefficients.size());
    f.converged = true;
    f.iterations = 5;
    return f;
}

inline cupcast::TournamentConfig fixture_config() {
    return cupcast::TournamentConfig::from_json(base_config());
}

inline cupcast::TeamModelMap fixture_models(const cupcast::TournamentConfig& cfg) {
    cupcast::TeamModelMap m;
    for (const auto& id : cfg.team_ids()) {
        cupcast::TeamModel t;
        t.team = {id, "Team " + id};
        t.attack = hand_fit({2.73, -0.00145});
        t.concede = hand_fit({-4.0158, 0.00243});
        t.nested = hand_fit({1.431, -0.000728, 0.137});
        t.n_matches = 20;
        m[id] = t;
    }
    return m;
}

inline cupcast::EloTable fixture_ratings(const cupcast::TournamentConfig& cfg) {
    cupcast::EloTable base;
    int i = 0;
    for (const auto& id : cfg.team_ids()) base.ratings[id] = 1780.0 - 15.0 * i++;
    return base;
}

}  // namespace fixture
