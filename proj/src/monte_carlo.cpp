#include "cupcast/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "cupcast/errors.hpp"

namespace cupcast {

namespace {

struct Counts {
    std::vector<std::int64_t> champion, fin, semi, quarter, last16;
    std::vector<std::int64_t> rank[4];
    std::vector<std::int64_t> third_q, adv;

    explicit Counts(int n)
        : champion(n, 0), fin(n, 0), semi(n, 0), quarter(n, 0), last16(n, 0),
          third_q(n, 0), adv(n, 0) {
        for (auto& r : rank) r.assign(n, 0);
    }

    void add(const TournamentOutcome& o) {
        for (std::size_t t = 0; t < o.stage.size(); ++t) {
            Stage s = o.stage[t];
            if (s >= Stage::Champion) champion[t]++;
            if (s >= Stage::Final) fin[t]++;
            if (s >= Stage::Semifinal) semi[t]++;
            if (s >= Stage::Quarterfinal) quarter[t]++;
            if (s >= Stage::Last16) last16[t]++;
            rank[o.group_rank[t] - 1][t]++;
            if (o.third_qualified[t]) third_q[t]++;
            if (s >= Stage::Last16) adv[t]++;
        }
    }

    void merge(const Counts& other) {
        auto acc = [](std::vector<std::int64_t>& into, const std::vector<std::int64_t>& from) {
            for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
        };
        acc(champion, other.champion);
        acc(fin, other.fin);
        acc(semi, other.semi);
        acc(quarter, other.quarter);
        acc(last16, other.last16);
        for (int r = 0; r < 4; ++r) acc(rank[r], other.rank[r]);
        acc(third_q, other.third_q);
        acc(adv, other.adv);
    }
};

}  // namespace

SimulationSummary run_simulations(const TournamentConfig& config, const TeamModelMap& models,
                                  const EloTable& base, std::uint64_t n, std::uint64_t seed,
                                  Variant variant, int jobs) {
    if (n == 0) throw Error("need at least one simulation run");
    if (jobs < 1) jobs = 1;
    if (jobs > 64) jobs = 64;
    if (static_cast<std::uint64_t>(jobs) > n) jobs = static_cast<int>(n);

    const int teams = config.team_count();
    std::vector<Counts> partial(jobs, Counts(teams));
    std::vector<std::exception_ptr> failures(jobs);

    auto worker = [&](int w) {
        try {
            for (std::uint64_t run = w; run < n; run += jobs) {
                RngStream rng = RngStream::for_run(seed, run);
                TournamentOutcome o = simulate_tournament(config, models, base, rng, variant);
                partial[w].add(o);
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    Counts total(teams);
    for (const auto& p : partial) total.merge(p);

    SimulationSummary s;
    s.n_runs = n;
    s.seed = seed;
    s.variant = variant;
    s.team_ids = config.team_ids();
    for (const auto& id : s.team_ids) {
        auto it = models.find(id);
        s.team_names.push_back(it != models.end() ? it->second.team.name() : id);
    }
    s.team_group.resize(teams);
    for (int t = 0; t < teams; ++t) {
        s.team_group[t] = config.groups().at(config.group_of(t)).label;
    }
    s.champion = std::move(total.champion);
    s.reached_final = std::move(total.fin);
    s.reached_semifinal = std::move(total.semi);
    s.reached_quarterfinal = std::move(total.quarter);
    s.reached_last16 = std::move(total.last16);
    for (int r = 0; r < 4; ++r) s.group_rank[r] = std::move(total.rank[r]);
    s.third_qualified = std::move(total.third_q);
    s.advanced = std::move(total.adv);
    return s;
}

StageProbabilities stage_probabilities(const SimulationSummary& summary) {
    const std::size_t teams = summary.team_ids.size();
    const double n = static_cast<double>(summary.n_runs);
    StageProbabilities out;
    out.n_runs = summary.n_runs;

    std::vector<std::size_t> order(teams);
    std::iota(order.begin(), order.end(), 0);
    auto counts = [&](std::size_t t) {
        return std::array<std::int64_t, 5>{summary.champion[t], summary.reached_final[t],
                                           summary.reached_semifinal[t],
                                           summary.reached_quarterfinal[t],
                                           summary.reached_last16[t]};
    };
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        auto cx = counts(x), cy = counts(y);
        if (cx != cy) return cy < cx;
        return summary.team_ids[x] < summary.team_ids[y];
    });

    for (std::size_t t : order) {
        out.team_ids.push_back(summary.team_ids[t]);
        out.team_names.push_back(summary.team_names[t]);
        auto c = counts(t);
        std::array<double, 5> p;
        for (int i = 0; i < 5; ++i) p[i] = c[i] / n;
        out.p.push_back(p);
    }
    return out;
}

GroupProbabilities group_probabilities(const SimulationSummary& summary) {
    GroupProbabilities out;
    out.n_runs = summary.n_runs;
    const double n = static_cast<double>(summary.n_runs);

    std::vector<char> labels(summary.team_group);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    for (char label : labels) {
        std::vector<GroupRow> rows;
        for (std::size_t t = 0; t < summary.team_ids.size(); ++t) {
            if (summary.team_group[t] != label) continue;
            GroupRow row;
            row.team_id = summary.team_ids[t];
            row.team_name = summary.team_names[t];
            for (int r = 0; r < 4; ++r) row.rank[r] = summary.group_rank[r][t] / n;
            row.advanced = summary.advanced[t] / n;
            rows.push_back(std::move(row));
        }
        out.groups.emplace_back(label, std::move(rows));
    }
    return out;
}

StageDiff diff_summaries(const SimulationSummary& a, const SimulationSummary& b) {
    if (a.team_ids != b.team_ids) throw Error("summaries cover different teams");
    const std::size_t teams = a.team_ids.size();
    auto probs = [](const SimulationSummary& s, std::size_t t) {
        double n = static_cast<double>(s.n_runs);
        return std::array<double, 5>{s.champion[t] / n, s.reached_final[t] / n,
                                     s.reached_semifinal[t] / n,
                                     s.reached_quarterfinal[t] / n, s.reached_last16[t] / n};
    };

    std::vector<std::size_t> order(teams);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (b.champion[x] != b.champion[y]) return b.champion[x] > b.champion[y];
        return a.team_ids[x] < a.team_ids[y];
    });

    StageDiff d;
    for (std::size_t t : order) {
        d.team_ids.push_back(a.team_ids[t]);
        d.team_names.push_back(a.team_names[t]);
        auto pa = probs(a, t);
        auto pb = probs(b, t);
        std::array<double, 5> delta;
        for (int i = 0; i < 5; ++i) delta[i] = (pa[i] - pb[i]) * 100.0;
        d.p_a.push_back(pa);
        d.p_b.push_back(pb);
        d.delta_pp.push_back(delta);
    }
    return d;
}

double standard_error(double p, std::uint64_t n) {
    if (n == 0) throw Error("standard error needs n > 0");
    if (p < 0.0 || p > 1.0) throw Error("probability outside [0, 1]");
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace cupcast
