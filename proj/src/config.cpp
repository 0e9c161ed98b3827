#include "cupcast/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "cupcast/errors.hpp"

namespace cupcast {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("config: missing key '") + key + "'");
    return *it;
}

char parse_label(const std::string& s) {
    if (s.size() != 1 || s[0] < 'A' || s[0] > 'Z') {
        fail("config: group label must be a single letter A-Z, got '" + s + "'");
    }
    return s[0];
}

SlotSeed parse_seed(const std::string& text, const std::set<char>& labels) {
    if (text.size() < 2) fail("config: bad pairing descriptor '" + text + "'");
    SlotSeed seed;
    std::string groups = text.substr(1);
    for (char c : groups) {
        if (!labels.count(c)) fail("config: unknown group '" + std::string(1, c) + "' in '" + text + "'");
    }
    switch (text[0]) {
        case '1':
            seed.kind = SeedKind::Winner;
            break;
        case '2':
            seed.kind = SeedKind::RunnerUp;
            break;
        case '3':
            seed.kind = SeedKind::Third;
            break;
        default:
            fail("config: pairing descriptor must start with 1, 2 or 3: '" + text + "'");
    }
    if (seed.kind == SeedKind::Third) {
        std::sort(groups.begin(), groups.end());
        if (std::adjacent_find(groups.begin(), groups.end()) != groups.end()) {
            fail("config: repeated group in '" + text + "'");
        }
        seed.allowed = groups;
    } else {
        if (groups.size() != 1) fail("config: descriptor '" + text + "' must name one group");
        seed.group = groups[0];
    }
    return seed;
}

}  // namespace

int TournamentConfig::team_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail("config: unknown team '" + id + "'");
    return it->second;
}

TournamentConfig TournamentConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open '" + file.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    return from_json(j);
}

TournamentConfig TournamentConfig::from_json(const json& j) try {
    if (!j.is_object()) fail("config: top level must be an object");
    TournamentConfig cfg;

    // Groups. Object keys are label strings; iteration is in sorted key order,
    // which fixes the global team numbering.
    const json& jg = require(j, "groups");
    if (!jg.is_object()) fail("config: 'groups' must be an object");
    std::set<char> labels;
    for (const auto& [key, members] : jg.items()) {
        char label = parse_label(key);
        if (!labels.insert(label).second) fail("config: duplicate group label");
        if (!members.is_array() || members.size() != 4) {
            fail("config: each group lists exactly 4 teams");
        }
        GroupDef def;
        def.label = label;
        for (std::size_t i = 0; i < 4; ++i) {
            if (!members[i].is_string()) fail("config: team ids must be strings");
            std::string id = members[i].get<std::string>();
            if (id.empty()) fail("config: empty team id");
            if (cfg.index_.count(id)) fail("config: team '" + id + "' listed twice");
            int idx = static_cast<int>(cfg.team_ids_.size());
            cfg.index_[id] = idx;
            cfg.team_ids_.push_back(id);
            cfg.group_of_.push_back(static_cast<int>(cfg.groups_.size()));
            def.members[i] = idx;
        }
        cfg.groups_.push_back(def);
    }
    if (cfg.groups_.size() != 6) fail("config: expected 6 groups");

    // Round-robin schedule as index pairs within a group.
    const json& js = require(j, "group_schedule");
    if (!js.is_array() || js.size() != 6) fail("config: 'group_schedule' must list 6 pairings");
    std::set<std::pair<int, int>> seen_pairs;
    for (const auto& p : js) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
            fail("config: schedule entries are [home, away] index pairs");
        }
        int a = p[0].get<int>(), b = p[1].get<int>();
        if (a < 0 || a > 3 || b < 0 || b > 3 || a == b) fail("config: schedule indices must be distinct 0..3");
        if (!seen_pairs.insert({std::min(a, b), std::max(a, b)}).second) {
            fail("config: duplicate pairing in schedule");
        }
        cfg.schedule_.emplace_back(a, b);
    }

    // First knockout round template.
    const json& jr = require(j, "r16_template");
    if (!jr.is_array() || jr.size() != 8) fail("config: 'r16_template' must list 8 slots");
    std::set<std::string> slot_names;
    std::set<char> winners_seen, runners_seen;
    std::vector<std::string> third_slots;
    for (const auto& s : jr) {
        R16Slot slot;
        slot.name = require(s, "slot").get<std::string>();
        if (!slot_names.insert(slot.name).second) fail("config: duplicate slot '" + slot.name + "'");
        slot.home = parse_seed(require(s, "home").get<std::string>(), labels);
        slot.away = parse_seed(require(s, "away").get<std::string>(), labels);
        for (const SlotSeed* side : {&slot.home, &slot.away}) {
            if (side->kind == SeedKind::Winner && !winners_seen.insert(side->group).second) {
                fail("config: group winner seeded twice");
            }
            if (side->kind == SeedKind::RunnerUp && !runners_seen.insert(side->group).second) {
                fail("config: group runner-up seeded twice");
            }
            if (side->kind == SeedKind::Third) third_slots.push_back(slot.name);
        }
        if (slot.home.kind == SeedKind::Third && slot.away.kind == SeedKind::Third) {
            fail("config: slot '" + slot.name + "' pairs two thirds");
        }
        cfg.r16_.push_back(std::move(slot));
    }
    if (winners_seen != labels) fail("config: every group winner must be seeded exactly once");
    if (runners_seen != labels) fail("config: every group runner-up must be seeded exactly once");
    if (third_slots.size() != 4) fail("config: expected 4 third-place seeds");

    // Lookup from the set of groups providing the best thirds to slot
    // assignments. Must cover all 15 four-group combinations.
    const json& jt = require(j, "third_lookup");
    if (!jt.is_array() || jt.size() != 15) fail("config: 'third_lookup' must hold 15 entries");
    std::map<std::string, const R16Slot*> slot_by_name;
    for (const auto& s : cfg.r16_) slot_by_name[s.name] = &s;
    for (const auto& e : jt) {
        const json& thirds = require(e, "thirds");
        if (!thirds.is_array() || thirds.size() != 4) fail("config: lookup 'thirds' lists 4 groups");
        std::string key;
        for (const auto& t : thirds) key.push_back(parse_label(t.get<std::string>()));
        std::sort(key.begin(), key.end());
        if (std::adjacent_find(key.begin(), key.end()) != key.end()) {
            fail("config: repeated group in lookup key");
        }
        if (cfg.third_lookup_.count(key)) fail("config: duplicate lookup entry '" + key + "'");
        const json& assign = require(e, "assignment");
        if (!assign.is_object() || assign.size() != 4) fail("config: lookup assignment maps 4 slots");
        std::map<std::string, char> m;
        std::string used;
        for (const auto& [slot_name, label_j] : assign.items()) {
            auto it = slot_by_name.find(slot_name);
            if (it == slot_by_name.end()) fail("config: lookup names unknown slot '" + slot_name + "'");
            const R16Slot& slot = *it->second;
            const SlotSeed& third_side =
                slot.home.kind == SeedKind::Third ? slot.home : slot.away;
            if (third_side.kind != SeedKind::Third) {
                fail("config: slot '" + slot_name + "' takes no third");
            }
            char label = parse_label(label_j.get<std::string>());
            if (key.find(label) == std::string::npos) {
                fail("config: lookup '" + key + "' assigns group outside the key");
            }
            if (third_side.allowed.find(label) == std::string::npos) {
                fail("config: slot '" + slot_name + "' cannot take third of group " +
                     std::string(1, label));
            }
            m[slot_name] = label;
            used.push_back(label);
        }
        std::sort(used.begin(), used.end());
        if (used != key) fail("config: lookup '" + key + "' must use each qualified third once");
        cfg.third_lookup_[key] = std::move(m);
    }

    // Bracket: ties are classified by what feeds them.
    const json& jb = require(j, "bracket");
    if (!jb.is_object()) fail("config: 'bracket' must be an object");
    std::set<std::string> qf_names, sf_names;
    std::vector<KnockoutTie> later;
    for (const auto& [name, feeds] : jb.items()) {
        if (!feeds.is_array() || feeds.size() != 2) fail("config: bracket ties list two feeds");
        KnockoutTie tie{name, feeds[0].get<std::string>(), feeds[1].get<std::string>()};
        if (slot_names.count(tie.feed_home) && slot_names.count(tie.feed_away)) {
            qf_names.insert(tie.name);
            cfg.quarterfinals_.push_back(std::move(tie));
        } else {
            later.push_back(std::move(tie));
        }
    }
    if (cfg.quarterfinals_.size() != 4) fail("config: expected 4 quarterfinals");
    std::vector<KnockoutTie> finals;
    for (auto& tie : later) {
        if (qf_names.count(tie.feed_home) && qf_names.count(tie.feed_away)) {
            sf_names.insert(tie.name);
            cfg.semifinals_.push_back(std::move(tie));
        } else {
            finals.push_back(std::move(tie));
        }
    }
    if (cfg.semifinals_.size() != 2) fail("config: expected 2 semifinals");
    if (finals.size() != 1 || !sf_names.count(finals[0].feed_home) ||
        !sf_names.count(finals[0].feed_away) || finals[0].feed_home == finals[0].feed_away) {
        fail("config: final must be fed by the two semifinals");
    }
    cfg.final_ = finals[0];
    std::set<std::string> fed;
    for (const auto& t : cfg.quarterfinals_) {
        if (t.feed_home == t.feed_away) fail("config: tie fed twice from one slot");
        fed.insert(t.feed_home);
        fed.insert(t.feed_away);
    }
    if (fed != slot_names) fail("config: every first-round slot must feed exactly one quarterfinal");
    std::set<std::string> sf_fed;
    for (const auto& t : cfg.semifinals_) {
        if (t.feed_home == t.feed_away) fail("config: tie fed twice from one slot");
        sf_fed.insert(t.feed_home);
        sf_fed.insert(t.feed_away);
    }
    if (sf_fed != qf_names) fail("config: every quarterfinal must feed exactly one semifinal");

    // Scalars.
    const json& jk = require(j, "elo_k");
    if (!jk.is_number()) fail("config: 'elo_k' must be a number");
    cfg.elo_k_ = jk.get<double>();
    if (!(cfg.elo_k_ > 0.0)) fail("config: 'elo_k' must be positive");
    auto non_negative_integer = [](const json& v) {
        return v.is_number_unsigned() ||
               (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    };
    const json& jn = require(j, "simulations");
    if (!non_negative_integer(jn) || jn.get<std::uint64_t>() == 0) {
        fail("config: 'simulations' must be a positive integer");
    }
    cfg.simulations_ = jn.get<std::uint64_t>();
    const json& jseed = require(j, "seed");
    if (!non_negative_integer(jseed)) fail("config: 'seed' must be a non-negative integer");
    cfg.seed_ = jseed.get<std::uint64_t>();

    if (auto it = j.find("host"); it != j.end() && !it->is_null()) {
        cfg.host_ = it->get<std::string>();
        if (!cfg.host_.empty() && !cfg.index_.count(cfg.host_)) {
            fail("config: host '" + cfg.host_ + "' is not a listed team");
        }
    }
    if (auto it = j.find("host_bonus"); it != j.end()) {
        cfg.host_bonus_ = it->get<double>();
        if (!(cfg.host_bonus_ >= 0.0) || cfg.host_bonus_ > 400.0) {
            fail("config: 'host_bonus' must be in [0, 400]");
        }
    }
    if (auto it = j.find("shootout_as_draw"); it != j.end()) {
        if (!it->is_boolean()) fail("config: 'shootout_as_draw' must be a boolean");
        cfg.shootout_as_draw_ = it->get<bool>();
    }
    return cfg;
} catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
}

}  // namespace cupcast
