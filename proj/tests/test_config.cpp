#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "config_fixture.hpp"
#include "cupcast/config.hpp"
#include "cupcast/errors.hpp"

using namespace cupcast;
using nlohmann::json;
using fixture::base_config;

TEST_CASE("a well-formed config loads with stable team numbering") {
    TournamentConfig cfg = TournamentConfig::from_json(base_config());
    CHECK(cfg.team_count() == 24);
    CHECK(cfg.team_ids()[0] == "T01");
    CHECK(cfg.team_index("T05") == 4);
    CHECK(cfg.group_of(cfg.team_index("T05")) == 1);  // second group
    CHECK(cfg.groups().size() == 6);
    CHECK(cfg.groups()[2].label == 'C');
    CHECK(cfg.group_schedule().size() == 6);
    CHECK(cfg.r16_template().size() == 8);
    CHECK(cfg.third_lookup().size() == 15);
    CHECK(cfg.quarterfinals().size() == 4);
    CHECK(cfg.semifinals().size() == 2);
    CHECK(cfg.final_tie().feed_home == "SF-1");
    CHECK(cfg.elo_k() == 50.0);
    CHECK(cfg.simulations() == 1000);
    CHECK(cfg.seed() == 2019);
    CHECK(cfg.host().empty());
    CHECK(cfg.host_bonus() == 0.0);
    CHECK(cfg.shootout_as_draw());
    CHECK_THROWS_AS(cfg.team_index("XXX"), ConfigError);
}

TEST_CASE("lookup entries are keyed by the sorted group set") {
    json j = base_config();
    // Scramble the order inside one 'thirds' array; the key must normalize.
    j["third_lookup"][0]["thirds"] = json::array({"D", "A", "C", "B"});
    TournamentConfig cfg = TournamentConfig::from_json(j);
    CHECK(cfg.third_lookup().count("ABCD") == 1);
    CHECK(cfg.third_lookup().at("ABDF").at("R16-6") == 'D');
    CHECK(cfg.third_lookup().at("ABDF").at("R16-2") == 'F');
}

TEST_CASE("structural defects are fatal") {
    auto expect_bad = [](json j, const char* why) {
        INFO(why);
        CHECK_THROWS_AS(TournamentConfig::from_json(j), ConfigError);
    };
    {
        json j = base_config();
        j.erase("bracket");
        expect_bad(j, "missing key");
    }
    {
        json j = base_config();
        j["groups"]["A"][1] = "T05";  // also in group B
        expect_bad(j, "duplicate team");
    }
    {
        json j = base_config();
        j["groups"]["A"] = json::array({"X1", "X2", "X3"});
        expect_bad(j, "short group");
    }
    {
        json j = base_config();
        j["groups"].erase("F");
        expect_bad(j, "five groups");
    }
    {
        json j = base_config();
        j["group_schedule"][5] = json::array({0, 3});  // pair repeated
        expect_bad(j, "duplicate pairing");
    }
    {
        json j = base_config();
        j["group_schedule"][0] = json::array({0, 4});
        expect_bad(j, "index out of range");
    }
    {
        json j = base_config();
        j["r16_template"][0]["home"] = "2B";  // runner-up B seeded twice
        expect_bad(j, "runner-up seeded twice");
    }
    {
        json j = base_config();
        j["r16_template"][1]["home"] = "1A";  // winner A twice, winner D never
        expect_bad(j, "winner coverage broken");
    }
    {
        json j = base_config();
        j["r16_template"][0]["home"] = "4A";
        expect_bad(j, "unknown seed kind");
    }
    {
        json j = base_config();
        j["third_lookup"].erase(14);
        expect_bad(j, "only 14 lookup rows");
    }
    {
        json j = base_config();
        j["third_lookup"][1]["thirds"] = json::array({"A", "B", "C", "D"});  // duplicate key
        expect_bad(j, "duplicate lookup key");
    }
    {
        json j = base_config();
        // 3C assigned to the slot that only allows groups B, E, F.
        j["third_lookup"][0]["assignment"]["R16-2"] = "C";
        expect_bad(j, "assignment outside the allowed set");
    }
    {
        json j = base_config();
        // Key ABCD but a group outside the key assigned.
        j["third_lookup"][0]["assignment"]["R16-6"] = "E";
        expect_bad(j, "assignment outside the key");
    }
    {
        json j = base_config();
        j["bracket"]["QF-1"] = json::array({"R16-1", "R16-1"});
        expect_bad(j, "slot feeding twice");
    }
    {
        json j = base_config();
        j["bracket"].erase("SF-2");
        expect_bad(j, "missing semifinal");
    }
    {
        json j = base_config();
        j["bracket"]["F"] = json::array({"SF-1", "QF-2"});
        expect_bad(j, "final fed by a quarterfinal");
    }
    {
        json j = base_config();
        j["elo_k"] = 0.0;
        expect_bad(j, "zero k factor");
    }
    {
        json j = base_config();
        j["simulations"] = 0;
        expect_bad(j, "zero runs");
    }
    {
        json j = base_config();
        j["host"] = "ZZZ";
        expect_bad(j, "host not a participant");
    }
}

TEST_CASE("optional knobs parse") {
    json j = base_config();
    j["host"] = "T01";
    j["host_bonus"] = 100.0;
    j["shootout_as_draw"] = false;
    TournamentConfig cfg = TournamentConfig::from_json(j);
    CHECK(cfg.host() == "T01");
    CHECK(cfg.host_bonus() == 100.0);
    CHECK(!cfg.shootout_as_draw());
}
