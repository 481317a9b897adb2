#include "doctest.h"

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlfc/common.hpp"
#include "qlfc/pipeline.hpp"
#include "testutil.hpp"

using namespace qlfc;
using nlohmann::json;

namespace {

std::string config_dir() { return testutil::source_root() + "/configs"; }

std::string sample_config_text() {
    return read_file(testutil::source_root() + "/configs/sample.json");
}

// Parse the sample config with one JSON-level mutation applied.
RunConfig parse_patched(const std::function<void(json&)>& patch) {
    json j = json::parse(sample_config_text());
    patch(j);
    return parse_config(j.dump(), "patched", config_dir());
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("the sample config loads with resolved paths and defaults") {
    RunConfig c = load_config(testutil::source_root() + "/configs/sample.json");
    CHECK(c.seed == 42);
    CHECK(c.lambda == 0.001);
    CHECK(c.epochs == 50);
    CHECK(c.k == 5);
    CHECK(c.utc_offset_minutes == 180);
    CHECK(c.weekend == std::vector<int>{5, 6});
    CHECK(c.chronological_ascending);
    CHECK(c.relevance_keywords == std::vector<std::string>{"qatar"});
    REQUIRE(c.embeddings.size() == 2);
    CHECK(c.embeddings[0].name == "news");
    CHECK(c.embeddings[1].name == "forum");

    // relative paths are anchored at the config file
    CHECK(c.dataset.front() == '/');
    CHECK(c.dataset.find("data/dataset.jsonl") != std::string::npos);
    CHECK(c.embeddings[1].path.find("data/embeddings/forum.vec") != std::string::npos);

    CHECK_FALSE(c.config_hash.empty());
    CHECK(load_config(testutil::source_root() + "/configs/sample.json").config_hash == c.config_hash);

    // no groups key means every group is enabled, in canonical order
    CHECK(c.enabled_groups() == all_groups());
}

TEST_CASE("config rejections name the offending key") {
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["surprise"] = 1; }),
                         doctest::Contains("unknown config key \"surprise\""), InputError);
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j.erase("seed"); }),
                         doctest::Contains("\"seed\" is mandatory"), InputError);
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["weekend"] = {5, 7}; }),
                         doctest::Contains("weekend weekdays must be in [0, 6]"), InputError);
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["lambda"] = 0.0; }),
                         doctest::Contains("lambda must be positive"), InputError);
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["epochs"] = 0; }),
                         doctest::Contains("epochs must be positive"), InputError);
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["k"] = -3; }),
                         doctest::Contains("k must be positive"), InputError);
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["min_delay_ms"] = -1; }),
                         doctest::Contains("min_delay_ms must be non-negative"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_patched([](json& j) {
            j["embeddings"].push_back({{"name", "third"}, {"path", "../data/embeddings/news.vec"}});
        }),
        doctest::Contains("at most two embedding spaces"), InputError);
    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["dataset"] = "../data/nope.jsonl"; }),
                         doctest::Contains("missing path"), InputError);
    CHECK_THROWS_WITH_AS(parse_config("{", "broken", config_dir()),
                         doctest::Contains("invalid JSON"), InputError);
    CHECK_THROWS_WITH_AS(parse_config("[]", "broken", config_dir()),
                         doctest::Contains("config must be a JSON object"), InputError);
}

TEST_CASE("group names accept aliases and reject strangers") {
    RunConfig c = parse_patched([](json& j) {
        j["groups"] = {"LexFeat", "credfeat", "thread-support"};
    });
    CHECK(c.enabled_groups() ==
          std::vector<std::string>{"linguistic", "credibility", "thread_support"});

    CHECK_THROWS_WITH_AS(parse_patched([](json& j) { j["groups"] = {"sentiment"}; }),
                         doctest::Contains("unknown feature group \"sentiment\""), InputError);
}

TEST_CASE("the manifest tracks feature-shaping parameters only") {
    RunConfig c = load_config(testutil::source_root() + "/configs/sample.json");
    std::string manifest = manifest_for(c);
    json j = json::parse(manifest);
    CHECK(j.at("version") == "qlfc-manifest/1");
    CHECK(j.at("seed") == 42);

    RunConfig changed = c;
    changed.lambda = 0.01;
    CHECK(manifest_for(changed) != manifest);
    changed = c;
    changed.seed = 7;
    CHECK(manifest_for(changed) != manifest);

    // report-level knobs leave cached features fresh
    changed = c;
    changed.groups = {"linguistic"};
    CHECK(manifest_for(changed) == manifest);
    changed = c;
    changed.chronological_ascending = false;
    CHECK(manifest_for(changed) == manifest);
}

TEST_CASE("feature tables round trip through jsonl") {
    FeatureTable table;
    FeatureVector a;
    a.add("lex.len", groups::kLinguistic, 1.5);
    a.add("cred.urls", groups::kCredibility, -0.25);
    FeatureVector b;
    b.add("thread.reciprocal_rank", groups::kThreadSupport, 0.5);
    table.emplace("a1", a);
    table.emplace("a2", b);

    testutil::TempDir tmp;
    save_features(table, tmp.file("features.jsonl"));
    FeatureTable back = load_features(tmp.file("features.jsonl"));
    REQUIRE(back.size() == 2);
    CHECK(back.at("a1").value_of("lex.len") == 1.5);
    CHECK(back.at("a1").value_of("cred.urls") == -0.25);
    CHECK(back.at("a1").dims[1].group == groups::kCredibility);
    CHECK(back.at("a2").value_of("thread.reciprocal_rank") == 0.5);
}

TEST_CASE("feature table loading rejects malformed rows") {
    testutil::TempDir tmp;
    std::string ok = R"({"answer_id":"a1","dims":[]})";

    testutil::write(tmp, "bad.jsonl", "not json\n");
    CHECK_THROWS_WITH_AS(load_features(tmp.file("bad.jsonl")), doctest::Contains("invalid JSON"),
                         InputError);

    testutil::write(tmp, "dup.jsonl", ok + "\n" + ok + "\n");
    CHECK_THROWS_WITH_AS(load_features(tmp.file("dup.jsonl")),
                         doctest::Contains("duplicate answer id 'a1'"), ValidationError);

    testutil::write(tmp, "keys.jsonl", R"({"dims":[]})" "\n");
    CHECK_THROWS_WITH_AS(load_features(tmp.file("keys.jsonl")),
                         doctest::Contains("need answer_id and dims"), ValidationError);

    testutil::write(tmp, "group.jsonl",
                    R"({"answer_id":"a1","dims":[{"name":"x","group":"mystery","value":1}]})" "\n");
    CHECK_THROWS_WITH_AS(load_features(tmp.file("group.jsonl")),
                         doctest::Contains("unknown feature group 'mystery'"), ValidationError);
}

TEST_CASE("group selection keeps dim order within the survivors") {
    FeatureVector full;
    full.add("l1", groups::kLinguistic, 1);
    full.add("c1", groups::kCredibility, 2);
    full.add("l2", groups::kLinguistic, 3);
    full.add("t1", groups::kThreadSupport, 4);

    FeatureVector picked = select_groups(full, {groups::kLinguistic, groups::kThreadSupport});
    REQUIRE(picked.size() == 3);
    CHECK(picked.dims[0].name == "l1");
    CHECK(picked.dims[1].name == "l2");
    CHECK(picked.dims[2].name == "t1");
    CHECK(select_groups(full, {}).size() == 0);

    FeatureTable table;
    table.emplace("a1", full);
    FeatureTable selected = select_table_groups(table, {groups::kCredibility});
    CHECK(selected.at("a1").size() == 1);
    CHECK(selected.at("a1").dims[0].name == "c1");
}

TEST_CASE("featurization covers every labeled answer at any parallelism") {
    RunConfig config = load_config(testutil::source_root() + "/configs/sample.json");
    Resources res = build_resources(config);
    CHECK(res.dataset_hash.size() == 16);
    CHECK(res.fixture_hash.size() == 16);

    FeatureTable two = featurize_all(res, config, 2);
    CHECK(two.size() == 249);

    FeatureTable five = featurize_all(res, config, 5);
    REQUIRE(five.size() == two.size());
    for (const auto& [id, vec] : two) {
        const FeatureVector& other = five.at(id);
        REQUIRE(other.size() == vec.size());
        for (std::size_t i = 0; i < vec.dims.size(); ++i) {
            CHECK(other.dims[i].name == vec.dims[i].name);
            CHECK(other.dims[i].value == vec.dims[i].value);
        }
    }

    CHECK_THROWS_AS(featurize_all(res, config, 0), InputError);

    // recording without any local corpus configured cannot work offline
    RunConfig webless = config;
    webless.web_corpus.clear();
    testutil::TempDir tmp;
    CHECK_THROWS_WITH_AS(record_fixtures(res, webless, true, false, tmp.file("w.jsonl"),
                                         tmp.file("f.jsonl")),
                         doctest::Contains("configure web_corpus or live_endpoint"), InputError);
}

}  // TEST_SUITE
