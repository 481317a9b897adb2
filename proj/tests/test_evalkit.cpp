#include "doctest.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "qlfc/common.hpp"
#include "qlfc/evalkit.hpp"
#include "testutil.hpp"

using namespace qlfc;

namespace {

using ScoredThread = std::vector<std::pair<double, BinaryLabel>>;

Thread labeled_thread(const std::string& qid,
                      std::vector<std::pair<std::string, std::optional<FactLabel>>> answers) {
    Thread th;
    th.question = {qid, "s", "b", "cat", 0, "asker"};
    int pos = 0;
    for (auto& [aid, label] : answers) {
        Answer a;
        a.id = aid;
        a.body = "text";
        a.thread_position = ++pos;
        if (label.has_value()) {
            a.goodness = Goodness::Good;
            a.fact_label = label;
        } else {
            a.goodness = Goodness::Bad;
        }
        th.answers.push_back(a);
    }
    return th;
}

// Four threads, each with one true and one false answer; the x feature
// encodes the label exactly.
Dataset separable_dataset() {
    Dataset ds;
    for (int t = 1; t <= 4; ++t) {
        std::string q = "q" + std::to_string(t);
        ds.push_back(labeled_thread(
            q, {{q + "_a1", FactLabel::FactTrue}, {q + "_a2", FactLabel::FactFalse}}));
    }
    return ds;
}

std::map<std::string, FeatureVector> separable_features(const Dataset& ds) {
    std::map<std::string, FeatureVector> features;
    for (const Thread& th : ds) {
        for (const Answer& a : th.answers) {
            FeatureVector fv;
            fv.add("x", "credibility", *a.fact_label == FactLabel::FactTrue ? 1.0 : -1.0);
            features[a.id] = fv;
        }
    }
    return features;
}

// AP via per-item rank counting instead of sorting, with the same
// summation order as the library (ascending rank), so the results must
// agree bit for bit.
double count_based_map(const std::vector<ScoredThread>& threads) {
    double sum_ap = 0;
    std::size_t included = 0;
    for (const ScoredThread& th : threads) {
        std::vector<std::size_t> positive_ranks;
        std::size_t positives = 0;
        for (std::size_t i = 0; i < th.size(); ++i) {
            if (th[i].second != BinaryLabel::Positive) continue;
            ++positives;
            std::size_t rank = 1;
            for (std::size_t j = 0; j < th.size(); ++j) {
                if (th[j].first > th[i].first) ++rank;
                else if (th[j].first == th[i].first && j < i) ++rank;
            }
            positive_ranks.push_back(rank);
        }
        if (positives == 0) continue;
        std::sort(positive_ranks.begin(), positive_ranks.end());
        double ap = 0;
        for (std::size_t k = 0; k < positive_ranks.size(); ++k) {
            ap += static_cast<double>(k + 1) / static_cast<double>(positive_ranks[k]);
        }
        sum_ap += ap / static_cast<double>(positives);
        ++included;
    }
    if (included == 0) return 0.0;
    return 100.0 * sum_ap / static_cast<double>(included);
}

}  // namespace

TEST_SUITE("evalkit") {

TEST_CASE("loto folds partition the labeled answers thread by thread") {
    Dataset ds;
    ds.push_back(labeled_thread("q1", {{"q1_a1", FactLabel::FactTrue},
                                       {"q1_a2", std::nullopt},
                                       {"q1_a3", FactLabel::FactFalse}}));
    ds.push_back(labeled_thread("q2", {{"q2_a1", FactLabel::PartiallyTrue}}));
    ds.push_back(labeled_thread("q3", {{"q3_a1", std::nullopt}}));  // nothing labeled

    FoldPlan plan = loto_folds(ds);
    REQUIRE(plan.folds.size() == 2);
    CHECK(plan.folds[0].question_id == "q1");
    CHECK(plan.folds[0].test_ids == std::vector<std::string>{"q1_a1", "q1_a3"});
    CHECK(plan.folds[0].train_ids == std::vector<std::string>{"q2_a1"});
    CHECK(plan.folds[1].test_ids == std::vector<std::string>{"q2_a1"});
    CHECK(plan.folds[1].train_ids == std::vector<std::string>{"q1_a1", "q1_a3"});
}

TEST_CASE("loto folds on the shipped dataset: one per question, no split threads") {
    Dataset ds = load_dataset(testutil::data_path("dataset.jsonl"));
    FoldPlan plan = loto_folds(ds);
    CHECK(plan.folds.size() == 71);
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const Fold& fold : plan.folds) {
        total += fold.test_ids.size();
        for (const std::string& id : fold.test_ids) CHECK(seen.insert(id).second);
        CHECK(fold.train_ids.size() + fold.test_ids.size() == 249);
    }
    CHECK(total == 249);
}

TEST_CASE("classification metrics from the confusion counts") {
    using L = BinaryLabel;
    Metrics m = classification_metrics({L::Positive, L::Positive, L::Negative, L::Negative},
                                       {L::Positive, L::Negative, L::Positive, L::Negative});
    CHECK(m.accuracy == 50.0);
    CHECK(m.precision == 50.0);
    CHECK(m.recall == 50.0);
    CHECK(m.f1 == 50.0);

    // degenerate slices fall back to zero instead of dividing by it
    Metrics none = classification_metrics({L::Negative, L::Negative}, {L::Positive, L::Negative});
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f1 == 0.0);
    CHECK(none.accuracy == 50.0);

    CHECK_THROWS_AS(classification_metrics({L::Positive}, {}), InputError);
    CHECK_THROWS_AS(classification_metrics({}, {}), InputError);
}

TEST_CASE("classification metrics match hand confusion arithmetic on random sets") {
    std::mt19937_64 rng(2024);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 5 + static_cast<std::size_t>(rng() % 40);
        std::vector<BinaryLabel> predicted, actual;
        for (std::size_t i = 0; i < n; ++i) {
            predicted.push_back(coin(rng) ? BinaryLabel::Positive : BinaryLabel::Negative);
            actual.push_back(coin(rng) ? BinaryLabel::Positive : BinaryLabel::Negative);
        }
        double tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool p = predicted[i] == BinaryLabel::Positive;
            bool a = actual[i] == BinaryLabel::Positive;
            tp += p && a;
            fp += p && !a;
            fn += !p && a;
            tn += !p && !a;
        }
        Metrics m = classification_metrics(predicted, actual);
        CHECK(m.accuracy == 100.0 * (tp + tn) / static_cast<double>(n));
        CHECK(m.precision == (tp + fp > 0 ? 100.0 * tp / (tp + fp) : 0.0));
        CHECK(m.recall == (tp + fn > 0 ? 100.0 * tp / (tp + fn) : 0.0));
        double p = tp + fp > 0 ? 100.0 * tp / (tp + fp) : 0.0;
        double r = tp + fn > 0 ? 100.0 * tp / (tp + fn) : 0.0;
        CHECK(m.f1 == (p + r > 0 ? 2.0 * p * r / (p + r) : 0.0));
    }
}

TEST_CASE("mean average precision on small rankings") {
    using L = BinaryLabel;
    CHECK(mean_average_precision({{{0.9, L::Positive}}}) == 100.0);
    CHECK(mean_average_precision({{{0.9, L::Negative}, {0.5, L::Positive}}}) == 50.0);
    CHECK(mean_average_precision({{{0.9, L::Positive}},
                                  {{0.9, L::Negative}, {0.5, L::Positive}}}) == 75.0);

    // ties keep the input order
    CHECK(mean_average_precision({{{0.5, L::Negative}, {0.5, L::Positive}}}) == 50.0);
    CHECK(mean_average_precision({{{0.5, L::Positive}, {0.5, L::Negative}}}) == 100.0);

    // a thread without positives is excluded, not zeroed
    CHECK(mean_average_precision({{{0.9, L::Positive}}, {{0.9, L::Negative}}}) == 100.0);
    CHECK(mean_average_precision({{{0.9, L::Negative}}}) == 0.0);
    CHECK(mean_average_precision({}) == 0.0);
}

TEST_CASE("mean average precision equals count-based average precision") {
    std::mt19937_64 rng(99);
    const double score_levels[] = {0.0, 0.25, 0.5, 0.5, 0.75, 1.0};  // ties likely
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ScoredThread> threads;
        std::size_t n_threads = 3 + rng() % 20;
        for (std::size_t t = 0; t < n_threads; ++t) {
            ScoredThread th;
            std::size_t n = 1 + rng() % 8;
            for (std::size_t i = 0; i < n; ++i) {
                th.emplace_back(score_levels[rng() % 6],
                                rng() % 2 == 0 ? BinaryLabel::Positive : BinaryLabel::Negative);
            }
            threads.push_back(std::move(th));
        }
        CHECK(mean_average_precision(threads) == count_based_map(threads));
    }
}

TEST_CASE("chronological ranking by thread position") {
    Dataset ds;
    ds.push_back(labeled_thread("q1", {{"q1_a1", FactLabel::FactFalse},
                                       {"q1_a2", std::nullopt},
                                       {"q1_a3", FactLabel::FactTrue}}));
    // ascending: earliest first, the positive sits at rank 2 of 2 labeled
    CHECK(chronological_map(ds, true) == 50.0);
    CHECK(chronological_map(ds, false) == 100.0);
}

TEST_CASE("chronological map on the shipped dataset matches the frozen value") {
    Dataset ds = load_dataset(testutil::data_path("dataset.jsonl"));
    CHECK(chronological_map(ds, true) == doctest::Approx(63.8462).epsilon(1e-4));
}

TEST_CASE("the all-positive majority baseline") {
    Dataset ds;
    ds.push_back(labeled_thread("q1", {{"q1_a1", FactLabel::FactTrue},
                                       {"q1_a2", FactLabel::FactTrue},
                                       {"q1_a3", FactLabel::NonFactual}}));
    Metrics m = all_positive_metrics(ds);
    CHECK(m.accuracy == doctest::Approx(200.0 / 3.0));
    CHECK(m.precision == doctest::Approx(200.0 / 3.0));
    CHECK(m.recall == 100.0);
    CHECK(m.f1 == doctest::Approx(80.0));
}

TEST_CASE("loto evaluation separates a separable dataset at any parallelism") {
    Dataset ds = separable_dataset();
    std::map<std::string, FeatureVector> features = separable_features(ds);
    TrainOptions options;

    LotoResult serial = evaluate_loto(ds, features, options, 1);
    CHECK(serial.metrics.accuracy == 100.0);
    CHECK(serial.metrics.f1 == 100.0);
    CHECK(serial.map == 100.0);
    REQUIRE(serial.predictions.size() == 8);
    // predictions are reported in answer-id order
    for (std::size_t i = 1; i < serial.predictions.size(); ++i) {
        CHECK(serial.predictions[i - 1].first < serial.predictions[i].first);
    }

    LotoResult parallel = evaluate_loto(ds, features, options, 4);
    REQUIRE(parallel.predictions.size() == serial.predictions.size());
    for (std::size_t i = 0; i < serial.predictions.size(); ++i) {
        CHECK(parallel.predictions[i].first == serial.predictions[i].first);
        CHECK(parallel.predictions[i].second.score == serial.predictions[i].second.score);
        CHECK(parallel.predictions[i].second.label == serial.predictions[i].second.label);
    }
    CHECK(parallel.metrics.accuracy == serial.metrics.accuracy);
    CHECK(parallel.map == serial.map);
}

TEST_CASE("loto evaluation rejects unusable inputs") {
    Dataset unlabeled;
    unlabeled.push_back(labeled_thread("q1", {{"q1_a1", std::nullopt}}));
    CHECK_THROWS_WITH_AS(evaluate_loto(unlabeled, {}, TrainOptions{}),
                         "evaluate_loto: dataset has no labeled answers", InputError);

    Dataset ds = separable_dataset();
    std::map<std::string, FeatureVector> features = separable_features(ds);
    features.erase("q2_a1");
    CHECK_THROWS_WITH_AS(evaluate_loto(ds, features, TrainOptions{}),
                         doctest::Contains("no features for answer"), InputError);
}

TEST_CASE("baseline rows carry the expected names and metric shapes") {
    Dataset ds = separable_dataset();
    std::map<std::string, FeatureVector> features = separable_features(ds);
    std::vector<ReportRow> rows = run_baselines(ds, features, TrainOptions{}, true);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].name == "Credibility (baseline)");
    CHECK(rows[0].accuracy.has_value());
    CHECK(rows[0].map.has_value());

    CHECK(rows[1].name == "All Positive (majority class)");
    CHECK(rows[1].accuracy == 50.0);
    CHECK(rows[1].recall == 100.0);
    CHECK_FALSE(rows[1].map.has_value());  // constant scores cannot rank

    CHECK(rows[2].name == "Thread order (chronological)");
    CHECK_FALSE(rows[2].accuracy.has_value());
    // true answers sit at position 1 of every thread
    CHECK(rows[2].map == 100.0);
    // descending convention reverses every thread
    CHECK(run_baselines(ds, features, TrainOptions{}, false)[2].map == 50.0);
}

TEST_CASE("the hq ablation evaluates four named variants") {
    Dataset ds = separable_dataset();
    std::array<std::map<std::string, FeatureVector>, kHqVariantCount> variants;
    for (auto& v : variants) v = separable_features(ds);

    std::vector<ReportRow> rows = ablate_hq(ds, variants, TrainOptions{});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].name == "S1 (generated query, entailment re-ranking)");
    CHECK(rows[1].name == "S2 (no re-ranking)");
    CHECK(rows[2].name == "S3 (answer as query)");
    CHECK(rows[3].name == "S4 (answer as query, no re-ranking)");
    for (const ReportRow& row : rows) {
        CHECK(row.accuracy == 100.0);
        CHECK(row.map == 100.0);
    }
}

TEST_CASE("feature importance orders dims and groups by weight magnitude") {
    LinearModel model;
    model.dims.push_back({"a", groups::kLinguistic, 0.5, 0, 1});
    model.dims.push_back({"b", groups::kCredibility, -2.0, 0, 1});
    model.dims.push_back({"c", groups::kLinguistic, 1.0, 0, 1});
    model.dims.push_back({"d", groups::kUserQuality, -1.0, 0, 1});

    ImportanceReport report = feature_importance(model);
    REQUIRE(report.dims.size() == 4);
    CHECK(report.dims[0].name == "b");
    CHECK(report.dims[1].name == "c");  // |1.0| ties break by name
    CHECK(report.dims[2].name == "d");
    CHECK(report.dims[3].name == "a");

    REQUIRE(report.groups.size() == 3);
    CHECK(report.groups[0] == std::pair<std::string, double>{groups::kCredibility, 2.0});
    CHECK(report.groups[1] == std::pair<std::string, double>{groups::kUserQuality, 1.0});
    CHECK(report.groups[2] == std::pair<std::string, double>{groups::kLinguistic, 0.75});

    REQUIRE(report.top_linguistic.size() == 2);
    CHECK(report.top_linguistic[0].name == "c");
    CHECK(report.top_linguistic[1].name == "a");
}

TEST_CASE("text reports format absent metrics as --- and render deterministically") {
    EvalReport report;
    report.seed = 7;
    report.config_hash = "cafe";
    report.dataset_hash = "f00d";
    ReportRow full{"Everything", 81.25, 80.0, 82.5, 81.23, 90.0};
    ReportRow ranking_only{"Ranking", std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                           63.75};
    report.rows = {full, ranking_only};

    std::string text = render_report_text(report);
    CHECK(text.find("Everything |  81.25 |  80.00 |  82.50 |  81.23 |  90.00") !=
          std::string::npos);
    CHECK(text.find("Ranking |    --- |    --- |    --- |    --- |  63.75") != std::string::npos);
    CHECK(text.find("seed=7 config=cafe dataset=f00d") != std::string::npos);
    CHECK(text.find("fixtures=") == std::string::npos);  // empty hash is omitted
    CHECK(render_report_text(report) == text);
}

TEST_CASE("json reports round trip") {
    EvalReport report;
    report.seed = 42;
    report.config_hash = "c";
    report.dataset_hash = "d";
    report.fixture_hash = "f";
    report.rows = {{"Row A", 50.0, std::nullopt, 75.0, std::nullopt, std::nullopt}};

    std::string json = render_report_json(report);
    EvalReport back = parse_report_json(json, "test");
    CHECK(back.seed == 42);
    CHECK(back.config_hash == "c");
    CHECK(back.fixture_hash == "f");
    REQUIRE(back.rows.size() == 1);
    CHECK(back.rows[0].name == "Row A");
    CHECK(back.rows[0].accuracy == 50.0);
    CHECK_FALSE(back.rows[0].precision.has_value());
    CHECK(back.rows[0].recall == 75.0);
    CHECK_FALSE(back.rows[0].map.has_value());
    // a second render of the parsed report is byte-identical
    CHECK(render_report_json(back) == json);

    CHECK_THROWS_AS(parse_report_json("{", "x"), InputError);
    CHECK_THROWS_AS(parse_report_json("{\"format\":\"other/1\"}", "x"), ValidationError);
}

TEST_CASE("variant names and descriptions") {
    CHECK(std::string(hq_variant_name(HqVariant::S3)) == "S3");
    CHECK(std::string(hq_variant_description(HqVariant::S4)) == "answer as query, no re-ranking");
}

}  // TEST_SUITE
