#include "doctest.h"

#include <cstddef>

#include "qlfc/common.hpp"
#include "qlfc/corpus.hpp"
#include "qlfc/timeutil.hpp"
#include "qlfc/userfeat.hpp"
#include "testutil.hpp"

using namespace qlfc;
using testutil::TempDir;

namespace {

UtcSeconds ts(const std::string& rfc3339) { return parse_rfc3339(rfc3339); }

Thread make_thread(const std::string& qid, const std::string& asker, const std::string& category,
                   UtcSeconds when,
                   std::vector<std::tuple<std::string, std::string, UtcSeconds>> answers) {
    Thread th;
    th.question = {qid, "subject", "body", category, when, asker};
    int pos = 0;
    for (auto& [aid, user, at] : answers) {
        Answer a;
        a.id = aid;
        a.body = "text";
        a.timestamp = at;
        a.user_id = user;
        a.thread_position = ++pos;
        th.answers.push_back(a);
    }
    return th;
}

Dataset small_dataset() {
    Dataset ds;
    ds.push_back(make_thread("q1", "asker", "Visas and Permits", ts("2016-01-02T09:00:00Z"),
                             {{"a1", "u1", ts("2016-01-02T10:00:00Z")},
                              {"a2", "u2", ts("2016-01-02T11:00:00Z")},
                              {"a3", "u1", ts("2016-01-03T10:00:00Z")}}));
    ds.push_back(make_thread("q2", "u1", "Qatar Living Jobs", ts("2016-01-04T09:00:00Z"),
                             {{"a4", "u1", ts("2016-01-05T09:00:00Z")}}));
    return ds;
}

}  // namespace

TEST_SUITE("userfeat") {

TEST_CASE("build_profiles aggregates one pass over the corpus") {
    std::map<std::string, UserProfile> profiles = build_profiles(small_dataset(), nullptr);
    REQUIRE(profiles.count("u1") == 1);
    REQUIRE(profiles.count("u2") == 1);
    REQUIRE(profiles.count("asker") == 1);

    const UserProfile& u1 = profiles.at("u1");
    CHECK(u1.answers == 3);
    CHECK(u1.questions_answered.size() == 2);
    CHECK(u1.questions_asked == 1);
    CHECK(u1.category_counts.at("Visas and Permits") == 2);
    CHECK(u1.category_counts.at("Qatar Living Jobs") == 1);
    // the q2 question post and the a4 answer both land in a job category
    CHECK(u1.jobs_posts == 2);
    CHECK(u1.classifieds_posts == 0);
    CHECK(u1.registration == ts("2016-01-02T10:00:00Z"));
    CHECK(u1.answer_history.size() == 3);
    CHECK(u1.answer_history[2].thread_position == 1);

    // reference_time is global: the asker never posted after q2
    CHECK(profiles.at("asker").reference_time == ts("2016-01-05T09:00:00Z"));
    CHECK(u1.reference_time == ts("2016-01-05T09:00:00Z"));

    const UserProfile& u2 = profiles.at("u2");
    CHECK(u2.answers == 1);
    CHECK(u2.questions_asked == 0);
    CHECK(u2.registration == ts("2016-01-02T11:00:00Z"));
}

TEST_CASE("build_profiles skips dump threads already in the annotated set") {
    Dataset annotated = small_dataset();
    Dataset dump = small_dataset();  // exact duplicates
    dump.push_back(make_thread("q3", "u2", "Advice and Help", ts("2016-01-06T08:00:00Z"),
                               {{"a5", "u2", ts("2016-01-06T09:00:00Z")}}));

    std::map<std::string, UserProfile> profiles = build_profiles(annotated, &dump);
    CHECK(profiles.at("u1").answers == 3);  // not double counted
    CHECK(profiles.at("u2").answers == 2);  // a2 + the new a5
    CHECK(profiles.at("u2").questions_asked == 1);
    CHECK(profiles.at("u1").reference_time == ts("2016-01-06T09:00:00Z"));
}

TEST_CASE("active days follow the forum-local calendar") {
    // 23:30 UTC on Jan 2 is already Jan 3 at +03:00
    ProfileOptions opts;
    opts.utc_offset_minutes = 180;
    Dataset ds;
    ds.push_back(make_thread("q1", "", "Advice and Help", ts("2016-01-02T10:00:00Z"),
                             {{"a1", "u1", ts("2016-01-02T10:00:00Z")},
                              {"a2", "u1", ts("2016-01-02T23:30:00Z")}}));
    CHECK(build_profiles(ds, nullptr, opts).at("u1").active_days.size() == 2);

    ProfileOptions utc = opts;
    utc.utc_offset_minutes = 0;
    CHECK(build_profiles(ds, nullptr, utc).at("u1").active_days.size() == 1);
}

TEST_CASE("category features: raw, normalized, totals") {
    std::map<std::string, UserProfile> profiles = build_profiles(small_dataset(), nullptr);
    std::vector<std::string> categories = {"Advice and Help", "Qatar Living Jobs",
                                           "Visas and Permits"};
    FeatureVector fv = extract_categories(profiles.at("u1"), categories);
    REQUIRE(fv.size() == 2 * categories.size() + 2);

    CHECK(fv.value_of("user.cat.raw.000") == 0.0);
    CHECK(fv.value_of("user.cat.raw.001") == 1.0);
    CHECK(fv.value_of("user.cat.raw.002") == 2.0);
    CHECK(fv.value_of("user.cat.norm.001") == doctest::Approx(1.0 / 3.0));
    CHECK(fv.value_of("user.cat.norm.002") == doctest::Approx(2.0 / 3.0));
    CHECK(fv.value_of("user.cat.total") == 3.0);
    CHECK(fv.value_of("user.cat.distinct") == 2.0);
    for (const FeatureVector::Dim& d : fv.dims) CHECK(d.group == groups::kUserCategories);

    // an unknown profile never posted: all zeros, same shape
    FeatureVector empty = extract_categories(UserProfile{}, categories);
    REQUIRE(empty.size() == fv.size());
    for (const FeatureVector::Dim& d : empty.dims) CHECK(d.value == 0.0);
}

TEST_CASE("a profile category outside the configured list is a validation error") {
    UserProfile p;
    p.category_counts["Mystery"] = 1;
    p.answers = 1;
    CHECK_THROWS_AS(extract_categories(p, {"Advice and Help"}), ValidationError);
}

TEST_CASE("load_categories enforces uniqueness and non-emptiness") {
    TempDir tmp;
    std::vector<std::string> cats =
        load_categories(testutil::write(tmp, "ok.txt", "Alpha\nBeta\n"));
    CHECK(cats == std::vector<std::string>{"Alpha", "Beta"});
    CHECK_THROWS_AS(load_categories(testutil::write(tmp, "dup.txt", "Alpha\nAlpha\n")),
                    ValidationError);
    CHECK_THROWS_AS(load_categories(testutil::write(tmp, "empty.txt", "\n")), InputError);
}

TEST_CASE("quality features aggregate the answer scores") {
    std::map<std::string, UserProfile> profiles = build_profiles(small_dataset(), nullptr);
    QualityScores scores;
    scores.p_good = {{"a1", 0.9}, {"a2", 0.2}, {"a4", 0.5}};  // a3 unscored

    std::size_t missing = 99;
    FeatureVector u1 = extract_quality(profiles.at("u1"), scores, &missing);
    REQUIRE(u1.size() == 12);
    CHECK(missing == 1);
    CHECK(u1.value_of("user.q.good_count") == 2.0);  // a1 and the borderline a4
    CHECK(u1.value_of("user.q.bad_count") == 0.0);
    CHECK(u1.value_of("user.q.total") == 2.0);
    CHECK(u1.value_of("user.q.good_pct") == 1.0);
    CHECK(u1.value_of("user.q.p_good_sum") == doctest::Approx(1.4));
    CHECK(u1.value_of("user.q.p_all_sum") == doctest::Approx(1.4));
    CHECK(u1.value_of("user.q.p_good_avg") == doctest::Approx(0.7));
    CHECK(u1.value_of("user.q.p_good_max") == doctest::Approx(0.9));
    CHECK(u1.value_of("user.q.p_bad_max") == 0.0);

    // u2's one answer scores 0.2: counted on the Bad side as 1 - p
    FeatureVector u2 = extract_quality(profiles.at("u2"), scores);
    CHECK(u2.value_of("user.q.bad_count") == 1.0);
    CHECK(u2.value_of("user.q.bad_pct") == 1.0);
    CHECK(u2.value_of("user.q.p_bad_sum") == doctest::Approx(0.8));
    CHECK(u2.value_of("user.q.p_bad_avg") == doctest::Approx(0.8));
    CHECK(u2.value_of("user.q.p_all_sum") == doctest::Approx(0.8));
    CHECK(u2.value_of("user.q.good_pct") == 0.0);
}

TEST_CASE("quality scores round trip through jsonl") {
    TempDir tmp;
    QualityScores scores;
    scores.p_good = {{"a1", 0.25}, {"a2", 1.0}, {"a3", 0.0}};
    save_quality_scores(scores, tmp.file("scores.jsonl"));
    QualityScores back = load_quality_scores(tmp.file("scores.jsonl"));
    CHECK(back.p_good == scores.p_good);

    CHECK_THROWS_AS(load_quality_scores(testutil::write(
                        tmp, "dup.jsonl",
                        "{\"answer_id\":\"a\",\"p_good\":0.5}\n"
                        "{\"answer_id\":\"a\",\"p_good\":0.6}\n")),
                    ValidationError);
    CHECK_THROWS_AS(load_quality_scores(testutil::write(
                        tmp, "range.jsonl", "{\"answer_id\":\"a\",\"p_good\":1.5}\n")),
                    ValidationError);
    CHECK_THROWS_AS(load_quality_scores(testutil::write(tmp, "bad.jsonl", "{\"p_good\":0.5}\n")),
                    ValidationError);
}

TEST_CASE("activity features: single morning answer") {
    // Tuesday 2016-01-05, 08:00 forum-local
    ProfileOptions opts;
    opts.utc_offset_minutes = 180;
    Dataset ds;
    ds.push_back(make_thread("q1", "", "Advice and Help", ts("2016-01-05T04:00:00Z"),
                             {{"a1", "u1", ts("2016-01-05T05:00:00Z")}}));
    FeatureVector fv = extract_activity(build_profiles(ds, nullptr, opts).at("u1"));
    REQUIRE(fv.size() == 19);
    for (const FeatureVector::Dim& d : fv.dims) CHECK(d.group == groups::kUserActivity);

    CHECK(fv.value_of("user.act.answers") == 1.0);
    CHECK(fv.value_of("user.act.questions_answered") == 1.0);
    CHECK(fv.value_of("user.act.questions_asked") == 0.0);
    CHECK(fv.value_of("user.act.active_days") == 1.0);
    CHECK(fv.value_of("user.act.hours_working") == 1.0);
    CHECK(fv.value_of("user.act.hours_before_noon") == 1.0);
    CHECK(fv.value_of("user.act.hours_after_work") == 0.0);
    CHECK(fv.value_of("user.act.hours_night") == 0.0);
    CHECK(fv.value_of("user.act.hours_early") == 0.0);
    CHECK(fv.value_of("user.act.weekday") == 1.0);
    CHECK(fv.value_of("user.act.weekend") == 0.0);
    CHECK(fv.value_of("user.act.first_1") == 1.0);
    CHECK(fv.value_of("user.act.first_20") == 1.0);
}

TEST_CASE("activity hour buckets partition the day") {
    UserProfile p;
    p.options.utc_offset_minutes = 0;
    int pos = 0;
    for (int hour : {7, 14, 15, 20, 21, 3, 4, 6}) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "2016-01-04T%02d:00:00Z", hour);  // a Monday
        p.answer_history.push_back({"a" + std::to_string(pos), ts(buf), ++pos});
    }
    FeatureVector fv = extract_activity(p);
    CHECK(fv.value_of("user.act.hours_working") == 2.0);     // 07, 14
    CHECK(fv.value_of("user.act.hours_after_work") == 2.0);  // 15, 20
    CHECK(fv.value_of("user.act.hours_night") == 2.0);       // 21, 03
    CHECK(fv.value_of("user.act.hours_early") == 2.0);       // 04, 06
    CHECK(fv.value_of("user.act.hours_before_noon") == 1.0);  // 07 only
    CHECK(fv.value_of("user.act.weekday") == 8.0);

    // positions 1..8
    CHECK(fv.value_of("user.act.first_1") == 1.0);
    CHECK(fv.value_of("user.act.first_3") == 3.0);
    CHECK(fv.value_of("user.act.first_5") == 5.0);
    CHECK(fv.value_of("user.act.first_10") == 8.0);
    CHECK(fv.value_of("user.act.first_20") == 8.0);
}

TEST_CASE("weekend assignment respects the configured weekdays") {
    UserProfile p;
    p.options.utc_offset_minutes = 0;
    p.answer_history.push_back({"fri", ts("2016-01-08T12:00:00Z"), 1});
    p.answer_history.push_back({"sat", ts("2016-01-09T12:00:00Z"), 2});
    p.answer_history.push_back({"sun", ts("2016-01-10T12:00:00Z"), 3});

    FeatureVector fv = extract_activity(p);  // default weekend: Fri + Sat
    CHECK(fv.value_of("user.act.weekend") == 2.0);
    CHECK(fv.value_of("user.act.weekday") == 1.0);

    p.options.weekend_weekdays = {0};  // Sunday only
    FeatureVector sun = extract_activity(p);
    CHECK(sun.value_of("user.act.weekend") == 1.0);
    CHECK(sun.value_of("user.act.weekday") == 2.0);
}

TEST_CASE("days since registration spans registration to the global reference") {
    UserProfile p;
    p.has_posts = true;
    p.registration = ts("2016-01-01T00:00:00Z");
    p.reference_time = ts("2016-01-11T06:00:00Z");
    CHECK(extract_activity(p).value_of("user.act.days_since_reg") == 10.0);

    // a profile that never posted reports zero
    CHECK(extract_activity(UserProfile{}).value_of("user.act.days_since_reg") == 0.0);
}

TEST_CASE("goodness model separates good from bad and scores probabilities") {
    std::vector<FeatureVector> features;
    std::vector<Goodness> labels;
    std::vector<std::string> ids;
    for (int i = 0; i < 6; ++i) {
        FeatureVector fv;
        double x = (i < 3) ? 2.0 + i : -2.0 - (i - 3);
        fv.add("x", groups::kUserQuality, x);
        features.push_back(fv);
        labels.push_back(i < 3 ? Goodness::Good : Goodness::PotentiallyUseful);
        ids.push_back("a" + std::to_string(i));
    }
    LinearModel model = train_goodness_model(features, labels);
    QualityScores scores = score_goodness(model, ids, features);
    for (int i = 0; i < 6; ++i) {
        double p = scores.p_good.at(ids[i]);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        // the 0.5 cut mirrors the margin sign
        double margin = predict(model, features[i]).score;
        CHECK((p >= 0.5) == (margin >= 0.0));
        if (i < 3) CHECK(p > 0.5);       // Good side
        else CHECK(p < 0.5);             // PotentiallyUseful trains as Bad
    }

    CHECK_THROWS_AS(score_goodness(model, {"only_one"}, features), InputError);
}

}  // TEST_SUITE
