#include <string>

#include "doctest.h"
#include "qlfc/common.hpp"
#include "qlfc/corpus.hpp"
#include "testutil.hpp"

using namespace qlfc;
using qlfc::testutil::TempDir;

namespace {

// One thread with two labeled answers and one unlabeled Bad answer.
const char* kThreadLine =
    R"({"question":{"id":"q1","subject":"Visa","body":"How long?","category":"Visas","timestamp":"2016-01-01T08:00:00Z","user_id":"u_q"},)"
    R"("answers":[)"
    R"({"id":"q1_a1","body":"30 days.","timestamp":"2016-01-01T09:00:00Z","user_id":"u1","thread_position":1,"goodness":"Good","fact_label":"FactTrue"},)"
    R"({"id":"q1_a2","body":"No idea.","timestamp":"2016-01-01T10:00:00Z","user_id":"u2","thread_position":2,"goodness":"Bad"},)"
    R"({"id":"q1_a3","body":"90 days.","timestamp":"2016-01-01T11:00:00Z","user_id":"u3","thread_position":3,"goodness":"Good","fact_label":"FactFalse"}]})";

std::string with_answers(const std::string& answers) {
    return R"({"question":{"id":"q1","subject":"S","body":"B","category":"C","timestamp":"2016-01-01T08:00:00Z","user_id":"u"},"answers":[)" +
           answers + "]}";
}

std::string answer(const std::string& id, int pos, const std::string& goodness,
                   const std::string& label = "") {
    std::string a = R"({"id":")" + id +
                    R"(","body":"x","timestamp":"2016-01-01T09:00:00Z","user_id":"u1","thread_position":)" +
                    std::to_string(pos) + R"(,"goodness":")" + goodness + "\"";
    if (!label.empty()) a += R"(,"fact_label":")" + label + "\"";
    return a + "}";
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("binarize: FactTrue against the rest") {
    CHECK(binarize(FactLabel::FactTrue) == BinaryLabel::Positive);
    for (FactLabel l : {FactLabel::FactFalse, FactLabel::PartiallyTrue,
                        FactLabel::ConditionallyTrue, FactLabel::ResponderUnsure,
                        FactLabel::NonFactual}) {
        CHECK(binarize(l) == BinaryLabel::Negative);
    }
}

TEST_CASE("label parsing squashes case, spaces, dashes and underscores") {
    CHECK(fact_label_from_name("FactTrue") == FactLabel::FactTrue);
    CHECK(fact_label_from_name("Factual - TRUE") == FactLabel::FactTrue);
    CHECK(fact_label_from_name("factual_true") == FactLabel::FactTrue);
    CHECK(fact_label_from_name("Factual - Partially True") == FactLabel::PartiallyTrue);
    CHECK(fact_label_from_name("NonFactual") == FactLabel::NonFactual);
    CHECK(goodness_from_name("potentially useful") == Goodness::PotentiallyUseful);
    CHECK_THROWS_AS(fact_label_from_name("maybe"), ValidationError);
    CHECK_THROWS_AS(goodness_from_name(""), ValidationError);

    for (FactLabel l : {FactLabel::FactTrue, FactLabel::FactFalse, FactLabel::PartiallyTrue,
                        FactLabel::ConditionallyTrue, FactLabel::ResponderUnsure,
                        FactLabel::NonFactual}) {
        CHECK(fact_label_from_name(fact_label_name(l)) == l);
    }
}

TEST_CASE("parse reads the documented thread schema") {
    Dataset ds = parse_dataset(kThreadLine, "inline");
    REQUIRE(ds.size() == 1);
    const Thread& t = ds[0];
    CHECK(t.question.id == "q1");
    CHECK(t.question.category == "Visas");
    CHECK(t.question.timestamp == parse_rfc3339("2016-01-01T08:00:00Z"));
    REQUIRE(t.answers.size() == 3);
    CHECK(t.answers[0].labeled());
    CHECK(*t.answers[0].fact_label == FactLabel::FactTrue);
    CHECK_FALSE(t.answers[1].labeled());
    CHECK(t.answers[1].goodness == Goodness::Bad);
    CHECK(t.answers[2].thread_position == 3);

    CHECK(parse_dataset("", "inline").empty());
    CHECK(parse_dataset("\n\n", "inline").empty());
}

TEST_CASE("schema violations are rejected with the line named") {
    // fact label on a non-Good answer
    CHECK_THROWS_WITH_AS(parse_dataset(with_answers(answer("a1", 1, "Bad", "FactTrue")), "f"),
                         doctest::Contains("not Good"), ValidationError);
    // duplicate answer id
    CHECK_THROWS_WITH_AS(
        parse_dataset(with_answers(answer("a1", 1, "Good") + "," + answer("a1", 2, "Good")), "f"),
        doctest::Contains("duplicate"), ValidationError);
    // positions must be contiguous from 1
    CHECK_THROWS_AS(parse_dataset(with_answers(answer("a1", 2, "Good")), "f"), ValidationError);
    CHECK_THROWS_AS(
        parse_dataset(with_answers(answer("a1", 1, "Good") + "," + answer("a2", 3, "Good")), "f"),
        ValidationError);
    // malformed JSON names the line
    CHECK_THROWS_WITH_AS(parse_dataset("{oops", "file.jsonl"), doctest::Contains("file.jsonl:1"),
                         ValidationError);
    // duplicate question ids across lines
    std::string twice = std::string(kThreadLine) + "\n" + kThreadLine + "\n";
    CHECK_THROWS_WITH_AS(parse_dataset(twice, "f"), doctest::Contains("duplicate question"),
                         ValidationError);
}

TEST_CASE("stats count labeled answers only") {
    Dataset ds = parse_dataset(kThreadLine, "inline");
    DatasetStats s = validate_stats(ds);
    CHECK(s.n_questions == 1);
    CHECK(s.n_annotated_answers == 2);
    CHECK(s.n_positive == 1);
    CHECK(s.n_negative == 1);
    CHECK(s.per_label.at(FactLabel::FactTrue) == 1);
    CHECK(s.per_label.at(FactLabel::FactFalse) == 1);
    CHECK(s.per_label.count(FactLabel::NonFactual) == 0);

    Dataset none = parse_dataset(with_answers(answer("a1", 1, "Bad")), "inline");
    DatasetStats s2 = validate_stats(none);
    CHECK(s2.n_questions == 1);
    CHECK(s2.n_annotated_answers == 0);
}

TEST_CASE("stats mismatches report each difference") {
    Dataset ds = parse_dataset(kThreadLine, "inline");
    DatasetStats got = validate_stats(ds);
    CHECK(stats_mismatches(got, got).empty());

    DatasetStats want = got;
    want.n_positive = 2;
    auto diffs = stats_mismatches(got, want);
    REQUIRE(diffs.size() == 1);
    CHECK(diffs[0].find("positive") != std::string::npos);

    // reference_stats pins the published distribution
    DatasetStats ref = reference_stats();
    CHECK(ref.n_questions == 71);
    CHECK(ref.n_annotated_answers == 249);
    CHECK(ref.n_positive == 128);
    CHECK(ref.n_negative == 121);
    CHECK(ref.per_label.at(FactLabel::FactFalse) == 22);
    CHECK(ref.per_label.at(FactLabel::PartiallyTrue) == 38);
    CHECK(ref.per_label.at(FactLabel::ConditionallyTrue) == 16);
    CHECK(ref.per_label.at(FactLabel::ResponderUnsure) == 26);
    CHECK(ref.per_label.at(FactLabel::NonFactual) == 19);
    CHECK(ref.per_label.at(FactLabel::FactTrue) == 128);
}

TEST_CASE("serialize round trips and is canonical") {
    Dataset ds = parse_dataset(kThreadLine, "inline");
    std::string text = serialize_dataset(ds);
    Dataset again = parse_dataset(text, "round");
    CHECK(serialize_dataset(again) == text);

    TempDir dir;
    save_dataset(ds, dir.file("ds.jsonl"));
    Dataset loaded = load_dataset(dir.file("ds.jsonl"));
    CHECK(serialize_dataset(loaded) == text);

    CHECK_THROWS_AS(load_dataset(dir.file("missing.jsonl")), InputError);
}

TEST_CASE("semeval xml conversion matches the jsonl form of the sample corpus") {
    // The shipped XML and JSONL encode the same threads; converting one must
    // reproduce the other byte for byte.
    Dataset from_xml =
        load_semeval_xml(qlfc::testutil::data_path("semeval/ql-fact-sample.xml"), 180);
    Dataset from_jsonl = load_dataset(qlfc::testutil::data_path("dataset.jsonl"));
    CHECK(serialize_dataset(from_xml) == serialize_dataset(from_jsonl));
}

TEST_CASE("semeval xml entities and local dates") {
    const char* xml = R"(<?xml version="1.0"?>
<xml>
<Thread THREAD_SEQUENCE="T1">
<RelQuestion RELQ_ID="T1_Q" RELQ_CATEGORY="Visas &amp; Permits" RELQ_DATE="2016-01-02 01:30:00" RELQ_USERID="asker">
<RelQSubject>A &lt;test&gt;</RelQSubject>
<RelQBody>Is it "fine"?</RelQBody>
</RelQuestion>
<RelComment RELC_ID="T1_C1" RELC_DATE="2016-01-02 02:00:00" RELC_USERID="u1" RELC_RELEVANCE2RELQ="Good" RELC_FACT_LABEL="Factual - TRUE">
<RelCText>Yes &amp; no.</RelCText>
</RelComment>
</Thread>
</xml>)";
    Dataset ds = convert_semeval_xml(xml, 180, "inline.xml");
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].question.subject == "A <test>");
    CHECK(ds[0].question.category == "Visas & Permits");
    // forum-local +03:00 wall time
    CHECK(ds[0].question.timestamp == parse_rfc3339("2016-01-01T22:30:00Z"));
    REQUIRE(ds[0].answers.size() == 1);
    CHECK(ds[0].answers[0].body == "Yes & no.");
    CHECK(ds[0].answers[0].thread_position == 1);
    CHECK(*ds[0].answers[0].fact_label == FactLabel::FactTrue);
}

}  // TEST_SUITE
