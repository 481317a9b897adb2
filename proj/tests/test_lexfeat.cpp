#include <string>
#include <vector>

#include "doctest.h"
#include "qlfc/lexfeat.hpp"
#include "qlfc/textproc.hpp"
#include "testutil.hpp"

using namespace qlfc;

namespace {

TokenizedText tok(const std::string& text) {
    return tokenize(text, WordClassLexicon::empty());
}

}  // namespace

TEST_SUITE("lexfeat") {

TEST_CASE("bias type order is frozen") {
    CHECK(kBiasTypeCount == 12);
    CHECK(std::string(bias_type_name(BiasType::Factive)) == "factive");
    CHECK(std::string(bias_type_name(BiasType::Negative)) == "negative");
    CHECK(bias_type_from_name("modal") == BiasType::Modal);
    CHECK(bias_type_from_name("strong_subj") == BiasType::StrongSubj);
}

TEST_CASE("multiword expansion combines pronouns, modals, adverbs and verbs") {
    BiasLexicons lex = BiasLexicons::from_entries({
        {BiasType::Factive, {"believe"}},
        {BiasType::Assertive, {"see"}},
        {BiasType::Modal, {"can"}},
    });
    lex.set_adverbs({"obviously"});
    lex.expand_multiword_cues();

    CHECK(lex.has_cue(BiasType::Factive, "i believe"));
    CHECK(lex.has_cue(BiasType::Factive, "we believe"));
    CHECK(lex.has_cue(BiasType::Factive, "i can believe"));
    CHECK(lex.has_cue(BiasType::Factive, "i obviously believe"));
    CHECK(lex.has_cue(BiasType::Assertive, "we can obviously see"));
    // combinations never leak into the modal class itself
    CHECK_FALSE(lex.has_cue(BiasType::Modal, "i can"));
}

TEST_CASE("expansion without adverbs emits only the adverb-free patterns") {
    BiasLexicons lex = BiasLexicons::from_entries({
        {BiasType::Assertive, {"see"}},
        {BiasType::Modal, {"can"}},
    });
    lex.expand_multiword_cues();
    CHECK(lex.has_cue(BiasType::Assertive, "we see"));
    CHECK(lex.has_cue(BiasType::Assertive, "we can see"));
    CHECK_FALSE(lex.has_cue(BiasType::Assertive, "we can obviously see"));
    // 1 base + {i, we} x {bare, can} = 5 cues
    CHECK(lex.cues(BiasType::Assertive).size() == 5);
}

TEST_CASE("matching is greedy, longest cue first, tokens consumed once") {
    BiasLexicons lex = BiasLexicons::from_entries({
        {BiasType::Hedge, {"sure", "not sure"}},
    });
    CHECK(lex.count_matches(BiasType::Hedge, {"i", "am", "not", "sure"}) == 1);
    CHECK(lex.count_matches(BiasType::Hedge, {"sure", "not", "sure"}) == 2);
    CHECK(lex.count_matches(BiasType::Hedge, {"not"}) == 0);
}

TEST_CASE("bias score normalizes by the token count") {
    BiasLexicons lex = BiasLexicons::from_entries({
        {BiasType::Modal, {"can"}},
    });
    // 10 word tokens, 2 matches
    TokenizedText t = tok("i can go and you can come back home now");
    REQUIRE(t.tokens.size() == 10);
    CHECK(bias_score(lex, BiasType::Modal, t) == doctest::Approx(0.2));
    CHECK(bias_score(lex, BiasType::Hedge, t) == 0.0);
    CHECK(bias_score(lex, BiasType::Modal, tok("")) == 0.0);
}

TEST_CASE("single-token cue on a single-token text scores 1") {
    BiasLexicons lex = BiasLexicons::from_entries({
        {BiasType::Negation, {"never"}},
    });
    FeatureVector fv = extract_linguistic(lex, tok("never"));
    REQUIRE(fv.size() == kBiasTypeCount);
    CHECK(fv.value_of("lex.negation") == doctest::Approx(1.0));
    CHECK(fv.value_of("lex.modal") == 0.0);
}

TEST_CASE("factive verbs counted twice in a realistic answer") {
    BiasLexicons lex = BiasLexicons::from_entries({
        {BiasType::Factive, {"know"}},
    });
    TokenizedText t = tok(
        "About Voltaire; I know that they will open a second school; and they are a nice french "
        "school. I know that they provide a qualified french education and add with that the "
        "history and arabic language to be adapted to the qatar. I think that's an interesting "
        "addition.");
    CHECK(lex.count_matches(BiasType::Factive,
                            [&] {
                                std::vector<std::string> lower;
                                for (const Token& x : t.tokens) lower.push_back(x.lower);
                                return lower;
                            }()) == 2);
    double expected = 2.0 / static_cast<double>(t.tokens.size());
    CHECK(bias_score(lex, BiasType::Factive, t) == doctest::Approx(expected));
}

TEST_CASE("extract_linguistic is 12 dims in fixed order, zeros on empty text") {
    BiasLexicons lex = BiasLexicons::from_entries({{BiasType::Hedge, {"maybe"}}});
    FeatureVector fv = extract_linguistic(lex, tok(""));
    REQUIRE(fv.size() == 12);
    CHECK(fv.dims[0].name == "lex.factive");
    CHECK(fv.dims[11].name == "lex.negative");
    for (const auto& d : fv.dims) {
        CHECK(d.value == 0.0);
        CHECK(d.group == groups::kLinguistic);
    }

    BiasVector v = bias_vector(lex, tok("maybe maybe"));
    CHECK(v[static_cast<std::size_t>(BiasType::Hedge)] == doctest::Approx(1.0));
}

TEST_CASE("lexicons load from a directory, one file per type") {
    qlfc::testutil::TempDir dir;
    const char* names[] = {"factive", "assertive", "implicative", "hedge",
                           "report_verb", "wiki_bias", "modal", "negation",
                           "strong_subj", "weak_subj", "positive", "negative"};
    for (const char* n : names) {
        qlfc::testutil::write(dir, std::string(n) + ".txt", std::string(n) + "word\n");
    }
    qlfc::testutil::write(dir, "strong_subj_adverbs.txt", "# none\n");
    BiasLexicons lex = BiasLexicons::load(dir.str());
    CHECK(lex.has_cue(BiasType::Factive, "factiveword"));
    CHECK(lex.has_cue(BiasType::Factive, "i factiveword"));  // expanded by default
    CHECK(lex.has_cue(BiasType::WikiBias, "wiki_biasword"));
    CHECK(lex.fingerprint() != 0);

    BiasLexicons bare = BiasLexicons::load(dir.str(), false);
    CHECK_FALSE(bare.has_cue(BiasType::Factive, "i factiveword"));
    CHECK(bare.fingerprint() != lex.fingerprint());
}

}  // TEST_SUITE
