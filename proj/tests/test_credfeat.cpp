#include <string>

#include "doctest.h"
#include "qlfc/credfeat.hpp"
#include "qlfc/textproc.hpp"

using namespace qlfc;

namespace {

FeatureVector cred(const std::string& text, const WordClassLexicon& lex = WordClassLexicon::empty(),
                   const VocabularyCheck& vocab = {}) {
    return extract_credibility(tokenize(text, lex, SmileyLists::builtin()),
                               SmileyLists::builtin(), vocab);
}

}  // namespace

TEST_SUITE("credfeat") {

TEST_CASE("layout is 25 dims, zeroed on empty text") {
    FeatureVector fv = cred("");
    REQUIRE(fv.size() == kCredibilityDims);
    for (const auto& d : fv.dims) {
        CHECK(d.value == 0.0);
        CHECK(d.group == groups::kCredibility);
    }
    CHECK(fv.dims[0].name == "cred.urls");
    CHECK(fv.dims[24].name == "cred.oov");
}

TEST_CASE("surface cues: phone, url, doubled bang, smiley") {
    FeatureVector fv = cred("Call 555-1234!! See http://x.com :)");
    CHECK(fv.value_of("cred.phones") == 1);
    CHECK(fv.value_of("cred.urls") == 1);
    CHECK(fv.value_of("cred.excl_double") == 1);
    CHECK(fv.value_of("cred.excl_single") == 0);
    CHECK(fv.value_of("cred.smiley_pos") == 1);
    CHECK(fv.value_of("cred.smiley_neg") == 0);
    CHECK(fv.value_of("cred.emails") == 0);
    CHECK(fv.value_of("cred.tokens") == 6);
}

TEST_CASE("punctuation runs bucket at three or more") {
    FeatureVector fv = cred("no! what?? wait!!! really????");
    CHECK(fv.value_of("cred.excl_single") == 1);
    CHECK(fv.value_of("cred.excl_triple") == 1);
    CHECK(fv.value_of("cred.quest_double") == 1);
    CHECK(fv.value_of("cred.quest_triple") == 1);  // a 4-run counts as triple
    CHECK(fv.value_of("cred.quest_single") == 0);
}

TEST_CASE("sentence statistics") {
    FeatureVector fv = cred("This is fine. Are you sure? Good.");
    CHECK(fv.value_of("cred.sentences") == 3);
    CHECK(fv.value_of("cred.interrogative_sentences") == 1);
    // 7 word + 3 punct tokens over 3 sentences
    CHECK(fv.value_of("cred.tokens") == 10);
    CHECK(fv.value_of("cred.avg_sentence_len") == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("pronoun persons") {
    FeatureVector fv = cred("I told you that he gave me his word");
    CHECK(fv.value_of("cred.pron_first") == 2);   // i, me
    CHECK(fv.value_of("cred.pron_second") == 1);  // you
    CHECK(fv.value_of("cred.pron_third") == 2);   // he, his
    CHECK(fv.value_of("cred.pronouns") == 6);     // includes "that"
}

TEST_CASE("word class counts come from the lexicon") {
    WordClassLexicon lex = WordClassLexicon::empty();
    lex.add("visa", WordClass::Noun);
    lex.add("bring", WordClass::Verb);
    lex.add("cheap", WordClass::Adjective);
    FeatureVector fv = cred("bring a cheap visa quickly", lex);
    CHECK(fv.value_of("cred.nouns") == 1);
    CHECK(fv.value_of("cred.verbs") == 1);
    CHECK(fv.value_of("cred.adjectives") == 1);
    CHECK(fv.value_of("cred.adverbs") == 1);  // suffix heuristic on "quickly"
}

TEST_CASE("image references by extension or markup") {
    FeatureVector fv = cred("see photo.jpg and http://a.com/map.png plus [img] here");
    CHECK(fv.value_of("cred.images") == 3);
    CHECK(fv.value_of("cred.urls") == 1);

    // an extension word starting its own sentence is not a filename
    CHECK(cred("the end. Gif is a format").value_of("cred.images") == 0);
}

TEST_CASE("oov counts word tokens outside the vocabulary") {
    VocabularyCheck vocab = [](const std::string& w) { return w == "doha" || w == "in"; };
    FeatureVector fv = cred("living in doha qatarrr", WordClassLexicon::empty(), vocab);
    CHECK(fv.value_of("cred.oov") == 2);  // living, qatarrr

    // no vocabulary configured: the dimension stays 0
    CHECK(cred("living in doha").value_of("cred.oov") == 0);
}

}  // TEST_SUITE
