#include "qlfc/credfeat.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "qlfc/common.hpp"

namespace qlfc {

namespace {

const std::unordered_set<std::string>& first_person() {
    static const std::unordered_set<std::string> s = {
        "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves"};
    return s;
}

const std::unordered_set<std::string>& second_person() {
    static const std::unordered_set<std::string> s = {
        "you", "your", "yours", "yourself", "yourselves"};
    return s;
}

const std::unordered_set<std::string>& third_person() {
    static const std::unordered_set<std::string> s = {
        "he", "him", "his", "himself", "she", "her", "hers", "herself",
        "it", "its", "itself", "they", "them", "their", "theirs", "themselves"};
    return s;
}

bool looks_like_image(const std::string& lower) {
    static const char* suffixes[] = {".jpg", ".jpeg", ".png", ".gif"};
    for (const char* suf : suffixes) {
        std::string_view sv(suf);
        if (lower.size() > sv.size() &&
            lower.compare(lower.size() - sv.size(), sv.size(), sv) == 0) {
            return true;
        }
    }
    return lower.find("[img]") != std::string::npos;
}

bool is_image_extension(const std::string& lower) {
    return lower == "jpg" || lower == "jpeg" || lower == "png" || lower == "gif";
}

// Bare filenames tokenize as [name][.][ext] and "[img]" as three tokens,
// so image mentions in plain text are detected positionally.
bool is_image_mention(const TokenizedText& text, std::size_t i) {
    const std::vector<Token>& ts = text.tokens;
    const Token& t = ts[i];
    if (looks_like_image(t.lower)) return true;
    if (is_image_extension(t.lower) && i >= 2 &&
        ts[i - 1].kind == TokenKind::Punct && ts[i - 1].surface == "." &&
        ts[i - 2].kind == TokenKind::Word && !ts[i].preceded_by_space) {
        return true;
    }
    if (t.lower == "img" && i >= 1 && i + 1 < ts.size() &&
        ts[i - 1].kind == TokenKind::Punct && ts[i - 1].surface == "[" &&
        ts[i + 1].kind == TokenKind::Punct && ts[i + 1].surface == "]") {
        return true;
    }
    return false;
}

bool in_list(const std::vector<std::string>& list, const std::string& s) {
    return std::find(list.begin(), list.end(), s) != list.end();
}

}  // namespace

FeatureVector extract_credibility(const TokenizedText& answer,
                                  const SmileyLists& smileys,
                                  const VocabularyCheck& in_vocabulary) {
    double urls = 0, images = 0, emails = 0, phones = 0;
    double pron1 = 0, pron2 = 0, pron3 = 0;
    double smiley_pos = 0, smiley_neg = 0;
    std::array<double, 3> excl{};   // runs of length 1, 2, >=3
    std::array<double, 3> quest{};
    double nouns = 0, verbs = 0, adjectives = 0, adverbs = 0, pronouns = 0;
    double oov = 0;

    for (std::size_t i = 0; i < answer.tokens.size(); ++i) {
        const Token& t = answer.tokens[i];
        switch (t.kind) {
            case TokenKind::Url:
                ++urls;
                if (looks_like_image(t.lower)) ++images;
                break;
            case TokenKind::Email: ++emails; break;
            case TokenKind::Phone: ++phones; break;
            case TokenKind::Smiley:
                if (in_list(smileys.positive, t.surface)) ++smiley_pos;
                else if (in_list(smileys.negative, t.surface)) ++smiley_neg;
                break;
            case TokenKind::Punct: {
                char c = t.surface[0];
                if (c == '!' || c == '?') {
                    size_t bucket = std::min<std::size_t>(t.surface.size(), 3) - 1;
                    (c == '!' ? excl : quest)[bucket] += 1;
                }
                break;
            }
            case TokenKind::Word: {
                if (is_image_mention(answer, i)) ++images;
                if (first_person().count(t.lower)) ++pron1;
                else if (second_person().count(t.lower)) ++pron2;
                else if (third_person().count(t.lower)) ++pron3;
                switch (t.cls) {
                    case WordClass::Noun: ++nouns; break;
                    case WordClass::Verb: ++verbs; break;
                    case WordClass::Adjective: ++adjectives; break;
                    case WordClass::Adverb: ++adverbs; break;
                    case WordClass::Pronoun: ++pronouns; break;
                    case WordClass::Other: break;
                }
                if (in_vocabulary && !in_vocabulary(t.lower)) ++oov;
                break;
            }
        }
    }

    double n_tokens = static_cast<double>(answer.tokens.size());
    double n_sentences = static_cast<double>(answer.sentences.size());
    double avg_len = n_sentences > 0 ? n_tokens / n_sentences : 0.0;
    double interrogative = 0;
    for (const SentenceRange& s : answer.sentences) {
        if (is_sentence_interrogative(answer, s)) ++interrogative;
    }

    FeatureVector fv;
    const char* g = groups::kCredibility;
    fv.add("cred.urls", g, urls);
    fv.add("cred.images", g, images);
    fv.add("cred.emails", g, emails);
    fv.add("cred.phones", g, phones);
    fv.add("cred.tokens", g, n_tokens);
    fv.add("cred.sentences", g, n_sentences);
    fv.add("cred.avg_sentence_len", g, avg_len);
    fv.add("cred.pron_first", g, pron1);
    fv.add("cred.pron_second", g, pron2);
    fv.add("cred.pron_third", g, pron3);
    fv.add("cred.smiley_pos", g, smiley_pos);
    fv.add("cred.smiley_neg", g, smiley_neg);
    fv.add("cred.excl_single", g, excl[0]);
    fv.add("cred.excl_double", g, excl[1]);
    fv.add("cred.excl_triple", g, excl[2]);
    fv.add("cred.quest_single", g, quest[0]);
    fv.add("cred.quest_double", g, quest[1]);
    fv.add("cred.quest_triple", g, quest[2]);
    fv.add("cred.interrogative_sentences", g, interrogative);
    fv.add("cred.nouns", g, nouns);
    fv.add("cred.verbs", g, verbs);
    fv.add("cred.adjectives", g, adjectives);
    fv.add("cred.adverbs", g, adverbs);
    fv.add("cred.pronouns", g, pronouns);
    fv.add("cred.oov", g, oov);
    return fv;
}

}  // namespace qlfc
