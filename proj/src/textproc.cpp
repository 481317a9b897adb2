#include "qlfc/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "qlfc/common.hpp"

namespace qlfc {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_word_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || u >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

const std::unordered_set<std::string>& pronoun_list() {
    static const std::unordered_set<std::string> pronouns = {
        "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves",
        "you", "your", "yours", "yourself", "yourselves",
        "he", "him", "his", "himself", "she", "her", "hers", "herself",
        "it", "its", "itself", "they", "them", "their", "theirs", "themselves",
        "who", "whom", "whose", "this", "that", "these", "those",
        "anyone", "anybody", "anything", "someone", "somebody", "something",
        "everyone", "everybody", "everything", "nobody", "nothing"};
    return pronouns;
}

size_t match_url(const std::string& s, size_t pos) {
    if (!(starts_with_ci(std::string_view(s).substr(pos), "http://") ||
          starts_with_ci(std::string_view(s).substr(pos), "https://") ||
          starts_with_ci(std::string_view(s).substr(pos), "www."))) {
        return 0;
    }
    size_t end = pos;
    while (end < s.size() && !is_space(s[end])) ++end;
    // Sentence punctuation glued to the end of a URL belongs to the text.
    while (end > pos && std::string(".,;:!?)]}\"'").find(s[end - 1]) != std::string::npos) --end;
    return end - pos;
}

size_t match_email(const std::string& s, size_t pos) {
    size_t i = pos;
    auto local_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) ||
               c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
    };
    while (i < s.size() && local_char(s[i])) ++i;
    if (i == pos || i >= s.size() || s[i] != '@') return 0;
    size_t at = i++;
    size_t domain_start = i;
    size_t last_dot = std::string::npos;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == '-')) {
        if (s[i] == '.') last_dot = i;
        ++i;
    }
    if (i == domain_start || last_dot == std::string::npos || last_dot == at + 1) return 0;
    size_t tld_len = i - last_dot - 1;
    if (tld_len < 2) return 0;
    for (size_t k = last_dot + 1; k < i; ++k) {
        if (!std::isalpha(static_cast<unsigned char>(s[k]))) return 0;
    }
    return i - pos;
}

size_t match_phone(const std::string& s, size_t pos) {
    size_t i = pos;
    if (i < s.size() && s[i] == '+') ++i;
    if (i >= s.size() || !is_digit(s[i])) return 0;
    int digits = 0;
    size_t last_digit = i;
    while (i < s.size() && (is_digit(s[i]) || s[i] == '-' || s[i] == '(' || s[i] == ')')) {
        if (is_digit(s[i])) {
            ++digits;
            last_digit = i;
        }
        ++i;
    }
    if (digits < 5) return 0;
    return last_digit + 1 - pos;
}

size_t match_smiley(const std::string& s, size_t pos, const SmileyLists& smileys) {
    size_t best = 0;
    auto try_list = [&](const std::vector<std::string>& list) {
        for (const auto& sm : list) {
            if (sm.size() > best && s.compare(pos, sm.size(), sm) == 0) best = sm.size();
        }
    };
    try_list(smileys.positive);
    try_list(smileys.negative);
    return best;
}

size_t match_word(const std::string& s, size_t pos) {
    if (!is_word_char(s[pos])) return 0;
    size_t i = pos;
    while (i < s.size() && (is_word_char(s[i]) ||
                            (s[i] == '\'' && i + 1 < s.size() && is_word_char(s[i + 1])))) {
        ++i;
    }
    return i - pos;
}

bool starts_uppercase(const std::string& surface) {
    return !surface.empty() && std::isupper(static_cast<unsigned char>(surface[0]));
}

}  // namespace

SmileyLists SmileyLists::load(const std::string& positive_path, const std::string& negative_path) {
    SmileyLists lists;
    lists.positive = read_line_list(positive_path);
    lists.negative = read_line_list(negative_path);
    return lists;
}

SmileyLists SmileyLists::builtin() {
    SmileyLists lists;
    lists.positive = {":)", ":-)", ":D", ":-D", ";)", ";-)", "=)", ":]", ":P", ":-P"};
    lists.negative = {":(", ":-(", ":[", "=(", ":'(", ":/", ":-/"};
    return lists;
}

WordClassLexicon WordClassLexicon::load(const std::string& path) {
    WordClassLexicon lex;
    for (const auto& line : read_line_list(path)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw InputError("word-class lexicon line missing tab separator: '" + line + "'");
        }
        lex.add(to_lower_ascii(trim(line.substr(0, tab))),
                word_class_from_name(trim(line.substr(tab + 1))));
    }
    return lex;
}

WordClassLexicon WordClassLexicon::empty() { return WordClassLexicon(); }

void WordClassLexicon::add(const std::string& term, WordClass cls) {
    entries_[term] = cls;
}

WordClass WordClassLexicon::classify(const std::string& t) const {
    if (pronoun_list().count(t)) return WordClass::Pronoun;
    auto it = entries_.find(t);
    if (it != entries_.end()) return it->second;
    auto ends_with = [&](const char* suffix) {
        std::string_view sv(suffix);
        return t.size() > sv.size() && t.compare(t.size() - sv.size(), sv.size(), sv) == 0;
    };
    if (ends_with("ly")) return WordClass::Adverb;
    if (ends_with("tion") || ends_with("ness")) return WordClass::Noun;
    if (ends_with("ize") || ends_with("ate")) return WordClass::Verb;
    if (ends_with("ous") || ends_with("ful") || ends_with("ive")) return WordClass::Adjective;
    return WordClass::Other;
}

WordClass word_class_from_name(const std::string& name) {
    std::string n = to_lower_ascii(name);
    if (n == "noun" || n == "n") return WordClass::Noun;
    if (n == "verb" || n == "v") return WordClass::Verb;
    if (n == "adjective" || n == "adj" || n == "a") return WordClass::Adjective;
    if (n == "adverb" || n == "adv" || n == "r") return WordClass::Adverb;
    if (n == "pronoun" || n == "pron") return WordClass::Pronoun;
    if (n == "other" || n == "o") return WordClass::Other;
    throw InputError("unknown word class name: '" + name + "'");
}

const char* word_class_name(WordClass cls) {
    switch (cls) {
        case WordClass::Noun: return "noun";
        case WordClass::Verb: return "verb";
        case WordClass::Adjective: return "adjective";
        case WordClass::Adverb: return "adverb";
        case WordClass::Pronoun: return "pronoun";
        case WordClass::Other: return "other";
    }
    return "other";
}

TokenizedText tokenize(const std::string& text,
                       const WordClassLexicon& lexicon,
                       const SmileyLists& smileys) {
    TokenizedText out;
    size_t pos = 0;
    bool pending_space = false;
    while (pos < text.size()) {
        if (is_space(text[pos])) {
            pending_space = true;
            ++pos;
            continue;
        }
        Token tok;
        tok.preceded_by_space = pending_space || out.tokens.empty();
        pending_space = false;
        size_t len;
        if ((len = match_url(text, pos)) > 0) {
            tok.kind = TokenKind::Url;
        } else if ((len = match_email(text, pos)) > 0) {
            tok.kind = TokenKind::Email;
        } else if ((len = match_phone(text, pos)) > 0) {
            tok.kind = TokenKind::Phone;
        } else if ((len = match_smiley(text, pos, smileys)) > 0) {
            tok.kind = TokenKind::Smiley;
        } else if ((len = match_word(text, pos)) > 0) {
            tok.kind = TokenKind::Word;
        } else {
            // Run of one repeated punctuation character.
            len = 1;
            while (pos + len < text.size() && text[pos + len] == text[pos]) ++len;
            tok.kind = TokenKind::Punct;
        }
        tok.surface = text.substr(pos, len);
        tok.lower = to_lower_ascii(tok.surface);
        if (tok.kind == TokenKind::Word) tok.cls = lexicon.classify(tok.lower);
        out.tokens.push_back(std::move(tok));
        pos += len;
    }

    size_t sentence_begin = 0;
    for (size_t i = 0; i < out.tokens.size(); ++i) {
        const Token& t = out.tokens[i];
        bool closes = false;
        if (t.kind == TokenKind::Punct &&
            (t.surface[0] == '.' || t.surface[0] == '!' || t.surface[0] == '?')) {
            if (i + 1 == out.tokens.size()) {
                closes = true;
            } else {
                const Token& next = out.tokens[i + 1];
                closes = next.preceded_by_space && starts_uppercase(next.surface);
            }
        }
        if (closes) {
            out.sentences.push_back({sentence_begin, i + 1});
            sentence_begin = i + 1;
        }
    }
    if (sentence_begin < out.tokens.size()) {
        out.sentences.push_back({sentence_begin, out.tokens.size()});
    }
    return out;
}

TokenizedText tokenize(const std::string& text, const WordClassLexicon& lexicon) {
    return tokenize(text, lexicon, SmileyLists::builtin());
}

bool is_sentence_interrogative(const TokenizedText& text, const SentenceRange& s) {
    for (size_t i = s.end; i > s.begin; --i) {
        const Token& t = text.tokens[i - 1];
        if (t.kind != TokenKind::Punct) return false;
        if (t.surface[0] == '?') return true;
    }
    return false;
}

std::unordered_map<std::string, int> word_ngrams(const std::vector<std::string>& tokens,
                                                 std::size_t n) {
    if (n == 0) throw InputError("n-gram order must be at least 1");
    std::unordered_map<std::string, int> grams;
    if (tokens.size() < n) return grams;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string g;
        for (size_t k = 0; k < n; ++k) {
            if (k) g += ' ';
            g += to_lower_ascii(tokens[i + k]);
        }
        ++grams[g];
    }
    return grams;
}

std::vector<std::string> content_stream(const TokenizedText& text) {
    std::vector<std::string> stream;
    stream.reserve(text.tokens.size());
    for (const Token& t : text.tokens) {
        if (t.kind != TokenKind::Punct) stream.push_back(t.lower);
    }
    return stream;
}

TfIdfIndex TfIdfIndex::build(const std::vector<std::vector<std::string>>& documents) {
    if (documents.empty()) throw InputError("cannot build TF-IDF index from an empty corpus");
    TfIdfIndex index;
    index.doc_count_ = documents.size();
    std::unordered_set<std::string> seen;
    for (const auto& doc : documents) {
        seen.clear();
        for (const auto& tok : doc) seen.insert(to_lower_ascii(tok));
        for (const auto& term : seen) ++index.df_[term];
    }
    return index;
}

int TfIdfIndex::df(const std::string& term) const {
    auto it = df_.find(to_lower_ascii(term));
    return it == df_.end() ? 0 : it->second;
}

double TfIdfIndex::idf(const std::string& term) const {
    int d = df(term);
    if (d < 1) d = 1;  // unseen terms get the idf ceiling
    return std::log(1.0 + static_cast<double>(doc_count_) / d);
}

double TfIdfIndex::weight(const std::string& term,
                          const std::vector<std::string>& doc_tokens) const {
    std::string lt = to_lower_ascii(term);
    int tf = 0;
    for (const auto& t : doc_tokens) {
        if (to_lower_ascii(t) == lt) ++tf;
    }
    return tf * idf(lt);
}

std::unordered_map<std::string, double> TfIdfIndex::vectorize(
    const std::vector<std::string>& tokens) const {
    std::unordered_map<std::string, int> tf;
    for (const auto& t : tokens) ++tf[to_lower_ascii(t)];
    std::unordered_map<std::string, double> vec;
    vec.reserve(tf.size());
    for (const auto& [term, count] : tf) vec[term] = count * idf(term);
    return vec;
}

double sparse_cosine(const std::unordered_map<std::string, double>& a,
                     const std::unordered_map<std::string, double>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    double dot = 0;
    for (const auto& [term, va] : small) {
        auto it = large.find(term);
        if (it != large.end()) dot += va * it->second;
    }
    double na = 0, nb = 0;
    for (const auto& [term, v] : a) na += v * v;
    for (const auto& [term, v] : b) nb += v * v;
    if (na <= 0 || nb <= 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace qlfc
