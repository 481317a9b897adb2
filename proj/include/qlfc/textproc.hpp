#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qlfc {

enum class WordClass { Noun, Verb, Adjective, Adverb, Pronoun, Other };

enum class TokenKind { Word, Url, Email, Phone, Smiley, Punct };

struct Token {
    std::string surface;
    std::string lower;   // case-folded surface
    WordClass cls = WordClass::Other;
    TokenKind kind = TokenKind::Word;
    bool preceded_by_space = false;
};

struct SentenceRange {
    std::size_t begin = 0;  // token index, inclusive
    std::size_t end = 0;    // token index, exclusive
};

// Tokens plus sentence ranges; ranges partition [0, tokens.size()).
struct TokenizedText {
    std::vector<Token> tokens;
    std::vector<SentenceRange> sentences;
};

// Single- and multi-character smileys kept as single tokens by the
// tokenizer. Loaded from one-entry-per-line data files.
struct SmileyLists {
    std::vector<std::string> positive;
    std::vector<std::string> negative;

    static SmileyLists load(const std::string& positive_path,
                            const std::string& negative_path);
    static SmileyLists builtin();  // small default set, used by tests
};

// term<TAB>class entries plus suffix heuristics. A fixed closed list of
// pronouns takes precedence over both.
class WordClassLexicon {
public:
    static WordClassLexicon load(const std::string& path);
    static WordClassLexicon empty();

    void add(const std::string& term, WordClass cls);
    // Expects a lowercased token.
    WordClass classify(const std::string& lower_token) const;
    bool contains(const std::string& lower_token) const { return entries_.count(lower_token) > 0; }
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, WordClass> entries_;
};

WordClass word_class_from_name(const std::string& name);
const char* word_class_name(WordClass cls);

// Deterministic rule tokenizer.
//
// Scanning left to right, the longest match wins among: URL (http://,
// https:// or www. up to whitespace, trailing sentence punctuation pushed
// back), email address, phone number (optional '+', then digits with -()
// separators, at least five digits), smiley from the given lists, word
// (alphanumeric/underscore run with internal apostrophes; bytes >= 0x80 are
// treated as letters), and finally a run of one repeated punctuation
// character ("!!" is one token, "?!" is two).
//
// Sentence boundaries close after a ./!/? punctuation token followed by a
// space and a capitalized token, or at end of text.
TokenizedText tokenize(const std::string& text,
                       const WordClassLexicon& lexicon,
                       const SmileyLists& smileys);
TokenizedText tokenize(const std::string& text, const WordClassLexicon& lexicon);

bool is_sentence_interrogative(const TokenizedText& text, const SentenceRange& s);

// Multiset of space-joined lowercased n-grams over the given tokens.
// Fewer than n tokens yields an empty multiset; n = 0 is an error.
std::unordered_map<std::string, int> word_ngrams(const std::vector<std::string>& tokens, std::size_t n);

// Lowercased non-punctuation token stream, the unit shared by the TF-IDF
// index, n-gram containment and query generation.
std::vector<std::string> content_stream(const TokenizedText& text);

// Document-frequency index with weight(term, doc) = tf * ln(1 + N/df).
// Terms absent from the corpus fall back to df = 1 (the idf ceiling).
class TfIdfIndex {
public:
    // Each document is its lowercased token stream. Empty corpus is an error.
    static TfIdfIndex build(const std::vector<std::vector<std::string>>& documents);

    double idf(const std::string& term) const;
    double weight(const std::string& term, const std::vector<std::string>& doc_tokens) const;

    // Sparse tf-idf vector of a token stream; key order unspecified.
    std::unordered_map<std::string, double> vectorize(const std::vector<std::string>& tokens) const;

    std::size_t document_count() const { return doc_count_; }
    std::size_t vocabulary_size() const { return df_.size(); }
    int df(const std::string& term) const;

private:
    std::unordered_map<std::string, int> df_;
    std::size_t doc_count_ = 0;
};

// Cosine between sparse vectors; 0 when either has no mass.
double sparse_cosine(const std::unordered_map<std::string, double>& a,
                     const std::unordered_map<std::string, double>& b);

}  // namespace qlfc
