#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlfc/corpus.hpp"
#include "qlfc/textproc.hpp"

namespace qlfc {

enum class SourceType { Reputed, Forum, Other };
enum class SearchScope { Web, ForumOnly };
enum class QueryOrigin { Question, Answer, QaPair };

const char* source_type_name(SourceType t);
const char* search_scope_name(SearchScope s);
SearchScope search_scope_from_name(const std::string& name);

struct QueryTerm {
    std::string text;
    bool entity = false;   // rendered quoted; never dropped by backoff
    double weight = 0.0;   // tf-idf, governs the backoff drop order
};

struct Query {
    std::vector<QueryTerm> terms;
    QueryOrigin origin = QueryOrigin::QaPair;

    // Entity phrases quoted, terms joined by single spaces.
    std::string rendered() const;
    std::vector<std::string> rendered_terms() const;
};

// Lowercased word stream of the query; entity phrases contribute their
// individual words. This is the form similarity scoring consumes.
std::vector<std::string> query_tokens(const Query& query);

struct SearchResult {
    std::string url;
    std::string snippet;
    std::string page_text;  // empty when the page was not fetched
    int rank = 0;           // 1-based, unique within a result set
    SourceType source_type = SourceType::Other;
    bool relevant = false;
};

// Maximal runs of capitalized word tokens within a sentence, each run one
// phrase. A sentence-initial capitalized token whose lowercase form the
// lexicon knows is ordinary sentence case, not a name, and is left out of
// the run. Case-insensitive dedup, first surface form kept.
std::vector<std::string> extract_entities(const TokenizedText& text,
                                          const WordClassLexicon& lexicon);

// Entities from question and answer first (quoted), then pooled content
// words (nouns, verbs, adjectives) sorted by descending tf-idf weight in
// the combined text, ties lexicographic; deduplicated, truncated to 10
// terms. Queries shorter than 3 terms are allowed only when the pool is
// exhausted; an entirely empty pool is an error.
Query generate_query(const TokenizedText& question, const TokenizedText& answer,
                     const TfIdfIndex& index, const WordClassLexicon& lexicon,
                     QueryOrigin origin = QueryOrigin::QaPair);

struct DomainLists {
    std::vector<std::string> reputed;
    std::vector<std::string> forum;

    static DomainLists load(const std::string& reputed_path, const std::string& forum_path);
};

// Lowercased host part, empty when the URL has none.
std::string url_host(const std::string& url);

// Host-suffix match against the reputed list, then the forum list, else
// Other. Total over all inputs; unparseable URLs are Other.
SourceType classify_source(const std::string& url, const DomainLists& domains);

struct RelevanceFilter {
    std::vector<std::string> keywords;  // empty list: everything is relevant

    static RelevanceFilter default_filter() { return {{"qatar"}}; }
};

// True when any keyword occurs (case-insensitive) in the url, snippet, or
// page text.
bool is_relevant(const SearchResult& result, const RelevanceFilter& filter);

class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    // Results ordered by rank. I/O failures raise InputError naming the
    // rendered query.
    virtual std::vector<SearchResult> search(const Query& query, SearchScope scope) = 0;
};

struct FixtureRecord {
    std::vector<std::string> query_terms;  // rendered form, entities quoted
    SearchScope scope = SearchScope::Web;
    std::vector<SearchResult> results;  // url/snippet/page_text/rank only
};

std::vector<FixtureRecord> load_fixtures(const std::string& path);
// Records are written sorted by (scope, query) so the file is a canonical
// function of its contents.
void save_fixtures(const std::vector<FixtureRecord>& records, const std::string& path);

// Replays recorded results keyed by (rendered query, scope). In strict mode
// an unrecorded query is an error; otherwise it yields no results.
class FixtureProvider : public SearchProvider {
public:
    FixtureProvider(const std::string& path, bool strict);
    explicit FixtureProvider(const std::vector<FixtureRecord>& records, bool strict = false);

    std::vector<SearchResult> search(const Query& query, SearchScope scope) override;
    std::size_t size() const { return results_.size(); }

private:
    std::map<std::string, std::vector<SearchResult>> results_;
    bool strict_ = false;
};

// TF-IDF ranking over a thread dump, one document per thread; serves the
// ForumOnly scope. Stands in for site-restricted search.
class LocalForumSearchProvider : public SearchProvider {
public:
    LocalForumSearchProvider(const Dataset& dump, const WordClassLexicon& lexicon,
                             std::string url_prefix = "https://www.qatarliving.com/forum/");

    std::vector<SearchResult> search(const Query& query, SearchScope scope) override;

private:
    struct Doc {
        std::string url;
        std::string snippet;
        std::string page_text;
        std::vector<std::string> tokens;
    };
    std::vector<Doc> docs_;
    TfIdfIndex index_;
};

// TF-IDF ranking over a flat page corpus (JSON Lines {url, title, text});
// serves the Web scope. An offline stand-in for a web index, used to record
// replayable fixtures.
class LocalWebSearchProvider : public SearchProvider {
public:
    LocalWebSearchProvider(const std::string& corpus_path, const WordClassLexicon& lexicon);

    std::vector<SearchResult> search(const Query& query, SearchScope scope) override;

private:
    struct Doc {
        std::string url;
        std::string snippet;
        std::string page_text;
        std::vector<std::string> tokens;
    };
    std::vector<Doc> docs_;
    TfIdfIndex index_;
};

// Minimal HTTP client for a JSON search endpoint:
// GET <endpoint>?q=<query>&scope=<web|forum>&n=10 with an optional
// X-Api-Key header taken from the named environment variable. Responses
// are {"results": [{"url", "snippet", "page_text"?}]}. Requests are
// serialized with a minimum inter-request delay.
class LiveSearchProvider : public SearchProvider {
public:
    LiveSearchProvider(std::string endpoint, std::string api_key_env, int min_delay_ms);

    std::vector<SearchResult> search(const Query& query, SearchScope scope) override;

private:
    std::string endpoint_;
    std::string api_key_env_;
    int min_delay_ms_ = 0;
    long long last_request_ms_ = -1;
};

// Pass-through wrapper that captures every (query, results) pair it serves,
// including backoff retries, for later save_fixtures().
class RecordingProvider : public SearchProvider {
public:
    explicit RecordingProvider(SearchProvider& inner) : inner_(inner) {}

    std::vector<SearchResult> search(const Query& query, SearchScope scope) override;
    const std::vector<FixtureRecord>& records() const { return records_; }

private:
    SearchProvider& inner_;
    std::vector<FixtureRecord> records_;
    std::map<std::string, std::size_t> seen_;
};

// Runs the query, and while fewer than 10 results came back, more than 3
// terms remain and fewer than 5 retries were spent, drops the lowest-weight
// plain term and retries (entity phrases are never dropped). The final
// results are truncated to 10 and annotated with source type and relevance.
std::vector<SearchResult> search_with_backoff(SearchProvider& provider, Query query,
                                              SearchScope scope, const DomainLists& domains,
                                              const RelevanceFilter& filter);

}  // namespace qlfc
