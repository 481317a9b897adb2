#include "qlfc/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "httplib.h"
#include "json.hpp"
#include "qlfc/common.hpp"

namespace qlfc {

const char* source_type_name(SourceType t) {
    switch (t) {
        case SourceType::Reputed: return "reputed";
        case SourceType::Forum: return "forum";
        case SourceType::Other: return "other";
    }
    return "other";
}

const char* search_scope_name(SearchScope s) {
    return s == SearchScope::Web ? "web" : "forum";
}

SearchScope search_scope_from_name(const std::string& name) {
    if (name == "web") return SearchScope::Web;
    if (name == "forum") return SearchScope::ForumOnly;
    throw ValidationError("unknown search scope '" + name + "'");
}

std::vector<std::string> Query::rendered_terms() const {
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (const QueryTerm& t : terms) {
        out.push_back(t.entity ? "\"" + t.text + "\"" : t.text);
    }
    return out;
}

std::string Query::rendered() const {
    std::string out;
    for (const std::string& t : rendered_terms()) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::vector<std::string> query_tokens(const Query& query) {
    std::vector<std::string> out;
    for (const QueryTerm& t : query.terms) {
        for (const std::string& w : split(t.text, ' ')) {
            if (!w.empty()) out.push_back(to_lower_ascii(w));
        }
    }
    return out;
}

namespace {

bool capitalized(const Token& t) {
    return t.kind == TokenKind::Word && !t.surface.empty() && t.surface[0] >= 'A' &&
           t.surface[0] <= 'Z';
}

}  // namespace

std::vector<std::string> extract_entities(const TokenizedText& text,
                                          const WordClassLexicon& lexicon) {
    std::vector<std::string> phrases;
    std::unordered_set<std::string> seen;
    for (const SentenceRange& s : text.sentences) {
        std::size_t i = s.begin;
        while (i < s.end) {
            bool cap = capitalized(text.tokens[i]);
            // Sentence case, not a name: known word capitalized only by its
            // position.
            if (cap && i == s.begin && lexicon.contains(text.tokens[i].lower)) cap = false;
            if (!cap) {
                ++i;
                continue;
            }
            std::string phrase;
            std::size_t j = i;
            while (j < s.end && capitalized(text.tokens[j])) {
                if (!phrase.empty()) phrase += ' ';
                phrase += text.tokens[j].surface;
                ++j;
            }
            if (seen.insert(to_lower_ascii(phrase)).second) phrases.push_back(phrase);
            i = j;
        }
    }
    return phrases;
}

Query generate_query(const TokenizedText& question, const TokenizedText& answer,
                     const TfIdfIndex& index, const WordClassLexicon& lexicon,
                     QueryOrigin origin) {
    const bool use_q = origin != QueryOrigin::Answer;
    const bool use_a = origin != QueryOrigin::Question;

    std::vector<std::string> entities;
    std::unordered_set<std::string> entity_keys;
    auto add_entities = [&](const TokenizedText& t) {
        for (const std::string& e : extract_entities(t, lexicon)) {
            if (entity_keys.insert(to_lower_ascii(e)).second) entities.push_back(e);
        }
    };
    if (use_q) add_entities(question);
    if (use_a) add_entities(answer);

    std::unordered_map<std::string, int> tf;
    auto count_stream = [&](const TokenizedText& t) {
        for (const std::string& tok : content_stream(t)) ++tf[tok];
    };
    if (use_q) count_stream(question);
    if (use_a) count_stream(answer);

    std::vector<std::pair<std::string, double>> pool;
    std::unordered_set<std::string> pooled;
    auto add_pool = [&](const TokenizedText& t) {
        for (const Token& tok : t.tokens) {
            if (tok.kind != TokenKind::Word) continue;
            if (tok.cls != WordClass::Noun && tok.cls != WordClass::Verb &&
                tok.cls != WordClass::Adjective) {
                continue;
            }
            if (entity_keys.count(tok.lower) > 0) continue;
            if (!pooled.insert(tok.lower).second) continue;
            pool.emplace_back(tok.lower, tf[tok.lower] * index.idf(tok.lower));
        }
    };
    if (use_q) add_pool(question);
    if (use_a) add_pool(answer);
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Query q;
    q.origin = origin;
    for (const std::string& e : entities) {
        if (q.terms.size() >= 10) break;
        q.terms.push_back({e, true, 0.0});
    }
    for (const auto& [term, weight] : pool) {
        if (q.terms.size() >= 10) break;
        q.terms.push_back({term, false, weight});
    }
    if (q.terms.empty()) throw InputError("empty query: no content words and no entities");
    return q;
}

DomainLists DomainLists::load(const std::string& reputed_path, const std::string& forum_path) {
    DomainLists lists;
    lists.reputed = read_line_list(reputed_path);
    lists.forum = read_line_list(forum_path);
    return lists;
}

std::string url_host(const std::string& url) {
    std::string rest = url;
    auto scheme = rest.find("://");
    if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
    std::size_t end = rest.find_first_of("/:?#");
    std::string host = to_lower_ascii(trim(rest.substr(0, end)));
    if (host.find_first_of(" \t\"") != std::string::npos) return "";
    return host;
}

namespace {

bool host_matches(const std::string& host, const std::string& suffix) {
    if (host == suffix) return true;
    return host.size() > suffix.size() + 1 &&
           host.compare(host.size() - suffix.size() - 1, suffix.size() + 1, "." + suffix) == 0;
}

}  // namespace

SourceType classify_source(const std::string& url, const DomainLists& domains) {
    std::string host = url_host(url);
    if (host.empty()) return SourceType::Other;
    for (const std::string& s : domains.reputed) {
        if (host_matches(host, to_lower_ascii(s))) return SourceType::Reputed;
    }
    for (const std::string& s : domains.forum) {
        if (host_matches(host, to_lower_ascii(s))) return SourceType::Forum;
    }
    return SourceType::Other;
}

bool is_relevant(const SearchResult& result, const RelevanceFilter& filter) {
    if (url_host(result.url).empty()) return false;
    if (filter.keywords.empty()) return true;
    for (const std::string& k : filter.keywords) {
        if (contains_ci(result.url, k) || contains_ci(result.snippet, k) ||
            contains_ci(result.page_text, k)) {
            return true;
        }
    }
    return false;
}

namespace {

std::string fixture_key(const std::vector<std::string>& rendered_terms, SearchScope scope) {
    std::string key = search_scope_name(scope);
    for (const std::string& t : rendered_terms) {
        key += '\n';
        key += t;
    }
    return key;
}

}  // namespace

std::vector<FixtureRecord> load_fixtures(const std::string& path) {
    std::vector<FixtureRecord> records;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        const std::string origin = path + ":" + std::to_string(lineno);
        try {
            nlohmann::json j = nlohmann::json::parse(t);
            FixtureRecord rec;
            rec.query_terms = j.at("query_terms").get<std::vector<std::string>>();
            rec.scope = search_scope_from_name(j.at("scope").get<std::string>());
            std::unordered_set<int> ranks;
            for (const auto& rj : j.at("results")) {
                SearchResult r;
                r.url = rj.at("url").get<std::string>();
                r.snippet = rj.value("snippet", std::string());
                r.page_text = rj.value("page_text", std::string());
                r.rank = rj.at("rank").get<int>();
                if (r.rank < 1 || !ranks.insert(r.rank).second) {
                    throw ValidationError(origin + ": duplicate or invalid rank " +
                                          std::to_string(r.rank));
                }
                rec.results.push_back(std::move(r));
            }
            std::sort(rec.results.begin(), rec.results.end(),
                      [](const SearchResult& a, const SearchResult& b) { return a.rank < b.rank; });
            records.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(origin + ": " + e.what());
        }
    }
    return records;
}

void save_fixtures(const std::vector<FixtureRecord>& records, const std::string& path) {
    std::vector<const FixtureRecord*> order;
    order.reserve(records.size());
    for (const FixtureRecord& r : records) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const FixtureRecord* a, const FixtureRecord* b) {
        return fixture_key(a->query_terms, a->scope) < fixture_key(b->query_terms, b->scope);
    });
    std::ostringstream out;
    for (const FixtureRecord* rec : order) {
        nlohmann::ordered_json j;
        j["query_terms"] = rec->query_terms;
        j["scope"] = search_scope_name(rec->scope);
        auto& results = j["results"] = nlohmann::ordered_json::array();
        for (const SearchResult& r : rec->results) {
            nlohmann::ordered_json rj;
            rj["url"] = r.url;
            rj["snippet"] = r.snippet;
            if (!r.page_text.empty()) rj["page_text"] = r.page_text;
            rj["rank"] = r.rank;
            results.push_back(std::move(rj));
        }
        out << j.dump() << "\n";
    }
    write_file(path, out.str());
}

FixtureProvider::FixtureProvider(const std::vector<FixtureRecord>& records, bool strict)
    : strict_(strict) {
    for (const FixtureRecord& rec : records) {
        std::string key = fixture_key(rec.query_terms, rec.scope);
        if (!results_.emplace(key, rec.results).second) {
            throw ValidationError("duplicate fixture record for query: " + rec.query_terms.front());
        }
    }
}

FixtureProvider::FixtureProvider(const std::string& path, bool strict)
    : FixtureProvider(load_fixtures(path), strict) {}

std::vector<SearchResult> FixtureProvider::search(const Query& query, SearchScope scope) {
    auto it = results_.find(fixture_key(query.rendered_terms(), scope));
    if (it == results_.end()) {
        if (strict_) {
            throw InputError("no fixture recorded for query: " + query.rendered() + " [" +
                             search_scope_name(scope) + "]");
        }
        return {};
    }
    return it->second;
}

LocalForumSearchProvider::LocalForumSearchProvider(const Dataset& dump,
                                                   const WordClassLexicon& lexicon,
                                                   std::string url_prefix) {
    std::vector<std::vector<std::string>> token_docs;
    for (const Thread& th : dump) {
        Doc doc;
        doc.url = url_prefix + th.question.id;
        std::string snippet = th.question.subject + " " + th.question.body;
        if (snippet.size() > 160) {
            std::size_t cut = snippet.rfind(' ', 160);
            snippet.resize(cut == std::string::npos ? 160 : cut);
        }
        doc.snippet = snippet;
        doc.page_text = th.question.subject + "\n" + th.question.body;
        for (const Answer& a : th.answers) {
            doc.page_text += "\n";
            doc.page_text += a.body;
        }
        doc.tokens = content_stream(tokenize(doc.page_text, lexicon));
        token_docs.push_back(doc.tokens);
        docs_.push_back(std::move(doc));
    }
    if (docs_.empty()) throw InputError("forum search provider: empty thread dump");
    index_ = TfIdfIndex::build(token_docs);
}

std::vector<SearchResult> LocalForumSearchProvider::search(const Query& query,
                                                           SearchScope scope) {
    if (scope != SearchScope::ForumOnly) {
        throw InputError("forum provider serves only the forum scope (query: " +
                         query.rendered() + ")");
    }
    auto qv = index_.vectorize(query_tokens(query));
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        double score = sparse_cosine(qv, index_.vectorize(docs_[i].tokens));
        if (score > 0) scored.emplace_back(score, i);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return docs_[a.second].url < docs_[b.second].url;
    });
    if (scored.size() > 10) scored.resize(10);
    std::vector<SearchResult> results;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        SearchResult r;
        const Doc& doc = docs_[scored[i].second];
        r.url = doc.url;
        r.snippet = doc.snippet;
        r.page_text = doc.page_text;
        r.rank = static_cast<int>(i) + 1;
        results.push_back(std::move(r));
    }
    return results;
}

LocalWebSearchProvider::LocalWebSearchProvider(const std::string& corpus_path,
                                               const WordClassLexicon& lexicon) {
    std::istringstream in(read_file(corpus_path));
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::vector<std::string>> token_docs;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(t);
            Doc doc;
            doc.url = j.at("url").get<std::string>();
            std::string title = j.value("title", std::string());
            doc.page_text = j.at("text").get<std::string>();
            std::string snippet = title.empty() ? doc.page_text : title + " " + doc.page_text;
            if (snippet.size() > 160) {
                std::size_t cut = snippet.rfind(' ', 160);
                snippet.resize(cut == std::string::npos ? 160 : cut);
            }
            doc.snippet = snippet;
            doc.tokens = content_stream(tokenize(title + "\n" + doc.page_text, lexicon));
            token_docs.push_back(doc.tokens);
            docs_.push_back(std::move(doc));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(corpus_path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (docs_.empty()) throw InputError("web corpus is empty: " + corpus_path);
    index_ = TfIdfIndex::build(token_docs);
}

std::vector<SearchResult> LocalWebSearchProvider::search(const Query& query, SearchScope scope) {
    if (scope != SearchScope::Web) {
        throw InputError("web corpus provider serves only the web scope (query: " +
                         query.rendered() + ")");
    }
    auto qv = index_.vectorize(query_tokens(query));
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        double score = sparse_cosine(qv, index_.vectorize(docs_[i].tokens));
        if (score > 0) scored.emplace_back(score, i);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return docs_[a.second].url < docs_[b.second].url;
    });
    if (scored.size() > 10) scored.resize(10);
    std::vector<SearchResult> results;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        SearchResult r;
        const Doc& doc = docs_[scored[i].second];
        r.url = doc.url;
        r.snippet = doc.snippet;
        r.page_text = doc.page_text;
        r.rank = static_cast<int>(i) + 1;
        results.push_back(std::move(r));
    }
    return results;
}

namespace {

std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
            c == '-' || c == '.' || c == '_' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        }
    }
    return out;
}

std::mutex g_live_mutex;

}  // namespace

LiveSearchProvider::LiveSearchProvider(std::string endpoint, std::string api_key_env,
                                       int min_delay_ms)
    : endpoint_(std::move(endpoint)), api_key_env_(std::move(api_key_env)),
      min_delay_ms_(min_delay_ms) {}

std::vector<SearchResult> LiveSearchProvider::search(const Query& query, SearchScope scope) {
    auto scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos) {
        throw InputError("live search endpoint is not a URL: " + endpoint_);
    }
    auto path_start = endpoint_.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

    std::lock_guard<std::mutex> lock(g_live_mutex);
    auto now_ms = [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    };
    if (last_request_ms_ >= 0) {
        long long elapsed = now_ms() - last_request_ms_;
        if (elapsed < min_delay_ms_) {
            std::this_thread::sleep_for(std::chrono::milliseconds(min_delay_ms_ - elapsed));
        }
    }
    last_request_ms_ = now_ms();

    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    httplib::Headers headers;
    if (!api_key_env_.empty()) {
        const char* key = std::getenv(api_key_env_.c_str());
        if (key != nullptr && key[0] != '\0') headers.emplace("X-Api-Key", key);
    }
    std::string target = path + "?q=" + url_encode(query.rendered()) +
                         "&scope=" + search_scope_name(scope) + "&n=10";
    auto res = client.Get(target, headers);
    if (!res) {
        throw InputError("search failed for query \"" + query.rendered() +
                         "\": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw InputError("search failed for query \"" + query.rendered() +
                         "\": HTTP " + std::to_string(res->status));
    }
    try {
        nlohmann::json j = nlohmann::json::parse(res->body);
        std::vector<SearchResult> results;
        for (const auto& rj : j.at("results")) {
            SearchResult r;
            r.url = rj.at("url").get<std::string>();
            r.snippet = rj.value("snippet", std::string());
            r.page_text = rj.value("page_text", std::string());
            r.rank = static_cast<int>(results.size()) + 1;
            results.push_back(std::move(r));
            if (results.size() == 10) break;
        }
        return results;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("search failed for query \"" + query.rendered() +
                         "\": bad response: " + e.what());
    }
}

std::vector<SearchResult> RecordingProvider::search(const Query& query, SearchScope scope) {
    std::vector<SearchResult> results = inner_.search(query, scope);
    FixtureRecord rec;
    rec.query_terms = query.rendered_terms();
    rec.scope = scope;
    rec.results = results;
    // Fixtures hold only what replay needs; annotations are recomputed.
    for (SearchResult& r : rec.results) {
        r.source_type = SourceType::Other;
        r.relevant = false;
    }
    std::string key = fixture_key(rec.query_terms, rec.scope);
    if (seen_.find(key) == seen_.end()) {
        seen_[key] = records_.size();
        records_.push_back(std::move(rec));
    }
    return results;
}

std::vector<SearchResult> search_with_backoff(SearchProvider& provider, Query query,
                                              SearchScope scope, const DomainLists& domains,
                                              const RelevanceFilter& filter) {
    std::vector<SearchResult> results = provider.search(query, scope);
    int retries = 0;
    while (results.size() < 10 && query.terms.size() > 3 && retries < 5) {
        std::size_t drop = query.terms.size();
        double lowest = 0;
        for (std::size_t i = 0; i < query.terms.size(); ++i) {
            if (query.terms[i].entity) continue;
            if (drop == query.terms.size() || query.terms[i].weight <= lowest) {
                drop = i;
                lowest = query.terms[i].weight;
            }
        }
        if (drop == query.terms.size()) break;  // only entity phrases remain
        query.terms.erase(query.terms.begin() + static_cast<std::ptrdiff_t>(drop));
        ++retries;
        results = provider.search(query, scope);
    }
    if (results.size() > 10) results.resize(10);
    for (SearchResult& r : results) {
        r.source_type = classify_source(r.url, domains);
        r.relevant = is_relevant(r, filter);
    }
    return results;
}

}  // namespace qlfc
