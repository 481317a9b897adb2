#include "qlfc/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "qlfc/common.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace qlfc {

namespace {

std::string resolve_path(const std::string& base_dir, const std::string& rel) {
    if (rel.empty()) return rel;
    fs::path p(rel);
    if (p.is_absolute() || base_dir.empty()) return p.lexically_normal().string();
    return (fs::path(base_dir) / p).lexically_normal().string();
}

std::string get_path(const json& j, const char* key, const std::string& origin,
                     const std::string& base_dir, bool required) {
    if (!j.contains(key)) {
        if (required) throw InputError(origin + ": missing required config key \"" + key + "\"");
        return "";
    }
    const json& v = j.at(key);
    if (!v.is_string()) throw InputError(origin + ": config key \"" + key + "\" must be a string");
    std::string s = v.get<std::string>();
    if (s.empty()) {
        if (required) throw InputError(origin + ": config key \"" + key + "\" must not be empty");
        return "";
    }
    std::string resolved = resolve_path(base_dir, s);
    if (!fs::exists(resolved))
        throw InputError(origin + ": " + key + " refers to a missing path: " + resolved);
    return resolved;
}

std::vector<std::string> get_string_list(const json& j, const char* key,
                                         const std::string& origin,
                                         std::vector<std::string> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array()) throw InputError(origin + ": config key \"" + key + "\" must be an array");
    std::vector<std::string> out;
    for (const json& item : v) {
        if (!item.is_string())
            throw InputError(origin + ": config key \"" + key + "\" must contain strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

// Group names accept the canonical identifiers plus a few module-style
// aliases; hyphens normalize to underscores.
std::string resolve_group_alias(const std::string& raw, const std::string& origin) {
    std::string name = to_lower_ascii(raw);
    std::replace(name.begin(), name.end(), '-', '_');
    if (name == "lexfeat") name = groups::kLinguistic;
    if (name == "credfeat") name = groups::kCredibility;
    if (!is_known_group(name)) {
        std::string known;
        for (const std::string& g : all_groups()) {
            if (!known.empty()) known += ", ";
            known += g;
        }
        throw InputError(origin + ": unknown feature group \"" + raw + "\" (known: " + known + ")");
    }
    return name;
}

std::string hash_or_empty(const std::string& path) {
    if (path.empty()) return "";
    return hash_hex(hash_file(path));
}

// Fingerprint of a lexicon directory: each regular file hashed, combined in
// sorted name order.
std::string hash_dir(const std::string& dir) {
    if (dir.empty()) return "";
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    std::uint64_t h = fnv1a64("");
    for (const std::string& f : files) {
        h = fnv1a64_combine(h, fs::path(f).filename().string());
        h = fnv1a64_combine(h, hash_hex(hash_file(f)));
    }
    return hash_hex(h);
}

// Canonical serialization of the parameters that change feature bytes; flag
// overrides land here, so the manifest tracks what actually ran, not just
// the file on disk. Report-level knobs (group selection, ranking direction)
// are deliberately left out: cached features stay fresh across them.
ordered_json effective_config_json(const RunConfig& c) {
    ordered_json j;
    ordered_json names = ordered_json::array();
    for (const EmbeddingConfig& e : c.embeddings) names.push_back(e.name);
    j["embedding_names"] = names;
    j["lambda"] = c.lambda;
    j["epochs"] = c.epochs;
    j["seed"] = c.seed;
    j["k"] = c.k;
    j["relevance_keywords"] = c.relevance_keywords;
    j["utc_offset_minutes"] = c.utc_offset_minutes;
    j["weekend"] = c.weekend;
    return j;
}

}  // namespace

std::vector<std::string> RunConfig::enabled_groups() const {
    if (groups.empty()) return all_groups();
    std::set<std::string> wanted;
    for (const std::string& g : groups) wanted.insert(resolve_group_alias(g, "config"));
    // Filter the canonical order so downstream candidate order is stable
    // regardless of how the config spells the list.
    std::vector<std::string> out;
    for (const std::string& g : all_groups()) {
        if (wanted.count(g)) out.push_back(g);
    }
    return out;
}

RunConfig parse_config(const std::string& text, const std::string& origin,
                       const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw InputError(origin + ": config must be a JSON object");

    static const std::unordered_set<std::string> known_keys = {
        "dataset", "forum_dump", "hq_dump", "trusted_authors", "web_corpus",
        "bias_lexicon_dir", "word_classes", "smileys_positive", "smileys_negative",
        "categories", "domains_reputed", "domains_forum", "embeddings",
        "web_fixtures", "forum_fixtures", "quality_scores", "lambda", "epochs",
        "seed", "k", "relevance_keywords", "utc_offset_minutes", "weekend",
        "chronological_ascending", "groups", "live_endpoint", "api_key_env",
        "min_delay_ms"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known_keys.count(it.key()))
            throw InputError(origin + ": unknown config key \"" + it.key() + "\"");
    }

    RunConfig c;
    c.dataset = get_path(j, "dataset", origin, base_dir, true);
    c.forum_dump = get_path(j, "forum_dump", origin, base_dir, false);
    c.hq_dump = get_path(j, "hq_dump", origin, base_dir, true);
    c.trusted_authors = get_path(j, "trusted_authors", origin, base_dir, true);
    c.web_corpus = get_path(j, "web_corpus", origin, base_dir, false);
    c.bias_lexicon_dir = get_path(j, "bias_lexicon_dir", origin, base_dir, true);
    c.word_classes = get_path(j, "word_classes", origin, base_dir, true);
    c.smileys_positive = get_path(j, "smileys_positive", origin, base_dir, true);
    c.smileys_negative = get_path(j, "smileys_negative", origin, base_dir, true);
    c.categories = get_path(j, "categories", origin, base_dir, true);
    c.domains_reputed = get_path(j, "domains_reputed", origin, base_dir, true);
    c.domains_forum = get_path(j, "domains_forum", origin, base_dir, true);
    if (!fs::is_directory(c.bias_lexicon_dir))
        throw InputError(origin + ": bias_lexicon_dir is not a directory: " + c.bias_lexicon_dir);

    if (j.contains("embeddings")) {
        const json& embs = j.at("embeddings");
        if (!embs.is_array())
            throw InputError(origin + ": config key \"embeddings\" must be an array");
        for (const json& e : embs) {
            if (!e.is_object() || !e.contains("name") || !e.contains("path") ||
                !e.at("name").is_string() || !e.at("path").is_string()) {
                throw InputError(origin +
                                 ": embeddings entries must be {\"name\": ..., \"path\": ...}");
            }
            EmbeddingConfig ec;
            ec.name = e.at("name").get<std::string>();
            ec.path = resolve_path(base_dir, e.at("path").get<std::string>());
            if (!fs::exists(ec.path))
                throw InputError(origin + ": embeddings path missing: " + ec.path);
            c.embeddings.push_back(std::move(ec));
        }
        if (c.embeddings.size() > 2)
            throw InputError(origin + ": at most two embedding spaces are supported");
    }

    c.web_fixtures = get_path(j, "web_fixtures", origin, base_dir, false);
    c.forum_fixtures = get_path(j, "forum_fixtures", origin, base_dir, false);
    c.quality_scores = get_path(j, "quality_scores", origin, base_dir, false);

    if (!j.contains("seed") || !j.at("seed").is_number_unsigned())
        throw InputError(origin + ": config key \"seed\" is mandatory (unsigned integer)");
    c.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("utc_offset_minutes")) c.utc_offset_minutes = j.at("utc_offset_minutes").get<int>();
    if (j.contains("min_delay_ms")) c.min_delay_ms = j.at("min_delay_ms").get<int>();
    if (c.lambda <= 0) throw InputError(origin + ": lambda must be positive");
    if (c.epochs <= 0) throw InputError(origin + ": epochs must be positive");
    if (c.k <= 0) throw InputError(origin + ": k must be positive");
    if (c.min_delay_ms < 0) throw InputError(origin + ": min_delay_ms must be non-negative");

    c.relevance_keywords = get_string_list(j, "relevance_keywords", origin, c.relevance_keywords);
    if (j.contains("weekend")) {
        const json& w = j.at("weekend");
        if (!w.is_array()) throw InputError(origin + ": config key \"weekend\" must be an array");
        c.weekend.clear();
        for (const json& d : w) {
            int day = d.get<int>();
            if (day < 0 || day > 6)
                throw InputError(origin + ": weekend weekdays must be in [0, 6] (0 = Sunday)");
            c.weekend.push_back(day);
        }
    }
    if (j.contains("chronological_ascending"))
        c.chronological_ascending = j.at("chronological_ascending").get<bool>();
    c.groups = get_string_list(j, "groups", origin, {});
    for (const std::string& g : c.groups) resolve_group_alias(g, origin);

    if (j.contains("live_endpoint")) c.live_endpoint = j.at("live_endpoint").get<std::string>();
    if (j.contains("api_key_env")) c.api_key_env = j.at("api_key_env").get<std::string>();

    c.config_hash = hash_hex(fnv1a64(text));
    return c;
}

RunConfig load_config(const std::string& path) {
    std::string text = read_file(path);
    std::string base = fs::path(path).parent_path().string();
    return parse_config(text, path, base);
}

VocabularyCheck Resources::vocabulary() const {
    if (const EmbeddingSpace* space = primary_space()) {
        return [space](const std::string& t) { return space->contains(t); };
    }
    const WordClassLexicon* lex = &lexicon;
    return [lex](const std::string& t) { return lex->contains(t); };
}

namespace {

std::string question_text(const Question& q) {
    if (q.subject.empty()) return q.body;
    if (q.body.empty()) return q.subject;
    return q.subject + "\n" + q.body;
}

// Features feeding the auxiliary goodness classifier: surface and style
// only, nothing that depends on search or on other answers.
FeatureVector goodness_features(const Answer& answer, const Resources& res) {
    TokenizedText atok = tokenize(answer.body, res.lexicon, res.smileys);
    FeatureVector f = extract_linguistic(res.bias, atok);
    f.append(extract_credibility(atok, res.smileys, res.vocabulary()));
    f.append(extract_embeddings(res.spaces, atok));
    return f;
}

QualityScores train_quality(const Resources& res, const RunConfig& config) {
    std::vector<std::string> ids;
    std::vector<FeatureVector> feats;
    std::vector<Goodness> labels;
    for (const Thread& t : res.dataset) {
        for (const Answer& a : t.answers) {
            ids.push_back(a.id);
            feats.push_back(goodness_features(a, res));
            labels.push_back(a.goodness);
        }
    }
    LinearModel model = train_goodness_model(feats, labels, config.train_options());
    return score_goodness(model, ids, feats);
}

}  // namespace

Resources build_resources(const RunConfig& config) {
    Resources res;
    res.dataset = load_dataset(config.dataset);
    if (!config.forum_dump.empty()) res.forum_dump = load_dataset(config.forum_dump);
    res.hq_dump = load_dataset(config.hq_dump);
    res.bias = BiasLexicons::load(config.bias_lexicon_dir);
    res.lexicon = WordClassLexicon::load(config.word_classes);
    res.smileys = SmileyLists::load(config.smileys_positive, config.smileys_negative);
    res.categories = load_categories(config.categories);
    res.domains = DomainLists::load(config.domains_reputed, config.domains_forum);
    for (const EmbeddingConfig& e : config.embeddings) {
        res.spaces.push_back(EmbeddingSpace::load(e.name, e.path));
    }
    res.hq = HqIndex::build(res.hq_dump, read_line_list(config.trusted_authors), res.lexicon);

    // One document per post over everything we can see; idf statistics for
    // query generation and similarity features.
    std::vector<std::vector<std::string>> docs;
    auto add_thread_docs = [&](const Thread& t) {
        docs.push_back(content_stream(tokenize(question_text(t.question), res.lexicon, res.smileys)));
        for (const Answer& a : t.answers) {
            docs.push_back(content_stream(tokenize(a.body, res.lexicon, res.smileys)));
        }
    };
    for (const Thread& t : res.dataset) add_thread_docs(t);
    for (const Thread& t : res.forum_dump) add_thread_docs(t);
    res.corpus_index = TfIdfIndex::build(docs);

    res.profiles = build_profiles(res.dataset, config.forum_dump.empty() ? nullptr : &res.forum_dump,
                                  config.profile_options());
    if (!config.quality_scores.empty()) {
        res.quality = load_quality_scores(config.quality_scores);
    } else {
        res.quality = train_quality(res, config);
    }
    res.relevance = RelevanceFilter{config.relevance_keywords};

    res.dataset_hash = hash_or_empty(config.dataset);
    std::uint64_t fh = fnv1a64("");
    fh = fnv1a64_combine(fh, hash_or_empty(config.web_fixtures));
    fh = fnv1a64_combine(fh, hash_or_empty(config.forum_fixtures));
    res.fixture_hash = (config.web_fixtures.empty() && config.forum_fixtures.empty())
                           ? ""
                           : hash_hex(fh);
    return res;
}

namespace {

const UserProfile& profile_for(const Resources& res, const std::string& user_id) {
    auto it = res.profiles.find(user_id);
    if (it == res.profiles.end())
        throw ValidationError("no profile for user '" + user_id + "'");
    return it->second;
}

struct Providers {
    std::unique_ptr<SearchProvider> web;
    std::unique_ptr<SearchProvider> forum;
};

// Evaluation never talks to the network: web support comes from recorded
// fixtures (zeros when none are configured) and forum support from fixtures
// or the local dump index.
Providers evaluation_providers(const Resources& res, const RunConfig& config) {
    Providers p;
    if (!config.web_fixtures.empty())
        p.web = std::make_unique<FixtureProvider>(config.web_fixtures, /*strict=*/false);
    if (!config.forum_fixtures.empty()) {
        p.forum = std::make_unique<FixtureProvider>(config.forum_fixtures, /*strict=*/false);
    } else if (!res.forum_dump.empty()) {
        p.forum = std::make_unique<LocalForumSearchProvider>(res.forum_dump, res.lexicon);
    }
    return p;
}

FeatureVector featurize_answer(const Resources& res, const RunConfig& config, const Thread& thread,
                               const Answer& answer, const TokenizedText& qtok,
                               const Providers& providers) {
    TokenizedText atok = tokenize(answer.body, res.lexicon, res.smileys);

    FeatureVector f = extract_linguistic(res.bias, atok);
    f.append(extract_credibility(atok, res.smileys, res.vocabulary()));
    f.append(extract_embeddings(res.spaces, atok));

    const UserProfile& profile = profile_for(res, answer.user_id);
    f.append(extract_categories(profile, res.categories));
    f.append(extract_quality(profile, res.quality));
    f.append(extract_activity(profile));

    Query query = generate_query(qtok, atok, res.corpus_index, res.lexicon, QueryOrigin::QaPair);
    std::vector<SearchResult> web_results;
    if (providers.web)
        web_results = search_with_backoff(*providers.web, query, SearchScope::Web, res.domains,
                                          res.relevance);
    f.append(extract_web_support(qtok, atok, web_results, res.corpus_index, res.primary_space(),
                                 res.lexicon));

    std::vector<SearchResult> forum_results;
    if (providers.forum)
        forum_results = search_with_backoff(*providers.forum, query, SearchScope::ForumOnly,
                                            res.domains, res.relevance);
    f.append(extract_forum_support(qtok, atok, forum_results, res.corpus_index, res.primary_space(),
                                   res.lexicon));

    f.append(extract_thread_support(answer, thread, res.spaces, res.lexicon));
    f.append(extract_hq_support(query_tokens(query), atok, res.hq,
                                static_cast<std::size_t>(config.k), /*rerank=*/true));
    return f;
}

}  // namespace

FeatureTable featurize_all(const Resources& res, const RunConfig& config, int jobs) {
    if (jobs < 1) throw InputError("jobs must be at least 1");
    Providers providers = evaluation_providers(res, config);

    using ThreadRows = std::vector<std::pair<std::string, FeatureVector>>;
    std::vector<ThreadRows> per_thread(res.dataset.size());

    auto run_thread = [&](std::size_t ti) {
        const Thread& t = res.dataset[ti];
        TokenizedText qtok = tokenize(question_text(t.question), res.lexicon, res.smileys);
        for (const Answer& a : t.answers) {
            if (!a.labeled()) continue;
            per_thread[ti].emplace_back(a.id,
                                        featurize_answer(res, config, t, a, qtok, providers));
        }
    };

    int n_workers = std::min<int>(jobs, static_cast<int>(res.dataset.size()));
    if (n_workers <= 1) {
        for (std::size_t ti = 0; ti < res.dataset.size(); ++ti) run_thread(ti);
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < n_workers; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t ti = static_cast<std::size_t>(w); ti < res.dataset.size();
                     ti += static_cast<std::size_t>(n_workers)) {
                    run_thread(ti);
                }
            });
        }
        for (std::thread& worker : workers) worker.join();
    }

    // Single-writer merge in thread order.
    FeatureTable table;
    for (const ThreadRows& rows : per_thread) {
        for (const auto& [id, vec] : rows) table.emplace(id, vec);
    }
    return table;
}

FeatureVector select_groups(const FeatureVector& full, const std::vector<std::string>& groups) {
    std::set<std::string> keep(groups.begin(), groups.end());
    FeatureVector out;
    for (const FeatureVector::Dim& d : full.dims) {
        if (keep.count(d.group)) out.dims.push_back(d);
    }
    return out;
}

FeatureTable select_table_groups(const FeatureTable& table,
                                 const std::vector<std::string>& groups) {
    FeatureTable out;
    for (const auto& [id, vec] : table) out.emplace(id, select_groups(vec, groups));
    return out;
}

void save_features(const FeatureTable& table, const std::string& path) {
    std::string out;
    for (const auto& [id, vec] : table) {
        ordered_json row;
        row["answer_id"] = id;
        ordered_json dims = ordered_json::array();
        for (const FeatureVector::Dim& d : vec.dims) {
            dims.push_back(ordered_json{{"name", d.name}, {"group", d.group}, {"value", d.value}});
        }
        row["dims"] = dims;
        out += row.dump();
        out += "\n";
    }
    write_file(path, out);
}

FeatureTable load_features(const std::string& path) {
    std::string text = read_file(path);
    FeatureTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError(path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        if (!row.is_object() || !row.contains("answer_id") || !row.contains("dims"))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": feature rows need answer_id and dims");
        std::string id = row.at("answer_id").get<std::string>();
        if (table.count(id))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": duplicate answer id '" + id + "'");
        FeatureVector vec;
        for (const json& d : row.at("dims")) {
            std::string group = d.at("group").get<std::string>();
            if (!is_known_group(group))
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": unknown feature group '" + group + "'");
            vec.add(d.at("name").get<std::string>(), group, d.at("value").get<double>());
        }
        table.emplace(std::move(id), std::move(vec));
    }
    return table;
}

std::string manifest_for(const RunConfig& config) {
    ordered_json m;
    m["version"] = "qlfc-manifest/1";
    m["seed"] = config.seed;
    m["config"] = hash_hex(fnv1a64(effective_config_json(config).dump()));
    ordered_json inputs;
    inputs["dataset"] = hash_or_empty(config.dataset);
    inputs["forum_dump"] = hash_or_empty(config.forum_dump);
    inputs["hq_dump"] = hash_or_empty(config.hq_dump);
    inputs["trusted_authors"] = hash_or_empty(config.trusted_authors);
    inputs["web_corpus"] = hash_or_empty(config.web_corpus);
    inputs["bias_lexicon_dir"] = hash_dir(config.bias_lexicon_dir);
    inputs["word_classes"] = hash_or_empty(config.word_classes);
    inputs["smileys_positive"] = hash_or_empty(config.smileys_positive);
    inputs["smileys_negative"] = hash_or_empty(config.smileys_negative);
    inputs["categories"] = hash_or_empty(config.categories);
    inputs["domains_reputed"] = hash_or_empty(config.domains_reputed);
    inputs["domains_forum"] = hash_or_empty(config.domains_forum);
    ordered_json embs = ordered_json::array();
    for (const EmbeddingConfig& e : config.embeddings) embs.push_back(hash_or_empty(e.path));
    inputs["embeddings"] = embs;
    inputs["web_fixtures"] = hash_or_empty(config.web_fixtures);
    inputs["forum_fixtures"] = hash_or_empty(config.forum_fixtures);
    inputs["quality_scores"] = hash_or_empty(config.quality_scores);
    m["inputs"] = inputs;
    return m.dump(2) + "\n";
}

std::array<FeatureTable, kHqVariantCount> featurize_hq_variants(const Resources& res,
                                                                const RunConfig& config) {
    std::array<FeatureTable, kHqVariantCount> out;
    const std::size_t k = static_cast<std::size_t>(config.k);
    for (const Thread& t : res.dataset) {
        TokenizedText qtok = tokenize(question_text(t.question), res.lexicon, res.smileys);
        for (const Answer& a : t.answers) {
            if (!a.labeled()) continue;
            TokenizedText atok = tokenize(a.body, res.lexicon, res.smileys);
            Query gen = generate_query(qtok, atok, res.corpus_index, res.lexicon,
                                       QueryOrigin::QaPair);
            std::vector<std::string> gen_tokens = query_tokens(gen);
            std::vector<std::string> ans_tokens = content_stream(atok);
            out[0].emplace(a.id, extract_hq_support(gen_tokens, atok, res.hq, k, true));
            out[1].emplace(a.id, extract_hq_support(gen_tokens, atok, res.hq, k, false));
            out[2].emplace(a.id, extract_hq_support(ans_tokens, atok, res.hq, k, true));
            out[3].emplace(a.id, extract_hq_support(ans_tokens, atok, res.hq, k, false));
        }
    }
    return out;
}

namespace {

bool table_has_group(const FeatureTable& table, const std::string& group) {
    if (table.empty()) return false;
    for (const FeatureVector::Dim& d : table.begin()->second.dims) {
        if (d.group == group) return true;
    }
    return false;
}

std::string join_display_names(const std::vector<std::string>& groups) {
    std::string out;
    for (const std::string& g : groups) {
        if (!out.empty()) out += " + ";
        out += group_display_name(g);
    }
    return out;
}

}  // namespace

EvalReport run_evaluate(const Resources& res, const RunConfig& config,
                        const FeatureTable& features, bool with_ensembles, int jobs) {
    EvalReport report;
    report.seed = config.seed;
    report.config_hash = config.config_hash;
    report.dataset_hash = res.dataset_hash;
    report.fixture_hash = res.fixture_hash;

    TrainOptions opt = config.train_options();
    FeatureTable cred = select_table_groups(features, {groups::kCredibility});
    report.rows = run_baselines(res.dataset, cred, opt, config.chronological_ascending);

    // Groups the current run cannot extract (no embedding spaces configured,
    // say) are absent from the table and skip their row.
    std::vector<std::string> active;
    for (const std::string& g : config.enabled_groups()) {
        if (table_has_group(features, g)) active.push_back(g);
    }

    std::map<std::string, LotoResult> memo;
    auto run_set = [&](const std::vector<std::string>& set) -> const LotoResult& {
        std::vector<std::string> key_groups = set;
        std::sort(key_groups.begin(), key_groups.end());
        std::string key;
        for (const std::string& g : key_groups) key += g + "+";
        auto it = memo.find(key);
        if (it == memo.end()) {
            LotoResult r = evaluate_loto(res.dataset, select_table_groups(features, set), opt, jobs);
            it = memo.emplace(key, std::move(r)).first;
        }
        return it->second;
    };

    for (const std::string& g : active) {
        const LotoResult& r = run_set({g});
        report.rows.push_back({group_display_name(g), r.metrics.accuracy, r.metrics.precision,
                               r.metrics.recall, r.metrics.f1, r.map});
    }

    if (active.size() > 1) {
        const LotoResult& r = run_set(active);
        report.rows.push_back({"Combined: " + join_display_names(active),
                               r.metrics.accuracy, r.metrics.precision,
                               r.metrics.recall, r.metrics.f1, r.map});
    }

    if (with_ensembles) {
        const double acc_floor = all_positive_metrics(res.dataset).accuracy;
        const double map_floor = chronological_map(res.dataset, config.chronological_ascending);

        auto acc_of = [&](const std::vector<std::string>& set) {
            return set.empty() ? acc_floor : run_set(set).metrics.accuracy;
        };
        auto map_of = [&](const std::vector<std::string>& set) {
            return set.empty() ? map_floor : run_set(set).map;
        };

        EnsembleConfig by_acc = ensemble_select(active, EnsembleObjective::Accuracy, acc_of);
        EnsembleConfig by_map = ensemble_select(active, EnsembleObjective::Map, map_of);

        auto push_ensemble = [&](const EnsembleConfig& sel, const char* label) {
            ReportRow row;
            if (sel.selected.empty()) {
                row.name = std::string("Ensemble by ") + label + ": (none)";
                if (std::string(label) == "accuracy") {
                    Metrics m = all_positive_metrics(res.dataset);
                    row.accuracy = m.accuracy;
                    row.precision = m.precision;
                    row.recall = m.recall;
                    row.f1 = m.f1;
                } else {
                    row.map = map_floor;
                }
            } else {
                const LotoResult& r = run_set(sel.selected);
                row.name = std::string("Ensemble by ") + label + ": " +
                           join_display_names(sel.selected);
                row.accuracy = r.metrics.accuracy;
                row.precision = r.metrics.precision;
                row.recall = r.metrics.recall;
                row.f1 = r.metrics.f1;
                row.map = r.map;
            }
            report.rows.push_back(std::move(row));
        };
        push_ensemble(by_acc, "accuracy");
        push_ensemble(by_map, "MAP");
    }
    return report;
}

RecordStats record_fixtures(const Resources& res, const RunConfig& config, bool record_web,
                            bool record_forum, const std::string& web_out,
                            const std::string& forum_out) {
    std::unique_ptr<SearchProvider> web_inner;
    std::unique_ptr<SearchProvider> forum_inner;
    if (!config.live_endpoint.empty()) {
        web_inner = std::make_unique<LiveSearchProvider>(config.live_endpoint, config.api_key_env,
                                                         config.min_delay_ms);
        forum_inner = std::make_unique<LiveSearchProvider>(config.live_endpoint, config.api_key_env,
                                                           config.min_delay_ms);
    } else {
        if (record_web) {
            if (config.web_corpus.empty())
                throw InputError(
                    "record-fixtures: configure web_corpus or live_endpoint to record web results");
            web_inner = std::make_unique<LocalWebSearchProvider>(config.web_corpus, res.lexicon);
        }
        if (record_forum) {
            if (res.forum_dump.empty())
                throw InputError(
                    "record-fixtures: configure forum_dump or live_endpoint to record forum "
                    "results");
            forum_inner = std::make_unique<LocalForumSearchProvider>(res.forum_dump, res.lexicon);
        }
    }

    std::unique_ptr<RecordingProvider> web_rec;
    std::unique_ptr<RecordingProvider> forum_rec;
    if (record_web) web_rec = std::make_unique<RecordingProvider>(*web_inner);
    if (record_forum) forum_rec = std::make_unique<RecordingProvider>(*forum_inner);

    for (const Thread& t : res.dataset) {
        TokenizedText qtok = tokenize(question_text(t.question), res.lexicon, res.smileys);
        for (const Answer& a : t.answers) {
            if (!a.labeled()) continue;
            TokenizedText atok = tokenize(a.body, res.lexicon, res.smileys);
            Query query = generate_query(qtok, atok, res.corpus_index, res.lexicon,
                                         QueryOrigin::QaPair);
            if (record_web)
                search_with_backoff(*web_rec, query, SearchScope::Web, res.domains, res.relevance);
            if (record_forum)
                search_with_backoff(*forum_rec, query, SearchScope::ForumOnly, res.domains,
                                    res.relevance);
        }
    }

    RecordStats stats;
    if (record_web) {
        save_fixtures(web_rec->records(), web_out);
        stats.web_records = web_rec->records().size();
    }
    if (record_forum) {
        save_fixtures(forum_rec->records(), forum_out);
        stats.forum_records = forum_rec->records().size();
    }
    return stats;
}

}  // namespace qlfc
