#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qlfc/corpus.hpp"
#include "qlfc/credfeat.hpp"
#include "qlfc/embfeat.hpp"
#include "qlfc/evalkit.hpp"
#include "qlfc/evidencefeat.hpp"
#include "qlfc/lexfeat.hpp"
#include "qlfc/model.hpp"
#include "qlfc/retrieval.hpp"
#include "qlfc/userfeat.hpp"

namespace qlfc {

struct EmbeddingConfig {
    std::string name;
    std::string path;
};

// Declarative run description. Paths are resolved against the config file's
// directory; every referenced file must exist at load time, and the seed is
// mandatory.
struct RunConfig {
    std::string dataset;
    std::string forum_dump;  // optional, "" when absent
    std::string hq_dump;
    std::string trusted_authors;
    std::string web_corpus;
    std::string bias_lexicon_dir;
    std::string word_classes;
    std::string smileys_positive;
    std::string smileys_negative;
    std::string categories;
    std::string domains_reputed;
    std::string domains_forum;
    std::vector<EmbeddingConfig> embeddings;
    std::string web_fixtures;
    std::string forum_fixtures;
    std::string quality_scores;  // optional precomputed p_good file

    double lambda = 1e-3;
    int epochs = 50;
    std::uint64_t seed = 42;
    int k = 5;
    std::vector<std::string> relevance_keywords = {"qatar"};
    int utc_offset_minutes = 180;
    std::vector<int> weekend = {5, 6};
    bool chronological_ascending = true;
    std::vector<std::string> groups;  // enabled feature groups; empty = all

    std::string live_endpoint;  // optional live search adapter
    std::string api_key_env = "QLFC_SEARCH_KEY";
    int min_delay_ms = 0;

    std::string config_hash;  // fingerprint of the raw config text

    TrainOptions train_options() const { return {lambda, epochs, seed}; }
    ProfileOptions profile_options() const { return {utc_offset_minutes, weekend}; }
    std::vector<std::string> enabled_groups() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin,
                       const std::string& base_dir);

// Everything loaded once per run: corpora, lexicons, indices, profiles and
// the auxiliary answer-quality scores (precomputed file when configured,
// otherwise trained from the goodness labels).
struct Resources {
    Dataset dataset;
    Dataset forum_dump;
    Dataset hq_dump;
    BiasLexicons bias;
    WordClassLexicon lexicon;
    SmileyLists smileys;
    std::vector<std::string> categories;
    DomainLists domains;
    std::vector<EmbeddingSpace> spaces;
    HqIndex hq;
    TfIdfIndex corpus_index;  // one document per post, dataset plus dump
    std::map<std::string, UserProfile> profiles;
    QualityScores quality;
    RelevanceFilter relevance;

    std::string dataset_hash;
    std::string fixture_hash;

    const EmbeddingSpace* primary_space() const { return spaces.empty() ? nullptr : &spaces[0]; }
    VocabularyCheck vocabulary() const;
};

Resources build_resources(const RunConfig& config);

// Full per-answer feature vectors (all groups), keyed by answer id; only
// fact-labeled answers are featurized.
using FeatureTable = std::map<std::string, FeatureVector>;

FeatureTable featurize_all(const Resources& res, const RunConfig& config, int jobs = 1);

FeatureVector select_groups(const FeatureVector& full, const std::vector<std::string>& groups);
FeatureTable select_table_groups(const FeatureTable& table,
                                 const std::vector<std::string>& groups);

void save_features(const FeatureTable& table, const std::string& path);
FeatureTable load_features(const std::string& path);

// Run manifest: config/input fingerprints plus the seed. Written alongside
// every output; equality decides whether cached features are fresh.
std::string manifest_for(const RunConfig& config);

// The four ablation arms' HQ-group feature tables (S1, S2, S3, S4).
std::array<FeatureTable, kHqVariantCount> featurize_hq_variants(const Resources& res,
                                                                const RunConfig& config);

// Baselines, one row per enabled group, and (optionally) the two greedy
// ensembles. Group rows appear in the fixed preference order.
EvalReport run_evaluate(const Resources& res, const RunConfig& config,
                        const FeatureTable& features, bool with_ensembles, int jobs);

// Records every query evaluate would issue (including backoff retries)
// against live or local providers and writes fixture files. Scope toggles
// allow partial recording; returns the number of records written per scope.
struct RecordStats {
    std::size_t web_records = 0;
    std::size_t forum_records = 0;
};
RecordStats record_fixtures(const Resources& res, const RunConfig& config, bool record_web,
                            bool record_forum, const std::string& web_out,
                            const std::string& forum_out);

}  // namespace qlfc
