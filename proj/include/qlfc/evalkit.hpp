#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlfc/corpus.hpp"
#include "qlfc/features.hpp"
#include "qlfc/model.hpp"

namespace qlfc {

struct Fold {
    std::string question_id;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
};

// One fold per question with at least one labeled answer; the test sets
// partition the labeled answers and never split a thread.
struct FoldPlan {
    std::vector<Fold> folds;
};

FoldPlan loto_folds(const Dataset& dataset);

// Percentages in [0, 100]; precision/recall/F1 are for the Positive class.
struct Metrics {
    double accuracy = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

Metrics classification_metrics(const std::vector<BinaryLabel>& predicted,
                               const std::vector<BinaryLabel>& actual);

// Mean average precision as a percentage. Each thread is a (score, label)
// sequence in thread order, ranked by descending score with ties keeping
// the input order; threads without a Positive label are excluded from the
// mean (average precision is undefined there).
double mean_average_precision(
    const std::vector<std::vector<std::pair<double, BinaryLabel>>>& threads);

// Ranking every thread by position (ascending = earliest answer first).
double chronological_map(const Dataset& dataset, bool ascending);

Metrics all_positive_metrics(const Dataset& dataset);

struct ReportRow {
    std::string name;
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> map;
};

struct EvalReport {
    std::vector<ReportRow> rows;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string dataset_hash;
    std::string fixture_hash;
};

// Leave-one-thread-out evaluation of one feature set: per-fold training and
// prediction, metrics pooled over all test answers, MAP over per-thread
// margin rankings. Folds are independent; jobs > 1 trains them in parallel
// with results merged in fold order, so the outcome is identical at any
// parallelism.
struct LotoResult {
    Metrics metrics;
    double map = 0;
    std::vector<std::pair<std::string, Prediction>> predictions;  // answer id, prediction
};

LotoResult evaluate_loto(const Dataset& dataset,
                         const std::map<std::string, FeatureVector>& features,
                         const TrainOptions& options, int jobs = 1);

// The three reference rows: a credibility-only classifier, the all-Positive
// majority class (no MAP: constant scores carry no ranking), and the
// chronological ranking (no classification metrics).
std::vector<ReportRow> run_baselines(const Dataset& dataset,
                                     const std::map<std::string, FeatureVector>& credibility,
                                     const TrainOptions& options, bool chronological_ascending);

enum class HqVariant { S1, S2, S3, S4 };
constexpr std::size_t kHqVariantCount = 4;
const char* hq_variant_name(HqVariant v);
// S1 generated query + entailment re-ranking, S2 no re-ranking, S3 whole
// answer as query, S4 neither.
const char* hq_variant_description(HqVariant v);

// LOTO evaluation of each ablation arm over its own feature set.
std::vector<ReportRow> ablate_hq(
    const Dataset& dataset,
    const std::array<std::map<std::string, FeatureVector>, kHqVariantCount>& variant_features,
    const TrainOptions& options);

struct ImportanceEntry {
    std::string name;
    std::string group;
    double weight = 0;
};

struct ImportanceReport {
    std::vector<ImportanceEntry> dims;  // |weight| descending, ties by name
    std::vector<std::pair<std::string, double>> groups;  // mean |weight| descending
    std::vector<ImportanceEntry> top_linguistic;         // up to 5
};

ImportanceReport feature_importance(const LinearModel& model);

// Plain-text table with 2-decimal percentages, "---" for absent metrics,
// plus the run metadata; byte-identical for identical inputs.
std::string render_report_text(const EvalReport& report);
std::string render_report_json(const EvalReport& report);
EvalReport parse_report_json(const std::string& text, const std::string& origin);

}  // namespace qlfc
