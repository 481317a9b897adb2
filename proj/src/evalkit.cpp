#include "qlfc/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qlfc/common.hpp"

namespace qlfc {

FoldPlan loto_folds(const Dataset& dataset) {
    FoldPlan plan;
    std::vector<std::pair<std::string, std::vector<std::string>>> labeled_by_thread;
    for (const Thread& th : dataset) {
        std::vector<std::string> ids;
        for (const Answer& a : th.answers) {
            if (a.labeled()) ids.push_back(a.id);
        }
        if (!ids.empty()) labeled_by_thread.emplace_back(th.question.id, std::move(ids));
    }
    for (std::size_t f = 0; f < labeled_by_thread.size(); ++f) {
        Fold fold;
        fold.question_id = labeled_by_thread[f].first;
        fold.test_ids = labeled_by_thread[f].second;
        for (std::size_t g = 0; g < labeled_by_thread.size(); ++g) {
            if (g == f) continue;
            fold.train_ids.insert(fold.train_ids.end(), labeled_by_thread[g].second.begin(),
                                  labeled_by_thread[g].second.end());
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

Metrics classification_metrics(const std::vector<BinaryLabel>& predicted,
                               const std::vector<BinaryLabel>& actual) {
    if (predicted.size() != actual.size()) {
        throw InputError("classification_metrics: prediction/label count mismatch");
    }
    if (predicted.empty()) throw InputError("classification_metrics: empty input");
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] == BinaryLabel::Positive;
        const bool a = actual[i] == BinaryLabel::Positive;
        if (p && a) ++tp;
        else if (p && !a) ++fp;
        else if (!p && a) ++fn;
        else ++tn;
    }
    Metrics m;
    m.accuracy = 100.0 * (tp + tn) / static_cast<double>(predicted.size());
    m.precision = tp + fp > 0 ? 100.0 * tp / (tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? 100.0 * tp / (tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                      : 0.0;
    return m;
}

double mean_average_precision(
    const std::vector<std::vector<std::pair<double, BinaryLabel>>>& threads) {
    double sum_ap = 0;
    std::size_t included = 0;
    for (const auto& thread : threads) {
        std::size_t positives = 0;
        for (const auto& [score, label] : thread) {
            if (label == BinaryLabel::Positive) ++positives;
        }
        if (positives == 0) continue;
        std::vector<std::size_t> order(thread.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return thread[a].first > thread[b].first;
        });
        double ap = 0, hits = 0;
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            if (thread[order[rank]].second != BinaryLabel::Positive) continue;
            ++hits;
            ap += hits / static_cast<double>(rank + 1);
        }
        sum_ap += ap / static_cast<double>(positives);
        ++included;
    }
    if (included == 0) return 0.0;
    return 100.0 * sum_ap / static_cast<double>(included);
}

double chronological_map(const Dataset& dataset, bool ascending) {
    std::vector<std::vector<std::pair<double, BinaryLabel>>> threads;
    for (const Thread& th : dataset) {
        std::vector<std::pair<double, BinaryLabel>> ranked;
        for (const Answer& a : th.answers) {
            if (!a.labeled()) continue;
            double score = ascending ? -static_cast<double>(a.thread_position)
                                     : static_cast<double>(a.thread_position);
            ranked.emplace_back(score, binarize(*a.fact_label));
        }
        if (!ranked.empty()) threads.push_back(std::move(ranked));
    }
    return mean_average_precision(threads);
}

Metrics all_positive_metrics(const Dataset& dataset) {
    std::vector<BinaryLabel> predicted, actual;
    for (const Thread& th : dataset) {
        for (const Answer& a : th.answers) {
            if (!a.labeled()) continue;
            predicted.push_back(BinaryLabel::Positive);
            actual.push_back(binarize(*a.fact_label));
        }
    }
    return classification_metrics(predicted, actual);
}

namespace {

const FeatureVector& feature_of(const std::map<std::string, FeatureVector>& features,
                                const std::string& id) {
    auto it = features.find(id);
    if (it == features.end()) throw InputError("no features for answer '" + id + "'");
    return it->second;
}

}  // namespace

LotoResult evaluate_loto(const Dataset& dataset,
                         const std::map<std::string, FeatureVector>& features,
                         const TrainOptions& options, int jobs) {
    FoldPlan plan = loto_folds(dataset);
    if (plan.folds.empty()) throw InputError("evaluate_loto: dataset has no labeled answers");

    std::map<std::string, BinaryLabel> truth;
    for (const Thread& th : dataset) {
        for (const Answer& a : th.answers) {
            if (a.labeled()) truth[a.id] = binarize(*a.fact_label);
        }
    }

    auto run_fold = [&](const Fold& fold) {
        std::vector<FeatureVector> train_x;
        std::vector<BinaryLabel> train_y;
        train_x.reserve(fold.train_ids.size());
        for (const std::string& id : fold.train_ids) {
            train_x.push_back(feature_of(features, id));
            train_y.push_back(truth.at(id));
        }
        LinearModel model = fit(train_x, train_y, options);
        std::vector<std::pair<std::string, Prediction>> out;
        out.reserve(fold.test_ids.size());
        for (const std::string& id : fold.test_ids) {
            out.emplace_back(id, predict(model, feature_of(features, id)));
        }
        return out;
    };

    std::vector<std::vector<std::pair<std::string, Prediction>>> per_fold(plan.folds.size());
    if (jobs <= 1 || plan.folds.size() < 2) {
        for (std::size_t f = 0; f < plan.folds.size(); ++f) per_fold[f] = run_fold(plan.folds[f]);
    } else {
        const std::size_t n_workers =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), plan.folds.size());
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t f = w; f < plan.folds.size(); f += n_workers) {
                    per_fold[f] = run_fold(plan.folds[f]);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }

    LotoResult result;
    std::map<std::string, Prediction> by_id;
    for (const auto& fold_out : per_fold) {
        for (const auto& [id, p] : fold_out) by_id[id] = p;
    }

    std::vector<BinaryLabel> predicted, actual;
    std::vector<std::vector<std::pair<double, BinaryLabel>>> threads;
    for (const Thread& th : dataset) {
        std::vector<std::pair<double, BinaryLabel>> ranked;
        for (const Answer& a : th.answers) {
            if (!a.labeled()) continue;
            const Prediction& p = by_id.at(a.id);
            predicted.push_back(p.label);
            actual.push_back(truth.at(a.id));
            ranked.emplace_back(p.score, truth.at(a.id));
        }
        if (!ranked.empty()) threads.push_back(std::move(ranked));
    }
    result.metrics = classification_metrics(predicted, actual);
    result.map = mean_average_precision(threads);
    for (const auto& [id, p] : by_id) result.predictions.emplace_back(id, p);
    return result;
}

std::vector<ReportRow> run_baselines(const Dataset& dataset,
                                     const std::map<std::string, FeatureVector>& credibility,
                                     const TrainOptions& options, bool chronological_ascending) {
    std::vector<ReportRow> rows;

    LotoResult cred = evaluate_loto(dataset, credibility, options);
    ReportRow cred_row;
    cred_row.name = "Credibility (baseline)";
    cred_row.accuracy = cred.metrics.accuracy;
    cred_row.precision = cred.metrics.precision;
    cred_row.recall = cred.metrics.recall;
    cred_row.f1 = cred.metrics.f1;
    cred_row.map = cred.map;
    rows.push_back(std::move(cred_row));

    Metrics ap = all_positive_metrics(dataset);
    ReportRow ap_row;
    ap_row.name = "All Positive (majority class)";
    ap_row.accuracy = ap.accuracy;
    ap_row.precision = ap.precision;
    ap_row.recall = ap.recall;
    ap_row.f1 = ap.f1;
    rows.push_back(std::move(ap_row));

    ReportRow chron;
    chron.name = "Thread order (chronological)";
    chron.map = chronological_map(dataset, chronological_ascending);
    rows.push_back(std::move(chron));

    return rows;
}

const char* hq_variant_name(HqVariant v) {
    switch (v) {
        case HqVariant::S1: return "S1";
        case HqVariant::S2: return "S2";
        case HqVariant::S3: return "S3";
        case HqVariant::S4: return "S4";
    }
    return "S1";
}

const char* hq_variant_description(HqVariant v) {
    switch (v) {
        case HqVariant::S1: return "generated query, entailment re-ranking";
        case HqVariant::S2: return "no re-ranking";
        case HqVariant::S3: return "answer as query";
        case HqVariant::S4: return "answer as query, no re-ranking";
    }
    return "";
}

std::vector<ReportRow> ablate_hq(
    const Dataset& dataset,
    const std::array<std::map<std::string, FeatureVector>, kHqVariantCount>& variant_features,
    const TrainOptions& options) {
    std::vector<ReportRow> rows;
    for (std::size_t v = 0; v < kHqVariantCount; ++v) {
        const HqVariant variant = static_cast<HqVariant>(v);
        LotoResult res = evaluate_loto(dataset, variant_features[v], options);
        ReportRow row;
        row.name = std::string(hq_variant_name(variant)) + " (" +
                   hq_variant_description(variant) + ")";
        row.accuracy = res.metrics.accuracy;
        row.precision = res.metrics.precision;
        row.recall = res.metrics.recall;
        row.f1 = res.metrics.f1;
        row.map = res.map;
        rows.push_back(std::move(row));
    }
    return rows;
}

ImportanceReport feature_importance(const LinearModel& model) {
    ImportanceReport report;
    for (const ModelDim& d : model.dims) report.dims.push_back({d.name, d.group, d.weight});
    std::sort(report.dims.begin(), report.dims.end(),
              [](const ImportanceEntry& a, const ImportanceEntry& b) {
                  const double wa = std::fabs(a.weight), wb = std::fabs(b.weight);
                  if (wa != wb) return wa > wb;
                  return a.name < b.name;
              });
    std::map<std::string, std::pair<double, std::size_t>> by_group;
    for (const ImportanceEntry& e : report.dims) {
        auto& [sum, count] = by_group[e.group];
        sum += std::fabs(e.weight);
        ++count;
    }
    for (const auto& [group, agg] : by_group) {
        report.groups.emplace_back(group, agg.first / static_cast<double>(agg.second));
    }
    std::sort(report.groups.begin(), report.groups.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (const ImportanceEntry& e : report.dims) {
        if (e.group == groups::kLinguistic && report.top_linguistic.size() < 5) {
            report.top_linguistic.push_back(e);
        }
    }
    return report;
}

namespace {

std::string fmt_cell(const std::optional<double>& v) {
    if (!v.has_value()) return "---";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return buf;
}

}  // namespace

std::string render_report_text(const EvalReport& report) {
    std::size_t name_w = 6;  // "System"
    for (const ReportRow& r : report.rows) name_w = std::max(name_w, r.name.size());
    // Multi-group rows can get very long; overflow those rather than pad
    // every other row out to match.
    name_w = std::min<std::size_t>(name_w, 40);
    const char* headers[5] = {"Acc", "P", "R", "F1", "MAP"};
    std::ostringstream out;
    out << std::string(name_w - 6, ' ') << "System";
    for (const char* h : headers) {
        out << " | " << std::string(6 - std::string(h).size(), ' ') << h;
    }
    out << "\n" << std::string(name_w, '-');
    for (int i = 0; i < 5; ++i) out << "-+-------";
    out << "\n";
    for (const ReportRow& r : report.rows) {
        if (r.name.size() < name_w) out << std::string(name_w - r.name.size(), ' ');
        out << r.name;
        const std::optional<double>* cells[5] = {&r.accuracy, &r.precision, &r.recall, &r.f1,
                                                 &r.map};
        for (const auto* cell : cells) {
            std::string s = fmt_cell(*cell);
            out << " | " << std::string(s.size() >= 6 ? 0 : 6 - s.size(), ' ') << s;
        }
        out << "\n";
    }
    out << "\nseed=" << report.seed;
    if (!report.config_hash.empty()) out << " config=" << report.config_hash;
    if (!report.dataset_hash.empty()) out << " dataset=" << report.dataset_hash;
    if (!report.fixture_hash.empty()) out << " fixtures=" << report.fixture_hash;
    out << "\n";
    return out.str();
}

std::string render_report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["format"] = "qlfc-report/1";
    j["seed"] = report.seed;
    j["config_hash"] = report.config_hash;
    j["dataset_hash"] = report.dataset_hash;
    j["fixture_hash"] = report.fixture_hash;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const ReportRow& r : report.rows) {
        nlohmann::ordered_json rj;
        rj["name"] = r.name;
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v.has_value()) rj[key] = *v;
        };
        put("accuracy", r.accuracy);
        put("precision", r.precision);
        put("recall", r.recall);
        put("f1", r.f1);
        put("map", r.map);
        rows.push_back(std::move(rj));
    }
    return j.dump(2) + "\n";
}

EvalReport parse_report_json(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(origin + ": invalid JSON: " + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "qlfc-report/1")
        throw ValidationError(origin + ": not a qlfc-report/1 document");
    EvalReport report;
    report.seed = j.value("seed", std::uint64_t{0});
    report.config_hash = j.value("config_hash", "");
    report.dataset_hash = j.value("dataset_hash", "");
    report.fixture_hash = j.value("fixture_hash", "");
    for (const nlohmann::json& rj : j.value("rows", nlohmann::json::array())) {
        ReportRow row;
        row.name = rj.at("name").get<std::string>();
        auto get = [&](const char* key) -> std::optional<double> {
            if (!rj.contains(key)) return std::nullopt;
            return rj.at(key).get<double>();
        };
        row.accuracy = get("accuracy");
        row.precision = get("precision");
        row.recall = get("recall");
        row.f1 = get("f1");
        row.map = get("map");
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace qlfc
