#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlfc/common.hpp"
#include "qlfc/corpus.hpp"
#include "qlfc/evalkit.hpp"
#include "qlfc/evidencefeat.hpp"
#include "qlfc/model.hpp"
#include "qlfc/pipeline.hpp"
#include "qlfc/textproc.hpp"

namespace py = pybind11;
using namespace qlfc;

namespace {

py::dict stats_to_dict(const DatasetStats& s) {
    py::dict d;
    d["questions"] = s.n_questions;
    d["labeled_answers"] = s.n_annotated_answers;
    d["positive"] = s.n_positive;
    d["negative"] = s.n_negative;
    py::dict per_label;
    for (const auto& [label, count] : s.per_label) per_label[fact_label_name(label)] = count;
    d["per_label"] = per_label;
    return d;
}

// (score, is_positive) pairs per thread, the shape ranking metrics consume.
std::vector<std::vector<std::pair<double, BinaryLabel>>> to_threads(
    const std::vector<std::vector<std::pair<double, bool>>>& raw) {
    std::vector<std::vector<std::pair<double, BinaryLabel>>> threads;
    for (const auto& t : raw) {
        std::vector<std::pair<double, BinaryLabel>> row;
        for (const auto& [score, positive] : t) {
            row.emplace_back(score, positive ? BinaryLabel::Positive : BinaryLabel::Negative);
        }
        threads.push_back(std::move(row));
    }
    return threads;
}

std::vector<BinaryLabel> to_labels(const std::vector<bool>& raw) {
    std::vector<BinaryLabel> out;
    for (bool b : raw) out.push_back(b ? BinaryLabel::Positive : BinaryLabel::Negative);
    return out;
}

}  // namespace

PYBIND11_MODULE(qlfc, m) {
    m.doc() = "Fact checking for community forum answers";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<InputError>(m, "InputError");

    m.def("dataset_stats",
          [](const std::string& path) { return stats_to_dict(validate_stats(load_dataset(path))); },
          py::arg("path"), "Label distribution of a JSON Lines dataset");

    m.def("tokenize_words",
          [](const std::string& text) {
              return content_stream(tokenize(text, WordClassLexicon::empty()));
          },
          py::arg("text"), "Lowercased non-punctuation token stream");

    m.def("containment", &containment, py::arg("a"), py::arg("b"),
          "N-gram containment of token list a in token list b");

    m.def("mean_average_precision",
          [](const std::vector<std::vector<std::pair<double, bool>>>& threads) {
              return mean_average_precision(to_threads(threads));
          },
          py::arg("threads"),
          "MAP (as a percentage) over (score, is_positive) pairs grouped by thread");

    m.def("classification_metrics",
          [](const std::vector<bool>& predicted, const std::vector<bool>& actual) {
              Metrics mt = classification_metrics(to_labels(predicted), to_labels(actual));
              py::dict d;
              d["accuracy"] = mt.accuracy;
              d["precision"] = mt.precision;
              d["recall"] = mt.recall;
              d["f1"] = mt.f1;
              return d;
          },
          py::arg("predicted"), py::arg("actual"),
          "Accuracy/P/R/F1 (percentages) with True as the positive class");

    m.def("evaluate",
          [](const std::string& config_path, const std::vector<std::string>& groups,
             bool ensembles, int jobs) {
              RunConfig config = load_config(config_path);
              if (!groups.empty()) config.groups = groups;
              Resources res = build_resources(config);
              FeatureTable table = featurize_all(res, config, jobs);
              return render_report_text(run_evaluate(res, config, table, ensembles, jobs));
          },
          py::arg("config_path"), py::arg("groups") = std::vector<std::string>{},
          py::arg("ensembles") = false, py::arg("jobs") = 1,
          "Run the leave-one-thread-out evaluation and return the text report");
}
