#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qlfc/corpus.hpp"
#include "qlfc/features.hpp"

namespace qlfc {

struct TrainOptions {
    double lambda = 1e-3;
    int epochs = 50;
    std::uint64_t seed = 42;
};

struct ModelDim {
    std::string name;
    std::string group;
    double weight = 0.0;
    // Training-fold scaling statistics; stdev is stored as 1 where the
    // training column was constant.
    double mean = 0.0;
    double stdev = 1.0;
};

// Linear SVM with z-score scaling folded into the model. Margin scoring is
// f(x) = w . (x - mu) / sigma + b; the label threshold sits at 0 and a zero
// margin counts as Positive.
struct LinearModel {
    std::vector<ModelDim> dims;
    double bias = 0.0;
    TrainOptions options;
    // Objective of the averaged iterate after each epoch, recorded during
    // fit; non-increasing within 1e-6.
    std::vector<double> objective_curve;
};

struct Prediction {
    BinaryLabel label = BinaryLabel::Positive;
    double score = 0.0;  // raw margin, used for ranking
};

// Trains by deterministic Pegasos-style stochastic subgradient descent on
// the scaled data. The instance order is canonicalized before the seeded
// per-epoch shuffle, so the result is invariant to input permutation. The
// reported weights are the averaged iterate; the bias is the exact hinge
// minimizer for that weight vector (midpoint of the optimal interval).
// Requires at least one instance of each class and identical dimension
// layout across instances.
LinearModel fit(const std::vector<FeatureVector>& instances,
                const std::vector<BinaryLabel>& labels,
                const TrainOptions& options = {});

// Name-keyed join: the instance may store its dimensions in any order but
// must carry exactly the model's dimension names.
Prediction predict(const LinearModel& model, const FeatureVector& instance);

// Primal objective F(w, b) = lambda/2 |w|^2 + mean hinge on already-scaled
// rows with labels in {-1, +1}. Exposed for the finite-difference check.
double svm_objective(const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels, const std::vector<double>& weights,
                     double bias, double lambda);

// Subgradient of svm_objective at (weights, bias): d/dw and d/db.
std::pair<std::vector<double>, double> svm_subgradient(
    const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
    const std::vector<double>& weights, double bias, double lambda);

// Versioned JSON round trip.
void save_model(const LinearModel& model, const std::string& path);
std::string serialize_model(const LinearModel& model);
LinearModel load_model(const std::string& path);
LinearModel parse_model(const std::string& text, const std::string& origin);

enum class EnsembleObjective { Accuracy, Map };

const char* ensemble_objective_name(EnsembleObjective o);

struct EnsembleStep {
    std::string group;
    double objective = 0.0;
};

struct EnsembleConfig {
    EnsembleObjective objective = EnsembleObjective::Accuracy;
    std::vector<std::string> selected;  // in acceptance order
    double baseline = 0.0;              // objective of the empty group set
    std::vector<EnsembleStep> trace;
};

using GroupObjectiveFn = std::function<double(const std::vector<std::string>&)>;

// Greedy forward selection over feature groups. Candidates are tried in the
// order given (pass them in preference order; ties resolve to the earliest
// candidate) and a group is added only on strict improvement.
EnsembleConfig ensemble_select(const std::vector<std::string>& available,
                               EnsembleObjective objective,
                               const GroupObjectiveFn& evaluate);

}  // namespace qlfc
