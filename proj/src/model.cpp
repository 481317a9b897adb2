#include "qlfc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "qlfc/common.hpp"

namespace qlfc {

namespace {

// splitmix64: tiny, sandbox-independent generator so shuffles are identical
// on every platform.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Bounded draw by modulo; bias is irrelevant here, determinism is not.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

void shuffle_indices(std::vector<std::size_t>& idx, SplitMix64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::swap(idx[i - 1], idx[rng.below(i)]);
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Exact minimizer of b -> mean hinge(y_i (s_i + b)): the function is convex
// piecewise linear, so the optimum is attained on an interval whose ends are
// breakpoints; we return the midpoint.
double best_bias(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<double> breaks;
    breaks.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        breaks.push_back(static_cast<double>(labels[i]) - scores[i]);
    }
    std::sort(breaks.begin(), breaks.end());
    auto hinge_at = [&](double b) {
        double s = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            s += std::max(0.0, 1.0 - labels[i] * (scores[i] + b));
        }
        return s / static_cast<double>(scores.size());
    };
    double best = hinge_at(breaks[0]);
    for (std::size_t i = 1; i < breaks.size(); ++i) best = std::min(best, hinge_at(breaks[i]));
    const double tol = 1e-9 * (1.0 + std::fabs(best));
    double lo = 0, hi = 0;
    bool found = false;
    for (double b : breaks) {
        if (hinge_at(b) <= best + tol) {
            if (!found) lo = b;
            hi = b;
            found = true;
        }
    }
    return (lo + hi) / 2.0;
}

int sign_of(BinaryLabel l) { return l == BinaryLabel::Positive ? 1 : -1; }

}  // namespace

double svm_objective(const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels, const std::vector<double>& weights,
                     double bias, double lambda) {
    double hinge = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        hinge += std::max(0.0, 1.0 - labels[i] * (dot(weights, rows[i]) + bias));
    }
    return 0.5 * lambda * dot(weights, weights) + hinge / static_cast<double>(rows.size());
}

std::pair<std::vector<double>, double> svm_subgradient(
    const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
    const std::vector<double>& weights, double bias, double lambda) {
    std::vector<double> gw(weights.size(), 0.0);
    double gb = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (labels[i] * (dot(weights, rows[i]) + bias) < 1.0) {
            for (std::size_t d = 0; d < gw.size(); ++d) gw[d] -= labels[i] * rows[i][d];
            gb -= labels[i];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (std::size_t d = 0; d < gw.size(); ++d) gw[d] = lambda * weights[d] + gw[d] * inv_n;
    return {gw, gb * inv_n};
}

LinearModel fit(const std::vector<FeatureVector>& instances,
                const std::vector<BinaryLabel>& labels, const TrainOptions& options) {
    if (instances.empty()) throw InputError("fit: no training instances");
    if (instances.size() != labels.size()) {
        throw InputError("fit: instance/label count mismatch");
    }
    bool has_pos = false, has_neg = false;
    for (BinaryLabel l : labels) (l == BinaryLabel::Positive ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw InputError("fit: training data has a single class");

    const std::size_t n = instances.size();
    const std::size_t d = instances[0].dims.size();
    if (d == 0) throw InputError("fit: zero-dimensional instances");
    for (const FeatureVector& fv : instances) {
        if (fv.dims.size() != d) throw InputError("fit: inconsistent feature dimensions");
        for (std::size_t j = 0; j < d; ++j) {
            if (fv.dims[j].name != instances[0].dims[j].name) {
                throw InputError("fit: inconsistent feature dimensions");
            }
        }
    }

    LinearModel model;
    model.options = options;
    model.dims.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        model.dims[j].name = instances[0].dims[j].name;
        model.dims[j].group = instances[0].dims[j].group;
    }

    // Scaling statistics from the training data only.
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0;
        for (const FeatureVector& fv : instances) mean += fv.dims[j].value;
        mean /= static_cast<double>(n);
        double var = 0;
        for (const FeatureVector& fv : instances) {
            double delta = fv.dims[j].value - mean;
            var += delta * delta;
        }
        double sd = std::sqrt(var / static_cast<double>(n));
        model.dims[j].mean = mean;
        model.dims[j].stdev = sd > 0 ? sd : 1.0;
    }

    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            rows[i][j] = (instances[i].dims[j].value - model.dims[j].mean) / model.dims[j].stdev;
        }
        y[i] = sign_of(labels[i]);
    }

    // Canonical visiting order (scaled values, then label) makes training
    // invariant to the order instances arrive in.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a] != rows[b]) return rows[a] < rows[b];
        return y[a] < y[b];
    });

    SplitMix64 rng(options.seed);
    std::vector<double> w(d, 0.0);
    std::vector<double> wsum(d, 0.0);
    std::size_t t = 0;
    std::vector<double> wavg(d);
    std::vector<double> scores(n);
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        shuffle_indices(order, rng);
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (options.lambda * static_cast<double>(t));
            const double margin = y[i] * dot(w, rows[i]);
            const double keep = 1.0 - eta * options.lambda;
            for (std::size_t j = 0; j < d; ++j) w[j] *= keep;
            if (margin < 1.0) {
                const double step = eta * y[i];
                for (std::size_t j = 0; j < d; ++j) w[j] += step * rows[i][j];
            }
            for (std::size_t j = 0; j < d; ++j) wsum[j] += w[j];
        }
        for (std::size_t j = 0; j < d; ++j) wavg[j] = wsum[j] / static_cast<double>(t);
        for (std::size_t i = 0; i < n; ++i) scores[i] = dot(wavg, rows[i]);
        model.objective_curve.push_back(
            svm_objective(rows, y, wavg, best_bias(scores, y), options.lambda));
    }

    for (std::size_t j = 0; j < d; ++j) model.dims[j].weight = wavg[j];
    for (std::size_t i = 0; i < n; ++i) scores[i] = dot(wavg, rows[i]);
    model.bias = best_bias(scores, y);
    return model;
}

Prediction predict(const LinearModel& model, const FeatureVector& instance) {
    if (instance.dims.size() != model.dims.size()) {
        throw InputError("predict: expected " + std::to_string(model.dims.size()) +
                         " dims, got " + std::to_string(instance.dims.size()));
    }
    std::unordered_map<std::string, double> values;
    values.reserve(instance.dims.size());
    for (const FeatureVector::Dim& dim : instance.dims) values[dim.name] = dim.value;
    double margin = model.bias;
    for (const ModelDim& md : model.dims) {
        auto it = values.find(md.name);
        if (it == values.end()) throw InputError("predict: missing dimension " + md.name);
        margin += md.weight * (it->second - md.mean) / md.stdev;
    }
    Prediction p;
    p.score = margin;
    p.label = margin >= 0 ? BinaryLabel::Positive : BinaryLabel::Negative;
    return p;
}

std::string serialize_model(const LinearModel& model) {
    nlohmann::ordered_json j;
    j["format"] = "qlfc-model/1";
    j["lambda"] = model.options.lambda;
    j["epochs"] = model.options.epochs;
    j["seed"] = model.options.seed;
    j["bias"] = model.bias;
    j["objective_curve"] = model.objective_curve;
    auto& dims = j["dims"] = nlohmann::ordered_json::array();
    for (const ModelDim& d : model.dims) {
        dims.push_back({{"name", d.name},
                        {"group", d.group},
                        {"weight", d.weight},
                        {"mean", d.mean},
                        {"stdev", d.stdev}});
    }
    return j.dump(2) + "\n";
}

void save_model(const LinearModel& model, const std::string& path) {
    write_file(path, serialize_model(model));
}

LinearModel parse_model(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(origin + ": not valid JSON: " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "qlfc-model/1") {
            throw InputError(origin + ": unsupported model format");
        }
        LinearModel model;
        model.options.lambda = j.at("lambda").get<double>();
        model.options.epochs = j.at("epochs").get<int>();
        model.options.seed = j.at("seed").get<std::uint64_t>();
        model.bias = j.at("bias").get<double>();
        if (j.contains("objective_curve")) {
            model.objective_curve = j["objective_curve"].get<std::vector<double>>();
        }
        for (const auto& dj : j.at("dims")) {
            ModelDim d;
            d.name = dj.at("name").get<std::string>();
            d.group = dj.at("group").get<std::string>();
            d.weight = dj.at("weight").get<double>();
            d.mean = dj.at("mean").get<double>();
            d.stdev = dj.at("stdev").get<double>();
            model.dims.push_back(std::move(d));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(origin + ": bad model file: " + e.what());
    }
}

LinearModel load_model(const std::string& path) {
    return parse_model(read_file(path), path);
}

const char* ensemble_objective_name(EnsembleObjective o) {
    return o == EnsembleObjective::Accuracy ? "accuracy" : "map";
}

EnsembleConfig ensemble_select(const std::vector<std::string>& available,
                               EnsembleObjective objective,
                               const GroupObjectiveFn& evaluate) {
    EnsembleConfig config;
    config.objective = objective;
    config.baseline = evaluate({});
    double best = config.baseline;
    std::vector<std::string> remaining = available;
    while (!remaining.empty()) {
        std::size_t best_idx = remaining.size();
        double best_val = best;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            std::vector<std::string> trial = config.selected;
            trial.push_back(remaining[i]);
            double val = evaluate(trial);
            if (val > best_val) {  // strict: ties keep the earlier candidate set
                best_val = val;
                best_idx = i;
            }
        }
        if (best_idx == remaining.size()) break;
        config.selected.push_back(remaining[best_idx]);
        config.trace.push_back({remaining[best_idx], best_val});
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_idx));
        best = best_val;
    }
    return config;
}

}  // namespace qlfc
