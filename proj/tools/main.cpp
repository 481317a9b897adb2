#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlfc/common.hpp"
#include "qlfc/corpus.hpp"
#include "qlfc/evalkit.hpp"
#include "qlfc/model.hpp"
#include "qlfc/pipeline.hpp"

using namespace qlfc;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda;
    std::optional<int> epochs;
    std::optional<int> k;
    std::vector<std::string> groups;
    std::string web_fixtures;
    std::string forum_fixtures;
};

void add_override_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "Override the config seed");
    cmd->add_option("--lambda", o.lambda, "Override the regularization strength");
    cmd->add_option("--epochs", o.epochs, "Override the SGD epoch count");
    cmd->add_option("--k", o.k, "Override the evidence depth k");
    cmd->add_option("--groups", o.groups, "Feature groups to use (default: all)")
        ->delimiter(',');
    cmd->add_option("--web-fixtures", o.web_fixtures, "Override the web fixture file");
    cmd->add_option("--forum-fixtures", o.forum_fixtures, "Override the forum fixture file");
}

RunConfig load_with_overrides(const std::string& config_path, const Overrides& o) {
    RunConfig config = load_config(config_path);
    if (o.seed) config.seed = *o.seed;
    if (o.lambda) {
        if (*o.lambda <= 0) throw InputError("--lambda must be positive");
        config.lambda = *o.lambda;
    }
    if (o.epochs) {
        if (*o.epochs <= 0) throw InputError("--epochs must be positive");
        config.epochs = *o.epochs;
    }
    if (o.k) {
        if (*o.k <= 0) throw InputError("--k must be positive");
        config.k = *o.k;
    }
    if (!o.groups.empty()) config.groups = o.groups;
    auto override_path = [](const std::string& flag, const std::string& value,
                            std::string& target) {
        if (value.empty()) return;
        if (!std::ifstream(value).good())
            throw InputError(flag + " refers to a missing file: " + value);
        target = value;
    };
    override_path("--web-fixtures", o.web_fixtures, config.web_fixtures);
    override_path("--forum-fixtures", o.forum_fixtures, config.forum_fixtures);
    config.enabled_groups();  // validates group names early
    return config;
}

void write_manifest(const std::string& output_path, const RunConfig& config) {
    write_file(output_path + ".manifest.json", manifest_for(config));
}

// Cached features are only trusted when their manifest matches the current
// effective config and input hashes bit for bit.
FeatureTable obtain_features(const Resources& res, const RunConfig& config,
                             const std::string& features_path, int jobs) {
    if (features_path.empty()) return featurize_all(res, config, jobs);
    std::string expected = manifest_for(config);
    std::string actual = read_file(features_path + ".manifest.json");
    if (actual != expected) {
        throw ValidationError("stale features: " + features_path +
                              " was produced from different inputs or settings; re-run featurize");
    }
    return load_features(features_path);
}

void print_stats(const DatasetStats& stats) {
    std::cout << "questions: " << stats.n_questions << "\n";
    std::cout << "labeled answers: " << stats.n_annotated_answers << "\n";
    std::cout << "positive: " << stats.n_positive << "\n";
    std::cout << "negative: " << stats.n_negative << "\n";
    for (const auto& [label, count] : stats.per_label) {
        std::cout << "label " << fact_label_name(label) << ": " << count << "\n";
    }
}

int check_expected_stats(const Dataset& dataset) {
    std::vector<std::string> mismatches =
        stats_mismatches(validate_stats(dataset), reference_stats());
    if (mismatches.empty()) {
        std::cout << "dataset matches the published label distribution\n";
        return 0;
    }
    for (const std::string& m : mismatches) std::cerr << "mismatch: " << m << "\n";
    return 1;
}

int cmd_validate(const std::string& config_path, bool expect_paper) {
    RunConfig config = load_config(config_path);
    Dataset dataset = load_dataset(config.dataset);
    print_stats(validate_stats(dataset));
    if (expect_paper) return check_expected_stats(dataset);
    return 0;
}

int cmd_convert(const std::string& input, const std::string& output, int utc_offset) {
    Dataset dataset = load_semeval_xml(input, utc_offset);
    save_dataset(dataset, output);
    nlohmann::ordered_json m;
    m["version"] = "qlfc-manifest/1";
    m["inputs"] = {{"xml", hash_hex(hash_file(input))}};
    write_file(output + ".manifest.json", m.dump(2) + "\n");
    DatasetStats stats = validate_stats(dataset);
    std::cout << "converted " << dataset.size() << " threads, " << stats.n_annotated_answers
              << " labeled answers -> " << output << "\n";
    return 0;
}

int cmd_featurize(const std::string& config_path, const Overrides& o, const std::string& output,
                  int jobs) {
    RunConfig config = load_with_overrides(config_path, o);
    Resources res = build_resources(config);
    FeatureTable table = featurize_all(res, config, jobs);
    save_features(table, output);
    write_manifest(output, config);
    std::size_t dims = table.empty() ? 0 : table.begin()->second.size();
    std::cout << "wrote " << table.size() << " feature rows (" << dims << " dims each) to "
              << output << "\n";
    return 0;
}

int cmd_train(const std::string& config_path, const Overrides& o, const std::string& features_path,
              const std::string& output, int jobs) {
    RunConfig config = load_with_overrides(config_path, o);
    Resources res = build_resources(config);
    FeatureTable table = obtain_features(res, config, features_path, jobs);
    FeatureTable selected = select_table_groups(table, config.enabled_groups());

    std::vector<FeatureVector> instances;
    std::vector<BinaryLabel> labels;
    for (const Thread& t : res.dataset) {
        for (const Answer& a : t.answers) {
            if (!a.labeled()) continue;
            auto it = selected.find(a.id);
            if (it == selected.end())
                throw ValidationError("no features for labeled answer '" + a.id + "'");
            instances.push_back(it->second);
            labels.push_back(binarize(*a.fact_label));
        }
    }
    LinearModel model = fit(instances, labels, config.train_options());
    save_model(model, output);
    write_manifest(output, config);
    std::cout << "trained on " << instances.size() << " answers, " << model.dims.size()
              << " dims -> " << output << "\n";
    return 0;
}

int cmd_evaluate(const std::string& config_path, const Overrides& o,
                 const std::string& features_path, const std::string& output,
                 const std::string& json_output, bool ensembles, bool expect_paper, int jobs) {
    RunConfig config = load_with_overrides(config_path, o);
    Resources res = build_resources(config);
    if (expect_paper) {
        int rc = check_expected_stats(res.dataset);
        if (rc != 0) return rc;
    }
    FeatureTable table = obtain_features(res, config, features_path, jobs);
    EvalReport report = run_evaluate(res, config, table, ensembles, jobs);
    std::string text = render_report_text(report);
    std::cout << text;
    if (!output.empty()) {
        write_file(output, text);
        write_manifest(output, config);
    }
    if (!json_output.empty()) write_file(json_output, render_report_json(report));
    return 0;
}

int cmd_ablate(const std::string& config_path, const Overrides& o, const std::string& output,
               const std::string& json_output) {
    RunConfig config = load_with_overrides(config_path, o);
    Resources res = build_resources(config);
    auto variants = featurize_hq_variants(res, config);
    EvalReport report;
    report.seed = config.seed;
    report.config_hash = config.config_hash;
    report.dataset_hash = res.dataset_hash;
    report.fixture_hash = res.fixture_hash;
    report.rows = ablate_hq(res.dataset, variants, config.train_options());
    std::string text = render_report_text(report);
    std::cout << text;
    if (!output.empty()) {
        write_file(output, text);
        write_manifest(output, config);
    }
    if (!json_output.empty()) write_file(json_output, render_report_json(report));
    return 0;
}

int cmd_report(const std::string& input, const std::string& output) {
    EvalReport report = parse_report_json(read_file(input), input);
    std::string text = render_report_text(report);
    if (output.empty()) {
        std::cout << text;
    } else {
        write_file(output, text);
        std::cout << "report written to " << output << "\n";
    }
    return 0;
}

int cmd_record(const std::string& config_path, const Overrides& o, const std::string& web_out,
               const std::string& forum_out) {
    if (web_out.empty() && forum_out.empty())
        throw InputError("record-fixtures: give --web-out and/or --forum-out");
    RunConfig config = load_with_overrides(config_path, o);
    Resources res = build_resources(config);
    RecordStats stats = record_fixtures(res, config, !web_out.empty(), !forum_out.empty(),
                                        web_out, forum_out);
    if (!web_out.empty()) {
        write_manifest(web_out, config);
        std::cout << "recorded " << stats.web_records << " web queries -> " << web_out << "\n";
    }
    if (!forum_out.empty()) {
        write_manifest(forum_out, config);
        std::cout << "recorded " << stats.forum_records << " forum queries -> " << forum_out
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fact checking for community forum answers"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides o;
    int jobs = 1;
    bool expect_paper = false;
    bool ensembles = false;
    std::string input, output, json_output, features_path, web_out, forum_out;
    int utc_offset = 180;

    CLI::App* validate = app.add_subcommand("validate-data", "Check a dataset against its schema");
    validate->add_option("-c,--config", config_path, "Run config file")->required();
    validate->add_flag("--expect-paper", expect_paper,
                       "Also compare against the published label distribution");

    CLI::App* convert = app.add_subcommand("convert", "Convert SemEval-style XML to JSON Lines");
    convert->add_option("-i,--input", input, "XML input file")->required();
    convert->add_option("-o,--output", output, "JSON Lines output file")->required();
    convert->add_option("--utc-offset", utc_offset, "Forum-local UTC offset in minutes");

    CLI::App* featurize = app.add_subcommand("featurize", "Extract per-answer feature vectors");
    featurize->add_option("-c,--config", config_path, "Run config file")->required();
    featurize->add_option("-o,--output", output, "Feature file to write")->required();
    featurize->add_option("-j,--jobs", jobs, "Parallel extraction workers");
    add_override_options(featurize, o);

    CLI::App* train = app.add_subcommand("train", "Fit a model on the full dataset");
    train->add_option("-c,--config", config_path, "Run config file")->required();
    train->add_option("-o,--output", output, "Model file to write")->required();
    train->add_option("--features", features_path, "Reuse a cached feature file");
    train->add_option("-j,--jobs", jobs, "Parallel extraction workers");
    add_override_options(train, o);

    CLI::App* evaluate = app.add_subcommand("evaluate", "Leave-one-thread-out evaluation");
    evaluate->add_option("-c,--config", config_path, "Run config file")->required();
    evaluate->add_option("-o,--output", output, "Report file to write");
    evaluate->add_option("--json", json_output, "Also write the report as JSON");
    evaluate->add_option("--features", features_path, "Reuse a cached feature file");
    evaluate->add_flag("--ensembles", ensembles, "Add greedy ensemble rows");
    evaluate->add_flag("--expect-paper", expect_paper,
                       "Validate the dataset against the published distribution first");
    evaluate->add_option("-j,--jobs", jobs, "Parallel fold workers");
    add_override_options(evaluate, o);

    CLI::App* ablate = app.add_subcommand("ablate", "Evidence-retrieval ablation (S1-S4)");
    ablate->add_option("-c,--config", config_path, "Run config file")->required();
    ablate->add_option("-o,--output", output, "Report file to write");
    ablate->add_option("--json", json_output, "Also write the report as JSON");
    add_override_options(ablate, o);

    CLI::App* report = app.add_subcommand("report", "Render a saved JSON report as text");
    report->add_option("-i,--input", input, "JSON report file")->required();
    report->add_option("-o,--output", output, "Text file to write (default: stdout)");

    CLI::App* record = app.add_subcommand("record-fixtures",
                                          "Run all queries against a search source and save "
                                          "replayable fixtures");
    record->add_option("-c,--config", config_path, "Run config file")->required();
    record->add_option("--web-out", web_out, "Web fixture file to write");
    record->add_option("--forum-out", forum_out, "Forum fixture file to write");
    add_override_options(record, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(config_path, expect_paper);
        if (app.got_subcommand(convert)) return cmd_convert(input, output, utc_offset);
        if (app.got_subcommand(featurize)) return cmd_featurize(config_path, o, output, jobs);
        if (app.got_subcommand(train))
            return cmd_train(config_path, o, features_path, output, jobs);
        if (app.got_subcommand(evaluate))
            return cmd_evaluate(config_path, o, features_path, output, json_output, ensembles,
                                expect_paper, jobs);
        if (app.got_subcommand(ablate)) return cmd_ablate(config_path, o, output, json_output);
        if (app.got_subcommand(report)) return cmd_report(input, output);
        if (app.got_subcommand(record)) return cmd_record(config_path, o, web_out, forum_out);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
