#include "qlfc/corpus.hpp"

#include <set>
#include <sstream>

#include "json.hpp"
#include "qlfc/common.hpp"

namespace qlfc {

using nlohmann::json;

BinaryLabel binarize(FactLabel label) {
    return label == FactLabel::FactTrue ? BinaryLabel::Positive : BinaryLabel::Negative;
}

const char* goodness_name(Goodness g) {
    switch (g) {
        case Goodness::Good: return "Good";
        case Goodness::Bad: return "Bad";
        case Goodness::PotentiallyUseful: return "PotentiallyUseful";
    }
    return "Good";
}

const char* fact_label_name(FactLabel l) {
    switch (l) {
        case FactLabel::FactTrue: return "FactTrue";
        case FactLabel::FactFalse: return "FactFalse";
        case FactLabel::PartiallyTrue: return "PartiallyTrue";
        case FactLabel::ConditionallyTrue: return "ConditionallyTrue";
        case FactLabel::ResponderUnsure: return "ResponderUnsure";
        case FactLabel::NonFactual: return "NonFactual";
    }
    return "NonFactual";
}

namespace {

// Normalized lookup: case-, space-, dash- and underscore-insensitive, so
// the converter accepts the release's "Factual - TRUE" style spellings.
std::string squash(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '-' || c == '_') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

Goodness goodness_from_name(const std::string& name) {
    std::string n = squash(name);
    if (n == "good") return Goodness::Good;
    if (n == "bad") return Goodness::Bad;
    if (n == "potentiallyuseful") return Goodness::PotentiallyUseful;
    throw ValidationError("unknown goodness label: '" + name + "'");
}

FactLabel fact_label_from_name(const std::string& name) {
    std::string n = squash(name);
    if (n == "facttrue" || n == "factualtrue" || n == "true") return FactLabel::FactTrue;
    if (n == "factfalse" || n == "factualfalse" || n == "false") return FactLabel::FactFalse;
    if (n == "partiallytrue" || n == "factualpartiallytrue") return FactLabel::PartiallyTrue;
    if (n == "conditionallytrue" || n == "factualconditionallytrue")
        return FactLabel::ConditionallyTrue;
    if (n == "responderunsure" || n == "factualresponderunsure")
        return FactLabel::ResponderUnsure;
    if (n == "nonfactual") return FactLabel::NonFactual;
    throw ValidationError("unknown fact label: '" + name + "'");
}

namespace {

std::string require_string(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw ValidationError(where + ": missing or non-string field '" + key + "'");
    }
    return it->get<std::string>();
}

Thread parse_thread(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + ": thread record is not an object");
    auto qit = obj.find("question");
    if (qit == obj.end() || !qit->is_object()) {
        throw ValidationError(where + ": missing 'question' object");
    }
    Thread thread;
    const json& q = *qit;
    thread.question.id = require_string(q, "id", where);
    if (thread.question.id.empty()) throw ValidationError(where + ": empty question id");
    thread.question.subject = q.value("subject", std::string());
    thread.question.body = q.value("body", std::string());
    thread.question.category = q.value("category", std::string());
    thread.question.user_id = q.value("user_id", std::string());
    thread.question.timestamp = parse_rfc3339(require_string(q, "timestamp", where));

    auto ait = obj.find("answers");
    if (ait != obj.end()) {
        if (!ait->is_array()) throw ValidationError(where + ": 'answers' is not an array");
        for (const json& a : *ait) {
            Answer ans;
            ans.id = require_string(a, "id", where);
            if (ans.id.empty()) throw ValidationError(where + ": empty answer id");
            ans.body = a.value("body", std::string());
            ans.user_id = a.value("user_id", std::string());
            ans.timestamp = parse_rfc3339(require_string(a, "timestamp", where));
            auto pit = a.find("thread_position");
            if (pit == a.end() || !pit->is_number_integer()) {
                throw ValidationError(where + ": answer '" + ans.id +
                                      "' missing integer thread_position");
            }
            ans.thread_position = pit->get<int>();
            ans.goodness = goodness_from_name(require_string(a, "goodness", where));
            if (a.contains("fact_label") && !a["fact_label"].is_null()) {
                if (ans.goodness != Goodness::Good) {
                    throw ValidationError(where + ": answer '" + ans.id +
                                          "' carries a fact_label but is not Good");
                }
                ans.fact_label = fact_label_from_name(a["fact_label"].get<std::string>());
            }
            thread.answers.push_back(std::move(ans));
        }
    }
    return thread;
}

void check_thread_invariants(const Thread& thread, const std::string& where) {
    std::set<int> positions;
    for (const Answer& a : thread.answers) {
        if (!positions.insert(a.thread_position).second) {
            throw ValidationError(where + ": duplicate thread_position " +
                                  std::to_string(a.thread_position));
        }
    }
    int expect = 1;
    for (int p : positions) {
        if (p != expect) {
            throw ValidationError(where + ": thread positions not contiguous from 1");
        }
        ++expect;
    }
    for (size_t i = 1; i < thread.answers.size(); ++i) {
        if (thread.answers[i - 1].thread_position > thread.answers[i].thread_position) {
            throw ValidationError(where + ": answers not sorted by thread_position");
        }
    }
}

}  // namespace

Dataset parse_dataset(const std::string& jsonl, const std::string& origin) {
    Dataset dataset;
    std::set<std::string> question_ids;
    std::set<std::string> answer_ids;
    std::istringstream in(jsonl);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::string where = origin + ":" + std::to_string(lineno);
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ValidationError(where + ": malformed JSON (" + e.what() + ")");
        }
        Thread thread = parse_thread(obj, where);
        check_thread_invariants(thread, where);
        if (!question_ids.insert(thread.question.id).second) {
            throw ValidationError(where + ": duplicate question id '" + thread.question.id + "'");
        }
        for (const Answer& a : thread.answers) {
            if (!answer_ids.insert(a.id).second) {
                throw ValidationError(where + ": duplicate answer id '" + a.id + "'");
            }
        }
        dataset.push_back(std::move(thread));
    }
    return dataset;
}

Dataset load_dataset(const std::string& path) {
    return parse_dataset(read_file(path), path);
}

std::string serialize_dataset(const Dataset& dataset) {
    std::string out;
    for (const Thread& t : dataset) {
        json q = {
            {"id", t.question.id},
            {"subject", t.question.subject},
            {"body", t.question.body},
            {"category", t.question.category},
            {"timestamp", format_rfc3339(t.question.timestamp)},
            {"user_id", t.question.user_id},
        };
        json answers = json::array();
        for (const Answer& a : t.answers) {
            json ja = {
                {"id", a.id},
                {"body", a.body},
                {"timestamp", format_rfc3339(a.timestamp)},
                {"user_id", a.user_id},
                {"thread_position", a.thread_position},
                {"goodness", goodness_name(a.goodness)},
            };
            if (a.fact_label) ja["fact_label"] = fact_label_name(*a.fact_label);
            answers.push_back(std::move(ja));
        }
        json obj = {{"question", std::move(q)}, {"answers", std::move(answers)}};
        out += obj.dump();
        out += '\n';
    }
    return out;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    write_file(path, serialize_dataset(dataset));
}

DatasetStats validate_stats(const Dataset& dataset) {
    DatasetStats stats;
    stats.n_questions = dataset.size();
    for (const Thread& t : dataset) {
        for (const Answer& a : t.answers) {
            if (!a.fact_label) continue;
            ++stats.n_annotated_answers;
            ++stats.per_label[*a.fact_label];
            if (binarize(*a.fact_label) == BinaryLabel::Positive) {
                ++stats.n_positive;
            } else {
                ++stats.n_negative;
            }
        }
    }
    return stats;
}

DatasetStats reference_stats() {
    DatasetStats s;
    s.n_questions = 71;
    s.n_annotated_answers = 249;
    s.n_positive = 128;
    s.n_negative = 121;
    s.per_label = {
        {FactLabel::FactTrue, 128},        {FactLabel::FactFalse, 22},
        {FactLabel::PartiallyTrue, 38},    {FactLabel::ConditionallyTrue, 16},
        {FactLabel::ResponderUnsure, 26},  {FactLabel::NonFactual, 19},
    };
    return s;
}

std::vector<std::string> stats_mismatches(const DatasetStats& got, const DatasetStats& expected) {
    std::vector<std::string> out;
    auto check = [&](const std::string& what, std::size_t g, std::size_t e) {
        if (g != e) {
            out.push_back(what + ": expected " + std::to_string(e) + ", got " + std::to_string(g));
        }
    };
    check("questions", got.n_questions, expected.n_questions);
    check("annotated answers", got.n_annotated_answers, expected.n_annotated_answers);
    check("positive answers", got.n_positive, expected.n_positive);
    check("negative answers", got.n_negative, expected.n_negative);
    for (const auto& [label, count] : expected.per_label) {
        auto it = got.per_label.find(label);
        check(std::string("label ") + fact_label_name(label),
              it == got.per_label.end() ? 0 : it->second, count);
    }
    for (const auto& [label, count] : got.per_label) {
        if (!expected.per_label.count(label)) {
            out.push_back(std::string("unexpected label ") + fact_label_name(label) + ": " +
                          std::to_string(count));
        }
    }
    return out;
}

}  // namespace qlfc
