#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlfc/timeutil.hpp"

namespace qlfc {

enum class Goodness { Good, Bad, PotentiallyUseful };

// The six veracity annotations carried by Good answers.
enum class FactLabel {
    FactTrue,
    FactFalse,
    PartiallyTrue,
    ConditionallyTrue,
    ResponderUnsure,
    NonFactual
};

enum class BinaryLabel { Positive, Negative };

// FactTrue is the only positive class; everything else is negative.
BinaryLabel binarize(FactLabel label);

const char* goodness_name(Goodness g);
const char* fact_label_name(FactLabel l);
Goodness goodness_from_name(const std::string& name);
FactLabel fact_label_from_name(const std::string& name);

struct Question {
    std::string id;
    std::string subject;
    std::string body;
    std::string category;
    UtcSeconds timestamp = 0;
    std::string user_id;
};

struct Answer {
    std::string id;
    std::string body;
    UtcSeconds timestamp = 0;
    std::string user_id;
    int thread_position = 0;  // 1-based, contiguous within the thread
    Goodness goodness = Goodness::Good;
    std::optional<FactLabel> fact_label;  // only set on Good answers

    bool labeled() const { return fact_label.has_value(); }
};

struct Thread {
    Question question;
    std::vector<Answer> answers;  // sorted by thread_position
};

using Dataset = std::vector<Thread>;

struct DatasetStats {
    std::size_t n_questions = 0;
    std::size_t n_annotated_answers = 0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    std::map<FactLabel, std::size_t> per_label;

    bool operator==(const DatasetStats&) const = default;
};

// One thread per line, schema documented in the README. Enforces unique
// ids, contiguous 1-based thread positions, and fact labels only on Good
// answers; errors name the offending line.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(const std::string& jsonl, const std::string& origin);
std::string serialize_dataset(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::string& path);

DatasetStats validate_stats(const Dataset& dataset);

// Published label distribution of the CQA-QL-2016-fact release, used by the
// --expect-paper validation flag.
DatasetStats reference_stats();

// Differences between observed and expected stats, one message per
// mismatch; empty when the stats agree.
std::vector<std::string> stats_mismatches(const DatasetStats& got, const DatasetStats& expected);

// Adapter for the SemEval-2016 Task 3 XML schema with factuality
// annotations (Thread / RelQuestion / RelComment elements). Timestamps
// without a zone are forum-local at the given offset.
Dataset convert_semeval_xml(const std::string& xml, int forum_utc_offset_minutes,
                            const std::string& origin);
Dataset load_semeval_xml(const std::string& path, int forum_utc_offset_minutes);

}  // namespace qlfc
