#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qlfc/corpus.hpp"
#include "qlfc/features.hpp"
#include "qlfc/model.hpp"
#include "qlfc/timeutil.hpp"

namespace qlfc {

struct ProfileOptions {
    int utc_offset_minutes = 180;        // forum-local wall clock
    std::vector<int> weekend_weekdays = {5, 6};  // Friday, Saturday (0 = Sunday)
};

// Aggregated posting history of one forum user, built in a single pass over
// the annotated dataset plus an optional forum dump. Registration is
// approximated by the earliest observed post; reference_time is the latest
// post anywhere in the corpus, shared by all profiles so age features are
// deterministic.
struct UserProfile {
    struct AnswerRef {
        std::string id;
        UtcSeconds timestamp = 0;
        int thread_position = 0;
    };

    std::string user_id;
    std::map<std::string, std::size_t> category_counts;  // answers per thread category
    std::size_t answers = 0;                             // N; equals the sum of category_counts
    std::set<std::string> questions_answered;
    std::size_t questions_asked = 0;
    std::size_t jobs_posts = 0;         // posts in categories containing "job"
    std::size_t classifieds_posts = 0;  // posts in categories containing "classified"
    UtcSeconds registration = 0;
    UtcSeconds reference_time = 0;
    std::set<std::int64_t> active_days;  // forum-local civil day serials
    std::vector<AnswerRef> answer_history;
    ProfileOptions options;
    bool has_posts = false;
};

// Threads already seen (by question or answer id) in `annotated` are not
// double counted from the dump.
std::map<std::string, UserProfile> build_profiles(const Dataset& annotated,
                                                  const Dataset* forum_dump,
                                                  const ProfileOptions& options = {});

// The fixed forum category list, one name per line; duplicates rejected.
std::vector<std::string> load_categories(const std::string& path);

// Per-category raw counts in list order, the same counts normalized by the
// user's total N (zeros when N = 0), then N and the distinct-category count:
// 2 * |categories| + 2 dims. A profile category missing from the list is a
// validation error.
FeatureVector extract_categories(const UserProfile& profile,
                                 const std::vector<std::string>& categories);

// answer_id -> probability that the answer is Good.
struct QualityScores {
    std::map<std::string, double> p_good;
};

QualityScores load_quality_scores(const std::string& path);
void save_quality_scores(const QualityScores& scores, const std::string& path);

// Good (incl. PotentiallyUseful -> Bad) vs Bad auxiliary classifier over
// per-answer feature vectors; probability is the logistic link on the
// margin, so the 0.5 cut coincides with the margin sign.
LinearModel train_goodness_model(const std::vector<FeatureVector>& features,
                                 const std::vector<Goodness>& labels,
                                 const TrainOptions& options = {});

QualityScores score_goodness(const LinearModel& model, const std::vector<std::string>& answer_ids,
                             const std::vector<FeatureVector>& features);

// 12 dims: #Good, #Bad, total scored, %Good, %Bad, sum p(Good) over
// predicted-Good, sum p(Bad) over predicted-Bad, sum p(predicted) over all,
// avg p(Good), avg p(Bad), max p(Good), max p(Bad). Predicted label is Good
// iff p_good >= 0.5. Answers without a score are skipped; their count is
// reported through missing_out when given.
FeatureVector extract_quality(const UserProfile& profile, const QualityScores& scores,
                              std::size_t* missing_out = nullptr);

// 19 dims: answers, distinct questions answered, questions asked, jobs
// posts, classifieds posts, days since registration, active days; posts per
// local time-of-day bucket working 07-15 / after-work 15-21 / night 21-04 /
// early-morning 04-07 (a partition) plus overlapping before-noon 07-12;
// weekday and weekend posts; answers among the first k for k in
// {1, 3, 5, 10, 20}.
FeatureVector extract_activity(const UserProfile& profile);

}  // namespace qlfc
