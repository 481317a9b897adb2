#include "qlfc/userfeat.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qlfc/common.hpp"

namespace qlfc {

namespace {

std::int64_t local_day_serial(UtcSeconds t, int utc_offset_minutes) {
    std::int64_t shifted = t + static_cast<std::int64_t>(utc_offset_minutes) * 60;
    // Floor division keeps pre-epoch instants on the right day.
    std::int64_t day = shifted / 86400;
    if (shifted % 86400 < 0) --day;
    return day;
}

bool category_mentions(const std::string& category, const std::string& needle) {
    return contains_ci(category, needle);
}

struct ProfileAccumulator {
    std::map<std::string, UserProfile>& profiles;
    const ProfileOptions& options;
    UtcSeconds reference = 0;
    std::set<std::string> seen_questions;
    std::set<std::string> seen_answers;

    UserProfile& at(const std::string& user_id) {
        UserProfile& p = profiles[user_id];
        if (p.user_id.empty()) {
            p.user_id = user_id;
            p.options = options;
        }
        return p;
    }

    void post(UserProfile& p, UtcSeconds t, const std::string& category) {
        if (!p.has_posts || t < p.registration) p.registration = t;
        p.has_posts = true;
        p.active_days.insert(local_day_serial(t, options.utc_offset_minutes));
        if (category_mentions(category, "job")) ++p.jobs_posts;
        if (category_mentions(category, "classified")) ++p.classifieds_posts;
        if (t > reference) reference = t;
    }

    void thread(const Thread& th) {
        if (!seen_questions.insert(th.question.id).second) return;
        if (!th.question.user_id.empty()) {
            UserProfile& asker = at(th.question.user_id);
            ++asker.questions_asked;
            post(asker, th.question.timestamp, th.question.category);
        }
        for (const Answer& a : th.answers) {
            if (!seen_answers.insert(a.id).second) continue;
            if (a.user_id.empty()) continue;
            UserProfile& p = at(a.user_id);
            ++p.answers;
            ++p.category_counts[th.question.category];
            p.questions_answered.insert(th.question.id);
            p.answer_history.push_back({a.id, a.timestamp, a.thread_position});
            post(p, a.timestamp, th.question.category);
        }
    }
};

}  // namespace

std::map<std::string, UserProfile> build_profiles(const Dataset& annotated,
                                                  const Dataset* forum_dump,
                                                  const ProfileOptions& options) {
    std::map<std::string, UserProfile> profiles;
    ProfileAccumulator acc{profiles, options};
    for (const Thread& th : annotated) acc.thread(th);
    if (forum_dump != nullptr) {
        for (const Thread& th : *forum_dump) acc.thread(th);
    }
    for (auto& [id, p] : profiles) p.reference_time = acc.reference;
    return profiles;
}

std::vector<std::string> load_categories(const std::string& path) {
    std::vector<std::string> names = read_line_list(path);
    if (names.empty()) throw InputError("category list is empty: " + path);
    std::set<std::string> seen;
    for (const std::string& name : names) {
        if (!seen.insert(name).second) {
            throw ValidationError(path + ": duplicate category '" + name + "'");
        }
    }
    return names;
}

FeatureVector extract_categories(const UserProfile& profile,
                                 const std::vector<std::string>& categories) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < categories.size(); ++i) index[categories[i]] = i;
    std::vector<double> raw(categories.size(), 0.0);
    for (const auto& [name, count] : profile.category_counts) {
        auto it = index.find(name);
        if (it == index.end()) {
            throw ValidationError("category not in the configured list: '" + name + "'");
        }
        raw[it->second] = static_cast<double>(count);
    }
    const double n = static_cast<double>(profile.answers);
    FeatureVector fv;
    char buf[24];
    for (std::size_t i = 0; i < raw.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%03zu", i);
        fv.add(std::string("user.cat.raw.") + buf, groups::kUserCategories, raw[i]);
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%03zu", i);
        fv.add(std::string("user.cat.norm.") + buf, groups::kUserCategories,
               n > 0 ? raw[i] / n : 0.0);
    }
    fv.add("user.cat.total", groups::kUserCategories, n);
    fv.add("user.cat.distinct", groups::kUserCategories,
           static_cast<double>(profile.category_counts.size()));
    return fv;
}

QualityScores load_quality_scores(const std::string& path) {
    QualityScores scores;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
            std::string id = j.at("answer_id").get<std::string>();
            double p = j.at("p_good").get<double>();
            if (!(p >= 0.0 && p <= 1.0)) {
                throw ValidationError(path + ":" + std::to_string(lineno) +
                                      ": p_good outside [0,1]");
            }
            if (!scores.p_good.emplace(id, p).second) {
                throw ValidationError(path + ":" + std::to_string(lineno) +
                                      ": duplicate answer_id '" + id + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return scores;
}

void save_quality_scores(const QualityScores& scores, const std::string& path) {
    std::ostringstream out;
    for (const auto& [id, p] : scores.p_good) {
        nlohmann::ordered_json j;
        j["answer_id"] = id;
        j["p_good"] = p;
        out << j.dump() << "\n";
    }
    write_file(path, out.str());
}

LinearModel train_goodness_model(const std::vector<FeatureVector>& features,
                                 const std::vector<Goodness>& labels,
                                 const TrainOptions& options) {
    std::vector<BinaryLabel> binary;
    binary.reserve(labels.size());
    for (Goodness g : labels) {
        binary.push_back(g == Goodness::Good ? BinaryLabel::Positive : BinaryLabel::Negative);
    }
    return fit(features, binary, options);
}

QualityScores score_goodness(const LinearModel& model, const std::vector<std::string>& answer_ids,
                             const std::vector<FeatureVector>& features) {
    if (answer_ids.size() != features.size()) {
        throw InputError("score_goodness: id/feature count mismatch");
    }
    QualityScores scores;
    for (std::size_t i = 0; i < answer_ids.size(); ++i) {
        double margin = predict(model, features[i]).score;
        scores.p_good[answer_ids[i]] = 1.0 / (1.0 + std::exp(-margin));
    }
    return scores;
}

FeatureVector extract_quality(const UserProfile& profile, const QualityScores& scores,
                              std::size_t* missing_out) {
    std::size_t n_good = 0, n_bad = 0, total = 0, missing = 0;
    double sum_good = 0, sum_bad = 0, sum_all = 0, max_good = 0, max_bad = 0;
    for (const UserProfile::AnswerRef& ref : profile.answer_history) {
        auto it = scores.p_good.find(ref.id);
        if (it == scores.p_good.end()) {
            ++missing;
            continue;
        }
        ++total;
        const double p = it->second;
        if (p >= 0.5) {
            ++n_good;
            sum_good += p;
            sum_all += p;
            max_good = std::max(max_good, p);
        } else {
            ++n_bad;
            sum_bad += 1.0 - p;
            sum_all += 1.0 - p;
            max_bad = std::max(max_bad, 1.0 - p);
        }
    }
    if (missing_out != nullptr) *missing_out = missing;
    FeatureVector fv;
    fv.add("user.q.good_count", groups::kUserQuality, static_cast<double>(n_good));
    fv.add("user.q.bad_count", groups::kUserQuality, static_cast<double>(n_bad));
    fv.add("user.q.total", groups::kUserQuality, static_cast<double>(total));
    fv.add("user.q.good_pct", groups::kUserQuality,
           total > 0 ? static_cast<double>(n_good) / static_cast<double>(total) : 0.0);
    fv.add("user.q.bad_pct", groups::kUserQuality,
           total > 0 ? static_cast<double>(n_bad) / static_cast<double>(total) : 0.0);
    fv.add("user.q.p_good_sum", groups::kUserQuality, sum_good);
    fv.add("user.q.p_bad_sum", groups::kUserQuality, sum_bad);
    fv.add("user.q.p_all_sum", groups::kUserQuality, sum_all);
    fv.add("user.q.p_good_avg", groups::kUserQuality,
           n_good > 0 ? sum_good / static_cast<double>(n_good) : 0.0);
    fv.add("user.q.p_bad_avg", groups::kUserQuality,
           n_bad > 0 ? sum_bad / static_cast<double>(n_bad) : 0.0);
    fv.add("user.q.p_good_max", groups::kUserQuality, max_good);
    fv.add("user.q.p_bad_max", groups::kUserQuality, max_bad);
    return fv;
}

FeatureVector extract_activity(const UserProfile& profile) {
    const int offset = profile.options.utc_offset_minutes;
    const std::set<int> weekend(profile.options.weekend_weekdays.begin(),
                                profile.options.weekend_weekdays.end());
    double working = 0, after_work = 0, night = 0, early = 0, before_noon = 0;
    double weekday_posts = 0, weekend_posts = 0;
    const int ks[] = {1, 3, 5, 10, 20};
    double first_k[5] = {0, 0, 0, 0, 0};
    for (const UserProfile::AnswerRef& ref : profile.answer_history) {
        const int h = local_view(ref.timestamp, offset).hour;
        if (h >= 7 && h < 15) ++working;
        else if (h >= 15 && h < 21) ++after_work;
        else if (h >= 21 || h < 4) ++night;
        else ++early;
        if (h >= 7 && h < 12) ++before_noon;
        if (weekend.count(local_weekday(ref.timestamp, offset)) > 0) ++weekend_posts;
        else ++weekday_posts;
        for (int k = 0; k < 5; ++k) {
            if (ref.thread_position <= ks[k]) ++first_k[k];
        }
    }
    double days_since = 0;
    if (profile.has_posts && profile.reference_time >= profile.registration) {
        days_since = static_cast<double>((profile.reference_time - profile.registration) / 86400);
    }
    FeatureVector fv;
    fv.add("user.act.answers", groups::kUserActivity, static_cast<double>(profile.answers));
    fv.add("user.act.questions_answered", groups::kUserActivity,
           static_cast<double>(profile.questions_answered.size()));
    fv.add("user.act.questions_asked", groups::kUserActivity,
           static_cast<double>(profile.questions_asked));
    fv.add("user.act.jobs", groups::kUserActivity, static_cast<double>(profile.jobs_posts));
    fv.add("user.act.classifieds", groups::kUserActivity,
           static_cast<double>(profile.classifieds_posts));
    fv.add("user.act.days_since_reg", groups::kUserActivity, days_since);
    fv.add("user.act.active_days", groups::kUserActivity,
           static_cast<double>(profile.active_days.size()));
    fv.add("user.act.hours_working", groups::kUserActivity, working);
    fv.add("user.act.hours_after_work", groups::kUserActivity, after_work);
    fv.add("user.act.hours_night", groups::kUserActivity, night);
    fv.add("user.act.hours_early", groups::kUserActivity, early);
    fv.add("user.act.hours_before_noon", groups::kUserActivity, before_noon);
    fv.add("user.act.weekday", groups::kUserActivity, weekday_posts);
    fv.add("user.act.weekend", groups::kUserActivity, weekend_posts);
    fv.add("user.act.first_1", groups::kUserActivity, first_k[0]);
    fv.add("user.act.first_3", groups::kUserActivity, first_k[1]);
    fv.add("user.act.first_5", groups::kUserActivity, first_k[2]);
    fv.add("user.act.first_10", groups::kUserActivity, first_k[3]);
    fv.add("user.act.first_20", groups::kUserActivity, first_k[4]);
    return fv;
}

}  // namespace qlfc
