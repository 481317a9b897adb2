#pragma once

#include <string>
#include <vector>

namespace qlfc {

// The eleven feature groups, in the fixed preference order used for
// deterministic tie-breaking (best-performing group first).
namespace groups {
inline constexpr const char* kForumSupport = "forum_support";
inline constexpr const char* kWebSupport = "web_support";
inline constexpr const char* kLinguistic = "linguistic";
inline constexpr const char* kHqSupport = "hq_support";
inline constexpr const char* kEmbeddingsForum = "emb_forum";
inline constexpr const char* kCredibility = "credibility";
inline constexpr const char* kThreadSupport = "thread_support";
inline constexpr const char* kEmbeddingsNews = "emb_news";
inline constexpr const char* kUserActivity = "user_activity";
inline constexpr const char* kUserCategories = "user_categories";
inline constexpr const char* kUserQuality = "user_quality";
}  // namespace groups

const std::vector<std::string>& all_groups();          // preference order
bool is_known_group(const std::string& name);
std::string group_display_name(const std::string& group);

// Ordered, named, group-tagged feature values for one answer.
struct FeatureVector {
    struct Dim {
        std::string name;
        std::string group;
        double value = 0.0;
    };

    std::vector<Dim> dims;

    void add(std::string name, std::string group, double value) {
        dims.push_back({std::move(name), std::move(group), value});
    }
    std::size_t size() const { return dims.size(); }
    double value_of(const std::string& name) const;  // throws if absent

    // Appends all dims of `other`; duplicate names are an error.
    void append(const FeatureVector& other);
};

}  // namespace qlfc
