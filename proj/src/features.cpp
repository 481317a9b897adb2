#include "qlfc/features.hpp"

#include <algorithm>
#include <unordered_set>

#include "qlfc/common.hpp"

namespace qlfc {

const std::vector<std::string>& all_groups() {
    static const std::vector<std::string> order = {
        groups::kForumSupport,  groups::kWebSupport,     groups::kLinguistic,
        groups::kHqSupport,     groups::kEmbeddingsForum, groups::kCredibility,
        groups::kThreadSupport, groups::kEmbeddingsNews,  groups::kUserActivity,
        groups::kUserCategories, groups::kUserQuality,
    };
    return order;
}

bool is_known_group(const std::string& name) {
    const auto& g = all_groups();
    return std::find(g.begin(), g.end(), name) != g.end();
}

std::string group_display_name(const std::string& group) {
    if (group == groups::kForumSupport) return "Forum-wide support";
    if (group == groups::kWebSupport) return "Web support";
    if (group == groups::kLinguistic) return "Linguistic bias & subjectivity";
    if (group == groups::kHqSupport) return "High-quality post support";
    if (group == groups::kEmbeddingsForum) return "Embeddings (forum)";
    if (group == groups::kCredibility) return "Credibility";
    if (group == groups::kThreadSupport) return "Current-thread support";
    if (group == groups::kEmbeddingsNews) return "Embeddings (news)";
    if (group == groups::kUserActivity) return "User activity";
    if (group == groups::kUserCategories) return "User post categories";
    if (group == groups::kUserQuality) return "User post quality";
    return group;
}

double FeatureVector::value_of(const std::string& name) const {
    for (const Dim& d : dims) {
        if (d.name == name) return d.value;
    }
    throw InputError("no feature dimension named '" + name + "'");
}

void FeatureVector::append(const FeatureVector& other) {
    std::unordered_set<std::string> names;
    names.reserve(dims.size() + other.dims.size());
    for (const Dim& d : dims) names.insert(d.name);
    for (const Dim& d : other.dims) {
        if (!names.insert(d.name).second) {
            throw InputError("duplicate feature dimension '" + d.name + "'");
        }
        dims.push_back(d);
    }
}

}  // namespace qlfc
