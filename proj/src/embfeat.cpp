#include "qlfc/embfeat.hpp"

#include <cmath>
#include <sstream>

#include "qlfc/common.hpp"

namespace qlfc {

EmbeddingSpace EmbeddingSpace::load(const std::string& name, const std::string& path) {
    EmbeddingSpace space;
    space.name = name;
    std::istringstream in(read_file(path));
    std::string line;
    size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream ls(t);
        std::vector<std::string> fields;
        std::string field;
        while (ls >> field) fields.push_back(field);
        if (first) {
            first = false;
            // Optional "N D" header.
            if (fields.size() == 2) {
                try {
                    (void)std::stoul(fields[0]);
                    space.dimension = std::stoul(fields[1]);
                    continue;
                } catch (...) {
                    // fall through: a two-field line that is not a header
                }
            }
        }
        if (fields.size() < 2) {
            throw InputError(path + ":" + std::to_string(lineno) + ": embedding line too short");
        }
        std::vector<double> vec;
        vec.reserve(fields.size() - 1);
        for (size_t i = 1; i < fields.size(); ++i) {
            try {
                vec.push_back(std::stod(fields[i]));
            } catch (...) {
                throw InputError(path + ":" + std::to_string(lineno) +
                                 ": bad embedding value '" + fields[i] + "'");
            }
        }
        if (space.dimension == 0) space.dimension = vec.size();
        if (vec.size() != space.dimension) {
            throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(space.dimension) + " values, got " +
                             std::to_string(vec.size()));
        }
        space.vectors[to_lower_ascii(fields[0])] = std::move(vec);
    }
    if (space.vectors.empty()) throw InputError("embedding file has no vectors: " + path);
    return space;
}

std::vector<double> avg_vector(const EmbeddingSpace& space,
                               const std::vector<std::string>& lower_tokens) {
    std::vector<double> sum(space.dimension, 0.0);
    size_t hits = 0;
    for (const std::string& tok : lower_tokens) {
        auto it = space.vectors.find(tok);
        if (it == space.vectors.end()) continue;
        ++hits;
        for (size_t d = 0; d < space.dimension; ++d) sum[d] += it->second[d];
    }
    if (hits > 0) {
        for (double& v : sum) v /= static_cast<double>(hits);
    }
    return sum;
}

std::vector<double> avg_vector(const EmbeddingSpace& space, const TokenizedText& text) {
    std::vector<std::string> tokens;
    tokens.reserve(text.tokens.size());
    for (const Token& t : text.tokens) {
        if (t.kind == TokenKind::Word) tokens.push_back(t.lower);
    }
    return avg_vector(space, tokens);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) return 0.0;
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0 || nb <= 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string embedding_group_for_index(std::size_t space_index) {
    if (space_index == 0) return groups::kEmbeddingsNews;
    if (space_index == 1) return groups::kEmbeddingsForum;
    throw InputError("at most two embedding spaces are supported");
}

FeatureVector extract_embeddings(const std::vector<EmbeddingSpace>& spaces,
                                 const TokenizedText& answer) {
    FeatureVector fv;
    for (size_t s = 0; s < spaces.size(); ++s) {
        std::string group = embedding_group_for_index(s);
        std::vector<double> vec = avg_vector(spaces[s], answer);
        for (size_t d = 0; d < vec.size(); ++d) {
            fv.add("emb." + spaces[s].name + "." + std::to_string(d), group, vec[d]);
        }
    }
    return fv;
}

}  // namespace qlfc
