#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "qlfc/features.hpp"
#include "qlfc/textproc.hpp"

namespace qlfc {

// A loaded word-vector table. Tokens are lowercased at load; every vector
// has exactly `dimension` components.
struct EmbeddingSpace {
    std::string name;
    std::size_t dimension = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;

    // Plain-text format: optional "N D" header, then one line per token,
    // "token v1 ... vD".
    static EmbeddingSpace load(const std::string& name, const std::string& path);

    bool contains(const std::string& lower_token) const { return vectors.count(lower_token) > 0; }
};

// Mean of the in-vocabulary token vectors; all-OOV input yields the zero
// vector so downstream cosines are defined (and equal to 0).
std::vector<double> avg_vector(const EmbeddingSpace& space,
                               const std::vector<std::string>& lower_tokens);
std::vector<double> avg_vector(const EmbeddingSpace& space, const TokenizedText& text);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Concatenation of per-space averaged vectors in configured order. The
// first configured space plays the general-news role (group emb_news), the
// second the in-domain forum role (group emb_forum); at most two spaces.
FeatureVector extract_embeddings(const std::vector<EmbeddingSpace>& spaces,
                                 const TokenizedText& answer);

std::string embedding_group_for_index(std::size_t space_index);

}  // namespace qlfc
