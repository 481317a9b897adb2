#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qlfc/corpus.hpp"
#include "qlfc/embfeat.hpp"
#include "qlfc/features.hpp"
#include "qlfc/retrieval.hpp"
#include "qlfc/textproc.hpp"

namespace qlfc {

// The three similarity measures, in the fixed order used by feature
// layouts: TF-IDF cosine, embedding cosine, n-gram containment.
enum class Sim { CosTfIdf = 0, CosEmb = 1, Containment = 2 };
inline constexpr std::size_t kSimCount = 3;
const char* sim_name(Sim s);

// All three return values in [0, 1]; the embedding cosine is clamped at 0,
// the other two are non-negative by construction. Token arguments are
// lowercased content streams.
double cosine_tfidf(const std::vector<std::string>& a, const std::vector<std::string>& b,
                    const TfIdfIndex& index);
// space may be null (no embeddings configured), which scores 0.
double cosine_emb(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  const EmbeddingSpace* space);
// |ngrams(a) multiset-intersect ngrams(b)| / |ngrams(a)| over word trigrams,
// falling back to unigrams when a has fewer than 3 tokens; empty a scores 0.
double containment(const std::vector<std::string>& a, const std::vector<std::string>& b);

double sim_score(Sim sim, const std::vector<std::string>& a, const std::vector<std::string>& b,
                 const TfIdfIndex& index, const EmbeddingSpace* space);

// Rolling 3-sentence windows (stride 1) over a document, each a token
// stream; a document of up to 3 sentences is a single window.
struct TripletView {
    std::vector<std::vector<std::string>> windows;

    static TripletView build(const TokenizedText& page);
};

// Mean and max similarity of one Q/A side against a page's triplet windows,
// per measure. An empty page yields zeros.
struct PageProfile {
    std::array<double, kSimCount> avg{};
    std::array<double, kSimCount> max{};
};

PageProfile page_profile(const std::vector<std::string>& side_tokens, const TokenizedText& page,
                         const TfIdfIndex& index, const EmbeddingSpace* space);

// source type (reputed/forum/other) x side (q/a/qa) x measure x view
// (snippet/page_avg/page_max) x aggregation over results (maxres/avgres),
// 3*3*3*3*2 = 162 dims named like web.reputed.a.cosemb.page_max.avgres.
// Only results flagged relevant contribute; buckets without results are
// zeros, and results without page text contribute zeros to the page views.
FeatureVector extract_web_support(const TokenizedText& question, const TokenizedText& answer,
                                  const std::vector<SearchResult>& results,
                                  const TfIdfIndex& index, const EmbeddingSpace* space,
                                  const WordClassLexicon& lexicon);

// The same layout without the source-type axis: 3*3*3*2 = 54 dims named
// forum.q.costfidf.snippet.maxres and so on.
FeatureVector extract_forum_support(const TokenizedText& question, const TokenizedText& answer,
                                    const std::vector<SearchResult>& results,
                                    const TfIdfIndex& index, const EmbeddingSpace* space,
                                    const WordClassLexicon& lexicon);

// 3 dims: cosine of the answer's averaged vector against the centroid of
// the thread's other Good answers, once per configured space (0 when the
// space is missing or the answer is the only Good one), plus the reciprocal
// thread rank.
FeatureVector extract_thread_support(const Answer& answer, const Thread& thread,
                                     const std::vector<EmbeddingSpace>& spaces,
                                     const WordClassLexicon& lexicon);

// One high-quality post by a trusted author, split into sentences.
struct HqPost {
    std::string id;
    std::string author;
    std::vector<std::string> sentence_texts;
    std::vector<std::vector<std::string>> sentence_tokens;
};

// Sentence-level TF-IDF index over the high-quality posts. Built from a
// thread dump filtered to the trusted-author list; question posts and
// answers both count as posts.
class HqIndex {
public:
    static HqIndex build(const Dataset& threads, const std::vector<std::string>& trusted_authors,
                         const WordClassLexicon& lexicon);

    const std::vector<HqPost>& posts() const { return posts_; }
    const TfIdfIndex& tfidf() const { return tfidf_; }
    std::size_t sentence_count() const { return sentences_.size(); }
    bool empty() const { return sentences_.empty(); }

    struct SentenceRef {
        std::size_t post = 0;
        std::size_t sentence = 0;
    };
    const std::vector<SentenceRef>& sentences() const { return sentences_; }

private:
    std::vector<HqPost> posts_;
    std::vector<SentenceRef> sentences_;
    TfIdfIndex tfidf_;
};

struct EvidenceMatch {
    std::string post_id;
    std::size_t sentence_index = 0;  // within the post
    std::string text;
    double retrieval_cosine = 0.0;
    double entailment = 0.0;
    int rank_by_entailment = 0;  // R1
    int rank_by_similarity = 0;  // R2
};

// IDF-weighted coverage: sum of idf over the hypothesis' content tokens
// (nouns, verbs, adjectives) present in the text, divided by the total; a
// hypothesis without content tokens scores 0. Monotone under text
// extension.
double entailment_score(const std::vector<std::string>& text_tokens,
                        const TokenizedText& hypothesis, const TfIdfIndex& index);

// Top-k sentences by TF-IDF cosine against the query (R2), each scored by
// entailment of the answer, returned re-ranked by entailment (R1 order;
// ties keep R2 order). Empty corpus yields an empty sequence.
std::vector<EvidenceMatch> retrieve_hq_evidence(const std::vector<std::string>& query_tokens,
                                                const TokenizedText& answer, const HqIndex& index,
                                                std::size_t k = 5);

// 5 entailment scores in R1 order + 5 retrieval cosines in R2 order, both
// zero-padded to k = 5: 10 dims. With rerank = false the entailment slots
// stay in R2 order (scores still computed), the ablation's no-re-ranking
// arm.
FeatureVector extract_hq_support(const std::vector<std::string>& query_tokens,
                                 const TokenizedText& answer, const HqIndex& index,
                                 std::size_t k = 5, bool rerank = true);

}  // namespace qlfc
