#include "qlfc/evidencefeat.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "qlfc/common.hpp"

namespace qlfc {

const char* sim_name(Sim s) {
    switch (s) {
        case Sim::CosTfIdf: return "costfidf";
        case Sim::CosEmb: return "cosemb";
        case Sim::Containment: return "containment";
    }
    return "costfidf";
}

double cosine_tfidf(const std::vector<std::string>& a, const std::vector<std::string>& b,
                    const TfIdfIndex& index) {
    return sparse_cosine(index.vectorize(a), index.vectorize(b));
}

double cosine_emb(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  const EmbeddingSpace* space) {
    if (space == nullptr) return 0.0;
    return std::max(0.0, cosine(avg_vector(*space, a), avg_vector(*space, b)));
}

double containment(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty()) return 0.0;
    const std::size_t n = a.size() < 3 ? 1 : 3;
    auto grams_a = word_ngrams(a, n);
    auto grams_b = word_ngrams(b, n);
    int total = 0, shared = 0;
    for (const auto& [gram, count] : grams_a) {
        total += count;
        auto it = grams_b.find(gram);
        if (it != grams_b.end()) shared += std::min(count, it->second);
    }
    return total == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(total);
}

double sim_score(Sim sim, const std::vector<std::string>& a, const std::vector<std::string>& b,
                 const TfIdfIndex& index, const EmbeddingSpace* space) {
    switch (sim) {
        case Sim::CosTfIdf: return cosine_tfidf(a, b, index);
        case Sim::CosEmb: return cosine_emb(a, b, space);
        case Sim::Containment: return containment(a, b);
    }
    return 0.0;
}

TripletView TripletView::build(const TokenizedText& page) {
    TripletView view;
    const std::size_t n_sent = page.sentences.size();
    auto window_tokens = [&](std::size_t first, std::size_t count) {
        std::vector<std::string> tokens;
        for (std::size_t s = first; s < first + count && s < n_sent; ++s) {
            const SentenceRange& r = page.sentences[s];
            for (std::size_t i = r.begin; i < r.end; ++i) {
                if (page.tokens[i].kind != TokenKind::Punct) tokens.push_back(page.tokens[i].lower);
            }
        }
        return tokens;
    };
    if (n_sent <= 3) {
        view.windows.push_back(window_tokens(0, 3));
    } else {
        for (std::size_t s = 0; s + 3 <= n_sent; ++s) view.windows.push_back(window_tokens(s, 3));
    }
    return view;
}

PageProfile page_profile(const std::vector<std::string>& side_tokens, const TokenizedText& page,
                         const TfIdfIndex& index, const EmbeddingSpace* space) {
    PageProfile profile;
    TripletView view = TripletView::build(page);
    for (std::size_t s = 0; s < kSimCount; ++s) {
        double sum = 0, best = 0;
        for (const auto& window : view.windows) {
            double score = sim_score(static_cast<Sim>(s), side_tokens, window, index, space);
            sum += score;
            best = std::max(best, score);
        }
        profile.avg[s] = sum / static_cast<double>(view.windows.size());
        profile.max[s] = best;
    }
    return profile;
}

namespace {

// Per-result scores for one side: [sim][view] with views snippet, page_avg,
// page_max.
using SideScores = std::array<std::array<double, 3>, kSimCount>;

SideScores score_result(const std::vector<std::string>& side_tokens, const SearchResult& result,
                        const TfIdfIndex& index, const EmbeddingSpace* space,
                        const WordClassLexicon& lexicon) {
    SideScores scores{};
    TokenizedText snippet = tokenize(result.snippet, lexicon);
    std::vector<std::string> snippet_tokens = content_stream(snippet);
    PageProfile page;
    if (!result.page_text.empty()) {
        page = page_profile(side_tokens, tokenize(result.page_text, lexicon), index, space);
    }
    for (std::size_t s = 0; s < kSimCount; ++s) {
        scores[s][0] = sim_score(static_cast<Sim>(s), side_tokens, snippet_tokens, index, space);
        scores[s][1] = page.avg[s];
        scores[s][2] = page.max[s];
    }
    return scores;
}

constexpr const char* kSideNames[3] = {"q", "a", "qa"};
constexpr const char* kViewNames[3] = {"snippet", "page_avg", "page_max"};

// side x sim x view x {maxres, avgres} block, shared by the web and forum
// layouts.
void emit_support_block(FeatureVector& fv, const std::string& prefix, const std::string& group,
                        const std::vector<SideScores> per_result[3]) {
    for (std::size_t side = 0; side < 3; ++side) {
        const std::vector<SideScores>& results = per_result[side];
        for (std::size_t s = 0; s < kSimCount; ++s) {
            for (std::size_t v = 0; v < 3; ++v) {
                double best = 0, sum = 0;
                for (const SideScores& scores : results) {
                    best = std::max(best, scores[s][v]);
                    sum += scores[s][v];
                }
                double avg = results.empty() ? 0.0 : sum / static_cast<double>(results.size());
                std::string stem = prefix + "." + kSideNames[side] + "." +
                                   sim_name(static_cast<Sim>(s)) + "." + kViewNames[v];
                fv.add(stem + ".maxres", group, best);
                fv.add(stem + ".avgres", group, avg);
            }
        }
    }
}

}  // namespace

FeatureVector extract_web_support(const TokenizedText& question, const TokenizedText& answer,
                                  const std::vector<SearchResult>& results,
                                  const TfIdfIndex& index, const EmbeddingSpace* space,
                                  const WordClassLexicon& lexicon) {
    std::vector<std::string> sides[3];
    sides[0] = content_stream(question);
    sides[1] = content_stream(answer);
    sides[2] = sides[0];
    sides[2].insert(sides[2].end(), sides[1].begin(), sides[1].end());

    // [source][side] -> scores of each contributing result
    std::vector<SideScores> buckets[3][3];
    for (const SearchResult& r : results) {
        if (!r.relevant) continue;
        const std::size_t source = static_cast<std::size_t>(r.source_type);
        for (std::size_t side = 0; side < 3; ++side) {
            buckets[source][side].push_back(score_result(sides[side], r, index, space, lexicon));
        }
    }

    FeatureVector fv;
    constexpr const char* kSourceNames[3] = {"reputed", "forum", "other"};
    for (std::size_t source = 0; source < 3; ++source) {
        emit_support_block(fv, std::string("web.") + kSourceNames[source], groups::kWebSupport,
                           buckets[source]);
    }
    return fv;
}

FeatureVector extract_forum_support(const TokenizedText& question, const TokenizedText& answer,
                                    const std::vector<SearchResult>& results,
                                    const TfIdfIndex& index, const EmbeddingSpace* space,
                                    const WordClassLexicon& lexicon) {
    std::vector<std::string> sides[3];
    sides[0] = content_stream(question);
    sides[1] = content_stream(answer);
    sides[2] = sides[0];
    sides[2].insert(sides[2].end(), sides[1].begin(), sides[1].end());

    std::vector<SideScores> per_result[3];
    for (const SearchResult& r : results) {
        if (!r.relevant) continue;
        for (std::size_t side = 0; side < 3; ++side) {
            per_result[side].push_back(score_result(sides[side], r, index, space, lexicon));
        }
    }
    FeatureVector fv;
    emit_support_block(fv, "forum", groups::kForumSupport, per_result);
    return fv;
}

FeatureVector extract_thread_support(const Answer& answer, const Thread& thread,
                                     const std::vector<EmbeddingSpace>& spaces,
                                     const WordClassLexicon& lexicon) {
    constexpr const char* kRoleNames[2] = {"news", "forum"};
    double centroid_sim[2] = {0.0, 0.0};
    for (std::size_t s = 0; s < spaces.size() && s < 2; ++s) {
        const EmbeddingSpace& space = spaces[s];
        std::vector<double> centroid(space.dimension, 0.0);
        std::size_t others = 0;
        for (const Answer& other : thread.answers) {
            if (other.id == answer.id || other.goodness != Goodness::Good) continue;
            std::vector<double> v = avg_vector(space, tokenize(other.body, lexicon));
            for (std::size_t d = 0; d < space.dimension; ++d) centroid[d] += v[d];
            ++others;
        }
        if (others == 0) continue;
        for (double& v : centroid) v /= static_cast<double>(others);
        std::vector<double> av = avg_vector(space, tokenize(answer.body, lexicon));
        centroid_sim[s] = std::max(0.0, cosine(av, centroid));
    }
    FeatureVector fv;
    fv.add("thread.centroid.news", groups::kThreadSupport, centroid_sim[0]);
    fv.add("thread.centroid.forum", groups::kThreadSupport, centroid_sim[1]);
    fv.add("thread.reciprocal_rank", groups::kThreadSupport,
           answer.thread_position > 0 ? 1.0 / answer.thread_position : 0.0);
    return fv;
}

HqIndex HqIndex::build(const Dataset& threads, const std::vector<std::string>& trusted_authors,
                       const WordClassLexicon& lexicon) {
    if (trusted_authors.empty()) throw InputError("trusted-author list is empty");
    std::unordered_set<std::string> trusted(trusted_authors.begin(), trusted_authors.end());
    HqIndex index;
    auto add_post = [&](const std::string& id, const std::string& author, const std::string& text) {
        if (trusted.count(author) == 0) return;
        HqPost post;
        post.id = id;
        post.author = author;
        TokenizedText tokenized = tokenize(text, lexicon);
        for (const SentenceRange& r : tokenized.sentences) {
            std::vector<std::string> tokens;
            std::string raw;
            for (std::size_t i = r.begin; i < r.end; ++i) {
                const Token& t = tokenized.tokens[i];
                if (t.kind != TokenKind::Punct) tokens.push_back(t.lower);
                if (!raw.empty() && t.preceded_by_space) raw += ' ';
                raw += t.surface;
            }
            if (tokens.empty()) continue;
            post.sentence_texts.push_back(std::move(raw));
            post.sentence_tokens.push_back(std::move(tokens));
        }
        if (post.sentence_texts.empty()) return;
        index.posts_.push_back(std::move(post));
    };
    for (const Thread& th : threads) {
        add_post(th.question.id, th.question.user_id,
                 th.question.subject + ". " + th.question.body);
        for (const Answer& a : th.answers) add_post(a.id, a.user_id, a.body);
    }
    std::vector<std::vector<std::string>> docs;
    for (std::size_t p = 0; p < index.posts_.size(); ++p) {
        for (std::size_t s = 0; s < index.posts_[p].sentence_tokens.size(); ++s) {
            index.sentences_.push_back({p, s});
            docs.push_back(index.posts_[p].sentence_tokens[s]);
        }
    }
    if (!docs.empty()) index.tfidf_ = TfIdfIndex::build(docs);
    return index;
}

double entailment_score(const std::vector<std::string>& text_tokens,
                        const TokenizedText& hypothesis, const TfIdfIndex& index) {
    std::set<std::string> content;
    for (const Token& t : hypothesis.tokens) {
        if (t.kind != TokenKind::Word) continue;
        if (t.cls == WordClass::Noun || t.cls == WordClass::Verb || t.cls == WordClass::Adjective) {
            content.insert(t.lower);
        }
    }
    if (content.empty()) return 0.0;
    std::unordered_set<std::string> text_set(text_tokens.begin(), text_tokens.end());
    double covered = 0, total = 0;
    for (const std::string& term : content) {
        double w = index.idf(term);
        total += w;
        if (text_set.count(term) > 0) covered += w;
    }
    return total > 0 ? covered / total : 0.0;
}

std::vector<EvidenceMatch> retrieve_hq_evidence(const std::vector<std::string>& query_tokens,
                                                const TokenizedText& answer, const HqIndex& index,
                                                std::size_t k) {
    if (index.empty()) return {};
    auto qv = index.tfidf().vectorize(query_tokens);
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(index.sentence_count());
    for (std::size_t i = 0; i < index.sentence_count(); ++i) {
        const HqIndex::SentenceRef& ref = index.sentences()[i];
        double score =
            sparse_cosine(qv, index.tfidf().vectorize(index.posts()[ref.post].sentence_tokens[ref.sentence]));
        scored.emplace_back(score, i);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (scored.size() > k) scored.resize(k);

    std::vector<EvidenceMatch> matches;
    for (std::size_t r = 0; r < scored.size(); ++r) {
        const HqIndex::SentenceRef& ref = index.sentences()[scored[r].second];
        EvidenceMatch m;
        m.post_id = index.posts()[ref.post].id;
        m.sentence_index = ref.sentence;
        m.text = index.posts()[ref.post].sentence_texts[ref.sentence];
        m.retrieval_cosine = scored[r].first;
        m.entailment = entailment_score(index.posts()[ref.post].sentence_tokens[ref.sentence],
                                        answer, index.tfidf());
        m.rank_by_similarity = static_cast<int>(r) + 1;
        matches.push_back(std::move(m));
    }
    std::stable_sort(matches.begin(), matches.end(), [](const EvidenceMatch& a,
                                                        const EvidenceMatch& b) {
        return a.entailment > b.entailment;  // stable: ties keep R2 order
    });
    for (std::size_t r = 0; r < matches.size(); ++r) {
        matches[r].rank_by_entailment = static_cast<int>(r) + 1;
    }
    return matches;
}

FeatureVector extract_hq_support(const std::vector<std::string>& query_tokens,
                                 const TokenizedText& answer, const HqIndex& index, std::size_t k,
                                 bool rerank) {
    std::vector<EvidenceMatch> matches = retrieve_hq_evidence(query_tokens, answer, index, k);
    // matches arrive in R1 order; R2 order is recoverable from the ranks.
    std::vector<double> entail_slots(k, 0.0), cosine_slots(k, 0.0);
    for (const EvidenceMatch& m : matches) {
        const std::size_t r1 = static_cast<std::size_t>(m.rank_by_entailment) - 1;
        const std::size_t r2 = static_cast<std::size_t>(m.rank_by_similarity) - 1;
        entail_slots[rerank ? r1 : r2] = m.entailment;
        cosine_slots[r2] = m.retrieval_cosine;
    }
    FeatureVector fv;
    for (std::size_t i = 0; i < k; ++i) {
        fv.add("hq.entail." + std::to_string(i + 1), groups::kHqSupport, entail_slots[i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
        fv.add("hq.cos." + std::to_string(i + 1), groups::kHqSupport, cosine_slots[i]);
    }
    return fv;
}

}  // namespace qlfc
