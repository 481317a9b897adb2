#pragma once

#include <array>
#include <string>
#include <vector>

#include "qlfc/features.hpp"
#include "qlfc/textproc.hpp"

namespace qlfc {

// The twelve cue classes, in the frozen feature order.
enum class BiasType {
    Factive,
    Assertive,
    Implicative,
    Hedge,
    ReportVerb,
    WikiBias,
    Modal,
    Negation,
    StrongSubj,
    WeakSubj,
    Positive,
    Negative
};

inline constexpr std::size_t kBiasTypeCount = 12;
const char* bias_type_name(BiasType t);
BiasType bias_type_from_name(const std::string& name);

// Normalized cue frequencies per bias type, each in [0,1].
using BiasVector = std::array<double, kBiasTypeCount>;

// Cue inventories, one per bias type. Entries are lowercased and may be
// multi-word. expand_multiword_cues() adds the pronoun+modal+adverb+verb
// combinations for the four verb classes.
class BiasLexicons {
public:
    // Reads <dir>/{factive,assertive,implicative,hedge,report_verb,
    // wiki_bias,modal,negation,strong_subj,weak_subj,positive,negative}.txt
    // plus strong_subj_adverbs.txt for the multi-word patterns.
    static BiasLexicons load(const std::string& dir, bool expand_multiword = true);
    static BiasLexicons from_entries(
        const std::vector<std::pair<BiasType, std::vector<std::string>>>& entries);

    void expand_multiword_cues();

    const std::vector<std::string>& cues(BiasType t) const;
    bool has_cue(BiasType t, const std::string& cue) const;
    void set_adverbs(std::vector<std::string> adverbs);
    std::uint64_t fingerprint() const;

    // Count of greedy longest-first non-overlapping cue matches on the
    // lowercased token sequence. Tokens are consumed per bias type.
    int count_matches(BiasType t, const std::vector<std::string>& lower_tokens) const;

private:
    void add_cue(BiasType t, const std::string& cue);
    void rebuild_match_tables();

    std::array<std::vector<std::string>, kBiasTypeCount> cues_;
    // cue token sequences sorted by length desc, then lexicographic
    std::array<std::vector<std::vector<std::string>>, kBiasTypeCount> match_tables_;
    std::vector<std::string> adverbs_;
    bool expanded_ = false;
};

// Eq.-style normalized score: cue matches / token count; 0 for empty text.
double bias_score(const BiasLexicons& lexicons, BiasType t, const TokenizedText& answer);

// 12-dim group, order fixed: factive, assertive, implicative, hedge,
// report, wiki_bias, modal, negation, strong_subj, weak_subj, positive,
// negative.
FeatureVector extract_linguistic(const BiasLexicons& lexicons, const TokenizedText& answer);

BiasVector bias_vector(const BiasLexicons& lexicons, const TokenizedText& answer);

}  // namespace qlfc
