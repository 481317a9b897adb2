#include "qlfc/lexfeat.hpp"

#include <algorithm>
#include <set>

#include "qlfc/common.hpp"

namespace qlfc {

const char* bias_type_name(BiasType t) {
    switch (t) {
        case BiasType::Factive: return "factive";
        case BiasType::Assertive: return "assertive";
        case BiasType::Implicative: return "implicative";
        case BiasType::Hedge: return "hedge";
        case BiasType::ReportVerb: return "report_verb";
        case BiasType::WikiBias: return "wiki_bias";
        case BiasType::Modal: return "modal";
        case BiasType::Negation: return "negation";
        case BiasType::StrongSubj: return "strong_subj";
        case BiasType::WeakSubj: return "weak_subj";
        case BiasType::Positive: return "positive";
        case BiasType::Negative: return "negative";
    }
    return "factive";
}

BiasType bias_type_from_name(const std::string& name) {
    std::string n = to_lower_ascii(name);
    for (size_t i = 0; i < kBiasTypeCount; ++i) {
        if (n == bias_type_name(static_cast<BiasType>(i))) return static_cast<BiasType>(i);
    }
    throw InputError("unknown bias type: '" + name + "'");
}

namespace {

// File names under the lexicon directory, one per bias type.
const char* lexicon_file_name(BiasType t) { return bias_type_name(t); }

std::vector<std::string> tokenize_cue(const std::string& cue) {
    std::vector<std::string> parts;
    for (const std::string& p : split(cue, ' ')) {
        std::string t = trim(p);
        if (!t.empty()) parts.push_back(to_lower_ascii(t));
    }
    return parts;
}

}  // namespace

BiasLexicons BiasLexicons::load(const std::string& dir, bool expand_multiword) {
    BiasLexicons lex;
    for (size_t i = 0; i < kBiasTypeCount; ++i) {
        BiasType t = static_cast<BiasType>(i);
        std::string path = dir + "/" + lexicon_file_name(t) + ".txt";
        for (const std::string& line : read_line_list(path)) {
            lex.add_cue(t, line);
        }
        if (lex.cues_[i].empty()) {
            throw InputError("bias lexicon '" + path + "' is empty");
        }
    }
    lex.adverbs_.clear();
    for (const std::string& line : read_line_list(dir + "/strong_subj_adverbs.txt")) {
        lex.adverbs_.push_back(to_lower_ascii(line));
    }
    if (expand_multiword) lex.expand_multiword_cues();
    lex.rebuild_match_tables();
    return lex;
}

BiasLexicons BiasLexicons::from_entries(
    const std::vector<std::pair<BiasType, std::vector<std::string>>>& entries) {
    BiasLexicons lex;
    for (const auto& [t, cues] : entries) {
        for (const auto& cue : cues) lex.add_cue(t, cue);
    }
    lex.rebuild_match_tables();
    return lex;
}

void BiasLexicons::set_adverbs(std::vector<std::string> adverbs) {
    adverbs_ = std::move(adverbs);
    for (auto& a : adverbs_) a = to_lower_ascii(a);
}

void BiasLexicons::add_cue(BiasType t, const std::string& cue) {
    std::string c = to_lower_ascii(trim(cue));
    if (c.empty()) return;
    auto& list = cues_[static_cast<size_t>(t)];
    if (std::find(list.begin(), list.end(), c) == list.end()) list.push_back(c);
}

void BiasLexicons::expand_multiword_cues() {
    if (expanded_) return;
    expanded_ = true;

    static const BiasType verb_classes[] = {BiasType::Implicative, BiasType::Assertive,
                                            BiasType::Factive, BiasType::ReportVerb};
    static const char* pronouns[] = {"i", "we"};

    const std::vector<std::string> modals = cues_[static_cast<size_t>(BiasType::Modal)];
    for (BiasType vc : verb_classes) {
        // The base single-word verbs; iterate over a copy since we append.
        const std::vector<std::string> verbs = cues_[static_cast<size_t>(vc)];
        for (const std::string& verb : verbs) {
            if (verb.find(' ') != std::string::npos) continue;
            for (const char* p : pronouns) {
                add_cue(vc, std::string(p) + " " + verb);
                for (const std::string& adv : adverbs_) {
                    add_cue(vc, std::string(p) + " " + adv + " " + verb);
                }
                for (const std::string& modal : modals) {
                    if (modal.find(' ') != std::string::npos) continue;
                    add_cue(vc, std::string(p) + " " + modal + " " + verb);
                    for (const std::string& adv : adverbs_) {
                        add_cue(vc, std::string(p) + " " + modal + " " + adv + " " + verb);
                    }
                }
            }
        }
    }
    rebuild_match_tables();
}

void BiasLexicons::rebuild_match_tables() {
    for (size_t i = 0; i < kBiasTypeCount; ++i) {
        auto& table = match_tables_[i];
        table.clear();
        table.reserve(cues_[i].size());
        for (const std::string& cue : cues_[i]) table.push_back(tokenize_cue(cue));
        // Longest first so greedy matching prefers multi-word cues.
        std::stable_sort(table.begin(), table.end(),
                         [](const auto& a, const auto& b) {
                             if (a.size() != b.size()) return a.size() > b.size();
                             return a < b;
                         });
    }
}

const std::vector<std::string>& BiasLexicons::cues(BiasType t) const {
    return cues_[static_cast<size_t>(t)];
}

bool BiasLexicons::has_cue(BiasType t, const std::string& cue) const {
    const auto& list = cues_[static_cast<size_t>(t)];
    return std::find(list.begin(), list.end(), to_lower_ascii(cue)) != list.end();
}

std::uint64_t BiasLexicons::fingerprint() const {
    std::uint64_t h = fnv1a64("bias-lexicons");
    for (size_t i = 0; i < kBiasTypeCount; ++i) {
        std::vector<std::string> sorted = cues_[i];
        std::sort(sorted.begin(), sorted.end());
        for (const auto& c : sorted) {
            h = fnv1a64_combine(h, c);
            h = fnv1a64_combine(h, "\n");
        }
        h = fnv1a64_combine(h, "|");
    }
    return h;
}

int BiasLexicons::count_matches(BiasType t, const std::vector<std::string>& tokens) const {
    const auto& table = match_tables_[static_cast<size_t>(t)];
    if (table.empty() || tokens.empty()) return 0;
    std::vector<char> consumed(tokens.size(), 0);
    int matches = 0;
    // Longest cues first; a token feeds at most one match for this type.
    for (const auto& cue : table) {
        if (cue.empty() || cue.size() > tokens.size()) continue;
        for (size_t i = 0; i + cue.size() <= tokens.size(); ++i) {
            bool ok = true;
            for (size_t k = 0; k < cue.size(); ++k) {
                if (consumed[i + k] || tokens[i + k] != cue[k]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (size_t k = 0; k < cue.size(); ++k) consumed[i + k] = 1;
            ++matches;
            i += cue.size() - 1;
        }
    }
    return matches;
}

double bias_score(const BiasLexicons& lexicons, BiasType t, const TokenizedText& answer) {
    if (answer.tokens.empty()) return 0.0;
    std::vector<std::string> lower;
    lower.reserve(answer.tokens.size());
    for (const Token& tok : answer.tokens) lower.push_back(tok.lower);
    int matches = lexicons.count_matches(t, lower);
    return static_cast<double>(matches) / static_cast<double>(answer.tokens.size());
}

BiasVector bias_vector(const BiasLexicons& lexicons, const TokenizedText& answer) {
    BiasVector v{};
    for (size_t i = 0; i < kBiasTypeCount; ++i) {
        v[i] = bias_score(lexicons, static_cast<BiasType>(i), answer);
    }
    return v;
}

FeatureVector extract_linguistic(const BiasLexicons& lexicons, const TokenizedText& answer) {
    FeatureVector fv;
    BiasVector v = bias_vector(lexicons, answer);
    for (size_t i = 0; i < kBiasTypeCount; ++i) {
        fv.add(std::string("lex.") + bias_type_name(static_cast<BiasType>(i)),
               groups::kLinguistic, v[i]);
    }
    return fv;
}

}  // namespace qlfc
