#pragma once

#include <functional>
#include <string>

#include "qlfc/features.hpp"
#include "qlfc/textproc.hpp"

namespace qlfc {

// Tests whether a lowercased word token is in the reference embedding
// vocabulary; empty function means no vocabulary is configured and the OOV
// dimension stays 0.
using VocabularyCheck = std::function<bool(const std::string&)>;

// Surface credibility cues, 25 dimensions:
//   urls, images, emails, phones                        (4)
//   tokens, sentences, avg tokens/sentence              (3)
//   1st/2nd/3rd person pronouns                         (3)
//   positive/negative smileys                           (2)
//   single/double/triple '!' runs, same for '?'         (6)
//   interrogative sentences                             (1)
//   noun/verb/adjective/adverb/pronoun counts           (5)
//   out-of-vocabulary word tokens                       (1)
// Runs of four or more repeated marks count as triple. Image references are
// urls ending in .jpg/.jpeg/.png/.gif, bare filenames with those extensions
// (tokenized as name/dot/extension), or [img] markup.
FeatureVector extract_credibility(const TokenizedText& answer,
                                  const SmileyLists& smileys,
                                  const VocabularyCheck& in_vocabulary);

inline constexpr std::size_t kCredibilityDims = 25;

}  // namespace qlfc
