#ifndef DAE_LEXICONS_HPP
#define DAE_LEXICONS_HPP

#include <string>
#include <vector>

namespace dae {

// Built-in word lists for the rule-based comment filter. Each can be replaced
// by a one-word-per-line file via FilterConfig. Tokens are matched lowercase.

const std::vector<std::string>& default_emotion_words();
const std::vector<std::string>& default_cognitive_words();
const std::vector<std::string>& default_offensive_words();

}  // namespace dae

#endif
