#include "dae/lexicons.hpp"

namespace dae {

const std::vector<std::string>& default_emotion_words() {
    static const std::vector<std::string> words = {
        "afraid",     "alarmed",   "angry",     "anger",     "anxious",   "anxiety",
        "appalled",   "ashamed",   "betrayed",  "calm",      "concerned", "devastated",
        "disgusted",  "distressed","disturbed", "dread",     "fear",      "fearful",
        "frightened", "furious",   "grief",     "happy",     "heartbroken","hope",
        "hopeful",    "horrified", "hurt",      "nervous",   "outraged",  "panic",
        "panicked",   "relieved",  "sad",       "saddened",  "scared",    "scares",
        "shaken",     "shocked",   "shocking",  "sickened",  "sorrow",    "terrified",
        "terrifying", "uneasy",    "unsettled", "upset",     "upsetting", "worried",
        "worries",    "worry",     "worrying",
    };
    return words;
}

const std::vector<std::string>& default_cognitive_words() {
    static const std::vector<std::string> words = {
        "accurate",   "believable", "check",      "checked",   "claim",     "claims",
        "credible",   "credibility","debunk",     "debunked",  "doubt",     "doubtful",
        "doubts",     "evidence",   "exaggerated","fabricated", "fact",     "facts",
        "fake",       "false",      "inconsistent","misleading","proof",    "prove",
        "question",   "questionable","reliable",  "skeptical", "source",    "sources",
        "suspicious", "true",       "trust",      "trustworthy","unverified","verify",
        "verified",   "hoax",
    };
    return words;
}

const std::vector<std::string>& default_offensive_words() {
    static const std::vector<std::string> words = {
        "idiot", "idiots", "idiotic", "moron", "morons", "moronic",
        "stupid", "dumb", "dumbass", "loser", "losers", "scum",
        "trash", "clown", "clowns", "sheeple", "braindead", "pathetic",
    };
    return words;
}

}  // namespace dae
