#ifndef DAE_CORPUS_HPP
#define DAE_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dae/common.hpp"

namespace dae {

// ---------------------------------------------------------------------------
// Data model for one multimodal news record: body text, optional image
// reference, an ordered comment list and a binary veracity label.
// ---------------------------------------------------------------------------

enum class Label { True, False };

std::string label_to_string(Label l);
Label label_from_string(const std::string& s);  // throws UnknownLabel

enum class Gender { Male, Female };
enum class AgeGroup { Youth18To35, Middle36To65, Elderly65Plus };
enum class Education { BelowBachelors, Bachelors, Postgraduate };

struct DemographicProfile {
    Gender gender = Gender::Male;
    AgeGroup age_group = AgeGroup::Youth18To35;
    Education education = Education::BelowBachelors;

    // canonical "male/youth_18_35/bachelors" form, used in ids and prompts
    std::string key() const;

    bool operator==(const DemographicProfile&) const = default;
};

std::string gender_to_string(Gender g);
std::string age_group_to_string(AgeGroup a);
std::string education_to_string(Education e);
Gender gender_from_string(const std::string& s);
AgeGroup age_group_from_string(const std::string& s);
Education education_from_string(const std::string& s);

enum class CommentSource { Real, Generated };

struct Comment {
    std::string id;  // may be empty for real comments loaded without one
    std::string text;
    CommentSource source = CommentSource::Real;
    std::optional<DemographicProfile> profile;  // required iff Generated
    std::optional<std::string> language;        // BCP-47 tag when known
};

struct NewsItem {
    std::string id;
    std::string text;
    std::optional<std::string> image_ref;
    std::vector<Comment> comments;
    std::optional<Label> label;
    std::vector<std::string> flags;  // e.g. "volume_unsatisfied"
};

struct DatasetSplit {
    std::vector<std::string> train;  // item ids
    std::vector<std::string> test;
    std::uint64_t seed = 0;
    double ratio = 0.8;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

enum class DatasetFormat { Jsonl };

// One JSON object per line; ".jsonl.gz" paths are read/written gzip-compressed.
// Malformed lines raise MissingField / DuplicateId / EmptyText / UnknownLabel
// with the line number and record id in the message.
std::vector<NewsItem> load_dataset(const std::string& path,
                                   DatasetFormat format = DatasetFormat::Jsonl);
void save_dataset(const std::vector<NewsItem>& items, const std::string& path,
                  DatasetFormat format = DatasetFormat::Jsonl);

std::string news_item_to_json_line(const NewsItem& item);
NewsItem news_item_from_json_line(const std::string& line, std::size_t line_number);

// Deterministic stratified split. Items are sorted by id before the seeded
// shuffle, so membership does not depend on input order. |train| equals
// round(ratio * N); per-label counts follow largest-remainder apportionment.
DatasetSplit split_dataset(const std::vector<NewsItem>& items, double ratio,
                           std::uint64_t seed);

// Keeps the first `cap` Real comments in stored order; Generated comments are
// untouched.
NewsItem cap_real_comments(NewsItem item, int cap);

}  // namespace dae

#endif
