#include "dae/corpus.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace dae {

using json = nlohmann::ordered_json;

std::string label_to_string(Label l) { return l == Label::True ? "true" : "false"; }

Label label_from_string(const std::string& s) {
    if (s == "true") return Label::True;
    if (s == "false") return Label::False;
    throw UnknownLabel("\"" + s + "\" is not a label (expected \"true\" or \"false\")");
}

std::string gender_to_string(Gender g) { return g == Gender::Male ? "male" : "female"; }

std::string age_group_to_string(AgeGroup a) {
    switch (a) {
        case AgeGroup::Youth18To35: return "youth_18_35";
        case AgeGroup::Middle36To65: return "middle_36_65";
        default: return "elderly_65_plus";
    }
}

std::string education_to_string(Education e) {
    switch (e) {
        case Education::BelowBachelors: return "below_bachelors";
        case Education::Bachelors: return "bachelors";
        default: return "postgraduate";
    }
}

Gender gender_from_string(const std::string& s) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    throw UnknownLabel("bad gender \"" + s + "\"");
}

AgeGroup age_group_from_string(const std::string& s) {
    if (s == "youth_18_35") return AgeGroup::Youth18To35;
    if (s == "middle_36_65") return AgeGroup::Middle36To65;
    if (s == "elderly_65_plus") return AgeGroup::Elderly65Plus;
    throw UnknownLabel("bad age group \"" + s + "\"");
}

Education education_from_string(const std::string& s) {
    if (s == "below_bachelors") return Education::BelowBachelors;
    if (s == "bachelors") return Education::Bachelors;
    if (s == "postgraduate") return Education::Postgraduate;
    throw UnknownLabel("bad education \"" + s + "\"");
}

std::string DemographicProfile::key() const {
    return gender_to_string(gender) + "/" + age_group_to_string(age_group) + "/" +
           education_to_string(education);
}

// ---------------------------------------------------------------------------
// Line-oriented file access, gzip-transparent by extension.
// ---------------------------------------------------------------------------

namespace {

bool is_gzip_path(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::vector<std::string> lines;
    if (is_gzip_path(path)) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw IoError("cannot open " + path);
        std::string cur;
        char buf[1 << 14];
        int n;
        while ((n = gzread(f, buf, sizeof(buf))) > 0) {
            for (int i = 0; i < n; ++i) {
                if (buf[i] == '\n') {
                    lines.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(buf[i]);
                }
            }
        }
        bool bad = n < 0;
        gzclose(f);
        if (bad) throw IoError("gzip read failed for " + path);
        if (!cur.empty()) lines.push_back(cur);
    } else {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open " + path);
        std::string line;
        while (std::getline(f, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
    }
    return lines;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    if (is_gzip_path(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw IoError("cannot open " + path + " for writing");
        for (const std::string& line : lines) {
            if (gzwrite(f, line.data(), static_cast<unsigned>(line.size())) == 0 && !line.empty()) {
                gzclose(f);
                throw IoError("gzip write failed for " + path);
            }
            gzputc(f, '\n');
        }
        gzclose(f);
    } else {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + path + " for writing");
        for (const std::string& line : lines) f << line << '\n';
        if (!f) throw IoError("write failed for " + path);
    }
}

std::string where(std::size_t line_number, const std::string& id) {
    std::string w = "line " + std::to_string(line_number);
    if (!id.empty()) w += ", record \"" + id + "\"";
    return w;
}

json profile_to_json(const DemographicProfile& p) {
    json j;
    j["gender"] = gender_to_string(p.gender);
    j["age_group"] = age_group_to_string(p.age_group);
    j["education"] = education_to_string(p.education);
    return j;
}

DemographicProfile profile_from_json(const json& j, std::size_t line_number,
                                     const std::string& id) {
    for (const char* f : {"gender", "age_group", "education"})
        if (!j.contains(f) || !j[f].is_string())
            throw MissingField("profile." + std::string(f) + " at " + where(line_number, id));
    DemographicProfile p;
    p.gender = gender_from_string(j["gender"].get<std::string>());
    p.age_group = age_group_from_string(j["age_group"].get<std::string>());
    p.education = education_from_string(j["education"].get<std::string>());
    return p;
}

}  // namespace

NewsItem news_item_from_json_line(const std::string& line, std::size_t line_number) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw IoError("invalid JSON at line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!j.is_object()) throw IoError("line " + std::to_string(line_number) + " is not an object");

    NewsItem item;
    if (!j.contains("id") || !j["id"].is_string())
        throw MissingField("id at " + where(line_number, ""));
    item.id = j["id"].get<std::string>();

    if (!j.contains("text") || !j["text"].is_string())
        throw MissingField("text at " + where(line_number, item.id));
    item.text = j["text"].get<std::string>();
    if (trim(item.text).empty()) throw EmptyText("item text at " + where(line_number, item.id));

    if (j.contains("image") && !j["image"].is_null()) {
        if (!j["image"].is_string())
            throw MissingField("image must be string or null at " + where(line_number, item.id));
        item.image_ref = j["image"].get<std::string>();
    }

    if (j.contains("comments") && !j["comments"].is_null()) {
        if (!j["comments"].is_array())
            throw MissingField("comments must be an array at " + where(line_number, item.id));
        for (const json& cj : j["comments"]) {
            Comment c;
            if (cj.contains("id") && cj["id"].is_string()) c.id = cj["id"].get<std::string>();
            if (!cj.contains("text") || !cj["text"].is_string())
                throw MissingField("comment.text at " + where(line_number, item.id));
            c.text = cj["text"].get<std::string>();
            if (trim(c.text).empty())
                throw EmptyText("comment text at " + where(line_number, item.id));
            if (!cj.contains("source") || !cj["source"].is_string())
                throw MissingField("comment.source at " + where(line_number, item.id));
            std::string src = cj["source"].get<std::string>();
            if (src == "real") {
                c.source = CommentSource::Real;
            } else if (src == "generated") {
                c.source = CommentSource::Generated;
            } else {
                throw UnknownLabel("comment.source \"" + src + "\" at " + where(line_number, item.id));
            }
            if (c.source == CommentSource::Generated) {
                if (!cj.contains("profile") || cj["profile"].is_null())
                    throw MissingField("generated comment lacks profile at " +
                                       where(line_number, item.id));
                c.profile = profile_from_json(cj["profile"], line_number, item.id);
            }
            // a profile on a real comment is ignored: the model carries none
            if (cj.contains("language") && cj["language"].is_string())
                c.language = cj["language"].get<std::string>();
            item.comments.push_back(std::move(c));
        }
    }

    if (j.contains("label") && !j["label"].is_null()) {
        if (!j["label"].is_string())
            throw UnknownLabel("label must be string or null at " + where(line_number, item.id));
        try {
            item.label = label_from_string(j["label"].get<std::string>());
        } catch (const UnknownLabel& e) {
            throw UnknownLabel(std::string(e.what()) + " at " + where(line_number, item.id));
        }
    }

    if (j.contains("flags") && j["flags"].is_array())
        for (const json& fj : j["flags"])
            if (fj.is_string()) item.flags.push_back(fj.get<std::string>());

    return item;
}

std::string news_item_to_json_line(const NewsItem& item) {
    json j;
    j["id"] = item.id;
    j["text"] = item.text;
    j["image"] = item.image_ref ? json(*item.image_ref) : json(nullptr);
    json comments = json::array();
    for (const Comment& c : item.comments) {
        json cj;
        if (!c.id.empty()) cj["id"] = c.id;
        cj["text"] = c.text;
        cj["source"] = c.source == CommentSource::Real ? "real" : "generated";
        if (c.profile) cj["profile"] = profile_to_json(*c.profile);
        if (c.language) cj["language"] = *c.language;
        comments.push_back(std::move(cj));
    }
    j["comments"] = std::move(comments);
    j["label"] = item.label ? json(label_to_string(*item.label)) : json(nullptr);
    if (!item.flags.empty()) j["flags"] = item.flags;
    return j.dump();
}

std::vector<NewsItem> load_dataset(const std::string& path, DatasetFormat) {
    std::vector<std::string> lines = read_lines(path);
    std::vector<NewsItem> items;
    std::unordered_set<std::string> seen;
    std::size_t line_number = 0;
    for (const std::string& line : lines) {
        ++line_number;
        if (trim(line).empty()) continue;
        NewsItem item = news_item_from_json_line(line, line_number);
        if (!seen.insert(item.id).second)
            throw DuplicateId("id \"" + item.id + "\" at line " + std::to_string(line_number));
        items.push_back(std::move(item));
    }
    return items;
}

void save_dataset(const std::vector<NewsItem>& items, const std::string& path, DatasetFormat) {
    std::vector<std::string> lines;
    lines.reserve(items.size());
    for (const NewsItem& item : items) lines.push_back(news_item_to_json_line(item));
    write_lines(path, lines);
}

DatasetSplit split_dataset(const std::vector<NewsItem>& items, double ratio,
                           std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must be in (0, 1)");
    for (const NewsItem& item : items)
        if (!item.label) throw UnlabeledItem("item \"" + item.id + "\" has no label");

    // ids per label, sorted so the shuffle is input-order independent
    std::map<Label, std::vector<std::string>> by_label;
    for (const NewsItem& item : items) by_label[*item.label].push_back(item.id);
    for (auto& [label, ids] : by_label) std::sort(ids.begin(), ids.end());

    const std::size_t n = items.size();
    const std::size_t train_total =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));

    // largest-remainder apportionment of the train budget across labels
    struct Share {
        Label label;
        std::size_t base;
        double remainder;
        std::size_t available;
    };
    std::vector<Share> shares;
    std::size_t base_sum = 0;
    for (const auto& [label, ids] : by_label) {
        double exact = ratio * static_cast<double>(ids.size());
        std::size_t base = static_cast<std::size_t>(std::floor(exact));
        shares.push_back({label, base, exact - static_cast<double>(base), ids.size()});
        base_sum += base;
    }
    std::size_t extra = train_total > base_sum ? train_total - base_sum : 0;
    std::stable_sort(shares.begin(), shares.end(),
                     [](const Share& a, const Share& b) { return a.remainder > b.remainder; });
    for (Share& s : shares) {
        if (extra > 0 && s.base < s.available) {
            ++s.base;
            --extra;
        }
    }
    // label order is fixed (map order) so the rng stream is reproducible
    std::map<Label, std::size_t> train_count;
    for (const Share& s : shares) train_count[s.label] = std::min(s.base, s.available);

    DatasetSplit split;
    split.seed = seed;
    split.ratio = ratio;
    Rng rng(mix_seed(seed, "dataset-split"));
    for (auto& [label, ids] : by_label) {
        rng.shuffle(ids);
        std::size_t k = train_count[label];
        for (std::size_t i = 0; i < ids.size(); ++i)
            (i < k ? split.train : split.test).push_back(ids[i]);
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

NewsItem cap_real_comments(NewsItem item, int cap) {
    if (cap < 1) throw ConfigError("real-comment cap must be >= 1");
    std::vector<Comment> kept;
    kept.reserve(item.comments.size());
    int real_seen = 0;
    for (Comment& c : item.comments) {
        if (c.source == CommentSource::Real) {
            if (real_seen >= cap) continue;
            ++real_seen;
        }
        kept.push_back(std::move(c));
    }
    item.comments = std::move(kept);
    return item;
}

}  // namespace dae
