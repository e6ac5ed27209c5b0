#include "impactgraph/corpus.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/rng.hpp"
#include "impactgraph/text.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace impactgraph {

using nlohmann::json;

std::string_view to_string(PostLabel label) {
    switch (label) {
        case PostLabel::Informative: return "informative";
        case PostLabel::NonInformative: return "non_informative";
        case PostLabel::Unlabeled: return "unlabeled";
    }
    return "?";
}

std::optional<PostLabel> parse_label(std::string_view text) {
    auto key = normalize_name(text);
    std::replace(key.begin(), key.end(), '-', '_');
    std::replace(key.begin(), key.end(), ' ', '_');
    if (key.empty() || key == "unlabeled") return PostLabel::Unlabeled;
    if (key == "informative") return PostLabel::Informative;
    if (key == "non_informative" || key == "not_informative" || key == "noninformative")
        return PostLabel::NonInformative;
    return std::nullopt;
}

CorpusFormat format_for(const std::filesystem::path& path) {
    const auto ext = to_lower_ascii(path.extension().string());
    return (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") ? CorpusFormat::Jsonl : CorpusFormat::Tsv;
}

namespace {

std::vector<std::string> lines_of(std::string_view contents) {
    auto lines = split(contents, '\n');
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    }
    return lines;
}

Post make_post(std::size_t line, std::string id, std::string text, std::string_view label_text) {
    id = collapse_whitespace(id);
    if (id.empty()) throw ParseError(line, "empty post_id");
    if (collapse_whitespace(text).empty()) throw ParseError(line, "empty text");
    const auto label = parse_label(label_text);
    if (!label) throw ParseError(line, "unknown label '" + std::string(label_text) + "'");
    return Post{std::move(id), std::move(text), *label};
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::initializer_list<std::string_view> names) {
    for (auto name : names) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (normalize_name(header[i]) == name) return i;
        }
    }
    return std::nullopt;
}

PostCorpus parse_tsv(std::string_view contents) {
    const auto lines = lines_of(contents);
    if (lines.empty() || lines.front().empty()) throw MissingColumn("post_id");
    const auto header = split(lines.front(), '\t');
    const auto id_col = find_column(header, {"post_id", "tweet_id", "id"});
    if (!id_col) throw MissingColumn("post_id");
    const auto text_col = find_column(header, {"text", "tweet_text"});
    if (!text_col) throw MissingColumn("text");
    const auto label_col = find_column(header, {"label", "text_info", "informativeness"});

    PostCorpus corpus;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split(lines[i], '\t');
        if (fields.size() != header.size()) {
            throw ParseError(i + 1, "expected " + std::to_string(header.size()) + " fields, found " +
                                        std::to_string(fields.size()));
        }
        corpus.posts.push_back(
            make_post(i + 1, fields[*id_col], fields[*text_col], label_col ? fields[*label_col] : ""));
    }
    return corpus;
}

std::string id_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    return {};
}

PostCorpus parse_jsonl(std::string_view contents) {
    const auto lines = lines_of(contents);
    PostCorpus corpus;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (collapse_whitespace(lines[i]).empty()) continue;
        json row;
        try {
            row = json::parse(lines[i]);
        } catch (const json::parse_error& e) {
            throw ParseError(i + 1, e.what());
        }
        if (!row.is_object()) throw ParseError(i + 1, "row is not a JSON object");
        if (!row.contains("post_id")) throw ParseError(i + 1, "missing post_id");
        if (!row.contains("text") || !row["text"].is_string()) throw ParseError(i + 1, "missing text");
        std::string label;
        if (row.contains("label") && row["label"].is_string()) label = row["label"].get<std::string>();
        corpus.posts.push_back(make_post(i + 1, id_text(row["post_id"]), row["text"].get<std::string>(), label));
    }
    return corpus;
}

}  // namespace

PostCorpus parse_corpus(std::string_view contents, CorpusFormat format, std::string event_name) {
    auto corpus = format == CorpusFormat::Tsv ? parse_tsv(contents) : parse_jsonl(contents);
    corpus.event_name = std::move(event_name);
    return corpus;
}

PostCorpus load_corpus(const std::filesystem::path& source, CorpusFormat format) {
    return parse_corpus(read_file(source), format, source.stem().string());
}

PostCorpus dedupe_posts(const PostCorpus& corpus) {
    PostCorpus out{corpus.event_name, {}};
    std::unordered_set<std::string> seen;
    for (const auto& post : corpus.posts) {
        if (seen.insert(post.post_id).second) out.posts.push_back(post);
    }
    return out;
}

PostCorpus filter_by_label(const PostCorpus& corpus, PostLabel keep) {
    PostCorpus out{corpus.event_name, {}};
    std::copy_if(corpus.posts.begin(), corpus.posts.end(), std::back_inserter(out.posts),
                 [keep](const Post& p) { return p.label == keep; });
    return out;
}

PostCorpus shuffle_posts(const PostCorpus& corpus, std::uint64_t seed) {
    PostCorpus out = corpus;
    PortableRng rng(seed);
    rng.shuffle(std::span<Post>(out.posts));
    return out;
}

std::vector<PostBatch> batch_posts(const PostCorpus& corpus, std::size_t size) {
    if (size < 1) throw InvalidBatchSize();
    std::vector<PostBatch> batches;
    batches.reserve((corpus.posts.size() + size - 1) / size);
    for (std::size_t start = 0; start < corpus.posts.size(); start += size) {
        const auto end = std::min(start + size, corpus.posts.size());
        batches.push_back(PostBatch{batches.size(), {corpus.posts.begin() + static_cast<std::ptrdiff_t>(start),
                                                     corpus.posts.begin() + static_cast<std::ptrdiff_t>(end)}});
    }
    return batches;
}

CorpusStats corpus_stats(const PostCorpus& corpus) {
    CorpusStats stats;
    stats.total = corpus.posts.size();
    std::unordered_set<std::string_view> ids;
    for (const auto& post : corpus.posts) {
        ids.insert(post.post_id);
        ++stats.per_label[post.label];
    }
    stats.distinct_ids = ids.size();
    return stats;
}

}  // namespace impactgraph
