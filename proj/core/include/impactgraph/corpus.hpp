#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace impactgraph {

enum class PostLabel { Informative, NonInformative, Unlabeled };

std::string_view to_string(PostLabel label);
/// Accepts the spellings used by crisis datasets ("not_informative",
/// "non-informative", ...). Empty text maps to Unlabeled.
std::optional<PostLabel> parse_label(std::string_view text);

struct Post {
    std::string post_id;
    std::string text;
    PostLabel label = PostLabel::Unlabeled;

    bool operator==(const Post&) const = default;
};

struct PostCorpus {
    std::string event_name;
    std::vector<Post> posts;

    std::size_t size() const noexcept { return posts.size(); }
    bool operator==(const PostCorpus&) const = default;
};

struct PostBatch {
    std::size_t index = 0;
    std::vector<Post> posts;
};

enum class CorpusFormat { Tsv, Jsonl };

/// Guesses from the extension: .jsonl/.json -> Jsonl, otherwise Tsv.
CorpusFormat format_for(const std::filesystem::path& path);

/// TSV header needs post_id and text (tweet_id / tweet_text accepted);
/// label is optional (text_info accepted). JSONL rows need "post_id" and
/// "text"; numeric ids are converted to their decimal text.
/// Throws ParseError or MissingColumn.
PostCorpus parse_corpus(std::string_view contents, CorpusFormat format, std::string event_name = {});
PostCorpus load_corpus(const std::filesystem::path& source, CorpusFormat format);

/// First occurrence of each post_id wins; order preserved.
PostCorpus dedupe_posts(const PostCorpus& corpus);

PostCorpus filter_by_label(const PostCorpus& corpus, PostLabel keep);

/// Seeded, platform-independent permutation of the posts.
PostCorpus shuffle_posts(const PostCorpus& corpus, std::uint64_t seed);

/// Consecutive slices of `size` posts; the last may be short. Throws
/// InvalidBatchSize when size < 1.
std::vector<PostBatch> batch_posts(const PostCorpus& corpus, std::size_t size);

struct CorpusStats {
    std::size_t total = 0;
    std::size_t distinct_ids = 0;
    std::map<PostLabel, std::size_t> per_label;
};

CorpusStats corpus_stats(const PostCorpus& corpus);

}  // namespace impactgraph
