#pragma once

#include "ecosim/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ecosim {

enum class PostFlag : std::uint8_t {
    HateSpeech = 1 << 0,
    FascistPromotion = 1 << 1,
};

enum class HateCategory : std::uint8_t { Antisemitic, Islamophobic, Other };

std::string_view to_string(HateCategory c);
HateCategory parse_category(std::string_view s);

struct PostRecord {
    std::string community;
    Timestamp t = 0;
    std::uint8_t flags = 0;  // bitwise OR of PostFlag
    HateCategory category = HateCategory::Other;

    bool flagged() const noexcept { return flags != 0; }
    bool has(PostFlag f) const noexcept { return (flags & static_cast<std::uint8_t>(f)) != 0; }
    friend bool operator==(const PostRecord&, const PostRecord&) = default;
};

struct JoinEvent {
    std::uint64_t individual = 0;  // pseudonymous, synthetic
    std::string community;
    Timestamp t = 0;
    friend bool operator==(const JoinEvent&, const JoinEvent&) = default;
};

enum class BanStatus : std::uint8_t { Active, Banned };

std::string_view to_string(BanStatus b);
BanStatus parse_ban_status(std::string_view s);

using BanStatusMap = std::map<std::string, BanStatus, std::less<>>;

struct Dataset {
    EcosystemGraph graph;
    std::vector<JoinEvent> joins;
    std::vector<PostRecord> posts;
    BanStatusMap bans;
};

// Dataset directory layout. dataset.json and bans.jsonl are optional.
struct DatasetFiles {
    static constexpr const char* kMeta = "dataset.json";
    static constexpr const char* kNodes = "nodes.jsonl";
    static constexpr const char* kEvents = "events.jsonl";
    static constexpr const char* kJoins = "joins.jsonl";
    static constexpr const char* kPosts = "posts.jsonl";
    static constexpr const char* kBans = "bans.jsonl";
};

// Loads and seals a dataset directory. Throws ParseError on malformed JSON
// (with line number) and IntegrityError listing up to 20 offending lines.
Dataset load_dataset(const std::filesystem::path& dir);

void save_dataset(const Dataset& ds, const std::filesystem::path& dir);

enum class CommunityLabel : std::uint8_t { NotHate, Hate };

inline constexpr std::size_t kLabelWindow = 20;
inline constexpr std::size_t kLabelThreshold = 2;

// Hate iff at least 2 of the (at most) 20 most recent posts carry a flag.
// Posts must be ordered most-recent-first; fewer than 20 posts are all used.
CommunityLabel classify_community(std::span<const PostRecord> most_recent_first);

// Applies classify_community to every community that has posts.
std::map<std::string, CommunityLabel> classify_all(std::span<const PostRecord> posts);

// Sum over platforms of (mean hate-community members x hate-community count).
std::uint64_t estimate_core_size(const EcosystemGraph& g);

} // namespace ecosim
