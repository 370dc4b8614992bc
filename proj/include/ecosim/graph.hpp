#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ecosim {

// Integer seconds since the Unix epoch.
using Timestamp = std::int64_t;
using NodeIndex = std::uint32_t;
using PlatformIndex = std::uint16_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

enum class NodeClass : std::uint8_t { HateCore, VulnerableMainstream, NewsSource };
enum class LinkKind : std::uint8_t { CoreToCore, CoreToMainstream, CoreToNews };

inline constexpr std::size_t kLinkKindCount = 3;

std::string_view to_string(NodeClass c);
std::string_view to_string(LinkKind k);
NodeClass parse_node_class(std::string_view s);
LinkKind parse_link_kind(std::string_view s);

// The link kind implied by a target's class.
LinkKind kind_for_target(NodeClass target);

// Case-normalized platform name ("Telegram " -> "telegram").
class PlatformId {
public:
    explicit PlatformId(std::string_view name);

    const std::string& name() const noexcept { return name_; }
    friend bool operator==(const PlatformId&, const PlatformId&) = default;
    friend auto operator<=>(const PlatformId&, const PlatformId&) = default;

private:
    std::string name_;
};

struct CommunityNode {
    std::string id;
    PlatformId platform;
    NodeClass klass = NodeClass::HateCore;
    std::uint64_t members = 0;
    Timestamp created_at = 0;
};

// Link event as it appears in files: endpoints by id.
struct LinkEvent {
    std::string source;
    std::string target;
    Timestamp t = 0;
    LinkKind kind = LinkKind::CoreToCore;
};

// Link event as stored in the log: endpoints by registry index.
struct EventRecord {
    NodeIndex source;
    NodeIndex target;
    Timestamp t;
    LinkKind kind;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct TimeRange {
    Timestamp start = std::numeric_limits<Timestamp>::min();
    Timestamp end = std::numeric_limits<Timestamp>::max();

    bool contains(Timestamp t) const noexcept { return t >= start && t <= end; }
    friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

struct WeightedEdge {
    NodeIndex source;
    NodeIndex target;
    std::uint64_t weight;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

class EcosystemGraph;

// Immutable view of all events with t <= as_of. Does not own the graph;
// the graph must outlive the snapshot.
class Snapshot {
public:
    Timestamp as_of() const noexcept { return as_of_; }
    const EcosystemGraph& graph() const noexcept { return *graph_; }
    std::span<const EventRecord> events() const noexcept { return events_; }
    std::size_t event_count() const noexcept { return events_.size(); }

    // Distinct (source, target) pairs with event counts, sorted by (source, target).
    std::span<const WeightedEdge> edges() const noexcept { return edges_; }
    std::uint64_t weight(NodeIndex source, NodeIndex target) const;

private:
    friend class EcosystemGraph;
    Snapshot(const EcosystemGraph& g, Timestamp as_of, std::span<const EventRecord> events);

    const EcosystemGraph* graph_;
    Timestamp as_of_;
    std::span<const EventRecord> events_;
    std::vector<WeightedEdge> edges_;
};

// Node registry plus append-only link-event log. Events may arrive in any
// order; seal() sorts them (stable on ties) and freezes the log.
class EcosystemGraph {
public:
    explicit EcosystemGraph(std::vector<PlatformId> platforms, TimeRange range = {});

    NodeIndex register_node(CommunityNode node);
    void append_event(const LinkEvent& e);
    void append_event(NodeIndex source, NodeIndex target, Timestamp t, LinkKind kind);
    void seal();
    bool sealed() const noexcept { return sealed_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t count_class(NodeClass c) const;
    const CommunityNode& node(NodeIndex i) const { return nodes_.at(i); }
    std::span<const CommunityNode> nodes() const noexcept { return nodes_; }
    std::optional<NodeIndex> find(std::string_view id) const;
    NodeIndex index_of(std::string_view id) const;

    const std::vector<PlatformId>& platforms() const noexcept { return platforms_; }
    PlatformIndex platform_of(NodeIndex i) const { return node_platform_.at(i); }
    std::optional<PlatformIndex> find_platform(const PlatformId& p) const;

    // Declared range if one was given, otherwise [min t, max t] of the sealed log.
    TimeRange time_range() const;

    std::span<const EventRecord> events() const noexcept { return events_; }
    // Prefix of the sealed log with t <= as_of.
    std::span<const EventRecord> events_until(Timestamp as_of) const;

    Snapshot snapshot_at(Timestamp as_of) const;

private:
    std::vector<PlatformId> platforms_;
    TimeRange declared_range_;
    bool range_declared_ = false;
    bool sealed_ = false;
    std::vector<CommunityNode> nodes_;
    std::vector<PlatformIndex> node_platform_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<EventRecord> events_;
};

// Platform-level aggregate: one supernode per platform (hate-core only) plus
// one mainstream sink and one news sink.
struct PlatformAggregate {
    std::vector<std::string> labels;       // platform names, then "mainstream", "news"
    std::vector<std::uint64_t> members;    // summed members per supernode
    std::size_t mainstream_sink = 0;
    std::size_t news_sink = 0;

    struct Edge {
        std::size_t from;
        std::size_t to;
        std::uint64_t weight;
        friend bool operator==(const Edge&, const Edge&) = default;
    };
    std::vector<Edge> edges;               // sorted by (from, to)

    std::uint64_t weight(std::size_t from, std::size_t to) const;
    std::uint64_t total_weight() const;
};

PlatformAggregate aggregate_by_platform(const Snapshot& s);

} // namespace ecosim
