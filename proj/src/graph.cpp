#include "ecosim/graph.hpp"

#include "ecosim/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace ecosim {

std::string_view to_string(NodeClass c) {
    switch (c) {
    case NodeClass::HateCore: return "HateCore";
    case NodeClass::VulnerableMainstream: return "VulnerableMainstream";
    case NodeClass::NewsSource: return "NewsSource";
    }
    return "?";
}

std::string_view to_string(LinkKind k) {
    switch (k) {
    case LinkKind::CoreToCore: return "CoreToCore";
    case LinkKind::CoreToMainstream: return "CoreToMainstream";
    case LinkKind::CoreToNews: return "CoreToNews";
    }
    return "?";
}

NodeClass parse_node_class(std::string_view s) {
    if (s == "HateCore") return NodeClass::HateCore;
    if (s == "VulnerableMainstream") return NodeClass::VulnerableMainstream;
    if (s == "NewsSource") return NodeClass::NewsSource;
    throw Error("unknown node class: " + std::string(s));
}

LinkKind parse_link_kind(std::string_view s) {
    if (s == "CoreToCore") return LinkKind::CoreToCore;
    if (s == "CoreToMainstream") return LinkKind::CoreToMainstream;
    if (s == "CoreToNews") return LinkKind::CoreToNews;
    throw Error("unknown link kind: " + std::string(s));
}

LinkKind kind_for_target(NodeClass target) {
    switch (target) {
    case NodeClass::HateCore: return LinkKind::CoreToCore;
    case NodeClass::VulnerableMainstream: return LinkKind::CoreToMainstream;
    case NodeClass::NewsSource: return LinkKind::CoreToNews;
    }
    return LinkKind::CoreToCore;
}

PlatformId::PlatformId(std::string_view name) {
    auto first = name.find_first_not_of(" \t\r\n");
    auto last = name.find_last_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        throw Error("platform name must be nonempty");
    }
    name_.reserve(last - first + 1);
    for (auto c : name.substr(first, last - first + 1)) {
        name_.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
}

// ---------------------------------------------------------------------------

EcosystemGraph::EcosystemGraph(std::vector<PlatformId> platforms, TimeRange range)
    : platforms_(std::move(platforms)), declared_range_(range) {
    range_declared_ = !(range == TimeRange{});
    auto sorted = platforms_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error("platform set contains duplicates");
    }
    if (platforms_.size() > std::numeric_limits<PlatformIndex>::max()) {
        throw Error("too many platforms");
    }
}

std::optional<PlatformIndex> EcosystemGraph::find_platform(const PlatformId& p) const {
    auto it = std::find(platforms_.begin(), platforms_.end(), p);
    if (it == platforms_.end()) return std::nullopt;
    return static_cast<PlatformIndex>(it - platforms_.begin());
}

NodeIndex EcosystemGraph::register_node(CommunityNode node) {
    if (sealed_) throw GraphSealed();
    auto platform = find_platform(node.platform);
    if (!platform) throw UnknownPlatform(node.platform.name());
    if (index_.contains(node.id)) throw DuplicateId(node.id);
    auto idx = static_cast<NodeIndex>(nodes_.size());
    index_.emplace(node.id, idx);
    nodes_.push_back(std::move(node));
    node_platform_.push_back(*platform);
    return idx;
}

void EcosystemGraph::append_event(const LinkEvent& e) {
    auto s = find(e.source);
    if (!s) throw UnknownEndpoint(e.source);
    auto t = find(e.target);
    if (!t) throw UnknownEndpoint(e.target);
    append_event(*s, *t, e.t, e.kind);
}

void EcosystemGraph::append_event(NodeIndex source, NodeIndex target, Timestamp t, LinkKind kind) {
    if (sealed_) throw GraphSealed();
    if (source >= nodes_.size()) throw UnknownEndpoint("#" + std::to_string(source));
    if (target >= nodes_.size()) throw UnknownEndpoint("#" + std::to_string(target));
    const auto& src = nodes_[source];
    const auto& dst = nodes_[target];
    if (src.klass != NodeClass::HateCore) throw SourceNotHateCore(src.id);
    if (kind_for_target(dst.klass) != kind) {
        throw KindMismatch(std::string(to_string(kind)) + " into " + std::string(to_string(dst.klass)) + " " +
                           dst.id);
    }
    if (range_declared_ && !declared_range_.contains(t)) {
        throw OutOfTimeRange(std::to_string(t));
    }
    events_.push_back(EventRecord{source, target, t, kind});
}

void EcosystemGraph::seal() {
    if (sealed_) return;
    std::stable_sort(events_.begin(), events_.end(),
                     [](const EventRecord& a, const EventRecord& b) { return a.t < b.t; });
    sealed_ = true;
}

std::size_t EcosystemGraph::count_class(NodeClass c) const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [c](const CommunityNode& n) { return n.klass == c; }));
}

std::optional<NodeIndex> EcosystemGraph::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeIndex EcosystemGraph::index_of(std::string_view id) const {
    auto idx = find(id);
    if (!idx) throw UnknownEndpoint(std::string(id));
    return *idx;
}

TimeRange EcosystemGraph::time_range() const {
    if (range_declared_) return declared_range_;
    if (events_.empty()) return TimeRange{0, 0};
    if (sealed_) return TimeRange{events_.front().t, events_.back().t};
    auto [lo, hi] = std::minmax_element(events_.begin(), events_.end(),
                                        [](const EventRecord& a, const EventRecord& b) { return a.t < b.t; });
    return TimeRange{lo->t, hi->t};
}

std::span<const EventRecord> EcosystemGraph::events_until(Timestamp as_of) const {
    if (!sealed_) throw GraphNotSealed();
    auto end = std::upper_bound(events_.begin(), events_.end(), as_of,
                                [](Timestamp t, const EventRecord& e) { return t < e.t; });
    return {events_.data(), static_cast<std::size_t>(end - events_.begin())};
}

Snapshot EcosystemGraph::snapshot_at(Timestamp as_of) const {
    return Snapshot(*this, as_of, events_until(as_of));
}

// ---------------------------------------------------------------------------

Snapshot::Snapshot(const EcosystemGraph& g, Timestamp as_of, std::span<const EventRecord> events)
    : graph_(&g), as_of_(as_of), events_(events) {
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    pairs.reserve(events.size());
    for (const auto& e : events) pairs.emplace_back(e.source, e.target);
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        edges_.push_back(WeightedEdge{pairs[i].first, pairs[i].second, j - i});
        i = j;
    }
}

std::uint64_t Snapshot::weight(NodeIndex source, NodeIndex target) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{source, target},
                               [](const WeightedEdge& e, const std::pair<NodeIndex, NodeIndex>& key) {
                                   return std::pair{e.source, e.target} < key;
                               });
    if (it == edges_.end() || it->source != source || it->target != target) return 0;
    return it->weight;
}

// ---------------------------------------------------------------------------

std::uint64_t PlatformAggregate::weight(std::size_t from, std::size_t to) const {
    for (const auto& e : edges) {
        if (e.from == from && e.to == to) return e.weight;
    }
    return 0;
}

std::uint64_t PlatformAggregate::total_weight() const {
    std::uint64_t sum = 0;
    for (const auto& e : edges) sum += e.weight;
    return sum;
}

PlatformAggregate aggregate_by_platform(const Snapshot& s) {
    const auto& g = s.graph();
    const std::size_t np = g.platforms().size();

    PlatformAggregate agg;
    for (const auto& p : g.platforms()) agg.labels.push_back(p.name());
    agg.mainstream_sink = np;
    agg.news_sink = np + 1;
    agg.labels.emplace_back("mainstream");
    agg.labels.emplace_back("news");
    agg.members.assign(np + 2, 0);

    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const auto& n = g.node(i);
        switch (n.klass) {
        case NodeClass::HateCore: agg.members[g.platform_of(i)] += n.members; break;
        case NodeClass::VulnerableMainstream: agg.members[agg.mainstream_sink] += n.members; break;
        case NodeClass::NewsSource: agg.members[agg.news_sink] += n.members; break;
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> acc;
    for (const auto& e : s.edges()) {
        std::size_t from = g.platform_of(e.source);
        std::size_t to = 0;
        switch (g.node(e.target).klass) {
        case NodeClass::HateCore: to = g.platform_of(e.target); break;
        case NodeClass::VulnerableMainstream: to = agg.mainstream_sink; break;
        case NodeClass::NewsSource: to = agg.news_sink; break;
        }
        acc[{from, to}] += e.weight;
    }
    for (const auto& [key, w] : acc) agg.edges.push_back({key.first, key.second, w});
    return agg;
}

} // namespace ecosim
