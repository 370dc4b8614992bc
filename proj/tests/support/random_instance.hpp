#pragma once

// Random small ecosystems for oracle comparisons. Everything is kept in
// string-keyed form so the oracles never touch library indices.

#include "ecosim/graph.hpp"
#include "ecosim/ingest.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testkit {

struct RawNode {
    std::string id;
    std::string platform;
    ecosim::NodeClass klass;
    std::uint64_t members;
};

struct RawEvent {
    std::string source;
    std::string target;
    ecosim::Timestamp t;
    ecosim::LinkKind kind;
};

struct RawInstance {
    std::vector<std::string> platforms;
    std::vector<RawNode> nodes;
    std::vector<RawEvent> events;  // insertion order, not sorted
    std::vector<ecosim::JoinEvent> joins;
    ecosim::BanStatusMap bans;
    ecosim::Timestamp t_start = 0;
    ecosim::Timestamp t_end = 0;
};

inline RawInstance random_instance(std::uint64_t seed, std::size_t max_nodes = 200, std::size_t max_events = 5000) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    RawInstance r;
    const auto np = uniform(1, 6);
    for (std::size_t p = 0; p < np; ++p) r.platforms.push_back("p" + std::to_string(p));

    const auto n_nodes = uniform(2, max_nodes);
    const auto n_core = uniform(1, n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        ecosim::NodeClass k = ecosim::NodeClass::HateCore;
        if (i >= n_core) k = uniform(0, 4) == 0 ? ecosim::NodeClass::NewsSource : ecosim::NodeClass::VulnerableMainstream;
        r.nodes.push_back({"n" + std::to_string(i), r.platforms[uniform(0, np - 1)], k, uniform(0, 5000)});
    }

    // Short spans with coarse times so ties and window edges are common.
    r.t_start = 1'000'000;
    const auto span_days = uniform(1, 60);
    r.t_end = r.t_start + static_cast<ecosim::Timestamp>(span_days) * ecosim::kSecondsPerDay;
    const auto n_events = uniform(0, max_events);
    const auto granularity = static_cast<ecosim::Timestamp>(uniform(0, 1) ? 3600 : 1);
    for (std::size_t e = 0; e < n_events; ++e) {
        const auto& src = r.nodes[uniform(0, n_core - 1)];
        const auto& dst = r.nodes[uniform(0, n_nodes - 1)];
        auto t = r.t_start + static_cast<ecosim::Timestamp>(uniform(0, static_cast<std::size_t>(r.t_end - r.t_start)));
        t -= (t - r.t_start) % granularity;
        r.events.push_back({src.id, dst.id, t, ecosim::kind_for_target(dst.klass)});
    }

    const auto n_people = uniform(1, 60);
    for (std::size_t person = 0; person < n_people; ++person) {
        std::vector<std::size_t> order(n_core);
        for (std::size_t i = 0; i < n_core; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        const auto len = uniform(1, std::min<std::size_t>(n_core, 40));
        for (std::size_t k = 0; k < len; ++k) {
            const auto day = static_cast<ecosim::Timestamp>(uniform(0, 400));
            r.joins.push_back({person * 7 + 3, r.nodes[order[k]].id, r.t_start + day * ecosim::kSecondsPerDay});
        }
    }
    for (std::size_t i = 0; i < n_core; ++i) {
        if (uniform(0, 2) == 0) r.bans[r.nodes[i].id] = ecosim::BanStatus::Banned;
    }
    return r;
}

inline ecosim::EcosystemGraph build_graph(const RawInstance& r) {
    std::vector<ecosim::PlatformId> platforms;
    for (const auto& p : r.platforms) platforms.emplace_back(p);
    ecosim::EcosystemGraph g(platforms, ecosim::TimeRange{r.t_start, r.t_end});
    for (const auto& n : r.nodes) g.register_node({n.id, ecosim::PlatformId(n.platform), n.klass, n.members, r.t_start});
    for (const auto& e : r.events) g.append_event(ecosim::LinkEvent{e.source, e.target, e.t, e.kind});
    g.seal();
    return g;
}

} // namespace testkit
