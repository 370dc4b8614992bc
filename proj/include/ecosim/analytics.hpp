#pragma once

#include "ecosim/graph.hpp"
#include "ecosim/ingest.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ecosim {

// ---- components -----------------------------------------------------------

struct Component {
    std::vector<NodeIndex> members;  // ascending
    std::size_t size() const noexcept { return members.size(); }
    friend bool operator==(const Component&, const Component&) = default;
};

struct ComponentReport {
    Timestamp as_of = 0;
    std::vector<Component> components;  // by size desc, then smallest member asc
    std::vector<std::size_t> largest_sizes;
    std::size_t core_nodes = 0;         // hate-core nodes in the graph, isolated or not
};

// Weakly connected components of the hate-core subgraph (core-core links,
// undirected) at `as_of`. Isolated core nodes are omitted.
ComponentReport components_at(const EcosystemGraph& g, Timestamp as_of);
std::vector<ComponentReport> components_over_time(const EcosystemGraph& g, std::span<const Timestamp> sample_times);

// ---- reach ----------------------------------------------------------------

struct Reach {
    std::uint64_t communities = 0;
    std::uint64_t members = 0;  // summed memberships; individuals in several communities count several times
    friend bool operator==(const Reach&, const Reach&) = default;
};

Reach one_click_reach(const EcosystemGraph& g, Timestamp as_of);

// ---- growth ---------------------------------------------------------------

inline constexpr double kSteadyRateR2 = 0.98;

struct KindGrowth {
    LinkKind kind = LinkKind::CoreToCore;
    std::vector<std::uint64_t> cumulative;  // count at the end of each bin
    std::uint64_t total = 0;
    double slope = 0.0;      // events per bin, least squares on cumulative
    double intercept = 0.0;
    double r_squared = 0.0;
    double mean_rate = 0.0;  // total / (time range in bins)
    bool steady = false;     // r_squared >= kSteadyRateR2
};

struct LinkGrowth {
    Timestamp t0 = 0;
    Timestamp bin_width = kSecondsPerDay;
    std::size_t n_bins = 0;
    std::array<KindGrowth, kLinkKindCount> kinds;
};

LinkGrowth link_growth(const EcosystemGraph& g, Timestamp bin_width = kSecondsPerDay);

// ---- platform connectivity ------------------------------------------------

struct PlatformDegree {
    std::string platform;
    std::uint64_t out_weight = 0;
    std::uint64_t in_weight = 0;
    std::uint64_t total() const noexcept { return out_weight + in_weight; }
};

struct PlatformConnectivity {
    std::vector<PlatformDegree> degrees;  // declared platform order
    double max_total = 0.0;
    double median_total = 0.0;
    double equivalence_ratio = 1.0;       // max / median; 1 when max == median
};

PlatformConnectivity platform_connectivity(const EcosystemGraph& g, Timestamp as_of);

// ---- bypass motifs --------------------------------------------------------

inline constexpr double kDefaultBypassWindowDays = 7.0;

// A -> B leaves A's platform, then B -> C lands back on A's platform within
// the window (C may be A).
struct BypassMotif {
    NodeIndex a;
    NodeIndex b;
    NodeIndex return_target;
    Timestamp t1;
    Timestamp t2;
    friend bool operator==(const BypassMotif&, const BypassMotif&) = default;
    friend auto operator<=>(const BypassMotif&, const BypassMotif&) = default;
};

// All ordered event pairs (e1, e2), e1 != e2, with t1 <= t2 <= t1 + window.
// Result sorted. Only events with t <= as_of are considered.
std::vector<BypassMotif> detect_bypasses(const EcosystemGraph& g, double window_days = kDefaultBypassWindowDays,
                                         std::optional<Timestamp> as_of = std::nullopt);
std::uint64_t count_bypasses(const EcosystemGraph& g, double window_days = kDefaultBypassWindowDays,
                             std::optional<Timestamp> as_of = std::nullopt);

// ---- shock response -------------------------------------------------------

struct CategorySeries {
    HateCategory category = HateCategory::Other;
    Timestamp t0 = 0;
    Timestamp bin_width = 60;
    std::vector<std::uint64_t> counts;

    Timestamp end() const noexcept { return t0 + bin_width * static_cast<Timestamp>(counts.size()); }
};

// Bins posts of one category over [t0, t1) into fixed-width bins.
CategorySeries bin_posts(std::span<const PostRecord> posts, HateCategory category, Timestamp t0, Timestamp t1,
                         Timestamp bin_width);

enum class ShockVerdict : std::uint8_t { None, Minor, Huge };
std::string_view to_string(ShockVerdict v);

inline constexpr double kHugeRatio = 3.0;
inline constexpr double kMinorRatio = 1.5;
inline constexpr double kLatencySigmas = 4.0;

struct ShockReport {
    Timestamp event_t = 0;
    HateCategory category = HateCategory::Other;
    double pre_rate = 0.0;
    double post_rate = 0.0;
    double pre_sigma = 0.0;
    double ratio = 1.0;                         // +inf when pre_rate == 0 < post_rate
    std::optional<std::size_t> latency_bins;    // first post bin above pre_rate + 4 sigma
    ShockVerdict verdict = ShockVerdict::None;
};

// Pre window: the pre_window bins before the bin containing event_t.
// Post window: the post_window bins starting at that bin.
ShockReport shock_response(const CategorySeries& series, Timestamp event_t, std::size_t pre_window,
                           std::size_t post_window);

} // namespace ecosim
