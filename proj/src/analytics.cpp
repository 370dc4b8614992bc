#include "ecosim/analytics.hpp"

#include "ecosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ecosim {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

} // namespace

ComponentReport components_at(const EcosystemGraph& g, Timestamp as_of) {
    ComponentReport report;
    report.as_of = as_of;
    report.core_nodes = g.count_class(NodeClass::HateCore);

    DisjointSets sets(g.node_count());
    std::vector<bool> touched(g.node_count(), false);
    for (const auto& e : g.events_until(as_of)) {
        if (e.kind != LinkKind::CoreToCore) continue;
        sets.unite(e.source, e.target);
        touched[e.source] = true;
        touched[e.target] = true;
    }

    std::vector<std::vector<NodeIndex>> by_root(g.node_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        if (touched[i]) by_root[sets.find(i)].push_back(i);
    }
    for (auto& members : by_root) {
        if (!members.empty()) report.components.push_back(Component{std::move(members)});
    }
    std::sort(report.components.begin(), report.components.end(), [](const Component& a, const Component& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.members.front() < b.members.front();
    });
    for (const auto& c : report.components) report.largest_sizes.push_back(c.size());
    return report;
}

std::vector<ComponentReport> components_over_time(const EcosystemGraph& g, std::span<const Timestamp> sample_times) {
    std::vector<ComponentReport> out;
    out.reserve(sample_times.size());
    for (auto t : sample_times) out.push_back(components_at(g, t));
    return out;
}

Reach one_click_reach(const EcosystemGraph& g, Timestamp as_of) {
    std::vector<bool> reached(g.node_count(), false);
    Reach r;
    for (const auto& e : g.events_until(as_of)) {
        if (e.kind != LinkKind::CoreToMainstream || reached[e.target]) continue;
        reached[e.target] = true;
        ++r.communities;
        r.members += g.node(e.target).members;
    }
    return r;
}

LinkGrowth link_growth(const EcosystemGraph& g, Timestamp bin_width) {
    if (bin_width <= 0) throw Error("bin width must be positive");
    if (!g.sealed()) throw GraphNotSealed();

    const auto range = g.time_range();
    const Timestamp span = range.end - range.start;
    LinkGrowth out;
    out.t0 = range.start;
    out.bin_width = bin_width;
    out.n_bins = static_cast<std::size_t>(std::max<Timestamp>(1, (span + bin_width - 1) / bin_width));

    std::array<std::vector<std::uint64_t>, kLinkKindCount> per_bin;
    for (auto& v : per_bin) v.assign(out.n_bins, 0);
    for (const auto& e : g.events()) {
        auto bin = static_cast<std::size_t>(std::max<Timestamp>(0, (e.t - range.start) / bin_width));
        bin = std::min(bin, out.n_bins - 1);
        ++per_bin[static_cast<std::size_t>(e.kind)][bin];
    }

    const double bins_spanned = span > 0 ? static_cast<double>(span) / static_cast<double>(bin_width) : 1.0;
    for (std::size_t k = 0; k < kLinkKindCount; ++k) {
        auto& kg = out.kinds[k];
        kg.kind = static_cast<LinkKind>(k);
        kg.cumulative.resize(out.n_bins);
        std::partial_sum(per_bin[k].begin(), per_bin[k].end(), kg.cumulative.begin());
        kg.total = kg.cumulative.back();
        kg.mean_rate = static_cast<double>(kg.total) / bins_spanned;
        if (kg.total == 0 || out.n_bins < 2) continue;

        // Least squares of cumulative count against bin index.
        const double n = static_cast<double>(out.n_bins);
        const double x_mean = (n + 1.0) / 2.0;
        double y_mean = 0.0;
        for (auto c : kg.cumulative) y_mean += static_cast<double>(c);
        y_mean /= n;
        double sxy = 0.0;
        double sxx = 0.0;
        double syy = 0.0;
        for (std::size_t i = 0; i < out.n_bins; ++i) {
            const double dx = static_cast<double>(i + 1) - x_mean;
            const double dy = static_cast<double>(kg.cumulative[i]) - y_mean;
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
        kg.slope = sxy / sxx;
        kg.intercept = y_mean - kg.slope * x_mean;
        kg.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
        kg.steady = kg.r_squared >= kSteadyRateR2;
    }
    return out;
}

PlatformConnectivity platform_connectivity(const EcosystemGraph& g, Timestamp as_of) {
    const auto agg = aggregate_by_platform(g.snapshot_at(as_of));
    const std::size_t np = g.platforms().size();

    PlatformConnectivity pc;
    pc.degrees.resize(np);
    for (std::size_t p = 0; p < np; ++p) pc.degrees[p].platform = agg.labels[p];
    for (const auto& e : agg.edges) {
        if (e.from < np) pc.degrees[e.from].out_weight += e.weight;
        if (e.to < np) pc.degrees[e.to].in_weight += e.weight;
    }
    if (np == 0) return pc;

    std::vector<double> totals;
    for (const auto& d : pc.degrees) totals.push_back(static_cast<double>(d.total()));
    std::sort(totals.begin(), totals.end());
    pc.max_total = totals.back();
    pc.median_total = np % 2 == 1 ? totals[np / 2] : 0.5 * (totals[np / 2 - 1] + totals[np / 2]);
    if (pc.max_total == pc.median_total) {
        pc.equivalence_ratio = 1.0;
    } else if (pc.median_total == 0.0) {
        pc.equivalence_ratio = std::numeric_limits<double>::infinity();
    } else {
        pc.equivalence_ratio = pc.max_total / pc.median_total;
    }
    return pc;
}

namespace {

template <class Visit>
void scan_bypasses(const EcosystemGraph& g, double window_days, std::optional<Timestamp> as_of, Visit&& visit) {
    if (!(window_days > 0.0)) throw Error("bypass window must be positive");
    const auto events = as_of ? g.events_until(*as_of) : (g.sealed() ? g.events() : throw GraphNotSealed());
    const auto window = static_cast<Timestamp>(std::llround(window_days * kSecondsPerDay));

    // Outgoing events per source, in log (time) order.
    std::vector<std::vector<std::uint32_t>> outgoing(g.node_count());
    for (std::uint32_t i = 0; i < events.size(); ++i) outgoing[events[i].source].push_back(i);

    for (const auto& e1 : events) {
        const auto home = g.platform_of(e1.source);
        if (g.platform_of(e1.target) == home) continue;
        const auto& next = outgoing[e1.target];
        auto it = std::lower_bound(next.begin(), next.end(), e1.t,
                                   [&](std::uint32_t idx, Timestamp t) { return events[idx].t < t; });
        for (; it != next.end() && events[*it].t <= e1.t + window; ++it) {
            const auto& e2 = events[*it];
            if (g.platform_of(e2.target) == home) visit(e1, e2);
        }
    }
}

} // namespace

std::vector<BypassMotif> detect_bypasses(const EcosystemGraph& g, double window_days, std::optional<Timestamp> as_of) {
    std::vector<BypassMotif> out;
    scan_bypasses(g, window_days, as_of, [&](const EventRecord& e1, const EventRecord& e2) {
        out.push_back(BypassMotif{e1.source, e1.target, e2.target, e1.t, e2.t});
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_bypasses(const EcosystemGraph& g, double window_days, std::optional<Timestamp> as_of) {
    std::uint64_t n = 0;
    scan_bypasses(g, window_days, as_of, [&](const EventRecord&, const EventRecord&) { ++n; });
    return n;
}

CategorySeries bin_posts(std::span<const PostRecord> posts, HateCategory category, Timestamp t0, Timestamp t1,
                         Timestamp bin_width) {
    if (bin_width <= 0) throw Error("bin width must be positive");
    if (t1 <= t0) throw InsufficientData("empty series range");
    CategorySeries s;
    s.category = category;
    s.t0 = t0;
    s.bin_width = bin_width;
    s.counts.assign(static_cast<std::size_t>((t1 - t0 + bin_width - 1) / bin_width), 0);
    for (const auto& p : posts) {
        if (p.category != category || p.t < t0 || p.t >= t1) continue;
        ++s.counts[static_cast<std::size_t>((p.t - t0) / bin_width)];
    }
    return s;
}

std::string_view to_string(ShockVerdict v) {
    switch (v) {
    case ShockVerdict::None: return "None";
    case ShockVerdict::Minor: return "Minor";
    case ShockVerdict::Huge: return "Huge";
    }
    return "?";
}

ShockReport shock_response(const CategorySeries& series, Timestamp event_t, std::size_t pre_window,
                           std::size_t post_window) {
    if (pre_window == 0 || post_window == 0) throw InsufficientData("windows must be at least one bin");
    if (event_t < series.t0 || event_t >= series.end()) throw InsufficientData("event outside series");
    const auto event_bin = static_cast<std::size_t>((event_t - series.t0) / series.bin_width);
    if (event_bin < pre_window) throw InsufficientData("pre window extends before series start");
    if (event_bin + post_window > series.counts.size()) throw InsufficientData("post window extends past series end");

    ShockReport r;
    r.event_t = event_t;
    r.category = series.category;

    const auto pre = std::span(series.counts).subspan(event_bin - pre_window, pre_window);
    const auto post = std::span(series.counts).subspan(event_bin, post_window);
    double pre_sum = 0.0;
    for (auto c : pre) pre_sum += static_cast<double>(c);
    r.pre_rate = pre_sum / static_cast<double>(pre_window);
    double var = 0.0;
    for (auto c : pre) var += (static_cast<double>(c) - r.pre_rate) * (static_cast<double>(c) - r.pre_rate);
    r.pre_sigma = std::sqrt(var / static_cast<double>(pre_window));
    double post_sum = 0.0;
    for (auto c : post) post_sum += static_cast<double>(c);
    r.post_rate = post_sum / static_cast<double>(post_window);

    if (r.pre_rate > 0.0) {
        r.ratio = r.post_rate / r.pre_rate;
    } else {
        r.ratio = r.post_rate > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    }

    const double threshold = r.pre_rate + kLatencySigmas * r.pre_sigma;
    for (std::size_t k = 0; k < post.size(); ++k) {
        if (static_cast<double>(post[k]) > threshold) {
            r.latency_bins = k;
            break;
        }
    }

    if (r.ratio >= kHugeRatio) {
        r.verdict = ShockVerdict::Huge;
    } else if (r.ratio >= kMinorRatio) {
        r.verdict = ShockVerdict::Minor;
    } else {
        r.verdict = ShockVerdict::None;
    }
    return r;
}

} // namespace ecosim
