#include "ecosim/analytics.hpp"
#include "ecosim/error.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ecosim;

namespace {

std::set<std::set<std::string>> as_id_sets(const EcosystemGraph& g, const ComponentReport& r) {
    std::set<std::set<std::string>> out;
    for (const auto& c : r.components) {
        std::set<std::string> ids;
        for (auto m : c.members) ids.insert(g.node(m).id);
        out.insert(ids);
    }
    return out;
}

} // namespace

TEST(Components, MatchBfsOracle) {
    for (std::uint64_t seed = 200; seed < 240; ++seed) {
        const auto raw = testkit::random_instance(seed, 150, 400);
        const auto g = testkit::build_graph(raw);
        for (auto as_of : {raw.t_start, (raw.t_start + raw.t_end) / 2, raw.t_end}) {
            const auto rep = components_at(g, as_of);
            ASSERT_EQ(as_id_sets(g, rep), testkit::components_oracle(raw, as_of)) << "seed " << seed;
            for (std::size_t i = 1; i < rep.components.size(); ++i)
                EXPECT_GE(rep.components[i - 1].size(), rep.components[i].size());
        }
    }
}

TEST(Components, SeveralClustersStaySeparate) {
    EcosystemGraph g({PlatformId("a"), PlatformId("b")});
    for (int i = 0; i < 6; ++i) g.register_node({"c" + std::to_string(i), PlatformId(i < 3 ? "a" : "b"), NodeClass::HateCore, 1, 0});
    g.append_event(LinkEvent{"c0", "c1", 1, LinkKind::CoreToCore});
    g.append_event(LinkEvent{"c2", "c1", 2, LinkKind::CoreToCore});
    g.append_event(LinkEvent{"c3", "c4", 3, LinkKind::CoreToCore});
    g.seal();
    auto r = components_at(g, 2);
    EXPECT_EQ(r.largest_sizes, (std::vector<std::size_t>{3}));
    r = components_at(g, 3);
    EXPECT_EQ(r.largest_sizes, (std::vector<std::size_t>{3, 2}));
    EXPECT_EQ(r.core_nodes, 6u);
}

TEST(Reach, MatchesOracleAndIsMonotone) {
    for (std::uint64_t seed = 300; seed < 330; ++seed) {
        const auto raw = testkit::random_instance(seed);
        const auto g = testkit::build_graph(raw);
        Reach prev;
        for (int k = 0; k <= 10; ++k) {
            const auto t = raw.t_start + (raw.t_end - raw.t_start) * k / 10;
            const auto r = one_click_reach(g, t);
            const auto [n, m] = testkit::reach_oracle(raw, t);
            ASSERT_EQ(r.communities, n);
            ASSERT_EQ(r.members, m);
            EXPECT_GE(r.communities, prev.communities);
            EXPECT_GE(r.members, prev.members);
            prev = r;
        }
    }
}

TEST(Growth, SteadyArrivalsGiveLinearCumulative) {
    EcosystemGraph g({PlatformId("a")}, TimeRange{0, 100 * kSecondsPerDay});
    g.register_node({"h", PlatformId("a"), NodeClass::HateCore, 1, 0});
    g.register_node({"m", PlatformId("a"), NodeClass::VulnerableMainstream, 1, 0});
    // exactly 5 links per day
    for (int d = 0; d < 100; ++d)
        for (int k = 0; k < 5; ++k) g.append_event(LinkEvent{"h", "m", d * kSecondsPerDay + 1000 * k, LinkKind::CoreToMainstream});
    g.seal();
    const auto lg = link_growth(g);
    const auto& cm = lg.kinds[static_cast<std::size_t>(LinkKind::CoreToMainstream)];
    EXPECT_EQ(lg.n_bins, 100u);
    EXPECT_EQ(cm.total, 500u);
    EXPECT_NEAR(cm.slope, 5.0, 1e-9);
    EXPECT_NEAR(cm.r_squared, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(cm.mean_rate, 5.0);
    EXPECT_TRUE(cm.steady);
    EXPECT_EQ(lg.kinds[0].total, 0u);
    EXPECT_FALSE(lg.kinds[0].steady);
}

TEST(Growth, BurstIsNotSteady) {
    EcosystemGraph g({PlatformId("a")}, TimeRange{0, 100 * kSecondsPerDay});
    g.register_node({"h", PlatformId("a"), NodeClass::HateCore, 1, 0});
    for (int k = 0; k < 500; ++k) g.append_event(LinkEvent{"h", "h", 99 * kSecondsPerDay + k, LinkKind::CoreToCore});
    g.seal();
    EXPECT_FALSE(link_growth(g).kinds[0].steady);
}

TEST(Connectivity, EqualPlatformsHaveRatioOne) {
    EcosystemGraph g({PlatformId("a"), PlatformId("b"), PlatformId("c")});
    for (auto p : {"a", "b", "c"}) g.register_node({std::string("h") + p, PlatformId(p), NodeClass::HateCore, 1, 0});
    g.append_event(LinkEvent{"ha", "hb", 1, LinkKind::CoreToCore});
    g.append_event(LinkEvent{"hb", "hc", 1, LinkKind::CoreToCore});
    g.append_event(LinkEvent{"hc", "ha", 1, LinkKind::CoreToCore});
    g.seal();
    const auto pc = platform_connectivity(g, 10);
    EXPECT_DOUBLE_EQ(pc.equivalence_ratio, 1.0);
    for (const auto& d : pc.degrees) EXPECT_EQ(d.total(), 2u);
}

TEST(Connectivity, HubPlatformRaisesRatio) {
    EcosystemGraph g({PlatformId("a"), PlatformId("b"), PlatformId("c")});
    for (auto p : {"a", "b", "c"}) g.register_node({std::string("h") + p, PlatformId(p), NodeClass::HateCore, 1, 0});
    g.register_node({"m", PlatformId("a"), NodeClass::VulnerableMainstream, 1, 0});
    for (int i = 0; i < 8; ++i) g.append_event(LinkEvent{"ha", "m", i, LinkKind::CoreToMainstream});
    g.append_event(LinkEvent{"hb", "hc", 1, LinkKind::CoreToCore});
    g.seal();
    const auto pc = platform_connectivity(g, 10);
    EXPECT_DOUBLE_EQ(pc.max_total, 8.0);
    EXPECT_DOUBLE_EQ(pc.median_total, 1.0);
    EXPECT_DOUBLE_EQ(pc.equivalence_ratio, 8.0);
}

TEST(Bypass, MatchesPairwiseOracle) {
    for (std::uint64_t seed = 400; seed < 420; ++seed) {
        const auto raw = testkit::random_instance(seed, 60, 1500);
        const auto g = testkit::build_graph(raw);
        for (double w : {0.5, 7.0}) {
            const auto as_of = raw.t_end - (raw.t_end - raw.t_start) / 4;
            std::multiset<testkit::MotifTuple> got;
            for (const auto& m : detect_bypasses(g, w, as_of))
                got.insert({g.node(m.a).id, g.node(m.b).id, g.node(m.return_target).id, m.t1, m.t2});
            ASSERT_EQ(got, testkit::bypass_oracle(raw, w, as_of)) << "seed " << seed;
            ASSERT_EQ(count_bypasses(g, w, as_of), got.size());
        }
    }
}

TEST(Bypass, WindowBoundaryIsInclusive) {
    EcosystemGraph g({PlatformId("a"), PlatformId("b")});
    g.register_node({"x", PlatformId("a"), NodeClass::HateCore, 1, 0});
    g.register_node({"y", PlatformId("b"), NodeClass::HateCore, 1, 0});
    g.append_event(LinkEvent{"x", "y", 0, LinkKind::CoreToCore});
    g.append_event(LinkEvent{"y", "x", 7 * kSecondsPerDay, LinkKind::CoreToCore});
    g.append_event(LinkEvent{"y", "x", 7 * kSecondsPerDay + 1, LinkKind::CoreToCore});
    g.seal();
    const auto motifs = detect_bypasses(g, 7.0);
    ASSERT_EQ(motifs.size(), 1u);
    EXPECT_EQ(motifs[0].t2, 7 * kSecondsPerDay);
    EXPECT_THROW(detect_bypasses(g, 0.0), Error);
}

TEST(Shock, FlatSeriesIsQuiet) {
    CategorySeries s{HateCategory::Antisemitic, 0, 60, std::vector<std::uint64_t>(60, 20)};
    const auto r = shock_response(s, 30 * 60, 30, 30);
    EXPECT_DOUBLE_EQ(r.ratio, 1.0);
    EXPECT_EQ(r.verdict, ShockVerdict::None);
    EXPECT_FALSE(r.latency_bins.has_value());
}

TEST(Shock, StepIsHugeWithZeroLatency) {
    std::vector<std::uint64_t> counts(60, 20);
    for (std::size_t i = 30; i < 60; ++i) counts[i] = 200;
    CategorySeries s{HateCategory::Antisemitic, 0, 60, counts};
    const auto r = shock_response(s, 30 * 60 + 15, 30, 30);
    EXPECT_DOUBLE_EQ(r.ratio, 10.0);
    EXPECT_EQ(r.verdict, ShockVerdict::Huge);
    ASSERT_TRUE(r.latency_bins.has_value());
    EXPECT_EQ(*r.latency_bins, 0u);
}

TEST(Shock, RatioThresholds) {
    auto verdict_for = [](std::uint64_t post) {
        std::vector<std::uint64_t> counts(20, 10);
        for (std::size_t i = 10; i < 20; ++i) counts[i] = post;
        return shock_response(CategorySeries{HateCategory::Other, 0, 60, counts}, 600, 10, 10).verdict;
    };
    EXPECT_EQ(verdict_for(14), ShockVerdict::None);
    EXPECT_EQ(verdict_for(15), ShockVerdict::Minor);
    EXPECT_EQ(verdict_for(29), ShockVerdict::Minor);
    EXPECT_EQ(verdict_for(30), ShockVerdict::Huge);
}

TEST(Shock, WindowsMustFit) {
    CategorySeries s{HateCategory::Other, 0, 60, std::vector<std::uint64_t>(10, 1)};
    EXPECT_THROW(shock_response(s, 60, 5, 2), InsufficientData);
    EXPECT_THROW(shock_response(s, 9 * 60, 2, 5), InsufficientData);
    EXPECT_THROW(shock_response(s, 100000, 1, 1), InsufficientData);
}

TEST(Shock, BinPostsCountsByCategory) {
    std::vector<PostRecord> posts{{"c", 0, 0, HateCategory::Other},      {"c", 59, 0, HateCategory::Other},
                                  {"c", 60, 0, HateCategory::Other},     {"c", 61, 0, HateCategory::Antisemitic},
                                  {"c", 179, 0, HateCategory::Other},    {"c", 180, 0, HateCategory::Other}};
    const auto s = bin_posts(posts, HateCategory::Other, 0, 180, 60);
    EXPECT_EQ(s.counts, (std::vector<std::uint64_t>{2, 1, 1}));
}
