#include "ecosim/error.hpp"
#include "ecosim/pathways.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace ecosim;

TEST(Pathways, Log2Bins) {
    EXPECT_EQ(log2_bins(1), (std::vector<LengthBin>{{1, 1}}));
    EXPECT_EQ(log2_bins(5), (std::vector<LengthBin>{{1, 1}, {2, 2}, {3, 4}, {5, 8}}));
    EXPECT_EQ(log2_bins(403).back(), (LengthBin{257, 512}));
}

TEST(Pathways, HistogramMatchesRecountOracle) {
    for (std::uint64_t seed = 500; seed < 540; ++seed) {
        const auto raw = testkit::random_instance(seed);
        const auto g = testkit::build_graph(raw);
        const auto journeys = build_journeys(raw.joins, raw.bans, g);
        for (Timestamp horizon : {Timestamp{0}, 30 * kSecondsPerDay, kDefaultHorizon}) {
            const auto h = journey_histogram(journeys, horizon);
            const auto want = testkit::histogram_oracle(raw, horizon);
            ASSERT_EQ(h.counts, want.counts) << "seed " << seed;
            ASSERT_EQ(h.min_length, want.min_length);
            ASSERT_EQ(h.max_length, want.max_length);
            ASSERT_EQ(h.bins, log2_bins(want.max_length));
        }
    }
}

TEST(Pathways, JourneysOrderedAndAnnotated) {
    const auto raw = testkit::random_instance(42);
    const auto g = testkit::build_graph(raw);
    const auto journeys = build_journeys(raw.joins, raw.bans, g);
    std::size_t steps = 0;
    for (const auto& j : journeys) {
        for (std::size_t k = 1; k < j.joins.size(); ++k) EXPECT_LE(j.joins[k - 1].t, j.joins[k].t);
        for (const auto& s : j.joins) {
            const bool banned = raw.bans.count(s.community) > 0;
            EXPECT_EQ(s.status == BanStatus::Banned, banned);
        }
        const auto mix = violence_mix(j);
        EXPECT_EQ(mix.banned + mix.active, j.joins.size());
        steps += j.joins.size();
    }
    EXPECT_EQ(steps, raw.joins.size());
}

TEST(Pathways, HorizonIsInclusive) {
    EcosystemGraph g({PlatformId("a")});
    for (auto id : {"c1", "c2", "c3"}) g.register_node({id, PlatformId("a"), NodeClass::HateCore, 1, 0});
    g.seal();
    std::vector<JoinEvent> joins{{1, "c1", 0}, {1, "c2", kDefaultHorizon}, {1, "c3", kDefaultHorizon + 1}};
    const auto journeys = build_journeys(joins, {}, g);
    EXPECT_EQ(length_within(journeys[0], kDefaultHorizon), 2u);
}

TEST(Pathways, Errors) {
    EcosystemGraph g({PlatformId("a")});
    g.register_node({"c1", PlatformId("a"), NodeClass::HateCore, 1, 0});
    g.seal();
    EXPECT_THROW(build_journeys(std::vector<JoinEvent>{{1, "nope", 0}}, {}, g), UnknownCommunity);
    EXPECT_THROW(build_journeys(std::vector<JoinEvent>{{1, "c1", 0}, {1, "c1", 5}}, {}, g), IntegrityError);
    EXPECT_THROW(journey_histogram({}), InsufficientData);
}
