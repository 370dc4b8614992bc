#include "ecosim/ingest.hpp"

#include "ecosim/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

namespace ecosim {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(HateCategory c) {
    switch (c) {
    case HateCategory::Antisemitic: return "Antisemitic";
    case HateCategory::Islamophobic: return "Islamophobic";
    case HateCategory::Other: return "Other";
    }
    return "?";
}

HateCategory parse_category(std::string_view s) {
    if (s == "Antisemitic") return HateCategory::Antisemitic;
    if (s == "Islamophobic") return HateCategory::Islamophobic;
    if (s == "Other") return HateCategory::Other;
    throw Error("unknown hate category: " + std::string(s));
}

std::string_view to_string(BanStatus b) { return b == BanStatus::Banned ? "Banned" : "Active"; }

BanStatus parse_ban_status(std::string_view s) {
    if (s == "Banned") return BanStatus::Banned;
    if (s == "Active") return BanStatus::Active;
    throw Error("unknown ban status: " + std::string(s));
}

namespace {

constexpr std::pair<PostFlag, const char*> kFlagNames[] = {
    {PostFlag::HateSpeech, "HateSpeech"},
    {PostFlag::FascistPromotion, "FascistPromotion"},
};

std::uint8_t parse_flags(const json& arr) {
    std::uint8_t flags = 0;
    for (const auto& f : arr) {
        auto name = f.get<std::string>();
        bool known = false;
        for (auto [bit, label] : kFlagNames) {
            if (name == label) {
                flags |= static_cast<std::uint8_t>(bit);
                known = true;
            }
        }
        if (!known) throw Error("unknown post flag: " + name);
    }
    return flags;
}

json flags_to_json(std::uint8_t flags) {
    json arr = json::array();
    for (auto [bit, label] : kFlagNames) {
        if (flags & static_cast<std::uint8_t>(bit)) arr.push_back(label);
    }
    return arr;
}

// Calls fn(object, line_no) for each nonblank line; wraps JSON and schema
// failures in ParseError with the offending line number.
void for_each_line(const fs::path& file, const std::function<void(const json&, std::size_t)>& fn) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(file.filename().string(), line_no, e.what());
        }
        if (!obj.is_object()) throw ParseError(file.filename().string(), line_no, "expected a JSON object");
        try {
            fn(obj, line_no);
        } catch (const json::exception& e) {
            throw ParseError(file.filename().string(), line_no, e.what());
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(file.filename().string(), line_no, e.what());
        }
    }
}

class ProblemLog {
public:
    void add(const std::string& file, std::size_t line, const std::string& what) {
        ++total_;
        if (problems_.size() < IntegrityError::kMaxReported) {
            problems_.push_back(file + ":" + std::to_string(line) + ": " + what);
        }
    }
    void throw_if_any() const {
        if (total_ > 0) throw IntegrityError(problems_);
    }

private:
    std::vector<std::string> problems_;
    std::size_t total_ = 0;
};

template <class Fn>
void write_lines(const fs::path& file, std::size_t n, Fn&& make) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    for (std::size_t i = 0; i < n; ++i) {
        out << make(i).dump() << '\n';
    }
    if (!out) throw Error("write failed: " + file.string());
}

} // namespace

Dataset load_dataset(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error("not a dataset directory: " + dir.string());

    std::vector<PlatformId> platforms;
    TimeRange range;
    const auto meta_path = dir / DatasetFiles::kMeta;
    const bool has_meta = fs::exists(meta_path);
    if (has_meta) {
        std::ifstream in(meta_path);
        try {
            auto meta = json::parse(in);
            for (const auto& p : meta.at("platforms")) platforms.emplace_back(p.get<std::string>());
            if (meta.contains("time_range")) {
                range.start = meta["time_range"].at(0).get<Timestamp>();
                range.end = meta["time_range"].at(1).get<Timestamp>();
            }
        } catch (const json::exception& e) {
            throw ParseError(DatasetFiles::kMeta, 1, e.what());
        }
    }

    struct RawNode {
        CommunityNode node;
        std::size_t line;
    };
    std::vector<RawNode> raw_nodes;
    for_each_line(dir / DatasetFiles::kNodes, [&](const json& o, std::size_t line) {
        auto klass = o.at("klass").get<std::string>();
        auto members = o.at("members").get<std::int64_t>();
        if (members < 0) throw ParseError(DatasetFiles::kNodes, line, "members must be >= 0");
        CommunityNode n{o.at("id").get<std::string>(), PlatformId(o.at("platform").get<std::string>()),
                        NodeClass::HateCore, static_cast<std::uint64_t>(members),
                        o.value("created_at", Timestamp{0})};
        try {
            n.klass = parse_node_class(klass);
        } catch (const Error& e) {
            throw ParseError(DatasetFiles::kNodes, line, e.what());
        }
        raw_nodes.push_back({std::move(n), line});
    });

    if (!has_meta) {
        std::set<PlatformId> seen;
        for (const auto& r : raw_nodes) {
            if (seen.insert(r.node.platform).second) platforms.push_back(r.node.platform);
        }
    }

    Dataset ds{EcosystemGraph(std::move(platforms), range), {}, {}, {}};
    ProblemLog problems;
    for (auto& r : raw_nodes) {
        try {
            ds.graph.register_node(r.node);
        } catch (const Error& e) {
            problems.add(DatasetFiles::kNodes, r.line, e.what());
        }
    }
    problems.throw_if_any();

    const auto events_path = dir / DatasetFiles::kEvents;
    if (fs::exists(events_path)) {
        for_each_line(events_path, [&](const json& o, std::size_t line) {
            LinkEvent e{o.at("source").get<std::string>(), o.at("target").get<std::string>(),
                        o.at("t").get<Timestamp>(), LinkKind::CoreToCore};
            try {
                e.kind = parse_link_kind(o.at("kind").get<std::string>());
                ds.graph.append_event(e);
            } catch (const Error& err) {
                problems.add(DatasetFiles::kEvents, line, err.what());
            }
        });
    }

    auto check_community = [&](const std::string& id, const char* file, std::size_t line) {
        if (!ds.graph.find(id)) {
            problems.add(file, line, "unknown community: " + id);
            return false;
        }
        return true;
    };

    const auto joins_path = dir / DatasetFiles::kJoins;
    if (fs::exists(joins_path)) {
        std::set<std::pair<std::uint64_t, std::string>> seen;
        for_each_line(joins_path, [&](const json& o, std::size_t line) {
            JoinEvent j{o.at("individual").get<std::uint64_t>(), o.at("community").get<std::string>(),
                        o.at("t").get<Timestamp>()};
            if (!check_community(j.community, DatasetFiles::kJoins, line)) return;
            if (!seen.emplace(j.individual, j.community).second) {
                problems.add(DatasetFiles::kJoins, line, "duplicate join for individual " +
                                                             std::to_string(j.individual) + " -> " + j.community);
                return;
            }
            ds.joins.push_back(std::move(j));
        });
    }

    const auto posts_path = dir / DatasetFiles::kPosts;
    if (fs::exists(posts_path)) {
        for_each_line(posts_path, [&](const json& o, std::size_t line) {
            PostRecord p{o.at("community").get<std::string>(), o.at("t").get<Timestamp>(), 0,
                         HateCategory::Other};
            try {
                p.flags = parse_flags(o.value("flags", json::array()));
                p.category = parse_category(o.value("category", std::string("Other")));
            } catch (const Error& err) {
                problems.add(DatasetFiles::kPosts, line, err.what());
                return;
            }
            if (!check_community(p.community, DatasetFiles::kPosts, line)) return;
            ds.posts.push_back(std::move(p));
        });
    }

    const auto bans_path = dir / DatasetFiles::kBans;
    if (fs::exists(bans_path)) {
        for_each_line(bans_path, [&](const json& o, std::size_t line) {
            auto id = o.at("community").get<std::string>();
            if (!check_community(id, DatasetFiles::kBans, line)) return;
            try {
                ds.bans[id] = parse_ban_status(o.at("status").get<std::string>());
            } catch (const Error& err) {
                problems.add(DatasetFiles::kBans, line, err.what());
            }
        });
    }

    problems.throw_if_any();
    ds.graph.seal();
    return ds;
}

void save_dataset(const Dataset& ds, const fs::path& dir) {
    fs::create_directories(dir);
    const auto& g = ds.graph;

    json meta;
    meta["platforms"] = json::array();
    for (const auto& p : g.platforms()) meta["platforms"].push_back(p.name());
    auto range = g.time_range();
    meta["time_range"] = {range.start, range.end};
    {
        std::ofstream out(dir / DatasetFiles::kMeta, std::ios::binary);
        out << meta.dump(2) << '\n';
    }

    write_lines(dir / DatasetFiles::kNodes, g.node_count(), [&](std::size_t i) {
        const auto& n = g.node(static_cast<NodeIndex>(i));
        return json{{"id", n.id},
                    {"platform", n.platform.name()},
                    {"klass", to_string(n.klass)},
                    {"members", n.members},
                    {"created_at", n.created_at}};
    });
    auto events = g.events();
    write_lines(dir / DatasetFiles::kEvents, events.size(), [&](std::size_t i) {
        const auto& e = events[i];
        return json{{"source", g.node(e.source).id},
                    {"target", g.node(e.target).id},
                    {"t", e.t},
                    {"kind", to_string(e.kind)}};
    });
    write_lines(dir / DatasetFiles::kJoins, ds.joins.size(), [&](std::size_t i) {
        const auto& j = ds.joins[i];
        return json{{"individual", j.individual}, {"community", j.community}, {"t", j.t}};
    });
    write_lines(dir / DatasetFiles::kPosts, ds.posts.size(), [&](std::size_t i) {
        const auto& p = ds.posts[i];
        return json{{"community", p.community},
                    {"t", p.t},
                    {"flags", flags_to_json(p.flags)},
                    {"category", to_string(p.category)}};
    });
    std::vector<const BanStatusMap::value_type*> bans;
    for (const auto& kv : ds.bans) bans.push_back(&kv);
    write_lines(dir / DatasetFiles::kBans, bans.size(), [&](std::size_t i) {
        return json{{"community", bans[i]->first}, {"status", to_string(bans[i]->second)}};
    });
}

CommunityLabel classify_community(std::span<const PostRecord> most_recent_first) {
    const auto window = most_recent_first.first(std::min(kLabelWindow, most_recent_first.size()));
    const auto flagged =
        static_cast<std::size_t>(std::count_if(window.begin(), window.end(), [](const PostRecord& p) {
            return p.flagged();
        }));
    return flagged >= kLabelThreshold ? CommunityLabel::Hate : CommunityLabel::NotHate;
}

std::map<std::string, CommunityLabel> classify_all(std::span<const PostRecord> posts) {
    std::map<std::string, std::vector<const PostRecord*>> by_community;
    for (const auto& p : posts) by_community[p.community].push_back(&p);

    std::map<std::string, CommunityLabel> labels;
    std::vector<PostRecord> window;
    for (auto& [id, list] : by_community) {
        std::stable_sort(list.begin(), list.end(), [](const PostRecord* a, const PostRecord* b) { return a->t > b->t; });
        window.clear();
        for (std::size_t i = 0; i < std::min(kLabelWindow, list.size()); ++i) window.push_back(*list[i]);
        labels.emplace(id, classify_community(window));
    }
    return labels;
}

std::uint64_t estimate_core_size(const EcosystemGraph& g) {
    const std::size_t np = g.platforms().size();
    std::vector<long double> sum(np, 0.0L);
    std::vector<std::uint64_t> count(np, 0);
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const auto& n = g.node(i);
        if (n.klass != NodeClass::HateCore) continue;
        sum[g.platform_of(i)] += static_cast<long double>(n.members);
        ++count[g.platform_of(i)];
    }
    long double total = 0.0L;
    for (std::size_t p = 0; p < np; ++p) {
        if (count[p] == 0) continue;
        const long double mean = sum[p] / static_cast<long double>(count[p]);
        total += mean * static_cast<long double>(count[p]);
    }
    return static_cast<std::uint64_t>(std::llround(total));
}

} // namespace ecosim
