#include "ecosim/export.hpp"

#include <string>
#include <string_view>

namespace ecosim {

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void gexf_header(std::ostream& out, std::string_view description) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<gexf xmlns=\"http://gexf.net/1.3\" version=\"1.3\">\n"
        << "  <meta>\n    <creator>ecosim</creator>\n    <description>" << xml_escape(description)
        << "</description>\n  </meta>\n"
        << "  <graph defaultedgetype=\"directed\" mode=\"static\">\n"
        << "    <attributes class=\"node\">\n"
        << "      <attribute id=\"platform\" title=\"platform\" type=\"string\"/>\n"
        << "      <attribute id=\"klass\" title=\"klass\" type=\"string\"/>\n"
        << "      <attribute id=\"members\" title=\"members\" type=\"long\"/>\n"
        << "    </attributes>\n"
        << "    <attributes class=\"edge\">\n"
        << "      <attribute id=\"weight\" title=\"weight\" type=\"long\"/>\n"
        << "    </attributes>\n";
}

void gexf_node(std::ostream& out, std::string_view id, std::string_view platform, std::string_view klass,
               std::uint64_t members) {
    const auto esc = xml_escape(id);
    out << "      <node id=\"" << esc << "\" label=\"" << esc << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"platform\" value=\"" << xml_escape(platform) << "\"/>\n"
        << "          <attvalue for=\"klass\" value=\"" << klass << "\"/>\n"
        << "          <attvalue for=\"members\" value=\"" << members << "\"/>\n"
        << "        </attvalues>\n"
        << "      </node>\n";
}

void gexf_edge(std::ostream& out, std::size_t id, std::string_view source, std::string_view target,
               std::uint64_t weight) {
    out << "      <edge id=\"" << id << "\" source=\"" << xml_escape(source) << "\" target=\"" << xml_escape(target)
        << "\" weight=\"" << weight << "\">\n"
        << "        <attvalues><attvalue for=\"weight\" value=\"" << weight << "\"/></attvalues>\n"
        << "      </edge>\n";
}

} // namespace

void write_gexf(std::ostream& out, const Snapshot& s) {
    const auto& g = s.graph();
    gexf_header(out, "ecosystem snapshot as_of=" + std::to_string(s.as_of()));
    out << "    <nodes>\n";
    for (const auto& n : g.nodes()) gexf_node(out, n.id, n.platform.name(), to_string(n.klass), n.members);
    out << "    </nodes>\n    <edges>\n";
    std::size_t id = 0;
    for (const auto& e : s.edges()) gexf_edge(out, id++, g.node(e.source).id, g.node(e.target).id, e.weight);
    out << "    </edges>\n  </graph>\n</gexf>\n";
}

void write_gexf(std::ostream& out, const PlatformAggregate& agg) {
    gexf_header(out, "platform aggregate");
    out << "    <nodes>\n";
    for (std::size_t i = 0; i < agg.labels.size(); ++i) {
        std::string_view klass = i == agg.mainstream_sink ? to_string(NodeClass::VulnerableMainstream)
                                 : i == agg.news_sink      ? to_string(NodeClass::NewsSource)
                                                           : to_string(NodeClass::HateCore);
        std::string_view platform = i < agg.mainstream_sink ? std::string_view(agg.labels[i]) : std::string_view("*");
        gexf_node(out, agg.labels[i], platform, klass, agg.members[i]);
    }
    out << "    </nodes>\n    <edges>\n";
    std::size_t id = 0;
    for (const auto& e : agg.edges) gexf_edge(out, id++, agg.labels[e.from], agg.labels[e.to], e.weight);
    out << "    </edges>\n  </graph>\n</gexf>\n";
}

void write_edge_csv(std::ostream& out, const Snapshot& s) {
    const auto& g = s.graph();
    out << "source,target,weight\n";
    for (const auto& e : s.edges()) {
        out << csv_field(g.node(e.source).id) << ',' << csv_field(g.node(e.target).id) << ',' << e.weight << '\n';
    }
}

void write_edge_csv(std::ostream& out, const PlatformAggregate& agg) {
    out << "source,target,weight\n";
    for (const auto& e : agg.edges) {
        out << csv_field(agg.labels[e.from]) << ',' << csv_field(agg.labels[e.to]) << ',' << e.weight << '\n';
    }
}

} // namespace ecosim
