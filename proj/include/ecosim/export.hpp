#pragma once

#include "ecosim/graph.hpp"

#include <ostream>

namespace ecosim {

// GEXF 1.3 static graph. Node attributes: platform, klass, members. Edge
// attribute: weight (also written as the GEXF edge weight).
void write_gexf(std::ostream& out, const Snapshot& s);
void write_gexf(std::ostream& out, const PlatformAggregate& agg);

// source,target,weight with a header row.
void write_edge_csv(std::ostream& out, const Snapshot& s);
void write_edge_csv(std::ostream& out, const PlatformAggregate& agg);

} // namespace ecosim
