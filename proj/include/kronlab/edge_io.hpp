#ifndef KRONLAB_EDGE_IO_HPP_
#define KRONLAB_EDGE_IO_HPP_

#include "kronlab/generators.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kronlab {

// Ordered "# key=value" lines written above the edges.
using HeaderFields = std::vector<std::pair<std::string, std::string>>;

// Echo of a resolved configuration (plus the drawn noise record, if any).
// Worker count is deliberately absent so output bytes do not depend on it.
HeaderFields header_fields(const GenConfig& cfg, const GenResult& result);

// Edge file: header lines, then "<source>\t<target>\n" per edge.
void write_edges(std::ostream& os, const EdgeList& graph, const HeaderFields& header);
void write_edge_file(const std::string& path, const EdgeList& graph, const HeaderFields& header);

struct LoadedGraph {
    EdgeList graph;
    std::map<std::string, std::string> header;
};

// node_count comes from the header when present, otherwise max id + 1.
LoadedGraph parse_edges(const std::string& text);
LoadedGraph read_edge_file(const std::string& path);

// Recovers the NSKG noise vector from a header written by write_edge_file.
NoiseRecord noise_record_from_header(const std::map<std::string, std::string>& header);

// Recovers the generator configuration echoed into a header.
GenConfig config_from_header(const std::map<std::string, std::string>& header);

std::string format_double(double value);
std::string format_seed(const SeedMatrix& m);
SeedMatrix parse_seed_field(const std::string& field);

// Whitespace separated unsigned integers (degree sequence files).
std::vector<std::uint64_t> read_integer_file(const std::string& path);

}  // namespace kronlab

#endif  // KRONLAB_EDGE_IO_HPP_
