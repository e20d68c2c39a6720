#include "kronlab/edge_io.hpp"

#include "kronlab/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace kronlab {

namespace {

std::string join_u64(const std::vector<std::uint64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += std::to_string(values[i]);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view tok, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::Parse, std::string("bad ") + what + " '" + std::string(tok) + "'");
    }
    return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

const std::string* find_field(const std::map<std::string, std::string>& header, const std::string& key) {
    auto it = header.find(key);
    return it == header.end() ? nullptr : &it->second;
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_seed(const SeedMatrix& m) {
    std::string out = std::to_string(m.rows()) + "x" + std::to_string(m.cols());
    for (double e : m.entries()) {
        out += ' ';
        out += format_double(e);
    }
    return out;
}

SeedMatrix parse_seed_field(const std::string& field) {
    const auto toks = split_ws(field);
    if (toks.empty()) {
        throw Error(ErrorCode::Parse, "empty seed field");
    }
    const auto x = toks[0].find('x');
    if (x == std::string_view::npos) {
        throw Error(ErrorCode::Parse, "seed field needs an RxC shape prefix");
    }
    const auto rows = parse_number<std::size_t>(toks[0].substr(0, x), "seed rows");
    const auto cols = parse_number<std::size_t>(toks[0].substr(x + 1), "seed cols");
    std::vector<double> entries;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        entries.push_back(parse_number<double>(toks[i], "seed entry"));
    }
    return SeedMatrix(rows, cols, std::move(entries));
}

HeaderFields header_fields(const GenConfig& cfg, const GenResult& result) {
    HeaderFields h;
    h.emplace_back("node_count", std::to_string(result.graph.node_count));
    h.emplace_back("model", std::string(to_string(cfg.model)));
    h.emplace_back("edges", std::to_string(result.graph.edges.size()));
    h.emplace_back("rng_seed", std::to_string(cfg.rng_seed));
    switch (cfg.model) {
    case Model::Skg:
        h.emplace_back("l", std::to_string(cfg.ell));
        h.emplace_back("seed2", format_seed(cfg.seed2.matrix()));
        break;
    case Model::Rpskg:
        h.emplace_back("l", std::to_string(cfg.ell));
        h.emplace_back("k", std::to_string(cfg.k));
        h.emplace_back("seed2", format_seed(cfg.seed2.matrix()));
        if (cfg.k > 0) {
            const StochasticSeed m3 = cfg.seed3 ? *cfg.seed3 : sample_3x3_from_2x2(cfg.seed2);
            h.emplace_back("seed3", format_seed(m3.matrix()));
            h.emplace_back("seed3_source", cfg.seed3 ? "file" : "closed-form");
        }
        break;
    case Model::Nskg: {
        const NoiseRecord* noise = result.noise ? &*result.noise : cfg.noise ? &*cfg.noise : nullptr;
        h.emplace_back("l", std::to_string(noise ? noise->mu.size() : static_cast<std::size_t>(cfg.ell)));
        h.emplace_back("seed2", format_seed(cfg.seed2.matrix()));
        if (cfg.noise_b) {
            h.emplace_back("noise_b", format_double(*cfg.noise_b));
        }
        if (noise != nullptr) {
            std::string mu;
            for (std::size_t i = 0; i < noise->mu.size(); ++i) {
                mu += (i == 0 ? "" : " ") + format_double(noise->mu[i]);
            }
            h.emplace_back("noise_mu", mu);
        }
        break;
    }
    case Model::Bernoulli:
        h.emplace_back("n", std::to_string(cfg.bernoulli_n));
        h.emplace_back("p", format_double(*cfg.p));
        break;
    case Model::ChungLu:
        h.emplace_back("dout", join_u64(cfg.degree_seqs->first));
        h.emplace_back("din", join_u64(cfg.degree_seqs->second));
        break;
    }
    return h;
}

void write_edges(std::ostream& os, const EdgeList& graph, const HeaderFields& header) {
    for (const auto& [key, value] : header) {
        os << "# " << key << '=' << value << '\n';
    }
    std::string buf;
    buf.reserve(1 << 20);
    char num[24];
    for (const Edge& e : graph.edges) {
        buf.append(num, std::to_chars(num, num + sizeof num, e.source).ptr);
        buf += '\t';
        buf.append(num, std::to_chars(num, num + sizeof num, e.target).ptr);
        buf += '\n';
        if (buf.size() > (1 << 20) - 64) {
            os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_edge_file(const std::string& path, const EdgeList& graph, const HeaderFields& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path);
    }
    write_edges(out, graph, header);
    if (!out) {
        throw Error(ErrorCode::Io, "write failed for " + path);
    }
}

LoadedGraph parse_edges(const std::string& text) {
    LoadedGraph out;
    std::string_view rest(text);
    std::size_t line_no = 0;
    VertexId max_id = 0;
    bool any_edge = false;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            line.remove_prefix(1);
            while (!line.empty() && line.front() == ' ') {
                line.remove_prefix(1);
            }
            if (const auto eq = line.find('='); eq != std::string_view::npos) {
                out.header[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
            }
            continue;
        }
        const auto toks = split_ws(line);
        if (toks.size() != 2) {
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected '<source>\\t<target>'");
        }
        const Edge e{parse_number<VertexId>(toks[0], "source id"), parse_number<VertexId>(toks[1], "target id")};
        max_id = std::max({max_id, e.source, e.target});
        any_edge = true;
        out.graph.edges.push_back(e);
    }
    if (const auto* n = find_field(out.header, "node_count")) {
        out.graph.node_count = parse_number<std::uint64_t>(*n, "node_count");
        if (any_edge && max_id >= out.graph.node_count) {
            throw Error(ErrorCode::IdOutOfRange, "vertex id " + std::to_string(max_id) + " >= node_count " + *n);
        }
    } else {
        out.graph.node_count = any_edge ? max_id + 1 : 0;
    }
    return out;
}

LoadedGraph read_edge_file(const std::string& path) {
    return parse_edges(read_all(path));
}

NoiseRecord noise_record_from_header(const std::map<std::string, std::string>& header) {
    const auto* field = find_field(header, "noise_mu");
    if (field == nullptr) {
        throw Error(ErrorCode::Parse, "header carries no noise_mu record");
    }
    NoiseRecord noise;
    for (auto tok : split_ws(*field)) {
        noise.mu.push_back(parse_number<double>(tok, "noise value"));
    }
    return noise;
}

GenConfig config_from_header(const std::map<std::string, std::string>& header) {
    auto require = [&](const std::string& key) -> const std::string& {
        const auto* v = find_field(header, key);
        if (v == nullptr) {
            throw Error(ErrorCode::Parse, "header lacks '" + key + "'");
        }
        return *v;
    };
    GenConfig cfg;
    cfg.model = parse_model(require("model"));
    cfg.edges_m = parse_number<std::uint64_t>(require("edges"), "edges");
    cfg.rng_seed = parse_number<std::uint64_t>(require("rng_seed"), "rng_seed");
    if (const auto* l = find_field(header, "l")) {
        cfg.ell = parse_number<int>(*l, "l");
    }
    if (const auto* k = find_field(header, "k")) {
        cfg.k = parse_number<int>(*k, "k");
    }
    if (const auto* s = find_field(header, "seed2")) {
        cfg.seed2 = StochasticSeed::from_normalized(parse_seed_field(*s));
    }
    if (const auto* s = find_field(header, "seed3")) {
        cfg.seed3 = StochasticSeed::from_normalized(parse_seed_field(*s));
    }
    if (const auto* b = find_field(header, "noise_b")) {
        cfg.noise_b = parse_number<double>(*b, "noise_b");
    }
    if (cfg.model == Model::Nskg) {
        cfg.noise = noise_record_from_header(header);
    }
    if (const auto* n = find_field(header, "n")) {
        cfg.bernoulli_n = parse_number<std::uint64_t>(*n, "n");
    }
    if (const auto* p = find_field(header, "p")) {
        cfg.p = parse_number<double>(*p, "p");
    }
    if (cfg.model == Model::ChungLu) {
        std::vector<std::uint64_t> d_out;
        std::vector<std::uint64_t> d_in;
        for (auto tok : split_ws(require("dout"))) {
            d_out.push_back(parse_number<std::uint64_t>(tok, "degree"));
        }
        for (auto tok : split_ws(require("din"))) {
            d_in.push_back(parse_number<std::uint64_t>(tok, "degree"));
        }
        cfg.degree_seqs = std::make_pair(std::move(d_out), std::move(d_in));
    }
    return cfg;
}

std::vector<std::uint64_t> read_integer_file(const std::string& path) {
    const std::string text = read_all(path);
    std::vector<std::uint64_t> out;
    std::string_view rest(text);
    std::size_t i = 0;
    while (i < rest.size()) {
        if (rest[i] == '#') {
            while (i < rest.size() && rest[i] != '\n') {
                ++i;
            }
            continue;
        }
        if (rest[i] == ' ' || rest[i] == '\t' || rest[i] == '\n' || rest[i] == '\r' || rest[i] == ',') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < rest.size() && rest[j] != ' ' && rest[j] != '\t' && rest[j] != '\n' && rest[j] != '\r' &&
               rest[j] != ',') {
            ++j;
        }
        out.push_back(parse_number<std::uint64_t>(rest.substr(i, j - i), "integer"));
        i = j;
    }
    return out;
}

}  // namespace kronlab
