#include "polarscope/graph_io.hpp"

#include <algorithm>
#include <stdexcept>

#include "polarscope/csv.hpp"
#include "polarscope/io.hpp"

namespace polarscope {

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

namespace {

std::string xml_unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        auto take = [&](std::string_view ent, char repl) {
            if (s.substr(i, ent.size()) == ent) {
                out += repl;
                i += ent.size();
                return true;
            }
            return false;
        };
        if (take("&amp;", '&') || take("&lt;", '<') || take("&gt;", '>') ||
            take("&quot;", '"') || take("&apos;", '\''))
            continue;
        out += s[i++];
    }
    return out;
}

// ordering helpers shared by both serializers
std::vector<NodeId> nodes_by_id(const Graph& g) {
    std::vector<NodeId> order(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return g.id(a) < g.id(b); });
    return order;
}

std::vector<Graph::EdgeRecord> edges_by_id(const Graph& g) {
    std::vector<Graph::EdgeRecord> edges = g.edges();
    std::sort(edges.begin(), edges.end(),
              [&](const Graph::EdgeRecord& a, const Graph::EdgeRecord& b) {
                  if (g.id(a.from) != g.id(b.from)) return g.id(a.from) < g.id(b.from);
                  return g.id(a.to) < g.id(b.to);
              });
    return edges;
}

}  // namespace

std::string graphml_string(const Graph& g, const GraphmlSpec& spec) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    std::size_t key_no = 0;
    std::string weight_key;
    if (spec.include_weight) {
        weight_key = "d" + std::to_string(key_no++);
        out += "  <key id=\"" + weight_key +
               "\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
    }
    std::vector<std::string> attr_keys;
    for (const auto& [name, type, fn] : spec.node_attrs) {
        (void)fn;
        std::string k = "d" + std::to_string(key_no++);
        attr_keys.push_back(k);
        out += "  <key id=\"" + k + "\" for=\"node\" attr.name=\"" + xml_escape(name) +
               "\" attr.type=\"" + type + "\"/>\n";
    }
    out += "  <graph id=\"" + xml_escape(spec.graph_id) + "\" edgedefault=\"" +
           (g.directed() ? "directed" : "undirected") + "\">\n";
    for (NodeId v : nodes_by_id(g)) {
        const std::string esc = xml_escape(g.id(v));
        bool any = false;
        std::string body;
        for (std::size_t a = 0; a < spec.node_attrs.size(); ++a) {
            const auto& fn = std::get<2>(spec.node_attrs[a]);
            if (auto val = fn(g.id(v))) {
                body += "      <data key=\"" + attr_keys[a] + "\">" + xml_escape(*val) +
                        "</data>\n";
                any = true;
            }
        }
        if (any) {
            out += "    <node id=\"" + esc + "\">\n" + body + "    </node>\n";
        } else {
            out += "    <node id=\"" + esc + "\"/>\n";
        }
    }
    for (const auto& e : edges_by_id(g)) {
        out += "    <edge source=\"" + xml_escape(g.id(e.from)) + "\" target=\"" +
               xml_escape(g.id(e.to)) + "\">";
        if (spec.include_weight)
            out += "<data key=\"" + weight_key + "\">" + std::to_string(e.weight) + "</data>";
        out += "</edge>\n";
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

void write_graphml(const std::string& path, const Graph& g, const GraphmlSpec& spec) {
    write_file_atomic(path, graphml_string(g, spec));
}

namespace {

// minimal tag scanner: enough XML to read back what graphml_string writes
struct Tag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;       // </x>
    bool self_closing = false;  // <x/>
    std::size_t end = 0;        // index just past '>'
};

std::optional<Tag> next_tag(std::string_view xml, std::size_t from) {
    std::size_t lt = xml.find('<', from);
    if (lt == std::string_view::npos) return std::nullopt;
    std::size_t gt = xml.find('>', lt);
    if (gt == std::string_view::npos) return std::nullopt;
    std::string_view body = xml.substr(lt + 1, gt - lt - 1);
    Tag t;
    t.end = gt + 1;
    if (!body.empty() && body.front() == '?') {  // declaration
        t.name = "?";
        return t;
    }
    if (!body.empty() && body.front() == '/') {
        t.closing = true;
        body.remove_prefix(1);
    }
    if (!body.empty() && body.back() == '/') {
        t.self_closing = true;
        body.remove_suffix(1);
    }
    std::size_t sp = body.find_first_of(" \t\n");
    t.name = std::string(body.substr(0, sp));
    if (sp != std::string_view::npos) {
        std::string_view rest = body.substr(sp);
        std::size_t i = 0;
        while (i < rest.size()) {
            while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t' || rest[i] == '\n')) ++i;
            std::size_t eq = rest.find('=', i);
            if (eq == std::string_view::npos) break;
            std::string key(rest.substr(i, eq - i));
            std::size_t q1 = rest.find('"', eq);
            if (q1 == std::string_view::npos) break;
            std::size_t q2 = rest.find('"', q1 + 1);
            if (q2 == std::string_view::npos) break;
            t.attrs[key] = xml_unescape(rest.substr(q1 + 1, q2 - q1 - 1));
            i = q2 + 1;
        }
    }
    return t;
}

}  // namespace

ImportedGraph read_graphml_string(const std::string& xml) {
    ImportedGraph out;
    std::map<std::string, std::string> key_names;  // key id -> attr.name
    bool directed = true;
    // current container while scanning <data> children
    std::string cur_node;
    std::string cur_edge_src, cur_edge_dst;
    std::int64_t cur_edge_weight = 1;
    std::vector<std::tuple<std::string, std::string, std::int64_t>> edges;

    std::size_t pos = 0;
    while (auto tag = next_tag(xml, pos)) {
        std::size_t tag_start_end = tag->end;
        if (tag->name == "key" && !tag->closing) {
            key_names[tag->attrs["id"]] = tag->attrs["attr.name"];
        } else if (tag->name == "graph" && !tag->closing) {
            directed = tag->attrs["edgedefault"] != "undirected";
        } else if (tag->name == "node") {
            if (tag->closing) {
                cur_node.clear();
            } else {
                cur_node = tag->attrs["id"];
                out.node_attrs.try_emplace(cur_node);
                if (tag->self_closing) cur_node.clear();
            }
        } else if (tag->name == "edge") {
            if (tag->closing) {
                edges.emplace_back(cur_edge_src, cur_edge_dst, cur_edge_weight);
                cur_edge_src.clear();
            } else {
                cur_edge_src = tag->attrs["source"];
                cur_edge_dst = tag->attrs["target"];
                cur_edge_weight = 1;
                if (tag->self_closing) {
                    edges.emplace_back(cur_edge_src, cur_edge_dst, cur_edge_weight);
                    cur_edge_src.clear();
                }
            }
        } else if (tag->name == "data" && !tag->closing && !tag->self_closing) {
            std::size_t close = xml.find("</data>", tag->end);
            if (close == std::string::npos) throw std::runtime_error("graphml: unclosed <data>");
            std::string value = xml_unescape(
                std::string_view(xml).substr(tag->end, close - tag->end));
            const std::string& attr = key_names[tag->attrs["key"]];
            if (!cur_node.empty()) {
                out.node_attrs[cur_node][attr] = value;
            } else if (!cur_edge_src.empty() && attr == "weight") {
                cur_edge_weight = std::stoll(value);
            }
            tag_start_end = close + 7;
        }
        pos = tag_start_end;
    }

    Graph g(directed);
    for (const auto& [id, _] : out.node_attrs) g.add_node(id);
    for (const auto& [s, t, w] : edges) g.add_edge(s, t, w);
    g.finalize();
    out.graph = std::move(g);
    return out;
}

ImportedGraph read_graphml(const std::string& path) {
    return read_graphml_string(read_file_to_string(path));
}

std::string edgelist_csv_string(const Graph& g) {
    csv::File f;
    f.row({"source", "target", "weight"});
    for (const auto& e : edges_by_id(g))
        f.row({g.id(e.from), g.id(e.to), std::to_string(e.weight)});
    return csv::emit(f);
}

void write_edgelist_csv(const std::string& path, const Graph& g) {
    write_file_atomic(path, edgelist_csv_string(g));
}

Graph read_edgelist_csv(const std::string& path, bool directed) {
    csv::File f = csv::read_file(path);
    Graph g(directed);
    for (const auto* row : f.data_rows()) {
        if (row->size() < 2) continue;
        std::int64_t w = row->size() >= 3 ? std::stoll((*row)[2]) : 1;
        g.add_edge((*row)[0], (*row)[1], w);
    }
    g.finalize();
    return g;
}

}  // namespace polarscope
