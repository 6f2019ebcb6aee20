#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dtlab/errors.hpp"
#include "dtlab/table.hpp"

namespace dtlab {

using node_id = std::int32_t;

/// The root carries no label and its leaving edges carry no label either.
struct root_node {
    std::vector<node_id> children;
};

struct tree_edge {
    int label = 0;  // 0 or 1
    node_id to = -1;
};

/// Working node: tests a 0-based column of the bound table. Duplicate edge
/// labels are allowed (nondeterministic trees).
struct work_node {
    int attr = 0;
    std::vector<tree_edge> edges;
};

struct term_node {
    int decision = 1;
};

using tree_node = std::variant<root_node, work_node, term_node>;

/// Rooted tree with an unlabeled root, attribute-labeled working nodes,
/// 0/1-labeled edges and decision-labeled terminals. Attribute indices are
/// column positions into a decision table; the table is the sole binding
/// context. Trees are immutable; transformations return new trees.
struct decision_tree {
    std::vector<tree_node> nodes;
    node_id root = 0;

    const tree_node& node(node_id id) const { return nodes[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return nodes.size(); }
};

inline bool is_root(const tree_node& n) { return std::holds_alternative<root_node>(n); }
inline bool is_work(const tree_node& n) { return std::holds_alternative<work_node>(n); }
inline bool is_term(const tree_node& n) { return std::holds_alternative<term_node>(n); }

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

class tree_builder {
public:
    node_id root() {
        if (root_ < 0) {
            root_ = static_cast<node_id>(nodes_.size());
            nodes_.emplace_back(root_node{});
        }
        return root_;
    }

    node_id work(int attr) {
        nodes_.emplace_back(work_node{attr, {}});
        return static_cast<node_id>(nodes_.size() - 1);
    }

    node_id term(int decision) {
        nodes_.emplace_back(term_node{decision});
        return static_cast<node_id>(nodes_.size() - 1);
    }

    void edge(node_id from, int label, node_id to) {
        std::get<work_node>(nodes_[static_cast<std::size_t>(from)]).edges.push_back({label, to});
    }

    void root_edge(node_id to) {
        std::get<root_node>(nodes_[static_cast<std::size_t>(root())]).children.push_back(to);
    }

    decision_tree finish();

private:
    std::vector<tree_node> nodes_;
    node_id root_ = -1;
};

/// Checks the structural invariants: exactly one root, the digraph is a tree
/// directed away from it, the root and every working node have at least one
/// leaving edge, edge labels are 0/1, leaves are terminals, decisions >= 1.
inline void check_well_formed(const decision_tree& t) {
    require(!t.nodes.empty(), errc::parse_error, "tree has no nodes");
    require(t.root >= 0 && static_cast<std::size_t>(t.root) < t.nodes.size(), errc::parse_error,
            "root id out of range");
    require(is_root(t.node(t.root)), errc::parse_error, "root id does not name a root node");
    std::vector<int> indegree(t.nodes.size(), 0);
    int roots = 0;
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto& n = t.nodes[i];
        if (is_root(n)) {
            ++roots;
            const auto& r = std::get<root_node>(n);
            require(!r.children.empty(), errc::parse_error, "root must have at least one edge");
            for (node_id c : r.children) {
                require(c >= 0 && static_cast<std::size_t>(c) < t.nodes.size(), errc::parse_error,
                        "edge target out of range");
                ++indegree[static_cast<std::size_t>(c)];
            }
        } else if (is_work(n)) {
            const auto& w = std::get<work_node>(n);
            require(w.attr >= 0, errc::parse_error, "attribute index must be >= 0");
            require(!w.edges.empty(), errc::parse_error,
                    "working node must have at least one edge");
            for (const auto& e : w.edges) {
                require(e.label == 0 || e.label == 1, errc::parse_error, "edge label must be 0 or 1");
                require(e.to >= 0 && static_cast<std::size_t>(e.to) < t.nodes.size(),
                        errc::parse_error, "edge target out of range");
                ++indegree[static_cast<std::size_t>(e.to)];
            }
        } else {
            require(std::get<term_node>(n).decision >= 1, errc::parse_error,
                    "terminal decision must be >= 1");
        }
    }
    require(roots == 1, errc::parse_error, "tree must have exactly one root node");
    require(indegree[static_cast<std::size_t>(t.root)] == 0, errc::parse_error,
            "root must have no incoming edges");
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        if (static_cast<node_id>(i) == t.root) continue;
        require(indegree[i] == 1, errc::parse_error,
                "node " + std::to_string(i) + " must have exactly one incoming edge");
    }
    // acyclicity follows from indegrees once every node hangs under the root;
    // walk to confirm reachability
    std::vector<bool> seen(t.nodes.size(), false);
    std::vector<node_id> stack{t.root};
    std::size_t visited = 0;
    while (!stack.empty()) {
        node_id id = stack.back();
        stack.pop_back();
        if (seen[static_cast<std::size_t>(id)]) continue;
        seen[static_cast<std::size_t>(id)] = true;
        ++visited;
        const auto& n = t.node(id);
        if (is_root(n))
            for (node_id c : std::get<root_node>(n).children) stack.push_back(c);
        else if (is_work(n))
            for (const auto& e : std::get<work_node>(n).edges) stack.push_back(e.to);
    }
    require(visited == t.nodes.size(), errc::parse_error, "tree has unreachable nodes");
}

inline decision_tree tree_builder::finish() {
    decision_tree t{std::move(nodes_), root_};
    check_well_formed(t);
    return t;
}

/// root -> single terminal, the tree of a constant problem.
inline decision_tree constant_tree(int decision) {
    tree_builder b;
    b.root_edge(b.term(decision));
    return b.finish();
}

// ---------------------------------------------------------------------------
// Metrics and complete paths
// ---------------------------------------------------------------------------

/// L = 1 + L_t + L_w; depth counts working nodes only.
struct tree_metrics {
    int total = 0;      // L
    int terminals = 0;  // L_t
    int working = 0;    // L_w
    int depth = 0;      // h
};

inline tree_metrics metrics(const decision_tree& t) {
    tree_metrics m;
    m.total = static_cast<int>(t.nodes.size());
    for (const auto& n : t.nodes) {
        if (is_term(n)) ++m.terminals;
        else if (is_work(n)) ++m.working;
    }
    struct frame {
        node_id id;
        int depth;
    };
    std::vector<frame> stack{{t.root, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const auto& n = t.node(id);
        if (is_term(n)) m.depth = std::max(m.depth, d);
        else if (is_root(n))
            for (node_id c : std::get<root_node>(n).children) stack.push_back({c, d});
        else
            for (const auto& e : std::get<work_node>(n).edges) stack.push_back({e.to, d + 1});
    }
    return m;
}

struct path_step {
    int attr = 0;
    int label = 0;
};

/// One root-to-terminal path: the attribute equations along it plus the
/// terminal's decision.
struct complete_path {
    std::vector<node_id> nodes;  // root first, terminal last
    std::vector<path_step> steps;
    int decision = 0;
};

inline std::vector<complete_path> complete_paths(const decision_tree& t) {
    std::vector<complete_path> out;
    complete_path cur;
    auto rec = [&](auto&& self, node_id id) -> void {
        cur.nodes.push_back(id);
        const auto& n = t.node(id);
        if (is_term(n)) {
            cur.decision = std::get<term_node>(n).decision;
            out.push_back(cur);
        } else if (is_root(n)) {
            for (node_id c : std::get<root_node>(n).children) self(self, c);
        } else {
            const auto& w = std::get<work_node>(n);
            for (const auto& e : w.edges) {
                cur.steps.push_back({w.attr, e.label});
                self(self, e.to);
                cur.steps.pop_back();
            }
        }
        cur.nodes.pop_back();
    };
    rec(rec, t.root);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical form, equality, serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string node_signature(const decision_tree& t, node_id id) {
    const auto& n = t.node(id);
    if (is_term(n)) return "t" + std::to_string(std::get<term_node>(n).decision);
    if (is_work(n)) {
        const auto& w = std::get<work_node>(n);
        std::vector<std::string> parts;
        parts.reserve(w.edges.size());
        for (const auto& e : w.edges)
            parts.push_back(std::to_string(e.label) + ":" + node_signature(t, e.to));
        std::sort(parts.begin(), parts.end());
        std::string s = "w" + std::to_string(w.attr) + "[";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ',';
            s += parts[i];
        }
        return s + "]";
    }
    const auto& r = std::get<root_node>(n);
    std::vector<std::string> parts;
    parts.reserve(r.children.size());
    for (node_id c : r.children) parts.push_back(node_signature(t, c));
    std::sort(parts.begin(), parts.end());
    std::string s = "r[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ',';
        s += parts[i];
    }
    return s + "]";
}

}  // namespace detail

inline std::string tree_signature(const decision_tree& t) {
    return detail::node_signature(t, t.root);
}

/// Equality up to node renumbering and sibling order.
inline bool structurally_equal(const decision_tree& a, const decision_tree& b) {
    return tree_signature(a) == tree_signature(b);
}

/// Renumbers nodes in preorder with children sorted by (label, subtree
/// signature). Two structurally equal trees canonicalize to byte-identical
/// serializations.
inline decision_tree canonicalize(const decision_tree& t) {
    decision_tree out;
    auto rec = [&](auto&& self, node_id id) -> node_id {
        const auto& n = t.node(id);
        node_id nid = static_cast<node_id>(out.nodes.size());
        out.nodes.emplace_back();  // placeholder, filled after children
        if (is_term(n)) {
            out.nodes[static_cast<std::size_t>(nid)] = n;
        } else if (is_work(n)) {
            const auto& w = std::get<work_node>(n);
            std::vector<std::pair<std::pair<int, std::string>, node_id>> order;
            for (const auto& e : w.edges)
                order.push_back({{e.label, detail::node_signature(t, e.to)}, e.to});
            std::sort(order.begin(), order.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            work_node copy{w.attr, {}};
            for (const auto& [key, child] : order) copy.edges.push_back({key.first, self(self, child)});
            out.nodes[static_cast<std::size_t>(nid)] = std::move(copy);
        } else {
            const auto& r = std::get<root_node>(n);
            std::vector<std::pair<std::string, node_id>> order;
            for (node_id c : r.children) order.push_back({detail::node_signature(t, c), c});
            std::sort(order.begin(), order.end());
            root_node copy;
            for (const auto& [sig, child] : order) copy.children.push_back(self(self, child));
            out.nodes[static_cast<std::size_t>(nid)] = std::move(copy);
        }
        return nid;
    };
    out.root = rec(rec, t.root);
    return out;
}

inline njson tree_to_json(const decision_tree& t) {
    decision_tree c = canonicalize(t);
    njson nodes = njson::array();
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        const auto& n = c.nodes[i];
        njson jn;
        jn["id"] = static_cast<int>(i);
        if (is_root(n)) {
            jn["kind"] = "root";
            njson edges = njson::array();
            for (node_id ch : std::get<root_node>(n).children)
                edges.push_back(njson{{"to", static_cast<int>(ch)}});
            jn["edges"] = std::move(edges);
        } else if (is_work(n)) {
            const auto& w = std::get<work_node>(n);
            jn["kind"] = "work";
            jn["attr"] = w.attr;
            njson edges = njson::array();
            for (const auto& e : w.edges)
                edges.push_back(njson{{"label", e.label}, {"to", static_cast<int>(e.to)}});
            jn["edges"] = std::move(edges);
        } else {
            jn["kind"] = "term";
            jn["decision"] = std::get<term_node>(n).decision;
        }
        nodes.push_back(std::move(jn));
    }
    return njson{{"format", "dtree-v1"}, {"root", static_cast<int>(c.root)}, {"nodes", std::move(nodes)}};
}

inline std::string tree_to_string(const decision_tree& t) { return tree_to_json(t).dump(); }

inline decision_tree tree_from_json(const njson& j) {
    require(j.is_object(), errc::parse_error, "dtree-v1 document must be an object");
    require(j.contains("format") && j["format"] == "dtree-v1", errc::parse_error,
            "missing or unexpected format tag (want \"dtree-v1\")");
    require(j.contains("root") && j["root"].is_number_integer(), errc::parse_error,
            "missing integer field \"root\"");
    require(j.contains("nodes") && j["nodes"].is_array(), errc::parse_error,
            "missing array field \"nodes\"");

    // ids in the file may be sparse; remap to dense indices
    std::map<long long, node_id> remap;
    for (const auto& jn : j["nodes"]) {
        require(jn.is_object() && jn.contains("id") && jn["id"].is_number_integer(),
                errc::parse_error, "each node must carry an integer \"id\"");
        long long id = jn["id"].get<long long>();
        require(remap.emplace(id, static_cast<node_id>(remap.size())).second, errc::parse_error,
                "duplicate node id " + std::to_string(id));
    }
    auto lookup = [&](long long id) {
        auto it = remap.find(id);
        require(it != remap.end(), errc::parse_error, "edge points to unknown node id");
        return it->second;
    };

    decision_tree t;
    t.nodes.resize(remap.size());
    for (const auto& jn : j["nodes"]) {
        node_id id = lookup(jn["id"].get<long long>());
        std::string kind = jn.value("kind", "");
        if (kind == "root") {
            root_node r;
            require(jn.contains("edges") && jn["edges"].is_array(), errc::parse_error,
                    "root node needs an \"edges\" array");
            for (const auto& je : jn["edges"]) r.children.push_back(lookup(je.at("to").get<long long>()));
            t.nodes[static_cast<std::size_t>(id)] = std::move(r);
        } else if (kind == "work") {
            work_node w;
            require(jn.contains("attr") && jn["attr"].is_number_integer(), errc::parse_error,
                    "working node needs an integer \"attr\"");
            w.attr = jn["attr"].get<int>();
            require(jn.contains("edges") && jn["edges"].is_array(), errc::parse_error,
                    "working node needs an \"edges\" array");
            for (const auto& je : jn["edges"]) {
                int label = je.at("label").get<int>();
                w.edges.push_back({label, lookup(je.at("to").get<long long>())});
            }
            t.nodes[static_cast<std::size_t>(id)] = std::move(w);
        } else if (kind == "term") {
            require(jn.contains("decision") && jn["decision"].is_number_integer(),
                    errc::parse_error, "terminal node needs an integer \"decision\"");
            t.nodes[static_cast<std::size_t>(id)] = term_node{jn["decision"].get<int>()};
        } else {
            raise(errc::parse_error, "unknown node kind \"" + kind + "\"");
        }
    }
    t.root = lookup(j["root"].get<long long>());
    check_well_formed(t);
    return t;
}

inline decision_tree tree_from_string(const std::string& text) {
    njson j = njson::parse(text, nullptr, false);
    require(!j.is_discarded(), errc::parse_error, "invalid JSON");
    return tree_from_json(j);
}

/// DOT export: root rendered as a point, working nodes labeled "f<attr>",
/// terminals labeled "d=<decision>". Root edges are unlabeled.
inline std::string tree_to_dot(const decision_tree& t, const std::string& graph_name = "dtree") {
    decision_tree c = canonicalize(t);
    std::string out = "digraph " + graph_name + " {\n";
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        const auto& n = c.nodes[i];
        std::string id = "n" + std::to_string(i);
        if (is_root(n)) out += "  " + id + " [shape=point];\n";
        else if (is_work(n))
            out += "  " + id + " [label=\"f" + std::to_string(std::get<work_node>(n).attr) + "\"];\n";
        else
            out += "  " + id + " [shape=box, label=\"d=" +
                   std::to_string(std::get<term_node>(n).decision) + "\"];\n";
    }
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        const auto& n = c.nodes[i];
        std::string id = "n" + std::to_string(i);
        if (is_root(n)) {
            for (node_id ch : std::get<root_node>(n).children)
                out += "  " + id + " -> n" + std::to_string(ch) + ";\n";
        } else if (is_work(n)) {
            for (const auto& e : std::get<work_node>(n).edges)
                out += "  " + id + " -> n" + std::to_string(e.to) + " [label=\"" +
                       std::to_string(e.label) + "\"];\n";
        }
    }
    out += "}\n";
    return out;
}

}  // namespace dtlab
