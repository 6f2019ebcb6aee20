#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "dtlab/errors.hpp"
#include "dtlab/rowset.hpp"
#include "dtlab/table.hpp"
#include "dtlab/tree.hpp"

namespace dtlab {

enum class solve_mode { det, nondet };

inline std::string solve_mode_name(solve_mode m) { return m == solve_mode::det ? "det" : "nondet"; }

// ---------------------------------------------------------------------------
// Path row sets
// ---------------------------------------------------------------------------

namespace detail {

inline void check_attrs_in_range(const decision_tree& t, const decision_table& table) {
    for (const auto& n : t.nodes)
        if (is_work(n)) {
            int a = std::get<work_node>(n).attr;
            require(a >= 0 && a < table.n, errc::attribute_out_of_range,
                    "tree tests column " + std::to_string(a) + " but table has n=" +
                        std::to_string(table.n));
        }
}

}  // namespace detail

/// Rows satisfying every attribute=label constraint on the path. A path with
/// no working nodes selects all rows.
inline row_set path_rowset(const decision_table& table, const complete_path& path) {
    row_set rows = all_rows(table);
    for (const auto& step : path.steps) {
        require(step.attr >= 0 && step.attr < table.n, errc::attribute_out_of_range,
                "path tests column " + std::to_string(step.attr) + " but table has n=" +
                    std::to_string(table.n));
        rows = restrict_rows(table, rows, step.attr, step.label);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct violation {
    std::string where;  // "row <i>", "path <i>" or "node <id>"
    std::string reason;
};

struct verification_report {
    solve_mode mode = solve_mode::nondet;
    bool ok = true;
    std::vector<violation> violations;
};

inline njson report_to_json(const verification_report& r) {
    njson v = njson::array();
    for (const auto& x : r.violations) v.push_back(njson{{"where", x.where}, {"reason", x.reason}});
    return njson{{"mode", solve_mode_name(r.mode)}, {"ok", r.ok}, {"violations", std::move(v)}};
}

/// Checks that the tree solves the table in the requested mode. Coverage:
/// every row lies on at least one complete path. Soundness: every path with
/// a nonempty row set has all its rows sharing the decision of its terminal.
/// Deterministic mode additionally requires root out-degree 1 and distinct
/// labels on the edges leaving each working node. Failures are reported,
/// not raised.
inline verification_report validate(const decision_tree& tree, const decision_table& table,
                                    solve_mode mode) {
    detail::check_attrs_in_range(tree, table);
    verification_report rep;
    rep.mode = mode;

    if (mode == solve_mode::det) {
        const auto& r = std::get<root_node>(tree.node(tree.root));
        if (r.children.size() != 1)
            rep.violations.push_back({"node " + std::to_string(tree.root),
                                      "root has out-degree " + std::to_string(r.children.size()) +
                                          ", deterministic trees require 1"});
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            if (!is_work(tree.nodes[i])) continue;
            const auto& w = std::get<work_node>(tree.nodes[i]);
            bool saw[2] = {false, false};
            for (const auto& e : w.edges) {
                if (saw[e.label])
                    rep.violations.push_back(
                        {"node " + std::to_string(i),
                         "two edges leaving a working node carry label " + std::to_string(e.label)});
                saw[e.label] = true;
            }
        }
    }

    auto paths = complete_paths(tree);
    row_set covered(table.rows.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        row_set rows = path_rowset(table, paths[p]);
        if (rows.empty()) continue;
        covered |= rows;
        bool bad = false;
        rows.for_each([&](std::size_t r) {
            if (table.rows[r].decision != paths[p].decision) bad = true;
        });
        if (bad)
            rep.violations.push_back({"path " + std::to_string(p),
                                      "terminal labeled " + std::to_string(paths[p].decision) +
                                          " but matched rows carry other decisions"});
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        if (!covered.test(r))
            rep.violations.push_back(
                {"row " + std::to_string(r),
                 "tuple " + tuple_to_string(table.rows[r].tuple) + " lies on no complete path"});

    rep.ok = rep.violations.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Full subtrees and tree classes
// ---------------------------------------------------------------------------

namespace detail {

/// A subtree is full iff it can be pruned, by deleting whole edge-subtrees,
/// to a tree whose terminals are terminals of the original and whose every
/// working node keeps exactly two edges labeled 0 and 1. That holds exactly
/// when the subtree root is a terminal, or a working node with a prunable
/// 0-child and a prunable 1-child; the recursion explores every deletion
/// subset implicitly, memoized per node.
inline bool full_from(const decision_tree& t, node_id id, std::vector<signed char>& memo) {
    signed char& m = memo[static_cast<std::size_t>(id)];
    if (m != -1) return m != 0;
    const auto& n = t.node(id);
    bool result = false;
    if (is_term(n)) {
        result = true;  // empty deletion set, no working nodes
    } else if (is_work(n)) {
        bool have[2] = {false, false};
        for (const auto& e : std::get<work_node>(n).edges)
            if (!have[e.label] && full_from(t, e.to, memo)) have[e.label] = true;
        result = have[0] && have[1];
    }
    m = result ? 1 : 0;
    return result;
}

}  // namespace detail

/// True iff the subtree entered by the edge into `subtree_root` is full.
inline bool is_full_subtree(const decision_tree& tree, node_id subtree_root) {
    require(subtree_root >= 0 && static_cast<std::size_t>(subtree_root) < tree.nodes.size(),
            errc::parse_error, "node id out of range");
    require(!is_root(tree.node(subtree_root)), errc::parse_error,
            "the root has no incoming edge; pick a non-root node");
    std::vector<signed char> memo(tree.nodes.size(), -1);
    return detail::full_from(tree, subtree_root, memo);
}

/// Membership flags for G_d (deterministic), G_d^2 (deterministic with
/// exactly two edges per working node) and G_a^f (no full subtrees under
/// same-label multi-edge fan-outs or under a multi-edge root).
struct tree_class_flags {
    bool in_g_d = false;
    bool in_g_d2 = false;
    bool in_g_a_f = false;
};

inline tree_class_flags tree_class(const decision_tree& tree) {
    tree_class_flags f;

    bool det = std::get<root_node>(tree.node(tree.root)).children.size() == 1;
    bool two_edges = true;
    for (const auto& n : tree.nodes) {
        if (!is_work(n)) continue;
        const auto& w = std::get<work_node>(n);
        bool saw[2] = {false, false};
        for (const auto& e : w.edges) {
            if (saw[e.label]) det = false;
            saw[e.label] = true;
        }
        if (w.edges.size() != 2) two_edges = false;
    }
    f.in_g_d = det;
    f.in_g_d2 = det && two_edges;

    std::vector<signed char> memo(tree.nodes.size(), -1);
    bool a_f = true;
    const auto& r = std::get<root_node>(tree.node(tree.root));
    if (r.children.size() >= 2)
        for (node_id c : r.children)
            if (detail::full_from(tree, c, memo)) a_f = false;
    for (const auto& n : tree.nodes) {
        if (!is_work(n)) continue;
        const auto& w = std::get<work_node>(n);
        for (int label = 0; label <= 1; ++label) {
            std::vector<node_id> same;
            for (const auto& e : w.edges)
                if (e.label == label) same.push_back(e.to);
            if (same.size() >= 2)
                for (node_id c : same)
                    if (detail::full_from(tree, c, memo)) a_f = false;
        }
    }
    f.in_g_a_f = a_f;
    return f;
}

// ---------------------------------------------------------------------------
// Normal-form transformations
// ---------------------------------------------------------------------------

/// Removes every node and edge that lies on no realizable complete path.
/// Expects a tree that validates nondeterministically against the table;
/// the result still validates and no complete path of it is unrealizable.
inline decision_tree prune_unrealizable(const decision_tree& tree, const decision_table& table) {
    detail::check_attrs_in_range(tree, table);
    tree_builder b;
    // returns the rebuilt node, or nullopt when no realizable path enters it
    auto rec = [&](auto&& self, node_id id, const row_set& rows) -> std::optional<node_id> {
        const auto& n = tree.node(id);
        if (is_term(n)) {
            if (rows.empty()) return std::nullopt;
            return b.term(std::get<term_node>(n).decision);
        }
        const auto& w = std::get<work_node>(n);
        std::vector<tree_edge> kept;
        for (const auto& e : w.edges) {
            row_set child_rows = restrict_rows(table, rows, w.attr, e.label);
            if (auto child = self(self, e.to, child_rows)) kept.push_back({e.label, *child});
        }
        if (kept.empty()) return std::nullopt;
        node_id nid = b.work(w.attr);
        for (const auto& e : kept) b.edge(nid, e.label, e.to);
        return nid;
    };
    const auto& r = std::get<root_node>(tree.node(tree.root));
    row_set rows = all_rows(table);
    int attached = 0;
    for (node_id c : r.children)
        if (auto child = rec(rec, c, rows)) {
            b.root_edge(*child);
            ++attached;
        }
    require(attached > 0, errc::parse_error,
            "no realizable complete path; the input tree cannot have solved the table");
    return b.finish();
}

/// Removes every working node with exactly one leaving edge, connecting the
/// incoming edge to its child; cascades to a fixpoint. Dropping a constraint
/// can only widen the row set of a surviving terminal.
inline decision_tree collapse_single_child(const decision_tree& tree) {
    tree_builder b;
    auto rec = [&](auto&& self, node_id id) -> node_id {
        const auto& n = tree.node(id);
        if (is_term(n)) return b.term(std::get<term_node>(n).decision);
        const auto& w = std::get<work_node>(n);
        if (w.edges.size() == 1) return self(self, w.edges.front().to);
        node_id nid = b.work(w.attr);
        for (const auto& e : w.edges) b.edge(nid, e.label, self(self, e.to));
        return nid;
    };
    for (node_id c : std::get<root_node>(tree.node(tree.root)).children) b.root_edge(rec(rec, c));
    return b.finish();
}

}  // namespace dtlab
