#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dtlab/errors.hpp"
#include "dtlab/rowset.hpp"
#include "dtlab/table.hpp"
#include "dtlab/tree.hpp"
#include "dtlab/tree_ops.hpp"

namespace dtlab {

/// Brute-force reference minima, independent of the dynamic-programming
/// solvers. Meant for small tables; the preconditions guard the default
/// regime and `force` overrides them.
struct oracle_limits {
    int max_n = 3;
    int max_rows = 8;
    std::optional<int> max_depth;
    std::optional<int> max_nodes;
    bool force = false;
};

struct oracle_result {
    int min_depth = 0;
    int min_nodes = 0;
    decision_tree depth_witness;
    decision_tree nodes_witness;
};

// ---------------------------------------------------------------------------
// Deterministic oracle: canonical shape enumeration
// ---------------------------------------------------------------------------
//
// Any deterministic tree solving a table turns into a solving tree with two
// edges per working node, no column repeated along a path and no greater
// depth or node count, by deleting unrealizable branches and splicing out
// single-edge working nodes. Minima over these canonical shapes are
// therefore the true minima. Shapes are enumerated explicitly (leaf, or a
// column plus two sub-shapes over the remaining columns); terminal labels
// are forced by routing the rows, and every candidate is checked with the
// ordinary validator rather than any solver machinery.

namespace detail {

struct det_shape {
    int col = -1;  // -1: leaf
    int left = -1, right = -1;
};

class det_shape_arena {
public:
    explicit det_shape_arena(int n) : n_(n) { shapes_.push_back({}); /* the leaf */ }

    /// All shape ids available over the given set of unused columns.
    const std::vector<int>& shapes_over(std::uint32_t avail) {
        auto it = cache_.find(avail);
        if (it != cache_.end()) return it->second;
        std::vector<int> out{0};
        for (int c = 0; c < n_; ++c) {
            if (!(avail & (1u << c))) continue;
            const auto subs = shapes_over(avail & ~(1u << c));  // copy: recursion mutates cache_
            for (int l : subs)
                for (int r : subs) {
                    require(shapes_.size() < 5000000, errc::resource_limit,
                            "deterministic oracle shape space too large");
                    shapes_.push_back({c, l, r});
                    out.push_back(static_cast<int>(shapes_.size() - 1));
                }
        }
        return cache_.emplace(avail, std::move(out)).first->second;
    }

    const det_shape& shape(int id) const { return shapes_[static_cast<std::size_t>(id)]; }

private:
    int n_;
    std::vector<det_shape> shapes_;
    std::unordered_map<std::uint32_t, std::vector<int>> cache_;
};

struct shape_stats {
    int leaves = 0;
    int depth = 0;
};

inline shape_stats measure_shape(const det_shape_arena& arena, int id) {
    const det_shape& s = arena.shape(id);
    if (s.col < 0) return {1, 0};
    auto l = measure_shape(arena, s.left);
    auto r = measure_shape(arena, s.right);
    return {l.leaves + r.leaves, 1 + std::max(l.depth, r.depth)};
}

/// Builds the candidate tree for a shape with terminal decisions forced by
/// routing the table's rows; a leaf reached by no row gets decision 1.
inline decision_tree realize_shape(const det_shape_arena& arena, int id, const decision_table& t) {
    tree_builder b;
    auto rec = [&](auto&& self, int sid, const row_set& rows) -> node_id {
        const det_shape& s = arena.shape(sid);
        if (s.col < 0) {
            auto dec = homogeneous_decision(t, rows);
            return b.term(dec && *dec >= 1 ? *dec : 1);
        }
        node_id nid = b.work(s.col);
        b.edge(nid, 0, self(self, s.left, restrict_rows(t, rows, s.col, 0)));
        b.edge(nid, 1, self(self, s.right, restrict_rows(t, rows, s.col, 1)));
        return nid;
    };
    b.root_edge(rec(rec, id, all_rows(t)));
    return b.finish();
}

}  // namespace detail

inline oracle_result exhaustive_det_oracle(const decision_table& t, oracle_limits limits = {}) {
    if (!limits.force)
        require(t.n <= limits.max_n, errc::resource_limit,
                "deterministic oracle capped at n <= " + std::to_string(limits.max_n) +
                    " (pass force to override)");
    require(t.n <= 20, errc::resource_limit, "deterministic oracle cannot enumerate this dimension");

    const int depth_cap = limits.max_depth.value_or(t.n);
    const int node_cap = limits.max_nodes.value_or(2 * row_count(t));

    detail::det_shape_arena arena(t.n);
    const auto& ids = arena.shapes_over((1u << t.n) - 1);

    std::optional<int> best_depth, best_nodes;
    decision_tree depth_witness, nodes_witness;
    for (int id : ids) {
        auto stats = detail::measure_shape(arena, id);
        int nodes = 2 * stats.leaves;  // 1 root + k terminals + (k-1) working
        if (stats.depth > depth_cap || nodes > node_cap) continue;
        if (best_depth && stats.depth >= *best_depth && best_nodes && nodes >= *best_nodes)
            continue;  // cannot improve either objective
        decision_tree cand = detail::realize_shape(arena, id, t);
        if (!validate(cand, t, solve_mode::det).ok) continue;
        if (!best_depth || stats.depth < *best_depth) {
            best_depth = stats.depth;
            depth_witness = cand;
        }
        if (!best_nodes || nodes < *best_nodes) {
            best_nodes = nodes;
            nodes_witness = cand;
        }
    }
    require(best_depth.has_value(), errc::resource_limit,
            "no deterministic tree within the given caps");
    return {*best_depth, *best_nodes, std::move(depth_witness), std::move(nodes_witness)};
}

// ---------------------------------------------------------------------------
// Nondeterministic oracle: exact coverage composition
// ---------------------------------------------------------------------------
//
// Every nondeterministic tree solving a table within given depth/node caps
// canonicalizes, without growing either measure, to a tree in which every
// complete path is realizable, terminal labels are forced by their row sets,
// no working node tests a column constant on its context (such a node's
// redundant edges are attached to its parent instead) and sibling
// (label, subtree) pairs are pairwise distinct. Within that space, the set
// of achievable (node count, covered rows) pairs per context is computed
// bottom-up; a working node combines any nonempty multiset of child options,
// which is a coverage-union knapsack. Dominated options (no fewer nodes, no
// larger coverage) are dropped: swapping a child for a dominating one keeps
// the tree valid. The table solves within the caps iff some root combination
// covers every row.

namespace detail {

struct nd_option {
    int nodes = 0;
    row_set covered;
    // reconstruction
    bool terminal = false;
    int decision = 0;
    int col = -1;
    std::vector<std::pair<int, std::pair<std::uint64_t, int>>> children;  // (label, (ctx key, index))
};

struct nd_context_key {
    row_set rows;
    int depth;
    bool operator==(const nd_context_key&) const = default;
    struct hash {
        std::size_t operator()(const nd_context_key& k) const {
            return row_set::hash{}(k.rows) * 31 + static_cast<std::size_t>(k.depth);
        }
    };
};

class nd_search {
public:
    nd_search(const decision_table& t, int max_depth, int max_nodes)
        : t_(t), max_depth_(max_depth), max_nodes_(max_nodes) {}

    /// Minimum total node count of a tree covering all rows, with its
    /// reconstruction, or nullopt when no tree fits the caps.
    std::optional<decision_tree> find() {
        const auto& opts = options(all_rows(t_), max_depth_);
        // root combination: distinct child options, coverage must reach all rows
        auto states = combine(opts_pool(opts, all_rows(t_)), max_nodes_ - 1);
        const row_set everything = all_rows(t_);
        const combo_state* best = nullptr;
        for (const auto& s : states)
            if (s.covered == everything && (!best || s.nodes < best->nodes)) best = &s;
        if (!best) return std::nullopt;

        tree_builder b;
        for (const auto& [label, ref] : best->children) b.root_edge(build(b, ref));
        decision_tree tree = b.finish();
        // the construction is sound by design; keep the honest final check
        require(validate(tree, t_, solve_mode::nondet).ok, errc::inconsistent_profile,
                "nondeterministic search produced an invalid witness");
        return tree;
    }

private:
    struct combo_state {
        int nodes = 0;
        row_set covered;
        std::vector<std::pair<int, std::pair<std::uint64_t, int>>> children;
    };

    struct pool_entry {
        int label;  // -1 for root children
        std::pair<std::uint64_t, int> ref;
        int nodes;
        const row_set* covered;
    };

    std::uint64_t key_id(const row_set& rows, int depth) {
        nd_context_key k{rows, depth};
        auto it = key_ids_.find(k);
        if (it != key_ids_.end()) return it->second;
        std::uint64_t id = key_ids_.size();
        key_ids_.emplace(std::move(k), id);
        return id;
    }

    const std::vector<nd_option>& options(const row_set& rows, int depth) {
        std::uint64_t id = key_id(rows, depth);
        auto it = memo_.find(id);
        if (it != memo_.end()) return it->second;
        memo_.emplace(id, std::vector<nd_option>{});  // placeholder breaks no cycle: splits shrink rows

        std::vector<nd_option> out;
        if (auto dec = homogeneous_decision(t_, rows); dec && *dec >= 1) {
            nd_option term;
            term.nodes = 1;
            term.covered = rows;
            term.terminal = true;
            term.decision = *dec;
            out.push_back(std::move(term));
        }
        if (depth > 0) {
            for (int c = 0; c < t_.n; ++c) {
                if (column_constant_on(t_, rows, c)) continue;
                row_set r0 = restrict_rows(t_, rows, c, 0);
                row_set r1 = restrict_rows(t_, rows, c, 1);
                std::vector<pool_entry> pool;
                fill_pool(pool, 0, r0, depth - 1);
                fill_pool(pool, 1, r1, depth - 1);
                for (auto& s : combine(pool, max_nodes_ - 2)) {  // root + this node
                    nd_option opt;
                    opt.nodes = 1 + s.nodes;
                    opt.covered = std::move(s.covered);
                    opt.col = c;
                    opt.children = std::move(s.children);
                    out.push_back(std::move(opt));
                }
            }
        }
        pareto(out);
        return memo_[id] = std::move(out);
    }

    void fill_pool(std::vector<pool_entry>& pool, int label, const row_set& rows, int depth) {
        const auto& opts = options(rows, depth);
        std::uint64_t id = key_id(rows, depth);
        for (std::size_t i = 0; i < opts.size(); ++i)
            pool.push_back({label, {id, static_cast<int>(i)}, opts[i].nodes, &opts[i].covered});
    }

    std::vector<pool_entry> opts_pool(const std::vector<nd_option>& opts, const row_set& rows) {
        std::vector<pool_entry> pool;
        std::uint64_t id = key_id(rows, max_depth_);
        for (std::size_t i = 0; i < opts.size(); ++i)
            pool.push_back({-1, {id, static_cast<int>(i)}, opts[i].nodes, &opts[i].covered});
        return pool;
    }

    /// Coverage-union knapsack: nonempty sub-multisets of pairwise distinct
    /// pool entries, keeping the cheapest node count per exact coverage.
    std::vector<combo_state> combine(const std::vector<pool_entry>& pool, int budget) {
        std::vector<combo_state> states;
        std::unordered_map<row_set, std::size_t, row_set::hash> index;
        states.push_back({0, row_set(t_.rows.size()), {}});
        index.emplace(states[0].covered, 0);
        for (const auto& e : pool) {
            // snapshot size: each entry extends only states formed without it
            std::size_t limit = states.size();
            for (std::size_t s = 0; s < limit; ++s) {
                int nodes = states[s].nodes + e.nodes;
                if (nodes > budget) continue;
                row_set covered = states[s].covered | *e.covered;
                auto it = index.find(covered);
                if (it != index.end() && states[it->second].nodes <= nodes) continue;
                combo_state next{nodes, covered, states[s].children};
                next.children.push_back({e.label, e.ref});
                if (it == index.end()) {
                    index.emplace(std::move(covered), states.size());
                    states.push_back(std::move(next));
                } else {
                    states[it->second] = std::move(next);
                }
            }
        }
        states.erase(states.begin());  // drop the empty multiset
        return states;
    }

    static void pareto(std::vector<nd_option>& opts) {
        std::stable_sort(opts.begin(), opts.end(),
                         [](const nd_option& a, const nd_option& b) { return a.nodes < b.nodes; });
        std::vector<nd_option> kept;
        for (auto& o : opts) {
            bool dominated = false;
            for (const auto& k : kept)
                if (k.nodes <= o.nodes && o.covered.is_subset_of(k.covered)) {
                    dominated = true;
                    break;
                }
            if (!dominated) kept.push_back(std::move(o));
        }
        opts = std::move(kept);
    }

    node_id build(tree_builder& b, const std::pair<std::uint64_t, int>& ref) {
        const nd_option& o = memo_[ref.first][static_cast<std::size_t>(ref.second)];
        if (o.terminal) return b.term(o.decision);
        node_id nid = b.work(o.col);
        for (const auto& [label, child] : o.children) b.edge(nid, label, build(b, child));
        return nid;
    }

    const decision_table& t_;
    int max_depth_;
    int max_nodes_;
    std::unordered_map<nd_context_key, std::uint64_t, nd_context_key::hash> key_ids_;
    std::unordered_map<std::uint64_t, std::vector<nd_option>> memo_;
};

}  // namespace detail

/// A nondeterministic tree solving the table with depth <= max_depth and at
/// most max_nodes nodes, or nullopt when none exists. Exhaustive over the
/// canonical search space described above.
inline std::optional<decision_tree> find_nondet_tree(const decision_table& t, int max_depth,
                                                     int max_nodes) {
    if (max_nodes < 2) return std::nullopt;  // a tree has at least root + terminal
    detail::nd_search search(t, std::max(0, max_depth), max_nodes);
    return search.find();
}

inline oracle_result exhaustive_nondet_oracle(const decision_table& t, oracle_limits limits = {}) {
    if (!limits.force) {
        require(t.n <= limits.max_n, errc::resource_limit,
                "nondeterministic oracle capped at n <= " + std::to_string(limits.max_n) +
                    " (pass force to override)");
        require(row_count(t) <= limits.max_rows, errc::resource_limit,
                "nondeterministic oracle capped at " + std::to_string(limits.max_rows) + " rows");
    }

    const int rows = row_count(t);
    const int depth_cap = std::min(limits.max_depth.value_or(t.n), t.n);

    oracle_result res;
    // node-minimal tree: one exact search at full depth; canonical trees
    // never test a column twice on a path, so depth n suffices
    {
        int cap = limits.max_nodes.value_or(2 * rows);
        auto tree = find_nondet_tree(t, depth_cap, cap);
        require(tree.has_value(), errc::resource_limit, "no nondeterministic tree within the caps");
        res.min_nodes = metrics(*tree).total;
        res.nodes_witness = std::move(*tree);
    }
    // depth-minimal tree: grow d until solvable; a depth-d solution implies a
    // per-row rule of <= d equations, whose merged tree has at most
    // (d+1)*rows + 1 nodes, so that budget never excludes a feasible depth
    for (int d = 0; d <= depth_cap; ++d) {
        int budget = limits.max_nodes.value_or((d + 1) * rows + 1);
        if (auto tree = find_nondet_tree(t, d, budget)) {
            res.min_depth = d;
            res.depth_witness = std::move(*tree);
            return res;
        }
    }
    raise(errc::resource_limit, "no nondeterministic tree within the depth cap");
}

}  // namespace dtlab
