#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dtlab/errors.hpp"
#include "dtlab/oracle.hpp"
#include "dtlab/rules.hpp"
#include "dtlab/table.hpp"
#include "dtlab/tree.hpp"
#include "dtlab/tree_ops.hpp"

namespace dtlab {

enum class optimality { exact, upper_bound, infeasible };

inline std::string optimality_name(optimality o) {
    switch (o) {
        case optimality::exact: return "exact";
        case optimality::upper_bound: return "upper_bound";
        case optimality::infeasible: return "infeasible";
    }
    return "?";
}

struct solve_stats {
    std::uint64_t subproblems = 0;
    double ms = 0.0;
};

/// Solver outcome. When the grade is exact, no tree of the requested kind
/// beats the objective; witnesses always validate in the requested mode.
/// Stats are informational and excluded from byte-stability guarantees.
struct solve_result {
    std::optional<int> objective;
    std::optional<decision_tree> tree;
    optimality grade = optimality::exact;
    std::optional<int> lower_bound;  // reported with upper_bound grades
    solve_stats stats;
};

inline njson solve_result_to_json(const solve_result& r) {
    njson j;
    j["objective"] = r.objective ? njson(*r.objective) : njson(nullptr);
    j["optimality"] = optimality_name(r.grade);
    j["tree"] = r.tree ? tree_to_json(*r.tree) : njson(nullptr);
    if (r.lower_bound) j["lower_bound"] = *r.lower_bound;
    j["stats"] = njson{{"subproblems", r.stats.subproblems}, {"ms", r.stats.ms}};
    return j;
}

struct solver_limits {
    std::uint64_t memo_cap = std::uint64_t{1} << 24;
};

namespace detail {

class stopwatch {
public:
    stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Memoized value of one subproblem: objective plus the column chosen by the
// canonical tie-break (-1 when the row set is decision-homogeneous).
struct dp_entry {
    int value = 0;
    int col = -1;
};

template <class Map>
void check_memo_cap(const Map& memo, const solver_limits& limits) {
    require(memo.size() <= limits.memo_cap, errc::resource_limit, "solver memo cap exceeded");
}

/// Rebuilds the witness from a memo of split choices.
template <class Map>
decision_tree witness_from_memo(const decision_table& t, const Map& memo, const row_set& start) {
    tree_builder b;
    auto rec = [&](auto&& self, const row_set& rows) -> node_id {
        const dp_entry& e = memo.at(rows);
        if (e.col < 0) return b.term(*homogeneous_decision(t, rows));
        node_id nid = b.work(e.col);
        b.edge(nid, 0, self(self, restrict_rows(t, rows, e.col, 0)));
        b.edge(nid, 1, self(self, restrict_rows(t, rows, e.col, 1)));
        return nid;
    };
    b.root_edge(rec(rec, start));
    return b.finish();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Deterministic solvers
// ---------------------------------------------------------------------------

/// Exact minimum depth of a deterministic solving tree. Recursion: 0 on a
/// homogeneous row set, else 1 + min over non-constant columns of the worse
/// branch, memoized on the row set. Ties break to the lowest column index.
inline solve_result min_depth_det(const decision_table& t, const solver_limits& limits = {}) {
    detail::stopwatch timer;
    std::unordered_map<row_set, detail::dp_entry, row_set::hash> memo;

    auto rec = [&](auto&& self, const row_set& rows) -> int {
        auto it = memo.find(rows);
        if (it != memo.end()) return it->second.value;
        detail::check_memo_cap(memo, limits);
        detail::dp_entry e;
        if (is_homogeneous(t, rows)) {
            e = {0, -1};
        } else {
            e.value = row_count(t) + 1;
            for (int c = 0; c < t.n; ++c) {
                if (column_constant_on(t, rows, c)) continue;
                int d0 = self(self, restrict_rows(t, rows, c, 0));
                int d1 = self(self, restrict_rows(t, rows, c, 1));
                int d = 1 + std::max(d0, d1);
                if (d < e.value) {
                    e.value = d;
                    e.col = c;
                }
            }
        }
        memo.emplace(rows, e);
        return e.value;
    };

    solve_result res;
    res.objective = rec(rec, all_rows(t));
    res.tree = detail::witness_from_memo(t, memo, all_rows(t));
    res.grade = optimality::exact;
    res.stats = {memo.size(), timer.ms()};
    return res;
}

/// Exact minimum node count of a deterministic solving tree (root included).
/// A homogeneous row set costs one terminal; otherwise one working node plus
/// both branches, minimized over non-constant columns -- an optimal tree
/// never needs a single-edge working node or a constant split.
inline solve_result min_nodes_det(const decision_table& t, const solver_limits& limits = {}) {
    detail::stopwatch timer;
    std::unordered_map<row_set, detail::dp_entry, row_set::hash> memo;

    auto rec = [&](auto&& self, const row_set& rows) -> int {
        auto it = memo.find(rows);
        if (it != memo.end()) return it->second.value;
        detail::check_memo_cap(memo, limits);
        detail::dp_entry e;
        if (is_homogeneous(t, rows)) {
            e = {1, -1};
        } else {
            e.value = 4 * row_count(t) + 1;
            for (int c = 0; c < t.n; ++c) {
                if (column_constant_on(t, rows, c)) continue;
                int cost = 1 + self(self, restrict_rows(t, rows, c, 0)) +
                           self(self, restrict_rows(t, rows, c, 1));
                if (cost < e.value) {
                    e.value = cost;
                    e.col = c;
                }
            }
        }
        memo.emplace(rows, e);
        return e.value;
    };

    solve_result res;
    res.objective = 1 + rec(rec, all_rows(t));  // the root
    res.tree = detail::witness_from_memo(t, memo, all_rows(t));
    res.grade = optimality::exact;
    res.stats = {memo.size(), timer.ms()};
    return res;
}

/// Exact minimum node count among deterministic trees of depth at most
/// `depth_budget`; infeasible when the budget cannot separate the decisions.
inline solve_result min_nodes_det_budgeted(const decision_table& t, int depth_budget,
                                           const solver_limits& limits = {}) {
    require(depth_budget >= 0, errc::parse_error, "depth budget must be >= 0");
    detail::stopwatch timer;

    struct key {
        row_set rows;
        int budget;
        bool operator==(const key&) const = default;
        struct hash {
            std::size_t operator()(const key& k) const {
                return row_set::hash{}(k.rows) * 31 + static_cast<std::size_t>(k.budget);
            }
        };
    };
    struct entry {
        std::optional<int> value;  // nullopt: infeasible
        int col = -1;
    };
    std::unordered_map<key, entry, typename key::hash> memo;

    auto rec = [&](auto&& self, const row_set& rows, int budget) -> std::optional<int> {
        key k{rows, budget};
        auto it = memo.find(k);
        if (it != memo.end()) return it->second.value;
        detail::check_memo_cap(memo, limits);
        entry e;
        if (is_homogeneous(t, rows)) {
            e.value = 1;
        } else if (budget == 0) {
            e.value = std::nullopt;
        } else {
            for (int c = 0; c < t.n; ++c) {
                if (column_constant_on(t, rows, c)) continue;
                auto c0 = self(self, restrict_rows(t, rows, c, 0), budget - 1);
                auto c1 = self(self, restrict_rows(t, rows, c, 1), budget - 1);
                if (!c0 || !c1) continue;
                int cost = 1 + *c0 + *c1;
                if (!e.value || cost < *e.value) {
                    e.value = cost;
                    e.col = c;
                }
            }
        }
        memo.emplace(std::move(k), e);
        return e.value;
    };

    solve_result res;
    auto cost = rec(rec, all_rows(t), depth_budget);
    if (!cost) {
        res.grade = optimality::infeasible;
        res.stats = {memo.size(), timer.ms()};
        return res;
    }
    res.objective = 1 + *cost;

    // witness rebuild, following the memoized budgeted choices
    tree_builder b;
    auto build = [&](auto&& self, const row_set& rows, int budget) -> node_id {
        const entry& e = memo.at(key{rows, budget});
        if (e.col < 0) return b.term(*homogeneous_decision(t, rows));
        node_id nid = b.work(e.col);
        b.edge(nid, 0, self(self, restrict_rows(t, rows, e.col, 0), budget - 1));
        b.edge(nid, 1, self(self, restrict_rows(t, rows, e.col, 1), budget - 1));
        return nid;
    };
    b.root_edge(build(build, all_rows(t), depth_budget));
    res.tree = b.finish();
    res.grade = optimality::exact;
    res.stats = {memo.size(), timer.ms()};
    return res;
}

// ---------------------------------------------------------------------------
// Nondeterministic solvers
// ---------------------------------------------------------------------------

namespace detail {

/// Root-merged tree of per-row rule paths: each path tests its constraints
/// in ascending column order and ends in the row's decision. Identical
/// paths merge into one (empty rules all collapse onto a single terminal).
inline decision_tree merged_rule_tree(const std::vector<std::pair<rule, int>>& paths) {
    std::vector<std::pair<std::vector<std::pair<int, int>>, int>> unique;
    for (const auto& [r, decision] : paths) {
        std::pair<std::vector<std::pair<int, int>>, int> key{r.constraints, decision};
        if (std::find(unique.begin(), unique.end(), key) == unique.end())
            unique.push_back(std::move(key));
    }
    tree_builder b;
    for (const auto& [constraints, decision] : unique) {
        node_id tip = b.term(decision);
        node_id head = tip;
        // build the chain back to front
        for (auto it = constraints.rbegin(); it != constraints.rend(); ++it) {
            node_id w = b.work(it->first);
            b.edge(w, it->second, head);
            head = w;
        }
        b.root_edge(head);
    }
    return b.finish();
}

}  // namespace detail

/// Exact minimum depth of a nondeterministic solving tree. A depth-d tree
/// yields, for each row, a consistent rule of at most d equations (the
/// realizable path covering it), and per-row minimum rules merge back into a
/// tree of depth max rule length; so the optimum is the worst minimum
/// consistent rule, and the merged rule tree is a witness.
inline solve_result min_depth_nondet(const decision_table& t, const cover_options& copts = {}) {
    detail::stopwatch timer;
    std::vector<std::pair<rule, int>> paths;
    int worst = 0;
    for (int r = 0; r < row_count(t); ++r) {
        rule rr = min_consistent_rule(t, r, copts);
        worst = std::max(worst, static_cast<int>(rr.constraints.size()));
        paths.push_back({std::move(rr), t.rows[static_cast<std::size_t>(r)].decision});
    }
    solve_result res;
    res.objective = worst;
    res.tree = detail::merged_rule_tree(paths);
    res.grade = optimality::exact;
    res.stats = {static_cast<std::uint64_t>(row_count(t)), timer.ms()};
    return res;
}

/// The reduction-based construction: one path per row carrying its minimum
/// same-solution subsystem, merged at the root. Gives a nondeterministic
/// witness with h <= m and L <= (m+1)N + 1 where m is the table's reduction
/// parameter over full rows. The objective reports the node count; the tree
/// is a boundary-pair construction, not a node-count optimum.
inline solve_result build_reduction_tree(const decision_table& t, const cover_options& copts = {}) {
    detail::stopwatch timer;
    std::vector<std::pair<rule, int>> paths;
    for (int r = 0; r < row_count(t); ++r) {
        rule sub = min_same_solution_subsystem(t, full_row_assignment(t, r), copts);
        paths.push_back({std::move(sub), t.rows[static_cast<std::size_t>(r)].decision});
    }
    solve_result res;
    res.tree = detail::merged_rule_tree(paths);
    res.objective = metrics(*res.tree).total;
    res.grade = optimality::upper_bound;
    res.stats = {static_cast<std::uint64_t>(row_count(t)), timer.ms()};
    return res;
}

/// Minimum node count of a nondeterministic solving tree. Exact for
/// injective tables (2 x rows: terminals must number at least the rows and
/// working nodes at least terminals minus one, while the deterministic
/// minimum already achieves that) and for small general tables via the
/// exhaustive search; otherwise the deterministic minimum is reported as an
/// upper bound together with the 2 x (distinct decisions) lower bound.
inline solve_result min_nodes_nondet(const decision_table& t, const solver_limits& limits = {}) {
    detail::stopwatch timer;
    solve_result res;
    if (is_injective(t)) {
        res = min_nodes_det(t, limits);
        require(res.objective == 2 * row_count(t), errc::inconsistent_profile,
                "injective table violated the 2N node law");
        res.grade = optimality::exact;
        res.stats.ms = timer.ms();
        return res;
    }
    if (t.n <= 3 && row_count(t) <= 8) {
        auto tree = find_nondet_tree(t, t.n, 2 * row_count(t));
        require(tree.has_value(), errc::inconsistent_profile,
                "exhaustive search found no tree within 2N nodes");
        res.objective = metrics(*tree).total;
        res.tree = std::move(*tree);
        res.grade = optimality::exact;
        res.stats = {0, timer.ms()};
        return res;
    }
    res = min_nodes_det(t, limits);
    res.lower_bound = 2 * distinct_decision_count(t);
    res.grade = (res.objective == res.lower_bound) ? optimality::exact : optimality::upper_bound;
    res.stats.ms = timer.ms();
    return res;
}

}  // namespace dtlab
