#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "dtlab/cover.hpp"
#include "dtlab/errors.hpp"
#include "dtlab/rowset.hpp"
#include "dtlab/table.hpp"

namespace dtlab {

/// A partial assignment of attribute values (a subsystem of equations) with
/// the set of table rows it selects. Constraints are kept sorted by column;
/// an empty constraint list matches all rows.
struct rule {
    std::vector<std::pair<int, int>> constraints;  // (column, value)
    row_set matched;
};

inline row_set rows_matching(const decision_table& t,
                             const std::vector<std::pair<int, int>>& constraints) {
    row_set rows = all_rows(t);
    for (const auto& [col, val] : constraints) {
        require(col >= 0 && col < t.n, errc::attribute_out_of_range,
                "constraint column " + std::to_string(col) + " out of range");
        require(val == 0 || val == 1, errc::parse_error, "constraint value must be 0 or 1");
        rows = restrict_rows(t, rows, col, val);
    }
    return rows;
}

inline rule make_rule(const decision_table& t, std::vector<std::pair<int, int>> constraints) {
    std::sort(constraints.begin(), constraints.end());
    for (std::size_t i = 1; i < constraints.size(); ++i)
        require(constraints[i].first != constraints[i - 1].first, errc::duplicate_tuple,
                "rule constrains column " + std::to_string(constraints[i].first) + " twice");
    row_set matched = rows_matching(t, constraints);
    return rule{std::move(constraints), std::move(matched)};
}

/// The complete system of equations of one row.
inline rule full_row_assignment(const decision_table& t, int row) {
    require(row >= 0 && row < row_count(t), errc::parse_error, "row index out of range");
    std::vector<std::pair<int, int>> cs;
    cs.reserve(static_cast<std::size_t>(t.n));
    for (int c = 0; c < t.n; ++c) cs.push_back({c, cell(t, static_cast<std::size_t>(row), c)});
    return make_rule(t, std::move(cs));
}

namespace detail {

/// Shared set-cover reduction: choose the fewest constraints from the given
/// pool such that every row in `exclude` violates at least one chosen
/// constraint. Tie-break: lexicographically smallest column set.
inline rule min_excluding_rule(const decision_table& t,
                               const std::vector<std::pair<int, int>>& pool,
                               const row_set& exclude, const cover_options& opts) {
    std::vector<row_set> covers;
    covers.reserve(pool.size());
    for (const auto& [col, val] : pool) {
        row_set viol(t.rows.size());
        exclude.for_each([&](std::size_t r) {
            if (cell(t, r, col) != val) viol.set(r);
        });
        covers.push_back(std::move(viol));
    }
    std::vector<int> picked = min_cover(covers, exclude, opts);
    std::vector<std::pair<int, int>> cs;
    cs.reserve(picked.size());
    for (int i : picked) cs.push_back(pool[static_cast<std::size_t>(i)]);
    return make_rule(t, std::move(cs));
}

}  // namespace detail

/// Minimum-cardinality subset of the row's full assignment whose matched
/// rows all share the row's decision. This is the shortest decision rule for
/// the row: every differently-decided row must be cut off by some kept
/// constraint.
inline rule min_consistent_rule(const decision_table& t, int row, const cover_options& opts = {}) {
    rule full = full_row_assignment(t, row);
    int decision = t.rows[static_cast<std::size_t>(row)].decision;
    row_set conflicting(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (t.rows[r].decision != decision) conflicting.set(r);
    return detail::min_excluding_rule(t, full.constraints, conflicting, opts);
}

/// Minimum-cardinality subsystem of the assignment with exactly the same
/// matched row set: every row outside it must violate a kept constraint.
inline rule min_same_solution_subsystem(const decision_table& t, const rule& assignment,
                                        const cover_options& opts = {}) {
    require(!assignment.matched.empty(), errc::incompatible_system,
            "assignment matches no row (incompatible system)");
    row_set excluded(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (!assignment.matched.test(r)) excluded.set(r);
    rule out = detail::min_excluding_rule(t, assignment.constraints, excluded, opts);
    // kept constraints are satisfied by every originally matched row
    out.matched = rows_matching(t, out.constraints);
    return out;
}

}  // namespace dtlab
