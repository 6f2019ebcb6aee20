#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dtlab/errors.hpp"
#include "dtlab/rules.hpp"
#include "dtlab/table.hpp"

namespace dtlab {

/// Rows are exactly the realizable tuples, so N is the row count.
inline int count_realizable(const decision_table& t) { return row_count(t); }

/// Largest m such that some m columns are shattered: their projection of the
/// rows equals {0,1}^m. Zero when no single column takes both values; the
/// empty attribute set is independent by definition.
inline int independence_dimension(const decision_table& t) {
    const int rows = row_count(t);
    int cap = 0;
    while ((1ll << (cap + 1)) <= rows && cap + 1 <= t.n) ++cap;

    std::vector<int> subset;
    auto shattered = [&](const std::vector<int>& cols) {
        std::vector<std::uint32_t> seen;
        seen.reserve(t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            std::uint32_t key = 0;
            for (std::size_t k = 0; k < cols.size(); ++k)
                key |= static_cast<std::uint32_t>(cell(t, r, cols[k])) << k;
            seen.push_back(key);
        }
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        return seen.size() == (std::size_t{1} << cols.size());
    };
    auto exists_of_size = [&](auto&& self, int m, int from) -> bool {
        if (static_cast<int>(subset.size()) == m) return shattered(subset);
        for (int c = from; c < t.n; ++c) {
            subset.push_back(c);
            if (self(self, m, c + 1)) {
                subset.pop_back();
                return true;
            }
            subset.pop_back();
        }
        return false;
    };
    for (int m = cap; m >= 1; --m)
        if (exists_of_size(exists_of_size, m, 0)) return m;
    return 0;
}

enum class reduction_scope { full_rows, all_partial };

/// Worst minimum same-solution subsystem size, over the full row assignments
/// or over all compatible partial assignments. On a finite restriction this
/// is only a lower bound for any reduction parameter of an extending
/// infinite system (reported "at scale n" by callers).
inline int reduction_parameter(const decision_table& t, reduction_scope scope,
                               const cover_options& opts = {}) {
    if (scope == reduction_scope::full_rows) {
        int worst = 0;
        for (int r = 0; r < row_count(t); ++r) {
            rule sub = min_same_solution_subsystem(t, full_row_assignment(t, r), opts);
            worst = std::max(worst, static_cast<int>(sub.constraints.size()));
        }
        return worst;
    }

    // all_partial: every column unset / 0 / 1
    double cost = std::pow(3.0, t.n) * static_cast<double>(row_count(t));
    require(cost <= 1e8, errc::resource_limit,
            "all_partial reduction scan too large (3^n * rows = " + std::to_string(cost) + ")");
    int worst = 0;
    std::vector<int> state(static_cast<std::size_t>(t.n), -1);  // -1 unset
    auto rec = [&](auto&& self, int col) -> void {
        if (col == t.n) {
            std::vector<std::pair<int, int>> cs;
            for (int c = 0; c < t.n; ++c)
                if (state[static_cast<std::size_t>(c)] >= 0)
                    cs.push_back({c, state[static_cast<std::size_t>(c)]});
            rule assignment = make_rule(t, std::move(cs));
            if (assignment.matched.empty()) return;  // incompatible, skip
            rule sub = min_same_solution_subsystem(t, assignment, opts);
            worst = std::max(worst, static_cast<int>(sub.constraints.size()));
            return;
        }
        for (int v = -1; v <= 1; ++v) {
            state[static_cast<std::size_t>(col)] = v;
            self(self, col + 1);
        }
        state[static_cast<std::size_t>(col)] = -1;
    };
    rec(rec, 0);
    return worst;
}

/// Upper-bound side of the N_U(n) growth dichotomy, on this table's values:
/// trivially true when the full cube is realized, otherwise N <= (4n)^idim.
/// The lower bound n+1 <= N holds only for canonical worst selections and is
/// checked by the profiling layer, not here.
inline bool check_prop6(const decision_table& t) {
    const int n = t.n;
    long long realizable = count_realizable(t);
    if (realizable == (1ll << std::min(n, 62))) return true;
    int idim = independence_dimension(t);
    long double bound = std::pow(static_cast<long double>(4 * n), idim);
    return static_cast<long double>(realizable) <= bound;
}

struct analysis_report {
    int realizable = 0;                 // N
    int idim = 0;                       // independence dimension of the column set
    int reduction_full_rows = 0;        // max over rows of the min subsystem size
    std::optional<int> reduction_all;   // same over all partial assignments (small n)
    bool prop6_ok = false;
};

inline analysis_report analyze(const decision_table& t, bool with_all_partial = false,
                               const cover_options& opts = {}) {
    analysis_report rep;
    rep.realizable = count_realizable(t);
    rep.idim = independence_dimension(t);
    rep.reduction_full_rows = reduction_parameter(t, reduction_scope::full_rows, opts);
    if (with_all_partial)
        rep.reduction_all = reduction_parameter(t, reduction_scope::all_partial, opts);
    rep.prop6_ok = check_prop6(t);
    return rep;
}

inline njson analysis_to_json(const analysis_report& r) {
    njson j;
    j["N"] = r.realizable;
    j["idim"] = r.idim;
    j["reduction_full_rows"] = r.reduction_full_rows;
    j["reduction_all"] = r.reduction_all ? njson(*r.reduction_all) : njson(nullptr);
    j["prop6_ok"] = r.prop6_ok;
    return j;
}

}  // namespace dtlab
