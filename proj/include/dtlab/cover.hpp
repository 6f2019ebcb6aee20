#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dtlab/errors.hpp"
#include "dtlab/rowset.hpp"

namespace dtlab {

/// Exact minimum set cover over a small universe: pick the fewest candidates
/// whose covered sets together contain every universe element. Used for
/// minimal distinguishing subsystems, so instances have one candidate per
/// table column.
///
/// Branch and bound with a greedy incumbent; candidates are branched on in
/// ascending index with include-before-exclude, and an incumbent is replaced
/// on strictly smaller size or on equal size with a lexicographically smaller
/// index set, which makes the returned minimum canonical.
struct cover_options {
    int max_candidates = 24;           // exactness guarantee limit
    std::uint64_t node_cap = 1 << 26;  // search nodes before ResourceLimit
};

inline std::vector<int> min_cover(const std::vector<row_set>& covers, const row_set& universe,
                                  const cover_options& opts = {}) {
    const int m = static_cast<int>(covers.size());
    require(m <= opts.max_candidates, errc::resource_limit,
            "cover instance has " + std::to_string(m) + " candidates, limit " +
                std::to_string(opts.max_candidates));
    if (universe.empty()) return {};

    for (const auto& c : covers)
        require(c.universe_size() == universe.universe_size(), errc::bad_dimension,
                "cover sets must share the universe");

    // feasibility: every element coverable
    {
        row_set coverable(universe.universe_size());
        for (const auto& c : covers) coverable |= c;
        require(universe.is_subset_of(coverable), errc::incompatible_system,
                "some element is covered by no candidate");
    }

    // greedy incumbent: most new elements per step, lowest index on ties
    std::vector<int> best;
    {
        row_set left = universe;
        while (!left.empty()) {
            int pick = -1;
            std::size_t pick_count = 0;
            for (int i = 0; i < m; ++i) {
                std::size_t c = (covers[static_cast<std::size_t>(i)] & left).count();
                if (c > pick_count) {
                    pick_count = c;
                    pick = i;
                }
            }
            best.push_back(pick);
            row_set rest(universe.universe_size());
            left.for_each([&](std::size_t e) {
                if (!covers[static_cast<std::size_t>(pick)].test(e)) rest.set(e);
            });
            left = rest;
        }
        std::sort(best.begin(), best.end());
    }

    std::uint64_t nodes = 0;
    std::vector<int> chosen;

    // max cover size, for the lower bound
    std::size_t widest = 0;
    for (const auto& c : covers) widest = std::max(widest, c.count());

    auto lower_bound = [&](const row_set& left) {
        std::size_t u = left.count();
        return u == 0 ? std::size_t{0} : (u + widest - 1) / widest;
    };

    auto better = [&](const std::vector<int>& a, const std::vector<int>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    };

    auto rec = [&](auto&& self, int next, const row_set& left) -> void {
        if (++nodes > opts.node_cap)
            raise(errc::resource_limit, "cover search exceeded node cap");
        if (left.empty()) {
            if (better(chosen, best)) best = chosen;
            return;
        }
        if (next == m) return;
        // cannot strictly beat the incumbent from here
        if (chosen.size() + lower_bound(left) > best.size()) return;
        // remaining candidates must still be able to cover everything
        row_set reachable(left.universe_size());
        for (int i = next; i < m; ++i) reachable |= covers[static_cast<std::size_t>(i)];
        if (!left.is_subset_of(reachable)) return;

        // include `next`
        row_set rest(left.universe_size());
        left.for_each([&](std::size_t e) {
            if (!covers[static_cast<std::size_t>(next)].test(e)) rest.set(e);
        });
        if (rest.count() < left.count()) {
            chosen.push_back(next);
            self(self, next + 1, rest);
            chosen.pop_back();
        }
        // exclude `next`
        self(self, next + 1, left);
    };
    rec(rec, 0, universe);
    return best;
}

}  // namespace dtlab
