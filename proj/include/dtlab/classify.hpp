#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dtlab/analysis.hpp"
#include "dtlab/errors.hpp"
#include "dtlab/family.hpp"
#include "dtlab/oracle.hpp"
#include "dtlab/parallel.hpp"
#include "dtlab/solve.hpp"
#include "dtlab/table.hpp"

namespace dtlab {

// ---------------------------------------------------------------------------
// Worst-case profiles
// ---------------------------------------------------------------------------

/// The four worst-case functions tabulated at one scale, with the structural
/// parameters of the witness table.
struct profile_entry {
    int n = 0;
    int h_ld = 0, h_la = 0, L_ld = 0, L_la = 0;
    int realizable = 0;  // N
    int idim = 0;
    int m_hat = 0;  // reduction parameter over full rows
    decision_table table;
};

struct worstcase_profile {
    std::string family_id;
    int n_max = 0;
    std::vector<profile_entry> entries;
};

inline int ceil_log2(long long x) {
    int b = 0;
    while ((1ll << b) < x) ++b;
    return b;
}

namespace detail {

inline profile_entry profile_at(const attribute_family& fam, int n) {
    profile_entry e;
    e.n = n;
    e.table = generate(fam, canonical_worst_selection(fam, n), labeling::injective());
    e.h_ld = *min_depth_det(e.table).objective;
    e.h_la = *min_depth_nondet(e.table).objective;
    e.L_ld = *min_nodes_det(e.table).objective;
    e.L_la = *min_nodes_nondet(e.table).objective;
    e.realizable = count_realizable(e.table);
    e.idim = independence_dimension(e.table);
    e.m_hat = reduction_parameter(e.table, reduction_scope::full_rows);
    return e;
}

/// Bounded confirmation that the canonical selection is worst: every
/// alternative distinct-attribute selection from a small pool must not beat
/// it on any of the four objectives.
inline void confirm_worst_selection(const attribute_family& fam, const profile_entry& e) {
    int pool = fam.attribute_count().value_or(e.n + 1);
    pool = std::min(pool, e.n + 3);
    std::vector<int> sel;
    auto rec = [&](auto&& self, int from) -> void {
        if (static_cast<int>(sel.size()) == e.n) {
            decision_table alt = generate(fam, sel, labeling::injective());
            bool beaten = *min_depth_det(alt).objective > e.h_ld ||
                          *min_depth_nondet(alt).objective > e.h_la ||
                          *min_nodes_det(alt).objective > e.L_ld ||
                          *min_nodes_nondet(alt).objective > e.L_la;
            if (beaten)
                raise(errc::inconsistent_profile,
                      "selection beats the canonical one at n=" + std::to_string(e.n));
            return;
        }
        for (int a = from; a <= pool; ++a) {
            sel.push_back(a);
            self(self, a + 1);
            sel.pop_back();
        }
    };
    rec(rec, 1);
}

}  // namespace detail

/// Runs the four solvers on the canonical worst table of every n in
/// [1, n_max]. For n <= 3 a bounded search over alternative selections
/// confirms the canonical table is worst. Entries are computed in parallel;
/// outputs do not depend on the worker count.
inline worstcase_profile profile_family(const attribute_family& fam, int n_max,
                                        bool confirm_worst = true) {
    require(n_max >= 1, errc::bad_dimension, "profile needs n_max >= 1");
    worstcase_profile p;
    p.family_id = family_kind_name(fam.kind());
    p.n_max = n_max;
    p.entries.resize(static_cast<std::size_t>(n_max));
    parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t i) {
        int n = static_cast<int>(i) + 1;
        p.entries[i] = detail::profile_at(fam, n);
        if (confirm_worst && n <= 3) detail::confirm_worst_selection(fam, p.entries[i]);
    });

    // sanity on the profile shape
    for (const auto& e : p.entries) {
        require(e.h_la <= e.h_ld && e.h_ld <= e.n, errc::inconsistent_profile,
                "depth profile out of range at n=" + std::to_string(e.n));
        require(e.L_la <= e.L_ld && e.n <= 30 && e.L_ld <= (1ll << (e.n + 1)),
                errc::inconsistent_profile,
                "node profile out of range at n=" + std::to_string(e.n));
    }
    for (std::size_t i = 1; i < p.entries.size(); ++i) {
        const auto& a = p.entries[i - 1];
        const auto& b = p.entries[i];
        require(b.h_ld >= a.h_ld && b.h_la >= a.h_la && b.L_ld >= a.L_ld && b.L_la >= a.L_la,
                errc::inconsistent_profile, "worst-case profile must be non-decreasing in n");
    }
    return p;
}

/// CSV hand-off for external plotting.
inline std::string profile_to_csv(const worstcase_profile& p) {
    std::string out = "n,h_ld,h_la,L_ld,L_la,N,idim,m_hat\n";
    for (const auto& e : p.entries) {
        out += std::to_string(e.n) + ',' + std::to_string(e.h_ld) + ',' + std::to_string(e.h_la) +
               ',' + std::to_string(e.L_ld) + ',' + std::to_string(e.L_la) + ',' +
               std::to_string(e.realizable) + ',' + std::to_string(e.idim) + ',' +
               std::to_string(e.m_hat) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Local type fitting
// ---------------------------------------------------------------------------

enum class growth_h_ld { LOG, LIN };
enum class growth_h_la { CON, LIN };
enum class growth_L { POL, EXP };
enum class w_class { W1, W2, W3 };

/// Fitted row of the local-type table, valid "at scale n_max": finite data
/// cannot decide asymptotics, only match them.
struct local_type_result {
    growth_h_ld h_ld_type = growth_h_ld::LOG;
    growth_h_la h_la_type = growth_h_la::CON;
    growth_L L_type = growth_L::POL;
    w_class cls = w_class::W1;
    int scale = 0;
};

inline std::string to_string(growth_h_ld g) { return g == growth_h_ld::LOG ? "LOG" : "LIN"; }
inline std::string to_string(growth_h_la g) { return g == growth_h_la::CON ? "CON" : "LIN"; }
inline std::string to_string(growth_L g) { return g == growth_L::POL ? "POL" : "EXP"; }
inline std::string to_string(w_class c) {
    switch (c) {
        case w_class::W1: return "W1";
        case w_class::W2: return "W2";
        case w_class::W3: return "W3";
    }
    return "?";
}

inline njson local_type_to_json(const local_type_result& r) {
    njson j;
    j["h_ld_type"] = to_string(r.h_ld_type);
    j["h_la_type"] = to_string(r.h_la_type);
    j["L_type"] = to_string(r.L_type);
    j["w_class"] = to_string(r.cls);
    j["scale"] = r.scale;
    return j;
}

/// Fits the profile to one row of the three-class table. LIN requires
/// h(n) = n at every profiled scale; CON requires h_la constant over the
/// upper half of the range (eventual constancy is undecidable from finitely
/// many points, so the window rule is a pragmatic choice); EXP requires
/// L_ld(n) = 2^(n+1) throughout. Any other combination signals a bug or a
/// non-worst selection.
inline local_type_result local_type(const worstcase_profile& p, int log_slack = 1) {
    require(p.n_max >= 4 && static_cast<int>(p.entries.size()) >= 4, errc::inconsistent_profile,
            "local type needs a profile over n >= 4");
    local_type_result r;
    r.scale = p.n_max;

    bool h_ld_lin = true;
    for (const auto& e : p.entries) h_ld_lin = h_ld_lin && e.h_ld == e.n;
    if (h_ld_lin) {
        r.h_ld_type = growth_h_ld::LIN;
    } else {
        r.h_ld_type = growth_h_ld::LOG;
        for (const auto& e : p.entries)
            require(e.h_ld <= ceil_log2(e.realizable) + log_slack, errc::inconsistent_profile,
                    "h_ld is neither linear nor logarithmic at n=" + std::to_string(e.n));
    }

    bool h_la_lin = true;
    for (const auto& e : p.entries) h_la_lin = h_la_lin && e.h_la == e.n;
    bool h_la_con = true;
    std::size_t half = p.entries.size() / 2;
    for (std::size_t i = half; i < p.entries.size(); ++i)
        h_la_con = h_la_con && p.entries[i].h_la == p.entries[half].h_la;
    if (h_la_con && !h_la_lin) r.h_la_type = growth_h_la::CON;
    else if (h_la_lin) r.h_la_type = growth_h_la::LIN;
    else
        raise(errc::inconsistent_profile, "h_la neither stabilizes nor grows linearly");

    bool exp = true;
    for (const auto& e : p.entries) exp = exp && e.L_ld == (1ll << (e.n + 1));
    if (exp) {
        r.L_type = growth_L::EXP;
    } else {
        r.L_type = growth_L::POL;
        for (const auto& e : p.entries)
            require(static_cast<long double>(e.L_ld) <=
                        2.0l * std::pow(static_cast<long double>(4 * e.n), e.idim),
                    errc::inconsistent_profile,
                    "L_ld exceeds the polynomial bound at n=" + std::to_string(e.n));
    }

    if (r.h_ld_type == growth_h_ld::LOG && r.h_la_type == growth_h_la::CON &&
        r.L_type == growth_L::POL)
        r.cls = w_class::W1;
    else if (r.h_ld_type == growth_h_ld::LIN && r.h_la_type == growth_h_la::LIN &&
             r.L_type == growth_L::POL)
        r.cls = w_class::W2;
    else if (r.h_ld_type == growth_h_ld::LIN && r.h_la_type == growth_h_la::LIN &&
             r.L_type == growth_L::EXP)
        r.cls = w_class::W3;
    else
        raise(errc::inconsistent_profile, "observed behavior matches no known local type");
    return r;
}

// ---------------------------------------------------------------------------
// Reachability
// ---------------------------------------------------------------------------

enum class reach_kind { ld, la };
enum class reach_answer { yes, no, unknown };

inline std::string to_string(reach_kind k) { return k == reach_kind::ld ? "ld" : "la"; }
inline std::string to_string(reach_answer a) {
    switch (a) {
        case reach_answer::yes: return "yes";
        case reach_answer::no: return "no";
        case reach_answer::unknown: return "unknown";
    }
    return "?";
}

/// Whether (h*, L*) is attained by a single tree at this scale, with the
/// evidence: a witness tree for yes, an analytic certificate and/or an
/// exhaustive-search record for no.
struct reachability_report {
    reach_kind kind = reach_kind::ld;
    int n = 0;
    int h_star = 0;
    int L_star = 0;
    reach_answer reachable = reach_answer::unknown;
    std::optional<decision_tree> witness;
    std::optional<std::string> analytic;
    std::optional<std::string> exhaustion;
};

inline njson reachability_to_json(const reachability_report& r) {
    njson cert;
    cert["witness"] = r.witness ? tree_to_json(*r.witness) : njson(nullptr);
    cert["analytic"] = r.analytic ? njson(*r.analytic) : njson(nullptr);
    cert["exhaustion"] = r.exhaustion ? njson(*r.exhaustion) : njson(nullptr);
    njson j;
    j["kind"] = to_string(r.kind);
    j["n"] = r.n;
    j["h_star"] = r.h_star;
    j["L_star"] = r.L_star;
    j["reachable"] = to_string(r.reachable);
    j["certificate"] = std::move(cert);
    return j;
}

/// Checks ld/la-reachability on the family's canonical worst table at scale
/// n. ld: the depth-budgeted node minimum must already match the
/// unbudgeted one (true for every family: pruning and collapsing a
/// depth-minimal tree lands in G_d^2 with at most 2N nodes). la: yes when
/// the deterministic route attains the pair; no with an analytic
/// certificate when 2^h* < N on an injective table (a two-edges-per-node
/// tree would need depth >= log2 N, and any other tree admitted by the
/// fan-out conditions carries strictly more than 2N - 1 working+terminal
/// nodes); an exhaustive search within (h*, L*) confirms when small enough.
inline reachability_report verify_reachability(const attribute_family& fam, int n, reach_kind kind) {
    decision_table table = generate(fam, canonical_worst_selection(fam, n), labeling::injective());
    reachability_report rep;
    rep.kind = kind;
    rep.n = n;

    if (kind == reach_kind::ld) {
        solve_result depth = min_depth_det(table);
        solve_result nodes = min_nodes_det(table);
        rep.h_star = *depth.objective;
        rep.L_star = *nodes.objective;
        solve_result budgeted = min_nodes_det_budgeted(table, rep.h_star);
        if (budgeted.grade != optimality::infeasible && *budgeted.objective <= rep.L_star) {
            rep.reachable = reach_answer::yes;
            rep.witness = budgeted.tree;
        } else {
            rep.reachable = reach_answer::no;  // never expected; see Invariants
        }
        require(rep.reachable == reach_answer::yes, errc::inconsistent_profile,
                "ld-reachability must hold on every worst table");
        return rep;
    }

    solve_result depth = min_depth_nondet(table);
    solve_result nodes = min_nodes_nondet(table);
    rep.h_star = *depth.objective;
    rep.L_star = *nodes.objective;

    // deterministic route: a deterministic tree within both bounds also
    // solves nondeterministically
    if (*min_depth_det(table).objective == rep.h_star) {
        solve_result budgeted = min_nodes_det_budgeted(table, rep.h_star);
        if (budgeted.grade != optimality::infeasible && *budgeted.objective <= rep.L_star) {
            rep.reachable = reach_answer::yes;
            rep.witness = budgeted.tree;
            return rep;
        }
    }

    const int rows = row_count(table);
    if ((1ll << rep.h_star) < rows && is_injective(table)) {
        rep.reachable = reach_answer::no;
        rep.analytic = "2^h* = " + std::to_string(1ll << rep.h_star) + " < N = " +
                       std::to_string(rows) +
                       ": a tree with two edges per working node needs depth >= log2(N) > h*, "
                       "and any other admissible tree has L_w > L_t - 1 >= N - 1, hence L > 2N = L*";
    }

    const bool searchable = rows <= 12 && table.n <= 8 && rep.h_star <= 4 && rep.L_star <= 32;
    if (searchable) {
        auto found = find_nondet_tree(table, rep.h_star, rep.L_star);
        if (found) {
            require(rep.reachable != reach_answer::no, errc::inconsistent_profile,
                    "analytic certificate contradicts an explicit witness");
            rep.reachable = reach_answer::yes;
            rep.witness = std::move(*found);
        } else {
            rep.reachable = reach_answer::no;
            rep.exhaustion = "no nondeterministic tree with h <= " + std::to_string(rep.h_star) +
                             " and L <= " + std::to_string(rep.L_star) + " solves the table";
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Boundary la-pair verification
// ---------------------------------------------------------------------------

struct boundary_pair_report {
    std::string family_id;
    int n = 0;
    int m_hat = 0;
    int tree_depth = 0;
    int tree_nodes = 0;
    int depth_bound = 0;
    int node_bound = 0;
    bool ok = false;
};

inline njson boundary_pair_to_json(const boundary_pair_report& r) {
    njson j;
    j["family"] = r.family_id;
    j["n"] = r.n;
    j["m_hat"] = r.m_hat;
    j["h"] = r.tree_depth;
    j["L"] = r.tree_nodes;
    j["h_bound"] = r.depth_bound;
    j["L_bound"] = r.node_bound;
    j["ok"] = r.ok;
    return j;
}

/// Builds the reduction tree on the worst table and checks the boundary
/// la-pair bounds: h <= m and L <= (m+1) * L_la(n)/2 + 1 with L_la(n) = 2N.
inline boundary_pair_report verify_boundary_la_pair(const attribute_family& fam, int n) {
    decision_table table = generate(fam, canonical_worst_selection(fam, n), labeling::injective());
    boundary_pair_report rep;
    rep.family_id = family_kind_name(fam.kind());
    rep.n = n;
    rep.m_hat = reduction_parameter(table, reduction_scope::full_rows);

    solve_result built = build_reduction_tree(table);
    tree_metrics m = metrics(*built.tree);
    rep.tree_depth = m.depth;
    rep.tree_nodes = m.total;
    rep.depth_bound = rep.m_hat;
    rep.node_bound = (rep.m_hat + 1) * count_realizable(table) + 1;
    rep.ok = validate(*built.tree, table, solve_mode::nondet).ok && m.depth <= rep.depth_bound &&
             m.total <= rep.node_bound;
    return rep;
}

}  // namespace dtlab
