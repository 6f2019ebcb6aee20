#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtlab/errors.hpp"
#include "dtlab/rowset.hpp"

namespace dtlab {

using njson = nlohmann::ordered_json;

using tuple_t = std::vector<std::uint8_t>;

struct table_row {
    tuple_t tuple;
    int decision = 1;
};

/// Finite restriction of a problem: the realizable 0/1 tuples of the selected
/// attributes together with their decision labels. Duplicate attribute
/// columns are permitted; tuples are pairwise distinct. Immutable after
/// construction.
struct decision_table {
    int n = 0;
    std::vector<table_row> rows;
    std::string name;
};

inline std::string tuple_to_string(const tuple_t& t) {
    std::string s(t.size(), '0');
    for (std::size_t i = 0; i < t.size(); ++i) s[i] = t[i] ? '1' : '0';
    return s;
}

inline tuple_t tuple_from_string(const std::string& s) {
    tuple_t t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            raise(errc::parse_error, "tuple string must consist of 0/1: \"" + s + "\"");
        t[i] = s[i] == '1';
    }
    return t;
}

/// Builds a table, checking all invariants. Row order is preserved as given.
inline decision_table make_table(int n, std::vector<table_row> rows, std::string name = "") {
    require(n >= 1, errc::bad_dimension, "attribute count must be >= 1");
    require(!rows.empty(), errc::empty_table, "a table must have at least one row");
    std::set<tuple_t> seen;
    for (const auto& r : rows) {
        require(static_cast<int>(r.tuple.size()) == n, errc::bad_dimension,
                "tuple " + tuple_to_string(r.tuple) + " has length " +
                    std::to_string(r.tuple.size()) + ", expected " + std::to_string(n));
        require(r.decision >= 1, errc::bad_decision,
                "decision must be >= 1, got " + std::to_string(r.decision));
        require(seen.insert(r.tuple).second, errc::duplicate_tuple,
                "tuple " + tuple_to_string(r.tuple) + " appears twice");
    }
    return decision_table{n, std::move(rows), std::move(name)};
}

inline int row_count(const decision_table& t) { return static_cast<int>(t.rows.size()); }

inline int cell(const decision_table& t, std::size_t row, int col) {
    return t.rows[row].tuple[static_cast<std::size_t>(col)];
}

inline row_set all_rows(const decision_table& t) { return row_set::full(t.rows.size()); }

/// Rows of `within` whose column `col` equals `val`.
inline row_set restrict_rows(const decision_table& t, const row_set& within, int col, int val) {
    row_set out(t.rows.size());
    within.for_each([&](std::size_t r) {
        if (cell(t, r, col) == val) out.set(r);
    });
    return out;
}

inline bool column_constant_on(const decision_table& t, const row_set& within, int col) {
    int seen = -1;
    bool constant = true;
    within.for_each([&](std::size_t r) {
        int v = cell(t, r, col);
        if (seen == -1) seen = v;
        else if (seen != v) constant = false;
    });
    return constant;
}

/// Decision shared by all rows of the set, or nullopt when mixed. An empty
/// set counts as homogeneous with no decision.
inline std::optional<int> homogeneous_decision(const decision_table& t, const row_set& within) {
    std::optional<int> dec;
    bool mixed = false;
    within.for_each([&](std::size_t r) {
        if (!dec) dec = t.rows[r].decision;
        else if (*dec != t.rows[r].decision) mixed = true;
    });
    if (mixed) return std::nullopt;
    return dec ? dec : std::optional<int>(0);
}

inline bool is_homogeneous(const decision_table& t, const row_set& within) {
    return homogeneous_decision(t, within).has_value();
}

inline bool is_injective(const decision_table& t) {
    std::set<int> decs;
    for (const auto& r : t.rows)
        if (!decs.insert(r.decision).second) return false;
    return true;
}

inline int distinct_decision_count(const decision_table& t) {
    std::set<int> decs;
    for (const auto& r : t.rows) decs.insert(r.decision);
    return static_cast<int>(decs.size());
}

// ---------------------------------------------------------------------------
// Labeling
// ---------------------------------------------------------------------------

/// How decisions are attached to generated tuples. Injective labeling assigns
/// 1,2,3,... in lexicographic row order, which makes worst-case problems: a
/// tree solving the injective problem solves any relabeling of it.
struct labeling {
    enum class mode_t { injective, constant, explicit_map };

    mode_t mode = mode_t::injective;
    int constant_value = 1;
    std::map<tuple_t, int> map;

    static labeling injective() { return labeling{}; }

    static labeling constant(int value = 1) {
        require(value >= 1, errc::bad_decision, "constant decision must be >= 1");
        return labeling{mode_t::constant, value, {}};
    }

    static labeling explicit_map(std::map<tuple_t, int> m) {
        for (const auto& [k, v] : m)
            require(v >= 1, errc::bad_decision, "mapped decision must be >= 1");
        return labeling{mode_t::explicit_map, 1, std::move(m)};
    }
};

/// Attaches decisions to lexicographically sorted tuples.
inline std::vector<table_row> apply_labeling(std::vector<tuple_t> tuples, const labeling& lab) {
    std::sort(tuples.begin(), tuples.end());
    std::vector<table_row> rows;
    rows.reserve(tuples.size());
    int next = 1;
    for (auto& t : tuples) {
        int d = 1;
        switch (lab.mode) {
            case labeling::mode_t::injective: d = next++; break;
            case labeling::mode_t::constant: d = lab.constant_value; break;
            case labeling::mode_t::explicit_map: {
                auto it = lab.map.find(t);
                require(it != lab.map.end(), errc::bad_decision,
                        "no decision mapped for tuple " + tuple_to_string(t));
                d = it->second;
                break;
            }
        }
        rows.push_back(table_row{std::move(t), d});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// dtable-v1 serialization
// ---------------------------------------------------------------------------

/// Serializes in the "dtable-v1" format; rows are emitted in lexicographic
/// tuple order regardless of the table's internal row order.
inline njson table_to_json(const decision_table& t) {
    std::vector<const table_row*> sorted;
    sorted.reserve(t.rows.size());
    for (const auto& r : t.rows) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const table_row* a, const table_row* b) { return a->tuple < b->tuple; });
    njson rows = njson::array();
    for (const auto* r : sorted)
        rows.push_back(njson{{"t", tuple_to_string(r->tuple)}, {"d", r->decision}});
    return njson{{"format", "dtable-v1"}, {"n", t.n}, {"rows", std::move(rows)}};
}

inline std::string table_to_string(const decision_table& t) { return table_to_json(t).dump(); }

inline decision_table table_from_json(const njson& j) {
    require(j.is_object(), errc::parse_error, "dtable-v1 document must be an object");
    require(j.contains("format") && j["format"] == "dtable-v1", errc::parse_error,
            "missing or unexpected format tag (want \"dtable-v1\")");
    require(j.contains("n") && j["n"].is_number_integer(), errc::parse_error,
            "missing integer field \"n\"");
    int n = j["n"].get<int>();
    require(n >= 1, errc::parse_error, "\"n\" must be >= 1");
    require(j.contains("rows") && j["rows"].is_array(), errc::parse_error,
            "missing array field \"rows\"");
    std::vector<table_row> rows;
    for (const auto& jr : j["rows"]) {
        require(jr.is_object() && jr.contains("t") && jr.contains("d"), errc::parse_error,
                "each row must be an object with \"t\" and \"d\"");
        require(jr["t"].is_string(), errc::parse_error, "row field \"t\" must be a string");
        require(jr["d"].is_number_integer(), errc::parse_error,
                "row field \"d\" must be an integer");
        tuple_t tup = tuple_from_string(jr["t"].get<std::string>());
        require(static_cast<int>(tup.size()) == n, errc::bad_dimension,
                "tuple \"" + jr["t"].get<std::string>() + "\" does not have length " +
                    std::to_string(n));
        int d = jr["d"].get<int>();
        require(d >= 1, errc::bad_decision, "row decision must be >= 1");
        rows.push_back(table_row{std::move(tup), d});
    }
    return make_table(n, std::move(rows));
}

inline decision_table table_from_string(const std::string& text) {
    njson j = njson::parse(text, nullptr, false);
    require(!j.is_discarded(), errc::parse_error, "invalid JSON");
    return table_from_json(j);
}

}  // namespace dtlab
