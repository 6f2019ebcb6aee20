#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dtlab/errors.hpp"
#include "dtlab/table.hpp"

namespace dtlab {

// ---------------------------------------------------------------------------
// Exact rationals for the geometric families
// ---------------------------------------------------------------------------

/// Normalized rational with positive denominator. Side-of-line tests must be
/// exact; floating point would misclassify points on a line.
struct rational {
    long long num = 0;
    long long den = 1;

    rational() = default;

    rational(long long n, long long d = 1) : num(n), den(d) {
        require(den != 0, errc::parse_error, "rational denominator must be nonzero");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend rational operator+(const rational& a, const rational& b) {
        return rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }

    friend rational operator*(const rational& a, const rational& b) {
        return rational(a.num * b.num, a.den * b.den);
    }

    int sign() const { return num < 0 ? -1 : num > 0 ? 1 : 0; }

    friend bool operator==(const rational&, const rational&) = default;
};

struct point2 {
    rational x, y;
};

/// Line a*x + b*y + c = 0. The two open half-planes are the strict-sign
/// sides; the line itself belongs to both derived attributes.
struct line2 {
    rational a, b, c;

    int side(const point2& p) const { return (a * p.x + b * p.y + c).sign(); }
};

// ---------------------------------------------------------------------------
// Attribute families
// ---------------------------------------------------------------------------

enum class family_kind {
    u1_threshold,       // l_i(j) = 1 iff j > i, over {1,...,B}
    u2_point,           // p_i(j) = 1 iff j = i, over {1,...,B}
    u3_full,            // every tuple realizable (independent bit attributes)
    half_plane,         // two complementary attributes per line
    feature_threshold,  // 1 iff feature value + offset >= 0
    custom,             // explicit object x attribute 0/1 matrix
};

inline std::string family_kind_name(family_kind k) {
    switch (k) {
        case family_kind::u1_threshold: return "u1";
        case family_kind::u2_point: return "u2";
        case family_kind::u3_full: return "u3";
        case family_kind::half_plane: return "halfplane";
        case family_kind::feature_threshold: return "feature";
        case family_kind::custom: return "custom";
    }
    return "?";
}

inline family_kind family_kind_from_name(const std::string& name) {
    if (name == "u1") return family_kind::u1_threshold;
    if (name == "u2") return family_kind::u2_point;
    if (name == "u3") return family_kind::u3_full;
    if (name == "halfplane") return family_kind::half_plane;
    if (name == "feature") return family_kind::feature_threshold;
    if (name == "custom") return family_kind::custom;
    raise(errc::parse_error, "unknown family \"" + name + "\"");
}

struct half_plane_params {
    std::vector<point2> points;
    std::vector<line2> lines;  // line k yields attributes 2k-1 and 2k (1-based)
};

struct feature_threshold_params {
    std::vector<std::vector<rational>> values;          // objects x features
    std::vector<std::pair<int, rational>> thresholds;   // attribute k = (feature, offset)
};

struct custom_params {
    std::vector<tuple_t> matrix;  // objects x attributes
};

/// Parametric generator of attributes over a bounded universe. Attribute ids
/// are 1-based within the family; table columns produced by generate() are
/// 0-based positions into the chosen selection.
class attribute_family {
public:
    static attribute_family u1(std::optional<long long> bound = std::nullopt) {
        return attribute_family(family_kind::u1_threshold, bound);
    }

    static attribute_family u2(std::optional<long long> bound = std::nullopt) {
        return attribute_family(family_kind::u2_point, bound);
    }

    static attribute_family u3() { return attribute_family(family_kind::u3_full, std::nullopt); }

    static attribute_family half_plane(half_plane_params p) {
        attribute_family f(family_kind::half_plane, std::nullopt);
        f.params_ = std::move(p);
        return f;
    }

    static attribute_family feature_threshold(feature_threshold_params p) {
        for (const auto& [feat, off] : p.thresholds)
            require(feat >= 0, errc::parse_error, "feature index must be >= 0");
        attribute_family f(family_kind::feature_threshold, std::nullopt);
        f.params_ = std::move(p);
        return f;
    }

    static attribute_family custom(custom_params p) {
        attribute_family f(family_kind::custom, std::nullopt);
        f.params_ = std::move(p);
        return f;
    }

    family_kind kind() const { return kind_; }
    std::optional<long long> bound() const { return bound_; }

    /// Number of attributes the family exposes; nullopt when unbounded
    /// (u1/u2/u3 have one attribute per natural number).
    std::optional<int> attribute_count() const {
        switch (kind_) {
            case family_kind::u1_threshold:
            case family_kind::u2_point:
            case family_kind::u3_full: return std::nullopt;
            case family_kind::half_plane:
                return static_cast<int>(std::get<half_plane_params>(params_).lines.size() * 2);
            case family_kind::feature_threshold:
                return static_cast<int>(std::get<feature_threshold_params>(params_).thresholds.size());
            case family_kind::custom: {
                const auto& m = std::get<custom_params>(params_).matrix;
                return m.empty() ? 0 : static_cast<int>(m.front().size());
            }
        }
        return 0;
    }

    const half_plane_params& half_plane_data() const { return std::get<half_plane_params>(params_); }
    const feature_threshold_params& feature_data() const {
        return std::get<feature_threshold_params>(params_);
    }
    const custom_params& custom_data() const { return std::get<custom_params>(params_); }

private:
    attribute_family(family_kind k, std::optional<long long> b) : kind_(k), bound_(b) {}

    family_kind kind_;
    std::optional<long long> bound_;
    std::variant<std::monostate, half_plane_params, feature_threshold_params, custom_params> params_;
};

namespace detail {

inline void check_indices(const attribute_family& fam, const std::vector<int>& idx) {
    require(!idx.empty(), errc::unknown_attribute, "attribute selection must be nonempty");
    for (int i : idx)
        require(i >= 1, errc::unknown_attribute, "attribute ids are 1-based, got " + std::to_string(i));
    if (auto cnt = fam.attribute_count()) {
        for (int i : idx)
            require(i <= *cnt, errc::unknown_attribute,
                    "attribute " + std::to_string(i) + " out of range (family has " +
                        std::to_string(*cnt) + ")");
    }
}

/// Universe size and per-object attribute evaluation for each family kind.
/// For u1/u2 the universe is {1,...,B}; for u3 it is large enough to realize
/// every combination of the selected bit attributes.
struct universe_view {
    long long size = 0;
    // evaluates attribute id (1-based) on object index (0-based)
    std::uint8_t (*eval)(const attribute_family&, long long object, int attr) = nullptr;
};

inline universe_view make_universe(const attribute_family& fam, const std::vector<int>& idx) {
    int max_idx = *std::max_element(idx.begin(), idx.end());
    switch (fam.kind()) {
        case family_kind::u1_threshold: {
            long long bound = fam.bound().value_or(max_idx + 1);
            require(bound > max_idx, errc::universe_too_small,
                    "u1 needs bound > max attribute index (bound " + std::to_string(bound) +
                        ", max index " + std::to_string(max_idx) + ")");
            return {bound, [](const attribute_family&, long long obj, int attr) -> std::uint8_t {
                        return obj + 1 > attr;  // l_i(j) = 1 iff j > i
                    }};
        }
        case family_kind::u2_point: {
            long long bound = fam.bound().value_or(max_idx + 1);
            require(bound > max_idx, errc::universe_too_small,
                    "u2 needs bound > max attribute index (bound " + std::to_string(bound) +
                        ", max index " + std::to_string(max_idx) + ")");
            return {bound, [](const attribute_family&, long long obj, int attr) -> std::uint8_t {
                        return obj + 1 == attr;  // p_i(j) = 1 iff j = i
                    }};
        }
        case family_kind::u3_full: {
            require(max_idx <= 20, errc::resource_limit,
                    "u3 attribute index too large for explicit universe enumeration");
            return {1ll << max_idx, [](const attribute_family&, long long obj, int attr) -> std::uint8_t {
                        return (obj >> (attr - 1)) & 1;
                    }};
        }
        case family_kind::half_plane:
            return {static_cast<long long>(fam.half_plane_data().points.size()),
                    [](const attribute_family& f, long long obj, int attr) -> std::uint8_t {
                        const auto& hp = f.half_plane_data();
                        const line2& l = hp.lines[static_cast<std::size_t>((attr - 1) / 2)];
                        int s = l.side(hp.points[static_cast<std::size_t>(obj)]);
                        // odd id: 1 on {s >= 0}; even id: 1 on {s <= 0}
                        return attr % 2 == 1 ? s >= 0 : s <= 0;
                    }};
        case family_kind::feature_threshold:
            return {static_cast<long long>(fam.feature_data().values.size()),
                    [](const attribute_family& f, long long obj, int attr) -> std::uint8_t {
                        const auto& ft = f.feature_data();
                        const auto& [feat, offset] = ft.thresholds[static_cast<std::size_t>(attr - 1)];
                        const auto& row = ft.values[static_cast<std::size_t>(obj)];
                        require(feat < static_cast<int>(row.size()), errc::unknown_attribute,
                                "feature index out of range");
                        return (row[static_cast<std::size_t>(feat)] + offset).sign() >= 0;
                    }};
        case family_kind::custom:
            return {static_cast<long long>(fam.custom_data().matrix.size()),
                    [](const attribute_family& f, long long obj, int attr) -> std::uint8_t {
                        return f.custom_data().matrix[static_cast<std::size_t>(obj)]
                                                     [static_cast<std::size_t>(attr - 1)];
                    }};
    }
    raise(errc::unsupported, "unhandled family kind");
}

inline std::vector<tuple_t> realizable_tuples(const attribute_family& fam,
                                              const std::vector<int>& idx) {
    universe_view u = make_universe(fam, idx);
    require(u.size >= 1, errc::universe_too_small, "family has an empty universe");
    std::set<tuple_t> seen;
    for (long long obj = 0; obj < u.size; ++obj) {
        tuple_t t(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) t[k] = u.eval(fam, obj, idx[k]);
        seen.insert(std::move(t));
    }
    return {seen.begin(), seen.end()};
}

}  // namespace detail

/// Enumerates the tuples realized by some universe element and labels them.
/// Rows come out sorted lexicographically; injective decisions are 1,2,3,...
/// in that order, so identical inputs give identical tables.
inline decision_table generate(const attribute_family& fam, const std::vector<int>& attr_indices,
                               const labeling& lab = labeling::injective()) {
    detail::check_indices(fam, attr_indices);
    auto tuples = detail::realizable_tuples(fam, attr_indices);
    auto rows = apply_labeling(std::move(tuples), lab);
    std::string name = family_kind_name(fam.kind()) + ":n=" + std::to_string(attr_indices.size());
    return make_table(static_cast<int>(attr_indices.size()), std::move(rows), name);
}

/// The attribute selections used in the worst-case arguments: (l_1,...,l_n)
/// for u1, (p_1,...,p_n) for u2, n independent bits for u3. For the
/// geometric families: the n-subset maximizing the realizable-tuple count,
/// found by exhaustive search over subsets when the pool is small (at most
/// `search_cap` candidate subsets) and greedy forward selection otherwise;
/// ties break to the lexicographically smallest index set.
inline std::vector<int> canonical_worst_selection(const attribute_family& fam, int n,
                                                  long long search_cap = 200000) {
    require(n >= 1, errc::bad_dimension, "selection size must be >= 1");
    switch (fam.kind()) {
        case family_kind::u1_threshold:
        case family_kind::u2_point:
        case family_kind::u3_full: {
            std::vector<int> idx(static_cast<std::size_t>(n));
            std::iota(idx.begin(), idx.end(), 1);
            return idx;
        }
        case family_kind::custom:
            raise(errc::unsupported, "no canonical worst selection for custom families");
        default: break;
    }

    int pool = fam.attribute_count().value_or(0);
    require(n <= pool, errc::unsupported,
            "family exposes only " + std::to_string(pool) + " attributes, need " + std::to_string(n));

    auto count_for = [&](const std::vector<int>& sel) {
        return static_cast<long long>(detail::realizable_tuples(fam, sel).size());
    };

    // subset count C(pool, n), saturating
    long long combos = 1;
    for (int i = 1; i <= n && combos <= search_cap; ++i)
        combos = combos * (pool - i + 1) / i;

    if (combos <= search_cap) {
        std::vector<int> best;
        long long best_count = -1;
        std::vector<int> stack;
        auto rec = [&](auto&& self, int from) -> void {
            if (static_cast<int>(stack.size()) == n) {
                long long c = count_for(stack);
                if (c > best_count) {
                    best_count = c;
                    best = stack;
                }
                return;
            }
            for (int i = from; i <= pool; ++i) {
                stack.push_back(i);
                self(self, i + 1);
                stack.pop_back();
            }
        };
        rec(rec, 1);
        return best;
    }

    // greedy forward selection
    std::vector<int> sel;
    std::set<int> used;
    for (int step = 0; step < n; ++step) {
        int best_attr = -1;
        long long best_count = -1;
        for (int a = 1; a <= pool; ++a) {
            if (used.count(a)) continue;
            auto trial = sel;
            trial.push_back(a);
            std::sort(trial.begin(), trial.end());
            long long c = count_for(trial);
            if (c > best_count) {
                best_count = c;
                best_attr = a;
            }
        }
        sel.push_back(best_attr);
        used.insert(best_attr);
        std::sort(sel.begin(), sel.end());
    }
    return sel;
}

/// Small built-in instances so the geometric families work out of the box:
/// a 3x3 integer grid with axis-parallel and diagonal cutting lines, and a
/// two-feature value matrix with a few thresholds per feature.
inline attribute_family default_half_plane() {
    half_plane_params p;
    for (int x = 0; x <= 2; ++x)
        for (int y = 0; y <= 2; ++y) p.points.push_back({rational(x), rational(y)});
    p.lines.push_back({rational(1), rational(0), rational(-1, 2)});   // x = 1/2
    p.lines.push_back({rational(1), rational(0), rational(-3, 2)});   // x = 3/2
    p.lines.push_back({rational(0), rational(1), rational(-1, 2)});   // y = 1/2
    p.lines.push_back({rational(0), rational(1), rational(-3, 2)});   // y = 3/2
    p.lines.push_back({rational(1), rational(1), rational(-2)});      // x + y = 2
    return attribute_family::half_plane(std::move(p));
}

inline attribute_family default_feature_threshold() {
    feature_threshold_params p;
    p.values = {
        {rational(0), rational(3)},
        {rational(1), rational(1)},
        {rational(2), rational(4)},
        {rational(3), rational(0)},
        {rational(4), rational(2)},
    };
    for (int f = 0; f < 2; ++f)
        for (int c = 0; c < 4; ++c)
            p.thresholds.push_back({f, rational(-(2 * c + 1), 2)});  // value >= c + 1/2
    return attribute_family::feature_threshold(std::move(p));
}

/// Family lookup used by the CLI: built-in kinds by name, with defaults for
/// the geometric families.
inline attribute_family builtin_family(const std::string& name,
                                       std::optional<long long> bound = std::nullopt) {
    family_kind k = family_kind_from_name(name);
    switch (k) {
        case family_kind::u1_threshold: return attribute_family::u1(bound);
        case family_kind::u2_point: return attribute_family::u2(bound);
        case family_kind::u3_full: return attribute_family::u3();
        case family_kind::half_plane: return default_half_plane();
        case family_kind::feature_threshold: return default_feature_threshold();
        case family_kind::custom:
            raise(errc::unsupported, "custom families require explicit parameters");
    }
    raise(errc::parse_error, "unknown family \"" + name + "\"");
}

}  // namespace dtlab
