#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dtlab {

/// Set of row indices of a decision table, kept as a fixed-universe bitset.
/// Used as subproblem identity in the solvers: the subtable reachable by any
/// partial path is fully determined by its rows.
class row_set {
public:
    row_set() = default;

    explicit row_set(std::size_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {}

    static row_set full(std::size_t universe) {
        row_set s(universe);
        for (std::size_t i = 0; i < universe; ++i) s.set(i);
        return s;
    }

    std::size_t universe_size() const { return universe_; }

    bool test(std::size_t i) const {
        return (words_[i / 64] >> (i % 64)) & 1u;
    }

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool empty() const {
        for (auto w : words_)
            if (w != 0) return false;
        return true;
    }

    bool any() const { return !empty(); }

    /// Lowest contained index, or -1 when empty.
    int first() const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi)
            if (words_[wi] != 0)
                return static_cast<int>(wi * 64 + std::countr_zero(words_[wi]));
        return -1;
    }

    row_set& operator&=(const row_set& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }

    row_set& operator|=(const row_set& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    friend row_set operator&(row_set a, const row_set& b) { return a &= b; }
    friend row_set operator|(row_set a, const row_set& b) { return a |= b; }

    bool is_subset_of(const row_set& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & ~other.words_[i]) != 0) return false;
        return true;
    }

    friend bool operator==(const row_set&, const row_set&) = default;

    template <class F>
    void for_each(F f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w != 0) {
                f(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first_entry = true;
        for_each([&](std::size_t i) {
            if (!first_entry) s += ',';
            s += std::to_string(i);
            first_entry = false;
        });
        s += '}';
        return s;
    }

    struct hash {
        std::size_t operator()(const row_set& s) const {
            std::size_t h = std::hash<std::size_t>{}(s.universe_);
            for (auto w : s.words_) h = h * 1099511628211ull ^ std::hash<std::uint64_t>{}(w);
            return h;
        }
    };

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace dtlab
