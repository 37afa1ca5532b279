#ifndef BNSL_COMMON_HPP
#define BNSL_COMMON_HPP

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bnsl {

using VarId = int;

/// Sorted, duplicate-free list of variable indices.
using VarSet = std::vector<VarId>;

inline bool varset_contains(const VarSet& s, VarId v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline void varset_insert(VarSet& s, VarId v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
}

inline void varset_erase(VarSet& s, VarId v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it != s.end() && *it == v) s.erase(it);
}

inline VarSet varset_union(const VarSet& a, const VarSet& b) {
    VarSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool varset_subset(const VarSet& sub, const VarSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline VarSet make_varset(std::initializer_list<VarId> vs) {
    VarSet out(vs);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// -------------------------------------------------------------------------
// Hashing (FNV-1a, 64-bit) for fingerprints and cache keys.

class Fnv1a {
public:
    void update(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    template <typename T>
    void update_value(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        update(&v, sizeof(T));
    }
    void update_string(std::string_view s) {
        update_value<std::uint64_t>(s.size());
        update(s.data(), s.size());
    }
    template <typename T>
    void update_span(const T* data, std::size_t n) {
        static_assert(std::is_trivially_copyable_v<T>);
        update_value<std::uint64_t>(n);
        update(data, n * sizeof(T));
    }
    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Mixes a seed with coordinate words into an independent derived seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (std::uint64_t c : coords) h = mix(h ^ mix(c));
    return h;
}

// -------------------------------------------------------------------------
// Error types. Callers branch on these; messages carry the offending detail.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
/// Edge operation would introduce a directed cycle.
struct CycleError : Error {
    using Error::Error;
};
/// Edge operation does not apply to the given graph.
struct NotApplicableError : Error {
    using Error::Error;
};
/// A score was requested on a view with zero rows.
struct EmptyViewError : Error {
    using Error::Error;
};
/// Plain hill-climbing was given data with missing cells.
struct MissingDataError : Error {
    using Error::Error;
};
struct NoCompleteRowsError : Error {
    using Error::Error;
};
/// A weight denominator was zero for a configuration that occurs in the data.
struct PositivityError : Error {
    using Error::Error;
};

}  // namespace bnsl

#endif  // BNSL_COMMON_HPP
