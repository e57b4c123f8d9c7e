#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gconn/errors.hpp"

namespace gconn {

/// order^arity, throwing TooLargeForExact past `limit`.
inline std::uint64_t checked_power(std::uint64_t order, std::size_t arity, std::uint64_t limit) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) {
        if (n > limit / order) throw TooLargeForExact("|G|^n exceeds the exact-enumeration limit");
        n *= order;
    }
    if (n > limit) throw TooLargeForExact("|G|^n exceeds the exact-enumeration limit");
    return n;
}

/// Index of a residue tuple, first slot most significant.
inline std::uint64_t tuple_index(std::span<const std::uint64_t> residues, std::uint64_t order) {
    std::uint64_t idx = 0;
    for (const std::uint64_t r : residues) idx = idx * order + r;
    return idx;
}

/// Lexicographic odometer over Z_order^arity.
template <typename Fn>
void for_each_residue_tuple(std::uint64_t order, std::size_t arity, Fn&& fn) {
    std::vector<std::uint64_t> tuple(arity, 0);
    for (;;) {
        fn(std::span<const std::uint64_t>(tuple));
        std::size_t i = arity;
        for (;;) {
            if (i == 0) return;
            --i;
            if (++tuple[i] < order) break;
            tuple[i] = 0;
        }
    }
}

} // namespace gconn
