#pragma once

#include <array>
#include <string>

#include "atlas/saddle.hpp"

namespace fixture {

using namespace atlas;

inline const StokesGraph& reference_graph() {
    static const StokesGraph g = build_graph(reference_params());
    return g;
}

inline const ConnectionState& reference_base() {
    static const ConnectionState s = [] {
        const auto& g = reference_graph();
        return base_state(g.params, base_stokes_constants(g.reference, g.params));
    }();
    return s;
}

// Published base Stokes constants at z*, 1-based S_ij.
inline StokesMatrix published_base() {
    return {{0, -1, 0, 0}, {1, 0, 0, -1}, {0, 0, 0, 1}, {0, 1, -1, 0}};
}

// Published region rows: S12, S13, S14, S23, S24, S34.
struct StokesRow {
    const char* label;
    std::array<int, 6> s;
};
inline const std::array<StokesRow, 13>& published_stokes_rows() {
    static const std::array<StokesRow, 13> rows{{
        {"a1", {-1, 0, 0, 0, -1, 1}},
        {"a2", {-1, 0, 0, -1, -1, 1}},
        {"a3", {-1, 0, 1, -1, -1, 1}},
        {"a4", {-1, 0, -1, 0, -1, 1}},
        {"a5", {-1, 0, -1, 1, -1, 1}},
        {"c1", {-1, 0, 0, 0, -1, 1}},
        {"c2", {-1, 0, 0, 0, -1, 1}},
        {"c3", {-1, 0, -1, 0, -1, 1}},
        {"c4", {-1, 0, -1, -1, -1, 1}},
        {"c5", {-1, -1, -1, -1, -1, 1}},
        {"c6", {-1, 0, -1, -1, -1, 1}},
        {"c7", {-1, 0, 0, -1, -1, 1}},
        {"c8", {-1, 0, 0, 0, -1, 1}},
    }};
    return rows;
}

inline std::array<int, 6> upper(const StokesMatrix& S) {
    std::array<int, 6> out{};
    int q = 0;
    for (int i = 0; i < kBranches; ++i)
        for (int j = i + 1; j < kBranches; ++j) out[q++] = int(S(i, j));
    return out;
}

// Published sigma rows as coefficient vectors over beta_1..beta_4.
struct SigmaRow {
    const char* label;
    std::array<std::array<int, 4>, 4> sigma;
};
inline const std::array<SigmaRow, 13>& published_sigma_rows() {
    constexpr std::array<int, 4> b1{1, 0, 0, 0}, b2{0, 1, 0, 0}, b3{0, 0, 1, 0}, b4{0, 0, 0, 1};
    static const std::array<SigmaRow, 13> rows{{
        {"a1", {b1, b2, b3, b4}},
        {"a2", {{{1, -1, 0, 0}, b2, b3, b4}}},
        {"a3", {{{1, -1, 0, 0}, {0, 1, 0, 1}, b3, b4}}},
        {"a4", {{{1, -1, 0, -1}, {0, 1, 0, 1}, b3, b4}}},
        {"a5", {{b1, {0, 1, 0, 1}, b3, b4}}},
        {"b1", {b1, b2, b3, b4}},
        {"b2", {{b1, {-1, 1, 0, 0}, b3, b4}}},
        {"b3", {{b1, {-1, 1, 0, 0}, {0, 0, 1, 1}, b4}}},
        {"b4", {{b1, {-1, 1, 0, 0}, {-1, 1, 1, 1}, b4}}},
        {"b5", {{b1, {-1, 1, 0, 0}, {0, 1, 1, 1}, {-1, 1, 0, 1}}}},
        {"b6", {{b1, {-1, 1, 0, 0}, {0, 1, 1, 1}, {0, 1, 0, 1}}}},
        {"b7", {{b1, b2, {0, 1, 1, 1}, {0, 1, 0, 1}}}},
        {"b8", {{b1, b2, b3, {0, 1, 0, 1}}}},
    }};
    return rows;
}

inline bool sigma_matches(const SigmaVector& got, const std::array<std::array<int, 4>, 4>& want) {
    for (int i = 0; i < kBranches; ++i)
        for (int q = 0; q < kBranches; ++q)
            if (got[i].c[q] != want[i][q]) return false;
    return true;
}

}  // namespace fixture
