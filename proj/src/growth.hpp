#pragma once

#include "caged/graphs.hpp"

namespace caged::detail {

// Edge of a glued tree tagged with the level and copy index (both 1-based)
// at which it joined a root to a copy of the previous level.
struct TaggedEdge {
    int u, v;
    int level, copy;
};

struct Growth {
    int n = 1;
    std::vector<TaggedEdge> edges;
    std::vector<std::vector<int>> faces;
    std::vector<int> left{0}, right{0};
};

// Y_i = [F][x_i copies of Y_{i-1}][L], F = 0 and L = n-1.
inline Growth grow(const IntSeq& x)
{
    Growth g;
    for (int i = 0; i < x.depth(); ++i) {
        const int xi = x[i];
        const int m = g.n;
        Growth h;
        h.n = xi * m + 2;
        const int last = h.n - 1;
        for (int c = 0; c < xi; ++c) {
            const int off = 1 + c * m;
            for (const auto& e : g.edges)
                h.edges.push_back({e.u + off, e.v + off, e.level, e.copy});
            for (const auto& f : g.faces) {
                auto& nf = h.faces.emplace_back(f);
                for (auto& w : nf) w += off;
            }
            h.edges.push_back({0, off, i + 1, c + 1});
            h.edges.push_back({off + m - 1, last, i + 1, c + 1});
        }
        for (int c = 0; c + 1 < xi; ++c) {
            const int o1 = 1 + c * m, o2 = 1 + (c + 1) * m;
            std::vector<int> loop{0};
            for (int w : g.right) loop.push_back(w + o1);
            loop.push_back(last);
            for (auto it = g.left.rbegin(); it != g.left.rend(); ++it) loop.push_back(*it + o2);
            h.faces.push_back(std::move(loop));
        }
        h.left = {0};
        for (int w : g.left) h.left.push_back(w + 1);
        h.left.push_back(last);
        h.right = {0};
        for (int w : g.right) h.right.push_back(w + 1 + (xi - 1) * m);
        h.right.push_back(last);
        g = std::move(h);
    }
    return g;
}

} // namespace caged::detail
