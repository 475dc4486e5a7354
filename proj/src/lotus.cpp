#include "caged/errors.hpp"
#include "caged/graphs.hpp"

#include <algorithm>
#include <numeric>

namespace caged {

namespace {

struct UnionFind {
    std::vector<int> parent;
    int add()
    {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int a)
    {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

TilingPatch regular_tiling_patch(int n, int q, int generations)
{
    if (n < 3 || q < 3) throw InvalidParameter("tiling needs n >= 3 and q >= 3");
    if (generations < 1) throw InvalidParameter("generations must be >= 1");
    if (2 * (n + q) > n * q) throw InvalidParameter("{n,q} is spherical; no infinite tiling");

    TilingPatch t;
    t.num_vertices = n;
    std::vector<int> seed(n);
    std::iota(seed.begin(), seed.end(), 0);
    t.polygons.push_back(seed);
    t.polygon_count.assign(n, 1);
    std::vector<int> boundary = seed;

    for (int ring = 1; ring < generations; ++ring) {
        const int len = static_cast<int>(boundary.size());
        struct Spoke { int pos; int end; };
        std::vector<Spoke> spokes;
        UnionFind uf;
        const int base = t.num_vertices;
        for (int i = 0; i < len; ++i) {
            int k = q - t.polygon_count[boundary[i]] - 1;
            if (k < 0) throw InvalidParameter("tiling patch overfull at a boundary vertex");
            for (int s = 0; s < k; ++s) spokes.push_back({i, uf.add()});
        }
        if (spokes.empty()) throw InvalidParameter("tiling patch closed up; cannot grow");

        // Fresh vertices live in the union-find; ids are assigned after merging.
        std::vector<std::vector<int>> fresh_polys;   // >= base: old vertex; < 0: fresh ~id
        std::vector<int> fresh_boundary;
        const int ns = static_cast<int>(spokes.size());
        for (int a = 0; a < ns; ++a) {
            int b = (a + 1) % ns;
            int ell = ((spokes[b].pos - spokes[a].pos) % len + len) % len;
            if (b <= a && ell == 0) ell = len;
            int r = n - ell - 2;
            if (r < 0) throw InvalidParameter("tiling patch cannot be grown consistently");
            std::vector<int> poly;
            for (int s = 0; s <= ell; ++s)
                poly.push_back(boundary[((spokes[b].pos - s) % len + len) % len]);
            poly.push_back(~spokes[a].end);
            fresh_boundary.push_back(~spokes[a].end);
            for (int s = 1; s < r; ++s) {
                int v = ~uf.add();
                poly.push_back(v);
                fresh_boundary.push_back(v);
            }
            if (r == 0)
                uf.unite(spokes[b].end, spokes[a].end);
            else
                poly.push_back(~spokes[b].end);
            fresh_polys.push_back(std::move(poly));
        }

        std::vector<int> id(uf.parent.size(), -1);
        int next = base;
        auto resolve = [&](int v) {
            if (v >= 0) return v;
            int root = uf.find(~v);
            if (id[root] < 0) id[root] = next++;
            return id[root];
        };
        for (auto& poly : fresh_polys) {
            for (auto& v : poly) v = resolve(v);
            t.polygons.push_back(poly);
        }
        t.num_vertices = next;
        t.polygon_count.resize(next, 0);
        for (const auto& poly : fresh_polys)
            for (int v : poly) ++t.polygon_count[v];

        boundary.clear();
        for (int v : fresh_boundary) {
            v = resolve(v);
            if (boundary.empty() || boundary.back() != v) boundary.push_back(v);
        }
        while (boundary.size() > 1 && boundary.front() == boundary.back()) boundary.pop_back();
    }
    return t;
}

void validate(const LotusSpec& spec)
{
    if (spec.shrub_p < 2) throw InvalidParameter("lotus tiles need shrub_p >= 2");
    if (spec.generations < 1) throw InvalidParameter("generations must be >= 1");
    if (spec.kind == LotusKind::first) {
        if (spec.sides < 6 || spec.tiling_q != 3)
            throw InvalidParameter("first-kind lotus needs sides >= 6 and tiling_q = 3");
    } else {
        if (spec.sides < 4 || spec.sides % 2 || spec.tiling_q < 4 || spec.tiling_q % 2)
            throw InvalidParameter("second-kind lotus needs even sides >= 4 and even tiling_q >= 4");
    }
}

LotusPatch lotus_patch(const LotusSpec& spec)
{
    validate(spec);
    const int n = spec.sides, p = spec.shrub_p;
    TilingPatch sk = regular_tiling_patch(n, spec.tiling_q, spec.generations);

    LotusPatch out;
    Graph& g = out.graph;
    g.num_vertices = sk.num_vertices;
    out.tiles = static_cast<int>(sk.polygons.size());
    out.roles.assign(sk.num_vertices, VertexRole::corner);
    out.boundary.resize(sk.num_vertices);
    for (int v = 0; v < sk.num_vertices; ++v)
        out.boundary[v] = sk.polygon_count[v] < spec.tiling_q;

    auto add_vertex = [&](VertexRole role, bool edge) {
        out.roles.push_back(role);
        out.boundary.push_back(edge);
        return g.num_vertices++;
    };
    auto add_face = [&](std::vector<int> loop, int sign) {
        g.plaquettes.push_back(std::move(loop));
        out.face_signs.push_back(sign);
    };
    auto add_shrub = [&](int a, int b, std::vector<int> interior) {
        for (int w : interior) {
            g.edges.push_back(make_edge(a, w));
            g.edges.push_back(make_edge(b, w));
        }
        out.shrubs.push_back({a, b, std::move(interior)});
    };

    std::map<Edge, int> side_tiles;
    for (const auto& poly : sk.polygons)
        for (int j = 0; j < n; ++j) ++side_tiles[make_edge(poly[j], poly[(j + 1) % n])];

    std::map<Edge, int> midpoint;
    struct HalfSide { int from, to, s; };
    std::map<Edge, std::vector<HalfSide>> halves;

    for (const auto& poly : sk.polygons) {
        const int c = add_vertex(VertexRole::center, false);
        std::vector<int> s(n);
        for (auto& v : s) v = add_vertex(VertexRole::interior, false);
        auto extra = [&]() {
            std::vector<int> t(p - 2);
            for (auto& v : t) v = add_vertex(VertexRole::interior, false);
            return t;
        };

        if (spec.kind == LotusKind::first) {
            std::vector<int> m(n);
            for (int j = 0; j < n; ++j) {
                Edge side = make_edge(poly[j], poly[(j + 1) % n]);
                auto it = midpoint.find(side);
                if (it == midpoint.end())
                    it = midpoint.emplace(side, add_vertex(VertexRole::midpoint,
                                                           side_tiles[side] < 2)).first;
                m[j] = it->second;
            }
            for (int j = 0; j < n; ++j) {
                std::vector<int> inner{s[(j + n - 1) % n]};
                for (int v : extra()) inner.push_back(v);
                inner.push_back(s[j]);
                for (std::size_t a = 0; a + 1 < inner.size(); ++a)
                    add_face({c, inner[a], m[j], inner[a + 1]}, +1);
                add_shrub(c, m[j], inner);
            }
            for (int j = 0; j < n; ++j) {
                const int mj = m[j], mk = m[(j + 1) % n];
                std::vector<int> rim{s[j]};
                for (int v : extra()) rim.push_back(v);
                rim.push_back(poly[(j + 1) % n]);
                for (std::size_t a = 0; a + 1 < rim.size(); ++a)
                    add_face({mj, rim[a + 1], mk, rim[a]}, -1);
                add_shrub(mj, mk, rim);
            }
        } else {
            for (int j = 0; j < n; ++j) {
                std::vector<int> inner{s[(j + n - 1) % n]};
                for (int v : extra()) inner.push_back(v);
                inner.push_back(s[j]);
                const int sign = j % 2 ? -1 : +1;
                for (std::size_t a = 0; a + 1 < inner.size(); ++a)
                    add_face({c, inner[a], poly[j], inner[a + 1]}, sign);
                add_shrub(c, poly[j], inner);
                const int u = poly[j], v = poly[(j + 1) % n];
                g.edges.push_back(make_edge(u, s[j]));
                g.edges.push_back(make_edge(v, s[j]));
                halves[make_edge(u, v)].push_back({u, v, s[j]});
            }
        }
    }

    for (const auto& [side, hs] : halves) {
        if (hs.size() != 2) continue;
        const auto& a = hs[0];
        add_face({a.to, a.s, a.from, hs[1].s}, +1);
        out.shrubs.push_back({a.from, a.to, {a.s, hs[1].s}});
    }

    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return out;
}

} // namespace caged
