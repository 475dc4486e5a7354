#include "caged/graphs.hpp"
#include "caged/errors.hpp"
#include "growth.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace caged {

IntSeq::IntSeq(std::initializer_list<int> xs) : IntSeq(std::vector<int>(xs)) {}

IntSeq::IntSeq(std::vector<int> xs) : x_(std::move(xs))
{
    if (x_.empty())
        throw InvalidParameter("growth sequence must be nonempty");
    for (int v : x_)
        if (v < 1) throw InvalidParameter("growth sequence entries must be >= 1");
    if (x_.back() < 2)
        throw InvalidParameter("last entry of a growth sequence must be >= 2");
}

std::int64_t IntSeq::product() const
{
    std::int64_t p = 1;
    for (int v : x_) p *= v;
    return p;
}

bool IntSeq::all_at_least_two() const
{
    return std::all_of(x_.begin(), x_.end(), [](int v) { return v >= 2; });
}

IntSeq IntSeq::prefix(int len) const
{
    return IntSeq(std::vector<int>(x_.begin(), x_.begin() + len));
}

std::string IntSeq::str() const
{
    std::string s;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(x_[i]);
    }
    return s;
}

IntSeq parse_intseq(const std::string& text)
{
    std::vector<int> xs;
    if (!text.empty() && text.back() == ',') throw InvalidParameter("cannot parse growth sequence '" + text + "'");
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw InvalidParameter("");
            xs.push_back(v);
        } catch (const std::exception&) {
            throw InvalidParameter("cannot parse growth sequence '" + text + "'");
        }
    }
    return IntSeq(std::move(xs));
}

bool Graph::has_edge(int u, int v) const
{
    return std::binary_search(edges.begin(), edges.end(), make_edge(u, v));
}

std::vector<std::vector<int>> Graph::adjacency() const
{
    std::vector<std::vector<int>> adj(num_vertices);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

std::vector<int> Graph::degrees() const
{
    std::vector<int> deg(num_vertices, 0);
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

std::vector<int> Graph::distances_from(int source) const
{
    auto adj = adjacency();
    std::vector<int> dist(num_vertices, -1);
    std::queue<int> q;
    dist[source] = 0;
    q.push(source);
    while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (int b : adj[a])
            if (dist[b] < 0) {
                dist[b] = dist[a] + 1;
                q.push(b);
            }
    }
    return dist;
}

void Graph::validate() const
{
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        if (u >= v || u < 0 || v >= num_vertices)
            throw InvalidParameter("edge out of range or not normalized");
        if (i && edges[i - 1] >= edges[i])
            throw InvalidParameter("edges not sorted or duplicated");
    }
    for (const auto& f : plaquettes) {
        if (f.size() < 3) throw InvalidParameter("plaquette too short");
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!has_edge(f[i], f[(i + 1) % f.size()]))
                throw InvalidParameter("plaquette uses a non-edge");
    }
}

Rational make_rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw InvalidParameter("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return {num / g, den / g};
}

bool operator<(const Rational& a, const Rational& b)
{
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

Graph shrub(int p)
{
    if (p < 1) throw InvalidParameter("shrub requires p >= 1");
    if (p >= 2) return grow_tree(IntSeq{p});
    Graph g;   // K_{2,1}: a path through one interior vertex
    g.num_vertices = 3;
    g.edges = {{0, 1}, {1, 2}};
    g.first_vertex = 0;
    g.last_vertex = 2;
    return g;
}

namespace {

Graph from_growth(detail::Growth&& gr)
{
    Graph g;
    g.num_vertices = gr.n;
    g.edges.reserve(gr.edges.size());
    for (const auto& e : gr.edges) g.edges.push_back(make_edge(e.u, e.v));
    std::sort(g.edges.begin(), g.edges.end());
    g.plaquettes = std::move(gr.faces);
    g.first_vertex = 0;
    g.last_vertex = gr.n - 1;
    return g;
}

} // namespace

Graph grow_tree(const IntSeq& x)
{
    return from_growth(detail::grow(x));
}

Rational average_degree(const Graph& g)
{
    if (g.num_vertices <= 0) throw InvalidParameter("average degree of an empty graph");
    return make_rational(2 * static_cast<std::int64_t>(g.edges.size()), g.num_vertices);
}

Replacement replace_edges_detailed(const Graph& g, const std::vector<Edge>& marked,
                                   const std::map<Edge, IntSeq>& trees)
{
    std::set<Edge> todo;
    for (auto e : marked) {
        e = make_edge(e.first, e.second);
        if (!g.has_edge(e.first, e.second))
            throw InvalidParameter("marked edge " + std::to_string(e.first) + "-" +
                                   std::to_string(e.second) + " is not in the graph");
        todo.insert(e);
    }

    Replacement r;
    Graph& out = r.graph;
    out.num_vertices = g.num_vertices;
    out.first_vertex = g.first_vertex;
    out.last_vertex = g.last_vertex;
    out.markers = g.markers;
    for (auto e : g.edges)
        if (!todo.count(e)) out.edges.push_back(e);

    std::map<Edge, std::vector<int>> detour;   // host edge -> left boundary path
    for (auto e : marked) {
        e = make_edge(e.first, e.second);
        if (detour.count(e)) continue;
        auto it = trees.find(e);
        if (it == trees.end())
            throw InvalidParameter("no growth sequence given for a marked edge");
        auto gr = detail::grow(it->second);
        const int n = gr.n;
        std::vector<int> map(n);
        map[0] = e.first;
        map[n - 1] = e.second;
        for (int t = 1; t + 1 < n; ++t) map[t] = out.num_vertices + t - 1;
        out.num_vertices += n - 2;
        for (const auto& te : gr.edges) out.edges.push_back(make_edge(map[te.u], map[te.v]));
        for (const auto& f : gr.faces) {
            auto& nf = out.plaquettes.emplace_back();
            for (int w : f) nf.push_back(map[w]);
        }
        std::vector<int> path;
        for (int w : gr.left) path.push_back(map[w]);
        detour[e] = path;
        r.splices.push_back({e, it->second, std::move(map)});
    }

    // Host faces follow the left boundary of each spliced tree.
    for (const auto& f : g.plaquettes) {
        std::vector<int> nf;
        for (std::size_t i = 0; i < f.size(); ++i) {
            int a = f[i], b = f[(i + 1) % f.size()];
            auto it = detour.find(make_edge(a, b));
            if (it == detour.end()) {
                nf.push_back(a);
                continue;
            }
            const auto& p = it->second;
            if (p.front() == a)
                nf.insert(nf.end(), p.begin(), p.end() - 1);
            else
                nf.insert(nf.end(), p.rbegin(), p.rend() - 1);
        }
        out.plaquettes.push_back(std::move(nf));
    }

    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return r;
}

Graph replace_edges(const Graph& g, const std::vector<Edge>& marked,
                    const std::map<Edge, IntSeq>& trees)
{
    return replace_edges_detailed(g, marked, trees).graph;
}

Graph chain_graph(const IntSeq& x, int cells)
{
    if (cells < 1) throw InvalidParameter("chain needs at least one cell");
    auto gr = detail::grow(x);
    const int s = gr.n - 1;
    Graph g;
    g.num_vertices = cells * s + 1;
    for (int c = 0; c < cells; ++c) {
        const int off = c * s;
        for (const auto& e : gr.edges) g.edges.push_back(make_edge(e.u + off, e.v + off));
        for (const auto& f : gr.faces) {
            auto& nf = g.plaquettes.emplace_back(f);
            for (auto& w : nf) w += off;
        }
    }
    for (int c = 0; c <= cells; ++c) g.markers.push_back(c * s);
    std::sort(g.edges.begin(), g.edges.end());
    g.first_vertex = 0;
    g.last_vertex = g.num_vertices - 1;
    return g;
}

} // namespace caged
