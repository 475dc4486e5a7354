#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace caged {

/// Growth sequence X = {x_1, ..., x_d}.
class IntSeq {
public:
    IntSeq() = default;
    IntSeq(std::initializer_list<int> xs);
    explicit IntSeq(std::vector<int> xs);

    int depth() const { return static_cast<int>(x_.size()); }
    int operator[](int i) const { return x_[i]; }   // 0-based
    const std::vector<int>& entries() const { return x_; }
    std::int64_t product() const;
    bool all_at_least_two() const;
    IntSeq prefix(int len) const;
    std::string str() const;

    bool operator==(const IntSeq&) const = default;

private:
    std::vector<int> x_;
};

IntSeq parse_intseq(const std::string& text);   // "2,3,2"

using Edge = std::pair<int, int>;   // stored with first < second

inline Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

struct Graph {
    int num_vertices = 0;
    std::vector<Edge> edges;                        // sorted, unique
    std::vector<std::vector<int>> plaquettes;       // counterclockwise loops
    std::optional<int> first_vertex, last_vertex;
    std::vector<int> markers;                       // chain cell boundaries

    bool has_edge(int u, int v) const;
    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> degrees() const;
    std::vector<int> distances_from(int source) const;   // BFS, -1 if unreachable
    void validate() const;
};

struct Rational {
    std::int64_t num = 0, den = 1;
    double value() const { return double(num) / double(den); }
    bool operator==(const Rational&) const = default;
};
Rational make_rational(std::int64_t num, std::int64_t den);
bool operator<(const Rational& a, const Rational& b);

Graph shrub(int p);
Graph grow_tree(const IntSeq& x);
Rational average_degree(const Graph& g);

/// Glued tree spliced into a host graph; tree vertex t maps to vertex_map[t].
struct Splice {
    Edge original;
    IntSeq x;
    std::vector<int> vertex_map;
};

struct Replacement {
    Graph graph;
    std::vector<Splice> splices;
};

Replacement replace_edges_detailed(const Graph& g, const std::vector<Edge>& marked,
                                   const std::map<Edge, IntSeq>& trees);
Graph replace_edges(const Graph& g, const std::vector<Edge>& marked,
                    const std::map<Edge, IntSeq>& trees);

/// Open chain of `cells` trees; cell c owns ids [c(N-1), (c+1)(N-1)].
Graph chain_graph(const IntSeq& x, int cells);

enum class LotusKind { first, second };
enum class VertexRole { center, midpoint, corner, interior };

struct LotusSpec {
    LotusKind kind = LotusKind::first;
    int sides = 6;
    int shrub_p = 2;
    int tiling_q = 3;
    int generations = 1;
};

struct Shrub {
    int root_a, root_b;
    std::vector<int> interior;
};

struct LotusPatch {
    Graph graph;
    std::vector<VertexRole> roles;
    std::vector<int> face_signs;      // flux of plaquette i is face_signs[i] * Phi
    std::vector<Shrub> shrubs;
    std::vector<bool> boundary;       // hub touches the patch edge
    int tiles = 0;
};

void validate(const LotusSpec& spec);
LotusPatch lotus_patch(const LotusSpec& spec);

/// Skeleton of a regular {n,q} patch grown ring by ring; polygons are CCW.
struct TilingPatch {
    int num_vertices = 0;
    std::vector<std::vector<int>> polygons;
    std::vector<int> polygon_count;   // polygons touching each vertex
};
TilingPatch regular_tiling_patch(int n, int q, int generations);

struct Factorizations {
    std::int64_t count = 0;
    std::vector<std::vector<std::int64_t>> list;
};

/// Ordered factorizations of m into factors > 1 (m = 1 gives the empty one).
Factorizations ordered_factorizations(std::int64_t m, bool with_list = true);
std::int64_t ordered_factorization_count(std::int64_t m);

} // namespace caged
