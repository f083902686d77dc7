#ifndef DGS_ORACLES_HPP
#define DGS_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

// Reference implementations used to check the streaming structures. They are
// deliberately simple and independent of the sketch/tour code paths.
namespace dgs::oracle {

struct UnionFind {
    explicit UnionFind(int n) : parent(n), rank(n, 0) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
        return true;
    }
    std::vector<int> parent;
    std::vector<int> rank;
};

struct WeightedEdge {
    int64_t w;
    int u;
    int v;
    bool operator<(const WeightedEdge& o) const {
        if (w != o.w) return w < o.w;
        if (u != o.u) return u < o.u;
        return v < o.v;
    }
    bool operator==(const WeightedEdge& o) const {
        return w == o.w && u == o.u && v == o.v;
    }
};

// number of connected components of the graph on [0, n)
int component_count(int n, const std::vector<std::pair<int, int>>& edges);

// component label per vertex: the smallest vertex id in its component
std::vector<int> component_labels(int n, const std::vector<std::pair<int, int>>& edges);

// minimum spanning forest under the total order (w, u, v), u < v per edge;
// ties are therefore broken identically everywhere this order is used
std::vector<WeightedEdge> kruskal_msf(int n, std::vector<WeightedEdge> edges);

bool is_bipartite(int n, const std::vector<std::pair<int, int>>& edges);

// size of a maximum matching; exact for n <= 20 vertices (bitmask dynamic
// program over matched vertex sets), throws otherwise
int max_matching_exact(int n, const std::vector<std::pair<int, int>>& edges);

// greedy maximal matching size, a factor-2 lower bound on vertices matched
int maximal_matching(int n, const std::vector<std::pair<int, int>>& edges);

// unique u-v path in a forest; empty if disconnected, endpoints included
std::vector<int> tree_path(int n, const std::set<std::pair<int, int>>& edges,
                           int u, int v);

} // namespace dgs::oracle

#endif // DGS_ORACLES_HPP
