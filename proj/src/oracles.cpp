#include <dgs/oracles.hpp>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace dgs::oracle {

int component_count(int n, const std::vector<std::pair<int, int>>& edges) {
    UnionFind uf(n);
    int cc = n;
    for (auto& [u, v] : edges)
        if (uf.unite(u, v)) --cc;
    return cc;
}

std::vector<int> component_labels(int n, const std::vector<std::pair<int, int>>& edges) {
    UnionFind uf(n);
    for (auto& [u, v] : edges) uf.unite(u, v);
    std::vector<int> label(n);
    std::vector<int> smallest(n, -1);
    for (int v = 0; v < n; ++v) {
        int r = uf.find(v);
        if (smallest[r] < 0) smallest[r] = v;  // vertices scanned in order
    }
    for (int v = 0; v < n; ++v) label[v] = smallest[uf.find(v)];
    return label;
}

std::vector<WeightedEdge> kruskal_msf(int n, std::vector<WeightedEdge> edges) {
    for (auto& e : edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(edges.begin(), edges.end());
    UnionFind uf(n);
    std::vector<WeightedEdge> forest;
    for (auto& e : edges)
        if (uf.unite(e.u, e.v)) forest.push_back(e);
    return forest;
}

bool is_bipartite(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> color(n, -1);
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        queue.assign(1, s);
        for (size_t i = 0; i < queue.size(); ++i) {
            int w = queue[i];
            for (int nb : adj[w]) {
                if (color[nb] < 0) {
                    color[nb] = color[w] ^ 1;
                    queue.push_back(nb);
                } else if (color[nb] == color[w]) {
                    return false;
                }
            }
        }
    }
    return true;
}

int max_matching_exact(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n > 20) throw std::runtime_error("exact matching oracle limited to n <= 20");
    std::vector<std::pair<int, int>> es;
    for (auto& [u, v] : edges)
        if (u != v) es.emplace_back(std::min(u, v), std::max(u, v));
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    std::unordered_map<uint32_t, int> memo;
    memo.reserve(1u << std::min(n, 18));
    // best(mask) = max matching among vertices not in mask
    std::function<int(uint32_t)> best = [&](uint32_t mask) -> int {
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        // branch on the smallest free vertex: leave it out or match it
        int v = -1;
        for (int i = 0; i < n; ++i)
            if (!(mask & (1u << i))) { v = i; break; }
        if (v < 0) return 0;
        int result = best(mask | (1u << v));
        for (auto& [a, b] : es) {
            if (a != v && b != v) continue;
            int o = (a == v) ? b : a;
            if (mask & (1u << o)) continue;
            result = std::max(result, 1 + best(mask | (1u << a) | (1u << b)));
        }
        memo[mask] = result;
        return result;
    };
    return best(0);
}

int maximal_matching(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<char> used(n, 0);
    int size = 0;
    for (auto& [u, v] : edges) {
        if (u == v || used[u] || used[v]) continue;
        used[u] = used[v] = 1;
        ++size;
    }
    return size;
}

std::vector<int> tree_path(int n, const std::set<std::pair<int, int>>& edges,
                           int u, int v) {
    std::vector<std::vector<int>> adj(n);
    for (auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> prev(n, -1);
    std::vector<char> seen(n, 0);
    std::vector<int> queue = {u};
    seen[u] = 1;
    for (size_t i = 0; i < queue.size() && !seen[v]; ++i) {
        int w = queue[i];
        for (int nb : adj[w]) {
            if (seen[nb]) continue;
            seen[nb] = 1;
            prev[nb] = w;
            queue.push_back(nb);
        }
    }
    if (!seen[v]) return {};
    std::vector<int> path;
    for (int w = v; w != -1; w = prev[w]) path.push_back(w);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace dgs::oracle
