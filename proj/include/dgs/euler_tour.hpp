#ifndef DGS_EULER_TOUR_HPP
#define DGS_EULER_TOUR_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dgs {

struct TourError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Index-rewrite messages broadcast when tours change. Messages of one batch
// touch disjoint (tour, interval) scopes, so application order is irrelevant.
struct ShiftMessage {
    enum Kind { shift_index, add_index, remove_index };
    Kind kind;
    int tour = -1;      // scope
    long lo = 0, hi = 0;  // interval for shift_index
    long delta = 0;
    int vertex = -1;    // for add/remove
    long index = 0;
};

// Forest of rooted trees, each represented by its Euler tour occurrence
// indices. Convention: a traversal of edge {u,v} contributes both endpoints
// as consecutive occurrences, children are kept in ascending vertex id, and
// indexing is 1-based with f(root) = 1. A tree on m vertices has tour length
// 4(m-1); singletons have length 0.
class EulerForest {
public:
    struct Tour {
        int root = -1;
        long length = 0;
        std::unordered_map<int, std::vector<long>> occ;  // vertex -> sorted indices
        std::set<std::pair<int, int>> edges;
    };

    explicit EulerForest(int n);

    int size() const { return n_; }
    int tour_of(int v) const { return tour_of_[check(v)]; }
    const Tour& tour(int tid) const;
    bool same_tour(int u, int v) const { return tour_of(u) == tour_of(v); }
    bool has_edge(int u, int v) const;

    long first_index(int v) const;  // f(v); 0 for singletons
    long last_index(int v) const;   // l(v); 0 for singletons

    // regenerates canonical indices with u as root
    void reroot(int u);

    // pre: u and v are the roots of two distinct tours
    void join(int u, int v);

    // attach v's tour under vertex x of another tour (x need not be a root)
    void attach(int x, int v);

    // pre: {u,v} is a tree edge; returns (tour id of u, tour id of v)
    std::pair<int, int> split(int u, int v);

    // all tree edges on the u-v path, decided from (f,l) values per edge
    std::vector<std::pair<int, int>> identify_path(int u, int v) const;

    // realize a forest of inter-tree edges; each resulting tree keeps the
    // root of its smallest-id constituent tour
    void batch_join(const std::vector<std::pair<int, int>>& inter_edges);

    // remove a set of tree edges; returns the tour ids of all fragments
    std::vector<int> batch_split(const std::vector<std::pair<int, int>>& tree_edges);

    std::vector<int> tour_vertices(int tid) const;
    std::vector<int> tour_ids() const;

    // Debug dump: per tour `tour <id> root <r> L <len>` then `occ <vertex>
    // <index>` lines sorted by index. dump_state prints the maintained
    // indices; dump_rebuilt regenerates them from the edge sets and roots.
    // The two agree byte for byte iff the maintained state is canonical.
    std::string dump_state() const;
    std::string dump_rebuilt() const;

    uint64_t word_cost() const;

    // canonical occurrence sequence for one tree: children in ascending
    // vertex id, both endpoints per traversal
    static std::unordered_map<int, std::vector<long>> canonical_occurrences(
        const std::set<std::pair<int, int>>& edges, int root, long* length_out);

    void apply_messages(const std::vector<ShiftMessage>& messages);

private:
    int check(int v) const {
        if (v < 0 || v >= n_) throw TourError("vertex out of range");
        return v;
    }
    Tour& tour_mut(int tid);
    int fresh_id() { return next_id_++; }

    int n_;
    int next_id_;
    std::vector<int> tour_of_;
    std::map<int, Tour> tours_;
};

} // namespace dgs

#endif // DGS_EULER_TOUR_HPP
