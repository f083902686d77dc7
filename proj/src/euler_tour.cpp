#include <dgs/euler_tour.hpp>

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

namespace dgs {

namespace {

std::pair<int, int> canon(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::unordered_map<int, std::vector<int>> adjacency(
    const std::set<std::pair<int, int>>& edges) {
    std::unordered_map<int, std::vector<int>> adj;
    for (auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

} // namespace

EulerForest::EulerForest(int n) : n_(n), next_id_(n), tour_of_(n) {
    if (n < 1) throw TourError("forest needs at least one vertex");
    for (int v = 0; v < n; ++v) {
        tour_of_[v] = v;
        Tour t;
        t.root = v;
        t.length = 0;
        t.occ[v] = {};
        tours_.emplace(v, std::move(t));
    }
}

const EulerForest::Tour& EulerForest::tour(int tid) const {
    auto it = tours_.find(tid);
    if (it == tours_.end()) throw TourError("unknown tour id");
    return it->second;
}

EulerForest::Tour& EulerForest::tour_mut(int tid) {
    auto it = tours_.find(tid);
    if (it == tours_.end()) throw TourError("unknown tour id");
    return it->second;
}

bool EulerForest::has_edge(int u, int v) const {
    const Tour& t = tour(tour_of(u));
    return t.edges.count(canon(u, v)) > 0;
}

long EulerForest::first_index(int v) const {
    const Tour& t = tour(tour_of(v));
    auto it = t.occ.find(v);
    return (it == t.occ.end() || it->second.empty()) ? 0 : it->second.front();
}

long EulerForest::last_index(int v) const {
    const Tour& t = tour(tour_of(v));
    auto it = t.occ.find(v);
    return (it == t.occ.end() || it->second.empty()) ? 0 : it->second.back();
}

std::unordered_map<int, std::vector<long>> EulerForest::canonical_occurrences(
    const std::set<std::pair<int, int>>& edges, int root, long* length_out) {
    std::unordered_map<int, std::vector<long>> occ;
    occ[root] = {};
    auto adj = adjacency(edges);
    long idx = 0;
    // iterative DFS emitting (x, c) on entry to child c and (c, x) on exit
    struct Frame {
        int vertex;
        int parent;
        size_t next_child;
    };
    std::vector<Frame> stack;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
        Frame& fr = stack.back();
        auto it = adj.find(fr.vertex);
        const std::vector<int>* nb = (it == adj.end()) ? nullptr : &it->second;
        bool descended = false;
        while (nb && fr.next_child < nb->size()) {
            int c = (*nb)[fr.next_child++];
            if (c == fr.parent) continue;
            occ[fr.vertex].push_back(++idx);
            occ[c].push_back(++idx);
            stack.push_back({c, fr.vertex, 0});
            descended = true;
            break;
        }
        if (descended) continue;
        int child = fr.vertex;
        int parent = fr.parent;
        stack.pop_back();
        if (parent >= 0) {
            occ[child].push_back(++idx);
            occ[parent].push_back(++idx);
        }
    }
    if (length_out) *length_out = idx;
    return occ;
}

void EulerForest::apply_messages(const std::vector<ShiftMessage>& messages) {
    for (const ShiftMessage& m : messages) {
        Tour& t = tour_mut(m.tour);
        switch (m.kind) {
            case ShiftMessage::shift_index:
                for (auto& [v, idxs] : t.occ)
                    for (long& i : idxs)
                        if (i >= m.lo && i <= m.hi) i += m.delta;
                break;
            case ShiftMessage::add_index:
                t.occ[m.vertex].push_back(m.index);
                break;
            case ShiftMessage::remove_index: {
                auto& idxs = t.occ[m.vertex];
                auto it = std::find(idxs.begin(), idxs.end(), m.index);
                if (it == idxs.end()) throw TourError("remove_index: index not present");
                idxs.erase(it);
                break;
            }
        }
    }
    // restore sorted order once per affected tour
    std::set<int> touched;
    for (const ShiftMessage& m : messages) touched.insert(m.tour);
    for (int tid : touched)
        for (auto& [v, idxs] : tour_mut(tid).occ)
            std::sort(idxs.begin(), idxs.end());
}

void EulerForest::reroot(int u) {
    Tour& t = tour_mut(tour_of(u));
    if (t.root == u) return;
    t.occ = canonical_occurrences(t.edges, u, &t.length);
    t.root = u;
}

void EulerForest::join(int u, int v) {
    int tu = tour_of(u), tv = tour_of(v);
    if (tu == tv) throw TourError("join endpoints share a tour");
    if (tour(tu).root != u || tour(tv).root != v)
        throw TourError("join requires both tours rooted at the named endpoints");
    attach(u, v);
}

void EulerForest::attach(int x, int v) {
    int tx = tour_of(x), tv = tour_of(v);
    if (tx == tv) throw TourError("attach endpoints share a tour");
    Tour& a = tour_mut(tx);
    Tour& b = tour_mut(tv);
    if (b.root != v) reroot(v);

    long lv = b.length;
    // anchor: the occurrence of x after which the new child block begins so
    // that x's children stay in ascending vertex id
    long anchor;
    int best_child = -1;
    long fx = 0;
    {
        auto adj = adjacency(a.edges);
        auto it = adj.find(x);
        auto& xi = a.occ[x];
        fx = xi.empty() ? 0 : xi.front();
        if (it != adj.end()) {
            for (int nb : it->second) {
                if (nb >= v) continue;
                bool is_child = (x == a.root) ||
                                (a.occ[nb].front() > fx && a.occ[nb].back() < xi.back());
                if (is_child && nb > best_child) best_child = nb;
            }
        }
        if (best_child >= 0)
            anchor = a.occ[best_child].back() + 1;
        else
            anchor = (x == a.root) ? 0 : fx;
    }

    std::vector<ShiftMessage> msgs;
    msgs.push_back({ShiftMessage::shift_index, tx, anchor + 1,
                    std::max(a.length, anchor + 1), lv + 4, -1, 0});
    msgs.push_back({ShiftMessage::shift_index, tv, 1, std::max(lv, 1L), anchor + 2, -1, 0});
    msgs.push_back({ShiftMessage::add_index, tx, 0, 0, 0, x, anchor + 1});
    msgs.push_back({ShiftMessage::add_index, tx, 0, 0, 0, x, anchor + lv + 4});
    apply_messages(msgs);

    // fold the shifted child occurrences and edges into the surviving tour
    for (auto& [w, idxs] : b.occ) {
        auto& dst = a.occ[w];
        dst.insert(dst.end(), idxs.begin(), idxs.end());
        std::sort(dst.begin(), dst.end());
        tour_of_[w] = tx;
    }
    a.occ[v].push_back(anchor + 2);
    a.occ[v].push_back(anchor + lv + 3);
    std::sort(a.occ[v].begin(), a.occ[v].end());
    for (auto& e : b.edges) a.edges.insert(e);
    a.edges.insert(canon(x, v));
    a.length += lv + 4;
    tours_.erase(tv);
}

std::pair<int, int> EulerForest::split(int u, int v) {
    int tid = tour_of(u);
    if (tour_of(v) != tid || !has_edge(u, v))
        throw TourError("split requires a tree edge");
    Tour& t = tour_mut(tid);

    long fu = first_index(u), lu = last_index(u);
    long fv = first_index(v), lv = last_index(v);
    int anc = u, desc = v;
    long fd = fv, ld = lv;
    if (!(fu < fv && lu > lv)) {
        anc = v; desc = u;
        fd = fu; ld = lu;
    }

    std::vector<ShiftMessage> msgs;
    msgs.push_back({ShiftMessage::remove_index, tid, 0, 0, 0, desc, fd});
    msgs.push_back({ShiftMessage::remove_index, tid, 0, 0, 0, desc, ld});
    msgs.push_back({ShiftMessage::remove_index, tid, 0, 0, 0, anc, fd - 1});
    msgs.push_back({ShiftMessage::remove_index, tid, 0, 0, 0, anc, ld + 1});
    // descendant block moves to a fresh tour; indices i in (fd, ld) become i - fd
    msgs.push_back({ShiftMessage::shift_index, tid, fd + 1, ld - 1, -fd, -1, 0});
    // ancestor side closes the gap of the removed block of length L_desc + 4
    msgs.push_back({ShiftMessage::shift_index, tid, ld + 2, t.length, -(ld - fd + 3), -1, 0});
    apply_messages(msgs);

    int fresh = fresh_id();
    Tour frag;
    frag.root = desc;
    frag.length = ld - fd - 1;
    if (frag.length < 0) frag.length = 0;

    // partition vertices and edges by connectivity relative to desc
    {
        t.edges.erase(canon(u, v));
        auto adj = adjacency(t.edges);
        std::vector<int> stack = {desc};
        std::set<int> side = {desc};
        while (!stack.empty()) {
            int w = stack.back();
            stack.pop_back();
            auto it = adj.find(w);
            if (it == adj.end()) continue;
            for (int nb : it->second)
                if (side.insert(nb).second) stack.push_back(nb);
        }
        for (int w : side) {
            frag.occ[w] = std::move(t.occ[w]);
            t.occ.erase(w);
            tour_of_[w] = fresh;
        }
        for (auto it = t.edges.begin(); it != t.edges.end();) {
            if (side.count(it->first)) {
                frag.edges.insert(*it);
                it = t.edges.erase(it);
            } else {
                ++it;
            }
        }
    }
    t.length -= frag.length + 4;
    tours_.emplace(fresh, std::move(frag));
    return {tour_of(u), tour_of(v)};
}

std::vector<std::pair<int, int>> EulerForest::identify_path(int u, int v) const {
    int tid = tour_of(u);
    if (tour_of(v) != tid) throw TourError("identify_path endpoints in different tours");
    if (u == v) throw TourError("identify_path endpoints must differ");
    const Tour& t = tour(tid);
    long fu = first_index(u), lu = last_index(u);
    long fv = first_index(v), lv = last_index(v);
    std::vector<std::pair<int, int>> path;
    for (auto& [a, b] : t.edges) {
        // child endpoint has the larger first index
        const auto& ia = t.occ.at(a);
        const auto& ib = t.occ.at(b);
        long fc, lc;
        int child;
        if (ia.front() < ib.front()) { child = b; fc = ib.front(); lc = ib.back(); }
        else { child = a; fc = ia.front(); lc = ia.back(); }
        (void)child;
        bool u_in = (fc <= fu && lu <= lc);
        bool v_in = (fc <= fv && lv <= lc);
        if (u_in != v_in) path.emplace_back(a, b);
    }
    return path;
}

void EulerForest::batch_join(const std::vector<std::pair<int, int>>& inter_edges) {
    // group by the tours being connected; reject cycles over the tours
    std::map<int, std::vector<std::pair<int, int>>> by_tour;  // tour -> incident edges
    std::map<int, int> parent;  // union-find over tour ids, smallest id wins
    std::function<int(int)> find = [&](int x) {
        while (parent.count(x) && parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& [u, v] : inter_edges) {
        int tu = tour_of(u), tv = tour_of(v);
        if (!parent.count(tu)) parent[tu] = tu;
        if (!parent.count(tv)) parent[tv] = tv;
        int ru = find(tu), rv = find(tv);
        if (ru == rv) throw TourError("batch_join edges contain a cycle over the tours");
        parent[std::max(ru, rv)] = std::min(ru, rv);
        by_tour[tu].emplace_back(u, v);
        by_tour[tv].emplace_back(u, v);
    }

    // auxiliary-tree DFS per group, rooted at the smallest tour id; children
    // ordered by ascending first index of the attachment vertex
    std::set<int> roots;
    for (auto& [tid, e] : by_tour) {
        int r = find(tid);
        roots.insert(r);
    }
    for (int root_tid : roots) {
        std::set<int> visited = {root_tid};
        std::vector<int> frontier = {root_tid};
        while (!frontier.empty()) {
            int tid = frontier.back();
            frontier.pop_back();
            // edges leaving the original tour `tid` to unvisited tours; the
            // attachment vertex may already live in the merged tour
            auto it = by_tour.find(tid);
            if (it == by_tour.end()) continue;
            std::vector<std::tuple<long, int, int, int>> children;  // (f(x), x, y, child tour)
            for (auto& [u, v] : it->second) {
                int x = u, y = v;
                int t_y = tour_of(y);
                if (visited.count(t_y) || t_y == tour_of(x)) {
                    std::swap(x, y);
                    t_y = tour_of(y);
                }
                if (visited.count(t_y)) continue;
                children.emplace_back(first_index(x), x, y, t_y);
            }
            std::sort(children.begin(), children.end());
            for (auto& [fx, x, y, t_y] : children) {
                if (visited.count(tour_of(y))) continue;
                visited.insert(tour_of(y));
                frontier.push_back(tour_of(y));
                attach(x, y);
            }
        }
    }
}

std::vector<int> EulerForest::batch_split(
    const std::vector<std::pair<int, int>>& tree_edges) {
    std::vector<std::pair<int, int>> sorted(tree_edges);
    for (auto& e : sorted) e = canon(e.first, e.second);
    std::sort(sorted.begin(), sorted.end());
    std::set<int> fragments;
    for (auto& [u, v] : sorted) {
        auto [tu, tv] = split(u, v);
        fragments.insert(tu);
        fragments.insert(tv);
    }
    // splits may have renamed earlier fragments; resolve via current ids
    std::set<int> out;
    for (int tid : fragments)
        if (tours_.count(tid)) out.insert(tid);
    std::set<int> expanded;
    for (auto& [u, v] : sorted) {
        expanded.insert(tour_of(u));
        expanded.insert(tour_of(v));
    }
    for (int tid : expanded) out.insert(tid);
    return {out.begin(), out.end()};
}

std::vector<int> EulerForest::tour_vertices(int tid) const {
    const Tour& t = tour(tid);
    std::vector<int> vs;
    vs.reserve(t.occ.size());
    for (auto& [v, idxs] : t.occ) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    return vs;
}

std::vector<int> EulerForest::tour_ids() const {
    std::vector<int> ids;
    ids.reserve(tours_.size());
    for (auto& [tid, t] : tours_) ids.push_back(tid);
    return ids;
}

namespace {

void dump_one(std::ostringstream& out, int tid, int root, long length,
              const std::unordered_map<int, std::vector<long>>& occ) {
    out << "tour " << tid << " root " << root << " L " << length << "\n";
    std::vector<std::pair<long, int>> lines;
    for (auto& [v, idxs] : occ)
        for (long i : idxs) lines.emplace_back(i, v);
    std::sort(lines.begin(), lines.end());
    for (auto& [i, v] : lines) out << "occ " << v << " " << i << "\n";
}

} // namespace

std::string EulerForest::dump_state() const {
    std::ostringstream out;
    for (auto& [tid, t] : tours_) dump_one(out, tid, t.root, t.length, t.occ);
    return out.str();
}

std::string EulerForest::dump_rebuilt() const {
    std::ostringstream out;
    for (auto& [tid, t] : tours_) {
        long length = 0;
        auto occ = canonical_occurrences(t.edges, t.root, &length);
        dump_one(out, tid, t.root, length, occ);
    }
    return out.str();
}

uint64_t EulerForest::word_cost() const {
    uint64_t words = 0;
    for (auto& [tid, t] : tours_) {
        words += 3;  // id, root, length
        words += 2ULL * t.edges.size();
        for (auto& [v, idxs] : t.occ) words += idxs.size();
    }
    return words;
}

} // namespace dgs
