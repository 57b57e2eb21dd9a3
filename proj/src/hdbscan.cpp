#include "wpf/hdbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wpf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance(const Matrix& x, std::size_t a, std::size_t b) {
    double s = 0.0;
    auto ra = x.row(a);
    auto rb = x.row(b);
    for (std::size_t k = 0; k < x.cols; ++k) {
        double t = ra[k] - rb[k];
        s += t * t;
    }
    return std::sqrt(s);
}

std::vector<double> core_distances(const Matrix& x, std::size_t min_samples) {
    const std::size_t n = x.rows;
    std::vector<double> core(n);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row[j] = i == j ? 0.0 : distance(x, i, j);
        auto kth = row.begin() + static_cast<std::ptrdiff_t>(min_samples - 1);
        std::nth_element(row.begin(), kth, row.end());
        core[i] = *kth;
    }
    return core;
}

struct Edge {
    std::size_t a;
    std::size_t b;
    double w;
};

// Prim's algorithm on the complete mutual-reachability graph.
std::vector<Edge> mutual_reachability_mst(const Matrix& x, const std::vector<double>& core) {
    const std::size_t n = x.rows;
    std::vector<Edge> edges;
    if (n < 2) return edges;
    std::vector<bool> in_tree(n, false);
    std::vector<double> best(n, kInf);
    std::vector<std::size_t> from(n, 0);
    std::size_t current = 0;
    in_tree[0] = true;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (in_tree[j]) continue;
            double mr = std::max({core[current], core[j], distance(x, current, j)});
            if (mr < best[j]) {
                best[j] = mr;
                from[j] = current;
            }
            if (next == n || best[j] < best[next]) next = j;
        }
        in_tree[next] = true;
        edges.push_back({std::min(from[next], next), std::max(from[next], next), best[next]});
        current = next;
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
        if (l.w != r.w) return l.w < r.w;
        if (l.a != r.a) return l.a < r.a;
        return l.b < r.b;
    });
    return edges;
}

struct Dendrogram {
    // internal node k (id n + k) merges left[k] and right[k] at dist[k]
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    std::vector<double> dist;
    std::vector<std::size_t> size;  // for all 2n-1 nodes
};

Dendrogram single_linkage(std::size_t n, const std::vector<Edge>& edges) {
    Dendrogram t;
    t.size.assign(2 * n - 1, 1);
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (std::size_t k = 0; k < edges.size(); ++k) {
        std::size_t ra = find(edges[k].a);
        std::size_t rb = find(edges[k].b);
        std::size_t node = n + k;
        t.left.push_back(ra);
        t.right.push_back(rb);
        t.dist.push_back(edges[k].w);
        t.size[node] = t.size[ra] + t.size[rb];
        parent[ra] = node;
        parent[rb] = node;
    }
    return t;
}

struct CondensedCluster {
    std::size_t parent = 0;  // self for the root
    double birth = 0.0;      // lambda at which it appears
    std::size_t size = 0;
    std::vector<std::size_t> children;
    double stability = 0.0;
};

struct Condensed {
    std::vector<CondensedCluster> clusters;    // 0 is the root
    std::vector<std::size_t> point_cluster;     // cluster each point falls out of
    std::vector<double> point_lambda;
};

double lambda_of(double d) { return d > 0.0 ? 1.0 / d : kInf; }

double gain(double lambda, double birth) { return lambda == birth ? 0.0 : lambda - birth; }

Condensed condense(std::size_t n, const Dendrogram& t, std::size_t min_cluster_size) {
    Condensed c;
    c.point_cluster.assign(n, 0);
    c.point_lambda.assign(n, 0.0);
    c.clusters.push_back({0, 0.0, n, {}, 0.0});

    auto fall_out = [&](std::size_t node, std::size_t cluster, double lambda) {
        std::vector<std::size_t> stack{node};
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            if (v < n) {
                c.point_cluster[v] = cluster;
                c.point_lambda[v] = lambda;
                c.clusters[cluster].stability += gain(lambda, c.clusters[cluster].birth);
            } else {
                stack.push_back(t.left[v - n]);
                stack.push_back(t.right[v - n]);
            }
        }
    };

    // (dendrogram node, condensed cluster it belongs to)
    std::vector<std::pair<std::size_t, std::size_t>> work{{2 * n - 2, 0}};
    while (!work.empty()) {
        auto [node, cluster] = work.back();
        work.pop_back();
        if (node < n) {
            // a single point reached without splitting off; only possible
            // when min_cluster_size is 1, which is rejected up front
            fall_out(node, cluster, kInf);
            continue;
        }
        std::size_t k = node - n;
        const double d = t.dist[k];
        double lambda = lambda_of(d);
        // Merges at exactly the same distance form one multi-way split, so
        // the result does not depend on how ties were ordered.
        std::vector<std::size_t> parts;
        std::vector<std::size_t> open{t.left[k], t.right[k]};
        while (!open.empty()) {
            std::size_t v = open.back();
            open.pop_back();
            if (v >= n && t.dist[v - n] == d) {
                open.push_back(t.left[v - n]);
                open.push_back(t.right[v - n]);
            } else {
                parts.push_back(v);
            }
        }
        std::sort(parts.begin(), parts.end());
        std::vector<std::size_t> big;
        for (std::size_t v : parts) {
            if (t.size[v] >= min_cluster_size) big.push_back(v);
        }
        for (std::size_t v : parts) {
            if (t.size[v] < min_cluster_size) fall_out(v, cluster, lambda);
        }
        if (big.size() == 1) {
            work.push_back({big.front(), cluster});
        } else {
            for (std::size_t child : big) {
                std::size_t id = c.clusters.size();
                c.clusters.push_back({cluster, lambda, t.size[child], {}, 0.0});
                c.clusters[cluster].children.push_back(id);
                c.clusters[cluster].stability += gain(lambda, c.clusters[cluster].birth) *
                                                 static_cast<double>(t.size[child]);
                work.push_back({child, id});
            }
        }
    }
    return c;
}

}  // namespace

HdbscanResult hdbscan(const Matrix& data, const HdbscanParams& params) {
    if (params.min_cluster_size < 2) throw std::invalid_argument("min_cluster_size must be at least 2");
    const std::size_t n = data.rows;
    HdbscanResult result;
    result.labels.assign(n, kOutlier);
    if (n < params.min_cluster_size || n < 2) return result;

    std::size_t min_samples = params.min_samples ? params.min_samples : params.min_cluster_size;
    min_samples = std::min(min_samples, n);
    auto core = core_distances(data, min_samples);
    auto tree = single_linkage(n, mutual_reachability_mst(data, core));
    auto condensed = condense(n, tree, params.min_cluster_size);
    auto& clusters = condensed.clusters;

    // Children always have larger ids than their parent.
    std::vector<bool> selected(clusters.size(), false);
    std::vector<double> subtree(clusters.size(), 0.0);
    for (std::size_t id = clusters.size(); id-- > 0;) {
        const auto& cl = clusters[id];
        if (cl.children.empty()) {
            selected[id] = true;
            subtree[id] = cl.stability;
            continue;
        }
        double child_sum = 0.0;
        for (std::size_t ch : cl.children) child_sum += subtree[ch];
        if (id == 0 || child_sum > cl.stability) {
            subtree[id] = child_sum;
            continue;
        }
        selected[id] = true;
        subtree[id] = cl.stability;
        std::vector<std::size_t> stack(cl.children.begin(), cl.children.end());
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            selected[v] = false;
            stack.insert(stack.end(), clusters[v].children.begin(), clusters[v].children.end());
        }
    }

    std::vector<std::size_t> owner(n, clusters.size());
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t c = condensed.point_cluster[p];
        while (true) {
            if (selected[c]) {
                owner[p] = c;
                break;
            }
            if (c == 0) break;
            c = clusters[c].parent;
        }
    }

    std::vector<int> label_of(clusters.size(), kOutlier);
    for (std::size_t p = 0; p < n; ++p) {
        if (owner[p] == clusters.size()) continue;
        int& l = label_of[owner[p]];
        if (l == kOutlier) {
            l = static_cast<int>(result.cluster_count++);
            result.stabilities.push_back(clusters[owner[p]].stability);
        }
        result.labels[p] = l;
    }
    return result;
}

}  // namespace wpf
