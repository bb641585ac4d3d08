#include "qwalk/quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace qwalk {

namespace {

struct NodeTable {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Newton iteration on the Legendre recurrence; standard cosine initial guess.
NodeTable compute_table(int order) {
    NodeTable table;
    table.nodes.resize(order);
    table.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int n = 2; n <= order; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            derivative = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        table.nodes[i] = x;
        table.weights[i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
    }
    return table;
}

const NodeTable& cached_table(int order) {
    if (order < 2 || order > 128) {
        throw std::invalid_argument("quadrature order out of range [2, 128]");
    }
    static std::map<int, NodeTable> cache;
    static std::mutex guard;
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, compute_table(order)).first;
    }
    return it->second;
}

} // namespace

const std::vector<double>& gl_nodes(int order) { return cached_table(order).nodes; }

const std::vector<double>& gl_weights(int order) { return cached_table(order).weights; }

} // namespace qwalk
