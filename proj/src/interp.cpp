#include "apcc/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace apcc {

namespace {

void check_distinct(std::span<const double> nodes) {
    // O(M^2) scan; node sets here are small.
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        for (std::size_t k = j + 1; k < nodes.size(); ++k) {
            if (std::abs(nodes[j] - nodes[k]) <= kNodeGapTolerance) {
                throw DegenerateNodes("nodes " + std::to_string(j) + " and " +
                                      std::to_string(k) + " are closer than 1e-12");
            }
        }
    }
}

}  // namespace

NodeSet chebyshev_nodes(int count, NodeKind kind) {
    if (count < 1) throw InvalidArgument("node count must be >= 1");
    NodeSet out;
    out.kind = kind;
    out.nodes.resize(static_cast<std::size_t>(count));
    const double pi = std::numbers::pi;
    switch (kind) {
        case NodeKind::ChebyshevFirst:
            for (int j = 0; j < count; ++j) {
                out.nodes[j] = std::cos((2.0 * j + 1.0) * pi / (2.0 * count));
            }
            break;
        case NodeKind::ChebyshevSecond:
            if (count < 2) {
                throw InvalidArgument("second-kind nodes need count >= 2");
            }
            for (int j = 0; j < count; ++j) {
                out.nodes[j] = std::cos(j * pi / (count - 1.0));
            }
            break;
        case NodeKind::Arbitrary:
            throw InvalidArgument("chebyshev_nodes needs a Chebyshev kind");
    }
    return out;
}

NodeSet make_node_set(std::vector<double> nodes) {
    check_distinct(nodes);
    return NodeSet{std::move(nodes), NodeKind::Arbitrary};
}

BaryWeights polynomial_weights(const NodeSet& nodes) {
    check_distinct(nodes.nodes);
    const std::size_t m = nodes.size();
    BaryWeights out;
    out.weights.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double prod = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            prod *= nodes[j] - nodes[k];
        }
        out.weights[j] = 1.0 / prod;
    }
    return out;
}

BaryWeights berrut_weights(std::size_t count) {
    BaryWeights out;
    out.weights.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        out.weights[j] = (j % 2 == 0) ? 1.0 : -1.0;
    }
    return out;
}

std::vector<double> basis_coefficients(const NodeSet& nodes, const BaryWeights& weights,
                                       double x) {
    if (nodes.size() != weights.size() || nodes.size() == 0) {
        throw InvalidArgument("nodes and weights must have equal nonzero length");
    }
    const std::size_t m = nodes.size();
    std::vector<double> coeffs(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (std::abs(x - nodes[j]) < kPoleTolerance) {
            coeffs[j] = 1.0;
            return coeffs;
        }
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        coeffs[j] = weights[j] / (x - nodes[j]);
        denom += coeffs[j];
    }
    for (double& c : coeffs) c /= denom;
    return coeffs;
}

MatrixBlock bary_eval(const NodeSet& nodes, const BaryWeights& weights,
                      std::span<const MatrixBlock> values, double x) {
    if (values.size() != nodes.size()) {
        throw InvalidArgument("values length must match node count");
    }
    for (const MatrixBlock& v : values) {
        if (!v.same_shape(values.front())) {
            throw InvalidArgument("all value blocks must share one shape");
        }
    }
    const std::vector<double> coeffs = basis_coefficients(nodes, weights, x);
    // Unit coefficient vector means x hit a node; return that value exactly.
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 1.0 && std::abs(x - nodes[j]) < kPoleTolerance) {
            return values[j];
        }
    }
    MatrixBlock acc = zeros_like(values.front());
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        acc.axpy(coeffs[j], values[j]);
    }
    return acc;
}

double bary_eval(const NodeSet& nodes, const BaryWeights& weights,
                 std::span<const double> values, double x) {
    if (values.size() != nodes.size()) {
        throw InvalidArgument("values length must match node count");
    }
    const std::vector<double> coeffs = basis_coefficients(nodes, weights, x);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 1.0 && std::abs(x - nodes[j]) < kPoleTolerance) {
            return values[j];
        }
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * values[j];
    return acc;
}

}  // namespace apcc
