#pragma once

#include <span>
#include <vector>

#include "apcc/matrix.hpp"

namespace apcc {

enum class NodeKind { ChebyshevFirst, ChebyshevSecond, Arbitrary };

/// Distinct interpolation nodes in [-1, 1], strictly decreasing for the
/// Chebyshev families.
struct NodeSet {
    std::vector<double> nodes;
    NodeKind kind = NodeKind::Arbitrary;

    std::size_t size() const { return nodes.size(); }
    double operator[](std::size_t i) const { return nodes[i]; }
};

/// Barycentric weights associated with a NodeSet of the same length.
struct BaryWeights {
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    double operator[](std::size_t i) const { return weights[i]; }
};

/// Nodes two of which are closer than this are rejected as degenerate.
inline constexpr double kNodeGapTolerance = 1e-12;

/// Evaluation points within this distance of a node short-circuit to the
/// node's value.
inline constexpr double kPoleTolerance = 1e-13;

/// cos((2j+1)pi/(2M)) for the first kind, cos(j*pi/(M-1)) for the second,
/// j = 0..M-1; strictly decreasing.
NodeSet chebyshev_nodes(int count, NodeKind kind);

/// Wrap caller-supplied nodes, checking pairwise distinctness.
NodeSet make_node_set(std::vector<double> nodes);

/// w_j = 1 / prod_{k != j} (x_j - x_k).
BaryWeights polynomial_weights(const NodeSet& nodes);

/// w_j = (-1)^j, the Berrut rational weights.
BaryWeights berrut_weights(std::size_t count);

/// Normalized barycentric basis at x: b_j(x) = (w_j/(x-x_j)) / sum_k w_k/(x-x_k).
/// Within kPoleTolerance of node j the basis collapses to the j-th unit vector.
std::vector<double> basis_coefficients(const NodeSet& nodes, const BaryWeights& weights,
                                       double x);

/// sum_j b_j(x) * values[j]; exact node reproduction via the pole short-circuit.
MatrixBlock bary_eval(const NodeSet& nodes, const BaryWeights& weights,
                      std::span<const MatrixBlock> values, double x);

/// Scalar convenience overload.
double bary_eval(const NodeSet& nodes, const BaryWeights& weights,
                 std::span<const double> values, double x);

}  // namespace apcc
