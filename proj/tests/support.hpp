// Shared test oracles, independent of the library code paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "apcc/matrix.hpp"
#include "apcc/partopt.hpp"
#include "apcc/random.hpp"

namespace testsupport {

inline apcc::MatrixBlock random_block(int rows, int cols, apcc::Rng& rng, double scale = 1.0) {
    apcc::MatrixBlock b(rows, cols);
    for (double& v : b.data) v = scale * apcc::uniform_sym(rng);
    return b;
}

/// Entrywise polynomial sum_m coeffs[m] * x^m evaluated by Horner.
inline apcc::MatrixBlock entrywise_poly(const apcc::MatrixBlock& x,
                                        std::span<const double> coeffs) {
    apcc::MatrixBlock out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        double acc = 0.0;
        for (std::size_t m = coeffs.size(); m-- > 0;) acc = acc * x.data[i] + coeffs[m];
        out.data[i] = acc;
    }
    return out;
}

/// Random degree-d workload: entrywise polynomial or a matrix-product form.
inline std::function<apcc::MatrixBlock(const apcc::MatrixBlock&)>
random_workload(int degree, apcc::Rng& rng) {
    const bool useProducts = degree <= 3 && (rng() % 2 == 0);
    if (useProducts) {
        switch (degree) {
            case 1:
                return [s = apcc::uniform_sym(rng) + 2.0](const apcc::MatrixBlock& d) {
                    return s * d;
                };
            case 2:
                return [](const apcc::MatrixBlock& d) {
                    return apcc::matmul(d, apcc::transpose(d));
                };
            default:
                return [](const apcc::MatrixBlock& d) {
                    return apcc::matmul(apcc::matmul(d, apcc::transpose(d)), d);
                };
        }
    }
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
    for (double& c : coeffs) c = apcc::uniform_sym(rng);
    coeffs.back() += coeffs.back() >= 0.0 ? 1.0 : -1.0;  // keep the top degree present
    return [coeffs](const apcc::MatrixBlock& d) {
        return entrywise_poly(d, coeffs);
    };
}

/// Berrut quotient evaluated directly from the definition; nodes must be
/// pairwise distinct.
inline double berrut_direct(std::span<const double> nodes, std::span<const double> values,
                            double x) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (x == nodes[j]) return values[j];
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double term = sign / (x - nodes[j]);
        num += term * values[j];
        den += term;
    }
    return num / den;
}

/// E[H-th smallest of N shifted exponentials] = a + (1/mu) sum_{k<H} 1/(N-k).
inline double order_statistic_mean(int n, int h, double a, double mu) {
    double s = 0.0;
    for (int k = 0; k < h; ++k) s += 1.0 / (n - k);
    return a + s / mu;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline double determinant(apcc::MatrixBlock m) {
    const int n = m.rows;
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        for (int r = c + 1; r < n; ++r) {
            if (std::abs(m.at(r, c)) > std::abs(m.at(pivot, c))) pivot = r;
        }
        if (m.at(pivot, c) == 0.0) return 0.0;
        if (pivot != c) {
            for (int j = 0; j < n; ++j) std::swap(m.at(pivot, j), m.at(c, j));
            det = -det;
        }
        det *= m.at(c, c);
        for (int r = c + 1; r < n; ++r) {
            const double f = m.at(r, c) / m.at(c, c);
            for (int j = c; j < n; ++j) m.at(r, j) -= f * m.at(c, j);
        }
    }
    return det;
}

/// Determinant after scaling every row to unit Euclidean norm.
inline double row_normalized_determinant(apcc::MatrixBlock m) {
    for (int r = 0; r < m.rows; ++r) {
        double norm = 0.0;
        for (int c = 0; c < m.cols; ++c) norm += m.at(r, c) * m.at(r, c);
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (int c = 0; c < m.cols; ++c) m.at(r, c) /= norm;
    }
    return determinant(std::move(m));
}

struct KktReport {
    double maxConstraintResidual = 0.0;  // tightness of the active delay constraints
    double sumResidual = 0.0;            // |sum K_i - K|
    double multiplierViolation = 0.0;    // negative dual variables, if any
};

/// Residuals of the stationarity/complementary-slackness system for the
/// relaxed optimum (all constraints active, multipliers recovered from the
/// stationarity equations).
inline KktReport kkt_residuals(const apcc::OptimModel& model, double zStar,
                               std::span<const double> realSizes) {
    KktReport rep;
    const int r = model.sets;
    const double N = model.workers;
    const double d = model.degree;
    const double L = model.collusion;
    const double mu = model.mu;
    const double a = model.a;

    double sumK = 0.0;
    for (double k : realSizes) sumK += k;
    rep.sumResidual = std::abs(sumK - model.totalK);

    std::vector<double> alpha(static_cast<std::size_t>(r), 0.0);
    if (!model.cancellation) {
        // beta_i = const from dL/dK_i = 0; alpha_i from dL/dt_i = 0.
        double s1 = 0.0;
        for (int i = 0; i < r; ++i) s1 += std::exp(-mu * (zStar / (i + 1.0) - a)) / (i + 1.0);
        const double beta = 1.0 / (N * mu * s1);
        rep.multiplierViolation = std::max(rep.multiplierViolation, -beta);
        for (int i = 0; i < r; ++i) {
            alpha[i] = beta * N * mu / (i + 1.0) * std::exp(-mu * (zStar / (i + 1.0) - a));
            const double c = d * (realSizes[i] + L - 1.0) + 1.0 -
                             N * (1.0 - std::exp(-mu * (zStar / (i + 1.0) - a)));
            rep.maxConstraintResidual = std::max(rep.maxConstraintResidual, std::abs(c));
        }
    } else {
        double s = 0.0;
        std::vector<double> denom(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) {
            denom[i] = N - d * (realSizes[i] + L - 1.0);
            s += mu * denom[i] * denom[i] / (d * (i + 1.0));
        }
        const double lambda = -1.0 / s;
        for (int i = 0; i < r; ++i) {
            alpha[i] = -lambda * mu * denom[i] * denom[i] / (d * (i + 1.0));
            const double c = (i + 1.0) / (mu * denom[i]) + a * (i + 1.0) - zStar;
            rep.maxConstraintResidual = std::max(rep.maxConstraintResidual, std::abs(c));
        }
    }
    double alphaSum = 0.0;
    for (double v : alpha) {
        rep.multiplierViolation = std::max(rep.multiplierViolation, -v);
        alphaSum += v;
    }
    rep.sumResidual = std::max(rep.sumResidual, std::abs(alphaSum - 1.0));
    return rep;
}

/// Grid of partitioning models used by the optimality and residual suites.
inline std::vector<apcc::OptimModel> optimality_grid() {
    std::vector<apcc::OptimModel> grid;
    for (int n : {20, 40}) {
        for (int r : {2, 3, 4}) {
            for (int l : {1, 2}) {
                for (int d : {1, 2}) {
                    for (double mu : {1.0, 2.0}) {
                        for (bool cancel : {false, true}) {
                            for (int kFactor : {1, 2, 3, 4, 6, 8}) {
                                apcc::OptimModel m;
                                m.workers = n;
                                m.collusion = l;
                                m.degree = d;
                                m.sets = r;
                                m.mu = mu;
                                m.a = 0.05;
                                m.cancellation = cancel;
                                m.totalK = std::min(r * kFactor, 2 * r * 4);
                                if (m.totalK < r) continue;
                                const int cap = m.max_set_size();
                                if (cap < 1 || static_cast<long long>(cap) * r < m.totalK) {
                                    continue;
                                }
                                grid.push_back(m);
                            }
                        }
                    }
                }
            }
        }
    }
    return grid;
}

}  // namespace testsupport
