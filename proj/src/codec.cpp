#include "apcc/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <json.hpp>

namespace apcc {

namespace {

void check_uniform_shape(std::span<const MatrixBlock> blocks) {
    for (const MatrixBlock& b : blocks) {
        if (!b.same_shape(blocks.front())) {
            throw InvalidArgument("blocks must share one shape");
        }
    }
}

}  // namespace

PartitionPlan make_plan(int totalK, std::span<const int> setSizes) {
    if (setSizes.empty()) throw InvalidArgument("setSizes must be non-empty");
    if (totalK < 1) throw InvalidArgument("totalK must be positive");
    int sum = 0;
    for (int k : setSizes) {
        if (k < 1) throw InvalidArgument("every set size must be >= 1");
        sum += k;
    }
    if (sum != totalK) {
        throw PartitionSumError("set sizes sum to " + std::to_string(sum) +
                                ", expected " + std::to_string(totalK));
    }
    PartitionPlan plan;
    plan.r = static_cast<int>(setSizes.size());
    plan.setSizes.assign(setSizes.begin(), setSizes.end());
    plan.totalK = totalK;
    return plan;
}

CodecContext make_context(int setIndex, int kSet, int collusion, int workers, int degree,
                          CodecMode mode, int approxThreshold) {
    if (kSet < 1) throw InvalidArgument("K_i must be >= 1");
    if (collusion < 0) throw InvalidArgument("L must be >= 0");
    if (workers < 1) throw InvalidArgument("N must be >= 1");
    if (degree < 1) throw InvalidArgument("d must be >= 1");
    if (mode == CodecMode::Uncoded && collusion != 0) {
        throw InvalidArgument("uncoded mode requires L = 0");
    }

    // A worker point beta_n = cos(n pi/(N-1)) that coincides with a data
    // point alpha_j = cos((2j+1) pi/(2M)) would receive that data block in
    // the clear, so padded contexts reject such (K_i, L, N) combinations.
    if (mode != CodecMode::Uncoded && collusion > 0 && workers >= 2) {
        const long long m = kSet + collusion;
        for (int j = 0; j < kSet; ++j) {
            const long long t = static_cast<long long>(workers - 1) * (2 * j + 1);
            if (t % (2 * m) == 0 && t / (2 * m) <= workers - 1) {
                throw InvalidArgument(
                    "worker point " + std::to_string(t / (2 * m)) +
                    " coincides with data point " + std::to_string(j) +
                    "; padding cannot mask that block (pick different K_i+L or N)");
            }
        }
    }

    CodecContext ctx;
    ctx.setIndex = setIndex;
    ctx.kSet = kSet;
    ctx.collusion = collusion;
    ctx.workers = workers;
    ctx.degree = degree;
    ctx.mode = mode;
    ctx.approxThreshold = approxThreshold > 0 ? approxThreshold : (workers + 1) / 2 + 1;
    ctx.alphaNodes = chebyshev_nodes(kSet + collusion, NodeKind::ChebyshevFirst);
    if (mode == CodecMode::Uncoded) {
        // Round-robin replication of the interpolation points.
        ctx.betaNodes.kind = NodeKind::Arbitrary;
        ctx.betaNodes.nodes.resize(static_cast<std::size_t>(workers));
        for (int n = 0; n < workers; ++n) {
            ctx.betaNodes.nodes[n] = ctx.alphaNodes[n % kSet];
        }
    } else {
        ctx.betaNodes = chebyshev_nodes(workers, NodeKind::ChebyshevSecond);
    }
    ctx.encodeWeights = polynomial_weights(ctx.alphaNodes);

    if (mode == CodecMode::Accurate) {
        const int threshold = degree * (kSet + collusion - 1) + 1;
        if (threshold > workers) {
            throw InfeasibleThreshold("recovery threshold " + std::to_string(threshold) +
                                      " exceeds N = " + std::to_string(workers));
        }
    }
    if (mode == CodecMode::Approximate && ctx.approxThreshold > workers) {
        throw InfeasibleThreshold("approximate threshold exceeds N");
    }
    return ctx;
}

int recovery_threshold(const CodecContext& ctx) {
    switch (ctx.mode) {
        case CodecMode::Accurate: {
            const int threshold = ctx.degree * (ctx.kSet + ctx.collusion - 1) + 1;
            if (threshold > ctx.workers) {
                throw InfeasibleThreshold("recovery threshold " + std::to_string(threshold) +
                                          " exceeds N = " + std::to_string(ctx.workers));
            }
            return threshold;
        }
        case CodecMode::Uncoded:
            return ctx.workers - ctx.workers / ctx.kSet + 1;
        case CodecMode::Approximate:
            return ctx.approxThreshold;
    }
    throw InvalidArgument("unknown codec mode");
}

std::vector<EncodedShare> encode_set(const CodecContext& ctx,
                                     std::span<const MatrixBlock> data, Rng& rng) {
    if (static_cast<int>(data.size()) != ctx.kSet) {
        throw InvalidArgument("expected " + std::to_string(ctx.kSet) + " data blocks, got " +
                              std::to_string(data.size()));
    }
    check_uniform_shape(data);
    for (const MatrixBlock& b : data) b.validate();

    std::vector<MatrixBlock> values(data.begin(), data.end());
    values.reserve(data.size() + ctx.collusion);
    for (int j = 0; j < ctx.collusion; ++j) {
        MatrixBlock pad(data.front().rows, data.front().cols);
        for (double& v : pad.data) v = uniform_sym(rng);
        values.push_back(std::move(pad));
    }

    std::vector<EncodedShare> shares;
    shares.reserve(static_cast<std::size_t>(ctx.workers));
    for (int n = 0; n < ctx.workers; ++n) {
        const double x = ctx.betaNodes[static_cast<std::size_t>(n)];
        shares.push_back(EncodedShare{ctx.setIndex, n, x,
                                      bary_eval(ctx.alphaNodes, ctx.encodeWeights, values, x)});
    }
    return shares;
}

namespace {

void check_result_batch(const CodecContext& ctx, std::span<const ReturnedResult> results,
                        bool requireDistinct) {
    if (results.empty()) throw InvalidArgument("no results supplied");
    for (const ReturnedResult& r : results) {
        if (!r.payload.same_shape(results.front().payload)) {
            throw InvalidArgument("result payloads must share one shape");
        }
        if (r.workerIndex < 0 || r.workerIndex >= ctx.workers) {
            throw InvalidArgument("result worker index out of range");
        }
    }
    if (requireDistinct) {
        for (std::size_t a = 0; a < results.size(); ++a) {
            for (std::size_t b = a + 1; b < results.size(); ++b) {
                if (std::abs(results[a].evalPoint - results[b].evalPoint) <= kNodeGapTolerance) {
                    throw InvalidArgument("duplicate evaluation points in decode batch");
                }
            }
        }
    }
}

std::vector<MatrixBlock> decode_uncoded(const CodecContext& ctx,
                                        std::span<const ReturnedResult> results) {
    const int threshold = recovery_threshold(ctx);
    if (static_cast<int>(results.size()) < threshold) {
        throw InsufficientResults("uncoded decode needs " + std::to_string(threshold) +
                                      " results, got " + std::to_string(results.size()),
                                  threshold - static_cast<int>(results.size()));
    }
    std::vector<MatrixBlock> out;
    out.reserve(static_cast<std::size_t>(ctx.kSet));
    int missing = 0;
    for (int j = 0; j < ctx.kSet; ++j) {
        const double alpha = ctx.alphaNodes[static_cast<std::size_t>(j)];
        const ReturnedResult* hit = nullptr;
        for (int n = 0; n < threshold; ++n) {
            if (std::abs(results[n].evalPoint - alpha) < kPoleTolerance) {
                hit = &results[n];
                break;
            }
        }
        if (hit == nullptr) {
            ++missing;
            continue;
        }
        out.push_back(hit->payload);
    }
    if (missing > 0) {
        throw InsufficientResults(
            std::to_string(missing) + " data blocks have no replica among the supplied results",
            missing);
    }
    return out;
}

}  // namespace

std::vector<MatrixBlock> decode_set(const CodecContext& ctx,
                                    std::span<const ReturnedResult> results, CodecMode mode) {
    if (mode == CodecMode::Uncoded) {
        throw InvalidArgument("decode mode must be Accurate or Approximate");
    }
    if (ctx.mode == CodecMode::Uncoded) {
        if (mode != CodecMode::Accurate) {
            throw InvalidArgument("uncoded contexts decode in Accurate mode");
        }
        check_result_batch(ctx, results, /*requireDistinct=*/false);
        return decode_uncoded(ctx, results);
    }
    check_result_batch(ctx, results, /*requireDistinct=*/true);

    NodeSet nodes;
    BaryWeights weights;
    std::vector<MatrixBlock> values;
    if (mode == CodecMode::Accurate) {
        // Case 1 needs enough points for the degree of f(g_i(x)) no matter
        // what threshold the context was configured with.
        const int threshold = ctx.degree * (ctx.kSet + ctx.collusion - 1) + 1;
        if (static_cast<int>(results.size()) < threshold) {
            throw InsufficientResults("accurate decode needs " + std::to_string(threshold) +
                                          " results, got " + std::to_string(results.size()),
                                      threshold - static_cast<int>(results.size()));
        }
        // First threshold-many results by arrival order; the surplus is ignored.
        nodes.kind = NodeKind::Arbitrary;
        for (int n = 0; n < threshold; ++n) {
            nodes.nodes.push_back(results[n].evalPoint);
            values.push_back(results[n].payload);
        }
        weights = polynomial_weights(nodes);
    } else {
        // Berrut weights alternate along the node ordering, so sort received
        // points into the canonical descending order first.
        std::vector<std::size_t> order(results.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return results[a].evalPoint > results[b].evalPoint;
        });
        nodes.kind = NodeKind::Arbitrary;
        for (std::size_t idx : order) {
            nodes.nodes.push_back(results[idx].evalPoint);
            values.push_back(results[idx].payload);
        }
        weights = berrut_weights(nodes.size());
    }

    std::vector<MatrixBlock> out;
    out.reserve(static_cast<std::size_t>(ctx.kSet));
    for (int j = 0; j < ctx.kSet; ++j) {
        out.push_back(bary_eval(nodes, weights, values, ctx.alphaNodes[static_cast<std::size_t>(j)]));
    }
    return out;
}

MatrixBlock padding_coefficient_matrix(const CodecContext& ctx,
                                       std::span<const int> workerSubset) {
    const int pads = ctx.collusion;
    if (pads < 1) throw InvalidArgument("context has no padding blocks (L = 0)");
    if (static_cast<int>(workerSubset.size()) != pads) {
        throw InvalidArgument("worker subset size must equal L");
    }
    for (std::size_t a = 0; a < workerSubset.size(); ++a) {
        if (workerSubset[a] < 0 || workerSubset[a] >= ctx.workers) {
            throw InvalidArgument("worker index out of range");
        }
        for (std::size_t b = a + 1; b < workerSubset.size(); ++b) {
            if (workerSubset[a] == workerSubset[b]) {
                throw InvalidArgument("duplicate worker indices");
            }
        }
    }
    MatrixBlock coeffs(pads, pads);
    for (int s = 0; s < pads; ++s) {
        const double x = ctx.betaNodes[static_cast<std::size_t>(workerSubset[s])];
        const std::vector<double> basis = basis_coefficients(ctx.alphaNodes, ctx.encodeWeights, x);
        for (int j = 0; j < pads; ++j) {
            coeffs.at(s, j) = basis[static_cast<std::size_t>(ctx.kSet + j)];
        }
    }
    return coeffs;
}

double encoding_rate(int totalK, int workers, int stragglers) {
    if (totalK < 1) throw InvalidArgument("K must be >= 1");
    if (stragglers < 0 || stragglers >= workers) {
        throw InvalidArgument("need 0 <= S < N");
    }
    return static_cast<double>(totalK) / (workers - stragglers);
}

CapacityResult capacity(int workers, int stragglers, int collusion, int degree) {
    if (stragglers < 0 || stragglers >= workers) throw InvalidArgument("need 0 <= S < N");
    if (degree < 1) throw InvalidArgument("d must be >= 1");
    if (collusion < 0) throw InvalidArgument("L must be >= 0");
    const double surviving = workers - stragglers;
    if (collusion > 0) {
        const double num = surviving - degree * (collusion - 1.0) - 1.0;
        if (num <= 0.0) return CapacityResult{0.0, false};
        return CapacityResult{num / (degree * surviving), true};
    }
    const double coded = (surviving + degree - 1.0) / (degree * surviving);
    const double uncoded = workers / (surviving * (stragglers + 1.0));
    return CapacityResult{std::max(coded, uncoded), true};
}

DivisionsResult max_divisions(int workers, int stragglers, int collusion, int degree) {
    if (stragglers < 0 || stragglers >= workers) throw InvalidArgument("need 0 <= S < N");
    if (degree < 1) throw InvalidArgument("d must be >= 1");
    if (collusion < 0) throw InvalidArgument("L must be >= 0");
    if (collusion > 0) {
        const int v = (workers - stragglers - 1) / degree - collusion + 1;
        if (v < 1) return DivisionsResult{0, false};
        return DivisionsResult{v, true};
    }
    const int coded = (workers - stragglers + degree - 1) / degree;
    const int uncoded = workers / (stragglers + 1);
    return DivisionsResult{std::max(coded, uncoded), true};
}

double approx_error_bound(int workers, int resultCount, double secondDerivNorm,
                          double firstDerivNorm) {
    if (resultCount <= 3) throw InvalidArgument("result count must exceed 3");
    if (resultCount > workers) throw InvalidArgument("result count cannot exceed N");
    if (workers < 2) throw InvalidArgument("need N >= 2");
    if (secondDerivNorm < 0.0 || firstDerivNorm < 0.0) {
        throw InvalidArgument("derivative norms must be >= 0");
    }
    const double pi = std::numbers::pi;
    const double missing = workers - resultCount + 1.0;
    const double gamma = missing * (workers - resultCount + 3.0) * pi * pi / 4.0;
    const double factor = 2.0 * (1.0 + gamma) * std::sin(missing * pi / (2.0 * (workers - 1.0)));
    if (resultCount % 2 == 0) return factor * secondDerivNorm;
    return factor * (secondDerivNorm + firstDerivNorm);
}

MultilinearFn multilinearize(BlockFn f, int degree) {
    if (degree < 1) throw InvalidArgument("degree must be >= 1");
    if (degree > 20) {
        throw TooLarge("multilinearize would need 2^" + std::to_string(degree) +
                       " evaluations");
    }
    return [f = std::move(f), degree](const std::vector<MatrixBlock>& args) -> MatrixBlock {
        if (static_cast<int>(args.size()) != degree) {
            throw InvalidArgument("expected " + std::to_string(degree) + " arguments");
        }
        check_uniform_shape(args);
        MatrixBlock acc = zeros_like(args.front());
        const unsigned total = 1u << degree;
        for (unsigned mask = 0; mask < total; ++mask) {
            MatrixBlock sum = zeros_like(args.front());
            for (int k = 0; k < degree; ++k) {
                if (mask & (1u << k)) sum += args[static_cast<std::size_t>(k)];
            }
            const double sign = (std::popcount(mask) % 2 == 0) ? 1.0 : -1.0;
            acc.axpy(sign, f(sum));
        }
        return acc;
    };
}

namespace {

nlohmann::json record_to_json(int set, int worker, double x, const MatrixBlock& payload) {
    return nlohmann::json{{"set", set},
                          {"worker", worker},
                          {"x", x},
                          {"rows", payload.rows},
                          {"cols", payload.cols},
                          {"data", payload.data}};
}

void record_from_json(const std::string& text, int& set, int& worker, double& x,
                      MatrixBlock& payload) {
    const nlohmann::json j = nlohmann::json::parse(text);
    set = j.at("set").get<int>();
    worker = j.at("worker").get<int>();
    x = j.at("x").get<double>();
    payload = MatrixBlock(j.at("rows").get<int>(), j.at("cols").get<int>(),
                          j.at("data").get<std::vector<double>>());
}

}  // namespace

std::string to_json(const EncodedShare& share) {
    return record_to_json(share.setIndex, share.workerIndex, share.evalPoint, share.payload)
        .dump();
}

std::string to_json(const ReturnedResult& result) {
    return record_to_json(result.setIndex, result.workerIndex, result.evalPoint, result.payload)
        .dump();
}

EncodedShare share_from_json(const std::string& text) {
    EncodedShare s;
    record_from_json(text, s.setIndex, s.workerIndex, s.evalPoint, s.payload);
    return s;
}

ReturnedResult result_from_json(const std::string& text) {
    ReturnedResult r;
    record_from_json(text, r.setIndex, r.workerIndex, r.evalPoint, r.payload);
    return r;
}

}  // namespace apcc
