#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "apcc/interp.hpp"
#include "apcc/matrix.hpp"
#include "apcc/random.hpp"

namespace apcc {

/// How a set's results are recovered. Accurate interpolates a degree-d
/// polynomial workload exactly; Approximate uses Berrut rational
/// interpolation for arbitrary workloads; Uncoded replicates raw blocks
/// (no privacy padding).
enum class CodecMode { Accurate, Approximate, Uncoded };

/// Hierarchical layout: K subtasks split into r ordered sets.
struct PartitionPlan {
    int r = 0;
    std::vector<int> setSizes;
    int totalK = 0;
};

/// Everything needed to encode and decode one set.
struct CodecContext {
    int setIndex = 0;
    int kSet = 0;       // K_i, data blocks in this set
    int collusion = 0;  // L, tolerated colluding workers
    int workers = 0;    // N
    int degree = 1;     // d, polynomial degree of the workload
    CodecMode mode = CodecMode::Accurate;
    int approxThreshold = 0;  // caller-chosen H_i for Approximate mode

    NodeSet alphaNodes;        // K_i + L first-kind points
    NodeSet betaNodes;         // N second-kind points (or alpha replicas, uncoded)
    BaryWeights encodeWeights; // polynomial weights over alphaNodes
};

struct EncodedShare {
    int setIndex = 0;
    int workerIndex = 0;
    double evalPoint = 0.0;
    MatrixBlock payload;
};

struct ReturnedResult {
    int setIndex = 0;
    int workerIndex = 0;
    double evalPoint = 0.0;
    MatrixBlock payload;
};

struct CapacityResult {
    double value = 0.0;
    bool feasible = true;
};

struct DivisionsResult {
    int value = 0;
    bool feasible = true;
};

/// Throws PartitionSumError if the sizes do not add up to totalK.
PartitionPlan make_plan(int totalK, std::span<const int> setSizes);

/// Builds nodes and weights for one set. approxThreshold <= 0 selects the
/// default ceil(N/2)+1 for Approximate mode.
CodecContext make_context(int setIndex, int kSet, int collusion, int workers, int degree,
                          CodecMode mode, int approxThreshold = 0);

/// Accurate: d(K_i+L-1)+1. Uncoded: N - floor(N/K_i) + 1. Approximate: the
/// caller-chosen threshold, passed through.
int recovery_threshold(const CodecContext& ctx);

/// Privacy-padded barycentric encoding of one set; returns one share per worker.
std::vector<EncodedShare> encode_set(const CodecContext& ctx,
                                     std::span<const MatrixBlock> data, Rng& rng);

/// Recovers the K_i per-block results from returned worker results.
std::vector<MatrixBlock> decode_set(const CodecContext& ctx,
                                    std::span<const ReturnedResult> results,
                                    CodecMode mode);

/// L x L matrix whose (s, j) entry is the coefficient multiplying pad block j
/// in the share sent to workerSubset[s]. Nonsingularity witnesses that the
/// pads can mask the data against that collusion set.
MatrixBlock padding_coefficient_matrix(const CodecContext& ctx,
                                       std::span<const int> workerSubset);

/// K / (N - S), the pre/post-encoding computation load ratio.
double encoding_rate(int totalK, int workers, int stragglers);

/// Supremum of the encoding rate over linear schemes tolerating S stragglers
/// and L colluders on a degree-d workload.
CapacityResult capacity(int workers, int stragglers, int collusion, int degree);

/// Largest task division count that keeps decoding feasible.
DivisionsResult max_divisions(int workers, int stragglers, int collusion, int degree);

/// Upper bound on the Berrut approximation error for an interpolated function
/// with the given derivative sup-norms, when resultCount of workers results
/// are available.
double approx_error_bound(int workers, int resultCount, double secondDerivNorm,
                          double firstDerivNorm);

using BlockFn = std::function<MatrixBlock(const MatrixBlock&)>;
using MultilinearFn = std::function<MatrixBlock(const std::vector<MatrixBlock>&)>;

/// Inclusion-exclusion construction of a d-variable multilinear function from
/// a degree-d polynomial workload: f'(D_1..D_d) = sum over subsets T of
/// (-1)^|T| f(sum_{k in T} D_k). Costs 2^d evaluations of f.
MultilinearFn multilinearize(BlockFn f, int degree);

/// JSON wire shape {set, worker, x, rows, cols, data:[...]}.
std::string to_json(const EncodedShare& share);
std::string to_json(const ReturnedResult& result);
EncodedShare share_from_json(const std::string& text);
ReturnedResult result_from_json(const std::string& text);

}  // namespace apcc
