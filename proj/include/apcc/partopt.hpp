#pragma once

#include <span>
#include <vector>

#include "apcc/errors.hpp"

namespace apcc {

/// Per-set recovery threshold family. Coded is d(K_i+L-1)+1; Uncoded is
/// N - floor(N/K_i) + 1 and applies only when L = 0.
enum class ThresholdKind { Coded, Uncoded };

/// Data of the hierarchical partitioning problem at per-subtask granularity.
struct OptimModel {
    int workers = 0;    // N
    int totalK = 0;     // K
    int collusion = 0;  // L
    int degree = 1;     // d
    int sets = 1;       // r
    double mu = 1.0;    // per-subtask rate, 1/s
    double a = 0.0;     // per-subtask minimum time, s
    bool cancellation = false;
    ThresholdKind thresholdKind = ThresholdKind::Coded;

    /// Recovery threshold H_i for a set of kSet subtasks.
    int threshold(int kSet) const;

    /// Largest per-set size whose delay constraint stays satisfiable.
    int max_set_size() const;
};

struct PartitionSolution {
    std::vector<int> setSizes;
    double objective = 0.0;  // z = max per-set time
    std::vector<double> perSetTimes;
};

struct RelaxedSolution {
    double zStar = 0.0;
    std::vector<double> realSizes;
};

/// Smallest t_i meeting the expectation constraint with equality when
/// completed sets keep running (no cancellation).
double set_time_nocancel(int kSet, int setIndex, const OptimModel& model);

/// Expected completion delay of set i when finished sets are cancelled.
double set_time_cancel(int kSet, int setIndex, const OptimModel& model);

/// Dispatch on model.cancellation.
double set_time(int kSet, int setIndex, const OptimModel& model);

/// Continuous extension used by the relaxed solver and its verification.
double set_time_real(double kSet, int setIndex, const OptimModel& model);

/// Closed-form relaxed optimum: equalizes all per-set times at zStar found by
/// bisection on the implicit sum equation. Light loads can put the equalized
/// point outside the positive orthant; the affected tail sizes are returned
/// as computed (possibly <= 0) and zStar is then a lower bound rather than an
/// attained optimum. round_and_repair clamps such sizes.
RelaxedSolution solve_relaxed(const OptimModel& model);

/// Maximum value descent: repeatedly move one subtask out of the bottleneck
/// set while that strictly lowers the objective. If trace is non-null the
/// objective after each accepted move is appended to it.
PartitionSolution mvd(const OptimModel& model, std::span<const int> initial,
                      std::vector<double>* trace = nullptr);

/// Exhaustive search over all feasible compositions of K into r positive parts.
PartitionSolution brute_force(const OptimModel& model);

/// Largest-remainder rounding of relaxed sizes to a valid integer partition,
/// clamping to per-set caps and redistributing the excess.
std::vector<int> round_and_repair(std::span<const double> realSizes, int totalK,
                                  const OptimModel& model);

/// solve_relaxed -> round_and_repair -> mvd. For uncoded thresholds, where no
/// closed-form relaxation exists, MVD starts from a balanced partition.
PartitionSolution optimize_partition(const OptimModel& model);

}  // namespace apcc
