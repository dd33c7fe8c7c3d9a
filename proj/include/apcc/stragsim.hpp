#pragma once

#include <cstdint>
#include <vector>

#include "apcc/codec.hpp"
#include "apcc/random.hpp"

namespace apcc {

/// Persistent reuses one draw per worker for all of its subtasks (the
/// m-subtask delay is m*T); Iid draws each subtask independently.
enum class SamplingMode { Persistent, Iid };

/// Shifted-exponential computation delay, parameterized at entire-task scale
/// and rescaled per subtask by the division count.
struct DelayModel {
    double mu0 = 1.0;   // entire-task rate, 1/s
    double a0 = 0.0;    // entire-task minimum time, s
    int divisions = 1;  // task division count of the strategy being simulated
    SamplingMode samplingMode = SamplingMode::Persistent;

    double mu() const { return divisions * mu0; }
    double a() const { return a0 / divisions; }
};

enum class StrategyKind { Apcc, Lcc, LccMmc, Bacc };

struct StrategyConfig {
    StrategyKind kind = StrategyKind::Apcc;
    int workers = 0;    // N
    int collusion = 0;  // L
    int degree = 1;     // d

    PartitionPlan plan;           // apcc
    bool cancellation = false;    // apcc
    std::vector<int> thresholds;  // apcc: optional per-set override of d(K_i+L-1)+1

    int divisions = 0;  // baselines: K' (lcc, bacc) or K^LM (lcc-mmc)
    int rounds = 1;     // lcc-mmc: subtasks executed per worker
    int baccThreshold = 0;
};

struct SimOutcome {
    std::vector<double> trialDelays;
    std::vector<std::vector<double>> perSetCompletion;  // apcc only: trials x r
    double mean = 0.0;
    double stderrMean = 0.0;  // sample standard deviation / sqrt(trials)
};

struct ApccTrialResult {
    double entireDelay = 0.0;
    std::vector<double> perSetCompletion;
};

/// One draw of a + Exp(mu) at the model's per-subtask scale.
double sample_subtask_delay(const DelayModel& model, Rng& rng);

/// Simulates one APCC realization: every worker walks the sets in order, a
/// set completes on its H_i-th result, and cancellation (when enabled) makes
/// all workers still on a just-completed set jump forward at that instant.
ApccTrialResult run_apcc_trial(const StrategyConfig& cfg, const DelayModel& model, Rng& rng);

/// LCC / BACC: one subtask per worker, delay is the H-th order statistic.
/// LCC-MMC: rounds subtasks per worker, delay is the moment the
/// d(K^LM - 1)+1-th result arrives across all workers and positions.
double run_baseline_trial(const StrategyConfig& cfg, const DelayModel& model, Rng& rng);

/// Deterministic Monte Carlo: trial t is driven by a sub-seed derived from
/// (masterSeed, t), so outcomes do not depend on scheduling. threads = 0
/// picks a sensible default.
SimOutcome monte_carlo(const StrategyConfig& cfg, const DelayModel& model, int trials,
                       std::uint64_t masterSeed, int threads = 0);

/// Monte Carlo estimate of the expected number of set-setIndex results
/// received by time t (no cancellation, persistent sampling).
double empirical_expected_results(const StrategyConfig& cfg, const DelayModel& model,
                                  double t, int setIndex, int trials, std::uint64_t seed);

/// Division count that equalizes per-worker computation load across
/// strategies when APCC uses K = r * kdiv.
int parity_divisions(StrategyKind kind, int kdiv, int r);

/// Per-set recovery thresholds for an APCC config (override or coded form).
std::vector<int> apcc_thresholds(const StrategyConfig& cfg);

}  // namespace apcc
