#include "apcc/stragsim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <thread>

#include "apcc/errors.hpp"

namespace apcc {

namespace {

void check_delay_model(const DelayModel& m) {
    if (m.mu0 <= 0.0 || m.a0 <= 0.0) throw InvalidArgument("mu0 and a0 must be positive");
    if (m.divisions < 1) throw InvalidArgument("divisions must be >= 1");
}

double draw_delay(double a, double mu, Rng& rng) {
    // Inverse-CDF of the shifted exponential; 1 - U keeps the draw finite.
    return a - std::log1p(-uniform01(rng)) / mu;
}

/// k-th smallest (1-based) of a scratch copy.
double kth_smallest(std::vector<double>& scratch, int k) {
    auto nth = scratch.begin() + (k - 1);
    std::nth_element(scratch.begin(), nth, scratch.end());
    return *nth;
}

}  // namespace

double sample_subtask_delay(const DelayModel& model, Rng& rng) {
    check_delay_model(model);
    return draw_delay(model.a(), model.mu(), rng);
}

std::vector<int> apcc_thresholds(const StrategyConfig& cfg) {
    const int r = cfg.plan.r;
    if (r < 1) throw InvalidArgument("apcc config needs a partition plan");
    std::vector<int> thresholds(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        if (!cfg.thresholds.empty()) {
            if (static_cast<int>(cfg.thresholds.size()) != r) {
                throw InvalidArgument("threshold override length must equal r");
            }
            thresholds[i] = cfg.thresholds[i];
        } else {
            thresholds[i] = cfg.degree * (cfg.plan.setSizes[i] + cfg.collusion - 1) + 1;
        }
        if (thresholds[i] < 1 || thresholds[i] > cfg.workers) {
            throw InfeasibleThreshold("set " + std::to_string(i) + " threshold " +
                                      std::to_string(thresholds[i]) + " outside [1, N]");
        }
    }
    return thresholds;
}

namespace {

ApccTrialResult apcc_trial_nocancel(const StrategyConfig& cfg, const DelayModel& model,
                                    const std::vector<int>& thresholds, Rng& rng) {
    const int n = cfg.workers;
    const int r = cfg.plan.r;
    ApccTrialResult out;
    out.perSetCompletion.resize(static_cast<std::size_t>(r));

    if (model.samplingMode == SamplingMode::Persistent) {
        // Completion of set i on worker w is (i+1)*T_w, so every set's order
        // statistic comes from the same sorted draws.
        std::vector<double> draws(static_cast<std::size_t>(n));
        for (double& d : draws) d = draw_delay(model.a(), model.mu(), rng);
        std::sort(draws.begin(), draws.end());
        for (int i = 0; i < r; ++i) {
            out.perSetCompletion[i] = (i + 1.0) * draws[static_cast<std::size_t>(thresholds[i] - 1)];
        }
    } else {
        // completion[w][i] = prefix sums of fresh draws
        std::vector<std::vector<double>> completion(static_cast<std::size_t>(n));
        for (int w = 0; w < n; ++w) {
            completion[w].resize(static_cast<std::size_t>(r));
            double acc = 0.0;
            for (int i = 0; i < r; ++i) {
                acc += draw_delay(model.a(), model.mu(), rng);
                completion[w][i] = acc;
            }
        }
        std::vector<double> column(static_cast<std::size_t>(n));
        for (int i = 0; i < r; ++i) {
            for (int w = 0; w < n; ++w) column[w] = completion[w][i];
            out.perSetCompletion[i] = kth_smallest(column, thresholds[i]);
        }
    }
    out.entireDelay =
        *std::max_element(out.perSetCompletion.begin(), out.perSetCompletion.end());
    return out;
}

ApccTrialResult apcc_trial_cancel(const StrategyConfig& cfg, const DelayModel& model,
                                  const std::vector<int>& thresholds, Rng& rng) {
    const int n = cfg.workers;
    const int r = cfg.plan.r;
    const bool persistent = model.samplingMode == SamplingMode::Persistent;

    std::vector<double> persistentDraw(static_cast<std::size_t>(n), 0.0);
    if (persistent) {
        for (double& d : persistentDraw) d = draw_delay(model.a(), model.mu(), rng);
    }

    struct Event {
        double time;
        int set;
        int worker;
        std::uint32_t epoch;
    };
    // Min-heap ordered by (time, set, worker); ties have probability zero but
    // the order must still be reproducible.
    auto later = [](const Event& x, const Event& y) {
        if (x.time != y.time) return x.time > y.time;
        if (x.set != y.set) return x.set > y.set;
        return x.worker > y.worker;
    };
    std::priority_queue<Event, std::vector<Event>, decltype(later)> queue(later);

    std::vector<int> currentSet(static_cast<std::size_t>(n), 0);
    std::vector<std::uint32_t> epoch(static_cast<std::size_t>(n), 0);
    std::vector<int> received(static_cast<std::size_t>(r), 0);
    std::vector<bool> done(static_cast<std::size_t>(r), false);
    std::vector<double> completionTime(static_cast<std::size_t>(r), 0.0);
    int doneCount = 0;

    auto start_next = [&](int worker, int fromSet, double now) {
        int next = fromSet + 1;
        while (next < r && done[static_cast<std::size_t>(next)]) ++next;
        currentSet[worker] = next;
        if (next >= r) return;  // worker is finished
        const double dur =
            persistent ? persistentDraw[static_cast<std::size_t>(worker)]
                       : draw_delay(model.a(), model.mu(), rng);
        queue.push(Event{now + dur, next, worker, epoch[static_cast<std::size_t>(worker)]});
    };

    for (int w = 0; w < n; ++w) {
        start_next(w, -1, 0.0);
    }

    while (doneCount < r && !queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        if (ev.epoch != epoch[static_cast<std::size_t>(ev.worker)]) continue;  // cancelled
        const int s = ev.set;
        ++received[static_cast<std::size_t>(s)];
        if (received[static_cast<std::size_t>(s)] == thresholds[s]) {
            done[static_cast<std::size_t>(s)] = true;
            completionTime[static_cast<std::size_t>(s)] = ev.time;
            ++doneCount;
            // Everyone still working on s abandons it right now.
            for (int w = 0; w < n; ++w) {
                if (w == ev.worker || currentSet[w] != s) continue;
                ++epoch[static_cast<std::size_t>(w)];
                start_next(w, s, ev.time);
            }
        }
        ++epoch[static_cast<std::size_t>(ev.worker)];
        start_next(ev.worker, s, ev.time);
    }

    if (doneCount < r) throw NumericError("simulation ended with incomplete sets");

    ApccTrialResult out;
    out.perSetCompletion = std::move(completionTime);
    out.entireDelay =
        *std::max_element(out.perSetCompletion.begin(), out.perSetCompletion.end());
    return out;
}

}  // namespace

ApccTrialResult run_apcc_trial(const StrategyConfig& cfg, const DelayModel& model, Rng& rng) {
    if (cfg.kind != StrategyKind::Apcc) throw InvalidArgument("config kind must be apcc");
    check_delay_model(model);
    if (cfg.workers < 1) throw InvalidArgument("N must be >= 1");
    const std::vector<int> thresholds = apcc_thresholds(cfg);
    return cfg.cancellation ? apcc_trial_cancel(cfg, model, thresholds, rng)
                            : apcc_trial_nocancel(cfg, model, thresholds, rng);
}

double run_baseline_trial(const StrategyConfig& cfg, const DelayModel& model, Rng& rng) {
    check_delay_model(model);
    const int n = cfg.workers;
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (cfg.divisions < 1) throw InvalidArgument("baseline config needs divisions");

    switch (cfg.kind) {
        case StrategyKind::Lcc:
        case StrategyKind::Bacc: {
            const int h = cfg.kind == StrategyKind::Lcc
                              ? cfg.degree * (cfg.divisions + cfg.collusion - 1) + 1
                              : cfg.baccThreshold;
            if (h < 1 || h > n) {
                throw InfeasibleThreshold("threshold " + std::to_string(h) +
                                          " outside [1, N]");
            }
            std::vector<double> draws(static_cast<std::size_t>(n));
            for (double& d : draws) d = draw_delay(model.a(), model.mu(), rng);
            return kth_smallest(draws, h);
        }
        case StrategyKind::LccMmc: {
            if (cfg.collusion != 0) {
                throw InvalidArgument("LCC-MMC cannot preserve privacy (needs L = 0)");
            }
            const int rounds = cfg.rounds;
            if (rounds < 1) throw InvalidArgument("lcc-mmc needs rounds >= 1");
            const int h = cfg.degree * (cfg.divisions - 1) + 1;
            if (h < 1 || h > n * rounds) {
                throw InfeasibleThreshold("threshold " + std::to_string(h) + " outside [1, N*r]");
            }
            std::vector<double> arrivals;
            arrivals.reserve(static_cast<std::size_t>(n) * rounds);
            for (int w = 0; w < n; ++w) {
                if (model.samplingMode == SamplingMode::Persistent) {
                    const double t = draw_delay(model.a(), model.mu(), rng);
                    for (int m = 1; m <= rounds; ++m) arrivals.push_back(m * t);
                } else {
                    double acc = 0.0;
                    for (int m = 0; m < rounds; ++m) {
                        acc += draw_delay(model.a(), model.mu(), rng);
                        arrivals.push_back(acc);
                    }
                }
            }
            return kth_smallest(arrivals, h);
        }
        case StrategyKind::Apcc:
            throw InvalidArgument("run_baseline_trial does not handle apcc configs");
    }
    throw InvalidArgument("unknown strategy kind");
}

SimOutcome monte_carlo(const StrategyConfig& cfg, const DelayModel& model, int trials,
                       std::uint64_t masterSeed, int threads) {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    check_delay_model(model);

    const bool isApcc = cfg.kind == StrategyKind::Apcc;
    SimOutcome out;
    out.trialDelays.resize(static_cast<std::size_t>(trials));
    if (isApcc) out.perSetCompletion.resize(static_cast<std::size_t>(trials));

    auto run_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            Rng rng(derive_seed(masterSeed, static_cast<std::uint64_t>(t)));
            if (isApcc) {
                ApccTrialResult trial = run_apcc_trial(cfg, model, rng);
                out.trialDelays[static_cast<std::size_t>(t)] = trial.entireDelay;
                out.perSetCompletion[static_cast<std::size_t>(t)] =
                    std::move(trial.perSetCompletion);
            } else {
                out.trialDelays[static_cast<std::size_t>(t)] =
                    run_baseline_trial(cfg, model, rng);
            }
        }
    };

    int nThreads = threads > 0 ? threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    nThreads = std::clamp(nThreads, 1, std::max(1, trials / 256));
    if (nThreads <= 1) {
        run_range(0, trials);
    } else {
        // Trials are seeded individually, so any static split gives identical
        // results; aggregation below walks the array in trial order.
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nThreads));
        const int chunk = (trials + nThreads - 1) / nThreads;
        for (int i = 0; i < nThreads; ++i) {
            const int begin = i * chunk;
            const int end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }

    double sum = 0.0;
    for (double d : out.trialDelays) sum += d;
    out.mean = sum / trials;
    if (trials > 1) {
        double ss = 0.0;
        for (double d : out.trialDelays) ss += (d - out.mean) * (d - out.mean);
        out.stderrMean = std::sqrt(ss / (trials - 1.0)) / std::sqrt(static_cast<double>(trials));
    }
    return out;
}

double empirical_expected_results(const StrategyConfig& cfg, const DelayModel& model,
                                  double t, int setIndex, int trials, std::uint64_t seed) {
    if (cfg.kind != StrategyKind::Apcc) throw InvalidArgument("config kind must be apcc");
    if (cfg.cancellation) {
        throw InvalidArgument("expected-results estimate is defined without cancellation");
    }
    if (model.samplingMode != SamplingMode::Persistent) {
        throw InvalidArgument("expected-results estimate needs persistent sampling");
    }
    if (setIndex < 0 || setIndex >= cfg.plan.r) throw InvalidArgument("set index out of range");
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    check_delay_model(model);

    const double stage = setIndex + 1.0;
    long long total = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        for (int w = 0; w < cfg.workers; ++w) {
            if (stage * draw_delay(model.a(), model.mu(), rng) <= t) ++total;
        }
    }
    return static_cast<double>(total) / trials;
}

int parity_divisions(StrategyKind kind, int kdiv, int r) {
    if (kdiv < 1 || r < 1) throw InvalidArgument("kdiv and r must be >= 1");
    switch (kind) {
        case StrategyKind::Apcc:
        case StrategyKind::LccMmc:
            return kdiv * r;
        case StrategyKind::Lcc:
        case StrategyKind::Bacc:
            return kdiv;
    }
    throw InvalidArgument("unknown strategy kind");
}

}  // namespace apcc
