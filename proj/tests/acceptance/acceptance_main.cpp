// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expensive Monte Carlo checks print the measured values so a red
// run is diagnosable from the log alone.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "apcc/codec.hpp"
#include "apcc/partopt.hpp"
#include "apcc/stragsim.hpp"
#include "../support.hpp"

using namespace apcc;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& text) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, text.c_str());
    if (!ok) ++failures;
}

void detail(const std::string& text) { std::printf("    - %s\n", text.c_str()); }

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// ---------------------------------------------------------------------------
// 1. Case 1 round-trip correctness on random configurations
// ---------------------------------------------------------------------------

void criterion1() {
    Timer timer;
    Rng rng(20240601);
    int cases = 0;
    int good = 0;
    double worst = 0.0;
    while (cases < 200) {
        const int kSet = 1 + static_cast<int>(rng() % 8);
        const int l = static_cast<int>(rng() % 4);
        const int d = 1 + static_cast<int>(rng() % 3);
        const int threshold = d * (kSet + l - 1) + 1;
        if (threshold > 40) continue;
        const int n = std::max(2, threshold + static_cast<int>(rng() % (41 - threshold)));
        const int rows = 1 + static_cast<int>(rng() % 8);
        const int cols = 1 + static_cast<int>(rng() % 8);

        CodecContext ctx;
        try {
            ctx = make_context(0, kSet, l, n, d, CodecMode::Accurate);
        } catch (const InvalidArgument&) {
            continue;  // worker/data node collision; draw another configuration
        }
        std::vector<MatrixBlock> data;
        for (int j = 0; j < kSet; ++j) data.push_back(testsupport::random_block(rows, cols, rng));
        const auto f = testsupport::random_workload(d, rng);
        const std::vector<EncodedShare> shares = encode_set(ctx, data, rng);

        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<ReturnedResult> results;
        for (int i = 0; i < threshold; ++i) {
            const EncodedShare& s = shares[static_cast<std::size_t>(order[i])];
            results.push_back(ReturnedResult{s.setIndex, s.workerIndex, s.evalPoint,
                                             f(s.payload)});
        }
        const std::vector<MatrixBlock> decoded = decode_set(ctx, results, CodecMode::Accurate);
        double err = 0.0;
        for (int j = 0; j < kSet; ++j) {
            err = std::max(err, relative_error(decoded[static_cast<std::size_t>(j)], f(data[j])));
        }
        worst = std::max(worst, err);
        if (err <= 1e-6) ++good;
        ++cases;
    }
    detail(fmt("200 cases, worst relative error %.3g, %.1f s", worst, timer.seconds()));
    report(1, good == 200 && timer.seconds() <= 60.0,
           fmt("round-trip decode exact to 1e-6 in %d/200 random cases", good));
}

// ---------------------------------------------------------------------------
// 2 & 3. MVD optimality and relaxed-solution residuals over the model grid
// ---------------------------------------------------------------------------

void criteria2and3() {
    Timer timer;
    const std::vector<OptimModel> grid = testsupport::optimality_grid();
    int optimal = 0;
    int interior = 0;
    double worstResidual = 0.0;
    double worstEqualization = 0.0;
    double worstKkt = 0.0;
    for (const OptimModel& m : grid) {
        const RelaxedSolution relaxed = solve_relaxed(m);

        // implicit-equation residual (absolute)
        double lhs = 0.0;
        double rhs = 0.0;
        if (!m.cancellation) {
            for (int i = 0; i < m.sets; ++i) {
                lhs += std::exp(-m.mu * (relaxed.zStar / (i + 1.0) - m.a));
            }
            rhs = m.sets - (m.degree * (m.totalK + m.sets * m.collusion - m.sets) + m.sets) /
                               static_cast<double>(m.workers);
        } else {
            for (int i = 0; i < m.sets; ++i) {
                lhs += (i + 1.0) / (relaxed.zStar - m.a * (i + 1.0));
            }
            rhs = m.mu * (m.sets * m.workers -
                          m.degree * (m.totalK + m.sets * m.collusion - m.sets));
        }
        worstResidual = std::max(worstResidual, std::abs(lhs - rhs));

        // equalization and KKT residuals apply where the equalized point
        // satisfies the positivity and cap constraints it ignored
        if (*std::min_element(relaxed.realSizes.begin(), relaxed.realSizes.end()) > 0.0) {
            std::vector<double> times;
            try {
                for (int i = 0; i < m.sets; ++i) {
                    times.push_back(set_time_real(relaxed.realSizes[i], i, m));
                }
            } catch (const InfeasibleSet&) {
                times.clear();
            }
            if (!times.empty()) {
                ++interior;
                for (int i = 0; i < m.sets; ++i) {
                    worstEqualization =
                        std::max(worstEqualization, std::abs(times[i] - relaxed.zStar));
                }
                const testsupport::KktReport kkt =
                    testsupport::kkt_residuals(m, relaxed.zStar, relaxed.realSizes);
                worstKkt = std::max({worstKkt, kkt.maxConstraintResidual, kkt.sumResidual,
                                     kkt.multiplierViolation});
            }
        }

        const std::vector<int> start = round_and_repair(relaxed.realSizes, m.totalK, m);
        const PartitionSolution viaMvd = mvd(m, start);
        const PartitionSolution viaBf = brute_force(m);
        if (viaMvd.objective <= viaBf.objective * (1.0 + 1e-12)) ++optimal;
    }
    detail(fmt("%zu grid instances (%d with interior relaxations) in %.1f s", grid.size(),
               interior, timer.seconds()));
    report(2,
           grid.size() >= 300 && optimal == static_cast<int>(grid.size()) &&
               timer.seconds() <= 120.0,
           fmt("MVD from rounded relaxation attains the brute-force optimum in %d/%zu models",
               optimal, grid.size()));
    detail(fmt("max implicit residual %.3g, max equalization gap %.3g, max KKT residual %.3g",
               worstResidual, worstEqualization, worstKkt));
    report(3,
           worstResidual <= 1e-10 && worstEqualization <= 1e-8 && worstKkt <= 1e-8 &&
               interior >= 200,
           "relaxed solutions satisfy residual and equalization tolerances");
}

// ---------------------------------------------------------------------------
// 4. Analytic simulator checks
// ---------------------------------------------------------------------------

void criterion4() {
    Timer timer;
    bool ok = true;

    struct Point {
        int n;
        int setIndex;
        double mu;
        double a;
        double quantile;  // t = (i+1)(a + q/mu)
    };
    const std::vector<Point> points = {
        {20, 0, 2.0, 0.10, 0.40}, {20, 1, 2.0, 0.10, 0.90}, {20, 3, 1.0, 0.20, 1.30},
        {50, 1, 2.0, 0.10, 0.30}, {50, 2, 0.5, 0.30, 0.70}, {35, 0, 1.5, 0.05, 1.10},
        {35, 4, 1.0, 0.10, 0.55}, {40, 2, 3.0, 0.02, 0.85}, {25, 1, 0.7, 0.40, 0.25},
        {30, 5, 1.2, 0.15, 1.70},
    };
    const int trials = 20000;
    for (const Point& pt : points) {
        StrategyConfig cfg;
        cfg.kind = StrategyKind::Apcc;
        cfg.workers = pt.n;
        cfg.collusion = 0;
        cfg.degree = 1;
        cfg.plan = make_plan(pt.setIndex + 1,
                             std::vector<int>(static_cast<std::size_t>(pt.setIndex) + 1, 1));
        DelayModel model{pt.mu, pt.a, 1, SamplingMode::Persistent};
        const double t = (pt.setIndex + 1.0) * (pt.a + pt.quantile / pt.mu);
        const double got =
            empirical_expected_results(cfg, model, t, pt.setIndex, trials, 99);
        const double p = 1.0 - std::exp(-pt.quantile);
        const double expected = pt.n * p;
        const double se = std::sqrt(pt.n * p * (1.0 - p) / trials);
        if (std::abs(got - expected) > 3.0 * se) {
            ok = false;
            detail(fmt("E[R_i(t)] point (N=%d, i=%d): got %.3f want %.3f +- %.3f", pt.n,
                       pt.setIndex, got, expected, 3.0 * se));
        }
    }

    struct LccCase {
        int n;
        int l;
        int d;
        int kdiv;
    };
    for (const LccCase& c : {LccCase{25, 2, 2, 4}, LccCase{100, 10, 2, 15},
                             LccCase{40, 0, 1, 12}}) {
        StrategyConfig cfg;
        cfg.kind = StrategyKind::Lcc;
        cfg.workers = c.n;
        cfg.collusion = c.l;
        cfg.degree = c.d;
        cfg.divisions = c.kdiv;
        DelayModel model{0.2, 0.5, c.kdiv, SamplingMode::Persistent};
        const SimOutcome outcome = monte_carlo(cfg, model, trials, 41);
        const int h = c.d * (c.kdiv + c.l - 1) + 1;
        const double expected =
            testsupport::order_statistic_mean(c.n, h, model.a(), model.mu());
        if (std::abs(outcome.mean - expected) > 3.0 * outcome.stderrMean) {
            ok = false;
            detail(fmt("LCC(N=%d,H=%d): got %.5f want %.5f +- %.5f", c.n, h, outcome.mean,
                       expected, 3.0 * outcome.stderrMean));
        }
    }
    detail(fmt("10 expectation points and 3 order-statistic checks in %.1f s",
               timer.seconds()));
    report(4, ok, "simulator matches the analytic expectations within 3 standard errors");
}

// ---------------------------------------------------------------------------
// 5. Headline delay-reduction reproduction
// ---------------------------------------------------------------------------

struct Sweep {
    double minMean = 1e300;
    int argmin = -1;
};

constexpr int kHeadlineTrials = 10000;
constexpr std::uint64_t kHeadlineSeed = 12345;

Sweep apcc_min_over_divisions(int n, int l, int degree, int r, bool cancel,
                              SamplingMode mode, int kdivMax) {
    Sweep best;
    for (int kdiv = 1; kdiv <= kdivMax; ++kdiv) {
        const int totalK = r * kdiv;
        OptimModel m;
        m.workers = n;
        m.totalK = totalK;
        m.collusion = l;
        m.degree = degree;
        m.sets = r;
        m.mu = totalK * 0.2;
        m.a = 0.5 / totalK;
        m.cancellation = cancel;
        PartitionSolution plan;
        try {
            plan = optimize_partition(m);
        } catch (const Error&) {
            continue;
        }
        StrategyConfig cfg;
        cfg.kind = StrategyKind::Apcc;
        cfg.workers = n;
        cfg.collusion = l;
        cfg.degree = degree;
        cfg.plan = make_plan(totalK, plan.setSizes);
        cfg.cancellation = cancel;
        DelayModel dm{0.2, 0.5, totalK, mode};
        const SimOutcome out = monte_carlo(cfg, dm, kHeadlineTrials, kHeadlineSeed);
        if (out.mean < best.minMean) {
            best.minMean = out.mean;
            best.argmin = kdiv;
        }
    }
    return best;
}

Sweep baseline_min_over_divisions(StrategyKind kind, int n, int l, int degree, int r,
                                  SamplingMode mode, int kdivMax) {
    Sweep best;
    for (int kdiv = 1; kdiv <= kdivMax; ++kdiv) {
        StrategyConfig cfg;
        cfg.kind = kind;
        cfg.workers = n;
        cfg.collusion = l;
        cfg.degree = degree;
        cfg.rounds = r;
        cfg.divisions = parity_divisions(kind, kdiv, r);
        if (kind == StrategyKind::Lcc || kind == StrategyKind::Bacc) {
            const int h = degree * (kdiv + l - 1) + 1;
            if (h > n) continue;
            if (kind == StrategyKind::Bacc) cfg.baccThreshold = h;
        } else if (degree * (cfg.divisions - 1) + 1 > n * r) {
            continue;
        }
        DelayModel dm{0.2, 0.5, cfg.divisions, mode};
        const SimOutcome out = monte_carlo(cfg, dm, kHeadlineTrials, kHeadlineSeed);
        if (out.mean < best.minMean) {
            best.minMean = out.mean;
            best.argmin = kdiv;
        }
    }
    return best;
}

const char* mode_name(SamplingMode mode) {
    return mode == SamplingMode::Persistent ? "persistent" : "iid";
}

/// Evaluates metric(mode) for persistent sampling and, if outside the band,
/// again for iid; passes when either lands in band. Both values are printed.
bool band_check(const std::string& label, double target, double tolerance,
                const std::function<double(SamplingMode)>& metric) {
    const double persistent = metric(SamplingMode::Persistent);
    bool ok = std::abs(persistent - target) <= tolerance;
    std::string text = fmt("%s: persistent %.1f%%", label.c_str(), persistent);
    if (!ok) {
        const double iid = metric(SamplingMode::Iid);
        ok = std::abs(iid - target) <= tolerance;
        text += fmt(", iid %.1f%%", iid);
    }
    text += fmt(" (target %.1f +- %.1f)", target, tolerance);
    detail(text);
    return ok;
}

void criterion5() {
    Timer timer;
    bool ok = true;

    // Scenario A: N=100, L=10, d=2, r=16. The reductions quoted for APCC
    // with and without cancellation are 41.4% and 47.5% respectively.
    {
        std::map<int, Sweep> lcc;
        std::map<int, Sweep> apccNo;
        std::map<int, Sweep> apccYes;
        auto lccMin = [&](SamplingMode m) {
            auto it = lcc.find(static_cast<int>(m));
            if (it == lcc.end()) {
                it = lcc.emplace(static_cast<int>(m),
                                 baseline_min_over_divisions(StrategyKind::Lcc, 100, 10, 2, 16,
                                                             m, 40))
                         .first;
            }
            return it->second.minMean;
        };
        ok &= band_check("A without cancellation vs LCC", 47.5, 5.0, [&](SamplingMode m) {
            auto it = apccNo.find(static_cast<int>(m));
            if (it == apccNo.end()) {
                it = apccNo.emplace(static_cast<int>(m),
                                    apcc_min_over_divisions(100, 10, 2, 16, false, m, 40))
                         .first;
            }
            return 100.0 * (1.0 - it->second.minMean / lccMin(m));
        });
        ok &= band_check("A with cancellation vs LCC", 41.4, 5.0, [&](SamplingMode m) {
            auto it = apccYes.find(static_cast<int>(m));
            if (it == apccYes.end()) {
                it = apccYes.emplace(static_cast<int>(m),
                                     apcc_min_over_divisions(100, 10, 2, 16, true, m, 40))
                         .first;
            }
            return 100.0 * (1.0 - it->second.minMean / lccMin(m));
        });
    }

    // Scenario B: N=100, L=0, d=2, r=16; APCC with cancellation vs LCC and
    // proximity to LCC-MMC.
    {
        std::map<int, double> lcc;
        std::map<int, double> mmc;
        std::map<int, double> apccYes;
        auto cached = [](std::map<int, double>& cache, SamplingMode m,
                         const std::function<double()>& compute) {
            auto it = cache.find(static_cast<int>(m));
            if (it == cache.end()) it = cache.emplace(static_cast<int>(m), compute()).first;
            return it->second;
        };
        auto lccMin = [&](SamplingMode m) {
            return cached(lcc, m, [&] {
                return baseline_min_over_divisions(StrategyKind::Lcc, 100, 0, 2, 16, m, 50)
                    .minMean;
            });
        };
        auto mmcMin = [&](SamplingMode m) {
            return cached(mmc, m, [&] {
                return baseline_min_over_divisions(StrategyKind::LccMmc, 100, 0, 2, 16, m, 50)
                    .minMean;
            });
        };
        auto apccMin = [&](SamplingMode m) {
            return cached(apccYes, m, [&] {
                return apcc_min_over_divisions(100, 0, 2, 16, true, m, 50).minMean;
            });
        };
        ok &= band_check("B with cancellation vs LCC (L=0)", 20.3, 5.0, [&](SamplingMode m) {
            return 100.0 * (1.0 - apccMin(m) / lccMin(m));
        });
        // within 10% of LCC-MMC: expressed as a percentage gap with target 0
        ok &= band_check("B gap to LCC-MMC", 0.0, 10.0, [&](SamplingMode m) {
            return 100.0 * (apccMin(m) / mmcMin(m) - 1.0);
        });
    }

    // Scenario C: approximated results at matched reduced thresholds
    // (degree 4 halved to 2 for APCC set thresholds and the BACC threshold),
    // N=100, L=10, r=8; best APCC mode vs BACC.
    {
        ok &= band_check("C best APCC vs BACC", 42.9, 6.0, [&](SamplingMode m) {
            const double bacc =
                baseline_min_over_divisions(StrategyKind::Bacc, 100, 10, 2, 8, m, 40).minMean;
            const double no = apcc_min_over_divisions(100, 10, 2, 8, false, m, 40).minMean;
            const double yes = apcc_min_over_divisions(100, 10, 2, 8, true, m, 40).minMean;
            return 100.0 * (1.0 - std::min(no, yes) / bacc);
        });
    }

    detail(fmt("headline sweeps took %.1f s", timer.seconds()));
    report(5, ok, "paper delay reductions reproduced (one sampling mode per band suffices)");
}

// ---------------------------------------------------------------------------
// 6. Qualitative curve shapes
// ---------------------------------------------------------------------------

void criterion6() {
    Timer timer;
    bool ok = true;
    const int trials = 10000;

    // U-shape over the division sweep: N=200, L=20, d=4, r=6.
    {
        std::vector<double> means;
        std::vector<double> errs;
        for (int kdiv = 1; kdiv <= 30; ++kdiv) {
            const int totalK = 6 * kdiv;
            OptimModel m;
            m.workers = 200;
            m.totalK = totalK;
            m.collusion = 20;
            m.degree = 4;
            m.sets = 6;
            m.mu = totalK * 0.2;
            m.a = 0.5 / totalK;
            PartitionSolution plan;
            try {
                plan = optimize_partition(m);
            } catch (const Error&) {
                continue;
            }
            StrategyConfig cfg;
            cfg.kind = StrategyKind::Apcc;
            cfg.workers = 200;
            cfg.collusion = 20;
            cfg.degree = 4;
            cfg.plan = make_plan(totalK, plan.setSizes);
            DelayModel dm{0.2, 0.5, totalK, SamplingMode::Persistent};
            const SimOutcome out = monte_carlo(cfg, dm, trials, 4242);
            means.push_back(out.mean);
            errs.push_back(out.stderrMean);
        }
        const std::size_t arg = static_cast<std::size_t>(
            std::min_element(means.begin(), means.end()) - means.begin());
        const bool interior = arg > 0 && arg + 1 < means.size();
        const bool risesLeft = means.front() > means[arg] + 3.0 * (errs.front() + errs[arg]);
        const bool risesRight = means.back() > means[arg] + 3.0 * (errs.back() + errs[arg]);
        detail(fmt("division sweep argmin at %zu of %zu, ends %.3f / %.3f vs min %.3f",
                   arg + 1, means.size(), means.front(), means.back(), means[arg]));
        ok &= interior && risesLeft && risesRight;
    }

    // Delay is non-increasing in r (up to noise), with a real gain overall.
    {
        std::vector<double> mins;
        std::vector<double> errsAtMin;
        for (int r : {1, 2, 4, 8, 16}) {
            double best = 1e300;
            double bestErr = 0.0;
            for (int kdiv = 1; kdiv <= 30; ++kdiv) {
                const int totalK = r * kdiv;
                OptimModel m;
                m.workers = 200;
                m.totalK = totalK;
                m.collusion = 20;
                m.degree = 4;
                m.sets = r;
                m.mu = totalK * 0.2;
                m.a = 0.5 / totalK;
                PartitionSolution plan;
                try {
                    plan = optimize_partition(m);
                } catch (const Error&) {
                    continue;
                }
                StrategyConfig cfg;
                cfg.kind = StrategyKind::Apcc;
                cfg.workers = 200;
                cfg.collusion = 20;
                cfg.degree = 4;
                cfg.plan = make_plan(totalK, plan.setSizes);
                DelayModel dm{0.2, 0.5, totalK, SamplingMode::Persistent};
                const SimOutcome out = monte_carlo(cfg, dm, trials, 555);
                if (out.mean < best) {
                    best = out.mean;
                    bestErr = out.stderrMean;
                }
            }
            mins.push_back(best);
            errsAtMin.push_back(bestErr);
        }
        bool monotone = true;
        for (std::size_t i = 1; i < mins.size(); ++i) {
            if (mins[i] > mins[i - 1] + 3.0 * (errsAtMin[i] + errsAtMin[i - 1])) {
                monotone = false;
            }
        }
        const bool gains = mins.back() < 0.9 * mins.front();
        detail(fmt("min delay by r in {1,2,4,8,16}: %.3f %.3f %.3f %.3f %.3f", mins[0],
                   mins[1], mins[2], mins[3], mins[4]));
        ok &= monotone && gains;
    }

    // Delay is non-decreasing in L at fixed division: N=200, d=4, r=12, K'=10.
    {
        std::vector<double> means;
        std::vector<double> errs;
        for (int l : {0, 5, 10, 20}) {
            const int totalK = 120;
            OptimModel m;
            m.workers = 200;
            m.totalK = totalK;
            m.collusion = l;
            m.degree = 4;
            m.sets = 12;
            m.mu = totalK * 0.2;
            m.a = 0.5 / totalK;
            const PartitionSolution plan = optimize_partition(m);
            StrategyConfig cfg;
            cfg.kind = StrategyKind::Apcc;
            cfg.workers = 200;
            cfg.collusion = l;
            cfg.degree = 4;
            cfg.plan = make_plan(totalK, plan.setSizes);
            DelayModel dm{0.2, 0.5, totalK, SamplingMode::Persistent};
            const SimOutcome out = monte_carlo(cfg, dm, trials, 321);
            means.push_back(out.mean);
            errs.push_back(out.stderrMean);
        }
        bool monotone = true;
        for (std::size_t i = 1; i < means.size(); ++i) {
            if (means[i] + 3.0 * (errs[i] + errs[i - 1]) < means[i - 1]) monotone = false;
        }
        detail(fmt("delay by L in {0,5,10,20}: %.3f %.3f %.3f %.3f", means[0], means[1],
                   means[2], means[3]));
        ok &= monotone && means.back() > means.front();
    }

    detail(fmt("shape sweeps took %.1f s", timer.seconds()));
    report(6, ok, "division sweep is U-shaped, delay falls with r and rises with L");
}

// ---------------------------------------------------------------------------
// 7. Property suites
// ---------------------------------------------------------------------------

bool privacy_witness_suite() {
    for (int n : {6, 8, 12, 16, 20}) {
        for (int l : {1, 2, 3}) {
            for (int kSet : {1, 3}) {
                if (2 * (kSet + l - 1) + 1 > n) continue;
                const CodecContext ctx = make_context(0, kSet, l, n, 2, CodecMode::Accurate);
                std::vector<int> subset(static_cast<std::size_t>(l));
                std::function<bool(int, int)> visit = [&](int pos, int start) -> bool {
                    if (pos == l) {
                        return std::abs(testsupport::row_normalized_determinant(
                                   padding_coefficient_matrix(ctx, subset))) > 1e-12;
                    }
                    for (int v = start; v < n; ++v) {
                        subset[static_cast<std::size_t>(pos)] = v;
                        if (!visit(pos + 1, v + 1)) return false;
                    }
                    return true;
                };
                if (!visit(0, 0)) {
                    detail(fmt("privacy witness failed at N=%d L=%d K_i=%d", n, l, kSet));
                    return false;
                }
            }
        }
    }
    return true;
}

bool multilinearity_suite() {
    Rng rng(808);
    for (int d = 1; d <= 4; ++d) {
        std::vector<double> coeffs(static_cast<std::size_t>(d) + 1);
        for (double& c : coeffs) c = uniform_sym(rng);
        coeffs.back() += 1.0;
        const BlockFn f = [coeffs](const MatrixBlock& x) {
            return testsupport::entrywise_poly(x, coeffs);
        };
        const MultilinearFn fd = multilinearize(f, d);
        for (int arg = 0; arg < d; ++arg) {
            std::vector<MatrixBlock> base;
            for (int i = 0; i < d; ++i) base.push_back(testsupport::random_block(2, 2, rng));
            const MatrixBlock va = testsupport::random_block(2, 2, rng);
            const MatrixBlock vb = testsupport::random_block(2, 2, rng);
            const double ca = uniform_sym(rng);
            const double cb = uniform_sym(rng);
            std::vector<MatrixBlock> mixed = base;
            mixed[static_cast<std::size_t>(arg)] = zeros_like(va);
            mixed[static_cast<std::size_t>(arg)].axpy(ca, va);
            mixed[static_cast<std::size_t>(arg)].axpy(cb, vb);
            const MatrixBlock lhs = fd(mixed);
            std::vector<MatrixBlock> withA = base;
            withA[static_cast<std::size_t>(arg)] = va;
            std::vector<MatrixBlock> withB = base;
            withB[static_cast<std::size_t>(arg)] = vb;
            MatrixBlock rhs = zeros_like(lhs);
            rhs.axpy(ca, fd(withA));
            rhs.axpy(cb, fd(withB));
            const double scale = std::max({1.0, max_abs(lhs), max_abs(rhs)});
            for (std::size_t i = 0; i < lhs.data.size(); ++i) {
                if (std::abs(lhs.data[i] - rhs.data[i]) / scale > 1e-9) {
                    detail(fmt("multilinearity failed at d=%d argument %d", d, arg));
                    return false;
                }
            }
        }
    }
    return true;
}

bool rate_capacity_suite() {
    for (int n = 2; n <= 50; ++n) {
        for (int s = 0; s < n; ++s) {
            for (int l = 0; l <= 5; ++l) {
                for (int d = 1; d <= 4; ++d) {
                    const DivisionsResult kmax = max_divisions(n, s, l, d);
                    const CapacityResult cap = capacity(n, s, l, d);
                    if (!kmax.feasible || !cap.feasible) continue;
                    const double rate = encoding_rate(kmax.value, n, s);
                    if (rate > cap.value + 1e-12) {
                        detail(fmt("rate %.6f above capacity %.6f at N=%d S=%d L=%d d=%d",
                                   rate, cap.value, n, s, l, d));
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

bool berrut_bound_suite() {
    Rng rng(616);
    struct Shape {
        double (*h)(double);
        double d2;
        double d1;
    };
    const Shape shapes[] = {{[](double x) { return x * x; }, 2.0, 2.0},
                            {[](double x) { return x * x * x; }, 6.0, 3.0}};
    for (const Shape& shape : shapes) {
        for (int n : {16, 26, 40}) {
            const CodecContext ctx = make_context(0, 3, 1, n, 2, CodecMode::Approximate);
            for (int resultCount : {6, 7, 12, n}) {
                for (int trial = 0; trial < 10; ++trial) {
                    std::vector<int> order(static_cast<std::size_t>(n));
                    std::iota(order.begin(), order.end(), 0);
                    std::shuffle(order.begin(), order.end(), rng);
                    std::vector<ReturnedResult> results;
                    for (int i = 0; i < resultCount; ++i) {
                        const double x = ctx.betaNodes[static_cast<std::size_t>(order[i])];
                        results.push_back(ReturnedResult{0, order[i], x,
                                                         MatrixBlock(1, 1, {shape.h(x)})});
                    }
                    const std::vector<MatrixBlock> decoded =
                        decode_set(ctx, results, CodecMode::Approximate);
                    const double bound = approx_error_bound(n, resultCount, shape.d2, shape.d1);
                    for (int j = 0; j < ctx.kSet; ++j) {
                        const double want = shape.h(ctx.alphaNodes[static_cast<std::size_t>(j)]);
                        if (std::abs(decoded[static_cast<std::size_t>(j)].at(0, 0) - want) >
                            bound) {
                            detail(fmt("Berrut bound broken at N=%d R=%d", n, resultCount));
                            return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

void criterion7() {
    Timer timer;
    const bool privacy = privacy_witness_suite();
    const bool multilinear = multilinearity_suite();
    const bool rateCap = rate_capacity_suite();
    const bool berrut = berrut_bound_suite();
    detail(fmt("privacy %s, multilinearity %s, rate<=capacity %s, Berrut bound %s, %.1f s",
               privacy ? "ok" : "FAIL", multilinear ? "ok" : "FAIL",
               rateCap ? "ok" : "FAIL", berrut ? "ok" : "FAIL", timer.seconds()));
    report(7, privacy && multilinear && rateCap && berrut && timer.seconds() <= 120.0,
           "property suites (privacy witness, multilinearity, capacity, Berrut bound)");
}

}  // namespace

int main() {
    Timer total;
    criterion1();
    criteria2and3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::printf("%d criterion failure(s), %.1f s total\n", failures, total.seconds());
    return failures == 0 ? 0 : 1;
}
