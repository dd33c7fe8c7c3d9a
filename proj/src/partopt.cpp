#include "apcc/partopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace apcc {

namespace {

constexpr double kBisectTol = 1e-12;
constexpr int kBisectMaxIter = 200;

void check_model(const OptimModel& m) {
    if (m.workers < 1 || m.totalK < 1 || m.sets < 1 || m.degree < 1 || m.collusion < 0) {
        throw InvalidArgument("model dimensions must be positive (L >= 0)");
    }
    if (m.mu <= 0.0 || m.a <= 0.0) {
        throw InvalidArgument("mu and a must be positive");
    }
    if (m.thresholdKind == ThresholdKind::Uncoded && m.collusion != 0) {
        throw InvalidArgument("uncoded thresholds require L = 0");
    }
}

void check_partition(const OptimModel& m, std::span<const int> sizes) {
    if (static_cast<int>(sizes.size()) != m.sets) {
        throw InvalidArgument("partition length must equal r");
    }
    const int cap = m.max_set_size();
    int sum = 0;
    for (int k : sizes) {
        if (k < 1) throw InfeasibleModel("set sizes must be >= 1");
        if (k > cap) {
            throw InfeasibleModel("set size " + std::to_string(k) + " exceeds cap " +
                                  std::to_string(cap));
        }
        sum += k;
    }
    if (sum != m.totalK) {
        throw InfeasibleModel("partition sums to " + std::to_string(sum) + ", expected " +
                              std::to_string(m.totalK));
    }
}

double threshold_real(const OptimModel& m, double kSet) {
    if (m.thresholdKind == ThresholdKind::Coded) {
        return m.degree * (kSet + m.collusion - 1.0) + 1.0;
    }
    return m.workers - std::floor(static_cast<double>(m.workers) / kSet) + 1.0;
}

double time_from_threshold(const OptimModel& m, double h, int setIndex) {
    const double stage = setIndex + 1.0;
    if (!m.cancellation) {
        if (h >= m.workers) {
            throw InfeasibleSet("threshold " + std::to_string(h) + " >= N = " +
                                std::to_string(m.workers));
        }
        return stage * (m.a - std::log1p(-h / m.workers) / m.mu);
    }
    const double racing = m.workers - h + 1.0;  // workers still computing the last result
    if (racing < 1.0) {
        throw InfeasibleSet("threshold " + std::to_string(h) + " > N = " +
                            std::to_string(m.workers));
    }
    return stage / (m.mu * racing) + m.a * stage;
}

}  // namespace

int OptimModel::threshold(int kSet) const {
    if (kSet < 1) throw InvalidArgument("K_i must be >= 1");
    if (thresholdKind == ThresholdKind::Coded) {
        return degree * (kSet + collusion - 1) + 1;
    }
    return workers - workers / kSet + 1;
}

int OptimModel::max_set_size() const {
    if (thresholdKind == ThresholdKind::Coded) {
        // H_i <= N, with strict inequality required when sets are not cancelled.
        int cap = (workers - 1) / degree - collusion + 1;
        if (!cancellation) {
            while (cap >= 1 && threshold(cap) >= workers) --cap;
        }
        return cap;
    }
    // Uncoded: floor(N/K_i) >= 2 keeps H_i < N; cancellation only needs H_i <= N.
    return cancellation ? workers : workers / 2;
}

double set_time_nocancel(int kSet, int setIndex, const OptimModel& model) {
    check_model(model);
    if (kSet < 1) throw InvalidArgument("K_i must be >= 1");
    OptimModel m = model;
    m.cancellation = false;
    return time_from_threshold(m, m.threshold(kSet), setIndex);
}

double set_time_cancel(int kSet, int setIndex, const OptimModel& model) {
    check_model(model);
    if (kSet < 1) throw InvalidArgument("K_i must be >= 1");
    OptimModel m = model;
    m.cancellation = true;
    return time_from_threshold(m, m.threshold(kSet), setIndex);
}

double set_time(int kSet, int setIndex, const OptimModel& model) {
    return model.cancellation ? set_time_cancel(kSet, setIndex, model)
                              : set_time_nocancel(kSet, setIndex, model);
}

double set_time_real(double kSet, int setIndex, const OptimModel& model) {
    check_model(model);
    if (kSet <= 0.0) throw InvalidArgument("K_i must be positive");
    return time_from_threshold(model, threshold_real(model, kSet), setIndex);
}

namespace {

struct Bracket {
    double lo;
    double hi;
};

/// Bisection for a strictly decreasing lhs; returns z with lhs(z) = rhs.
/// Runs to the last representable midpoint so the equation residual is at
/// rounding level, well inside the nominal 1e-12 tolerance on z.
template <typename Fn>
double bisect_decreasing(Fn lhs, double rhs, Bracket b) {
    double lo = b.lo;
    double hi = b.hi;
    for (int iter = 0; iter < kBisectMaxIter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (lhs(mid) >= rhs) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

RelaxedSolution solve_relaxed(const OptimModel& model) {
    check_model(model);
    if (model.thresholdKind != ThresholdKind::Coded) {
        throw InvalidArgument("solve_relaxed needs the coded threshold family");
    }
    const double N = model.workers;
    const double K = model.totalK;
    const double L = model.collusion;
    const double d = model.degree;
    const int r = model.sets;
    const double mu = model.mu;
    const double a = model.a;
    const double zCap = 1e6 * a;

    RelaxedSolution out;
    out.realSizes.resize(static_cast<std::size_t>(r));

    if (!model.cancellation) {
        const double rhs = r - (d * (K + r * L - r) + r) / N;
        if (rhs <= 0.0) {
            throw InfeasibleModel("aggregate threshold load exceeds all workers");
        }
        auto lhs = [&](double z) {
            double s = 0.0;
            for (int i = 0; i < r; ++i) s += std::exp(-mu * (z / (i + 1.0) - a));
            return s;
        };
        // lhs(0) = r e^{mu a} > rhs, so the root always lies above zero. It
        // can sit below a*r for light loads; the size formulas then yield
        // non-positive tail sizes that round_and_repair clamps later.
        const double lo = 0.0;
        double hi = std::max(2.0 * a * r, a * r + 1.0 / mu);
        while (lhs(hi) >= rhs) {
            hi *= 2.0;
            if (hi > zCap) throw NumericError("implicit equation not bracketed below 1e6*a");
        }
        const double z = bisect_decreasing(lhs, rhs, Bracket{lo, hi});
        out.zStar = z;
        for (int i = 0; i < r; ++i) {
            out.realSizes[i] =
                N / d * (1.0 - std::exp(-mu * (z / (i + 1.0) - a))) - 1.0 / d - L + 1.0;
        }
        return out;
    }

    const double rhs = mu * (r * N - d * (K + r * L - r));
    if (rhs <= 0.0) {
        throw InfeasibleModel("aggregate threshold load exceeds all workers");
    }
    auto lhs = [&](double z) {
        double s = 0.0;
        for (int i = 0; i < r; ++i) s += (i + 1.0) / (z - a * (i + 1.0));
        return s;
    };
    const double lo = a * r;  // open endpoint: lhs -> +inf
    double hi = lo + std::max(lo, 1.0 / mu);
    while (lhs(hi) >= rhs) {
        hi = lo + 2.0 * (hi - lo);
        if (hi > zCap) throw NumericError("implicit equation not bracketed below 1e6*a");
    }
    const double z = bisect_decreasing(lhs, rhs, Bracket{lo, hi});
    out.zStar = z;
    for (int i = 0; i < r; ++i) {
        out.realSizes[i] = N / d - (i + 1.0) / (d * mu * (z - a * (i + 1.0))) - L + 1.0;
    }
    return out;
}

PartitionSolution mvd(const OptimModel& model, std::span<const int> initial,
                      std::vector<double>* trace) {
    check_model(model);
    check_partition(model, initial);
    const int r = model.sets;
    const int cap = model.max_set_size();

    std::vector<int> sizes(initial.begin(), initial.end());
    std::vector<double> times(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) times[i] = set_time(sizes[i], i, model);
    double z = *std::max_element(times.begin(), times.end());

    // Descent moves are bounded by the total slack, O(N r / d); the margin
    // only guards against a cycling bug.
    const int maxIters = 8 * (model.workers * r / std::max(1, model.degree) + r + 8);
    for (int iter = 0; iter < maxIters; ++iter) {
        const int j = static_cast<int>(
            std::max_element(times.begin(), times.end()) - times.begin());
        if (sizes[j] <= 1) break;  // nothing left to move out of the bottleneck

        int bestL = -1;
        double bestZ = z;
        const double tJ = set_time(sizes[j] - 1, j, model);
        for (int l = 0; l < r; ++l) {
            if (l == j || sizes[l] + 1 > cap) continue;
            const double tL = set_time(sizes[l] + 1, l, model);
            double zTemp = std::max(tJ, tL);
            for (int i = 0; i < r; ++i) {
                if (i != j && i != l) zTemp = std::max(zTemp, times[i]);
            }
            if (zTemp < bestZ) {
                bestZ = zTemp;
                bestL = l;
            }
        }
        if (bestL < 0) break;

        --sizes[j];
        ++sizes[bestL];
        times[j] = tJ;
        times[bestL] = set_time(sizes[bestL], bestL, model);
        z = bestZ;
        if (trace != nullptr) trace->push_back(z);
    }

    PartitionSolution out;
    out.setSizes = std::move(sizes);
    out.perSetTimes = std::move(times);
    out.objective = z;
    return out;
}

PartitionSolution brute_force(const OptimModel& model) {
    check_model(model);
    const int r = model.sets;
    const int K = model.totalK;
    const int cap = model.max_set_size();
    if (cap < 1 || static_cast<long long>(cap) * r < K || K < r) {
        throw InfeasibleModel("no feasible partition of K into r sets");
    }

    // Count compositions of K into r parts first; abort when too many.
    {
        double count = 1.0;
        for (int i = 1; i < r; ++i) count *= static_cast<double>(K - i) / i;
        if (count > 1e7) {
            throw TooLarge("composition count exceeds the 1e7 enumeration guard");
        }
    }

    std::vector<int> current(static_cast<std::size_t>(r), 1);
    std::vector<double> times(static_cast<std::size_t>(r), 0.0);
    PartitionSolution best;
    best.objective = std::numeric_limits<double>::infinity();

    // Depth-first over set sizes with remaining-sum pruning.
    auto rec = [&](auto&& self, int idx, int remaining, double zSoFar) -> void {
        if (idx == r - 1) {
            if (remaining < 1 || remaining > cap) return;
            const double t = set_time(remaining, idx, model);
            const double z = std::max(zSoFar, t);
            if (z < best.objective) {
                current[idx] = remaining;
                times[idx] = t;
                best.objective = z;
                best.setSizes = current;
                best.perSetTimes = times;
            }
            return;
        }
        const int slotsLeft = r - idx - 1;
        const int lo = std::max(1, remaining - slotsLeft * cap);
        const int hi = std::min(cap, remaining - slotsLeft);
        for (int k = lo; k <= hi; ++k) {
            const double t = set_time(k, idx, model);
            const double z = std::max(zSoFar, t);
            if (z >= best.objective) continue;  // cannot improve further down
            current[idx] = k;
            times[idx] = t;
            self(self, idx + 1, remaining - k, z);
        }
    };
    rec(rec, 0, K, 0.0);

    if (!std::isfinite(best.objective)) {
        throw InfeasibleModel("no feasible partition of K into r sets");
    }
    return best;
}

std::vector<int> round_and_repair(std::span<const double> realSizes, int totalK,
                                  const OptimModel& model) {
    check_model(model);
    const int r = static_cast<int>(realSizes.size());
    if (r != model.sets) throw InvalidArgument("realSizes length must equal r");
    const int cap = model.max_set_size();
    if (cap < 1 || static_cast<long long>(cap) * r < totalK || totalK < r) {
        throw InfeasibleModel("caps admit no partition summing to K");
    }

    std::vector<int> sizes(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        const int fl = static_cast<int>(std::floor(realSizes[i]));
        sizes[i] = std::clamp(fl, 1, cap);
    }

    int sum = std::accumulate(sizes.begin(), sizes.end(), 0);
    while (sum < totalK) {
        // Give a unit to the set with the largest remainder; ties to lower index.
        int pick = -1;
        double bestRem = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < r; ++i) {
            if (sizes[i] >= cap) continue;
            const double rem = realSizes[i] - sizes[i];
            if (rem > bestRem) {
                bestRem = rem;
                pick = i;
            }
        }
        if (pick < 0) throw InfeasibleModel("caps admit no partition summing to K");
        ++sizes[pick];
        ++sum;
    }
    while (sum > totalK) {
        // Take a unit from the set with the smallest remainder; ties to lower index.
        int pick = -1;
        double bestRem = std::numeric_limits<double>::infinity();
        for (int i = 0; i < r; ++i) {
            if (sizes[i] <= 1) continue;
            const double rem = realSizes[i] - sizes[i];
            if (rem < bestRem) {
                bestRem = rem;
                pick = i;
            }
        }
        if (pick < 0) throw InfeasibleModel("cannot shrink partition to K");
        --sizes[pick];
        --sum;
    }
    return sizes;
}

PartitionSolution optimize_partition(const OptimModel& model) {
    check_model(model);
    std::vector<int> initial;
    if (model.thresholdKind == ThresholdKind::Coded) {
        const RelaxedSolution relaxed = solve_relaxed(model);
        initial = round_and_repair(relaxed.realSizes, model.totalK, model);
    } else {
        // Balanced start; MVD does the rest.
        std::vector<double> even(static_cast<std::size_t>(model.sets),
                                 static_cast<double>(model.totalK) / model.sets);
        initial = round_and_repair(even, model.totalK, model);
    }
    return mvd(model, initial);
}

}  // namespace apcc
