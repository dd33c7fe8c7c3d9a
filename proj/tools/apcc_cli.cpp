// Command line front end: task-partition optimization, Monte Carlo delay
// sweeps against the LCC / LCC-MMC / BACC baselines, a coded linear
// regression demo, and communication/operation cost tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "apcc/codec.hpp"
#include "apcc/partopt.hpp"
#include "apcc/stragsim.hpp"

namespace {

using nlohmann::json;

struct ExperimentConfig {
    int n = 10;
    int l = 1;
    int d = 2;
    int r = 3;
    int k = 12;
    int kdivMin = 1;
    int kdivMax = 0;  // 0: every feasible division
    double a0 = 0.5;
    double mu0 = 0.2;
    int trials = 10000;
    std::uint64_t seed = 12345;
    bool cancel = false;
    std::vector<std::string> strategies;
    std::string mode = "persistent";
    std::string out = "-";

    // demo knobs, settable through --config only
    int demoRows = 96;
    int demoCols = 8;
    int demoIters = 5;
    double demoEta = 0.05;
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

class OutputStream {
public:
    explicit OutputStream(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

apcc::SamplingMode parse_mode(const std::string& mode) {
    if (mode == "persistent") return apcc::SamplingMode::Persistent;
    if (mode == "iid") return apcc::SamplingMode::Iid;
    throw apcc::InvalidArgument("--mode must be persistent or iid");
}

apcc::StrategyKind parse_strategy(const std::string& name) {
    if (name == "apcc") return apcc::StrategyKind::Apcc;
    if (name == "lcc") return apcc::StrategyKind::Lcc;
    if (name == "lcc-mmc") return apcc::StrategyKind::LccMmc;
    if (name == "bacc") return apcc::StrategyKind::Bacc;
    throw apcc::InvalidArgument("unknown strategy " + name);
}

apcc::OptimModel make_optim_model(const ExperimentConfig& cfg, int totalK) {
    apcc::OptimModel model;
    model.workers = cfg.n;
    model.totalK = totalK;
    model.collusion = cfg.l;
    model.degree = cfg.d;
    model.sets = cfg.r;
    model.mu = totalK * cfg.mu0;
    model.a = cfg.a0 / totalK;
    model.cancellation = cfg.cancel;
    return model;
}

void apply_config_file(const std::string& path, ExperimentConfig& cfg,
                       const std::map<std::string, bool>& given) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    json j;
    in >> j;
    if (!j.is_object()) throw apcc::InvalidArgument("config must be a flat JSON object");

    auto want = [&](const char* key) { return j.contains(key) && !given.at(key); };
    if (want("n")) cfg.n = j["n"].get<int>();
    if (want("l")) cfg.l = j["l"].get<int>();
    if (want("d")) cfg.d = j["d"].get<int>();
    if (want("r")) cfg.r = j["r"].get<int>();
    if (want("k")) cfg.k = j["k"].get<int>();
    if (want("kdiv-min")) cfg.kdivMin = j["kdiv-min"].get<int>();
    if (want("kdiv-max")) cfg.kdivMax = j["kdiv-max"].get<int>();
    if (want("a0")) cfg.a0 = j["a0"].get<double>();
    if (want("mu0")) cfg.mu0 = j["mu0"].get<double>();
    if (want("trials")) cfg.trials = j["trials"].get<int>();
    if (want("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (want("cancel")) cfg.cancel = j["cancel"].get<bool>();
    if (want("mode")) cfg.mode = j["mode"].get<std::string>();
    if (want("out")) cfg.out = j["out"].get<std::string>();
    if (want("strategy")) {
        cfg.strategies.clear();
        if (j["strategy"].is_array()) {
            for (const auto& s : j["strategy"]) cfg.strategies.push_back(s.get<std::string>());
        } else {
            cfg.strategies.push_back(j["strategy"].get<std::string>());
        }
    }
    // demo-only knobs have no flag equivalents
    if (j.contains("demo-rows")) cfg.demoRows = j["demo-rows"].get<int>();
    if (j.contains("demo-cols")) cfg.demoCols = j["demo-cols"].get<int>();
    if (j.contains("demo-iters")) cfg.demoIters = j["demo-iters"].get<int>();
    if (j.contains("demo-eta")) cfg.demoEta = j["demo-eta"].get<double>();
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

int cmd_optimize(const ExperimentConfig& cfg) {
    const apcc::OptimModel model = make_optim_model(cfg, cfg.k);
    OutputStream out(cfg.out);
    std::ostream& os = out.get();

    auto print_row = [&](const std::string& name, const std::vector<double>& sizes,
                         double objective) {
        os << name << "  z=" << format_double(objective) << "  K=[";
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            if (i > 0) os << ", ";
            os << format_double(sizes[i]);
        }
        os << "]\n";
    };
    auto as_doubles = [](const std::vector<int>& v) {
        return std::vector<double>(v.begin(), v.end());
    };

    const apcc::RelaxedSolution relaxed = apcc::solve_relaxed(model);
    print_row("relaxed    ", relaxed.realSizes, relaxed.zStar);

    const std::vector<int> rounded =
        apcc::round_and_repair(relaxed.realSizes, cfg.k, model);
    double roundedZ = 0.0;
    for (int i = 0; i < model.sets; ++i) {
        roundedZ = std::max(roundedZ, apcc::set_time(rounded[i], i, model));
    }
    print_row("rounded    ", as_doubles(rounded), roundedZ);

    const apcc::PartitionSolution refined = apcc::mvd(model, rounded);
    print_row("mvd        ", as_doubles(refined.setSizes), refined.objective);

    try {
        const apcc::PartitionSolution exact = apcc::brute_force(model);
        print_row("brute-force", as_doubles(exact.setSizes), exact.objective);
    } catch (const apcc::TooLarge&) {
        os << "brute-force  skipped (search space over the enumeration guard)\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int strategy_kdiv_cap(const ExperimentConfig& cfg, apcc::StrategyKind kind) {
    switch (kind) {
        case apcc::StrategyKind::Apcc: {
            apcc::OptimModel model = make_optim_model(cfg, cfg.r);  // divisions rescaled later
            return model.max_set_size();
        }
        case apcc::StrategyKind::Lcc:
        case apcc::StrategyKind::Bacc: {
            int kdiv = 0;
            while (cfg.d * (kdiv + 1 + cfg.l - 1) + 1 <= cfg.n) ++kdiv;
            return kdiv;
        }
        case apcc::StrategyKind::LccMmc: {
            int kdiv = 0;
            while (cfg.d * ((kdiv + 1) * cfg.r - 1) + 1 <= cfg.n * cfg.r) ++kdiv;
            return kdiv;
        }
    }
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    const apcc::SamplingMode sampling = parse_mode(cfg.mode);
    OutputStream out(cfg.out);
    std::ostream& os = out.get();
    os << "strategy,N,L,d,r,kdiv,trials,seed,cancellation,mean_delay_s,stderr_s,min_delay_s\n";

    int rows = 0;
    for (const std::string& name : cfg.strategies) {
        const apcc::StrategyKind kind = parse_strategy(name);
        if (kind == apcc::StrategyKind::LccMmc && cfg.l > 0) {
            throw apcc::InvalidArgument("lcc-mmc cannot preserve privacy; use --l 0");
        }
        const int cap = strategy_kdiv_cap(cfg, kind);
        const int lo = std::max(1, cfg.kdivMin);
        const int hi = cfg.kdivMax > 0 ? std::min(cfg.kdivMax, cap) : cap;
        for (int kdiv = lo; kdiv <= hi; ++kdiv) {
            apcc::StrategyConfig sim;
            sim.kind = kind;
            sim.workers = cfg.n;
            sim.collusion = cfg.l;
            sim.degree = cfg.d;
            bool cancellation = false;
            if (kind == apcc::StrategyKind::Apcc) {
                const int totalK = cfg.r * kdiv;
                apcc::OptimModel model = make_optim_model(cfg, totalK);
                apcc::PartitionSolution plan;
                try {
                    plan = apcc::optimize_partition(model);
                } catch (const apcc::Error&) {
                    continue;  // this division is infeasible for the partitioner
                }
                sim.plan = apcc::make_plan(totalK, plan.setSizes);
                sim.cancellation = cfg.cancel;
                cancellation = cfg.cancel;
            } else {
                sim.divisions = apcc::parity_divisions(kind, kdiv, cfg.r);
                sim.rounds = cfg.r;
                if (kind == apcc::StrategyKind::Bacc) {
                    sim.baccThreshold = cfg.d * (kdiv + cfg.l - 1) + 1;
                }
            }
            apcc::DelayModel delay;
            delay.mu0 = cfg.mu0;
            delay.a0 = cfg.a0;
            delay.samplingMode = sampling;
            delay.divisions = apcc::parity_divisions(kind, kdiv, cfg.r);

            const apcc::SimOutcome outcome =
                apcc::monte_carlo(sim, delay, cfg.trials, cfg.seed);
            const double minDelay =
                *std::min_element(outcome.trialDelays.begin(), outcome.trialDelays.end());

            os << name << ',' << cfg.n << ',' << cfg.l << ',' << cfg.d << ',' << cfg.r << ','
               << kdiv << ',' << cfg.trials << ',' << cfg.seed << ','
               << (cancellation ? 1 : 0) << ',' << format_double(outcome.mean) << ','
               << format_double(outcome.stderrMean) << ',' << format_double(minDelay) << "\n";
            ++rows;
        }
    }
    if (rows == 0) {
        throw apcc::InfeasibleModel("no feasible (strategy, kdiv) combination in the sweep");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// demo: distributed linear regression via coded gradient computation
// ---------------------------------------------------------------------------

int cmd_demo(const ExperimentConfig& cfg) {
    const int d = 2;  // f(D) = D^T D w is quadratic in D
    const int p = cfg.demoRows;
    const int q = cfg.demoCols;
    if (p % cfg.k != 0) {
        throw apcc::InvalidArgument("demo-rows must be divisible by k");
    }
    if (p > 512 || q > 32) throw apcc::InvalidArgument("demo instance too large");

    apcc::Rng rng(cfg.seed);
    auto randn = [&rng]() {
        // sum of uniforms is close enough to normal for synthetic data
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += apcc::uniform_sym(rng);
        return s * 0.5;
    };

    apcc::MatrixBlock features(p, q);
    for (double& v : features.data) v = randn();
    apcc::MatrixBlock trueWeights(q, 1);
    for (double& v : trueWeights.data) v = randn();
    apcc::MatrixBlock labels = apcc::matmul(features, trueWeights);
    for (double& v : labels.data) v += 0.01 * randn();

    // Partition plan for the K row blocks.
    ExperimentConfig partCfg = cfg;
    partCfg.d = d;
    const apcc::OptimModel model = make_optim_model(partCfg, cfg.k);
    const apcc::PartitionSolution part = apcc::optimize_partition(model);
    const apcc::PartitionPlan plan = apcc::make_plan(cfg.k, part.setSizes);

    // Row blocks in set-major order.
    const int blockRows = p / cfg.k;
    std::vector<std::vector<apcc::MatrixBlock>> setData(static_cast<std::size_t>(plan.r));
    int nextRow = 0;
    for (int i = 0; i < plan.r; ++i) {
        for (int j = 0; j < plan.setSizes[i]; ++j) {
            apcc::MatrixBlock block(blockRows, q);
            for (int rr = 0; rr < blockRows; ++rr)
                for (int cc = 0; cc < q; ++cc) block.at(rr, cc) = features.at(nextRow + rr, cc);
            setData[i].push_back(std::move(block));
            nextRow += blockRows;
        }
    }

    const apcc::CodecMode mode =
        cfg.l == 0 ? apcc::CodecMode::Uncoded : apcc::CodecMode::Accurate;
    std::vector<apcc::CodecContext> contexts;
    std::vector<std::vector<apcc::EncodedShare>> shares(static_cast<std::size_t>(plan.r));
    for (int i = 0; i < plan.r; ++i) {
        contexts.push_back(apcc::make_context(i, plan.setSizes[i], cfg.l, cfg.n, d, mode));
        shares[i] = apcc::encode_set(contexts[i], setData[i], rng);
    }

    const apcc::MatrixBlock precomputed = apcc::matmul(apcc::transpose(features), labels);
    apcc::MatrixBlock weights(q, 1);  // zero start

    json report;
    report["plan"] = part.setSizes;
    report["mode"] = cfg.l == 0 ? "uncoded" : "accurate";
    report["sample_share"] = json::parse(apcc::to_json(shares[0][0]));
    json iterations = json::array();
    double maxDeviation = 0.0;

    for (int iter = 0; iter < cfg.demoIters; ++iter) {
        // Direct gradient for reference.
        apcc::MatrixBlock gram = apcc::matmul(apcc::transpose(features),
                                              apcc::matmul(features, weights));
        apcc::MatrixBlock directGrad = gram - precomputed;
        directGrad *= 2.0 / p;

        // Coded gradient: each worker returns share^T share w per set; the
        // master decodes each set from the first threshold-many arrivals.
        apcc::MatrixBlock codedSum(q, 1);
        for (int i = 0; i < plan.r; ++i) {
            std::vector<apcc::ReturnedResult> results;
            results.reserve(shares[i].size());
            for (const apcc::EncodedShare& share : shares[i]) {
                apcc::MatrixBlock value = apcc::matmul(
                    apcc::transpose(share.payload), apcc::matmul(share.payload, weights));
                results.push_back(apcc::ReturnedResult{share.setIndex, share.workerIndex,
                                                       share.evalPoint, std::move(value)});
            }
            // Random arrival order.
            for (std::size_t a = results.size(); a > 1; --a) {
                const std::size_t b = static_cast<std::size_t>(apcc::uniform01(rng) * a);
                std::swap(results[a - 1], results[std::min(b, a - 1)]);
            }
            const std::vector<apcc::MatrixBlock> decoded =
                apcc::decode_set(contexts[i], results, apcc::CodecMode::Accurate);
            for (const apcc::MatrixBlock& blockResult : decoded) codedSum += blockResult;
        }
        apcc::MatrixBlock codedGrad = codedSum - precomputed;
        codedGrad *= 2.0 / p;

        const double deviation = apcc::relative_error(codedGrad, directGrad);
        maxDeviation = std::max(maxDeviation, deviation);

        apcc::MatrixBlock step = codedGrad;
        step *= cfg.demoEta;
        const double stepNorm = apcc::max_abs(step);
        weights.axpy(-1.0, step);

        apcc::MatrixBlock residual = apcc::matmul(features, weights) - labels;
        double loss = 0.0;
        for (double v : residual.data) loss += v * v;

        iterations.push_back(json{{"iteration", iter},
                                  {"grad_rel_err", deviation},
                                  {"weight_update_max", stepNorm},
                                  {"loss", loss}});
    }

    report["iterations"] = iterations;
    report["max_grad_rel_err"] = maxDeviation;
    report["final_loss"] = iterations.empty() ? 0.0 : iterations.back()["loss"].get<double>();

    OutputStream out(cfg.out);
    out.get() << report.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// report-costs
// ---------------------------------------------------------------------------

int cmd_report_costs(const ExperimentConfig& cfg) {
    const int kdiv = cfg.k / cfg.r;
    if (cfg.k % cfg.r != 0) {
        throw apcc::InvalidArgument("k must be divisible by r for the cost comparison");
    }
    const int apccFeedback = cfg.d * (cfg.k + cfg.r * cfg.l - cfg.r) + cfg.r;
    const int lccFeedbackPerSet = cfg.d * (kdiv + cfg.l - 1) + 1;

    OutputStream out(cfg.out);
    std::ostream& os = out.get();
    os << "metric,apcc,lcc\n";
    os << "input_units_per_worker," << format_double(static_cast<double>(cfg.r) / cfg.k) << ','
       << format_double(1.0 / kdiv) << "\n";
    os << "input_units_total," << format_double(static_cast<double>(cfg.r) * cfg.n / cfg.k)
       << ',' << format_double(static_cast<double>(cfg.n) / kdiv) << "\n";
    os << "feedback_results," << apccFeedback << ',' << cfg.r * lccFeedbackPerSet << "\n";
    os << "encode_ops," << cfg.n * cfg.r << ',' << cfg.n << "\n";
    os << "decode_ops," << cfg.k << ',' << kdiv << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coded distributed computing with hierarchical task partitioning"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string configPath;

    // Track which flags were given so config-file values only fill the gaps.
    std::map<std::string, bool> given;
    auto opt = [&](CLI::App* cmd, const std::string& flag, auto& target, const char* help) {
        const std::string key = flag.substr(2);
        given.emplace(key, false);
        return cmd->add_option(flag, target, help)->each([&given, key](const std::string&) {
            given[key] = true;
        });
    };

    std::vector<CLI::App*> commands;
    CLI::App* optimize = app.add_subcommand("optimize", "Solve the task partitioning problem");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo delay sweep as CSV");
    CLI::App* demo = app.add_subcommand("demo", "Coded linear regression walkthrough");
    CLI::App* reportCosts =
        app.add_subcommand("report-costs", "Communication and operation cost table");
    commands = {optimize, simulate, demo, reportCosts};

    for (CLI::App* cmd : commands) {
        opt(cmd, "--n", cfg.n, "Number of workers");
        opt(cmd, "--l", cfg.l, "Colluding workers tolerated");
        opt(cmd, "--d", cfg.d, "Polynomial degree of the workload");
        opt(cmd, "--r", cfg.r, "Number of partitioned sets");
        opt(cmd, "--k", cfg.k, "Total subtask count (optimize/demo/report-costs)");
        opt(cmd, "--kdiv-min", cfg.kdivMin, "Smallest per-strategy division K' to sweep");
        opt(cmd, "--kdiv-max", cfg.kdivMax, "Largest division K' to sweep (0 = all feasible)");
        opt(cmd, "--a0", cfg.a0, "Entire-task minimum time, seconds");
        opt(cmd, "--mu0", cfg.mu0, "Entire-task rate, 1/seconds");
        opt(cmd, "--trials", cfg.trials, "Monte Carlo trials");
        opt(cmd, "--seed", cfg.seed, "Master seed");
        given.emplace("cancel", false);
        cmd->add_flag("--cancel,!--no-cancel", cfg.cancel, "Cancel completed sets")
            ->each([&given](const std::string&) { given["cancel"] = true; });
        given.emplace("strategy", false);
        cmd->add_option("--strategy", cfg.strategies, "Strategy (repeatable)")
            ->each([&given](const std::string&) { given["strategy"] = true; });
        opt(cmd, "--mode", cfg.mode, "Sampling mode: persistent|iid");
        opt(cmd, "--out", cfg.out, "Output path, - for stdout");
        cmd->add_option("--config", configPath, "JSON config file; flags win");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!configPath.empty()) apply_config_file(configPath, cfg, given);
        if (cfg.strategies.empty()) cfg.strategies = {"apcc", "lcc"};
        if (cfg.n < 1 || cfg.d < 1 || cfg.r < 1 || cfg.k < 1 || cfg.l < 0) {
            throw apcc::InvalidArgument("dimensions must be positive (l >= 0)");
        }
        if (cfg.a0 <= 0.0 || cfg.mu0 <= 0.0) {
            throw apcc::InvalidArgument("a0 and mu0 must be positive");
        }
        if (cfg.trials < 1) throw apcc::InvalidArgument("trials must be >= 1");
        parse_mode(cfg.mode);

        if (optimize->parsed()) return cmd_optimize(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (demo->parsed()) return cmd_demo(cfg);
        if (reportCosts->parsed()) return cmd_report_costs(cfg);
        return 1;
    } catch (const apcc::InfeasibleModel& e) {
        std::cerr << "infeasible configuration: " << e.what() << "\n";
        return 2;
    } catch (const apcc::InfeasibleSet& e) {
        std::cerr << "infeasible configuration: " << e.what() << "\n";
        return 2;
    } catch (const apcc::InfeasibleThreshold& e) {
        std::cerr << "infeasible configuration: " << e.what() << "\n";
        return 2;
    } catch (const apcc::InvalidArgument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
