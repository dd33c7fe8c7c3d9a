// Python bindings for the coded-computing core. MatrixBlocks cross the
// boundary as 2-D numpy arrays.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apcc/codec.hpp"
#include "apcc/interp.hpp"
#include "apcc/partopt.hpp"
#include "apcc/stragsim.hpp"

namespace py = pybind11;

namespace {

apcc::MatrixBlock block_from_array(const py::array_t<double>& arr) {
    const auto buf = arr.request();
    if (buf.ndim != 2) throw apcc::InvalidArgument("expected a 2-D array");
    apcc::MatrixBlock block(static_cast<int>(buf.shape[0]), static_cast<int>(buf.shape[1]));
    auto view = arr.unchecked<2>();
    for (py::ssize_t i = 0; i < buf.shape[0]; ++i)
        for (py::ssize_t j = 0; j < buf.shape[1]; ++j)
            block.at(static_cast<int>(i), static_cast<int>(j)) = view(i, j);
    return block;
}

py::array_t<double> block_to_array(const apcc::MatrixBlock& block) {
    py::array_t<double> arr({block.rows, block.cols});
    auto view = arr.mutable_unchecked<2>();
    for (int i = 0; i < block.rows; ++i)
        for (int j = 0; j < block.cols; ++j) view(i, j) = block.at(i, j);
    return arr;
}

std::vector<apcc::MatrixBlock> blocks_from_list(const std::vector<py::array_t<double>>& arrays) {
    std::vector<apcc::MatrixBlock> blocks;
    blocks.reserve(arrays.size());
    for (const auto& a : arrays) blocks.push_back(block_from_array(a));
    return blocks;
}

std::vector<py::array_t<double>> blocks_to_list(const std::vector<apcc::MatrixBlock>& blocks) {
    std::vector<py::array_t<double>> arrays;
    arrays.reserve(blocks.size());
    for (const auto& b : blocks) arrays.push_back(block_to_array(b));
    return arrays;
}

apcc::CodecMode mode_from_string(const std::string& mode) {
    if (mode == "accurate") return apcc::CodecMode::Accurate;
    if (mode == "approximate") return apcc::CodecMode::Approximate;
    if (mode == "uncoded") return apcc::CodecMode::Uncoded;
    throw apcc::InvalidArgument("mode must be accurate, approximate or uncoded");
}

apcc::StrategyKind strategy_from_string(const std::string& name) {
    if (name == "apcc") return apcc::StrategyKind::Apcc;
    if (name == "lcc") return apcc::StrategyKind::Lcc;
    if (name == "lcc-mmc") return apcc::StrategyKind::LccMmc;
    if (name == "bacc") return apcc::StrategyKind::Bacc;
    throw apcc::InvalidArgument("unknown strategy " + name);
}

apcc::OptimModel model_from_kwargs(int n, int k, int l, int d, int r, double mu, double a,
                                   bool cancellation, const std::string& thresholds) {
    apcc::OptimModel m;
    m.workers = n;
    m.totalK = k;
    m.collusion = l;
    m.degree = d;
    m.sets = r;
    m.mu = mu;
    m.a = a;
    m.cancellation = cancellation;
    if (thresholds == "coded") {
        m.thresholdKind = apcc::ThresholdKind::Coded;
    } else if (thresholds == "uncoded") {
        m.thresholdKind = apcc::ThresholdKind::Uncoded;
    } else {
        throw apcc::InvalidArgument("thresholds must be coded or uncoded");
    }
    return m;
}

}  // namespace

PYBIND11_MODULE(_apcc, m) {
    m.doc() = "Privacy-preserving coded computing with hierarchical task partitioning";

    py::register_exception<apcc::InvalidArgument>(m, "InvalidArgumentError",
                                                  PyExc_ValueError);
    static py::exception<apcc::Error> apccError(m, "ApccError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const apcc::InvalidArgument&) {
            throw;  // handled by the registration above
        } catch (const apcc::Error& e) {
            apccError(e.what());
        }
    });

    // ---- interpolation kernels ----
    m.def(
        "chebyshev_nodes",
        [](int count, const std::string& kind) {
            if (kind == "first")
                return apcc::chebyshev_nodes(count, apcc::NodeKind::ChebyshevFirst).nodes;
            if (kind == "second")
                return apcc::chebyshev_nodes(count, apcc::NodeKind::ChebyshevSecond).nodes;
            throw apcc::InvalidArgument("kind must be first or second");
        },
        py::arg("count"), py::arg("kind") = "first");

    m.def(
        "polynomial_weights",
        [](const std::vector<double>& nodes) {
            return apcc::polynomial_weights(apcc::make_node_set(nodes)).weights;
        },
        py::arg("nodes"));

    m.def(
        "bary_eval",
        [](const std::vector<double>& nodes, const std::vector<double>& weights,
           const std::vector<double>& values, double x) {
            apcc::NodeSet ns = apcc::make_node_set(nodes);
            apcc::BaryWeights bw{weights};
            return apcc::bary_eval(ns, bw, std::span<const double>(values), x);
        },
        py::arg("nodes"), py::arg("weights"), py::arg("values"), py::arg("x"));

    // ---- codec ----
    py::class_<apcc::CodecContext>(m, "CodecContext")
        .def_readonly("set_index", &apcc::CodecContext::setIndex)
        .def_readonly("k_set", &apcc::CodecContext::kSet)
        .def_readonly("collusion", &apcc::CodecContext::collusion)
        .def_readonly("workers", &apcc::CodecContext::workers)
        .def_readonly("degree", &apcc::CodecContext::degree)
        .def_property_readonly("alpha_nodes",
                               [](const apcc::CodecContext& c) { return c.alphaNodes.nodes; })
        .def_property_readonly("beta_nodes",
                               [](const apcc::CodecContext& c) { return c.betaNodes.nodes; })
        .def_property_readonly("threshold",
                               [](const apcc::CodecContext& c) { return recovery_threshold(c); });

    m.def(
        "make_context",
        [](int setIndex, int kSet, int collusion, int workers, int degree,
           const std::string& mode, int approxThreshold) {
            return apcc::make_context(setIndex, kSet, collusion, workers, degree,
                                      mode_from_string(mode), approxThreshold);
        },
        py::arg("set_index"), py::arg("k_set"), py::arg("collusion"), py::arg("workers"),
        py::arg("degree"), py::arg("mode") = "accurate", py::arg("approx_threshold") = 0);

    m.def(
        "encode_set",
        [](const apcc::CodecContext& ctx, const std::vector<py::array_t<double>>& data,
           std::uint64_t seed) {
            apcc::Rng rng(seed);
            const auto shares = apcc::encode_set(ctx, blocks_from_list(data), rng);
            py::list out;
            for (const auto& s : shares) {
                py::dict d;
                d["set"] = s.setIndex;
                d["worker"] = s.workerIndex;
                d["x"] = s.evalPoint;
                d["payload"] = block_to_array(s.payload);
                out.append(d);
            }
            return out;
        },
        py::arg("ctx"), py::arg("data"), py::arg("seed") = 0);

    m.def(
        "decode_set",
        [](const apcc::CodecContext& ctx, const std::vector<py::dict>& results,
           const std::string& mode) {
            std::vector<apcc::ReturnedResult> rs;
            rs.reserve(results.size());
            for (const auto& d : results) {
                apcc::ReturnedResult r;
                r.setIndex = d.contains("set") ? d["set"].cast<int>() : ctx.setIndex;
                r.workerIndex = d["worker"].cast<int>();
                r.evalPoint = d["x"].cast<double>();
                r.payload = block_from_array(d["payload"].cast<py::array_t<double>>());
                rs.push_back(std::move(r));
            }
            return blocks_to_list(apcc::decode_set(ctx, rs, mode_from_string(mode)));
        },
        py::arg("ctx"), py::arg("results"), py::arg("mode") = "accurate");

    m.def(
        "padding_coefficient_matrix",
        [](const apcc::CodecContext& ctx, const std::vector<int>& subset) {
            return block_to_array(apcc::padding_coefficient_matrix(ctx, subset));
        },
        py::arg("ctx"), py::arg("worker_subset"));

    m.def("recovery_threshold", &apcc::recovery_threshold, py::arg("ctx"));
    m.def(
        "make_plan",
        [](int totalK, const std::vector<int>& setSizes) {
            const apcc::PartitionPlan plan = apcc::make_plan(totalK, setSizes);
            return py::make_tuple(plan.r, plan.setSizes);
        },
        py::arg("total_k"), py::arg("set_sizes"));
    m.def("encoding_rate", &apcc::encoding_rate, py::arg("k"), py::arg("n"), py::arg("s"));
    m.def(
        "capacity",
        [](int n, int s, int l, int d) {
            const auto c = apcc::capacity(n, s, l, d);
            return py::make_tuple(c.value, c.feasible);
        },
        py::arg("n"), py::arg("s"), py::arg("l"), py::arg("d"));
    m.def(
        "max_divisions",
        [](int n, int s, int l, int d) {
            const auto c = apcc::max_divisions(n, s, l, d);
            return py::make_tuple(c.value, c.feasible);
        },
        py::arg("n"), py::arg("s"), py::arg("l"), py::arg("d"));
    m.def("approx_error_bound", &apcc::approx_error_bound, py::arg("n"), py::arg("results"),
          py::arg("second_deriv_norm"), py::arg("first_deriv_norm"));

    m.def(
        "multilinearize",
        [](const std::function<py::array_t<double>(py::array_t<double>)>& f, int degree) {
            apcc::MultilinearFn fn = apcc::multilinearize(
                [f](const apcc::MatrixBlock& b) { return block_from_array(f(block_to_array(b))); },
                degree);
            return std::function<py::array_t<double>(std::vector<py::array_t<double>>)>(
                [fn](const std::vector<py::array_t<double>>& args) {
                    return block_to_array(fn(blocks_from_list(args)));
                });
        },
        py::arg("f"), py::arg("degree"));

    // ---- task partitioning ----
    py::class_<apcc::PartitionSolution>(m, "PartitionSolution")
        .def_readonly("set_sizes", &apcc::PartitionSolution::setSizes)
        .def_readonly("objective", &apcc::PartitionSolution::objective)
        .def_readonly("per_set_times", &apcc::PartitionSolution::perSetTimes);

    const auto modelArgs =
        [](py::module_& mod, const char* name, auto fn) {
            mod.def(name, fn, py::arg("n"), py::arg("k"), py::arg("l"), py::arg("d"), py::arg("r"),
                    py::arg("mu"), py::arg("a"), py::arg("cancellation") = false,
                    py::arg("thresholds") = "coded");
        };

    modelArgs(m, "solve_relaxed",
              [](int n, int k, int l, int d, int r, double mu, double a, bool cancellation,
                 const std::string& thresholds) {
                  const auto sol = apcc::solve_relaxed(
                      model_from_kwargs(n, k, l, d, r, mu, a, cancellation, thresholds));
                  return py::make_tuple(sol.zStar, sol.realSizes);
              });
    modelArgs(m, "brute_force",
              [](int n, int k, int l, int d, int r, double mu, double a, bool cancellation,
                 const std::string& thresholds) {
                  return apcc::brute_force(
                      model_from_kwargs(n, k, l, d, r, mu, a, cancellation, thresholds));
              });
    modelArgs(m, "optimize_partition",
              [](int n, int k, int l, int d, int r, double mu, double a, bool cancellation,
                 const std::string& thresholds) {
                  return apcc::optimize_partition(
                      model_from_kwargs(n, k, l, d, r, mu, a, cancellation, thresholds));
              });
    m.def(
        "mvd",
        [](int n, int k, int l, int d, int r, double mu, double a, bool cancellation,
           const std::string& thresholds, const std::vector<int>& initial) {
            return apcc::mvd(model_from_kwargs(n, k, l, d, r, mu, a, cancellation, thresholds),
                             initial);
        },
        py::arg("n"), py::arg("k"), py::arg("l"), py::arg("d"), py::arg("r"), py::arg("mu"),
        py::arg("a"), py::arg("cancellation"), py::arg("thresholds"), py::arg("initial"));
    m.def(
        "set_time",
        [](int kSet, int setIndex, int n, int k, int l, int d, int r, double mu, double a,
           bool cancellation, const std::string& thresholds) {
            return apcc::set_time(kSet, setIndex,
                                  model_from_kwargs(n, k, l, d, r, mu, a, cancellation,
                                                    thresholds));
        },
        py::arg("k_set"), py::arg("set_index"), py::arg("n"), py::arg("k"), py::arg("l"),
        py::arg("d"), py::arg("r"), py::arg("mu"), py::arg("a"),
        py::arg("cancellation") = false, py::arg("thresholds") = "coded");
    m.def(
        "round_and_repair",
        [](const std::vector<double>& realSizes, int totalK, int n, int k, int l, int d,
           int r, double mu, double a, bool cancellation, const std::string& thresholds) {
            return apcc::round_and_repair(
                realSizes, totalK,
                model_from_kwargs(n, k, l, d, r, mu, a, cancellation, thresholds));
        },
        py::arg("real_sizes"), py::arg("total_k"), py::arg("n"), py::arg("k"), py::arg("l"),
        py::arg("d"), py::arg("r"), py::arg("mu"), py::arg("a"),
        py::arg("cancellation") = false, py::arg("thresholds") = "coded");

    // ---- straggler simulation ----
    py::class_<apcc::SimOutcome>(m, "SimOutcome")
        .def_readonly("trial_delays", &apcc::SimOutcome::trialDelays)
        .def_readonly("per_set_completion", &apcc::SimOutcome::perSetCompletion)
        .def_readonly("mean", &apcc::SimOutcome::mean)
        .def_readonly("stderr", &apcc::SimOutcome::stderrMean);

    m.def(
        "monte_carlo",
        [](const std::string& strategy, int n, int l, int d, int kdiv, int r,
           const std::vector<int>& plan, bool cancellation, int baccThreshold,
           const std::vector<int>& thresholds, double mu0, double a0,
           const std::string& sampling, int trials, std::uint64_t seed) {
            apcc::StrategyConfig cfg;
            cfg.kind = strategy_from_string(strategy);
            cfg.workers = n;
            cfg.collusion = l;
            cfg.degree = d;
            cfg.rounds = r;
            cfg.cancellation = cancellation;
            cfg.baccThreshold = baccThreshold;
            cfg.thresholds = thresholds;
            if (cfg.kind == apcc::StrategyKind::Apcc) {
                std::vector<int> sizes = plan;
                if (sizes.empty()) throw apcc::InvalidArgument("apcc needs a plan");
                int total = 0;
                for (int s : sizes) total += s;
                cfg.plan = apcc::make_plan(total, sizes);
            } else {
                cfg.divisions = apcc::parity_divisions(cfg.kind, kdiv, r);
            }
            apcc::DelayModel model;
            model.mu0 = mu0;
            model.a0 = a0;
            model.samplingMode = sampling == "iid" ? apcc::SamplingMode::Iid
                                                   : apcc::SamplingMode::Persistent;
            model.divisions = apcc::parity_divisions(cfg.kind, kdiv, r);
            return apcc::monte_carlo(cfg, model, trials, seed);
        },
        py::arg("strategy"), py::arg("n"), py::arg("l"), py::arg("d"), py::arg("kdiv"),
        py::arg("r") = 1, py::arg("plan") = std::vector<int>{},
        py::arg("cancellation") = false, py::arg("bacc_threshold") = 0,
        py::arg("thresholds") = std::vector<int>{}, py::arg("mu0") = 0.2,
        py::arg("a0") = 0.5, py::arg("sampling") = "persistent", py::arg("trials") = 10000,
        py::arg("seed") = 12345);

    m.def(
        "sample_subtask_delay",
        [](double mu0, double a0, int divisions, std::uint64_t seed, int count) {
            apcc::DelayModel model{mu0, a0, divisions, apcc::SamplingMode::Persistent};
            apcc::Rng rng(seed);
            std::vector<double> out(static_cast<std::size_t>(count));
            for (double& v : out) v = apcc::sample_subtask_delay(model, rng);
            return out;
        },
        py::arg("mu0"), py::arg("a0"), py::arg("divisions") = 1, py::arg("seed") = 0,
        py::arg("count") = 1);

    m.def(
        "empirical_expected_results",
        [](int n, const std::vector<int>& plan, double t, int setIndex, double mu0,
           double a0, int divisions, int trials, std::uint64_t seed, int l, int d) {
            apcc::StrategyConfig cfg;
            cfg.kind = apcc::StrategyKind::Apcc;
            cfg.workers = n;
            cfg.collusion = l;
            cfg.degree = d;
            int total = 0;
            for (int s : plan) total += s;
            cfg.plan = apcc::make_plan(total, plan);
            apcc::DelayModel model{mu0, a0, divisions, apcc::SamplingMode::Persistent};
            return apcc::empirical_expected_results(cfg, model, t, setIndex, trials, seed);
        },
        py::arg("n"), py::arg("plan"), py::arg("t"), py::arg("set_index"), py::arg("mu0"),
        py::arg("a0"), py::arg("divisions") = 1, py::arg("trials") = 10000,
        py::arg("seed") = 0, py::arg("l") = 0, py::arg("d") = 1);
}
