#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/operators.h>
#include <pybind11/stl/filesystem.h>

#include "axswap/apps.hpp"
#include "axswap/metrics.hpp"
#include "axswap/table_io.hpp"
#include "axswap/tuner.hpp"

namespace py = pybind11;
using namespace axswap;

namespace {

SwapDecision make_decision(const std::optional<SwapPolicy>& policy, bool oracle) {
  if (oracle) {
    if (policy) throw std::invalid_argument("pass either a policy or oracle=True, not both");
    return OracleTag{};
  }
  if (policy) return *policy;
  return NoSwapTag{};
}

ObjectiveId objective_arg(const std::string& name) {
  const auto id = objective_from_name(name);
  if (!id) throw std::invalid_argument("unknown objective '" + name + "'");
  return *id;
}

GrayImage gray_from_array(const py::array_t<u8>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D uint8 array");
  GrayImage img = GrayImage::blank(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
  const auto view = arr.unchecked<2>();
  for (py::ssize_t r = 0; r < arr.shape(0); ++r)
    for (py::ssize_t c = 0; c < arr.shape(1); ++c) img.at(static_cast<int>(r), static_cast<int>(c)) = view(r, c);
  return img;
}

py::array_t<u8> gray_to_array(const GrayImage& img) {
  py::array_t<u8> arr({img.height, img.width});
  auto view = arr.mutable_unchecked<2>();
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) view(r, c) = img.at(r, c);
  return arr;
}

RgbImage rgb_from_array(const py::array_t<u8>& arr) {
  if (arr.ndim() != 3 || arr.shape(2) != 3) throw std::invalid_argument("expected an (h, w, 3) uint8 array");
  RgbImage img = RgbImage::blank(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
  const auto view = arr.unchecked<3>();
  for (py::ssize_t r = 0; r < arr.shape(0); ++r)
    for (py::ssize_t c = 0; c < arr.shape(1); ++c)
      for (int ch = 0; ch < 3; ++ch) img.px(static_cast<int>(r), static_cast<int>(c))[ch] = view(r, c, ch);
  return img;
}

py::array_t<u8> rgb_to_array(const RgbImage& img) {
  py::array_t<u8> arr({img.height, img.width, 3});
  auto view = arr.mutable_unchecked<3>();
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      for (int ch = 0; ch < 3; ++ch) view(r, c, ch) = img.px(r, c)[ch];
  return arr;
}

std::vector<FxComplex> signal_from_array(const py::array_t<std::complex<double>>& arr) {
  if (arr.ndim() != 1) throw std::invalid_argument("expected a 1-D complex array");
  std::vector<FxComplex> out(static_cast<std::size_t>(arr.shape(0)));
  const auto view = arr.unchecked<1>();
  for (py::ssize_t i = 0; i < arr.shape(0); ++i)
    out[static_cast<std::size_t>(i)] = {fx_from_real(view(i).real()), fx_from_real(view(i).imag())};
  return out;
}

py::array_t<std::complex<double>> signal_to_array(const std::vector<FxComplex>& sig) {
  py::array_t<std::complex<double>> arr(static_cast<py::ssize_t>(sig.size()));
  auto view = arr.mutable_unchecked<1>();
  for (std::size_t i = 0; i < sig.size(); ++i)
    view(static_cast<py::ssize_t>(i)) = {fx_to_real(sig[i].re), fx_to_real(sig[i].im)};
  return arr;
}

}  // namespace

PYBIND11_MODULE(axswap, m) {
  m.doc() = "Simulation and tuning toolkit for operand swapping in non-commutative approximate multipliers";

  py::enum_<Signedness>(m, "Signedness")
      .value("UNSIGNED", Signedness::Unsigned)
      .value("SIGNED", Signedness::Signed);
  py::enum_<Operand>(m, "Operand").value("A", Operand::A).value("B", Operand::B);

  py::class_<SwapPolicy>(m, "SwapPolicy")
      .def(py::init([](Operand op, int bit, int trigger) {
             return SwapPolicy{op, bit, trigger};
           }),
           py::arg("operand"), py::arg("bit"), py::arg("trigger"))
      .def_readonly("operand", &SwapPolicy::operand)
      .def_readonly("bit", &SwapPolicy::bit_index)
      .def_readonly("trigger", &SwapPolicy::trigger_value)
      .def("__repr__", [](const SwapPolicy& p) { return "SwapPolicy(" + p.describe() + ")"; })
      .def(py::self == py::self);

  py::class_<MultiplierModel>(m, "MultiplierModel")
      .def_static("exact", &MultiplierModel::exact, py::arg("width"), py::arg("signedness"))
      .def_static("truncate_operand", &MultiplierModel::truncate_operand, py::arg("width"), py::arg("signedness"),
                  py::arg("operand"), py::arg("dropped_lsbs"))
      .def_static(
          "drop_partial_products",
          [](int width, Signedness s, const std::vector<std::pair<int, int>>& dropped) {
            return MultiplierModel::drop_partial_products(width, s, PartialProductMask(width, dropped));
          },
          py::arg("width"), py::arg("signedness"), py::arg("dropped_positions"))
      .def_static("truth_table", &MultiplierModel::truth_table, py::arg("width"), py::arg("signedness"),
                  py::arg("entries"))
      .def_property_readonly("width", &MultiplierModel::width)
      .def_property_readonly("signedness", &MultiplierModel::signedness)
      .def("evaluate", &MultiplierModel::evaluate, py::arg("a_raw"), py::arg("b_raw"))
      .def("operand_value", &MultiplierModel::operand_value)
      .def("product_value", &MultiplierModel::product_value)
      .def("__repr__", [](const MultiplierModel& mm) { return "MultiplierModel(" + mm.describe() + ")"; });

  m.def("is_commutative", &is_commutative, py::arg("model"), py::arg("force_exhaustive") = false);
  m.def(
      "apply_policy",
      [](const SwapPolicy& p, u32 a, u32 b, int width) {
        const RawPair out = apply_policy(p, a, b, width);
        return std::make_pair(out.a, out.b);
      },
      py::arg("policy"), py::arg("a_raw"), py::arg("b_raw"), py::arg("width"));

  m.def("dump_truth_table",
        py::overload_cast<const MultiplierModel&, const std::filesystem::path&>(&dump_truth_table), py::arg("model"),
        py::arg("path"));
  m.def("load_truth_table",
        py::overload_cast<const std::filesystem::path&, int, Signedness>(&load_truth_table), py::arg("path"),
        py::arg("width"), py::arg("signedness"));
  m.def("peek_axtt_header", &peek_axtt_header, py::arg("path"));

  py::class_<ErrorReport>(m, "ErrorReport")
      .def_property_readonly("mae", &ErrorReport::mae)
      .def_property_readonly("wce", [](const ErrorReport& r) { return r.wce; })
      .def_property_readonly("are", &ErrorReport::are)
      .def_property_readonly("mse", &ErrorReport::mse)
      .def_property_readonly("ep", &ErrorReport::ep)
      .def_property_readonly("n", [](const ErrorReport& r) { return r.n; })
      .def_property_readonly("are_excluded", [](const ErrorReport& r) { return r.are_excluded; })
      .def_property_readonly("err_count", [](const ErrorReport& r) { return r.err_count; })
      .def_property_readonly("sum_abs_err", [](const ErrorReport& r) { return u128_to_string(r.sum_abs_err); })
      .def_property_readonly("sum_sq_err", [](const ErrorReport& r) { return u128_to_string(r.sum_sq_err); })
      .def("to_json", [](const ErrorReport& r) { return r.to_json_string(); })
      .def(py::self == py::self);

  auto pairs_or_full = [](const MultiplierModel& model,
                          const std::optional<std::vector<std::pair<u32, u32>>>& pairs) {
    if (!pairs) return PairSource::full_space();
    std::vector<RawPair> raw;
    raw.reserve(pairs->size());
    for (auto [a, b] : *pairs) raw.push_back({a, b});
    (void)model;
    return PairSource::pairs(std::move(raw));
  };

  m.def(
      "component_metrics",
      [pairs_or_full](const MultiplierModel& model, const std::optional<SwapPolicy>& policy,
                      const std::optional<std::vector<std::pair<u32, u32>>>& pairs, unsigned threads) {
        return component_metrics(model, policy, pairs_or_full(model, pairs), threads);
      },
      py::arg("model"), py::arg("policy") = std::nullopt, py::arg("pairs") = std::nullopt, py::arg("threads") = 0);
  m.def(
      "oracle_report",
      [pairs_or_full](const MultiplierModel& model, const std::optional<std::vector<std::pair<u32, u32>>>& pairs,
                      unsigned threads) { return oracle_report(model, pairs_or_full(model, pairs), threads); },
      py::arg("model"), py::arg("pairs") = std::nullopt, py::arg("threads") = 0);

  py::class_<TuningRow>(m, "TuningRow")
      .def_readonly("policy", &TuningRow::policy)
      .def_readonly("metric", &TuningRow::metric);

  py::class_<TuningResult>(m, "TuningResult")
      .def_property_readonly("objective", [](const TuningResult& r) { return objective_name(r.objective); })
      .def_readonly("best_policy", &TuningResult::best_policy)
      .def_readonly("best_metric", &TuningResult::best_metric)
      .def_readonly("noswap_metric", &TuningResult::noswap_metric)
      .def_readonly("table", &TuningResult::table)
      .def("reduction_pct", &TuningResult::reduction_pct)
      .def("to_json", [](const TuningResult& r) { return r.to_json_string(); })
      .def("to_csv", &TuningResult::to_csv);

  m.def(
      "tune_component",
      [](const MultiplierModel& model, const std::string& objective, unsigned threads) {
        return tune_component(model, objective_arg(objective), threads);
      },
      py::arg("model"), py::arg("objective") = "mae", py::arg("threads") = 0);

  m.def(
      "heatmap",
      [](const MultiplierModel& model, const std::string& mode, const std::optional<SwapPolicy>& policy) {
        HeatmapMode hm;
        if (mode == "noswap")
          hm = HeatmapMode::NoSwap;
        else if (mode == "policy")
          hm = HeatmapMode::Policy;
        else if (mode == "oracle")
          hm = HeatmapMode::Oracle;
        else
          throw std::invalid_argument("mode must be noswap, policy or oracle");
        const auto grid = heatmap(model, hm, policy);
        const py::ssize_t side = py::ssize_t{1} << model.width();
        py::array_t<u64> arr({side, side});
        auto view = arr.mutable_unchecked<2>();
        for (py::ssize_t a = 0; a < side; ++a)
          for (py::ssize_t b = 0; b < side; ++b)
            view(a, b) = grid[static_cast<std::size_t>(a) * static_cast<std::size_t>(side) + static_cast<std::size_t>(b)];
        return arr;
      },
      py::arg("model"), py::arg("mode") = "noswap", py::arg("policy") = std::nullopt);

  // application metrics
  m.def(
      "ssim",
      [](const py::array_t<u8>& a, const py::array_t<u8>& b) {
        const GrayImage ia = gray_from_array(a), ib = gray_from_array(b);
        if (ia.width != ib.width || ia.height != ib.height) throw std::invalid_argument("image dimension mismatch");
        return ssim(ia.pixels, ib.pixels, ia.width, ia.height);
      },
      py::arg("img_a"), py::arg("img_b"));
  m.def(
      "miss_rate",
      [](const std::vector<bool>& wrong) {
        std::vector<u8> w(wrong.begin(), wrong.end());
        return miss_rate(w);
      },
      py::arg("outcomes_wrong"));
  m.def(
      "app_are",
      [](const std::vector<double>& approx, const std::vector<double>& precise) { return app_are(approx, precise); },
      py::arg("approx"), py::arg("precise"));
  m.def(
      "gain_vs_noswap",
      [](const std::vector<double>& values, const std::vector<double>& noswap, bool higher_is_better) {
        return gain_vs_noswap(values, noswap,
                              higher_is_better ? MetricOrientation::HigherBetter : MetricOrientation::LowerBetter);
      },
      py::arg("metric_values"), py::arg("noswap_values"), py::arg("higher_is_better") = false);

  // wide multiplication and Q16.16
  py::enum_<ApproxSet>(m, "ApproxSet")
      .value("ALL", ApproxSet::All)
      .value("MD_LO", ApproxSet::MdLo)
      .value("CUSTOM", ApproxSet::Custom);
  py::enum_<ShiftMode>(m, "ShiftMode").value("FIDELITY", ShiftMode::Fidelity).value("EXACT_FIT", ShiftMode::ExactFit);
  py::enum_<WidePart>(m, "WidePart")
      .value("HI", WidePart::HI)
      .value("MD1", WidePart::MD1)
      .value("MD2", WidePart::MD2)
      .value("LO", WidePart::LO);

  py::class_<WideMulConfig>(m, "WideMulConfig")
      .def_static("uniform", &WideMulConfig::uniform, py::arg("model"), py::arg("approx_set"), py::arg("shift_mode"))
      .def_static("uniform_custom", &WideMulConfig::uniform_custom, py::arg("model"), py::arg("parts"),
                  py::arg("shift_mode"))
      .def_static("exact_baseline", &WideMulConfig::exact_baseline, py::arg("half_width") = 16)
      .def_readonly("half_width", &WideMulConfig::half_width);

  m.def(
      "wide_multiply",
      [](const WideMulConfig& cfg, i64 a, i64 b, const std::optional<SwapPolicy>& policy, bool oracle) {
        return wide_multiply(cfg, a, b, make_decision(policy, oracle));
      },
      py::arg("cfg"), py::arg("a"), py::arg("b"), py::arg("policy") = std::nullopt, py::arg("oracle") = false);
  m.def(
      "fx_mul",
      [](const WideMulConfig& cfg, double x, double y, const std::optional<SwapPolicy>& policy, bool oracle) {
        return fx_to_real(fx_mul(cfg, fx_from_real(x), fx_from_real(y), make_decision(policy, oracle)));
      },
      py::arg("cfg"), py::arg("x"), py::arg("y"), py::arg("policy") = std::nullopt, py::arg("oracle") = false,
      "Q16.16 product of two reals through the configured substrate");
  m.def("fx_quantize", [](double v) { return fx_to_real(fx_from_real(v)); },
        "Round-trip a real through the Q16.16 grid");

  // benchmarks
  m.def(
      "run_sobel",
      [](const py::array_t<u8>& img, const WideMulConfig& cfg, const std::optional<SwapPolicy>& policy, bool oracle) {
        return gray_to_array(run_sobel(gray_from_array(img), cfg, make_decision(policy, oracle)));
      },
      py::arg("image"), py::arg("cfg"), py::arg("policy") = std::nullopt, py::arg("oracle") = false);
  m.def("sobel_reference",
        [](const py::array_t<u8>& img) { return gray_to_array(sobel_reference(gray_from_array(img))); });
  m.def(
      "run_kmeans",
      [](const py::array_t<u8>& img, int k, int max_iters, u64 seed, const WideMulConfig& cfg,
         const std::optional<SwapPolicy>& policy, bool oracle) {
        return rgb_to_array(run_kmeans(rgb_from_array(img), k, max_iters, seed, cfg, make_decision(policy, oracle)));
      },
      py::arg("image"), py::arg("k"), py::arg("max_iters"), py::arg("seed"), py::arg("cfg"),
      py::arg("policy") = std::nullopt, py::arg("oracle") = false);
  m.def("kmeans_reference", [](const py::array_t<u8>& img, int k, int max_iters, u64 seed) {
    return rgb_to_array(kmeans_reference(rgb_from_array(img), k, max_iters, seed));
  });
  m.def(
      "run_fft",
      [](const py::array_t<std::complex<double>>& sig, const WideMulConfig& cfg,
         const std::optional<SwapPolicy>& policy, bool oracle) {
        return signal_to_array(run_fft(signal_from_array(sig), cfg, make_decision(policy, oracle)));
      },
      py::arg("signal"), py::arg("cfg"), py::arg("policy") = std::nullopt, py::arg("oracle") = false,
      "FFT of a complex signal quantized to Q16.16; returns the Q16.16 spectrum as complex floats");

  // datasets and application-level drivers
  m.def(
      "generate_dataset",
      [](const std::string& kind, u64 seed, const std::optional<std::filesystem::path>& out_dir) {
        if (kind != "train" && kind != "test") throw std::invalid_argument("kind must be train or test");
        const Dataset ds = generate_dataset(kind == "train" ? DatasetKind::Train : DatasetKind::Test, seed);
        if (out_dir) write_dataset(ds, *out_dir);
        return dataset_manifest_json(ds);
      },
      py::arg("kind"), py::arg("seed"), py::arg("out_dir") = std::nullopt,
      "Generate a dataset (optionally writing it to a directory); returns the manifest JSON");

  auto resolve_bench = [](const std::string& name) {
    const auto id = benchmark_from_name(name);
    if (!id) throw std::invalid_argument("unknown benchmark '" + name + "'");
    return *id;
  };
  m.def(
      "score_benchmark",
      [resolve_bench](const std::string& bench, const std::string& kind, u64 seed, const WideMulConfig& cfg,
                      const std::optional<SwapPolicy>& policy, bool oracle) {
        const Dataset ds = generate_dataset(kind == "train" ? DatasetKind::Train : DatasetKind::Test, seed);
        return score_benchmark(resolve_bench(bench), ds, cfg, make_decision(policy, oracle));
      },
      py::arg("benchmark"), py::arg("dataset_kind"), py::arg("seed"), py::arg("cfg"),
      py::arg("policy") = std::nullopt, py::arg("oracle") = false);
  m.def(
      "tune_application",
      [resolve_bench](const std::string& bench, const WideMulConfig& cfg, u64 seed, unsigned threads) {
        const BenchmarkId id = resolve_bench(bench);
        return tune_application(id, cfg, benchmark_objective(id), generate_dataset(DatasetKind::Train, seed), threads);
      },
      py::arg("benchmark"), py::arg("cfg"), py::arg("seed") = 1, py::arg("threads") = 0);
}
