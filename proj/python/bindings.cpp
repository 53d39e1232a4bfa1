#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "delayfp/error.hpp"
#include "delayfp/harness.hpp"

namespace py = pybind11;
using namespace delayfp;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace {

void bind_codebook(py::module_& m) {
  py::class_<FingerprintCode>(m, "FingerprintCode")
      .def_readonly("group_id", &FingerprintCode::group_id)
      .def_readonly("samples", &FingerprintCode::samples)
      .def_readonly("seed", &FingerprintCode::seed);

  py::class_<SyncCode>(m, "SyncCode")
      .def_readonly("samples", &SyncCode::samples)
      .def_readonly("base_delay", &SyncCode::base_delay)
      .def_readonly("seed", &SyncCode::seed);

  py::class_<Codebook>(m, "Codebook")
      .def_readonly("codes", &Codebook::codes)
      .def_readonly("sync", &Codebook::sync)
      .def_readonly("n", &Codebook::n)
      .def_readonly("epsilon_orth", &Codebook::epsilon_orth)
      .def_readonly("seed", &Codebook::seed)
      .def_property_readonly("groups", &Codebook::groups)
      .def("hash", [](const Codebook& cb) { return codebook_hash(cb); });

  m.def("generate_codebook", &generate_codebook, py::arg("groups"), py::arg("n"), py::arg("seed"),
        py::arg("epsilon_orth") = kDefaultEpsilonOrth);
  m.def("max_cyclic_crosscorr",
        [](const std::vector<double>& a, const std::vector<double>& b) { return max_cyclic_crosscorr(a, b); });
  m.def("save_codebook", &save_codebook, py::arg("path"), py::arg("codebook"));
  m.def("load_codebook", &load_codebook, py::arg("path"));
}

void bind_assignment(py::module_& m) {
  py::class_<SchemeParams>(m, "SchemeParams")
      .def(py::init<>())
      .def_readwrite("users", &SchemeParams::users)
      .def_readwrite("groups", &SchemeParams::groups)
      .def_readwrite("per_group", &SchemeParams::per_group)
      .def_readwrite("frame", &SchemeParams::frame)
      .def_readwrite("delay_spacing", &SchemeParams::delay_spacing)
      .def_readwrite("alpha", &SchemeParams::alpha)
      .def("validate", &SchemeParams::validate)
      .def("delay", &SchemeParams::delay);

  py::class_<UserAssignment>(m, "UserAssignment")
      .def_readonly("user", &UserAssignment::user)
      .def_readonly("group", &UserAssignment::group)
      .def_readonly("delay_index", &UserAssignment::delay_index)
      .def_readonly("delay", &UserAssignment::delay);

  m.def("user_to_params", &user_to_params, py::arg("user"), py::arg("params"));
  m.def("params_to_user", &params_to_user, py::arg("group"), py::arg("delay_index"), py::arg("params"));
  m.def("delay_to_index", &delay_to_index, py::arg("detected_delay"), py::arg("params"),
        py::arg("tol") = kDefaultDelayTolerance);
}

void bind_signal(py::module_& m) {
  py::class_<Signal>(m, "Signal")
      .def(py::init<>())
      .def(py::init([](std::vector<double> samples, int rate) { return Signal{std::move(samples), rate}; }),
           py::arg("samples"), py::arg("sample_rate") = 44100)
      .def_readwrite("samples", &Signal::samples)
      .def_readwrite("sample_rate", &Signal::sample_rate)
      .def("__len__", &Signal::size);

  py::enum_<SynthKind>(m, "SynthKind")
      .value("noise", SynthKind::noise)
      .value("tone", SynthKind::tone)
      .value("chirp", SynthKind::chirp);

  m.def("synth_signal", &synth_signal, py::arg("kind"), py::arg("length"),
        py::arg("sample_rate") = 44100, py::arg("seed") = 0);
  m.def("read_wav", [](const std::string& path, bool mixdown) { return read_wav(path, {mixdown}); },
        py::arg("path"), py::arg("mixdown") = false);
  m.def("write_wav", &write_wav, py::arg("signal"), py::arg("path"));
}

void bind_embedding_and_attacks(py::module_& m) {
  py::enum_<Scheme>(m, "Scheme").value("original", Scheme::original).value("improved", Scheme::improved);

  m.def("embed_frame_original",
        [](const std::vector<double>& x, const FingerprintCode& code, int delay, double alpha) {
          return embed_frame_original(x, code, delay, alpha);
        },
        py::arg("frame"), py::arg("code"), py::arg("delay"), py::arg("alpha"));
  m.def("embed_frame_improved",
        [](const std::vector<double>& x, const FingerprintCode& code, int delay, const SyncCode& sync,
           double alpha) { return embed_frame_improved(x, code, delay, sync, alpha); },
        py::arg("frame"), py::arg("code"), py::arg("delay"), py::arg("sync"), py::arg("alpha"));
  m.def("embed_stream",
        [](const Signal& x, int user, Scheme scheme, const SchemeParams& params, const Codebook& cb) {
          return embed_stream(x, {user, scheme, params}, cb);
        },
        py::arg("signal"), py::arg("user"), py::arg("scheme"), py::arg("params"), py::arg("codebook"));

  py::enum_<AttackKind>(m, "AttackKind")
      .value("none", AttackKind::none)
      .value("crop", AttackKind::crop)
      .value("shift", AttackKind::shift);
  py::enum_<MinMaxMode>(m, "MinMaxMode")
      .value("min", MinMaxMode::min)
      .value("max", MinMaxMode::max)
      .value("midpoint", MinMaxMode::midpoint);

  py::class_<AttackSpec>(m, "AttackSpec")
      .def(py::init([](AttackKind kind, std::size_t amount, std::size_t offset) {
             return AttackSpec{kind, amount, offset};
           }),
           py::arg("kind") = AttackKind::none, py::arg("amount") = 0, py::arg("offset") = 0)
      .def_readwrite("kind", &AttackSpec::kind)
      .def_readwrite("amount", &AttackSpec::amount)
      .def_readwrite("offset", &AttackSpec::offset);

  m.def("crop", &crop, py::arg("signal"), py::arg("amount"), py::arg("offset") = 0);
  m.def("time_shift", &time_shift, py::arg("signal"), py::arg("amount"), py::arg("offset") = 0);
  m.def("apply_attack", &apply_attack, py::arg("signal"), py::arg("spec"));
  m.def("collude_average", [](const std::vector<Signal>& copies) { return collude_average(copies); });
  m.def("collude_minmax",
        [](const std::vector<Signal>& copies, MinMaxMode mode) { return collude_minmax(copies, mode); },
        py::arg("copies"), py::arg("mode"));
}

void bind_detector(py::module_& m) {
  m.attr("SYNC_CODE_ID") = kSyncCodeId;

  py::class_<CorrelationProfile>(m, "CorrelationProfile")
      .def_readonly("code_id", &CorrelationProfile::code_id)
      .def_readonly("values", &CorrelationProfile::values);

  py::class_<ThresholdPolicy>(m, "ThresholdPolicy")
      .def(py::init<>())
      .def_readwrite("kappa", &ThresholdPolicy::kappa)
      .def_readwrite("floor_abs", &ThresholdPolicy::floor_abs)
      .def_readwrite("tolerance", &ThresholdPolicy::tolerance)
      .def("threshold", [](const ThresholdPolicy& p, const std::vector<double>& v) { return p.threshold(v); });

  py::class_<Peak>(m, "Peak").def_readonly("lag", &Peak::lag).def_readonly("score", &Peak::score);

  py::class_<DetectionHit>(m, "DetectionHit")
      .def_readonly("group_id", &DetectionHit::group_id)
      .def_readonly("detected_delay", &DetectionHit::detected_delay)
      .def_readonly("corrected_delay", &DetectionHit::corrected_delay)
      .def_readonly("score", &DetectionHit::score)
      .def_readonly("user", &DetectionHit::user);

  py::class_<TraceReport>(m, "TraceReport")
      .def_readonly("scheme", &TraceReport::scheme)
      .def_readonly("sync_detected_delay", &TraceReport::sync_detected_delay)
      .def_readonly("sync_missing", &TraceReport::sync_missing)
      .def_readonly("offset", &TraceReport::offset)
      .def_readonly("hits", &TraceReport::hits)
      .def_readonly("traced_users", &TraceReport::traced_users);

  m.def("fold_frames", [](const std::vector<double>& y, int n) { return fold_frames(y, n); });
  m.def("correlate_all_lags",
        [](const std::vector<double>& acc, const std::vector<double>& code, int code_id) {
          return correlate_all_lags(acc, code, code_id);
        },
        py::arg("accumulator"), py::arg("code"), py::arg("code_id") = 0);
  m.def("find_peaks", &find_peaks, py::arg("profile"), py::arg("policy") = ThresholdPolicy{});
  m.def("detect_original", &detect_original, py::arg("signal"), py::arg("codebook"), py::arg("params"),
        py::arg("policy") = ThresholdPolicy{});
  m.def("detect_improved", &detect_improved, py::arg("signal"), py::arg("codebook"), py::arg("params"),
        py::arg("policy") = ThresholdPolicy{});
  m.def("_trace_json", [](const TraceReport& r) { return to_json(r).dump(); });
}

void bind_harness(py::module_& m) {
  py::enum_<Metric>(m, "Metric").value("exact_set", Metric::exact_set).value("any_colluder", Metric::any_colluder);
  py::enum_<UserSelection>(m, "UserSelection")
      .value("random", UserSelection::random)
      .value("cycle", UserSelection::cycle);
  py::enum_<AttackPosition>(m, "AttackPosition")
      .value("head", AttackPosition::head)
      .value("random_offset", AttackPosition::random_offset);

  py::class_<InputSpec>(m, "InputSpec")
      .def(py::init<>())
      .def_readwrite("wav_path", &InputSpec::wav_path)
      .def_readwrite("synth", &InputSpec::synth)
      .def_readwrite("length", &InputSpec::length)
      .def_readwrite("sample_rate", &InputSpec::sample_rate)
      .def_readwrite("seed", &InputSpec::seed);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("params", &ExperimentConfig::params)
      .def_readwrite("codebook_seed", &ExperimentConfig::codebook_seed)
      .def_readwrite("epsilon_orth", &ExperimentConfig::epsilon_orth)
      .def_readwrite("input", &ExperimentConfig::input)
      .def_readwrite("copies", &ExperimentConfig::copies)
      .def_readwrite("attacks", &ExperimentConfig::attacks)
      .def_readwrite("crop_fraction", &ExperimentConfig::crop_fraction)
      .def_readwrite("amount_min", &ExperimentConfig::amount_min)
      .def_readwrite("amount_max", &ExperimentConfig::amount_max)
      .def_readwrite("position", &ExperimentConfig::position)
      .def_readwrite("colluders", &ExperimentConfig::colluders)
      .def_readwrite("schemes", &ExperimentConfig::schemes)
      .def_readwrite("metric", &ExperimentConfig::metric)
      .def_readwrite("selection", &ExperimentConfig::selection)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("policy", &ExperimentConfig::policy)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def("validate", &ExperimentConfig::validate)
      .def("set", &apply_config_value, py::arg("key"), py::arg("value"));

  py::class_<CopyRecord>(m, "CopyRecord")
      .def_readonly("copy_id", &CopyRecord::copy_id)
      .def_readonly("scheme", &CopyRecord::scheme)
      .def_readonly("users", &CopyRecord::users)
      .def_readonly("attack", &CopyRecord::attack)
      .def_readonly("traced", &CopyRecord::traced)
      .def_readonly("sync_missing", &CopyRecord::sync_missing)
      .def_readonly("correct", &CopyRecord::correct)
      .def_readonly("correct_exact", &CopyRecord::correct_exact)
      .def_readonly("correct_any", &CopyRecord::correct_any);

  py::class_<SchemeRate>(m, "SchemeRate")
      .def_readonly("scheme", &SchemeRate::scheme)
      .def_readonly("total", &SchemeRate::total)
      .def_readonly("correct", &SchemeRate::correct)
      .def_readonly("rate", &SchemeRate::rate)
      .def_readonly("rate_exact", &SchemeRate::rate_exact)
      .def_readonly("rate_any", &SchemeRate::rate_any);

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("config", &ExperimentReport::config)
      .def_readonly("codebook_hash", &ExperimentReport::codebook_hash)
      .def_readonly("rates", &ExperimentReport::rates)
      .def_readonly("records", &ExperimentReport::records)
      .def("rate_for", &ExperimentReport::rate_for, py::return_value_policy::reference_internal)
      .def("rows", [](const ExperimentReport& r) {
        std::ostringstream os;
        write_rows(os, r);
        return os.str();
      });

  m.def("load_experiment_config", [](const std::string& path) { return load_experiment_config(path); });
  m.def("run_experiment", &run_experiment, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("emit_report", &emit_report, py::arg("report"), py::arg("rows_path"), py::arg("summary_path"));
  m.def("_report_json", [](const ExperimentReport& r) { return to_json(r).dump(); });
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Delay-based audio fingerprinting core";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  bind_codebook(m);
  bind_assignment(m);
  bind_signal(m);
  bind_embedding_and_attacks(m);
  bind_detector(m);
  bind_harness(m);

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
