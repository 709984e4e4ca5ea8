// Python bindings for the core operations: bit vectors, the SEC/SECDED
// codec, majority voting, the simulated PUF model, threshold calibration,
// and the sweep driver.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pufauth/bitvec.hpp"
#include "pufauth/calibration.hpp"
#include "pufauth/hamming.hpp"
#include "pufauth/majority.hpp"
#include "pufauth/puf_model.hpp"
#include "pufauth/rng.hpp"
#include "pufauth/sweep.hpp"

namespace py = pybind11;
using namespace pufauth;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Threshold-based SRAM-PUF authentication core";

    // ---- bit vectors
    py::class_<BitVector>(m, "BitVector")
        .def(py::init<>())
        .def(py::init<std::size_t>(), py::arg("nbits"))
        .def_static("from_string", &BitVector::from_string, py::arg("bits"))
        .def_static("from_bytes", &BitVector::from_bytes, py::arg("bytes"), py::arg("nbits"))
        .def("__len__", &BitVector::size)
        .def("get", &BitVector::get, py::arg("i"))
        .def("set", &BitVector::set, py::arg("i"), py::arg("value"))
        .def("flip", &BitVector::flip, py::arg("i"))
        .def("popcount", &BitVector::popcount)
        .def("slice", &BitVector::slice, py::arg("offset"), py::arg("len"))
        .def("to_bytes", &BitVector::to_bytes)
        .def("to_string", &BitVector::to_string)
        .def("__xor__", [](const BitVector& a, const BitVector& b) { return a ^ b; })
        .def("__invert__", [](const BitVector& a) { return ~a; })
        .def("__eq__", [](const BitVector& a, const BitVector& b) { return a == b; })
        .def("__repr__", [](const BitVector& a) {
            return "BitVector(" + std::to_string(a.size()) + " bits)";
        });
    m.def("hamming_distance", &hamming_distance, py::arg("a"), py::arg("b"));
    m.def("normalized_hd", &normalized_hd, py::arg("a"), py::arg("b"));
    m.def("uniformity", &uniformity, py::arg("r"));
    m.def("partition_response", &partition_response, py::arg("r"), py::arg("block_bits"));

    // ---- Hamming SEC / SECDED codec
    py::class_<HammingVariant>(m, "HammingVariant")
        .def_static("make", &HammingVariant::make, py::arg("data_bits"), py::arg("extended"))
        .def_readonly("data_bits", &HammingVariant::data_bits)
        .def_readonly("extended", &HammingVariant::extended)
        .def("codeword_bits", &HammingVariant::codeword_bits)
        .def("parity_bits", &HammingVariant::parity_bits)
        .def("code_rate", &HammingVariant::code_rate)
        .def("name", &HammingVariant::name)
        .def("__eq__",
             [](const HammingVariant& a, const HammingVariant& b) { return a == b; })
        .def("__repr__", [](const HammingVariant& v) { return v.name(); });
    m.def("parse_variant", &parse_variant, py::arg("text"));
    m.def("all_variants", &all_variants);

    py::class_<HelperData>(m, "HelperData")
        .def_readonly("variant", &HelperData::variant)
        .def_readonly("parity_blocks", &HelperData::parity_blocks)
        .def("codeword_count", &HelperData::codeword_count);
    py::class_<DecodeReport>(m, "DecodeReport")
        .def_readonly("corrected", &DecodeReport::corrected)
        .def_readonly("clean", &DecodeReport::clean)
        .def_readonly("single_corrected", &DecodeReport::single_corrected)
        .def_readonly("double_detected", &DecodeReport::double_detected)
        .def_readonly("miscorrection_possible", &DecodeReport::miscorrection_possible)
        .def_readonly("bit_flips_applied", &DecodeReport::bit_flips_applied)
        .def("codeword_count", &DecodeReport::codeword_count);
    m.def("enroll_helper", &enroll_helper, py::arg("data"), py::arg("variant"));
    m.def("decode", &decode, py::arg("raw"), py::arg("helper"));

    // ---- temporal majority voting
    py::class_<MajorityAccumulator>(m, "MajorityAccumulator")
        .def(py::init<std::size_t, unsigned>(), py::arg("n"), py::arg("target_votes"))
        .def("accumulate", &MajorityAccumulator::accumulate, py::arg("reading"))
        .def("finalize", &MajorityAccumulator::finalize)
        .def_property_readonly("n", &MajorityAccumulator::n)
        .def_property_readonly("target_votes", &MajorityAccumulator::target_votes)
        .def_property_readonly("votes_seen", &MajorityAccumulator::votes_seen);

    // ---- simulated PUF devices
    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("unit", &Rng::unit)
        .def("bernoulli", &Rng::bernoulli, py::arg("p"));
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("a"), py::arg("b") = 0,
          py::arg("c") = 0);
    m.def("hash_string", &hash_string, py::arg("text"));

    py::class_<NoiseProfile>(m, "NoiseProfile")
        .def(py::init<>())
        .def_readwrite("fraction_unstable", &NoiseProfile::fraction_unstable)
        .def_readwrite("stable_eps", &NoiseProfile::stable_eps)
        .def_readwrite("unstable_max", &NoiseProfile::unstable_max)
        .def("validate", &NoiseProfile::validate);
    py::class_<PufDevice>(m, "PufDevice")
        .def_readonly("device_id", &PufDevice::device_id)
        .def_readonly("n_cells", &PufDevice::n_cells)
        .def_readonly("stable_value", &PufDevice::stable_value)
        .def_readonly("bias_q", &PufDevice::bias_q)
        .def_readonly("rho_chip", &PufDevice::rho_chip);
    m.def("generate_device", &generate_device, py::arg("master_seed"), py::arg("device_id"),
          py::arg("n"), py::arg("noise"), py::arg("bias_q") = 0.5, py::arg("rho_chip") = 0.0,
          py::arg("wafer_pattern") = nullptr);
    m.def("sample_response", &sample_response, py::arg("device"), py::arg("rng"));
    m.def("stabilized_read", &stabilized_read, py::arg("device"), py::arg("votes"),
          py::arg("rng"));

    // ---- threshold calibration
    py::class_<ImpostorModel>(m, "ImpostorModel")
        .def_static("ideal", &ImpostorModel::ideal, py::arg("n"))
        .def_static("from_bias", &ImpostorModel::from_bias, py::arg("n"), py::arg("q"))
        .def("with_correlation", &ImpostorModel::with_correlation, py::arg("rho_chip"))
        .def_readonly("n", &ImpostorModel::n)
        .def_readonly("mismatch_p", &ImpostorModel::mismatch_p);
    py::class_<TauMax>(m, "TauMax")
        .def_readonly("tau", &TauMax::tau)
        .def_readonly("floored", &TauMax::floored);
    py::class_<ConfigTag>(m, "ConfigTag")
        .def(py::init([](std::size_t n, unsigned votes, std::optional<HammingVariant> variant) {
                 return ConfigTag{n, votes, variant};
             }),
             py::arg("n"), py::arg("votes"), py::arg("variant") = std::nullopt)
        .def_readonly("n", &ConfigTag::n)
        .def_readonly("votes", &ConfigTag::votes)
        .def_readonly("variant", &ConfigTag::variant)
        .def("variant_label", &ConfigTag::variant_label);
    py::class_<GenuineSample>(m, "GenuineSample")
        .def(py::init([](ConfigTag tag, std::vector<double> values) {
                 return GenuineSample{tag, std::move(values)};
             }),
             py::arg("tag"), py::arg("values"))
        .def_readonly("tag", &GenuineSample::tag)
        .def_readonly("values", &GenuineSample::values);
    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("tag", &CalibrationResult::tag)
        .def_readonly("alpha_far", &CalibrationResult::alpha_far)
        .def_readonly("alpha_frr", &CalibrationResult::alpha_frr)
        .def_readonly("tau_min", &CalibrationResult::tau_min)
        .def_readonly("tau_max", &CalibrationResult::tau_max)
        .def_readonly("sm_ec", &CalibrationResult::sm_ec)
        .def_readonly("floored", &CalibrationResult::floored)
        .def_readonly("viable", &CalibrationResult::viable)
        .def_readonly("n_valid", &CalibrationResult::n_valid)
        .def("zone", [](const CalibrationResult& r) {
            return std::string(zone_label_name(zone_label(r)));
        });
    m.def("tau_to_bits", &tau_to_bits, py::arg("tau"), py::arg("n"));
    m.def("far", &far, py::arg("model"), py::arg("tau"));
    m.def("tau_max", &tau_max, py::arg("model"), py::arg("alpha_far"));
    m.def("tau_min", &tau_min, py::arg("sample"), py::arg("alpha_frr"));
    m.def("calibrate", &calibrate, py::arg("sample"), py::arg("model"), py::arg("alpha_far"),
          py::arg("alpha_frr"), py::arg("n_min") = kDefaultNMin);

    // ---- design-space sweep
    py::class_<ExperimentPlan>(m, "ExperimentPlan")
        .def(py::init<>())
        .def_static("defaults", &ExperimentPlan::defaults)
        .def_static("from_json", &ExperimentPlan::from_json, py::arg("text"))
        .def_static("load", &ExperimentPlan::load, py::arg("path"))
        .def("to_json", &ExperimentPlan::to_json)
        .def("validate", &ExperimentPlan::validate)
        .def_readwrite("master_seed", &ExperimentPlan::master_seed)
        .def_readwrite("out_dir", &ExperimentPlan::out_dir)
        .def_readwrite("device_count", &ExperimentPlan::device_count)
        .def_readwrite("base_bits", &ExperimentPlan::base_bits)
        .def_readwrite("noise", &ExperimentPlan::noise)
        .def_readwrite("bias_q", &ExperimentPlan::bias_q)
        .def_readwrite("rho_chip", &ExperimentPlan::rho_chip)
        .def_readwrite("n_grid", &ExperimentPlan::n_grid)
        .def_readwrite("votes_grid", &ExperimentPlan::votes_grid)
        .def_readwrite("variants", &ExperimentPlan::variants)
        .def_readwrite("iterations", &ExperimentPlan::iterations)
        .def_readwrite("alpha_far", &ExperimentPlan::alpha_far)
        .def_readwrite("alpha_frr", &ExperimentPlan::alpha_frr)
        .def_readwrite("n_min", &ExperimentPlan::n_min)
        .def_readwrite("dense_n_start", &ExperimentPlan::dense_n_start)
        .def_readwrite("dense_n_stop", &ExperimentPlan::dense_n_stop)
        .def_readwrite("threads", &ExperimentPlan::threads);
    m.def("run_sweep", &run_sweep, py::arg("plan"), py::call_guard<py::gil_scoped_release>());

    py::class_<CalibrateOutput>(m, "CalibrateOutput")
        .def_readonly("results", &CalibrateOutput::results)
        .def_readonly("recommended_tau", &CalibrateOutput::recommended_tau);
    m.def("calibrate_from_csv", &calibrate_from_csv, py::arg("ber_csv"), py::arg("alpha_far"),
          py::arg("alpha_frr"), py::arg("n_min") = kDefaultNMin,
          py::call_guard<py::gil_scoped_release>());
}
