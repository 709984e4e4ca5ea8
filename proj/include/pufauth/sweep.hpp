#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pufauth/calibration.hpp"
#include "pufauth/hamming.hpp"
#include "pufauth/puf_model.hpp"

namespace pufauth {

// Everything the design-space sweep needs; serializes to/from the JSON
// config file, and every empirical artifact is a pure function of this plan.
struct ExperimentPlan {
    std::uint64_t master_seed = 42;
    std::filesystem::path out_dir = "out";

    // fleet
    std::size_t device_count = 6;
    std::size_t base_bits = 2048;  // width of one raw read
    NoiseProfile noise;
    double bias_q = 0.5;
    double rho_chip = 0.0;

    // empirical grids
    std::vector<std::size_t> n_grid = {64, 128, 256, 512, 1024, 2048};
    std::vector<unsigned> votes_grid = {1, 3, 5, 10, 20};
    std::vector<std::optional<HammingVariant>> variants;  // default set in defaults()
    std::size_t iterations = 45;

    // calibration targets
    std::vector<double> alpha_far = {1e-6, 1e-9};
    double alpha_frr = 0.01;
    std::size_t n_min = kDefaultNMin;

    // analytic sweep axes
    std::vector<double> bias_grid = {0.50, 0.45, 0.40, 0.35, 0.30};
    std::vector<double> rho_grid = {0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    std::size_t dense_n_start = 8;   // delta/bias/correlation tables walk every
    std::size_t dense_n_stop = 2048; // integer n in this range (the sawtooth axis)

    unsigned threads = 0;  // 0 = hardware concurrency

    static ExperimentPlan defaults();
    void validate() const;

    std::string to_json() const;
    static ExperimentPlan from_json(const std::string& text);
    static ExperimentPlan load(const std::filesystem::path& path);
};

// Runs the whole sweep and writes the CSV artifacts into plan.out_dir:
// ber_vs_votes, ber_vs_votes_box, uniformity, parity_footprint, timing,
// sm_scaling, delta_sm, bias_sweep, correlation_sweep. Returns the list of
// files written.
std::vector<std::filesystem::path> run_sweep(const ExperimentPlan& plan);

// The calibrate command's core: group per-block genuine BER rows from
// ber_vs_votes.csv by (n, votes, variant) and calibrate each group.
struct CalibrateOutput {
    std::vector<CalibrationResult> results;
    // Recommended tau (= tau_min) per viable config, in results order;
    // NaN when not viable.
    std::vector<double> recommended_tau;
};
CalibrateOutput calibrate_from_csv(const std::filesystem::path& ber_csv, double alpha_far,
                                   double alpha_frr, std::size_t n_min = kDefaultNMin);

void write_calibration_csv(const std::filesystem::path& path, const CalibrateOutput& out);

// Box-plot summary used by the sweep and the report command.
struct BoxStats {
    std::size_t samples = 0;
    double mean = 0, median = 0, q1 = 0, q3 = 0;
    double whisker_lo = 0, whisker_hi = 0;  // 1.5*IQR fences clamped to data
    std::size_t outliers = 0;
};
BoxStats box_stats(std::vector<double> values);

}  // namespace pufauth
