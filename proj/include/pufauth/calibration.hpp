#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pufauth/hamming.hpp"

namespace pufauth {

// Fractional thresholds act on the integer bit grid: a threshold tau over n
// bits accepts Hamming distances up to floor(tau*n), with a tiny epsilon so
// exact grid points (k/n)*n land on k.
std::size_t tau_to_bits(double tau, std::size_t n);

// Impostor mismatch model: each of the n compared bits differs independently
// with probability mismatch_p, so the impostor HD is Binomial(n, mismatch_p).
struct ImpostorModel {
    std::size_t n = 0;
    double mismatch_p = 0.5;

    static ImpostorModel ideal(std::size_t n);               // p = 0.5
    static ImpostorModel from_bias(std::size_t n, double q);  // p = 2q(1-q)
    // Inter-chip correlation scales the baseline mismatch by (1 - rho).
    ImpostorModel with_correlation(double rho_chip) const;

    void validate() const;
};

// Exact Binomial(n, p) CDF, evaluated in log space so tails far below
// double-denormal range still compare correctly against log(alpha).
class BinomialCdf {
public:
    BinomialCdf(std::size_t n, double p);

    long double log_pmf(std::size_t k) const;
    // log P[X <= k]
    long double log_cdf(std::size_t k) const;
    double cdf(std::size_t k) const;
    // Largest k with log_cdf(k) <= log_alpha, or nullopt if k=0 already fails.
    std::optional<std::size_t> largest_k_within(long double log_alpha) const;

private:
    std::size_t n_;
    double p_;
    long double log_p_, log_1mp_, lgamma_np1_;
};

// P[X <= floor(tau*n)] — the false-accept chance of an impostor at threshold tau.
double far(const ImpostorModel& model, double tau);
long double log_far(const ImpostorModel& model, double tau);

struct TauMax {
    double tau = 0.0;
    bool floored = false;  // even zero tolerated bits violates alpha_far
};
// Largest grid threshold k/n with FAR <= alpha_far.
TauMax tau_max(const ImpostorModel& model, double alpha_far);

// One calibration cell's identity.
struct ConfigTag {
    std::size_t n = 0;
    unsigned votes = 1;
    std::optional<HammingVariant> variant;

    std::string variant_label() const { return variant_name(variant); }
};

// Empirical post-authentication BER values for one config cell.
struct GenuineSample {
    ConfigTag tag;
    std::vector<double> values;
};

// Smallest grid threshold k/n rejecting at most an alpha_frr fraction of the
// sample: the ceil((1-alpha)*m)-th order statistic, snapped up to the grid.
double tau_min(const GenuineSample& sample, double alpha_frr);

inline double sm_ec(double tau_min_v, double tau_max_v) { return tau_max_v - tau_min_v; }

struct CalibrationResult {
    ConfigTag tag;
    double alpha_far = 1e-6;
    double alpha_frr = 0.01;
    double tau_min = 0.0;
    double tau_max = 0.0;
    double sm_ec = 0.0;
    bool floored = false;
    bool viable = false;   // sm_ec > 0
    bool n_valid = false;  // n >= n_min advisory
};

constexpr std::size_t kDefaultNMin = 64;
constexpr double kDefaultSmFloor = 0.05;
constexpr double kDefaultSmCeil = 0.10;

CalibrationResult calibrate(const GenuineSample& sample, const ImpostorModel& model,
                            double alpha_far, double alpha_frr,
                            std::size_t n_min = kDefaultNMin);

// Loss of tau_max when tightening alpha_far (tau_min cancels out of the delta).
struct DeltaSmRow {
    std::size_t n = 0;
    double tau_max_base = 0.0;
    double tau_max_tight = 0.0;
    double delta_sm = 0.0;
    bool floored_base = false;
    bool floored_tight = false;
};
std::vector<DeltaSmRow> delta_sm_sweep(double base_alpha, double tightened_alpha,
                                       const std::vector<std::size_t>& n_grid,
                                       double mismatch_p = 0.5);

// tau_max loss when inter-chip correlation shrinks the impostor mismatch
// from the ideal 0.5 to 0.5*(1-rho).
struct CorrelationRow {
    double rho = 0.0;
    std::size_t n = 0;
    double mismatch_p = 0.5;
    double tau_max_base = 0.0;
    double tau_max_corr = 0.0;
    double delta_sm = 0.0;
};
std::vector<CorrelationRow> correlation_sweep(const std::vector<double>& rho_grid,
                                              const std::vector<std::size_t>& n_grid,
                                              double alpha_far);

enum class ZoneLabel {
    accepted,         // sm floor <= sm_ec <= sm ceil, n advisory satisfied
    over_provisioned, // sm_ec > ceil: headroom to shrink n/N/redundancy
    unsafe,           // 0 < sm_ec < floor
    unviable,         // sm_ec <= 0
    below_n_min,      // margin in range but n under the advisory minimum
};
const char* zone_label_name(ZoneLabel label);
ZoneLabel zone_label(const CalibrationResult& result, double sm_floor = kDefaultSmFloor,
                     double sm_ceil = kDefaultSmCeil);
std::vector<CalibrationResult> target_zone_filter(const std::vector<CalibrationResult>& results,
                                                  double sm_floor = kDefaultSmFloor,
                                                  double sm_ceil = kDefaultSmCeil);

}  // namespace pufauth
