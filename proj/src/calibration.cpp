#include "pufauth/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pufauth {
namespace {

long double log_add_exp(long double a, long double b) {
    if (a == -std::numeric_limits<long double>::infinity()) return b;
    if (b == -std::numeric_limits<long double>::infinity()) return a;
    const long double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

std::size_t tau_to_bits(double tau, std::size_t n) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("calibration: tau out of [0,1]");
    const double scaled = tau * static_cast<double>(n) + 1e-9;
    const auto k = static_cast<std::size_t>(scaled);
    return std::min(k, n);
}

ImpostorModel ImpostorModel::ideal(std::size_t n) { return ImpostorModel{n, 0.5}; }

ImpostorModel ImpostorModel::from_bias(std::size_t n, double q) {
    if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("calibration: bias q out of (0,1)");
    return ImpostorModel{n, 2.0 * q * (1.0 - q)};
}

ImpostorModel ImpostorModel::with_correlation(double rho_chip) const {
    if (rho_chip < 0.0 || rho_chip >= 1.0)
        throw std::invalid_argument("calibration: rho_chip out of [0,1)");
    return ImpostorModel{n, mismatch_p * (1.0 - rho_chip)};
}

void ImpostorModel::validate() const {
    if (n == 0) throw std::invalid_argument("calibration: impostor model needs n >= 1");
    if (!(mismatch_p > 0.0 && mismatch_p < 1.0))
        throw std::invalid_argument("calibration: mismatch_p out of (0,1)");
}

BinomialCdf::BinomialCdf(std::size_t n, double p) : n_(n), p_(p) {
    ImpostorModel{n, p}.validate();
    log_p_ = std::log(static_cast<long double>(p));
    log_1mp_ = std::log1p(static_cast<long double>(-p));
    lgamma_np1_ = std::lgamma(static_cast<long double>(n) + 1.0L);
}

long double BinomialCdf::log_pmf(std::size_t k) const {
    if (k > n_) throw std::out_of_range("calibration: pmf index past n");
    const auto kl = static_cast<long double>(k);
    const auto nl = static_cast<long double>(n_);
    return lgamma_np1_ - std::lgamma(kl + 1.0L) - std::lgamma(nl - kl + 1.0L) +
           kl * log_p_ + (nl - kl) * log_1mp_;
}

long double BinomialCdf::log_cdf(std::size_t k) const {
    if (k >= n_) return 0.0L;
    long double acc = -std::numeric_limits<long double>::infinity();
    for (std::size_t j = 0; j <= k; ++j) acc = log_add_exp(acc, log_pmf(j));
    return std::min(acc, 0.0L);
}

double BinomialCdf::cdf(std::size_t k) const {
    return static_cast<double>(std::exp(log_cdf(k)));
}

std::optional<std::size_t> BinomialCdf::largest_k_within(long double log_alpha) const {
    // Walk pmf terms by the ratio recurrence instead of two lgamma calls per
    // term — dense sweeps evaluate millions of terms.
    const long double log_odds = log_p_ - log_1mp_;
    long double term = static_cast<long double>(n_) * log_1mp_;  // log pmf(0)
    long double acc = -std::numeric_limits<long double>::infinity();
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k <= n_; ++k) {
        if (k > 0)
            term += std::log(static_cast<long double>(n_ - k + 1) / static_cast<long double>(k)) +
                    log_odds;
        acc = log_add_exp(acc, term);
        if (acc <= log_alpha)
            best = k;
        else
            break;  // the CDF only grows from here
    }
    return best;
}

double far(const ImpostorModel& model, double tau) {
    return static_cast<double>(std::exp(log_far(model, tau)));
}

long double log_far(const ImpostorModel& model, double tau) {
    model.validate();
    return BinomialCdf(model.n, model.mismatch_p).log_cdf(tau_to_bits(tau, model.n));
}

TauMax tau_max(const ImpostorModel& model, double alpha_far) {
    model.validate();
    if (!(alpha_far > 0.0 && alpha_far < 1.0))
        throw std::invalid_argument("calibration: alpha_far out of (0,1)");
    const BinomialCdf cdf(model.n, model.mismatch_p);
    const auto k = cdf.largest_k_within(std::log(static_cast<long double>(alpha_far)));
    if (!k) return TauMax{0.0, true};
    return TauMax{static_cast<double>(*k) / static_cast<double>(model.n), false};
}

double tau_min(const GenuineSample& sample, double alpha_frr) {
    if (sample.values.empty()) throw std::invalid_argument("calibration: empty genuine sample");
    if (!(alpha_frr > 0.0 && alpha_frr < 1.0))
        throw std::invalid_argument("calibration: alpha_frr out of (0,1)");
    if (sample.tag.n == 0) throw std::invalid_argument("calibration: sample tag needs n >= 1");
    for (double v : sample.values)
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("calibration: BER value out of [0,1]");

    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    // Number of sample points allowed above the threshold.
    auto allowed = static_cast<std::size_t>(alpha_frr * static_cast<double>(m) + 1e-9);
    allowed = std::min(allowed, m - 1);
    const double quantile = sorted[m - 1 - allowed];

    // Snap up to the integer-bit grid over n.
    const auto n = static_cast<double>(sample.tag.n);
    const auto k = static_cast<std::size_t>(std::ceil(quantile * n - 1e-9));
    return static_cast<double>(std::min<std::size_t>(k, sample.tag.n)) / n;
}

CalibrationResult calibrate(const GenuineSample& sample, const ImpostorModel& model,
                            double alpha_far, double alpha_frr, std::size_t n_min) {
    if (model.n != sample.tag.n)
        throw std::invalid_argument("calibration: sample/model n mismatch");
    CalibrationResult r;
    r.tag = sample.tag;
    r.alpha_far = alpha_far;
    r.alpha_frr = alpha_frr;
    const TauMax tm = tau_max(model, alpha_far);
    r.tau_max = tm.tau;
    r.floored = tm.floored;
    r.tau_min = tau_min(sample, alpha_frr);
    r.sm_ec = sm_ec(r.tau_min, r.tau_max);
    r.viable = r.sm_ec > 0.0;
    r.n_valid = sample.tag.n >= n_min;
    return r;
}

std::vector<DeltaSmRow> delta_sm_sweep(double base_alpha, double tightened_alpha,
                                       const std::vector<std::size_t>& n_grid,
                                       double mismatch_p) {
    if (tightened_alpha >= base_alpha)
        throw std::invalid_argument("calibration: tightened alpha must be below base alpha");
    std::vector<DeltaSmRow> rows;
    rows.reserve(n_grid.size());
    for (std::size_t n : n_grid) {
        const ImpostorModel model{n, mismatch_p};
        const TauMax base = tau_max(model, base_alpha);
        const TauMax tight = tau_max(model, tightened_alpha);
        rows.push_back(DeltaSmRow{n, base.tau, tight.tau, base.tau - tight.tau,
                                  base.floored, tight.floored});
    }
    return rows;
}

std::vector<CorrelationRow> correlation_sweep(const std::vector<double>& rho_grid,
                                              const std::vector<std::size_t>& n_grid,
                                              double alpha_far) {
    std::vector<CorrelationRow> rows;
    rows.reserve(rho_grid.size() * n_grid.size());
    for (double rho : rho_grid) {
        for (std::size_t n : n_grid) {
            const ImpostorModel base = ImpostorModel::ideal(n);
            const ImpostorModel corr = base.with_correlation(rho);
            const TauMax tb = tau_max(base, alpha_far);
            const TauMax tc = tau_max(corr, alpha_far);
            rows.push_back(CorrelationRow{rho, n, corr.mismatch_p, tb.tau, tc.tau,
                                          tb.tau - tc.tau});
        }
    }
    return rows;
}

const char* zone_label_name(ZoneLabel label) {
    switch (label) {
        case ZoneLabel::accepted: return "accepted";
        case ZoneLabel::over_provisioned: return "over_provisioned";
        case ZoneLabel::unsafe: return "unsafe";
        case ZoneLabel::unviable: return "unviable";
        case ZoneLabel::below_n_min: return "below_n_min";
    }
    return "?";
}

ZoneLabel zone_label(const CalibrationResult& result, double sm_floor, double sm_ceil) {
    if (!(sm_floor >= 0.0) || !(sm_ceil > sm_floor))
        throw std::invalid_argument("calibration: need 0 <= sm_floor < sm_ceil");
    if (result.sm_ec <= 0.0) return ZoneLabel::unviable;
    if (result.sm_ec < sm_floor) return ZoneLabel::unsafe;
    if (result.sm_ec > sm_ceil) return ZoneLabel::over_provisioned;
    if (!result.n_valid) return ZoneLabel::below_n_min;
    return ZoneLabel::accepted;
}

std::vector<CalibrationResult> target_zone_filter(const std::vector<CalibrationResult>& results,
                                                  double sm_floor, double sm_ceil) {
    std::vector<CalibrationResult> accepted;
    for (const auto& r : results)
        if (zone_label(r, sm_floor, sm_ceil) == ZoneLabel::accepted) accepted.push_back(r);
    return accepted;
}

}  // namespace pufauth
