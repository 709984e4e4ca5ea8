#include "pufauth/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "pufauth/crp_store.hpp"
#include "pufauth/majority.hpp"

namespace pufauth {
namespace {

// Variant labels inside CSV cells avoid the comma of the canonical
// "H(7,4)" form; parse_variant reads both spellings.
std::string csv_variant_label(const std::optional<HammingVariant>& v) {
    if (!v) return "none";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "H%u-%u", v->codeword_bits(), v->data_bits);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& schema,
              const std::string& header)
        : out_(path, std::ios::trunc) {
        if (!out_) throw std::runtime_error("sweep: cannot open " + path.string());
        out_ << "# schema: " << schema << " v1\n" << header << '\n';
    }
    void line(const std::string& s) { out_ << s << '\n'; }
    void close() {
        out_.flush();
        if (!out_) throw std::runtime_error("sweep: CSV write failed");
        out_.close();
    }

private:
    std::ofstream out_;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    const int len = std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    if (len < 0 || static_cast<std::size_t>(len) >= sizeof(buf))
        throw std::runtime_error("sweep: row formatting overflow");
    return std::string(buf, static_cast<std::size_t>(len));
}

// One virtual n-bit authentication (a block of one stabilized base read).
struct EmpiricalRow {
    std::uint32_t n = 0;
    std::uint16_t block = 0;
    std::uint8_t variant_idx = 0;  // index into plan.variants
    std::uint8_t iteration = 0;
    std::uint16_t hd_raw = 0;
    std::uint16_t hd_post = 0;
    std::uint16_t clean = 0, single = 0, dbl = 0, misc = 0, flips = 0;
};

struct CellResult {
    std::vector<EmpiricalRow> rows;
};

CellResult run_cell(const ExperimentPlan& plan, const PufDevice& device,
                    std::size_t device_idx, unsigned votes) {
    Rng rng(derive_seed(plan.master_seed, hash_string("sweep-reads"), votes, device_idx));

    const auto stabilized = [&]() {
        MajorityAccumulator acc(plan.base_bits, votes);
        for (unsigned v = 0; v < votes; ++v) acc.accumulate(sample_response(device, rng));
        return acc.finalize();
    };

    const BitVector reference = stabilized();
    std::vector<BitVector> auths;
    auths.reserve(plan.iterations);
    for (std::size_t i = 0; i < plan.iterations; ++i) auths.push_back(stabilized());

    CellResult cell;
    for (std::size_t vi = 0; vi < plan.variants.size(); ++vi) {
        const auto& variant = plan.variants[vi];
        for (std::size_t n : plan.n_grid) {
            const std::size_t blocks = plan.base_bits / n;
            std::vector<BitVector> ref_blocks = partition_response(reference, n);
            std::vector<HelperData> helpers;
            if (variant) {
                helpers.reserve(blocks);
                for (std::size_t b = 0; b < blocks; ++b)
                    helpers.push_back(enroll_helper(ref_blocks[b], *variant));
            }
            for (std::size_t i = 0; i < plan.iterations; ++i) {
                for (std::size_t b = 0; b < blocks; ++b) {
                    const BitVector raw = auths[i].slice(b * n, n);
                    EmpiricalRow row;
                    row.n = static_cast<std::uint32_t>(n);
                    row.block = static_cast<std::uint16_t>(b);
                    row.variant_idx = static_cast<std::uint8_t>(vi);
                    row.iteration = static_cast<std::uint8_t>(i);
                    row.hd_raw = static_cast<std::uint16_t>(hamming_distance(ref_blocks[b], raw));
                    if (variant) {
                        const DecodeReport rep = decode(raw, helpers[b]);
                        row.hd_post =
                            static_cast<std::uint16_t>(hamming_distance(ref_blocks[b], rep.corrected));
                        row.clean = static_cast<std::uint16_t>(rep.clean);
                        row.single = static_cast<std::uint16_t>(rep.single_corrected);
                        row.dbl = static_cast<std::uint16_t>(rep.double_detected);
                        row.misc = static_cast<std::uint16_t>(rep.miscorrection_possible);
                        row.flips = static_cast<std::uint16_t>(rep.bit_flips_applied);
                    } else {
                        row.hd_post = row.hd_raw;
                    }
                    cell.rows.push_back(row);
                }
            }
        }
    }
    return cell;
}

using Clock = std::chrono::steady_clock;

struct StageTiming {
    std::string stage;
    std::vector<double> us;
};

template <typename F>
StageTiming time_stage(const std::string& stage, std::size_t reps, F&& op) {
    StageTiming t{stage, {}};
    t.us.reserve(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        op();
        const auto stop = Clock::now();
        t.us.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
    }
    return t;
}

}  // namespace

ExperimentPlan ExperimentPlan::defaults() {
    ExperimentPlan plan;
    plan.variants.push_back(std::nullopt);
    for (const auto& v : all_variants()) plan.variants.push_back(v);
    return plan;
}

void ExperimentPlan::validate() const {
    noise.validate();
    if (device_count == 0 || device_count > 255)
        throw std::invalid_argument("plan: device_count out of [1,255]");
    if (base_bits == 0 || base_bits % 64 != 0)
        throw std::invalid_argument("plan: base_bits must be a positive multiple of 64");
    if (n_grid.empty() || votes_grid.empty() || variants.empty())
        throw std::invalid_argument("plan: grids must be non-empty");
    if (iterations == 0 || iterations > 255)
        throw std::invalid_argument("plan: iterations out of [1,255]");
    if (!(bias_q > 0.0 && bias_q < 1.0)) throw std::invalid_argument("plan: bias_q out of (0,1)");
    if (rho_chip < 0.0 || rho_chip >= 1.0)
        throw std::invalid_argument("plan: rho_chip out of [0,1)");
    for (std::size_t n : n_grid) {
        if (n == 0 || n > base_bits || base_bits % n != 0)
            throw std::invalid_argument("plan: every n must divide base_bits");
        for (const auto& v : variants)
            if (v && n % v->data_bits != 0)
                throw std::invalid_argument("plan: n=" + std::to_string(n) +
                                            " not divisible by " + v->name() + " data width");
    }
    for (unsigned votes : votes_grid)
        if (votes == 0 || votes > 255)
            throw std::invalid_argument("plan: votes out of [1,255]");
    if (alpha_far.empty()) throw std::invalid_argument("plan: alpha_far grid must be non-empty");
    for (double a : alpha_far)
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("plan: alpha_far out of (0,1)");
    if (!(alpha_frr > 0.0 && alpha_frr < 1.0))
        throw std::invalid_argument("plan: alpha_frr out of (0,1)");
    for (double q : bias_grid)
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("plan: bias grid value out of (0,1)");
    for (double r : rho_grid)
        if (r < 0.0 || r >= 1.0) throw std::invalid_argument("plan: rho grid value out of [0,1)");
    if (dense_n_start < 1 || dense_n_stop < dense_n_start || dense_n_stop > 4096)
        throw std::invalid_argument("plan: dense n range out of [1,4096]");
}

std::string ExperimentPlan::to_json() const {
    nlohmann::json j;
    j["master_seed"] = master_seed;
    j["out_dir"] = out_dir.string();
    j["device_count"] = device_count;
    j["base_bits"] = base_bits;
    j["noise"] = {{"fraction_unstable", noise.fraction_unstable},
                  {"stable_eps", noise.stable_eps},
                  {"unstable_max", noise.unstable_max}};
    j["bias_q"] = bias_q;
    j["rho_chip"] = rho_chip;
    j["n_grid"] = n_grid;
    j["votes_grid"] = votes_grid;
    std::vector<std::string> names;
    for (const auto& v : variants) names.push_back(variant_name(v));
    j["variants"] = names;
    j["iterations"] = iterations;
    j["alpha_far"] = alpha_far;
    j["alpha_frr"] = alpha_frr;
    j["n_min"] = n_min;
    j["bias_grid"] = bias_grid;
    j["rho_grid"] = rho_grid;
    j["dense_n_start"] = dense_n_start;
    j["dense_n_stop"] = dense_n_stop;
    j["threads"] = threads;
    return j.dump(2);
}

ExperimentPlan ExperimentPlan::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentPlan plan = defaults();
    if (j.contains("master_seed")) plan.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) plan.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("device_count")) plan.device_count = j["device_count"].get<std::size_t>();
    if (j.contains("base_bits")) plan.base_bits = j["base_bits"].get<std::size_t>();
    if (j.contains("noise")) {
        const auto& nj = j["noise"];
        if (nj.contains("fraction_unstable"))
            plan.noise.fraction_unstable = nj["fraction_unstable"].get<double>();
        if (nj.contains("stable_eps")) plan.noise.stable_eps = nj["stable_eps"].get<double>();
        if (nj.contains("unstable_max")) plan.noise.unstable_max = nj["unstable_max"].get<double>();
    }
    if (j.contains("bias_q")) plan.bias_q = j["bias_q"].get<double>();
    if (j.contains("rho_chip")) plan.rho_chip = j["rho_chip"].get<double>();
    if (j.contains("n_grid")) plan.n_grid = j["n_grid"].get<std::vector<std::size_t>>();
    if (j.contains("votes_grid")) plan.votes_grid = j["votes_grid"].get<std::vector<unsigned>>();
    if (j.contains("variants")) {
        plan.variants.clear();
        for (const auto& name : j["variants"])
            plan.variants.push_back(parse_variant(name.get<std::string>()));
    }
    if (j.contains("iterations")) plan.iterations = j["iterations"].get<std::size_t>();
    if (j.contains("alpha_far")) plan.alpha_far = j["alpha_far"].get<std::vector<double>>();
    if (j.contains("alpha_frr")) plan.alpha_frr = j["alpha_frr"].get<double>();
    if (j.contains("n_min")) plan.n_min = j["n_min"].get<std::size_t>();
    if (j.contains("bias_grid")) plan.bias_grid = j["bias_grid"].get<std::vector<double>>();
    if (j.contains("rho_grid")) plan.rho_grid = j["rho_grid"].get<std::vector<double>>();
    if (j.contains("dense_n_start")) plan.dense_n_start = j["dense_n_start"].get<std::size_t>();
    if (j.contains("dense_n_stop")) plan.dense_n_stop = j["dense_n_stop"].get<std::size_t>();
    if (j.contains("threads")) plan.threads = j["threads"].get<unsigned>();
    return plan;
}

ExperimentPlan ExperimentPlan::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("plan: cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("box_stats: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    BoxStats s;
    s.samples = m;
    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(m);
    const auto quantile = [&](double q) {
        const double h = q * static_cast<double>(m - 1);
        const auto lo = static_cast<std::size_t>(h);
        if (lo + 1 >= m) return values[m - 1];
        return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
    };
    s.median = quantile(0.5);
    s.q1 = quantile(0.25);
    s.q3 = quantile(0.75);
    const double iqr = s.q3 - s.q1;
    const double fence_lo = s.q1 - 1.5 * iqr;
    const double fence_hi = s.q3 + 1.5 * iqr;
    s.whisker_lo = s.q3;
    s.whisker_hi = s.q1;
    for (double v : values) {
        if (v >= fence_lo) {
            s.whisker_lo = v;
            break;
        }
    }
    for (auto it = values.rbegin(); it != values.rend(); ++it) {
        if (*it <= fence_hi) {
            s.whisker_hi = *it;
            break;
        }
    }
    for (double v : values) s.outliers += (v < fence_lo || v > fence_hi) ? 1 : 0;
    return s;
}

std::vector<std::filesystem::path> run_sweep(const ExperimentPlan& plan) {
    plan.validate();
    std::filesystem::create_directories(plan.out_dir);
    std::vector<std::filesystem::path> written;
    const auto out_path = [&](const char* name) { return plan.out_dir / name; };

    const Fleet fleet = make_fleet(plan.master_seed, plan.device_count, plan.base_bits,
                                   plan.noise, plan.bias_q, plan.rho_chip);

    // ---- empirical cells: (votes, device), parallel with deterministic order
    struct CellKey {
        std::size_t votes_idx, device_idx;
    };
    std::vector<CellKey> cells;
    for (std::size_t vi = 0; vi < plan.votes_grid.size(); ++vi)
        for (std::size_t di = 0; di < plan.device_count; ++di) cells.push_back({vi, di});
    std::vector<CellResult> results(cells.size());

    const unsigned threads = plan.threads != 0
                                 ? plan.threads
                                 : std::max(1u, std::thread::hardware_concurrency());
    {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) break;
                results[i] = run_cell(plan, fleet.devices[cells[i].device_idx],
                                      cells[i].device_idx, plan.votes_grid[cells[i].votes_idx]);
            }
        };
        std::vector<std::thread> pool;
        const unsigned spawn = std::min<std::size_t>(threads, cells.size());
        for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // ---- ber_vs_votes.csv + pooled genuine samples
    // pool[(variant_idx, n, votes_idx)] -> post-EC BER values
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<double>> pool;
    {
        CsvWriter csv(out_path("ber_vs_votes.csv"), "ber_vs_votes",
                      "n,votes,variant,device_id,iteration,block,ber_raw,ber,clean,"
                      "single_corrected,double_detected,miscorrection_possible,bit_flips");
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const unsigned votes = plan.votes_grid[cells[c].votes_idx];
            const std::string& device_id = fleet.devices[cells[c].device_idx].device_id;
            for (const EmpiricalRow& r : results[c].rows) {
                const double n = r.n;
                csv.line(fmt("%u,%u,%s,%s,%u,%u,%.10g,%.10g,%u,%u,%u,%u,%u", r.n, votes,
                             csv_variant_label(plan.variants[r.variant_idx]).c_str(),
                             device_id.c_str(), r.iteration, r.block, r.hd_raw / n, r.hd_post / n,
                             r.clean, r.single, r.dbl, r.misc, r.flips));
                pool[{r.variant_idx, r.n, cells[c].votes_idx}].push_back(r.hd_post / n);
            }
        }
        csv.close();
        written.push_back(out_path("ber_vs_votes.csv"));
    }

    // ---- ber_vs_votes_box.csv: box statistics, precomputed per cell
    {
        CsvWriter csv(out_path("ber_vs_votes_box.csv"), "ber_vs_votes_box",
                      "n,votes,variant,samples,mean,median,q1,q3,whisker_lo,whisker_hi,outliers");
        for (std::size_t vi = 0; vi < plan.variants.size(); ++vi)
            for (std::size_t n : plan.n_grid)
                for (std::size_t wi = 0; wi < plan.votes_grid.size(); ++wi) {
                    const auto it = pool.find({vi, n, wi});
                    if (it == pool.end()) continue;
                    const BoxStats s = box_stats(it->second);
                    csv.line(fmt("%zu,%u,%s,%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%zu", n,
                                 plan.votes_grid[wi], csv_variant_label(plan.variants[vi]).c_str(),
                                 s.samples, s.mean, s.median, s.q1, s.q3, s.whisker_lo,
                                 s.whisker_hi, s.outliers));
                }
        csv.close();
        written.push_back(out_path("ber_vs_votes_box.csv"));
    }

    // ---- uniformity.csv: raw single reads vs post-MV(+EC)
    {
        const unsigned uni_votes = *std::max_element(plan.votes_grid.begin(), plan.votes_grid.end());
        std::optional<HammingVariant> uni_variant;
        for (const auto& v : plan.variants)
            if (v) {
                uni_variant = v;
                break;
            }
        CsvWriter csv(out_path("uniformity.csv"), "uniformity",
                      "device_id,iteration,stage,votes,variant,uniformity");
        for (std::size_t di = 0; di < plan.device_count; ++di) {
            const PufDevice& device = fleet.devices[di];
            Rng rng(derive_seed(plan.master_seed, hash_string("uniformity"), di));
            MajorityAccumulator ref_acc(plan.base_bits, uni_votes);
            for (unsigned v = 0; v < uni_votes; ++v) ref_acc.accumulate(sample_response(device, rng));
            const BitVector reference = ref_acc.finalize();
            std::optional<HelperData> helper;
            if (uni_variant) helper = enroll_helper(reference, *uni_variant);
            for (std::size_t i = 0; i < plan.iterations; ++i) {
                const BitVector raw = sample_response(device, rng);
                csv.line(fmt("%s,%zu,raw,1,none,%.10g", device.device_id.c_str(), i,
                             uniformity(raw)));
                MajorityAccumulator acc(plan.base_bits, uni_votes);
                acc.accumulate(raw);
                for (unsigned v = 1; v < uni_votes; ++v) acc.accumulate(sample_response(device, rng));
                const BitVector stabilized = acc.finalize();
                csv.line(fmt("%s,%zu,mv,%u,none,%.10g", device.device_id.c_str(), i, uni_votes,
                             uniformity(stabilized)));
                if (helper) {
                    const DecodeReport rep = decode(stabilized, *helper);
                    csv.line(fmt("%s,%zu,mv_ec,%u,%s,%.10g", device.device_id.c_str(), i, uni_votes,
                                 csv_variant_label(uni_variant).c_str(), uniformity(rep.corrected)));
                }
            }
        }
        csv.close();
        written.push_back(out_path("uniformity.csv"));
    }

    // ---- parity_footprint.csv: analytic helper-data overhead
    {
        CsvWriter csv(out_path("parity_footprint.csv"), "parity_footprint",
                      "n,variant,blocks,parity_bits,nvs_bytes,code_rate");
        for (const auto& variant : plan.variants) {
            if (!variant) continue;
            for (std::size_t n : plan.n_grid) {
                const ParityFootprint f = parity_footprint(*variant, n / 8);
                csv.line(fmt("%zu,%s,%zu,%zu,%zu,%.10g", n, csv_variant_label(variant).c_str(),
                             f.blocks, f.parity_bits, f.nvs_bytes, f.code_rate));
            }
        }
        csv.close();
        written.push_back(out_path("parity_footprint.csv"));
    }

    // ---- sm_scaling.csv: calibrate each (n, N, variant) cell
    {
        CsvWriter csv(out_path("sm_scaling.csv"), "sm_scaling",
                      "n,N,variant,alpha_far,alpha_frr,tau_min,tau_max,sm_ec,floored,viable,n_valid");
        for (double alpha : plan.alpha_far) {
            for (std::size_t vi = 0; vi < plan.variants.size(); ++vi) {
                for (std::size_t wi = 0; wi < plan.votes_grid.size(); ++wi) {
                    for (std::size_t n : plan.n_grid) {
                        const auto it = pool.find({vi, n, wi});
                        if (it == pool.end()) continue;
                        GenuineSample sample;
                        sample.tag = ConfigTag{n, plan.votes_grid[wi], plan.variants[vi]};
                        sample.values = it->second;
                        ImpostorModel model = ImpostorModel::from_bias(n, plan.bias_q);
                        if (plan.rho_chip > 0.0) model = model.with_correlation(plan.rho_chip);
                        const CalibrationResult r =
                            calibrate(sample, model, alpha, plan.alpha_frr, plan.n_min);
                        csv.line(fmt("%zu,%u,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d,%d", n,
                                     plan.votes_grid[wi],
                                     csv_variant_label(plan.variants[vi]).c_str(), r.alpha_far,
                                     r.alpha_frr, r.tau_min, r.tau_max, r.sm_ec, r.floored ? 1 : 0,
                                     r.viable ? 1 : 0, r.n_valid ? 1 : 0));
                    }
                }
            }
        }
        csv.close();
        written.push_back(out_path("sm_scaling.csv"));
    }

    // ---- analytic dense-n tables; ideal tau_max cached per (n, alpha)
    std::vector<std::size_t> dense;
    for (std::size_t n = plan.dense_n_start; n <= plan.dense_n_stop; ++n) dense.push_back(n);

    const double alpha_base = plan.alpha_far[0];
    const double alpha_tight =
        plan.alpha_far.size() > 1 ? plan.alpha_far[1] : plan.alpha_far[0] * 1e-3;

    std::map<std::pair<std::size_t, double>, TauMax> ideal_cache;
    const auto ideal_tau_max = [&](std::size_t n, double alpha) {
        const auto key = std::make_pair(n, alpha);
        const auto it = ideal_cache.find(key);
        if (it != ideal_cache.end()) return it->second;
        const TauMax t = tau_max(ImpostorModel::ideal(n), alpha);
        ideal_cache.emplace(key, t);
        return t;
    };

    // delta_sm.csv: alpha_far tightening cost on a dense n grid
    {
        CsvWriter csv(out_path("delta_sm.csv"), "delta_sm",
                      "n,alpha_base,alpha_tight,tau_max_base,tau_max_tight,delta_sm,"
                      "floored_base,floored_tight");
        for (std::size_t n : dense) {
            const TauMax base = ideal_tau_max(n, alpha_base);
            const TauMax tight = ideal_tau_max(n, alpha_tight);
            csv.line(fmt("%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d", n, alpha_base, alpha_tight,
                         base.tau, tight.tau, base.tau - tight.tau, base.floored ? 1 : 0,
                         tight.floored ? 1 : 0));
        }
        csv.close();
        written.push_back(out_path("delta_sm.csv"));
    }

    // bias_sweep.csv: cell bias shrinks the impostor mismatch
    {
        CsvWriter csv(out_path("bias_sweep.csv"), "bias_sweep",
                      "bias_q,n,mismatch_p,alpha_far,tau_max_ideal,tau_max_biased,delta_sm");
        for (double q : plan.bias_grid) {
            for (std::size_t n : dense) {
                const TauMax ideal = ideal_tau_max(n, alpha_base);
                const ImpostorModel model = ImpostorModel::from_bias(n, q);
                const TauMax biased =
                    model.mismatch_p == 0.5 ? ideal : tau_max(model, alpha_base);
                csv.line(fmt("%.10g,%zu,%.10g,%.10g,%.10g,%.10g,%.10g", q, n, model.mismatch_p,
                             alpha_base, ideal.tau, biased.tau, ideal.tau - biased.tau));
            }
        }
        csv.close();
        written.push_back(out_path("bias_sweep.csv"));
    }

    // correlation_sweep.csv: inter-chip correlation cost
    {
        CsvWriter csv(out_path("correlation_sweep.csv"), "correlation_sweep",
                      "rho,n,mismatch_p,alpha_far,tau_max_base,tau_max_corr,delta_sm");
        for (double rho : plan.rho_grid) {
            for (std::size_t n : dense) {
                const TauMax base = ideal_tau_max(n, alpha_base);
                const ImpostorModel model = ImpostorModel::ideal(n).with_correlation(rho);
                const TauMax corr = rho == 0.0 ? base : tau_max(model, alpha_base);
                csv.line(fmt("%.10g,%zu,%.10g,%.10g,%.10g,%.10g,%.10g", rho, n, model.mismatch_p,
                             alpha_base, base.tau, corr.tau, base.tau - corr.tau));
            }
        }
        csv.close();
        written.push_back(out_path("correlation_sweep.csv"));
    }

    // ---- timing.csv: stage micro-benchmarks (wall-clock, platform-local)
    {
        const PufDevice& device = fleet.devices.front();
        Rng rng(derive_seed(plan.master_seed, hash_string("timing")));
        std::vector<StageTiming> stages;

        stages.push_back(time_stage("sample_read", 256, [&] { (void)sample_response(device, rng); }));

        std::vector<BitVector> reads;
        for (unsigned v = 0; v < 5; ++v) reads.push_back(sample_response(device, rng));
        stages.push_back(time_stage("majority_vote", 128, [&] {
            MajorityAccumulator acc(plan.base_bits, 5);
            for (const auto& r : reads) acc.accumulate(r);
            (void)acc.finalize();
        }));

        const HammingVariant ec = HammingVariant::make(4, true);
        const BitVector reference = sample_response(device, rng);
        const HelperData helper = enroll_helper(reference, ec);
        stages.push_back(
            time_stage("ec_encode", 128, [&] { (void)enroll_helper(reference, ec); }));
        const BitVector noisy = sample_response(device, rng);
        stages.push_back(time_stage("ec_decode", 128, [&] { (void)decode(noisy, helper); }));

        const auto store_path = plan.out_dir / ".timing_store.jsonl";
        std::filesystem::remove(store_path);
        {
            CrpStore store(store_path);
            CrpRecord record;
            record.device_id = device.device_id;
            record.n = static_cast<std::uint32_t>(plan.base_bits);
            record.votes = 5;
            record.enrolled_response = reference;
            record.enrolled_at = "1970-01-01T00:00:00Z";
            std::uint32_t offset = 0;
            stages.push_back(time_stage("store_put", 64, [&] {
                record.offset = offset++;
                (void)store.put(record, true);
            }));
            stages.push_back(time_stage("store_find", 256, [&] {
                (void)store.find(device.device_id, 0, static_cast<std::uint32_t>(plan.base_bits));
            }));
        }
        std::filesystem::remove(store_path);

        CsvWriter csv(out_path("timing.csv"), "timing",
                      "stage,samples,total_us,mean_us,min_us,max_us");
        for (const auto& s : stages) {
            double total = 0, lo = s.us.front(), hi = s.us.front();
            for (double u : s.us) {
                total += u;
                lo = std::min(lo, u);
                hi = std::max(hi, u);
            }
            csv.line(fmt("%s,%zu,%.10g,%.10g,%.10g,%.10g", s.stage.c_str(), s.us.size(), total,
                         total / static_cast<double>(s.us.size()), lo, hi));
        }
        csv.close();
        written.push_back(out_path("timing.csv"));
    }

    return written;
}

CalibrateOutput calibrate_from_csv(const std::filesystem::path& ber_csv, double alpha_far,
                                   double alpha_frr, std::size_t n_min) {
    std::ifstream in(ber_csv);
    if (!in) throw std::runtime_error("calibrate: cannot open " + ber_csv.string());

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
        break;
    }
    const auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("calibrate: missing column '" + name + "' in " +
                                 ber_csv.string());
    };
    const std::size_t col_n = column("n");
    const std::size_t col_votes = column("votes");
    const std::size_t col_variant = column("variant");
    const std::size_t col_ber = column("ber");

    std::map<std::tuple<std::size_t, unsigned, std::string>, std::vector<double>> groups;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < header.size())
            throw std::runtime_error("calibrate: short row in " + ber_csv.string());
        groups[{std::stoul(cells[col_n]), static_cast<unsigned>(std::stoul(cells[col_votes])),
                cells[col_variant]}]
            .push_back(std::stod(cells[col_ber]));
    }
    if (groups.empty()) throw std::runtime_error("calibrate: no data rows in " + ber_csv.string());

    CalibrateOutput out;
    for (const auto& [key, values] : groups) {
        GenuineSample sample;
        sample.tag = ConfigTag{std::get<0>(key), std::get<1>(key), parse_variant(std::get<2>(key))};
        sample.values = values;
        const CalibrationResult r = calibrate(sample, ImpostorModel::ideal(sample.tag.n),
                                              alpha_far, alpha_frr, n_min);
        out.results.push_back(r);
        out.recommended_tau.push_back(r.viable ? r.tau_min
                                               : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

void write_calibration_csv(const std::filesystem::path& path, const CalibrateOutput& out) {
    CsvWriter csv(path, "calibration",
                  "n,N,variant,alpha_far,alpha_frr,tau_min,tau_max,sm_ec,floored,viable,n_valid,"
                  "recommended_tau");
    for (std::size_t i = 0; i < out.results.size(); ++i) {
        const CalibrationResult& r = out.results[i];
        std::string rec;
        if (!std::isnan(out.recommended_tau[i])) rec = fmt("%.10g", out.recommended_tau[i]);
        csv.line(fmt("%zu,%u,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d,%d,%s", r.tag.n, r.tag.votes,
                     csv_variant_label(r.tag.variant).c_str(), r.alpha_far, r.alpha_frr, r.tau_min,
                     r.tau_max, r.sm_ec, r.floored ? 1 : 0, r.viable ? 1 : 0, r.n_valid ? 1 : 0,
                     rec.c_str()));
    }
    csv.close();
}

}  // namespace pufauth
