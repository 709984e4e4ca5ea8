// Acceptance gate: ten independently checkable properties of the whole
// system, one PASS/FAIL line each. Exit code 0 only when every selected
// criterion holds. Run a single criterion with --only N.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>
#include <unistd.h>

#include "pufauth/bitvec.hpp"
#include "pufauth/calibration.hpp"
#include "pufauth/entity.hpp"
#include "pufauth/hamming.hpp"
#include "pufauth/net.hpp"
#include "pufauth/puf_model.hpp"
#include "pufauth/rng.hpp"
#include "pufauth/sweep.hpp"
#include "pufauth/verifier.hpp"

using namespace pufauth;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& msg) {
    if (!ok) throw Failure(msg);
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// Shared fixtures: both full default-plan sweep runs live under one temp root
// so later criteria reuse what earlier ones produced.
struct Context {
    std::filesystem::path root;
    std::filesystem::path dir_a, dir_b;
    bool have_a = false, have_b = false;
    std::vector<std::filesystem::path> written_a, written_b;

    Context() {
        root = std::filesystem::temp_directory_path() /
               ("pufauth_acceptance_" + std::to_string(::getpid()));
        dir_a = root / "sweep_a";
        dir_b = root / "sweep_b";
        std::filesystem::create_directories(root);
    }
    ~Context() {
        if (!std::getenv("PUFAUTH_ACCEPT_KEEP")) {
            std::error_code ec;
            std::filesystem::remove_all(root, ec);
        }
    }

    static ExperimentPlan default_plan(const std::filesystem::path& out) {
        ExperimentPlan plan = ExperimentPlan::defaults();
        plan.out_dir = out;
        return plan;
    }
    void ensure_a() {
        if (have_a) return;
        written_a = run_sweep(default_plan(dir_a));
        have_a = true;
    }
    void ensure_b() {
        if (have_b) return;
        written_b = run_sweep(default_plan(dir_b));
        have_b = true;
    }
};

// ---- tiny CSV reader -------------------------------------------------------

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Failure("missing CSV column '" + name + "'");
    }
};

Csv read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    check(in.good(), "cannot open " + path.string());
    Csv csv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (csv.header.empty())
            csv.header = std::move(cells);
        else
            csv.rows.push_back(std::move(cells));
    }
    check(!csv.header.empty(), "empty CSV " + path.string());
    return csv;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    check(in.good(), "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---- codeword position bookkeeping ------------------------------------------
// Independent of the codec internals: parity lives at power-of-two 1-based
// positions (plus the appended extended bit), data fills the rest ascending.
// parity_bit maps a position to its bit inside the stored parity byte.

struct Layout {
    std::vector<int> data_index;
    std::vector<int> parity_bit;
};

Layout layout_of(HammingVariant v) {
    Layout L;
    L.data_index.assign(v.codeword_bits() + 1, -1);
    L.parity_bit.assign(v.codeword_bits() + 1, -1);
    int d = 0, p = 0;
    for (unsigned pos = 1; pos <= v.base_bits(); ++pos) {
        if ((pos & (pos - 1)) == 0)
            L.parity_bit[pos] = p++;
        else
            L.data_index[pos] = d++;
    }
    if (v.extended) L.parity_bit[v.codeword_bits()] = static_cast<int>(v.parity_bits()) - 1;
    return L;
}

BitVector data_bits_of(std::uint32_t data, unsigned width) {
    BitVector raw(width);
    for (unsigned i = 0; i < width; ++i)
        if ((data >> i) & 1u) raw.set(i, true);
    return raw;
}

std::uint32_t data_of(const BitVector& bits) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        out |= static_cast<std::uint32_t>(bits.get(i)) << i;
    return out;
}

// Injects codeword-position errors by mutating the raw data bits or the
// stored parity byte, whichever the position maps to.
struct BlockCase {
    BitVector raw;
    HelperData helper;

    BlockCase(HammingVariant v, std::uint32_t data)
        : raw(data_bits_of(data, v.data_bits)),
          helper{v, {detail::parity_byte_from_codeword(detail::encode_block(data, v), v)}} {}

    void corrupt(const Layout& L, unsigned pos) {
        if (L.data_index[pos] >= 0)
            raw.flip(static_cast<std::size_t>(L.data_index[pos]));
        else
            helper.parity_blocks[0] ^= static_cast<std::uint8_t>(1u << L.parity_bit[pos]);
    }
    DecodeReport decode_now() const { return decode(raw, helper); }
};

// ---- criterion 1 ------------------------------------------------------------

void single_error_case(HammingVariant v, const Layout& L, std::uint32_t data, unsigned pos) {
    BlockCase block(v, data);
    block.corrupt(L, pos);
    const DecodeReport rep = block.decode_now();
    check(rep.codeword_count() == 1 && rep.single_corrected == 1,
          fmt("%s data=%u pos=%u: not reported as a single correction", v.name().c_str(), data,
              pos));
    check(data_of(rep.corrected) == data,
          fmt("%s data=%u pos=%u: decode returned %u", v.name().c_str(), data, pos,
              data_of(rep.corrected)));
}

void criterion1(Context&) {
    for (unsigned width : {4u, 8u}) {
        for (bool extended : {false, true}) {
            const HammingVariant v = HammingVariant::make(width, extended);
            const Layout L = layout_of(v);
            for (std::uint32_t data = 0; data < (1u << width); ++data)
                for (unsigned pos = 1; pos <= v.codeword_bits(); ++pos)
                    single_error_case(v, L, data, pos);
        }
    }
    for (bool extended : {false, true}) {
        const HammingVariant v = HammingVariant::make(16, extended);
        const Layout L = layout_of(v);
        Rng rng(20260819);
        for (int i = 0; i < 10000; ++i) {
            const auto data = static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFu);
            const auto pos = static_cast<unsigned>(1 + rng.next_u64() % v.codeword_bits());
            single_error_case(v, L, data, pos);
        }
    }
}

// ---- criterion 2 ------------------------------------------------------------

void criterion2(Context&) {
    // SECDED: every 2-bit pattern is flagged and nothing is "fixed"
    for (unsigned width : {4u, 8u}) {
        const HammingVariant v = HammingVariant::make(width, true);
        const Layout L = layout_of(v);
        const unsigned cw = v.codeword_bits();
        std::size_t cases = 0;
        for (std::uint32_t data = 0; data < (1u << width); ++data) {
            for (unsigned p1 = 1; p1 <= cw; ++p1) {
                for (unsigned p2 = p1 + 1; p2 <= cw; ++p2) {
                    BlockCase block(v, data);
                    block.corrupt(L, p1);
                    block.corrupt(L, p2);
                    const BitVector as_read = block.raw;
                    const DecodeReport rep = block.decode_now();
                    check(rep.double_detected == 1,
                          fmt("%s data=%u pos=(%u,%u): double error not detected",
                              v.name().c_str(), data, p1, p2));
                    check(rep.bit_flips_applied == 0 && rep.corrected == as_read,
                          fmt("%s data=%u pos=(%u,%u): decoder modified flagged data",
                              v.name().c_str(), data, p1, p2));
                    ++cases;
                }
            }
        }
        const std::size_t expected = (1u << width) * (cw * (cw - 1) / 2);
        check(cases == expected, fmt("%s: covered %zu of %zu patterns", v.name().c_str(), cases,
                                     expected));
    }

    // Plain SEC: every 2-bit pattern aliases to a third position, ending at
    // Hamming distance 3 from the enrolled codeword with the wrong data.
    const HammingVariant v = HammingVariant::make(4, false);
    const Layout L = layout_of(v);
    for (std::uint32_t data = 0; data < 16; ++data) {
        const std::uint32_t cw = detail::encode_block(data, v);
        for (unsigned p1 = 1; p1 <= 7; ++p1) {
            for (unsigned p2 = p1 + 1; p2 <= 7; ++p2) {
                const std::uint32_t corrupted = cw ^ (1u << (p1 - 1)) ^ (1u << (p2 - 1));
                // textbook syndrome: XOR of the 1-based set positions
                unsigned syndrome = 0;
                for (unsigned pos = 1; pos <= 7; ++pos)
                    if ((corrupted >> (pos - 1)) & 1u) syndrome ^= pos;
                check(syndrome != 0 && syndrome != p1 && syndrome != p2,
                      fmt("H(7,4) data=%u pos=(%u,%u): syndrome %u not a third position", data,
                          p1, p2, syndrome));
                const std::uint32_t miscorrected = corrupted ^ (1u << (syndrome - 1));
                check(std::popcount(miscorrected ^ cw) == 3,
                      fmt("H(7,4) data=%u pos=(%u,%u): result not at distance 3", data, p1, p2));

                BlockCase block(v, data);
                block.corrupt(L, p1);
                block.corrupt(L, p2);
                const DecodeReport rep = block.decode_now();
                check(rep.single_corrected == 1,
                      fmt("H(7,4) data=%u pos=(%u,%u): decoder did not treat it as single", data,
                          p1, p2));
                const std::uint32_t got = data_of(rep.corrected);
                check(got == detail::data_from_codeword(miscorrected, v) && got != data,
                      fmt("H(7,4) data=%u pos=(%u,%u): decoded %u, aliased codeword says %u",
                          data, p1, p2, got, detail::data_from_codeword(miscorrected, v)));
            }
        }
    }
}

// ---- criterion 3 ------------------------------------------------------------

void criterion3(Context&) {
    for (std::size_t n : {std::size_t{8}, std::size_t{12}, std::size_t{16}}) {
        std::vector<std::uint64_t> weight_count(n + 1, 0);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
            ++weight_count[std::popcount(mask)];
        const ImpostorModel model = ImpostorModel::ideal(n);
        std::uint64_t cumulative = 0;
        for (std::size_t k = 0; k <= n; ++k) {
            cumulative += weight_count[k];
            const double exact = static_cast<double>(cumulative) /
                                 static_cast<double>(std::uint64_t{1} << n);
            const double got = far(model, static_cast<double>(k) / static_cast<double>(n));
            check(std::abs(got - exact) <= 1e-12 * exact,
                  fmt("far(n=%zu, k=%zu) = %.17g, enumeration says %.17g", n, k, got, exact));
        }
    }
}

// ---- criterion 4 ------------------------------------------------------------

void criterion4(Context&) {
    const TauMax floored = tau_max(ImpostorModel::ideal(16), 1e-6);
    check(floored.floored && floored.tau == 0.0,
          fmt("tau_max(n=16, alpha=1e-6) = %.17g floored=%d", floored.tau,
              floored.floored ? 1 : 0));
    const double k0 = far(ImpostorModel::ideal(16), 0.0);
    check(std::abs(k0 - 1.52587890625e-5) <= 1e-12 * k0,
          fmt("far(n=16, tau=0) = %.17g, want 2^-16", k0));

    std::vector<std::size_t> small;
    for (std::size_t n = 1; n <= 16; ++n) small.push_back(n);
    for (const DeltaSmRow& row : delta_sm_sweep(1e-6, 1e-9, small)) {
        check(row.floored_base && row.floored_tight,
              fmt("n=%zu: expected both alphas floored", row.n));
        check(row.delta_sm == 0.0 && row.tau_max_base == 0.0 && row.tau_max_tight == 0.0,
              fmt("n=%zu: delta_sm = %.17g, want exactly 0", row.n, row.delta_sm));
    }
}

// ---- criterion 5 ------------------------------------------------------------

const std::vector<unsigned> kVotesGrid = {1, 3, 5, 10, 20};

void criterion5(Context& ctx) {
    ctx.ensure_a();  // the sweep itself counts toward this criterion's budget
    const Csv csv = read_csv(ctx.dir_a / "ber_vs_votes.csv");
    const std::size_t c_votes = csv.col("votes"), c_variant = csv.col("variant"),
                      c_ber = csv.col("ber");

    std::map<std::pair<std::string, unsigned>, std::pair<double, std::size_t>> agg;
    for (const auto& row : csv.rows) {
        auto& cell = agg[{row[c_variant], static_cast<unsigned>(std::stoul(row[c_votes]))}];
        cell.first += std::stod(row[c_ber]);
        cell.second += 1;
    }
    const auto mean = [&](const std::string& variant, unsigned votes) {
        const auto it = agg.find({variant, votes});
        check(it != agg.end(), fmt("no rows for variant=%s N=%u", variant.c_str(), votes));
        return it->second.first / static_cast<double>(it->second.second);
    };

    // (a) more votes never hurt, for every variant
    const std::vector<std::string> variants = {"none",  "H7-4",   "H8-4",  "H12-8",
                                               "H13-8", "H21-16", "H22-16"};
    for (const auto& variant : variants) {
        for (std::size_t i = 1; i < kVotesGrid.size(); ++i) {
            const double prev = mean(variant, kVotesGrid[i - 1]);
            const double cur = mean(variant, kVotesGrid[i]);
            check(cur <= prev, fmt("variant=%s: mean BER rose from %.6g (N=%u) to %.6g (N=%u)",
                                   variant.c_str(), prev, kVotesGrid[i - 1], cur, kVotesGrid[i]));
        }
    }

    // (b) stronger codes mean lower post-auth BER, at N=1 and N=20
    const auto family_mean = [&](const std::vector<std::string>& members, unsigned votes) {
        double sum = 0;
        std::size_t count = 0;
        for (const auto& m : members) {
            const auto it = agg.find({m, votes});
            check(it != agg.end(), fmt("no rows for variant=%s N=%u", m.c_str(), votes));
            sum += it->second.first;
            count += it->second.second;
        }
        return sum / static_cast<double>(count);
    };
    for (unsigned votes : {1u, 20u}) {
        const double f74 = family_mean({"H7-4", "H8-4"}, votes);
        const double f128 = family_mean({"H12-8", "H13-8"}, votes);
        const double f2116 = family_mean({"H21-16", "H22-16"}, votes);
        const double none = family_mean({"none"}, votes);
        check(f74 < f128 && f128 < f2116 && f2116 < none,
              fmt("N=%u: family ordering broken: 7-4=%.6g 12-8=%.6g 21-16=%.6g none=%.6g", votes,
                  f74, f128, f2116, none));
    }

    // (c) the strongest code with N>=10 stays under 1% mean BER
    for (unsigned votes : {10u, 20u}) {
        const double m = mean("H7-4", votes);
        check(m < 0.01, fmt("H7-4 N=%u: mean BER %.6g not under 1%%", votes, m));
    }
}

// ---- criterion 6 ------------------------------------------------------------

void criterion6(Context& ctx) {
    const Csv csv = read_csv(ctx.dir_a / "uniformity.csv");
    const std::size_t c_device = csv.col("device_id"), c_stage = csv.col("stage"),
                      c_value = csv.col("uniformity");
    // per stage, per device: the uniformity of repeated reads
    std::map<std::string, std::map<std::string, std::vector<double>>> stages;
    for (const auto& row : csv.rows)
        stages[row[c_stage]][row[c_device]].push_back(std::stod(row[c_value]));

    const auto pooled_mean = [&](const std::string& stage) {
        const auto it = stages.find(stage);
        check(it != stages.end(), "missing stage " + stage);
        double sum = 0;
        std::size_t count = 0;
        for (const auto& [device, values] : it->second) {
            for (double x : values) sum += x;
            count += values.size();
        }
        check(count >= 200, fmt("stage %s: need >= 200 samples, have %zu", stage.c_str(), count));
        return sum / static_cast<double>(count);
    };
    // Stabilization removes read-to-read noise, so dispersion is judged per
    // device: the spread of one device's uniformity across repeated reads,
    // pooled over devices. (Across devices the stable words themselves differ,
    // which no amount of voting should or does remove.)
    const auto read_noise_sd = [&](const std::string& stage) {
        const auto it = stages.find(stage);
        check(it != stages.end(), "missing stage " + stage);
        double pooled_var = 0;
        std::size_t devices = 0;
        for (const auto& [device, values] : it->second) {
            check(values.size() >= 2, "need repeated reads per device");
            double sum = 0;
            for (double x : values) sum += x;
            const double mean = sum / static_cast<double>(values.size());
            double ss = 0;
            for (double x : values) ss += (x - mean) * (x - mean);
            pooled_var += ss / static_cast<double>(values.size() - 1);
            ++devices;
        }
        return std::sqrt(pooled_var / static_cast<double>(devices));
    };

    const double mv_mean = pooled_mean("mv");
    check(std::abs(mv_mean - 0.5) <= 0.02,
          fmt("stabilized uniformity mean %.6g outside 0.50 +/- 0.02", mv_mean));
    const double raw_sd = read_noise_sd("raw");
    const double ec_sd = read_noise_sd("mv_ec");
    check(ec_sd < raw_sd,
          fmt("dispersion did not tighten: sd(mv_ec)=%.6g vs sd(raw)=%.6g", ec_sd, raw_sd));
}

// ---- criterion 7 ------------------------------------------------------------

void criterion7(Context& ctx) {
    const Csv csv = read_csv(ctx.dir_a / "sm_scaling.csv");
    const std::size_t c_n = csv.col("n"), c_votes = csv.col("N"), c_variant = csv.col("variant"),
                      c_alpha = csv.col("alpha_far"), c_sm = csv.col("sm_ec");

    // sm_ec by (N, n) for the no-EC configs at alpha_far = 1e-6
    std::map<std::pair<unsigned, std::size_t>, double> sm;
    for (const auto& row : csv.rows) {
        if (row[c_variant] != "none" || std::stod(row[c_alpha]) != 1e-6) continue;
        sm[{static_cast<unsigned>(std::stoul(row[c_votes])), std::stoul(row[c_n])}] =
            std::stod(row[c_sm]);
    }
    const auto at = [&](unsigned votes, std::size_t n) {
        const auto it = sm.find({votes, n});
        check(it != sm.end(), fmt("missing sm_ec row for none N=%u n=%zu", votes, n));
        return it->second;
    };

    const std::vector<std::size_t> n_grid = {64, 128, 256, 512, 1024, 2048};
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        const double prev = at(20, n_grid[i - 1]);
        const double cur = at(20, n_grid[i]);
        check(cur >= prev, fmt("sm_ec fell from %.6g (n=%zu) to %.6g (n=%zu) at N=20", prev,
                               n_grid[i - 1], cur, n_grid[i]));
    }

    const double gain_n = at(20, 2048) - at(20, 64);
    const double gain_votes = at(20, 256) - at(1, 256);
    check(gain_n > gain_votes,
          fmt("scaling n gained %.6g, scaling N gained %.6g: n should dominate", gain_n,
              gain_votes));
}

// ---- criterion 8 ------------------------------------------------------------

void criterion8(Context&) {
    const std::vector<double> rho_grid = {0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    const std::vector<std::size_t> n_grid = {256, 2048};
    const auto rows = correlation_sweep(rho_grid, n_grid, 1e-6);
    check(rows.size() == rho_grid.size() * n_grid.size(), "unexpected correlation row count");

    for (std::size_t n : n_grid) {
        double prev = -1.0;
        for (double rho : rho_grid) {
            const auto it = std::find_if(rows.begin(), rows.end(), [&](const CorrelationRow& r) {
                return r.n == n && r.rho == rho;
            });
            check(it != rows.end(), fmt("missing correlation row rho=%.2f n=%zu", rho, n));
            if (rho == 0.0)
                check(it->delta_sm == 0.0,
                      fmt("rho=0 must cost exactly nothing, got %.17g at n=%zu", it->delta_sm, n));
            check(it->delta_sm >= prev,
                  fmt("delta_sm fell to %.6g at rho=%.2f n=%zu", it->delta_sm, rho, n));
            prev = it->delta_sm;
        }
    }
}

// ---- criterion 9 ------------------------------------------------------------

void criterion9(Context& ctx) {
    // threshold calibrated from the sweep's genuine BER table
    const CalibrateOutput cal = calibrate_from_csv(ctx.dir_a / "ber_vs_votes.csv", 1e-6, 0.01, 64);
    const HammingVariant h84 = HammingVariant::make(4, true);
    double tau = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < cal.results.size(); ++i) {
        const CalibrationResult& r = cal.results[i];
        if (r.tag.n == 2048 && r.tag.votes == 5 && r.tag.variant == h84) {
            check(r.viable, "calibrated (n=2048, N=5, H(8,4)) config is not viable");
            tau = cal.recommended_tau[i];
        }
    }
    check(!std::isnan(tau), "no calibration row for (n=2048, N=5, H(8,4))");

    const auto case_dir = ctx.root / "c9";
    std::filesystem::create_directories(case_dir / "helpers");
    VerifierConfig cfg;
    cfg.store_path = case_dir / "store.jsonl";
    cfg.policy.tau_ber = tau;
    cfg.policy.source = "calibrated";
    cfg.nonce_seed = 4242;

    NoiseProfile noise;
    const auto client = [&](std::uint64_t master_seed, std::uint64_t read_salt) {
        PufDevice device = generate_device(master_seed, "dev00", 2048, noise);
        EntityConfig ecfg;
        ecfg.device_id = "dev00";
        ecfg.helper_dir = case_dir / "helpers";
        return EntityClient(std::move(ecfg),
                            std::make_unique<SimulatedSource>(
                                std::move(device), derive_seed(master_seed, read_salt)));
    };
    EntityClient genuine = client(42, hash_string("genuine-reads"));
    EntityClient impostor = client(20250777, hash_string("impostor-reads"));

    const auto auth_once = [](EntityClient& c, std::uint16_t port) {
        net::TcpStream stream = net::TcpStream::connect("127.0.0.1", port);
        return c.authenticate_over(stream);
    };
    const auto run_half = [&](std::uint16_t port, int base) {
        for (int i = 0; i < 25; ++i) {
            const AuthOutcome got = auth_once(genuine, port);
            check(got.accepted, fmt("genuine auth %d rejected: ber=%.6g tau=%.6g", base + i,
                                    got.measured_ber, got.tau));
        }
        for (int i = 0; i < 25; ++i) {
            const AuthOutcome got = auth_once(impostor, port);
            check(!got.accepted, fmt("impostor auth %d accepted: ber=%.6g tau=%.6g", base + i,
                                     got.measured_ber, got.tau));
        }
    };

    {
        Verifier v1(cfg);
        std::thread runner([&] { v1.run(); });
        net::TcpStream stream = net::TcpStream::connect("127.0.0.1", v1.port());
        const EnrollOutcome enrolled = genuine.enroll_over(stream, 0, 2048, 5, h84, false, false);
        check(enrolled.stored_bits == 2048, "enrollment did not store 2048 bits");
        run_half(v1.port(), 0);
        v1.stop();
        runner.join();
    }
    {
        // fresh process-equivalent: same store, new listener, new nonces
        Verifier v2(cfg);
        std::thread runner([&] { v2.run(); });
        run_half(v2.port(), 25);
        v2.stop();
        runner.join();
    }
}

// ---- criterion 10 -----------------------------------------------------------

void criterion10(Context& ctx) {
    ctx.ensure_b();
    check(ctx.written_a.size() == ctx.written_b.size(), "artifact lists differ in length");
    for (std::size_t i = 0; i < ctx.written_a.size(); ++i) {
        const auto name = ctx.written_a[i].filename().string();
        check(name == ctx.written_b[i].filename().string(), "artifact order differs");
        if (name == "timing.csv") {
            // wall-clock values are machine noise; stage structure must match
            const Csv a = read_csv(ctx.written_a[i]);
            const Csv b = read_csv(ctx.written_b[i]);
            check(a.rows.size() == b.rows.size(), "timing.csv row counts differ");
            for (std::size_t r = 0; r < a.rows.size(); ++r)
                check(a.rows[r][0] == b.rows[r][0] && a.rows[r][1] == b.rows[r][1],
                      "timing.csv stages differ between runs");
            continue;
        }
        check(read_file(ctx.written_a[i]) == read_file(ctx.written_b[i]),
              name + " differs between identically seeded runs");
    }
}

// ---- harness ----------------------------------------------------------------

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0 = unbounded
    void (*prepare)(Context&);
    void (*fn)(Context&);
};

void prepare_sweep_a(Context& ctx) { ctx.ensure_a(); }

const Criterion kCriteria[] = {
    {1, "single-bit errors always decode to the enrolled data", 10.0, nullptr, criterion1},
    {2, "SECDED flags double errors; plain SEC aliases them", 30.0, nullptr, criterion2},
    {3, "binomial FAR matches exhaustive enumeration", 0.0, nullptr, criterion3},
    {4, "tau_max floors to zero for small n at tight alpha", 0.0, nullptr, criterion4},
    {5, "BER falls with votes and code strength", 300.0, nullptr, criterion5},
    {6, "stabilized responses stay uniform, dispersion tightens", 0.0, prepare_sweep_a,
     criterion6},
    {7, "security margin scales with n more than with N", 0.0, prepare_sweep_a, criterion7},
    {8, "correlation cost is zero at rho=0 and monotone", 0.0, nullptr, criterion8},
    {9, "loopback protocol: calibrated accepts, impostors rejected", 120.0, prepare_sweep_a,
     criterion9},
    {10, "identically seeded sweeps are byte-identical", 0.0, prepare_sweep_a, criterion10},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }

    Context ctx;
    int ran = 0, passed = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        std::string failure;
        if (c.prepare) {
            try {
                c.prepare(ctx);
            } catch (const std::exception& e) {
                failure = fmt("fixture failed: %s", e.what());
            }
        }
        const auto start = std::chrono::steady_clock::now();
        if (failure.empty()) {
            try {
                c.fn(ctx);
            } catch (const std::exception& e) {
                failure = e.what();
            }
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (failure.empty() && c.budget_seconds > 0 && elapsed > c.budget_seconds)
            failure = fmt("over budget: %.1fs > %.0fs", elapsed, c.budget_seconds);

        if (failure.empty()) {
            ++passed;
            std::printf("criterion %d: PASS (%.1fs) %s\n", c.id, elapsed, c.title);
        } else {
            std::printf("criterion %d: FAIL (%.1fs) %s -- %s\n", c.id, elapsed, c.title,
                        failure.c_str());
        }
        std::fflush(stdout);
    }

    if (only != 0 && ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    std::printf("acceptance: %d/%d criteria passed\n", passed, ran);
    return passed == ran ? 0 : 1;
}
