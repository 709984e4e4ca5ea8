#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "pufauth/calibration.hpp"
#include "pufauth/entity.hpp"
#include "pufauth/net.hpp"
#include "pufauth/sweep.hpp"
#include "pufauth/verifier.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitReject = 2;     // protocol-level rejection (auth denied, ERROR frame)
constexpr int kExitBadConfig = 3;  // invalid flags/plan/parameters
constexpr int kExitTransport = 4;  // connect/bind/stream failures

using namespace pufauth;

// --out beats PUFAUTH_OUT beats the built-in default.
std::filesystem::path resolve_out_dir(const CLI::Option* opt, const std::filesystem::path& given,
                                      const std::filesystem::path& fallback) {
    if (opt->count() > 0) return given;
    if (const char* env = std::getenv("PUFAUTH_OUT"); env && *env) return env;
    return fallback;
}

std::optional<HammingVariant> parse_variant_flag(const std::string& text) {
    return parse_variant(text);  // throws std::invalid_argument on garbage
}

struct EntityFlags {
    std::string connect = "127.0.0.1:7411";
    std::string device_id;
    std::uint64_t seed = 42;
    std::string dump;
    std::size_t cells = 2048;
    std::filesystem::path helper_dir = "helpers";
    unsigned read_skip = 0;
};

void add_entity_flags(CLI::App* cmd, EntityFlags& f) {
    cmd->add_option("--connect", f.connect, "verifier address host:port")->capture_default_str();
    cmd->add_option("--device-id", f.device_id, "entity device identifier")->required();
    cmd->add_option("--seed", f.seed, "master seed for the simulated device")
        ->capture_default_str();
    cmd->add_option("--dump", f.dump, "replay raw reads from a recorded dump file");
    cmd->add_option("--cells", f.cells, "simulated SRAM cells per read")->capture_default_str();
    cmd->add_option("--helper-dir", f.helper_dir, "directory for entity-side helper data")
        ->capture_default_str();
    cmd->add_option("--read-skip", f.read_skip,
                    "discard this many raw reads before the first operation");
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon + 1 >= addr.size())
        throw std::invalid_argument("address must be host:port, got '" + addr + "'");
    const unsigned long port = std::stoul(addr.substr(colon + 1));
    if (port > 65535) throw std::invalid_argument("port out of range in '" + addr + "'");
    return {addr.substr(0, colon), static_cast<std::uint16_t>(port)};
}

EntityClient make_entity(const EntityFlags& f) {
    std::unique_ptr<PufSource> source;
    if (!f.dump.empty()) {
        source = std::make_unique<DumpSource>(f.dump);
    } else {
        NoiseProfile noise;
        PufDevice device = generate_device(f.seed, f.device_id, f.cells, noise);
        source = std::make_unique<SimulatedSource>(
            std::move(device), derive_seed(f.seed, hash_string("entity-reads"),
                                           hash_string(f.device_id)));
    }
    for (unsigned i = 0; i < f.read_skip; ++i)
        (void)source->stabilized_window_read(0, static_cast<std::uint32_t>(source->cells()), 1);
    auto [host, port] = split_host_port(f.connect);
    EntityConfig config;
    config.host = host;
    config.port = port;
    config.device_id = f.device_id;
    config.helper_dir = f.helper_dir;
    return EntityClient(std::move(config), std::move(source));
}

void print_auth(const AuthOutcome& outcome) {
    std::printf("auth device accepted=%d hd=%u threshold=%u n=%u ber=%.6g tau=%.6g%s\n",
                outcome.accepted ? 1 : 0, outcome.hd_bits, outcome.threshold_bits, outcome.n,
                outcome.measured_ber, outcome.tau,
                outcome.decoded_at_entity ? " ec=entity" : "");
}

// ---- report helpers ----------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("report: missing column '" + name + "'");
    }
};

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("report: cannot open " + path.string());
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (table.header.empty())
            table.header = cells;
        else
            table.rows.push_back(cells);
    }
    if (table.header.empty()) throw std::runtime_error("report: empty CSV " + path.string());
    return table;
}

// Minimal self-contained SVG polyline chart; one series per (label, points).
void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series) {
    const double width = 860, height = 480;
    const double ml = 70, mr = 170, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [label, pts] : series)
        for (const auto& [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) throw std::runtime_error("report: no data for chart " + title);
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    const auto sy = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("report: cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    char buf[128];
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        std::snprintf(buf, sizeof(buf), "%.4g", xv);
        out << "<text x=\"" << sx(xv) << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << buf
            << "</text>\n";
        std::snprintf(buf, sizeof(buf), "%.4g", yv);
        out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << buf
            << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
        << "</text>\n"
        << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 18 "
        << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";
    std::size_t si = 0;
    for (const auto& [label, pts] : series) {
        const char* color = palette[si % (sizeof(palette) / sizeof(palette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts) out << sx(x) << ',' << sy(y) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - mr + 10 << "\" y=\"" << mt + 16 + 16 * si
            << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"" << color << "\">" << label
            << "</text>\n";
        ++si;
    }
    out << "</svg>\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SRAM-PUF authentication toolkit: simulation, calibration, protocol, sweeps"};
    app.require_subcommand(1);

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "run the design-space sweep and write CSV artifacts");
    std::string plan_path;
    std::filesystem::path sweep_out = "out";
    std::uint64_t sweep_seed = 0;
    std::size_t sweep_iterations = 0, sweep_devices = 0;
    unsigned sweep_threads_flag = 0;
    bool print_plan = false;
    sweep_cmd->add_option("--config", plan_path, "experiment plan JSON (defaults used when absent)");
    auto* sweep_out_opt =
        sweep_cmd->add_option("--out", sweep_out, "output directory")->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_seed, "override the plan's master seed");
    sweep_cmd->add_option("--iterations", sweep_iterations, "override iterations per cell");
    sweep_cmd->add_option("--devices", sweep_devices, "override simulated device count");
    sweep_cmd->add_option("--threads", sweep_threads_flag, "worker threads (0 = hardware)");
    sweep_cmd->add_flag("--print-plan", print_plan, "print the effective plan JSON and exit");

    // ---- calibrate ----
    auto* cal_cmd = app.add_subcommand("calibrate", "derive tau_min/tau_max/SM_ec from a BER table");
    std::string cal_ber;
    std::filesystem::path cal_out = "calibration.csv";
    double cal_alpha_far = 1e-6, cal_alpha_frr = 0.01;
    std::size_t cal_n_min = kDefaultNMin;
    cal_cmd->add_option("--ber", cal_ber, "ber_vs_votes.csv produced by sweep")->required();
    auto* cal_out_opt =
        cal_cmd->add_option("--out", cal_out, "output CSV path")->capture_default_str();
    cal_cmd->add_option("--alpha-far", cal_alpha_far, "FAR target")->capture_default_str();
    cal_cmd->add_option("--alpha-frr", cal_alpha_frr, "FRR target")->capture_default_str();
    cal_cmd->add_option("--n-min", cal_n_min, "advisory minimum PUF size")->capture_default_str();

    // ---- serve ----
    auto* serve_cmd = app.add_subcommand("serve", "run the verifier endpoint");
    std::string listen = "127.0.0.1:7411";
    std::filesystem::path store_path = "crp_store.jsonl";
    std::filesystem::path audit_path;
    double serve_tau = 0.05;
    std::uint64_t nonce_seed = 0;
    std::size_t max_sessions = 0;
    serve_cmd->add_option("--listen", listen, "listen address host:port (port 0 = ephemeral)")
        ->capture_default_str();
    serve_cmd->add_option("--store", store_path, "CRP store JSONL path")->capture_default_str();
    serve_cmd->add_option("--audit", audit_path, "audit CSV path (append)");
    serve_cmd->add_option("--tau", serve_tau, "acceptance threshold tau_BER")->capture_default_str();
    serve_cmd->add_option("--nonce-seed", nonce_seed, "deterministic nonce seed (0 = random)");
    serve_cmd->add_option("--max-sessions", max_sessions, "exit after this many sessions (0 = run forever)");

    // ---- enroll ----
    auto* enroll_cmd = app.add_subcommand("enroll", "enroll an entity with the verifier");
    EntityFlags enroll_flags;
    std::uint32_t e_offset = 0, e_n = 2048;
    unsigned e_votes = 5;
    std::string e_variant = "H(8,4)";
    bool e_overwrite = false, e_ec_at_verifier = false;
    add_entity_flags(enroll_cmd, enroll_flags);
    enroll_cmd->add_option("--offset", e_offset, "challenge bit offset")->capture_default_str();
    enroll_cmd->add_option("--n", e_n, "challenge length in bits")->capture_default_str();
    enroll_cmd->add_option("--votes", e_votes, "majority-vote count N")->capture_default_str();
    enroll_cmd->add_option("--variant", e_variant, "EC variant, e.g. H(7,4) or none")
        ->capture_default_str();
    enroll_cmd->add_flag("--overwrite", e_overwrite, "replace an existing enrollment");
    enroll_cmd->add_flag("--ec-at-verifier", e_ec_at_verifier,
                         "ship helper data to the verifier and decode there");

    // ---- auth ----
    auto* auth_cmd = app.add_subcommand("auth", "authenticate an entity against the verifier");
    EntityFlags auth_flags;
    std::uint32_t a_offset = 0, a_n = 0;
    bool a_have_selector = false;
    add_entity_flags(auth_cmd, auth_flags);
    auto* a_off_opt = auth_cmd->add_option("--offset", a_offset, "challenge selector: offset");
    auto* a_n_opt = auth_cmd->add_option("--n", a_n, "challenge selector: length");
    (void)a_have_selector;

    // ---- entity (scripted enroll + repeated auth) ----
    auto* entity_cmd = app.add_subcommand("entity", "scripted entity: optional enroll, then auth attempts");
    EntityFlags entity_flags;
    bool ent_enroll = false;
    std::uint32_t ent_offset = 0, ent_n = 2048;
    unsigned ent_votes = 5;
    std::string ent_variant = "H(8,4)";
    bool ent_overwrite = false, ent_ec_at_verifier = false;
    std::size_t ent_auths = 1;
    add_entity_flags(entity_cmd, entity_flags);
    entity_cmd->add_flag("--enroll", ent_enroll, "enroll before authenticating");
    entity_cmd->add_option("--offset", ent_offset, "challenge bit offset")->capture_default_str();
    entity_cmd->add_option("--n", ent_n, "challenge length in bits")->capture_default_str();
    entity_cmd->add_option("--votes", ent_votes, "majority-vote count N")->capture_default_str();
    entity_cmd->add_option("--variant", ent_variant, "EC variant")->capture_default_str();
    entity_cmd->add_flag("--overwrite", ent_overwrite, "replace an existing enrollment");
    entity_cmd->add_flag("--ec-at-verifier", ent_ec_at_verifier, "verifier-side error correction");
    entity_cmd->add_option("--auths", ent_auths, "number of authentication attempts")
        ->capture_default_str();

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "summarize sweep artifacts, optionally as SVG charts");
    std::filesystem::path report_dir = "out";
    double rep_floor = kDefaultSmFloor, rep_ceil = kDefaultSmCeil;
    bool rep_svg = false;
    auto* report_dir_opt =
        report_cmd->add_option("--dir", report_dir, "sweep output directory")->capture_default_str();
    report_cmd->add_option("--sm-floor", rep_floor, "target-zone safety floor")->capture_default_str();
    report_cmd->add_option("--sm-ceil", rep_ceil, "target-zone over-provisioning ceiling")
        ->capture_default_str();
    report_cmd->add_flag("--svg", rep_svg, "emit delta_sm.svg and sm_scaling.svg");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_cmd->parsed()) {
            ExperimentPlan plan =
                plan_path.empty() ? ExperimentPlan::defaults() : ExperimentPlan::load(plan_path);
            plan.out_dir = resolve_out_dir(sweep_out_opt, sweep_out, plan.out_dir);
            if (sweep_cmd->count("--seed")) plan.master_seed = sweep_seed;
            if (sweep_iterations) plan.iterations = sweep_iterations;
            if (sweep_devices) plan.device_count = sweep_devices;
            if (sweep_cmd->count("--threads")) plan.threads = sweep_threads_flag;
            if (print_plan) {
                std::cout << plan.to_json() << '\n';
                return kExitOk;
            }
            plan.validate();
            const auto files = run_sweep(plan);
            for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
            return kExitOk;
        }

        if (cal_cmd->parsed()) {
            const auto out_file =
                resolve_out_dir(cal_out_opt, cal_out, std::filesystem::path("calibration.csv"));
            const CalibrateOutput out =
                calibrate_from_csv(cal_ber, cal_alpha_far, cal_alpha_frr, cal_n_min);
            write_calibration_csv(out_file, out);
            std::size_t viable = 0;
            for (const auto& r : out.results) viable += r.viable ? 1 : 0;
            std::printf("wrote %s (%zu configs, %zu viable)\n", out_file.string().c_str(),
                        out.results.size(), viable);
            return kExitOk;
        }

        if (serve_cmd->parsed()) {
            auto [host, port] = split_host_port(listen);
            VerifierConfig config;
            config.listen_host = host;
            config.port = port;
            config.store_path = store_path;
            config.audit_path = audit_path;
            config.policy.tau_ber = serve_tau;
            config.nonce_seed = nonce_seed;
            config.max_sessions = max_sessions;
            Verifier verifier(std::move(config));
            std::printf("listening on %s:%u store=%s tau=%.6g\n", host.c_str(), verifier.port(),
                        store_path.string().c_str(), serve_tau);
            std::fflush(stdout);
            verifier.run();
            return kExitOk;
        }

        if (enroll_cmd->parsed()) {
            EntityClient client = make_entity(enroll_flags);
            const auto variant = parse_variant_flag(e_variant);
            const EnrollOutcome outcome =
                client.enroll(e_offset, e_n, e_votes, variant, e_overwrite, e_ec_at_verifier);
            std::printf("enrolled device=%s offset=%u n=%u votes=%u variant=%s helper_bytes=%u%s%s\n",
                        enroll_flags.device_id.c_str(), e_offset, outcome.stored_bits, e_votes,
                        variant_name(variant).c_str(), outcome.helper_bytes,
                        outcome.helper_path.empty() ? "" : " helper=",
                        outcome.helper_path.empty() ? "" : outcome.helper_path.string().c_str());
            return kExitOk;
        }

        if (auth_cmd->parsed()) {
            EntityClient client = make_entity(auth_flags);
            std::optional<std::pair<std::uint32_t, std::uint32_t>> selector;
            if (a_off_opt->count() || a_n_opt->count()) {
                if (!(a_off_opt->count() && a_n_opt->count()))
                    throw std::invalid_argument("auth selector needs both --offset and --n");
                selector = {a_offset, a_n};
            }
            const AuthOutcome outcome = client.authenticate(selector);
            print_auth(outcome);
            return outcome.accepted ? kExitOk : kExitReject;
        }

        if (entity_cmd->parsed()) {
            EntityClient client = make_entity(entity_flags);
            const auto variant = parse_variant_flag(ent_variant);
            if (ent_enroll) {
                const EnrollOutcome outcome = client.enroll(ent_offset, ent_n, ent_votes, variant,
                                                            ent_overwrite, ent_ec_at_verifier);
                std::printf("enrolled device=%s n=%u helper_bytes=%u\n",
                            entity_flags.device_id.c_str(), outcome.stored_bits,
                            outcome.helper_bytes);
            }
            bool all_accepted = true;
            for (std::size_t i = 0; i < ent_auths; ++i) {
                const AuthOutcome outcome = client.authenticate();
                print_auth(outcome);
                all_accepted = all_accepted && outcome.accepted;
            }
            return all_accepted ? kExitOk : kExitReject;
        }

        if (report_cmd->parsed()) {
            const auto dir = resolve_out_dir(report_dir_opt, report_dir, report_dir);
            const CsvTable scaling = read_csv(dir / "sm_scaling.csv");
            const std::size_t c_n = scaling.column("n"), c_votes = scaling.column("N"),
                              c_var = scaling.column("variant"),
                              c_afar = scaling.column("alpha_far"),
                              c_tmin = scaling.column("tau_min"), c_tmax = scaling.column("tau_max"),
                              c_sm = scaling.column("sm_ec"), c_fl = scaling.column("floored"),
                              c_vi = scaling.column("viable"), c_nv = scaling.column("n_valid");

            std::map<std::string, std::size_t> zone_counts;
            std::vector<std::string> accepted_lines;
            for (const auto& row : scaling.rows) {
                CalibrationResult r;
                r.tag.n = std::stoul(row[c_n]);
                r.tag.votes = static_cast<unsigned>(std::stoul(row[c_votes]));
                r.tag.variant = parse_variant(row[c_var]);
                r.alpha_far = std::stod(row[c_afar]);
                r.tau_min = std::stod(row[c_tmin]);
                r.tau_max = std::stod(row[c_tmax]);
                r.sm_ec = std::stod(row[c_sm]);
                r.floored = row[c_fl] == "1";
                r.viable = row[c_vi] == "1";
                r.n_valid = row[c_nv] == "1";
                const ZoneLabel zone = zone_label(r, rep_floor, rep_ceil);
                ++zone_counts[zone_label_name(zone)];
                if (zone == ZoneLabel::accepted) {
                    char line[160];
                    std::snprintf(line, sizeof(line),
                                  "n=%-5zu N=%-3u variant=%-7s alpha_far=%-8s tau=[%.4f,%.4f] sm_ec=%.4f",
                                  r.tag.n, r.tag.votes, row[c_var].c_str(), row[c_afar].c_str(),
                                  r.tau_min, r.tau_max, r.sm_ec);
                    accepted_lines.push_back(line);
                }
            }

            std::ofstream report(dir / "report.txt", std::ios::trunc);
            if (!report) throw std::runtime_error("report: cannot write report.txt");
            report << "target zone: " << rep_floor << " <= sm_ec <= " << rep_ceil << "\n\nzones:\n";
            for (const auto& [zone, count] : zone_counts)
                report << "  " << zone << ": " << count << '\n';
            report << "\naccepted configs (" << accepted_lines.size() << "):\n";
            for (const auto& line : accepted_lines) report << "  " << line << '\n';
            report.close();
            std::printf("wrote %s\n", (dir / "report.txt").string().c_str());

            if (rep_svg) {
                const CsvTable delta = read_csv(dir / "delta_sm.csv");
                const std::size_t d_n = delta.column("n"), d_delta = delta.column("delta_sm");
                std::vector<std::pair<double, double>> pts;
                for (const auto& row : delta.rows)
                    pts.push_back({std::stod(row[d_n]), std::stod(row[d_delta])});
                write_svg_chart(dir / "delta_sm.svg", "Tightening alpha_FAR: delta SM_ec vs n",
                                "PUF size n (bits)", "delta SM_ec",
                                {{"delta_sm", std::move(pts)}});

                // sm_ec vs n for the no-EC configs at the base alpha, one series per N
                std::map<unsigned, std::vector<std::pair<double, double>>> series;
                const std::string base_alpha =
                    scaling.rows.empty() ? "" : scaling.rows.front()[c_afar];
                for (const auto& row : scaling.rows) {
                    if (row[c_var] != "none" || row[c_afar] != base_alpha) continue;
                    series[static_cast<unsigned>(std::stoul(row[c_votes]))].push_back(
                        {std::stod(row[c_n]), std::stod(row[c_sm])});
                }
                std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> svg_series;
                for (auto& [votes, pts2] : series) {
                    std::sort(pts2.begin(), pts2.end());
                    svg_series.push_back({"N=" + std::to_string(votes), std::move(pts2)});
                }
                write_svg_chart(dir / "sm_scaling.svg", "SM_ec vs n (no EC, alpha_FAR=" + base_alpha + ")",
                                "PUF size n (bits)", "SM_ec", svg_series);
                std::printf("wrote %s and %s\n", (dir / "delta_sm.svg").string().c_str(),
                            (dir / "sm_scaling.svg").string().c_str());
            }
            return kExitOk;
        }
    } catch (const net::ProtocolError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitReject;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTransport;
    }
    return kExitBadConfig;
}
