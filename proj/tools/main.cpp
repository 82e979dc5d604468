/*
 * peakonlab: simulate the peakon flow, report spectral data, reconstruct
 * states from Weyl-series files, and verify forward/inverse round trips.
 *
 * Exit codes: 0 success (simulate: reached t_end), 10 collision, 11 blowup,
 * 2 input error, 3 integration failure, 4 reconstruction failure.
 */

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <cf/cf.hpp>

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<double> t_end;
    std::optional<double> rel_tol;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
    auto* c = cmd->add_option("--config", f.config_path, "run configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", f.out_dir, "output directory (overrides config)");
    cmd->add_option("--t-end", f.t_end, "integration end time (overrides config)");
    cmd->add_option("--rel-tol", f.rel_tol, "integrator relative tolerance (overrides config)");
    cmd->add_option("--format", f.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

int load_and_override(const CommonFlags& f, cf::RunConfig& cfg) {
    try {
        cfg = cf::load_config(f.config_path);
    } catch (const cf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cf::kExitInput;
    }
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (!f.format.empty()) cfg.format = f.format;
    if (f.t_end) cfg.t_end = *f.t_end;
    if (f.rel_tol) cfg.integ.rel_tol = *f.rel_tol;
    return cf::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"peakon flow and inverse-spectral laboratory"};
    app.require_subcommand(1);

    CommonFlags sim_f, spec_f, round_f, coll_f, inv_f;
    std::string weyl_path;

    CLI::App* sim = app.add_subcommand("simulate", "integrate the flow, emit trajectory CSVs");
    add_common(sim, sim_f, true);
    CLI::App* spec = app.add_subcommand("spectrum", "report trace invariants and the spectral curve");
    add_common(spec, spec_f, true);
    CLI::App* inv = app.add_subcommand("invert", "reconstruct a state from a Weyl-series file");
    inv->add_option("--weyl", weyl_path, "Weyl-series file")->required();
    add_common(inv, inv_f, false);
    CLI::App* round = app.add_subcommand("roundtrip", "forward -> Weyl -> inverse comparison");
    add_common(round, round_f, true);
    CLI::App* coll = app.add_subcommand("collide", "d=2 collision invariant and canonical form");
    add_common(coll, coll_f, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cf::kExitInput;
    }

    cf::RunConfig cfg;
    if (sim->parsed()) {
        if (int rc = load_and_override(sim_f, cfg)) return rc;
        return cf::cmd_simulate(cfg, std::cout);
    }
    if (spec->parsed()) {
        if (int rc = load_and_override(spec_f, cfg)) return rc;
        return cf::cmd_spectrum(cfg, std::cout);
    }
    if (inv->parsed()) {
        return cf::cmd_invert(weyl_path, std::cout, inv_f.format.empty() ? "csv" : inv_f.format);
    }
    if (round->parsed()) {
        if (int rc = load_and_override(round_f, cfg)) return rc;
        return cf::cmd_roundtrip(cfg, std::cout);
    }
    if (coll->parsed()) {
        if (int rc = load_and_override(coll_f, cfg)) return rc;
        return cf::cmd_collide(cfg, std::cout);
    }
    return cf::kExitInput;
}
