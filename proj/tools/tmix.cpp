// tmix: experiment runner for the self-similar mixing laboratory.
//
// Subcommands: mix, regloss, norms, selftest. A static key-value config
// file provides defaults; command-line flags win. Exit codes: 0 success,
// 1 configuration error, 2 numeric gate failure, 3 I/O error.

#include <CLI11.hpp>

#include <iostream>

#include "tmix/experiments.hpp"

namespace {

struct FlagOverrides {
    std::string config_path;
    std::string out_dir, mixer, sampling, input, golden_dir;
    double s = -1, lambda = -1, kappa = -1, delta = -1, dt = -1, p = -1;
    int grid = -1, nmax = -1;

    void apply(tmix::ExperimentConfig& cfg) const {
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!mixer.empty()) cfg.mixer = mixer;
        if (!sampling.empty()) cfg.sampling = sampling;
        if (!input.empty()) cfg.input = input;
        if (!golden_dir.empty()) cfg.golden_dir = golden_dir;
        if (s >= 0) cfg.s = s;
        if (lambda >= 0) cfg.lambda = lambda;
        if (kappa >= 0) cfg.kappa = kappa;
        if (delta >= 0) cfg.delta = delta;
        if (dt >= 0) cfg.dt = dt;
        if (p >= 0) cfg.p = p;
        if (grid >= 0) cfg.grid_n = grid;
        if (nmax >= 0) cfg.n_max = nmax;
    }
};

void add_common_flags(CLI::App* cmd, FlagOverrides& fo) {
    cmd->add_option("--config", fo.config_path, "config file (key = value lines)");
    cmd->add_option("--out", fo.out_dir, "output directory");
    cmd->add_option("--grid", fo.grid, "grid points per axis (2^a*3^b)");
    cmd->add_option("--nmax", fo.nmax, "number of self-similar levels / cubes");
    cmd->add_option("--s", fo.s, "Sobolev exponent of the velocity constraint");
    cmd->add_option("--p", fo.p, "integrability exponent");
    cmd->add_option("--lambda", fo.lambda, "mixer scale factor (0 = mixer default)");
    cmd->add_option("--kappa", fo.kappa, "geometric-scale kappa in (0, 1/2)");
    cmd->add_option("--delta", fo.delta, "pinch regularization");
    cmd->add_option("--dt", fo.dt, "integrator time step");
    cmd->add_option("--mixer", fo.mixer, "pinch | snake");
    cmd->add_option("--sampling", fo.sampling, "nearest | bicubic");
}

tmix::ExperimentConfig load_config(const FlagOverrides& fo, const std::string& command) {
    tmix::ExperimentConfig cfg;
    if (!fo.config_path.empty()) cfg = tmix::ExperimentConfig::from_file(fo.config_path);
    fo.apply(cfg);
    cfg.command = command;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tmix: self-similar mixing experiments on the 2-torus"};
    app.require_subcommand(1);

    FlagOverrides fo_mix, fo_reg, fo_norms, fo_self;
    CLI::App* mix = app.add_subcommand("mix", "run a self-similar mixing experiment");
    add_common_flags(mix, fo_mix);
    CLI::App* reg = app.add_subcommand("regloss", "run the loss-of-regularity experiment");
    add_common_flags(reg, fo_reg);
    CLI::App* nrm = app.add_subcommand("norms", "report norms of a field snapshot");
    add_common_flags(nrm, fo_norms);
    nrm->add_option("--input", fo_norms.input, "TMIX01 snapshot path");
    CLI::App* self = app.add_subcommand("selftest", "run the reduced invariant suite");
    add_common_flags(self, fo_self);
    self->add_option("--golden", fo_self.golden_dir, "golden data directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (mix->parsed()) {
            tmix::ExperimentConfig cfg = load_config(fo_mix, "mix");
            tmix::RunReport rep = tmix::run_mix(cfg);
            std::cout << "regime = " << rep.regime << ", T_infinity = " << rep.T_infinity
                      << ", M = " << rep.M << "\n"
                      << "hm1 rate = " << rep.hm1_fit.rate
                      << ", geom rate = " << rep.geom_fit.rate
                      << ", envelope violations = " << rep.envelope_violations << "\n"
                      << "csv: " << rep.csv_path << "\nreport: " << rep.report_path << "\n";
            if (!rep.passed) {
                std::cerr << "gate failure: " << rep.failure << "\n";
                return 2;
            }
            return 0;
        }
        if (reg->parsed()) {
            tmix::ExperimentConfig cfg = load_config(fo_reg, "regloss");
            tmix::RunReport rep = tmix::run_regloss(cfg);
            std::cout << "csv: " << rep.csv_path << "\nsummary: " << rep.report_path << "\n";
            if (!rep.passed) {
                std::cerr << "gate failure: " << rep.failure << "\n";
                return 2;
            }
            return 0;
        }
        if (nrm->parsed()) {
            tmix::ExperimentConfig cfg = load_config(fo_norms, "norms");
            return tmix::run_norms(cfg, std::cout);
        }
        tmix::ExperimentConfig cfg = load_config(fo_self, "selftest");
        return tmix::run_selftest(cfg, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::overflow_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    }
}
