// Batch driver over the experiment modes; see README for the CSV formats.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "latdisc/experiments.hpp"

namespace {

using latdisc::experiments::ExperimentConfig;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// `key = value` lines; blank lines and '#' comments skipped; values
// override whatever the flags set.
void apply_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "mode")
            cfg.mode = val;
        else if (key == "domain")
            cfg.domain = val;
        else if (key == "theta-count")
            cfg.theta_count = std::stoi(val);
        else if (key == "seed")
            cfg.seed = std::stoull(val);
        else if (key == "jmin")
            cfg.j_min = std::stoi(val);
        else if (key == "jmax")
            cfg.j_max = std::stoi(val);
        else if (key == "samples")
            cfg.samples = std::stoi(val);
        else if (key == "out")
            cfg.out = val;
        else
            throw std::invalid_argument("unknown config key: " + key);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice remainder experiment driver"};
    ExperimentConfig cfg;
    std::string config_path;
    app.add_option("mode", cfg.mode,
                   "scaling | randol | fourier-profile | poisson-sandwich |"
                   " vdc")
        ->required();
    app.add_option("--domain", cfg.domain,
                   "superellipse:omega=W,a=A,b=B,theta=T");
    app.add_option("--theta-count", cfg.theta_count,
                   "rotations (or sweep size) per run");
    app.add_option("--seed", cfg.seed, "RNG seed; fixes the output bytes");
    app.add_option("--jmin", cfg.j_min, "first dyadic block exponent");
    app.add_option("--jmax", cfg.j_max, "last dyadic block exponent (<= 16)");
    app.add_option("--samples", cfg.samples, "t samples per dyadic block");
    app.add_option("--out", cfg.out, "output CSV path (default stdout)");
    app.add_option("--config", config_path,
                   "key = value file overriding the flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!config_path.empty()) apply_config_file(config_path, cfg);
        std::ostringstream body;
        const bool ok = latdisc::experiments::run_mode(cfg, body);
        if (cfg.out.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(cfg.out, std::ios::binary);
            if (!out) {
                std::cerr << "cannot open output path " << cfg.out << "\n";
                return 1;
            }
            out << body.str();
        }
        return ok ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "latdisc: " << e.what() << "\n";
        return 1;
    }
}
