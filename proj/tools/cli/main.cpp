// trochoid command-line entry point.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trochoid/matrix_market.hpp"
#include "trochoid_app/calibrate.hpp"
#include "trochoid_app/config.hpp"
#include "trochoid_app/pipeline.hpp"
#include "trochoid_app/presets.hpp"
#include "trochoid_app/svg.hpp"

namespace {

using nlohmann::json;
using namespace trochoid;

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_config = 2;

// Flags that mirror config fields. Unset flags leave the config untouched.
struct EnsembleFlags {
    std::optional<std::string> type, distribution, placement;
    std::optional<int> n, d, k, sign, d2, k2;
    std::optional<double> weight, weight2, mean_degree, flip_prob, rho;

    void attach(CLI::App* app) {
        app->add_option("--ensemble", type, "dense-elliptic | dense-cyclic | regular-cyclic | poisson-cyclic | mixed-cyclic");
        app->add_option("--n", n, "dimension / node count");
        app->add_option("--d", d, "cycles per node (species 1 for mixed-cyclic)");
        app->add_option("--k", k, "correlation order / cycle length (species 1 for mixed-cyclic)");
        app->add_option("--weight", weight, "edge weight (species 1 for mixed-cyclic)");
        app->add_option("--d2", d2, "mixed-cyclic species 2 cycles per node");
        app->add_option("--k2", k2, "mixed-cyclic species 2 cycle length");
        app->add_option("--weight2", weight2, "mixed-cyclic species 2 edge weight");
        app->add_option("--mean-degree", mean_degree, "Poisson mean cycles per node");
        app->add_option("--flip-prob", flip_prob, "sign-flip probability p");
        app->add_option("--sign", sign, "target sign of the induced correlations (+1 or -1)");
        app->add_option("--rho", rho, "pair correlation of the dense-elliptic ensemble");
        app->add_option("--distribution", distribution, "gaussian | uniform");
        app->add_option("--placement", placement, "automatic | layered | shuffled");
    }

    void apply(json& ensemble) const {
        if (type && ensemble.value("type", "") != *type) ensemble = json{{"type", *type}};
        const bool mixed = ensemble.value("type", "") == "mixed-cyclic";
        auto species = [&](std::size_t r) -> json& {
            if (!ensemble.contains("species")) ensemble["species"] = json::array({json::object(), json::object()});
            return ensemble["species"][r];
        };
        if (n) ensemble["n"] = *n;
        if (d) (mixed ? species(0)["d"] : ensemble["d"]) = *d;
        if (k) (mixed ? species(0)["k"] : ensemble["k"]) = *k;
        if (weight) (mixed ? species(0)["weight"] : ensemble["weight"]) = *weight;
        if (d2) species(1)["d"] = *d2;
        if (k2) species(1)["k"] = *k2;
        if (weight2) species(1)["weight"] = *weight2;
        if (mean_degree) ensemble["mean_degree"] = *mean_degree;
        if (flip_prob) ensemble["flip_prob"] = *flip_prob;
        if (sign) ensemble["sign"] = *sign;
        if (rho) ensemble["rho"] = *rho;
        if (distribution) ensemble["distribution"] = *distribution;
        if (placement) ensemble["placement"] = *placement;
    }
};

struct RunFlags {
    std::optional<std::string> config_path;
    std::vector<std::uint64_t> seeds;
    std::optional<double> inflation;
    bool no_exclude = false;
    std::optional<std::string> out_dir;
    bool svg = false;
    std::optional<int> samples;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON experiment config");
        app->add_option("--seed", seeds, "seed (repeatable; replaces the config's list)");
        app->add_option("--inflation", inflation, "relative curve inflation for containment");
        app->add_flag("--no-exclude", no_exclude, "keep deterministic outliers in the containment count");
        app->add_option("--out-dir", out_dir, "directory for CSV/SVG artifacts and report.json");
        app->add_flag("--svg", svg, "also render one SVG per seed (needs --out-dir)");
        app->add_option("--boundary-samples", samples, "boundary sample count (>= 512)");
    }

    json load() const {
        if (!config_path) return json{{"ensemble", json::object()}};
        std::ifstream in(*config_path);
        if (!in) throw app::ConfigError("cannot open config file " + *config_path);
        try {
            return json::parse(in);
        } catch (const json::parse_error& e) {
            throw app::ConfigError("config " + *config_path + " is not valid JSON: " + e.what());
        }
    }

    void apply(json& j) const {
        if (!seeds.empty()) j["seeds"] = seeds;
        if (inflation) j["inflation"] = *inflation;
        if (no_exclude) j["exclude_outliers"] = false;
        if (samples) j["boundary_samples"] = *samples;
        if (out_dir) j["outputs"]["dir"] = *out_dir;
        if (svg) j["outputs"]["svg"] = true;
    }
};

struct LawFlags {
    std::string law = "dense-hypotrochoid";
    std::optional<int> k, k1, k2;
    std::optional<double> rho, d_hat, weight, d1, d2, w1, w2;
    std::vector<std::string> terms;

    void attach(CLI::App* app) {
        app->add_option("--law", law, "dense-hypotrochoid | dense-polytrochoid | sparse-hypotrochoid | mixed-cycle | mixed-cycle-asymptotic");
        app->add_option("--k", k, "order / cycle length");
        app->add_option("--rho", rho, "rho_k of the dense hypotrochoid");
        app->add_option("--term", terms, "k:rho pair of a polytrochoid (repeatable)");
        app->add_option("--d-hat", d_hat, "degree-biased cycle count of the sparse law");
        app->add_option("--weight", weight, "edge weight of the sparse law");
        app->add_option("--d1", d1, "mixed species 1 cycles per node");
        app->add_option("--k1", k1, "mixed species 1 cycle length");
        app->add_option("--w1", w1, "mixed species 1 weight");
        app->add_option("--d2", d2, "mixed species 2 cycles per node");
        app->add_option("--k2", k2, "mixed species 2 cycle length");
        app->add_option("--w2", w2, "mixed species 2 weight");
    }

    json to_json() const {
        json j{{"law", law}};
        if (law == "dense-polytrochoid") {
            json t = json::object();
            for (const auto& term : terms) {
                const auto colon = term.find(':');
                if (colon == std::string::npos) throw app::ConfigError("--term expects k:rho, got '" + term + "'");
                try {
                    t[term.substr(0, colon)] = std::stod(term.substr(colon + 1));
                } catch (const std::exception&) {
                    throw app::ConfigError("--term expects k:rho, got '" + term + "'");
                }
            }
            j["terms"] = t;
        } else if (law == "mixed-cycle" || law == "mixed-cycle-asymptotic") {
            json a = json::object(), b = json::object();
            if (d1) a["d"] = *d1;
            if (k1) a["k"] = *k1;
            if (w1) a["weight"] = *w1;
            if (d2) b["d"] = *d2;
            if (k2) b["k"] = *k2;
            if (w2) b["weight"] = *w2;
            j["species"] = json::array({a, b});
        } else {
            if (k) j["k"] = *k;
            if (rho) j["rho"] = *rho;
            if (d_hat) j["d_hat"] = *d_hat;
            if (weight) j["weight"] = *weight;
        }
        return j;
    }
};

void print_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

app::ExperimentConfig resolve(const RunFlags& run, const EnsembleFlags& ens) {
    json j = run.load();
    if (!j.is_object()) throw app::ConfigError("config must be a JSON object");
    json ensemble = j.value("ensemble", json::object());
    ens.apply(ensemble);
    j["ensemble"] = ensemble;
    run.apply(j);
    return app::parse_config(j);
}

void emit(const json& j, const std::optional<std::string>& path) {
    if (!path) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(*path);
    if (!out) throw IoError("cannot write " + *path);
    out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Random matrices and digraphs with cyclic correlations: generation, spectral boundaries, verification"};
    cli.require_subcommand(1);

    EnsembleFlags gen_ens;
    RunFlags gen_run;
    std::string gen_out;
    auto* generate = cli.add_subcommand("generate", "write one realisation as Matrix Market (+ cycle sidecar for digraphs)");
    gen_ens.attach(generate);
    gen_run.attach(generate);
    generate->add_option("--out", gen_out, "output .mtx path")->required();

    LawFlags law_flags;
    int law_samples = 2048;
    std::optional<std::string> law_out, density_out;
    int grid = 128;
    auto* boundary_cmd = cli.add_subcommand("boundary", "sample a predicted boundary curve (CSV phi,re,im)");
    law_flags.attach(boundary_cmd);
    boundary_cmd->add_option("--samples", law_samples, "number of samples (>= 512)");
    boundary_cmd->add_option("--out", law_out, "output CSV (default: stdout)");
    boundary_cmd->add_option("--density", density_out, "also write the interior density CSV (dense laws)");
    boundary_cmd->add_option("--grid", grid, "density grid cells per axis");

    EnsembleFlags ver_ens;
    RunFlags ver_run;
    std::optional<std::string> ver_report;
    auto* verify = cli.add_subcommand("verify", "generate, eigensolve and compare against the predicted laws");
    ver_ens.attach(verify);
    ver_run.attach(verify);
    verify->add_option("--report", ver_report, "write the JSON report here instead of stdout");

    std::string mom_input;
    std::vector<int> mom_pure, mom_mixed;
    std::optional<double> mom_rho3;
    auto* moments = cli.add_subcommand("moments", "trace moments of a stored matrix");
    moments->add_option("--input", mom_input, "Matrix Market file")->required();
    moments->add_option("--pure", mom_pure, "orders k of Tr M^k / n");
    moments->add_option("--mixed", mom_mixed, "orders l of Tr (M M^T)^l / n");
    moments->add_option("--rho3", mom_rho3, "rho_3 for Fuss-Catalan predictions");

    std::string render_spec, render_curve, render_out;
    auto* render = cli.add_subcommand("render", "SVG of a spectrum and a boundary");
    render->add_option("--spectrum", render_spec, "CSV re,im")->required();
    render->add_option("--boundary", render_curve, "CSV phi,re,im")->required();
    render->add_option("--out", render_out, "output SVG")->required();

    int cal_n = 1000, cal_k = 3, cal_sign = 1;
    double cal_target = 0.0, cal_tol = 0.10;
    std::vector<std::uint64_t> cal_seeds{1, 2};
    auto* calibrate = cli.add_subcommand("calibrate", "find the flip probability that yields a target rho_k");
    calibrate->add_option("--n", cal_n, "dimension");
    calibrate->add_option("--k", cal_k, "correlation order");
    calibrate->add_option("--target", cal_target, "target mean Tr M^k / n")->required();
    calibrate->add_option("--seed", cal_seeds, "seeds averaged per probe");
    calibrate->add_option("--tolerance", cal_tol, "relative tolerance");
    calibrate->add_option("--sign", cal_sign, "+1 or -1");

    std::string preset_name;
    std::vector<std::uint64_t> preset_seeds;
    std::optional<std::string> preset_dir;
    bool preset_svg = false, preset_print = false;
    auto* preset = cli.add_subcommand("preset", "run a figure reproduction ('list' shows the names)");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--seed", preset_seeds, "override the preset seeds");
    preset->add_option("--out-dir", preset_dir, "artifact directory (one subdirectory per panel)");
    preset->add_flag("--svg", preset_svg, "render SVGs (needs --out-dir)");
    preset->add_flag("--print-config", preset_print, "print the panel configs and exit");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return exit_config;
    }

    try {
        if (*generate) {
            const auto config = resolve(gen_run, gen_ens);
            ensemble::validate(config.ensemble);
            if (config.seeds.empty()) throw app::ConfigError("generate: no seed given");
            const auto written = app::run_generate(config.ensemble, config.seeds.front(), gen_out);
            json files = json::array();
            for (const auto& p : written) files.push_back(p.string());
            std::cout << json{{"written", files}}.dump() << "\n";
        } else if (*boundary_cmd) {
            const auto law = app::parse_law(law_flags.to_json());
            const auto curve = app::build_curve(law, law_samples);
            if (law_out) {
                std::ofstream out(*law_out);
                if (!out) throw IoError("cannot write " + *law_out);
                boundary::write_curve_csv(out, curve);
            } else {
                boundary::write_curve_csv(std::cout, curve);
            }
            if (density_out) {
                boundary::PolytrochoidParams poly;
                if (const auto* h = std::get_if<boundary::HypotrochoidParams>(&law)) {
                    poly = boundary::as_polytrochoid(*h);
                } else if (const auto* p = std::get_if<boundary::PolytrochoidParams>(&law)) {
                    poly = *p;
                } else {
                    throw app::ConfigError("--density needs a dense law");
                }
                const auto field = boundary::interior_density(poly, boundary::grid_around(curve, grid, grid));
                std::ofstream out(*density_out);
                if (!out) throw IoError("cannot write " + *density_out);
                boundary::write_density_csv(out, field);
            }
        } else if (*verify) {
            emit(app::run_verify(resolve(ver_run, ver_ens)), ver_report);
        } else if (*moments) {
            const auto m = io::read_matrix_file(mom_input);
            std::cout << app::run_moments(m, mom_pure, mom_mixed, mom_rho3).dump(2) << "\n";
        } else if (*render) {
            app::render_svg_files(render_spec, render_curve, render_out);
        } else if (*calibrate) {
            ensemble::DenseCyclicSpec spec{cal_n, cal_k, 0.0, cal_sign, ensemble::BaseDistribution::gaussian};
            auto result = app::to_json(app::calibrate_flip_prob(spec, cal_target, cal_seeds, cal_tol));
            result["target_rho"] = cal_target;
            std::cout << result.dump(2) << "\n";
        } else if (*preset) {
            if (preset_name == "list") {
                for (const auto& p : app::figure_presets()) std::cout << p.name << "  " << p.summary << "\n";
                return exit_ok;
            }
            const auto& chosen = app::find_preset(preset_name);
            json out{{"preset", chosen.name}, {"panels", json::array()}};
            for (auto panel : chosen.panels) {
                if (!preset_seeds.empty()) panel.seeds = preset_seeds;
                if (preset_dir) panel.outputs.dir = std::filesystem::path(*preset_dir) / panel.name;
                panel.outputs.svg = preset_svg;
                out["panels"].push_back(preset_print ? app::config_to_json(panel) : app::run_verify(panel));
            }
            std::cout << out.dump(2) << "\n";
        }
    } catch (const app::ConfigError& e) {
        print_error(e.kind(), e.what());
        return exit_config;
    } catch (const InvalidSpec& e) {
        print_error(e.kind(), e.what());
        return exit_config;
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
        return exit_runtime;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return exit_runtime;
    }
    return exit_ok;
}
