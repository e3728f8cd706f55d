#include "trochoid_app/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "trochoid/matrix_market.hpp"
#include "trochoid_app/calibrate.hpp"
#include "trochoid_app/parallel.hpp"
#include "trochoid_app/svg.hpp"

namespace trochoid::app {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double no_prediction = std::numeric_limits<double>::quiet_NaN();
constexpr int max_rotation_n = 2000;

json complex_list(const std::vector<spectra::Complex>& zs) {
    json arr = json::array();
    for (const auto& z : zs) arr.push_back({z.real(), z.imag()});
    return arr;
}

// Cycles per node and common edge weight of a single-weight digraph ensemble.
struct WalkModel {
    double degree;
    double weight;
    int cycle_length;  // 0 when species of different lengths are mixed
};

std::optional<WalkModel> walk_model(const ensemble::EnsembleSpec& spec) {
    if (const auto* r = std::get_if<ensemble::RegularCyclicSpec>(&spec)) return WalkModel{double(r->d), r->weight, r->k};
    if (const auto* p = std::get_if<ensemble::PoissonCyclicSpec>(&spec)) return WalkModel{p->mean_degree, p->weight, p->k};
    if (const auto* m = std::get_if<ensemble::MixedCyclicSpec>(&spec)) {
        const auto& [a, b] = m->species;
        if (a.d == 0) return WalkModel{double(b.d), b.weight, b.k};
        if (b.d == 0) return WalkModel{double(a.d), a.weight, a.k};
        if (a.weight == b.weight) return WalkModel{double(a.d + b.d), a.weight, 0};
    }
    return std::nullopt;
}

// Predictions use the tree-walk count with d_hat equal to the cycles per node.
double predict(const ensemble::EnsembleSpec& spec, spectra::MomentReport::Kind kind, int order,
               const std::optional<double>& rho3) {
    using Kind = spectra::MomentReport::Kind;
    if (std::holds_alternative<ensemble::DenseEllipticSpec>(spec) || std::holds_alternative<ensemble::DenseCyclicSpec>(spec)) {
        if (kind == Kind::mixed) return spectra::mixed_moment_prediction(order, spectra::MixedPrefactor::catalan);
        if (rho3 && order % 3 == 0) return spectra::fuss_catalan_prediction(order / 3, *rho3);
        return no_prediction;
    }
    const auto model = walk_model(spec);
    if (!model) return no_prediction;
    if (kind == Kind::mixed) {
        return spectra::tree_walk_prediction(2, order, model->degree, model->degree) * std::pow(model->weight, 2 * order);
    }
    if (model->cycle_length == 3 && order % 3 == 0) {
        return spectra::tree_walk_prediction(3, order / 3, model->degree, model->degree) * std::pow(model->weight, order);
    }
    return no_prediction;
}

int rotation_order(const ensemble::EnsembleSpec& spec, const Instance& inst) {
    if (inst.graph) return spectra::cycle_length_gcd(*inst.graph);
    if (const auto* c = std::get_if<ensemble::DenseCyclicSpec>(&spec)) return c->k;
    return 0;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

// Worth the exact kernel computation only when QR left eigenvalues near 0.
bool has_tiny_eigenvalues(const spectra::Spectrum& s) {
    double radius = 0.0;
    for (const auto& e : s.eigenvalues) radius = std::max(radius, std::abs(e));
    return std::any_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                       [&](const spectra::Complex& e) { return std::abs(e) <= 1e-2 * radius; });
}

json verify_seed(const ExperimentConfig& config, const ensemble::EnsembleSpec& spec, std::uint64_t seed,
                 const MomentRequest& moments) {
    const Instance inst = generate_instance(spec, seed);
    spectra::Spectrum s = spectra::compute_eigenvalues(inst.matrix, ensemble::ensemble_name(spec) + "#" + std::to_string(seed));

    json report;
    report["seed"] = seed;
    report["status"] = "ok";
    report["n"] = inst.matrix.rows();
    if (inst.graph && has_tiny_eigenvalues(s)) {
        const auto multiplicity = spectra::zero_eigenvalue_multiplicity(*inst.graph);
        if (multiplicity) {
            report["zero_eigenvalues"] = {{"multiplicity", *multiplicity},
                                          {"snapped", spectra::snap_zero_eigenvalues(s, *multiplicity)}};
        }
    }

    std::optional<double> rho3;
    if (const auto* c = std::get_if<ensemble::DenseCyclicSpec>(&spec)) {
        const double rho = spectra::empirical_pure_moment(s, c->k);
        report["measured_rho"] = {{std::to_string(c->k), rho}};
        if (c->k == 3) rho3 = rho;
    } else if (std::holds_alternative<ensemble::DenseEllipticSpec>(spec)) {
        report["measured_rho"] = {{"2", spectra::empirical_pure_moment(s, 2)}};
    }

    const boundary::LawParams law = std::holds_alternative<AutoBoundary>(config.boundary)
                                        ? auto_law(spec, s)
                                        : std::get<boundary::LawParams>(config.boundary);
    const boundary::BoundaryCurve curve = build_curve(law, config.boundary_samples);
    report["boundary"] = boundary::law_to_json(law);
    if (!curve.continuation.empty()) {
        double worst = 0.0;
        for (const auto& st : curve.continuation) worst = std::max(worst, st.residual);
        report["continuation"] = {{"accepted_steps", curve.continuation.size()},
                                  {"step_halvings", curve.step_halvings},
                                  {"closure_error", curve.closure_error},
                                  {"max_residual", worst}};
    }

    std::vector<spectra::Complex> outliers;
    if (inst.graph) {
        outliers = spectra::detect_deterministic_outliers(s, *inst.graph);
        report["deterministic_outliers"] = complex_list(outliers);
    }
    const auto exclusions = config.exclude_outliers ? outliers : std::vector<spectra::Complex>{};
    const spectra::ContainmentReport contained = spectra::containment(s, curve, config.inflation, exclusions);
    report["containment"] = spectra::to_json(contained);
    report["inside_fraction"] = contained.inside_fraction();

    const int order = rotation_order(spec, inst);
    if (order > 1 && inst.matrix.rows() <= max_rotation_n) {
        report["rotation_residual"] = {{"k", order}, {"value", spectra::rotation_symmetry_residual(s, order)}};
    }
    report["conjugation_residual"] = spectra::conjugation_residual(s);

    json table = json::array();
    for (int k : moments.pure) {
        spectra::MomentReport r{spectra::MomentReport::Kind::pure, k, spectra::empirical_pure_moment(s, k), 0.0, 0.0};
        r.predicted = predict(spec, r.kind, k, rho3);
        table.push_back(spectra::to_json(r));
    }
    for (int l : moments.mixed) {
        spectra::MomentReport r{spectra::MomentReport::Kind::mixed, l, spectra::empirical_mixed_moment(inst.matrix, l), 0.0, 0.0};
        r.predicted = predict(spec, r.kind, l, rho3);
        json j = spectra::to_json(r);
        if (std::holds_alternative<ensemble::DenseEllipticSpec>(spec) || std::holds_alternative<ensemble::DenseCyclicSpec>(spec)) {
            j["predicted_printed_prefactor"] = spectra::mixed_moment_prediction(l, spectra::MixedPrefactor::printed);
        }
        table.push_back(j);
    }
    report["moments"] = table;

    if (config.outputs.dir) {
        const auto dir = *config.outputs.dir;
        const std::string tag = std::to_string(seed);
        std::ofstream spec_out(dir / ("spectrum_" + tag + ".csv"));
        spectra::write_spectrum_csv(spec_out, s);
        std::ofstream curve_out(dir / ("boundary_" + tag + ".csv"));
        boundary::write_curve_csv(curve_out, curve);
        if (!spec_out || !curve_out) throw IoError("cannot write CSV artifacts in " + dir.string());
        if (config.outputs.svg) write_text(dir / ("figure_" + tag + ".svg"), render_svg(s, curve));
    }
    return report;
}

json aggregate(const std::vector<json>& seeds) {
    int ok = 0;
    double frac_min = 1.0, frac_sum = 0.0;
    // (kind, order) -> values, kept in first-seen order.
    std::vector<std::pair<std::pair<std::string, int>, std::vector<std::pair<double, double>>>> table;
    for (const auto& r : seeds) {
        if (r.at("status") != "ok") continue;
        ++ok;
        const double f = r.at("inside_fraction").get<double>();
        frac_min = std::min(frac_min, f);
        frac_sum += f;
        for (const auto& m : r.at("moments")) {
            const std::pair<std::string, int> key{m.at("kind").get<std::string>(), m.at("order").get<int>()};
            auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
            if (it == table.end()) {
                table.push_back({key, {}});
                it = std::prev(table.end());
            }
            const double predicted = m.at("predicted").is_number() ? m.at("predicted").get<double>() : no_prediction;
            it->second.push_back({m.at("empirical").get<double>(), predicted});
        }
    }
    json agg;
    agg["seeds_ok"] = ok;
    agg["seeds_failed"] = static_cast<int>(seeds.size()) - ok;
    if (ok == 0) return agg;
    agg["inside_fraction_min"] = frac_min;
    agg["inside_fraction_mean"] = frac_sum / ok;
    json moments = json::array();
    for (const auto& [key, values] : table) {
        const double m = static_cast<double>(values.size());
        double mean = 0.0, pred = 0.0;
        for (const auto& [e, p] : values) {
            mean += e;
            pred += p;
        }
        mean /= m;
        pred /= m;
        double var = 0.0;
        for (const auto& [e, p] : values) var += (e - mean) * (e - mean);
        const double stderr_ = values.size() > 1 ? std::sqrt(var / (m - 1.0) / m) : 0.0;
        spectra::MomentReport r{key.first == "pure" ? spectra::MomentReport::Kind::pure : spectra::MomentReport::Kind::mixed,
                                key.second, mean, pred, stderr_};
        moments.push_back(spectra::to_json(r));
    }
    agg["moments"] = moments;
    return agg;
}

}  // namespace

Instance generate_instance(const ensemble::EnsembleSpec& spec, std::uint64_t seed) {
    return std::visit(overloaded{
                          [&](const ensemble::DenseEllipticSpec& s) { return Instance{ensemble::generate_dense_elliptic(s, seed), {}}; },
                          [&](const ensemble::DenseCyclicSpec& s) { return Instance{ensemble::generate_dense_cyclic(s, seed), {}}; },
                          [&](const ensemble::RegularCyclicSpec& s) {
                              auto g = ensemble::generate_regular_cyclic(s, seed);
                              return Instance{ensemble::adjacency_matrix(g), std::move(g)};
                          },
                          [&](const ensemble::PoissonCyclicSpec& s) {
                              auto g = ensemble::generate_poisson_cyclic(s, seed);
                              return Instance{ensemble::adjacency_matrix(g), std::move(g)};
                          },
                          [&](const ensemble::MixedCyclicSpec& s) {
                              auto g = ensemble::generate_mixed_cyclic(s, seed);
                              return Instance{ensemble::adjacency_matrix(g), std::move(g)};
                          },
                      },
                      spec);
}

boundary::LawParams auto_law(const ensemble::EnsembleSpec& spec, const spectra::Spectrum& s) {
    return std::visit(
        overloaded{
            [](const ensemble::DenseEllipticSpec& e) -> boundary::LawParams { return boundary::HypotrochoidParams{2, e.rho}; },
            [&](const ensemble::DenseCyclicSpec& c) -> boundary::LawParams {
                return boundary::HypotrochoidParams{c.k, spectra::empirical_pure_moment(s, c.k)};
            },
            [](const ensemble::RegularCyclicSpec& r) -> boundary::LawParams {
                if (r.d < 2) throw ConfigError("automatic boundary needs d >= 2 for regular-cyclic graphs");
                return boundary::make_sparse_params(r.d - 1.0, r.k, r.weight);
            },
            [](const ensemble::PoissonCyclicSpec& p) -> boundary::LawParams {
                return boundary::make_sparse_params(p.mean_degree, p.k, p.weight);
            },
            [](const ensemble::MixedCyclicSpec& m) -> boundary::LawParams {
                boundary::MixedCycleParams law;
                for (std::size_t r = 0; r < 2; ++r) {
                    law.species[r] = {double(m.species[r].d), m.species[r].k, m.species[r].weight};
                }
                return law;
            },
        },
        spec);
}

boundary::BoundaryCurve build_curve(const boundary::LawParams& law, int n_samples) {
    return std::visit(overloaded{
                          [&](const boundary::HypotrochoidParams& p) { return boundary::dense_hypotrochoid(p, n_samples); },
                          [&](const boundary::PolytrochoidParams& p) { return boundary::dense_polytrochoid(p, n_samples); },
                          [&](const boundary::SparseCyclicParams& p) { return boundary::sparse_hypotrochoid(p, n_samples); },
                          [&](const boundary::MixedCycleParams& p) { return boundary::mixed_cycle_boundary(p, n_samples); },
                          [&](const boundary::MixedAsymptoticParams& p) {
                              return boundary::mixed_cycle_asymptotic(p.mixed, n_samples);
                          },
                      },
                      law);
}

MomentRequest default_moments(const ensemble::EnsembleSpec& spec) {
    MomentRequest req;
    req.mixed = {1, 2};
    if (const auto* c = std::get_if<ensemble::DenseCyclicSpec>(&spec)) {
        req.pure = {c->k};
        if (c->k == 3) req.pure.push_back(6);
    } else if (std::holds_alternative<ensemble::DenseEllipticSpec>(spec)) {
        req.pure = {2};
    } else if (const auto model = walk_model(spec); model && model->cycle_length == 3) {
        req.pure = {3, 6};
    }
    return req;
}

std::vector<std::filesystem::path> run_generate(const ensemble::EnsembleSpec& spec, std::uint64_t seed,
                                                const std::filesystem::path& out) {
    ensemble::validate(spec);
    const Instance inst = generate_instance(spec, seed);
    if (!inst.graph) {
        io::write_file(out, inst.matrix);
        return {out};
    }
    io::write_file(out, *inst.graph);
    std::filesystem::path sidecar = out;
    sidecar.replace_extension(".json");
    write_text(sidecar, io::cycle_sidecar(*inst.graph).dump(2) + "\n");
    return {out, sidecar};
}

json run_verify(const ExperimentConfig& config) {
    validate_config(config);
    ensemble::EnsembleSpec spec = config.ensemble;
    json meta;
    meta["name"] = config.name;
    meta["inflation"] = config.inflation;
    meta["exclude_outliers"] = config.exclude_outliers;
    if (config.calibration) {
        auto& dense = std::get<ensemble::DenseCyclicSpec>(spec);
        const CalibrationResult cal =
            calibrate_flip_prob(dense, config.calibration->target_rho, config.calibration->seeds, config.calibration->tolerance);
        dense.flip_prob = cal.flip_prob;
        json c = to_json(cal);
        c["target_rho"] = config.calibration->target_rho;
        c["tolerance"] = config.calibration->tolerance;
        meta["calibration"] = c;
    }
    meta["ensemble"] = ensemble_to_json(spec);
    meta["boundary"] = std::holds_alternative<AutoBoundary>(config.boundary)
                           ? json("auto")
                           : boundary::law_to_json(std::get<boundary::LawParams>(config.boundary));
    if (config.outputs.dir) std::filesystem::create_directories(*config.outputs.dir);

    const MomentRequest moments = config.moments ? *config.moments : default_moments(spec);
    std::vector<json> per_seed(config.seeds.size());
    parallel_for(config.seeds.size(), [&](std::size_t i) {
        const std::uint64_t seed = config.seeds[i];
        try {
            per_seed[i] = verify_seed(config, spec, seed, moments);
        } catch (const Error& e) {
            per_seed[i] = {{"seed", seed}, {"status", "error"}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}};
        } catch (const std::exception& e) {
            per_seed[i] = {{"seed", seed}, {"status", "error"}, {"error", {{"kind", "internal"}, {"message", e.what()}}}};
        }
    });

    json report;
    report["metadata"] = meta;
    report["seeds"] = per_seed;
    report["aggregate"] = aggregate(per_seed);
    if (config.outputs.dir) write_text(*config.outputs.dir / "report.json", report.dump(2) + "\n");
    return report;
}

json run_moments(const DenseMatrix& m, const std::vector<int>& pure, const std::vector<int>& mixed,
                 std::optional<double> rho3) {
    json table = json::array();
    if (!pure.empty()) {
        const spectra::Spectrum s = spectra::compute_eigenvalues(m);
        for (int k : pure) {
            spectra::MomentReport r{spectra::MomentReport::Kind::pure, k, spectra::empirical_pure_moment(s, k), no_prediction, 0.0};
            if (rho3 && k % 3 == 0) r.predicted = spectra::fuss_catalan_prediction(k / 3, *rho3);
            table.push_back(spectra::to_json(r));
        }
    }
    for (int l : mixed) {
        spectra::MomentReport r{spectra::MomentReport::Kind::mixed, l, spectra::empirical_mixed_moment(m, l),
                                spectra::mixed_moment_prediction(l, spectra::MixedPrefactor::catalan), 0.0};
        json j = spectra::to_json(r);
        j["predicted_printed_prefactor"] = spectra::mixed_moment_prediction(l, spectra::MixedPrefactor::printed);
        table.push_back(j);
    }
    return {{"n", m.rows()}, {"moments", table}};
}

}  // namespace trochoid::app
