#include "trochoid_app/config.hpp"

#include <fstream>
#include <set>

namespace trochoid::app {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!keys.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": '" + key + "' has the wrong type");
    }
}

template <class T>
T field_or(const json& j, const char* key, T fallback, const std::string& where) {
    return j.contains(key) ? field<T>(j, key, where) : fallback;
}

ensemble::BaseDistribution parse_distribution(const std::string& s) {
    if (s == "gaussian") return ensemble::BaseDistribution::gaussian;
    if (s == "uniform") return ensemble::BaseDistribution::uniform;
    throw ConfigError("distribution must be 'gaussian' or 'uniform', got '" + s + "'");
}

std::string distribution_name(ensemble::BaseDistribution d) {
    return d == ensemble::BaseDistribution::uniform ? "uniform" : "gaussian";
}

ensemble::Placement placement_field(const json& j, const std::string& where) {
    try {
        return ensemble::parse_placement(field_or<std::string>(j, "placement", "automatic", where));
    } catch (const InvalidSpec& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

boundary::MixedCycleParams parse_mixed_law(const json& j, const std::string& where) {
    const json species = field<json>(j, "species", where);
    if (!species.is_array() || species.size() != 2) throw ConfigError(where + ": 'species' needs exactly two entries");
    boundary::MixedCycleParams p;
    for (std::size_t r = 0; r < 2; ++r) {
        const std::string at = where + ".species[" + std::to_string(r) + "]";
        reject_unknown(species[r], {"d", "k", "weight"}, at);
        p.species[r] = {field<double>(species[r], "d", at), field<int>(species[r], "k", at),
                        field_or<double>(species[r], "weight", 1.0, at)};
    }
    return p;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ensemble::EnsembleSpec parse_ensemble(const json& j) {
    const std::string where = "ensemble";
    const auto type = field<std::string>(j, "type", where);
    if (type == "dense-elliptic") {
        reject_unknown(j, {"type", "n", "rho", "distribution"}, where);
        return ensemble::DenseEllipticSpec{field<int>(j, "n", where), field_or<double>(j, "rho", 0.0, where),
                                           parse_distribution(field_or<std::string>(j, "distribution", "gaussian", where))};
    }
    if (type == "dense-cyclic") {
        reject_unknown(j, {"type", "n", "k", "flip_prob", "sign", "distribution"}, where);
        return ensemble::DenseCyclicSpec{field<int>(j, "n", where), field_or<int>(j, "k", 3, where),
                                         field_or<double>(j, "flip_prob", 0.0, where), field_or<int>(j, "sign", 1, where),
                                         parse_distribution(field_or<std::string>(j, "distribution", "gaussian", where))};
    }
    if (type == "regular-cyclic") {
        reject_unknown(j, {"type", "n", "d", "k", "weight", "placement"}, where);
        return ensemble::RegularCyclicSpec{field<int>(j, "n", where), field<int>(j, "d", where), field_or<int>(j, "k", 3, where),
                                           field_or<double>(j, "weight", 1.0, where), placement_field(j, where)};
    }
    if (type == "poisson-cyclic") {
        reject_unknown(j, {"type", "n", "mean_degree", "k", "weight", "placement"}, where);
        return ensemble::PoissonCyclicSpec{field<int>(j, "n", where), field<double>(j, "mean_degree", where),
                                           field_or<int>(j, "k", 3, where), field_or<double>(j, "weight", 1.0, where),
                                           placement_field(j, where)};
    }
    if (type == "mixed-cyclic") {
        reject_unknown(j, {"type", "n", "species", "placement"}, where);
        const json species = field<json>(j, "species", where);
        if (!species.is_array() || species.size() != 2) throw ConfigError("ensemble: 'species' needs exactly two entries");
        ensemble::MixedCyclicSpec spec;
        spec.n = field<int>(j, "n", where);
        for (std::size_t r = 0; r < 2; ++r) {
            const std::string at = "ensemble.species[" + std::to_string(r) + "]";
            reject_unknown(species[r], {"d", "k", "weight"}, at);
            spec.species[r] = {field<int>(species[r], "d", at), field<int>(species[r], "k", at),
                               field_or<double>(species[r], "weight", 1.0, at)};
        }
        spec.placement = placement_field(j, where);
        return spec;
    }
    throw ConfigError("ensemble: unknown type '" + type + "'");
}

json ensemble_to_json(const ensemble::EnsembleSpec& spec) {
    return std::visit(
        overloaded{
            [](const ensemble::DenseEllipticSpec& s) {
                return json{{"type", "dense-elliptic"}, {"n", s.n}, {"rho", s.rho}, {"distribution", distribution_name(s.distribution)}};
            },
            [](const ensemble::DenseCyclicSpec& s) {
                return json{{"type", "dense-cyclic"}, {"n", s.n}, {"k", s.k}, {"flip_prob", s.flip_prob},
                            {"sign", s.sign}, {"distribution", distribution_name(s.distribution)}};
            },
            [](const ensemble::RegularCyclicSpec& s) {
                return json{{"type", "regular-cyclic"}, {"n", s.n}, {"d", s.d}, {"k", s.k},
                            {"weight", s.weight}, {"placement", ensemble::placement_name(s.placement)}};
            },
            [](const ensemble::PoissonCyclicSpec& s) {
                return json{{"type", "poisson-cyclic"}, {"n", s.n}, {"mean_degree", s.mean_degree}, {"k", s.k},
                            {"weight", s.weight}, {"placement", ensemble::placement_name(s.placement)}};
            },
            [](const ensemble::MixedCyclicSpec& s) {
                json arr = json::array();
                for (const auto& sp : s.species) arr.push_back({{"d", sp.d}, {"k", sp.k}, {"weight", sp.weight}});
                return json{{"type", "mixed-cyclic"}, {"n", s.n}, {"species", arr},
                            {"placement", ensemble::placement_name(s.placement)}};
            },
        },
        spec);
}

boundary::LawParams parse_law(const json& j) {
    const std::string where = "boundary";
    const auto law = field<std::string>(j, "law", where);
    if (law == "dense-hypotrochoid") {
        reject_unknown(j, {"law", "k", "rho"}, where);
        return boundary::HypotrochoidParams{field<int>(j, "k", where), field<double>(j, "rho", where)};
    }
    if (law == "dense-polytrochoid") {
        reject_unknown(j, {"law", "terms"}, where);
        const json terms = field<json>(j, "terms", where);
        if (!terms.is_object() || terms.empty()) throw ConfigError("boundary: 'terms' must be a non-empty object");
        boundary::PolytrochoidParams p;
        for (const auto& [key, value] : terms.items()) {
            int k = 0;
            try {
                k = std::stoi(key);
            } catch (const std::exception&) {
                throw ConfigError("boundary: term key '" + key + "' is not an integer");
            }
            if (!value.is_number()) throw ConfigError("boundary: term '" + key + "' is not a number");
            p.terms[k] = value.get<double>();
        }
        return p;
    }
    if (law == "sparse-hypotrochoid") {
        reject_unknown(j, {"law", "d_hat", "k", "weight", "t"}, where);
        return boundary::make_sparse_params(field<double>(j, "d_hat", where), field<int>(j, "k", where),
                                            field_or<double>(j, "weight", 1.0, where));
    }
    if (law == "mixed-cycle") {
        reject_unknown(j, {"law", "species"}, where);
        return parse_mixed_law(j, where);
    }
    if (law == "mixed-cycle-asymptotic") {
        reject_unknown(j, {"law", "species"}, where);
        return boundary::MixedAsymptoticParams{parse_mixed_law(j, where)};
    }
    throw ConfigError("boundary: unknown law '" + law + "'");
}

ExperimentConfig parse_config(const json& j) {
    const std::string where = "config";
    reject_unknown(j, {"name", "ensemble", "boundary", "seeds", "inflation", "exclude_outliers", "boundary_samples",
                       "calibration", "moments", "outputs"},
                   where);
    ExperimentConfig c;
    c.name = field_or<std::string>(j, "name", "", where);
    c.ensemble = parse_ensemble(field<json>(j, "ensemble", where));
    if (j.contains("boundary")) {
        const json& b = j.at("boundary");
        if (b.is_string()) {
            if (b.get<std::string>() != "auto") throw ConfigError("boundary: expected \"auto\" or a law object");
            c.boundary = AutoBoundary{};
        } else {
            c.boundary = parse_law(b);
        }
    }
    c.seeds = field_or<std::vector<std::uint64_t>>(j, "seeds", {}, where);
    c.inflation = field_or<double>(j, "inflation", c.inflation, where);
    c.exclude_outliers = field_or<bool>(j, "exclude_outliers", c.exclude_outliers, where);
    c.boundary_samples = field_or<int>(j, "boundary_samples", c.boundary_samples, where);
    if (j.contains("calibration")) {
        const json& cal = j.at("calibration");
        reject_unknown(cal, {"target_rho", "seeds", "tolerance"}, "calibration");
        CalibrationRequest req;
        req.target_rho = field<double>(cal, "target_rho", "calibration");
        req.seeds = field_or<std::vector<std::uint64_t>>(cal, "seeds", req.seeds, "calibration");
        req.tolerance = field_or<double>(cal, "tolerance", req.tolerance, "calibration");
        c.calibration = req;
    }
    if (j.contains("moments")) {
        const json& m = j.at("moments");
        reject_unknown(m, {"pure", "mixed"}, "moments");
        c.moments = MomentRequest{field_or<std::vector<int>>(m, "pure", {}, "moments"),
                                  field_or<std::vector<int>>(m, "mixed", {}, "moments")};
    }
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        reject_unknown(o, {"dir", "svg"}, "outputs");
        if (o.contains("dir")) c.outputs.dir = field<std::string>(o, "dir", "outputs");
        c.outputs.svg = field_or<bool>(o, "svg", false, "outputs");
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    if (!c.name.empty()) j["name"] = c.name;
    j["ensemble"] = ensemble_to_json(c.ensemble);
    if (std::holds_alternative<AutoBoundary>(c.boundary)) {
        j["boundary"] = "auto";
    } else {
        json law = boundary::law_to_json(std::get<boundary::LawParams>(c.boundary));
        j["boundary"] = law;
    }
    j["seeds"] = c.seeds;
    j["inflation"] = c.inflation;
    j["exclude_outliers"] = c.exclude_outliers;
    j["boundary_samples"] = c.boundary_samples;
    if (c.calibration) {
        j["calibration"] = {{"target_rho", c.calibration->target_rho},
                            {"seeds", c.calibration->seeds},
                            {"tolerance", c.calibration->tolerance}};
    }
    if (c.moments) j["moments"] = {{"pure", c.moments->pure}, {"mixed", c.moments->mixed}};
    json out = json::object();
    if (c.outputs.dir) out["dir"] = c.outputs.dir->string();
    out["svg"] = c.outputs.svg;
    j["outputs"] = out;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

void validate_config(const ExperimentConfig& c) {
    ensemble::validate(c.ensemble);
    if (c.seeds.empty()) throw ConfigError("config: seed list is empty");
    if (!(c.inflation >= 0.0)) throw ConfigError("config: inflation must be non-negative");
    if (c.boundary_samples < boundary::min_samples) {
        throw ConfigError("config: boundary_samples must be at least " + std::to_string(boundary::min_samples));
    }
    if (c.calibration) {
        if (!std::holds_alternative<ensemble::DenseCyclicSpec>(c.ensemble)) {
            throw ConfigError("config: calibration applies to dense-cyclic ensembles only");
        }
        if (c.calibration->seeds.empty()) throw ConfigError("calibration: seed list is empty");
        if (!(c.calibration->tolerance > 0.0)) throw ConfigError("calibration: tolerance must be positive");
    }
    if (c.moments) {
        for (int k : c.moments->pure) {
            if (k < 1) throw ConfigError("moments: pure orders must be positive");
        }
        for (int l : c.moments->mixed) {
            if (l < 1) throw ConfigError("moments: mixed orders must be positive");
        }
    }
    if (std::holds_alternative<AutoBoundary>(c.boundary)) {
        if (const auto* r = std::get_if<ensemble::RegularCyclicSpec>(&c.ensemble); r && r->d < 2) {
            throw ConfigError("config: automatic boundary needs d >= 2 for regular-cyclic graphs (d_hat = d - 1)");
        }
    }
}

}  // namespace trochoid::app
