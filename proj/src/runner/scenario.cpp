#include "runner/scenario.hpp"

#include <algorithm>
#include <sstream>

namespace aqsens::runner {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string current;
    for (const char c : text) {
        if (c == sep) {
            out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    out.push_back(current);
    return out;
}

Axis parse_axis(const std::string& token, const std::string& descriptor) {
    if (token == "x") return Axis::X;
    if (token == "y") return Axis::Y;
    if (token == "z") return Axis::Z;
    throw ConfigError("observable '" + descriptor + "': unknown axis '" + token + "'");
}

int parse_int_token(const std::string& token, const std::string& descriptor) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument("trailing");
        return value;
    } catch (const std::exception&) {
        throw ConfigError("observable '" + descriptor + "': bad integer '" + token + "'");
    }
}

double parse_double_token(const std::string& token, const std::string& descriptor) {
    try {
        std::size_t used = 0;
        const double value = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument("trailing");
        return value;
    } catch (const std::exception&) {
        throw ConfigError("observable '" + descriptor + "': bad number '" + token + "'");
    }
}

}  // namespace

static HermitianOperator build_observable_impl(const std::string& descriptor,
                                               const SpinSystemSpec& spec);

double Scenario::resolved_tail_start() const {
    if (tail_start > 0.0) return tail_start;
    const double by_lambda = lambda > 0.0 ? 3.0 / lambda : grid.t_max / 2.0;
    return std::min(by_lambda, grid.t_max / 2.0);
}

Scenario scenario_from_config(const Config& config, const std::string& fallback_id) {
    const auto schema = config.get_int_or("schema_version", 1);
    if (schema != 1) throw ConfigError(config.origin() + ": unsupported schema_version");

    Scenario s;
    s.id = config.get_string_or("scenario.id", fallback_id);

    const std::string model = config.get_string("model.kind");
    const int particles = static_cast<int>(config.get_int("model.particles"));
    const std::string rep = config.get_string_or(
        "model.representation", model == "tim" ? "full" : "symmetric");
    if (model == "lmg") {
        s.model = ModelKind::Lmg;
    } else if (model == "tim") {
        s.model = ModelKind::Tim;
    } else {
        throw ConfigError(config.origin() + ": field 'model.kind': unknown model '" + model + "'");
    }
    if (rep == "symmetric") {
        if (s.model == ModelKind::Tim)
            throw ConfigError(config.origin() + ": the chain model runs in the full space only");
        s.spec = SpinSystemSpec::symmetric(particles);
    } else if (rep == "full") {
        s.spec = SpinSystemSpec::full(particles);
    } else {
        throw ConfigError(config.origin() + ": field 'model.representation': unknown value '" +
                          rep + "'");
    }
    s.field = config.get_double("model.transverse_field_coupling_units");
    s.coupling = config.get_double_or("model.coupling", 1.0);

    const std::string ensemble = config.get_string_or("ensemble.kind", "haar");
    if (ensemble == "haar") s.ensemble = EnsembleKind::Haar;
    else if (ensemble == "spin-coherent") s.ensemble = EnsembleKind::SpinCoherent;
    else if (ensemble == "dicke") s.ensemble = EnsembleKind::Dicke;
    else if (ensemble == "up-x") s.ensemble = EnsembleKind::UpX;
    else if (ensemble == "down-x") s.ensemble = EnsembleKind::DownX;
    else
        throw ConfigError(config.origin() + ": field 'ensemble.kind': unknown value '" +
                          ensemble + "'");
    s.n_states = static_cast<int>(config.get_int_or("ensemble.count", 1));
    if (s.n_states < 1)
        throw ConfigError(config.origin() + ": field 'ensemble.count': must be >= 1");

    const std::vector<std::string> kinds =
        config.has("perturbation.kinds") ? config.get_list("perturbation.kinds")
                                         : std::vector<std::string>{config.get_string_or(
                                               "perturbation.kind", "goe")};
    for (const std::string& kind : kinds) {
        if (kind == "goe") s.perturbations.push_back(PerturbationKind::Goe);
        else if (kind == "local-fields") s.perturbations.push_back(PerturbationKind::LocalFields);
        else
            throw ConfigError(config.origin() + ": field 'perturbation.kind': unknown value '" +
                              kind + "'");
    }
    s.lambda = config.get_double("perturbation.lambda");
    if (s.lambda < 0)
        throw ConfigError(config.origin() + ": field 'perturbation.lambda': must be >= 0");

    s.observable_descriptors = config.get_list("observables.families");

    const double t_max = config.get_double("time.tmax_inv_coupling");
    const auto steps = static_cast<int>(config.get_int("time.steps"));
    if (steps < 2) throw ConfigError(config.origin() + ": field 'time.steps': must be >= 2");
    s.grid = TimeGrid(t_max, steps);

    s.instances = static_cast<int>(config.get_int_or("run.instances", 50));
    if (s.instances < 1)
        throw ConfigError(config.origin() + ": field 'run.instances': must be >= 1");
    s.master_seed = config.get_uint_or("run.seed", 20270101ULL);
    s.tail_start = config.get_double_or("run.tail_start_inv_coupling", 0.0);
    s.curve_stride = static_cast<int>(config.get_int_or("output.curve_stride", 8));
    if (s.curve_stride < 1)
        throw ConfigError(config.origin() + ": field 'output.curve_stride': must be >= 1");
    s.char_fn_samples = static_cast<int>(config.get_int_or("run.char_fn_samples", 100000));
    return s;
}

HermitianOperator build_hamiltonian(const Scenario& scenario) {
    switch (scenario.model) {
        case ModelKind::Lmg: {
            const LmgParams params{scenario.field * scenario.coupling, scenario.coupling,
                                   scenario.spec.particles};
            return eigendecompose(lmg_hamiltonian(params, scenario.spec));
        }
        case ModelKind::Tim: {
            const TimParams params{scenario.field * scenario.coupling, scenario.coupling,
                                   scenario.spec.particles};
            return eigendecompose(tim_hamiltonian(params));
        }
    }
    throw std::logic_error("build_hamiltonian: unknown model");
}

PureState build_initial_state(const Scenario& scenario, const SeedSpec& seed, int index) {
    switch (scenario.ensemble) {
        case EnsembleKind::Haar:
            return haar_state(seed.child(static_cast<std::uint64_t>(index)), scenario.spec.dim());
        case EnsembleKind::SpinCoherent:
            return spin_coherent_state(seed.child(static_cast<std::uint64_t>(index)),
                                       scenario.spec);
        case EnsembleKind::Dicke:
            return dicke_state(seed.child(static_cast<std::uint64_t>(index)), scenario.spec);
        case EnsembleKind::UpX:
            return stretched_x_state(scenario.spec, +1);
        case EnsembleKind::DownX:
            return stretched_x_state(scenario.spec, -1);
    }
    throw std::logic_error("build_initial_state: unknown ensemble");
}

HermitianOperator build_observable(const std::string& descriptor, const SpinSystemSpec& spec) {
    try {
        return build_observable_impl(descriptor, spec);
    } catch (const std::invalid_argument& e) {
        // builder rejections are schema violations from the caller's side
        throw ConfigError("observable '" + descriptor + "': " + e.what());
    }
}

static HermitianOperator build_observable_impl(const std::string& descriptor,
                                               const SpinSystemSpec& spec) {
    const auto parts = split(descriptor, ':');
    const std::string& kind = parts.front();
    if (kind == "spin-power") {
        if (parts.size() != 3)
            throw ConfigError("observable '" + descriptor + "': expected spin-power:<axis>:<k>");
        return spin_power_observable(spec, parse_axis(parts[1], descriptor),
                                     parse_int_token(parts[2], descriptor));
    }
    if (kind == "sx-projector") {
        if (parts.size() != 2)
            throw ConfigError("observable '" + descriptor + "': expected sx-projector:<m>");
        return sx_projector_observable(spec, parse_double_token(parts[1], descriptor));
    }
    if (kind == "partition-projector") {
        if (parts.size() != 2)
            throw ConfigError("observable '" + descriptor + "': expected partition-projector:<k>");
        return partition_projector_observable(spec, parse_int_token(parts[1], descriptor));
    }
    if (kind == "pauli-weight") {
        if (parts.size() != 2)
            throw ConfigError("observable '" + descriptor + "': expected pauli-weight:<w>");
        return pauli_weight_observable(spec, parse_int_token(parts[1], descriptor));
    }
    if (kind == "pauli") {
        if (parts.size() != 2)
            throw ConfigError("observable '" + descriptor +
                              "': expected pauli:<axis><site>[,...]");
        std::vector<PauliTerm> terms;
        for (const std::string& item : split(parts[1], ',')) {
            if (item.size() < 2)
                throw ConfigError("observable '" + descriptor + "': bad term '" + item + "'");
            const Axis axis = parse_axis(item.substr(0, 1), descriptor);
            terms.push_back({axis, parse_int_token(item.substr(1), descriptor)});
        }
        return pauli_string(spec, terms);
    }
    throw ConfigError("observable '" + descriptor + "': unknown family '" + kind + "'");
}

std::vector<ObservableReport> build_observables(const Scenario& scenario,
                                                const HermitianOperator* hamiltonian) {
    std::vector<ObservableReport> out;
    out.reserve(scenario.observable_descriptors.size());
    for (const std::string& descriptor : scenario.observable_descriptors) {
        HermitianOperator op = build_observable(descriptor, scenario.spec);
        out.push_back(build_report(op, descriptor, hamiltonian));
    }
    return out;
}

PerturbationModel make_perturbation(const Scenario& scenario, PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::Goe:
            return PerturbationModel::goe(scenario.lambda);
        case PerturbationKind::LocalFields:
            if (scenario.spec.representation != Representation::FullSpace)
                throw ConfigError(
                    "perturbation 'local-fields' requires the full-space representation");
            return PerturbationModel::local_fields(scenario.lambda, scenario.spec.particles);
        case PerturbationKind::CustomDiagonal:
            break;
    }
    throw ConfigError("make_perturbation: unsupported kind");
}

std::string perturbation_name(PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::Goe: return "goe";
        case PerturbationKind::LocalFields: return "local-fields";
        case PerturbationKind::CustomDiagonal: return "custom-diagonal";
    }
    return "?";
}

std::string ensemble_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::Haar: return "haar";
        case EnsembleKind::SpinCoherent: return "spin-coherent";
        case EnsembleKind::Dicke: return "dicke";
        case EnsembleKind::UpX: return "up-x";
        case EnsembleKind::DownX: return "down-x";
    }
    return "?";
}

}  // namespace aqsens::runner
