#include "nhm_cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "nhm/linalg.hpp"
#include "nhm/random.hpp"
#include "nhm/spectral.hpp"

namespace nhm::cli {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(std::string field, const std::string& what)
    : Error(field + ": " + what), field_(std::move(field)) {}

const char* to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::Impulsive: return "impulsive";
    case ScenarioKind::Adiabatic: return "adiabatic";
    case ScenarioKind::Simultaneous: return "simultaneous";
    case ScenarioKind::ConvergenceStudy: return "convergence-study";
    case ScenarioKind::ScalingStudy: return "scaling-study";
    case ScenarioKind::SpectralCheck: return "spectral-check";
    case ScenarioKind::WeakValues: return "weak-values";
    case ScenarioKind::PerturbationStudy: return "perturbation-study";
    case ScenarioKind::OutcomeSampling: return "outcome-sampling";
    case ScenarioKind::Evolution: return "evolution";
    }
    return "?";
}

namespace {

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ValidationError(field, what); }

void require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
        if (!ok) fail(sub(path, item.key()), "unknown field");
    }
}

// Readers take the resolved (mutable) copy and write defaults back into it.

double number(Json& obj, const std::string& path, const char* key, std::optional<double> def = std::nullopt) {
    if (!obj.contains(key)) {
        if (!def) fail(sub(path, key), "required number is missing");
        obj[key] = *def;
        return *def;
    }
    const Json& v = obj[key];
    if (!v.is_number()) fail(sub(path, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(sub(path, key), "must be finite");
    return x;
}

long long integer(Json& obj, const std::string& path, const char* key, std::optional<long long> def = std::nullopt) {
    if (!obj.contains(key)) {
        if (!def) fail(sub(path, key), "required integer is missing");
        obj[key] = *def;
        return *def;
    }
    const Json& v = obj[key];
    if (!v.is_number_integer()) fail(sub(path, key), "expected an integer");
    return v.get<long long>();
}

std::string text(Json& obj, const std::string& path, const char* key,
                 std::optional<std::string> def = std::nullopt) {
    if (!obj.contains(key)) {
        if (!def) fail(sub(path, key), "required string is missing");
        obj[key] = *def;
        return *def;
    }
    if (!obj[key].is_string()) fail(sub(path, key), "expected a string");
    return obj[key].get<std::string>();
}

bool boolean(Json& obj, const std::string& path, const char* key, bool def) {
    if (!obj.contains(key)) {
        obj[key] = def;
        return def;
    }
    if (!obj[key].is_boolean()) fail(sub(path, key), "expected true or false");
    return obj[key].get<bool>();
}

// A complex number is either a plain number or [re, im].
Complex complex_value(const Json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        const Complex c{v[0].get<double>(), v[1].get<double>()};
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) fail(path, "must be finite");
        return c;
    }
    fail(path, "expected a number or a [re, im] pair");
}

Complex complex_field(Json& obj, const std::string& path, const char* key, std::optional<Complex> def = std::nullopt) {
    if (!obj.contains(key)) {
        if (!def) fail(sub(path, key), "required complex number is missing");
        obj[key] = Json::array({def->real(), def->imag()});
        return *def;
    }
    return complex_value(obj[key], sub(path, key));
}

std::vector<double> number_list(Json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(sub(path, key), "required list is missing");
    const Json& v = obj[key];
    if (!v.is_array() || v.empty()) fail(sub(path, key), "expected a non-empty list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) fail(at(sub(path, key), i), "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

Vector complex_vector(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty list of complex amplitudes");
    Vector out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = complex_value(v[i], at(path, i));
    return out;
}

// Row-major: a list of rows, each a list of complex entries.
Matrix complex_matrix(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty list of rows");
    const auto n = static_cast<Index>(v.size());
    Matrix m(n, n);
    for (std::size_t r = 0; r < v.size(); ++r) {
        if (!v[r].is_array() || v[r].size() != v.size())
            fail(at(path, r), "expected a row of " + std::to_string(v.size()) + " entries (square matrix)");
        for (std::size_t c = 0; c < v.size(); ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) = complex_value(v[r][c], at(at(path, r), c));
    }
    return m;
}

Axis axis_value(Json& obj, const std::string& path) {
    const std::string a = text(obj, path, "axis");
    if (a == "x") return Axis::X;
    if (a == "y") return Axis::Y;
    if (a == "z") return Axis::Z;
    fail(sub(path, "axis"), "expected \"x\", \"y\" or \"z\"");
}

// Random models and observables without their own "seed" draw, in file
// order, from one stream seeded with the scenario seed.
struct Context {
    Rng rng;
    std::optional<Operator> model;
};

Operator parse_model(Json& m, const std::string& path, Context& ctx) {
    require_object(m, path);
    const std::string type = text(m, path, "type");
    try {
        if (type == "matrix") {
            check_keys(m, path, {"type", "matrix"});
            if (!m.contains("matrix")) fail(sub(path, "matrix"), "required matrix is missing");
            return Operator(complex_matrix(m["matrix"], sub(path, "matrix")));
        }
        if (type == "spin-effective") {
            check_keys(m, path, {"type", "N", "lambda"});
            const double n = number(m, path, "N");
            const double lambda = number(m, path, "lambda");
            try {
                return effective_hamiltonian(build_spin_model(n, lambda));
            } catch (const InvalidArgument& e) {
                fail(sub(path, "N"), e.what());
            }
        }
        if (type == "kaon") {
            check_keys(m, path, {"type", "epsilon", "omega_L", "omega_S"});
            const Complex eps = complex_field(m, path, "epsilon");
            const Complex wl = complex_field(m, path, "omega_L");
            const Complex ws = complex_field(m, path, "omega_S");
            return build_kaon_like(eps, wl, ws).h_eff;
        }
        if (type == "random" || type == "random-hermitian") {
            check_keys(m, path, {"type", "dim", "seed"});
            const long long dim = integer(m, path, "dim");
            if (dim < 1 || dim > 64) fail(sub(path, "dim"), "must be in 1..64");
            std::optional<Rng> own;
            if (m.contains("seed")) own.emplace(static_cast<std::uint64_t>(integer(m, path, "seed")));
            Rng& rng = own ? *own : ctx.rng;
            return Operator(type == "random" ? random_complex_matrix(rng, dim) : random_hermitian(rng, dim));
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const InvalidArgument& e) {
        fail(path, e.what());
    }
    fail(sub(path, "type"), "unknown model type \"" + type + "\"");
}

StateVector parse_state(Json& s, const std::string& path, const Context& ctx, std::optional<Index> dim) {
    require_object(s, path);
    const std::string type = text(s, path, "type");
    std::optional<StateVector> out;
    if (type == "vector") {
        check_keys(s, path, {"type", "amplitudes"});
        if (!s.contains("amplitudes")) fail(sub(path, "amplitudes"), "required list is missing");
        out.emplace(complex_vector(s["amplitudes"], sub(path, "amplitudes")));
    } else if (type == "spinor") {
        check_keys(s, path, {"type", "axis", "direction"});
        const Axis a = axis_value(s, path);
        const std::string d = text(s, path, "direction");
        if (d != "up" && d != "down") fail(sub(path, "direction"), "expected \"up\" or \"down\"");
        out.emplace(d == "up" ? spin_up(a) : spin_down(a));
    } else if (type == "basis") {
        check_keys(s, path, {"type", "index"});
        if (!dim) fail(path, "a basis state needs a model to fix the dimension");
        const long long k = integer(s, path, "index");
        if (k < 0 || k >= *dim) fail(sub(path, "index"), "out of range for dimension " + std::to_string(*dim));
        Vector v = Vector::Zero(*dim);
        v(k) = 1.0;
        out.emplace(std::move(v));
    } else if (type == "eigenket") {
        check_keys(s, path, {"type", "index"});
        if (!ctx.model) fail(path, "an eigenket needs a model");
        const long long k = integer(s, path, "index");
        if (k < 0 || k >= ctx.model->dim())
            fail(sub(path, "index"), "out of range for dimension " + std::to_string(ctx.model->dim()));
        try {
            out.emplace(decompose(*ctx.model).ket(k));
        } catch (const NumericalError& e) {
            fail(path, std::string("model eigendecomposition failed: ") + e.what());
        }
    } else {
        fail(sub(path, "type"), "unknown state type \"" + type + "\"");
    }
    if (out->norm() == 0.0) fail(path, "state is the zero vector");
    if (dim && out->dim() != *dim)
        fail(path, "dimension " + std::to_string(out->dim()) + " does not match " + std::to_string(*dim));
    return *out;
}

Operator parse_operator(Json& o, const std::string& path, Context& ctx, std::optional<Index> dim,
                        std::string& label) {
    require_object(o, path);
    const std::string type = text(o, path, "type");
    std::optional<Operator> out;
    if (type == "pauli") {
        check_keys(o, path, {"type", "axis", "label"});
        const Axis a = axis_value(o, path);
        out.emplace(pauli(a));
        label = std::string("sigma_") + (a == Axis::X ? "x" : a == Axis::Y ? "y" : "z");
    } else if (type == "identity") {
        check_keys(o, path, {"type", "dim", "label"});
        const long long d = dim ? integer(o, path, "dim", *dim) : integer(o, path, "dim");
        if (d < 1 || d > 4096) fail(sub(path, "dim"), "must be positive");
        out.emplace(Operator::identity(d));
        label = "identity";
    } else if (type == "matrix") {
        check_keys(o, path, {"type", "matrix", "label"});
        if (!o.contains("matrix")) fail(sub(path, "matrix"), "required matrix is missing");
        try {
            out.emplace(complex_matrix(o["matrix"], sub(path, "matrix")));
        } catch (const InvalidArgument& e) {
            fail(sub(path, "matrix"), e.what());
        }
        label = "A";
    } else if (type == "random-hermitian") {
        check_keys(o, path, {"type", "dim", "seed", "label"});
        const long long d = dim ? integer(o, path, "dim", *dim) : integer(o, path, "dim");
        if (d < 1 || d > 64) fail(sub(path, "dim"), "must be in 1..64");
        std::optional<Rng> own;
        if (o.contains("seed")) own.emplace(static_cast<std::uint64_t>(integer(o, path, "seed")));
        Rng& rng = own ? *own : ctx.rng;
        out.emplace(random_hermitian(rng, d));
        label = "A";
    } else if (type == "sum") {
        check_keys(o, path, {"type", "terms", "label"});
        if (!o.contains("terms") || !o["terms"].is_array() || o["terms"].empty())
            fail(sub(path, "terms"), "expected a non-empty list of {coefficient, operator}");
        Json& terms = o["terms"];
        std::optional<Matrix> acc;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tp = at(sub(path, "terms"), i);
            Json& t = terms[i];
            require_object(t, tp);
            check_keys(t, tp, {"coefficient", "operator"});
            const Complex c = complex_field(t, tp, "coefficient", Complex{1.0, 0.0});
            if (!t.contains("operator")) fail(sub(tp, "operator"), "required operator is missing");
            std::string ignored;
            const Operator term = parse_operator(t["operator"], sub(tp, "operator"), ctx, dim, ignored);
            if (acc && acc->rows() != term.dim()) fail(sub(tp, "operator"), "dimension differs from earlier terms");
            if (acc)
                *acc += c * term.matrix();
            else
                acc = c * term.matrix();
        }
        out.emplace(*acc);
        label = "A";
    } else {
        fail(sub(path, "type"), "unknown operator type \"" + type + "\"");
    }
    if (o.contains("label")) label = text(o, path, "label");
    if (dim && out->dim() != *dim)
        fail(path, "dimension " + std::to_string(out->dim()) + " does not match the model dimension " +
                       std::to_string(*dim));
    return *out;
}

void parse_envelope(Json& root, Scenario& s, bool need_duration) {
    if (!root.contains("envelope")) root["envelope"] = Json::object();
    Json& e = root["envelope"];
    require_object(e, "envelope");
    check_keys(e, "envelope", {"T", "ramp_fraction"});
    s.duration = need_duration ? number(e, "envelope", "T") : number(e, "envelope", "T", 1.0);
    s.ramp_fraction = number(e, "envelope", "ramp_fraction", 0.1);
    if (!(s.duration > 0.0)) fail("envelope.T", "must be positive");
    if (!(s.ramp_fraction > 0.0 && s.ramp_fraction < 0.5)) fail("envelope.ramp_fraction", "must lie in (0, 0.5)");
}

void parse_pointer(Json& root, Scenario& s) {
    if (!root.contains("pointer")) root["pointer"] = Json::object();
    Json& p = root["pointer"];
    require_object(p, "pointer");
    check_keys(p, "pointer", {"sigma_q", "n_p", "p_max"});
    s.pointer.sigma_q = number(p, "pointer", "sigma_q", 1.0);
    const long long n = integer(p, "pointer", "n_p", 512);
    s.pointer.p_max = number(p, "pointer", "p_max", 0.0);
    if (!(s.pointer.sigma_q > 0.0)) fail("pointer.sigma_q", "must be positive");
    if (n < 2 || n > (1 << 16) || (n & (n - 1)) != 0) fail("pointer.n_p", "must be a power of two in 2..65536");
    s.pointer.n_p = static_cast<int>(n);
}

void parse_options(Json& root, Scenario& s) {
    if (!root.contains("options")) root["options"] = Json::object();
    Json& o = root["options"];
    require_object(o, "options");
    check_keys(o, "options", {"steps", "max_step_norm", "fidelity_threshold", "max_grid_samples"});
    const long long steps = integer(o, "options", "steps", 0);
    if (steps < 0 || steps > 100000000) fail("options.steps", "must be >= 0 (0 selects automatically)");
    s.adiabatic.steps = static_cast<int>(steps);
    s.adiabatic.max_step_norm = number(o, "options", "max_step_norm", 0.1);
    if (!(s.adiabatic.max_step_norm > 0.0)) fail("options.max_step_norm", "must be positive");
    s.adiabatic.fidelity_threshold = number(o, "options", "fidelity_threshold", 0.99);
    const long long grid = integer(o, "options", "max_grid_samples", 1LL << 22);
    if (grid < 1) fail("options.max_grid_samples", "must be positive");
    s.adiabatic.max_grid_samples = grid;
}

Json& study_object(Json& root) {
    if (!root.contains("study")) root["study"] = Json::object();
    require_object(root["study"], "study");
    return root["study"];
}

void require_increasing_positive(const std::vector<double>& v, const std::string& path) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) fail(at(path, i), "must be positive");
        if (i > 0 && !(v[i] > v[i - 1])) fail(at(path, i), "values must be increasing");
    }
}

void parse_scaling(Json& st, Scenario& s) {
    const std::string q = text(st, "study", "quantity");
    ScalingSpec& sc = s.scaling;
    if (q == "transition-probability" || q == "error-norm") {
        sc.quantity = q == "error-norm" ? ScalingQuantity::ErrorNorm : ScalingQuantity::TransitionProbability;
        if (sc.quantity == ScalingQuantity::ErrorNorm)
            check_keys(st, "study", {"quantity", "N", "lambda_N", "T", "P", "steps", "sector"});
        else
            check_keys(st, "study", {"quantity", "N", "lambda_N", "T", "t_fraction", "sector"});
        sc.spins = number_list(st, "study", "N");
        require_increasing_positive(sc.spins, "study.N");
        for (std::size_t i = 0; i < sc.spins.size(); ++i) {
            try {
                spin_dimension(sc.spins[i]);
            } catch (const InvalidSpin& e) {
                fail(at("study.N", i), e.what());
            }
        }
        sc.lambda_n = number(st, "study", "lambda_N");
        if (!(sc.lambda_n > 0.0)) fail("study.lambda_N", "must be positive");
        sc.duration = number(st, "study", "T");
        if (!(sc.duration > 0.0)) fail("study.T", "must be positive");
        if (sc.quantity == ScalingQuantity::ErrorNorm) {
            sc.momentum = number(st, "study", "P", 1.0);
            const long long steps = integer(st, "study", "steps", 800);
            if (steps < 1 || steps > 10000000) fail("study.steps", "must be positive");
            sc.steps = static_cast<int>(steps);
        } else {
            sc.t_fraction = number(st, "study", "t_fraction", 0.5);
            if (!(sc.t_fraction > 0.0 && sc.t_fraction < 1.0)) fail("study.t_fraction", "must lie in (0, 1)");
        }
        const std::string sector = text(st, "study", "sector", std::string("auto"));
        if (sector == "auto")
            sc.sector = SectorMode::Auto;
        else if (sector == "full")
            sc.sector = SectorMode::Full;
        else if (sector == "restricted")
            sc.sector = SectorMode::Restricted;
        else
            fail("study.sector", "expected \"auto\", \"full\" or \"restricted\"");
    } else if (q == "kaon-overlaps") {
        sc.quantity = ScalingQuantity::KaonOverlaps;
        check_keys(st, "study", {"quantity", "epsilon", "omega_L", "omega_S"});
        if (!st.contains("epsilon") || !st["epsilon"].is_array() || st["epsilon"].size() < 2)
            fail("study.epsilon", "expected a list of at least two complex values");
        for (std::size_t i = 0; i < st["epsilon"].size(); ++i) {
            const Complex e = complex_value(st["epsilon"][i], at("study.epsilon", i));
            if (std::abs(e) == 0.0) fail(at("study.epsilon", i), "must be nonzero for a log-log fit");
            sc.epsilons.push_back(e);
        }
        sc.omega_long = complex_field(st, "study", "omega_L");
        sc.omega_short = complex_field(st, "study", "omega_S");
        try {
            for (Complex e : sc.epsilons) build_kaon_like(e, sc.omega_long, sc.omega_short);
        } catch (const Error& e) {
            fail("study", e.what());
        }
    } else {
        fail("study.quantity", "expected \"transition-probability\", \"error-norm\" or \"kaon-overlaps\"");
    }
}

ScenarioKind kind_from(const std::string& k) {
    for (ScenarioKind kind :
         {ScenarioKind::Impulsive, ScenarioKind::Adiabatic, ScenarioKind::Simultaneous, ScenarioKind::ConvergenceStudy,
          ScenarioKind::ScalingStudy, ScenarioKind::SpectralCheck, ScenarioKind::WeakValues,
          ScenarioKind::PerturbationStudy, ScenarioKind::OutcomeSampling, ScenarioKind::Evolution})
        if (k == to_string(kind)) return kind;
    fail("kind", "unknown kind \"" + k + "\"");
}

bool needs_model(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Adiabatic:
    case ScenarioKind::Simultaneous:
    case ScenarioKind::ConvergenceStudy:
    case ScenarioKind::OutcomeSampling:
    case ScenarioKind::Evolution: return true;
    default: return false;
    }
}

bool needs_state(ScenarioKind k) { return needs_model(k) || k == ScenarioKind::Impulsive; }

bool needs_observables(ScenarioKind k) {
    return k == ScenarioKind::Impulsive || k == ScenarioKind::Adiabatic || k == ScenarioKind::Simultaneous ||
           k == ScenarioKind::ConvergenceStudy;
}

bool needs_pointer(ScenarioKind k) { return needs_observables(k); }

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Scenario parse_scenario(const std::string& input, std::optional<std::uint64_t> seed_override) {
    Json root;
    try {
        root = Json::parse(input);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_column(input, e.byte);
        std::string msg = e.what();
        // drop nlohmann's "[json.exception.parse_error.101] parse error at line x, column y: " prefix
        if (const auto p = msg.find(": "); p != std::string::npos && msg.rfind("[json.exception", 0) == 0) {
            const auto q = msg.find(": ", p + 2);
            msg = msg.substr((q != std::string::npos ? q : p) + 2);
        }
        throw ParseError(msg, line, col);
    }
    if (!root.is_object()) throw ParseError("top level must be an object", 1, 1);

    check_keys(root, "", {"name", "description", "criterion", "kind", "seed", "model", "initial", "observables",
                          "envelope", "pointer", "options", "study"});

    Scenario s;
    s.name = text(root, "", "name");
    if (s.name.empty() || s.name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") != std::string::npos)
        fail("name", "must be non-empty and use only [A-Za-z0-9_-] (it names the output directory)");
    s.description = text(root, "", "description", std::string());
    if (root.contains("criterion")) s.criterion = static_cast<int>(integer(root, "", "criterion"));
    s.kind = kind_from(text(root, "", "kind"));
    if (seed_override) {
        root["seed"] = *seed_override;
        s.seed = *seed_override;
    } else {
        const long long seed = integer(root, "", "seed", 0);
        if (seed < 0) fail("seed", "must be non-negative");
        s.seed = static_cast<std::uint64_t>(seed);
    }

    Context ctx{Rng(s.seed), std::nullopt};

    if (needs_model(s.kind) && !root.contains("model")) fail("model", "required for kind " + std::string(to_string(s.kind)));
    if (root.contains("model")) {
        ctx.model = parse_model(root["model"], "model", ctx);
        s.hamiltonian = ctx.model;
    }
    const std::optional<Index> dim = ctx.model ? std::optional<Index>(ctx.model->dim()) : std::nullopt;

    if (needs_state(s.kind) && !root.contains("initial"))
        fail("initial", "required for kind " + std::string(to_string(s.kind)));
    if (root.contains("initial")) s.initial = parse_state(root["initial"], "initial", ctx, dim);

    if (needs_observables(s.kind)) {
        if (!root.contains("observables") || !root["observables"].is_array() || root["observables"].empty())
            fail("observables", "expected a non-empty list of operators");
        Json& obs = root["observables"];
        const std::optional<Index> odim = dim ? dim : std::optional<Index>(s.initial->dim());
        for (std::size_t i = 0; i < obs.size(); ++i) {
            std::string label;
            s.observables.push_back(parse_operator(obs[i], at("observables", i), ctx, odim, label));
            s.observable_labels.push_back(label);
        }
        if (s.kind != ScenarioKind::Simultaneous && s.observables.size() != 1)
            fail("observables", "kind " + std::string(to_string(s.kind)) + " takes exactly one observable");
        if (s.kind == ScenarioKind::Simultaneous && s.observables.size() > 3)
            fail("observables", "at most three simultaneous observables");
    } else if (root.contains("observables")) {
        fail("observables", "not used by kind " + std::string(to_string(s.kind)));
    }

    if (s.initial && dim && s.initial->dim() != *dim) fail("initial", "dimension does not match the model");

    const bool adiabatic_kind = s.kind == ScenarioKind::Adiabatic || s.kind == ScenarioKind::Simultaneous ||
                                s.kind == ScenarioKind::ConvergenceStudy;
    if (adiabatic_kind) {
        parse_envelope(root, s, s.kind != ScenarioKind::ConvergenceStudy);
        parse_options(root, s);
    }
    if (needs_pointer(s.kind)) parse_pointer(root, s);

    Json& st = study_object(root);
    switch (s.kind) {
    case ScenarioKind::Impulsive: {
        check_keys(st, "study", {"born_samples"});
        const long long n = integer(st, "study", "born_samples", 0);
        if (n < 0 || n > 100000000) fail("study.born_samples", "must be in 0..1e8");
        s.born_samples = static_cast<int>(n);
        if (!s.observables.front().is_hermitian())
            fail("observables[0]", "an impulsive measurement needs a Hermitian observable");
        break;
    }
    case ScenarioKind::Adiabatic: check_keys(st, "study", {}); break;
    case ScenarioKind::Simultaneous:
        check_keys(st, "study", {"repeat"});
        s.repeat = boolean(st, "study", "repeat", false);
        break;
    case ScenarioKind::ConvergenceStudy:
        check_keys(st, "study", {"T"});
        s.durations = number_list(st, "study", "T");
        require_increasing_positive(s.durations, "study.T");
        break;
    case ScenarioKind::ScalingStudy: parse_scaling(st, s); break;
    case ScenarioKind::SpectralCheck: {
        check_keys(st, "study", {"instances", "dim_min", "dim_max"});
        s.spectral.instances = static_cast<int>(integer(st, "study", "instances", 100));
        s.spectral.dim_min = static_cast<int>(integer(st, "study", "dim_min", 2));
        s.spectral.dim_max = static_cast<int>(integer(st, "study", "dim_max", 16));
        if (s.spectral.instances < 1 || s.spectral.instances > 100000) fail("study.instances", "must be in 1..1e5");
        if (s.spectral.dim_min < 1) fail("study.dim_min", "must be positive");
        if (s.spectral.dim_max < s.spectral.dim_min || s.spectral.dim_max > 64)
            fail("study.dim_max", "must be in dim_min..64");
        break;
    }
    case ScenarioKind::WeakValues: {
        check_keys(st, "study", {"entries", "spin_N", "spin_lambda"});
        if (st.contains("entries")) {
            Json& entries = st["entries"];
            if (!entries.is_array()) fail("study.entries", "expected a list");
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const std::string p = at("study.entries", i);
                Json& e = entries[i];
                require_object(e, p);
                check_keys(e, p, {"label", "bra", "ket", "observable"});
                const std::string label = text(e, p, "label");
                for (const char* k : {"bra", "ket", "observable"})
                    if (!e.contains(k)) fail(sub(p, k), "required field is missing");
                StateVector ket = parse_state(e["ket"], sub(p, "ket"), ctx, dim);
                StateVector bra = parse_state(e["bra"], sub(p, "bra"), ctx, ket.dim());
                std::string ignored;
                Operator a = parse_operator(e["observable"], sub(p, "observable"), ctx, ket.dim(), ignored);
                s.weak.entries.push_back({label, std::move(bra), std::move(ket), std::move(a)});
            }
        }
        if (st.contains("spin_N")) {
            s.weak.spins = number_list(st, "study", "spin_N");
            for (std::size_t i = 0; i < s.weak.spins.size(); ++i) {
                try {
                    spin_dimension(s.weak.spins[i]);
                } catch (const InvalidSpin& e) {
                    fail(at("study.spin_N", i), e.what());
                }
            }
            s.weak.spin_lambda = number(st, "study", "spin_lambda", 0.5);
            if (!(s.weak.spin_lambda > 0.0)) fail("study.spin_lambda", "must be positive");
        }
        if (s.weak.entries.empty() && s.weak.spins.empty()) fail("study", "needs entries and/or spin_N");
        break;
    }
    case ScenarioKind::PerturbationStudy: {
        check_keys(st, "study", {"instances", "dim", "coupling", "min_gap"});
        s.perturbation.instances = static_cast<int>(integer(st, "study", "instances", 50));
        s.perturbation.dim = static_cast<int>(integer(st, "study", "dim", 3));
        s.perturbation.coupling = number(st, "study", "coupling", 1e-3);
        s.perturbation.min_gap = number(st, "study", "min_gap", 0.3);
        if (s.perturbation.instances < 1 || s.perturbation.instances > 100000)
            fail("study.instances", "must be in 1..1e5");
        if (s.perturbation.dim < 2 || s.perturbation.dim > 32) fail("study.dim", "must be in 2..32");
        if (!(s.perturbation.coupling > 0.0)) fail("study.coupling", "must be positive");
        if (!(s.perturbation.min_gap >= 0.0)) fail("study.min_gap", "must be non-negative");
        break;
    }
    case ScenarioKind::OutcomeSampling: {
        check_keys(st, "study", {"T", "samples"});
        s.sampling.durations = number_list(st, "study", "T");
        for (std::size_t i = 0; i < s.sampling.durations.size(); ++i)
            if (!(s.sampling.durations[i] >= 0.0)) fail(at("study.T", i), "must be non-negative");
        const long long n = integer(st, "study", "samples", 100000);
        if (n < 1 || n > 100000000) fail("study.samples", "must be in 1..1e8");
        s.sampling.samples = static_cast<int>(n);
        break;
    }
    case ScenarioKind::Evolution: {
        check_keys(st, "study", {"t", "samples", "method"});
        s.evolution.time = number(st, "study", "t");
        if (!(s.evolution.time >= 0.0)) fail("study.t", "must be non-negative");
        const long long n = integer(st, "study", "samples", 11);
        if (n < 1 || n > 1000000) fail("study.samples", "must be in 1..1e6");
        s.evolution.samples = static_cast<int>(n);
        const std::string m = text(st, "study", "method", std::string("auto"));
        if (m == "auto")
            s.evolution.method = EvolutionMethod::Auto;
        else if (m == "spectral")
            s.evolution.method = EvolutionMethod::Spectral;
        else if (m == "expm")
            s.evolution.method = EvolutionMethod::MatrixExponential;
        else
            fail("study.method", "expected \"auto\", \"spectral\" or \"expm\"");
        break;
    }
    }

    s.resolved = std::move(root);
    return s;
}

Scenario load_scenario(const std::filesystem::path& file, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), seed_override);
}

}  // namespace nhm::cli
