#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhm/errors.hpp"
#include "nhm/measure.hpp"
#include "nhm/models.hpp"
#include "nhm/types.hpp"

namespace nhm::cli {

using Json = nlohmann::ordered_json;

/// Malformed scenario text; carries the 1-based line and column.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed but inconsistent scenario; the message starts with the
/// offending field path (e.g. "observables[1].matrix").
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what);
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class ScenarioKind {
    Impulsive,
    Adiabatic,
    Simultaneous,
    ConvergenceStudy,
    ScalingStudy,
    SpectralCheck,
    WeakValues,
    PerturbationStudy,
    OutcomeSampling,
    Evolution,
};

const char* to_string(ScenarioKind kind);

struct PointerSpec {
    double sigma_q = 1.0;
    int n_p = 512;
    double p_max = 0.0;  // <= 0: 8 sigma_P

    [[nodiscard]] PointerState make() const { return PointerState::gaussian(sigma_q, n_p, p_max); }
};

enum class ScalingQuantity { TransitionProbability, ErrorNorm, KaonOverlaps };

struct ScalingSpec {
    ScalingQuantity quantity = ScalingQuantity::TransitionProbability;
    std::vector<double> spins;  // N values
    double lambda_n = 1.0;
    double duration = 1.0;
    double t_fraction = 0.5;
    double momentum = 1.0;
    int steps = 800;
    SectorMode sector = SectorMode::Auto;
    std::vector<Complex> epsilons;
    Complex omega_long{0.0, 0.0};
    Complex omega_short{0.0, 0.0};
};

struct SpectralCheckSpec {
    int instances = 100;
    int dim_min = 2;
    int dim_max = 16;
};

struct WeakValueEntry {
    std::string label;
    StateVector bra;
    StateVector ket;
    Operator observable;
};

struct WeakValueSpec {
    std::vector<WeakValueEntry> entries;
    std::vector<double> spins;
    double spin_lambda = 0.5;
};

struct PerturbationSpec {
    int instances = 50;
    int dim = 3;
    double coupling = 1e-3;
    double min_gap = 0.3;
};

struct SamplingSpec {
    std::vector<double> durations;
    int samples = 100000;
};

struct EvolutionSpec {
    double time = 1.0;
    int samples = 11;
    EvolutionMethod method = EvolutionMethod::Auto;
};

/// A fully resolved scenario. Every field the kind needs is populated and
/// dimension-checked; `resolved` is the canonical JSON form (input plus
/// defaults plus seed override) recorded in the run manifest.
struct Scenario {
    std::string name;
    std::string description;
    ScenarioKind kind = ScenarioKind::Adiabatic;
    std::uint64_t seed = 0;
    std::optional<int> criterion;

    std::optional<Operator> hamiltonian;
    std::optional<StateVector> initial;
    std::vector<Operator> observables;
    std::vector<std::string> observable_labels;

    double duration = 1.0;
    double ramp_fraction = 0.1;
    PointerSpec pointer;
    AdiabaticOptions adiabatic;

    std::vector<double> durations;  // convergence-study
    bool repeat = false;            // simultaneous: also run the repeatability check
    int born_samples = 0;           // impulsive: collapses drawn from the Born law

    ScalingSpec scaling;
    SpectralCheckSpec spectral;
    WeakValueSpec weak;
    PerturbationSpec perturbation;
    SamplingSpec sampling;
    EvolutionSpec evolution;

    Json resolved;
};

/// Parses and validates. `seed_override` replaces the file's seed before
/// anything random (e.g. a random model) is drawn.
Scenario parse_scenario(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario load_scenario(const std::filesystem::path& file, std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace nhm::cli
