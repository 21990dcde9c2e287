#include "nhm_cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "nhm/csv.hpp"
#include "nhm/envelope.hpp"
#include "nhm/linalg.hpp"
#include "nhm/random.hpp"
#include "nhm/stats.hpp"
#include "nhm/twostate.hpp"
#include "nhm/version.hpp"

#ifndef NHM_SCENARIO_DIR
#define NHM_SCENARIO_DIR "scenarios"
#endif

namespace nhm::cli {

namespace {

Json cjson(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

// Output files are assembled in memory so that the manifest can checksum
// exactly the bytes written.
struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;
    void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

// Runs fn(i) for i in [0, count) on up to `threads` workers; each index
// writes only its own slot, so results are independent of the thread count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

AdiabaticOptions adiabatic_options(const Scenario& s, const RunOptions& opts) {
    AdiabaticOptions o = s.adiabatic;
    o.threads = opts.threads;
    return o;
}

Index dominant_branch(const Vector& alpha) {
    Index best = 0;
    for (Index i = 1; i < alpha.size(); ++i)
        if (std::norm(alpha(i)) > std::norm(alpha(best))) best = i;
    return best;
}

Json outcome_json(const MeasurementOutcome& o, const std::string& label) {
    Json j;
    j["observable"] = label;
    j["shift_q"] = o.shift_q;
    j["shift_p"] = o.shift_p;
    j["branch"] = o.branch ? Json(*o.branch) : Json(nullptr);
    j["expected_value"] = cjson(o.expected_value);
    j["fidelity"] = o.fidelity;
    j["error_norm"] = o.error_norm;
    j["postselection_weight"] = o.postselection_weight;
    j["adiabaticity_violated"] = o.adiabaticity_violated;
    return j;
}

void run_impulsive(const Scenario& s, Outputs& out, Json& summary) {
    const Operator& a = s.observables.front();
    const ImpulsiveResult r = impulsive_measure(*s.initial, a, s.pointer.make());
    summary["outcome"] = outcome_json(r.outcome, s.observable_labels.front());

    const Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
    std::ostringstream csv;
    write_joint_pointer_csv(csv, r.joint, StateVector(Vector(es.eigenvectors().col(*r.outcome.branch))));
    out.add("pointer.csv", csv.str());

    const BornStatistics born = born_statistics(*s.initial, a);
    Json b;
    b["eigenvalues"] = to_json(std::vector<double>(born.eigenvalues.data(), born.eigenvalues.data() + born.eigenvalues.size()));
    b["probabilities"] = to_json(born.distribution.probabilities);
    if (s.born_samples > 0) {
        const auto draws = sample_collapses(born.distribution, s.seed, static_cast<std::size_t>(s.born_samples));
        std::vector<double> freq(born.distribution.probabilities.size(), 0.0);
        for (Index d : draws) freq[static_cast<std::size_t>(d)] += 1.0;
        std::ostringstream sc;
        CsvWriter w(sc, {"branch", "eigenvalue", "probability", "frequency", "sigma", "z"});
        double max_z = 0.0;
        for (std::size_t i = 0; i < freq.size(); ++i) {
            freq[i] /= s.born_samples;
            const double p = born.distribution.probabilities[i];
            const double sigma = std::sqrt(p * (1.0 - p) / s.born_samples);
            const double z = sigma > 0.0 ? (freq[i] - p) / sigma : (freq[i] == p ? 0.0 : HUGE_VAL);
            max_z = std::max(max_z, std::abs(z));
            w.row(std::vector<double>{double(i), born.eigenvalues(Index(i)), p, freq[i], sigma, z});
        }
        out.add("born_samples.csv", sc.str());
        b["samples"] = s.born_samples;
        b["frequencies"] = to_json(freq);
        b["max_abs_z"] = max_z;
    }
    summary["born"] = b;
}

void run_adiabatic(const Scenario& s, const RunOptions& opts, Outputs& out, Json& summary) {
    const Envelope env(s.duration, s.ramp_fraction);
    const AdiabaticResult r = adiabatic_measure(*s.hamiltonian, s.observables.front(), *s.initial, s.pointer.make(),
                                                env, adiabatic_options(s, opts));
    const Index branch = *r.outcome.branch;
    summary["steps"] = r.steps;
    summary["eigenvalue"] = cjson(r.spectrum.eigenvalues(branch));
    summary["outcome"] = outcome_json(r.outcome, s.observable_labels.front());
    std::ostringstream csv;
    write_joint_pointer_csv(csv, r.joint, r.spectrum.ket(branch));
    out.add("pointer.csv", csv.str());
}

void run_simultaneous(const Scenario& s, const RunOptions& opts, Outputs& out, Json& summary) {
    const Envelope env(s.duration, s.ramp_fraction);
    const std::vector<PointerState> pointers(s.observables.size(), s.pointer.make());
    const AdiabaticOptions aopt = adiabatic_options(s, opts);
    const SimultaneousResult r = simultaneous_adiabatic(*s.hamiltonian, s.observables, *s.initial, pointers, env, aopt);
    summary["steps"] = r.steps;
    Json outs = Json::array();
    std::ostringstream csv;
    CsvWriter w(csv, {"observable", "shift_q", "shift_p", "re_weak_value", "im_weak_value", "fidelity"});
    for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
        const auto& o = r.outcomes[i];
        outs.push_back(outcome_json(o, s.observable_labels[i]));
        w.row(std::vector<std::string>{s.observable_labels[i], format_double(o.shift_q), format_double(o.shift_p),
                                       format_double(o.expected_value.real()), format_double(o.expected_value.imag()),
                                       format_double(o.fidelity)});
    }
    summary["outcomes"] = outs;
    out.add("shifts.csv", csv.str());

    if (!s.repeat) return;
    // Effective collapse and re-measurement: the first reading selects a
    // branch (sampled from the outcome law), the system is reduced to that
    // branch's eigenket and measured again.
    const Operator& a = s.observables.front();
    const PointerState pointer = s.pointer.make();
    const AdiabaticResult first = adiabatic_measure(*s.hamiltonian, a, *s.initial, pointer, env, aopt);
    const OutcomeDistribution dist = outcome_distribution(decompose_ket(*s.initial, first.spectrum), first.spectrum, s.duration);
    const Index collapsed_branch = sample_collapse(dist, s.seed);
    const StateVector collapsed = first.spectrum.ket(collapsed_branch);
    const AdiabaticResult second = adiabatic_measure(*s.hamiltonian, a, collapsed, pointer, env, aopt);
    const Complex w_branch = weak_value(two_state_from_branch(first.spectrum, collapsed_branch), a);
    const OutcomeDistribution after = outcome_distribution(decompose_ket(collapsed, first.spectrum), first.spectrum, s.duration);

    Json rep;
    rep["observable"] = s.observable_labels.front();
    rep["first_branch"] = *first.outcome.branch;
    rep["collapsed_branch"] = collapsed_branch;
    rep["second_branch"] = *second.outcome.branch;
    rep["branch_weak_value"] = cjson(w_branch);
    rep["first_shift_q"] = first.outcome.shift_q;
    rep["second_shift_q"] = second.outcome.shift_q;
    rep["shift_difference"] = std::abs(second.outcome.shift_q - first.outcome.shift_q);
    rep["weak_value_difference"] = std::abs(second.outcome.expected_value - w_branch);
    rep["collapsed_branch_probability"] = after.probabilities[static_cast<std::size_t>(collapsed_branch)];
    rep["second_fidelity"] = second.outcome.fidelity;
    summary["repeat"] = rep;
}

void run_convergence(const Scenario& s, const RunOptions& opts, Outputs& out, Json& summary) {
    AdiabaticSetup setup{*s.hamiltonian, s.observables.front(), *s.initial, s.pointer.make(), s.ramp_fraction,
                         adiabatic_options(s, opts)};
    const auto rows = adiabatic_convergence_study(setup, s.durations);
    std::ostringstream csv;
    write_convergence_csv(csv, rows);
    out.add("convergence.csv", csv.str());

    const BiorthogonalSystem b = decompose(*s.hamiltonian);
    const Index branch = dominant_branch(decompose_ket(*s.initial, b));
    const Complex w = weak_value(two_state_from_branch(b, branch), s.observables.front());
    std::vector<double> dev, err, shift;
    for (const auto& r : rows) {
        dev.push_back(r.deviation);
        err.push_back(r.error_norm);
        shift.push_back(r.shift_q);
    }
    const std::size_t tail = std::min<std::size_t>(3, rows.size());
    summary["observable"] = s.observable_labels.front();
    summary["branch"] = branch;
    summary["expected_value"] = cjson(w);
    summary["T"] = to_json(s.durations);
    summary["shift_q"] = to_json(shift);
    summary["deviation"] = to_json(dev);
    summary["error_norm"] = to_json(err);
    summary["final_shift_q"] = shift.back();
    summary["final_deviation"] = dev.back();
    summary["deviation_tail_decreasing"] = tail_decreasing(dev, tail);
    summary["error_norm_tail_decreasing"] = tail_decreasing(err, tail);
}

void run_scaling(const Scenario& s, const RunOptions& opts, Outputs& out, Json& summary) {
    const ScalingSpec& sc = s.scaling;
    std::ostringstream csv;
    if (sc.quantity == ScalingQuantity::KaonOverlaps) {
        std::vector<double> eps, overlap, defect;
        CsvWriter w(csv, {"re_epsilon", "im_epsilon", "abs_epsilon", "abs_short_long_overlap", "left_right_defect"});
        for (Complex e : sc.epsilons) {
            const KaonModel k = build_kaon_like(e, sc.omega_long, sc.omega_short);
            eps.push_back(std::abs(e));
            overlap.push_back(std::abs(k.short_long_overlap()));
            defect.push_back(k.left_right_defect());
            w.row(std::vector<double>{e.real(), e.imag(), eps.back(), overlap.back(), defect.back()});
        }
        out.add("kaon_overlaps.csv", csv.str());
        summary["abs_epsilon"] = to_json(eps);
        summary["abs_short_long_overlap"] = to_json(overlap);
        summary["left_right_defect"] = to_json(defect);
        summary["overlap_slope"] = fit_power_law(eps, overlap).slope;
        summary["defect_slope"] = fit_power_law(eps, defect).slope;
        return;
    }

    ExactSpinOptions eo;
    eo.mode = sc.sector;
    const std::size_t count = sc.spins.size();
    if (sc.quantity == ScalingQuantity::TransitionProbability) {
        std::vector<double> p(count);
        parallel_for(count, opts.threads, [&](std::size_t i) {
            const double n = sc.spins[i];
            p[i] = exact_transition_probability(n, sc.lambda_n / n, sc.duration, sc.t_fraction * sc.duration, eo);
        });
        CsvWriter w(csv, {"N", "lambda", "T", "t", "probability"});
        for (std::size_t i = 0; i < count; ++i)
            w.row(std::vector<double>{sc.spins[i], sc.lambda_n / sc.spins[i], sc.duration,
                                      sc.t_fraction * sc.duration, p[i]});
        out.add("scaling.csv", csv.str());
        summary["N"] = to_json(sc.spins);
        summary["probability"] = to_json(p);
        if (count >= 2) summary["slope"] = fit_power_law(sc.spins, p).slope;
        return;
    }

    std::vector<ExactAdiabaticCheck> res(count);
    parallel_for(count, opts.threads, [&](std::size_t i) {
        const double n = sc.spins[i];
        res[i] = exact_adiabatic_check(n, sc.lambda_n / n, sc.duration, sc.momentum, sc.steps, eo);
    });
    CsvWriter w(csv, {"N", "lambda", "T", "P", "steps", "wrong_direction_norm", "spin_flip_norm", "total_error_norm",
                      "exact_flip_amplitude", "sector_discrepancy"});
    std::vector<double> total, wrong, flip;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& r = res[i];
        w.row(std::vector<double>{sc.spins[i], sc.lambda_n / sc.spins[i], sc.duration, sc.momentum, double(sc.steps),
                                  r.wrong_direction_norm, r.spin_flip_norm, r.total_error_norm,
                                  r.exact_flip_amplitude, r.sector_discrepancy});
        total.push_back(r.total_error_norm);
        wrong.push_back(r.wrong_direction_norm);
        flip.push_back(r.spin_flip_norm);
    }
    out.add("scaling.csv", csv.str());
    summary["N"] = to_json(sc.spins);
    summary["total_error_norm"] = to_json(total);
    if (count >= 2) {
        summary["slope"] = fit_power_law(sc.spins, total).slope;
        summary["wrong_direction_slope"] = fit_power_law(sc.spins, wrong).slope;
        summary["spin_flip_slope"] = fit_power_law(sc.spins, flip).slope;
    }
}

void run_spectral_check(const Scenario& s, Outputs& out, Json& summary) {
    Rng rng(s.seed);
    const SpectralCheckSpec& sp = s.spectral;
    std::ostringstream csv;
    CsvWriter w(csv, {"instance", "dim", "biorthogonality_residual", "reconstruction_residual", "min_gap"});
    double worst_bi = 0.0, worst_rec = 0.0;
    for (int i = 0; i < sp.instances; ++i) {
        const int span = sp.dim_max - sp.dim_min + 1;
        const int dim = std::min(sp.dim_max, sp.dim_min + static_cast<int>(uniform01(rng) * span));
        const Matrix m = random_complex_matrix(rng, dim);
        const BiorthogonalSystem b = decompose(Operator(m));
        const double bi = biorthogonality_residual(b);
        const double rec = max_abs_entry(reconstruct(b).matrix() - m);
        worst_bi = std::max(worst_bi, bi);
        worst_rec = std::max(worst_rec, rec);
        w.row(std::vector<double>{double(i), double(dim), bi, rec, b.min_gap()});
    }
    out.add("spectral.csv", csv.str());
    summary["instances"] = sp.instances;
    summary["max_biorthogonality_residual"] = worst_bi;
    summary["max_reconstruction_residual"] = worst_rec;
}

void run_weak_values(const Scenario& s, Outputs& out, Json& summary) {
    std::ostringstream csv;
    CsvWriter w(csv, {"label", "re", "im"});
    Json values = Json::array();
    auto emit = [&](const std::string& label, Complex v) {
        w.row(std::vector<std::string>{label, format_double(v.real()), format_double(v.imag())});
        Json e;
        e["label"] = label;
        e["value"] = cjson(v);
        values.push_back(e);
    };
    for (const auto& e : s.weak.entries) emit(e.label, weak_value(TwoStateVector(e.bra, e.ket), e.observable));
    for (double n : s.weak.spins) {
        const auto sw = spin_weak_values(build_spin_model(n, s.weak.spin_lambda));
        const std::string tag = "(N=" + format_double(n) + ")";
        emit("S_x" + tag, sw[0]);
        emit("S_y" + tag, sw[1]);
        emit("S_z" + tag, sw[2]);
    }
    out.add("weak_values.csv", csv.str());
    summary["values"] = values;
}

void run_perturbation(const Scenario& s, Outputs& out, Json& summary) {
    const PerturbationSpec& ps = s.perturbation;
    Rng rng(s.seed);
    std::ostringstream csv;
    CsvWriter w(csv, {"instance", "branch", "min_gap", "residual", "residual_half", "ratio", "shift_weak_value_error"});
    double lo = HUGE_VAL, hi = 0.0, worst_shift = 0.0;
    int rejected = 0;
    auto exact_shift_residual = [](const Matrix& h, const Matrix& a, double c, Complex predicted) {
        const Eigen::ComplexEigenSolver<Matrix> es(h + c * a);
        return std::abs(es.eigenvalues()(nearest_eigenvalue(es.eigenvalues(), predicted)) - predicted);
    };
    for (int i = 0; i < ps.instances;) {
        const Matrix h = random_complex_matrix(rng, ps.dim);
        const Matrix a = random_hermitian(rng, ps.dim);
        const BiorthogonalSystem b = decompose(Operator(h));
        // instances with nearly degenerate spectra are redrawn: first order
        // theory is not meant to hold there at these couplings
        if (b.min_gap() < ps.min_gap) {
            ++rejected;
            continue;
        }
        for (Index br = 0; br < b.dim(); ++br) {
            const PerturbationResult full = perturbed_eigenvalue(b, Operator(a), ps.coupling, br);
            const PerturbationResult half = perturbed_eigenvalue(b, Operator(a), 0.5 * ps.coupling, br);
            const double r1 = exact_shift_residual(h, a, ps.coupling, full.omega + full.shift);
            const double r2 = exact_shift_residual(h, a, 0.5 * ps.coupling, half.omega + half.shift);
            const double ratio = r1 / r2;
            const Complex aw = weak_value(two_state_from_branch(b, br), Operator(a));
            const double sw = std::abs(full.shift - ps.coupling * aw);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            worst_shift = std::max(worst_shift, sw);
            w.row(std::vector<double>{double(i), double(br), b.min_gap(), r1, r2, ratio, sw});
        }
        ++i;
    }
    out.add("perturbation.csv", csv.str());
    summary["instances"] = ps.instances;
    summary["rejected_instances"] = rejected;
    summary["coupling"] = ps.coupling;
    summary["min_ratio"] = lo;
    summary["max_ratio"] = hi;
    summary["max_shift_weak_value_error"] = worst_shift;
}

void run_outcome_sampling(const Scenario& s, Outputs& out, Json& summary) {
    const BiorthogonalSystem b = decompose(*s.hamiltonian);
    const Vector alpha = decompose_ket(*s.initial, b);
    std::ostringstream csv;
    CsvWriter w(csv, {"T", "branch", "re_omega", "im_omega", "abs_alpha_squared", "weight", "probability", "frequency",
                      "sigma", "z"});
    double max_z = 0.0;
    const double n = s.sampling.samples;
    Json per_t = Json::array();
    for (std::size_t k = 0; k < s.sampling.durations.size(); ++k) {
        const double t = s.sampling.durations[k];
        const OutcomeDistribution dist = outcome_distribution(alpha, b, t);
        const auto draws = sample_collapses(dist, s.seed + k, static_cast<std::size_t>(s.sampling.samples));
        std::vector<double> freq(dist.probabilities.size(), 0.0);
        for (Index d : draws) freq[static_cast<std::size_t>(d)] += 1.0;
        double max_z_t = 0.0;
        for (std::size_t i = 0; i < freq.size(); ++i) {
            freq[i] /= n;
            const double p = dist.probabilities[i];
            const double sigma = std::sqrt(p * (1.0 - p) / n);
            const double z = sigma > 0.0 ? (freq[i] - p) / sigma : (freq[i] == p ? 0.0 : HUGE_VAL);
            max_z_t = std::max(max_z_t, std::abs(z));
            const Complex wi = b.eigenvalues(Index(i));
            w.row(std::vector<double>{t, double(i), wi.real(), wi.imag(), std::norm(alpha(Index(i))), dist.weights[i], p,
                                      freq[i], sigma, z});
        }
        max_z = std::max(max_z, max_z_t);
        Json e;
        e["T"] = t;
        e["probabilities"] = to_json(dist.probabilities);
        e["frequencies"] = to_json(freq);
        e["max_abs_z"] = max_z_t;
        per_t.push_back(e);
    }
    out.add("outcomes.csv", csv.str());
    summary["samples"] = s.sampling.samples;
    summary["durations"] = per_t;
    summary["max_abs_z"] = max_z;
}

void run_evolution(const Scenario& s, Outputs& out, Json& summary) {
    const EvolutionResult r = evolve(*s.initial, *s.hamiltonian, s.evolution.time, s.evolution.samples, s.evolution.method);
    std::ostringstream csv;
    write_evolution_csv(csv, r);
    out.add("evolution.csv", csv.str());
    summary["samples"] = r.times.size();
    summary["final_norm"] = r.norms.back();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s.push_back(hex[md[i] >> 4]);
        s.push_back(hex[md[i] & 15]);
    }
    return s;
}

std::filesystem::path default_scenario_dir() {
    if (const char* env = std::getenv("NHM_SCENARIO_DIR"); env && *env) return env;
    return NHM_SCENARIO_DIR;
}

std::vector<std::filesystem::path> list_scenario_files(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw IoError("scenario directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

RunReport run_scenario(const Scenario& s, const RunOptions& opts) {
    Outputs out;
    Json summary;
    summary["scenario"] = s.name;
    summary["kind"] = to_string(s.kind);
    if (s.criterion) summary["criterion"] = *s.criterion;
    summary["seed"] = s.seed;

    switch (s.kind) {
    case ScenarioKind::Impulsive: run_impulsive(s, out, summary); break;
    case ScenarioKind::Adiabatic: run_adiabatic(s, opts, out, summary); break;
    case ScenarioKind::Simultaneous: run_simultaneous(s, opts, out, summary); break;
    case ScenarioKind::ConvergenceStudy: run_convergence(s, opts, out, summary); break;
    case ScenarioKind::ScalingStudy: run_scaling(s, opts, out, summary); break;
    case ScenarioKind::SpectralCheck: run_spectral_check(s, out, summary); break;
    case ScenarioKind::WeakValues: run_weak_values(s, out, summary); break;
    case ScenarioKind::PerturbationStudy: run_perturbation(s, out, summary); break;
    case ScenarioKind::OutcomeSampling: run_outcome_sampling(s, out, summary); break;
    case ScenarioKind::Evolution: run_evolution(s, out, summary); break;
    }
    out.add("summary.json", summary.dump(2) + "\n");

    Json manifest;
    manifest["scenario"] = s.name;
    manifest["kind"] = to_string(s.kind);
    manifest["version"] = kVersion;
    manifest["config"] = s.resolved;
    Json files = Json::array();
    for (const auto& [name, content] : out.files) {
        Json f;
        f["file"] = name;
        f["bytes"] = content.size();
        f["sha256"] = sha256_hex(content);
        files.push_back(f);
    }
    manifest["outputs"] = files;
    out.add("manifest.json", manifest.dump(2) + "\n");

    RunReport report;
    report.directory = opts.out_dir / s.name;
    std::error_code ec;
    std::filesystem::create_directories(report.directory, ec);
    if (ec) throw IoError("cannot create output directory " + report.directory.string() + ": " + ec.message());
    for (const auto& [name, content] : out.files) {
        write_file(report.directory / name, content);
        report.files.push_back(name);
    }
    report.summary = std::move(summary);
    return report;
}

}  // namespace nhm::cli
