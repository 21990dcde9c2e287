#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "nhm_cli/runner.hpp"
#include "nhm_cli/scenario.hpp"

namespace fs = std::filesystem;
using namespace nhm::cli;

namespace {

const fs::path kScenarios = NHM_TEST_SCENARIO_DIR;
const fs::path kData = NHM_TEST_DATA_DIR;
const fs::path kWork = NHM_TEST_WORK_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = kWork / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int nhmsim(const std::string& args) {
    const std::string cmd = std::string("\"") + NHM_TEST_NHMSIM + "\" --quiet " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> outputs(const fs::path& dir) {
    std::map<std::string, std::string> m;
    for (const auto& e : fs::directory_iterator(dir)) m[e.path().filename().string()] = slurp(e.path());
    return m;
}

}  // namespace

TEST(ScenarioParse, SyntaxErrorHasPosition) {
    try {
        load_scenario(kData / "bad_syntax.json");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_GE(e.column(), 22u);
        EXPECT_LE(e.column(), 23u);
    }
    EXPECT_THROW(parse_scenario(""), ParseError);
}

TEST(ScenarioParse, ValidationNamesTheField) {
    try {
        load_scenario(kData / "dim_mismatch.json");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field().rfind("observables[0]", 0), 0u) << e.field();
    }
    try {
        parse_scenario(R"({"name": "x", "kind": "adiabatic", "modle": {}})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "modle");
    }
    EXPECT_THROW(parse_scenario(R"({"name": "x", "kind": "nonsense"})"), ValidationError);
    EXPECT_THROW(parse_scenario(R"({"name": "bad name", "kind": "spectral-check"})"), ValidationError);
    EXPECT_THROW(load_scenario(kData / "does_not_exist.json"), IoError);
}

TEST(ScenarioParse, ComplexAndOperatorForms) {
    const Scenario s = parse_scenario(R"({
      "name": "forms", "kind": "adiabatic",
      "model": {"type": "matrix", "matrix": [[1, [0, 2]], [[0, -2], -1]]},
      "initial": {"type": "vector", "amplitudes": [1, [0, 1]]},
      "observables": [{"type": "sum", "terms": [
          {"coefficient": 2, "operator": {"type": "pauli", "axis": "z"}},
          {"coefficient": [0, 1], "operator": {"type": "identity"}}]}],
      "envelope": {"T": 3}
    })");
    ASSERT_TRUE(s.hamiltonian);
    EXPECT_EQ((*s.hamiltonian)(0, 1), nhm::Complex(0.0, 2.0));
    EXPECT_EQ((*s.initial)[1], nhm::Complex(0.0, 1.0));
    EXPECT_EQ(s.observables[0](0, 0), nhm::Complex(2.0, 1.0));
    EXPECT_EQ(s.observables[0](1, 1), nhm::Complex(-2.0, 1.0));
    EXPECT_EQ(s.pointer.n_p, 512);
    EXPECT_TRUE(s.resolved.contains("pointer"));
}

TEST(ScenarioParse, SeedOverrideChangesRandomDraws) {
    const Scenario a = load_scenario(kData / "small_adiabatic.json");
    const Scenario b = load_scenario(kData / "small_adiabatic.json");
    const Scenario c = load_scenario(kData / "small_adiabatic.json", 6);
    EXPECT_EQ(a.hamiltonian->matrix(), b.hamiltonian->matrix());
    EXPECT_NE(a.hamiltonian->matrix(), c.hamiltonian->matrix());
    EXPECT_EQ(c.seed, 6u);
    EXPECT_EQ(c.resolved["seed"], 6);
}

TEST(BundledScenarios, AllValidateAndCoverEachCriterionOnce) {
    std::multiset<int> criteria;
    const auto files = list_scenario_files(kScenarios);
    ASSERT_GE(files.size(), 10u);
    for (const auto& f : files) {
        const Scenario s = load_scenario(f);
        EXPECT_EQ(s.name, f.stem().string());
        if (s.criterion) criteria.insert(*s.criterion);
    }
    for (int c = 1; c <= 10; ++c) EXPECT_EQ(criteria.count(c), 1u) << "criterion " << c;
}

TEST(Runner, ManifestChecksumsMatchFiles) {
    const fs::path out = fresh_dir("manifest");
    const RunReport r = run_scenario(load_scenario(kData / "small_adiabatic.json"), RunOptions{out, 1});
    EXPECT_EQ(r.directory, out / "small_adiabatic");
    ASSERT_FALSE(r.files.empty());
    EXPECT_EQ(r.files.back(), "manifest.json");
    const Json m = Json::parse(slurp(r.directory / "manifest.json"));
    EXPECT_EQ(m["scenario"], "small_adiabatic");
    EXPECT_EQ(m["kind"], "adiabatic");
    ASSERT_EQ(m["outputs"].size() + 1, r.files.size());
    for (const auto& o : m["outputs"]) {
        const std::string bytes = slurp(r.directory / o["file"].get<std::string>());
        EXPECT_EQ(o["bytes"].get<std::size_t>(), bytes.size());
        EXPECT_EQ(o["sha256"].get<std::string>(), sha256_hex(bytes));
    }
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Runner, RerunsAreByteIdenticalAcrossThreadCounts) {
    const fs::path a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
    const Scenario s = load_scenario(kScenarios / "scaling_1overN.json");
    run_scenario(s, RunOptions{a, 1});
    run_scenario(s, RunOptions{b, 4});
    EXPECT_EQ(outputs(a / s.name), outputs(b / s.name));

    const Scenario q = load_scenario(kData / "small_adiabatic.json");
    run_scenario(q, RunOptions{a, 1});
    run_scenario(q, RunOptions{b, 3});
    EXPECT_EQ(outputs(a / q.name), outputs(b / q.name));
}

TEST(Nhmsim, ExitCodes) {
    const fs::path out = fresh_dir("exit_codes");
    const std::string o = "--out-dir \"" + out.string() + "\" ";
    EXPECT_EQ(nhmsim(o + "run \"" + (kData / "small_adiabatic.json").string() + "\""), 0);
    EXPECT_TRUE(fs::exists(out / "small_adiabatic" / "manifest.json"));
    EXPECT_EQ(nhmsim("validate \"" + (kData / "small_adiabatic.json").string() + "\""), 0);
    EXPECT_EQ(nhmsim("--scenario-dir \"" + kScenarios.string() + "\" validate outcome_law"), 0);
    EXPECT_EQ(nhmsim("--scenario-dir \"" + kScenarios.string() + "\" list"), 0);

    EXPECT_EQ(nhmsim("validate \"" + (kData / "bad_syntax.json").string() + "\""), 2);
    EXPECT_EQ(nhmsim("validate \"" + (kData / "dim_mismatch.json").string() + "\""), 2);
    EXPECT_EQ(nhmsim("frobnicate"), 2);
    EXPECT_EQ(nhmsim(o + "run \"" + (kData / "degenerate.json").string() + "\""), 3);
    EXPECT_EQ(nhmsim("validate \"" + (kData / "does_not_exist.json").string() + "\""), 4);

    // output directory below a regular file
    const fs::path blocker = out / "blocker";
    std::ofstream(blocker) << "x";
    EXPECT_EQ(nhmsim("--out-dir \"" + blocker.string() + "\" run \"" + (kData / "small_adiabatic.json").string() + "\""),
              4);
}
