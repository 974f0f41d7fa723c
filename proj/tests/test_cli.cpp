#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args, const fs::path& workdir) {
    fs::path out = workdir / "stdout.txt";
    std::string cmd = std::string(CURVECAP_TOOL_PATH) + " " + args + " > " + out.string() + " 2>" +
                      (workdir / "stderr.txt").string();
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

fs::path make_workdir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("curvecap_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_spec(const fs::path& p, const json& j) {
    std::ofstream out(p);
    out << j.dump(2);
}

json quartic_spec() {
    return json{{"nvars", 3},
                {"generators",
                 {"z2^2 + z3^2 - z1^2 - 1", "z3^2 + z2*z3 - 2*z2^2 + z1*z3 - z1*z2 + 1"}},
                {"sampling", {{"kind", "circle"}, {"radius", "1"}, {"count", 12}}},
                {"analysis", {{"s_max", 6}, {"n_max", 5}, {"seed", 424242}}}};
}

json line_spec(int count = 48, int s_max = 10, int n_max = 10) {
    return json{{"nvars", 2},
                {"generators", {"z2 - z1"}},
                {"sampling", {{"kind", "circle"}, {"radius", "1"}, {"count", count}}},
                {"analysis",
                 {{"s_max", s_max},
                  {"n_max", n_max},
                  {"seed", 7},
                  {"verify", {{"gap_tol", 0.05}, {"diag_tol", 0.02}}}}}};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("analyze emits the exact multiplication matrix", "[cli]") {
    fs::path dir = make_workdir("analyze");
    write_spec(dir / "spec.json", quartic_spec());
    RunResult r = run_cli("analyze --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string(),
                          dir);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(slurp(dir / "analyze.json"));
    CHECK(rep.at("d") == 4);
    CHECK(rep.at("hypotheses").at("pass") == true);
    CHECK(rep.at("lt_ideal") == json({"z2*z3", "z3^2", "z2^3"}));
    // [[z2]] with exact rational entries
    const json& m2 = rep.at("mul_matrices").at(1);
    REQUIRE(m2.at("var") == 2);
    json want = json::array({json::array({"0", "0", "-1", "-1/10"}),
                             json::array({"1", "0", "1", "3/5"}),
                             json::array({"0", "0", "-1", "-1/10"}),
                             json::array({"0", "1", "3", "1/5"})});
    CHECK(m2.at("entries") == want);
    CHECK(rep.at("infinity_points").size() == 4);
}

TEST_CASE("analyze on a line and an empty variety", "[cli]") {
    fs::path dir = make_workdir("line");
    json spec = line_spec();
    write_spec(dir / "spec.json", spec);
    RunResult r = run_cli("analyze --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string(),
                          dir);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(slurp(dir / "analyze.json"));
    CHECK(rep.at("d") == 1);
    CHECK(rep.at("infinity_points").size() == 1);

    json bad = spec;
    bad["generators"] = {"z1", "z1 - 1"};
    write_spec(dir / "bad.json", bad);
    RunResult rb = run_cli("analyze --spec " + (dir / "bad.json").string() + " --out " +
                               dir.string(),
                           dir);
    CHECK(rb.exit_code == 1);
    CHECK(rb.stdout_text.find("\"error\"") != std::string::npos);
}

TEST_CASE("hypothesis violation exits with code 2", "[cli]") {
    fs::path dir = make_workdir("hyp");
    json spec = line_spec();
    spec["generators"] = {"z2^2 - 2*z1*z2 + z1^2"}; // double line at infinity
    write_spec(dir / "spec.json", spec);
    RunResult r = run_cli("analyze --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string(),
                          dir);
    CHECK(r.exit_code == 2);
    RunResult rc = run_cli("cheb --spec " + (dir / "spec.json").string() + " --out " +
                               dir.string(),
                           dir);
    CHECK(rc.exit_code == 2);
}

TEST_CASE("unknown spec keys are rejected before computation", "[cli]") {
    fs::path dir = make_workdir("strict");
    json spec = line_spec();
    spec["extra_key"] = 1;
    write_spec(dir / "spec.json", spec);
    RunResult r = run_cli("analyze --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string(),
                          dir);
    CHECK(r.exit_code == 1);

    json spec2 = line_spec();
    spec2["analysis"]["mystery"] = true;
    write_spec(dir / "spec2.json", spec2);
    CHECK(run_cli("analyze --spec " + (dir / "spec2.json").string() + " --out " + dir.string(),
                  dir)
              .exit_code == 1);
}

TEST_CASE("verify passes on the line and respects the tolerance gate", "[cli]") {
    fs::path dir = make_workdir("verify");
    write_spec(dir / "spec.json", line_spec());
    RunResult r = run_cli("verify --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string() + " --threads 2",
                          dir);
    REQUIRE(r.exit_code == 0);
    json v = json::parse(slurp(dir / "verify.json"));
    CHECK(v.at("pass") == true);
    CHECK(v.at("theorem_gap_est").get<double>() < 0.05);

    // absurd tolerance forces exit 3 but the report is still written
    json strict = line_spec();
    strict["analysis"]["verify"]["gap_tol"] = 1e-9;
    write_spec(dir / "strict.json", strict);
    fs::remove(dir / "verify.json");
    RunResult rs = run_cli("verify --spec " + (dir / "strict.json").string() + " --out " +
                               dir.string(),
                           dir);
    CHECK(rs.exit_code == 3);
    CHECK(fs::exists(dir / "verify.json"));
    CHECK(json::parse(slurp(dir / "verify.json")).at("pass") == false);
}

TEST_CASE("cheb rejects s_max below the directional degree", "[cli]") {
    fs::path dir = make_workdir("smax");
    json spec = quartic_spec();
    spec["analysis"]["s_max"] = 1; // v_lambda has degree 2 on this curve
    write_spec(dir / "spec.json", spec);
    RunResult r = run_cli("cheb --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string(),
                          dir);
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("s_max") != std::string::npos);
}

TEST_CASE("identical spec and seed give byte-identical CSV output", "[cli]") {
    fs::path dir1 = make_workdir("det1");
    fs::path dir2 = make_workdir("det2");
    json spec = line_spec(32, 8, 8);
    write_spec(dir1 / "spec.json", spec);
    write_spec(dir2 / "spec.json", spec);
    REQUIRE(run_cli("cheb --spec " + (dir1 / "spec.json").string() + " --out " + dir1.string() +
                        " --threads 1",
                    dir1)
                .exit_code == 0);
    REQUIRE(run_cli("cheb --spec " + (dir2 / "spec.json").string() + " --out " + dir2.string() +
                        " --threads 4",
                    dir2)
                .exit_code == 0);
    CHECK(slurp(dir1 / "cheb.csv") == slurp(dir2 / "cheb.csv"));
    // rows carry the seed and tolerance that produced them
    CHECK(slurp(dir1 / "cheb.csv").find(",7,") != std::string::npos);
}

TEST_CASE("transform subcommand reports identity gaps of zero", "[cli]") {
    fs::path dir = make_workdir("transform");
    json spec = line_spec(32, 8, 6);
    spec["transform"] = {
        {"matrix", json::array({json::array({"1", "0"}), json::array({"0", "1"})})},
        {"shift", json::array({"0", "0"})}};
    write_spec(dir / "spec.json", spec);
    RunResult r = run_cli("transform --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string(),
                          dir);
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(slurp(dir / "transform.json"));
    CHECK(rep.at("law").at("rel_gap") == 0.0);
    for (const auto& row : rep.at("directional")) CHECK(row.at("rel_gap") == 0.0);
}

TEST_CASE("file sampling round trip through the CLI", "[cli]") {
    fs::path dir = make_workdir("filesample");
    {
        std::ofstream pts(dir / "pts.txt");
        pts << "# unit circle points on the line\n";
        for (int k = 0; k < 24; ++k) {
            double th = 2.0 * M_PI * k / 24.0;
            pts << std::cos(th) << ":" << std::sin(th) << "," << std::cos(th) << ":"
                << std::sin(th) << "\n";
        }
    }
    json spec = line_spec(0, 8, 8);
    spec["sampling"] = {{"kind", "file"}, {"path", (dir / "pts.txt").string()}};
    write_spec(dir / "spec.json", spec);
    RunResult r = run_cli("cheb --spec " + (dir / "spec.json").string() + " --out " +
                              dir.string(),
                          dir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "cheb.csv"));
}
