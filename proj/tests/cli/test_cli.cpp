#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "dgff/harness.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    std::string cmd = std::string(DGFF_CLI) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("dgff_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("exit codes")
{
    fs::path d = fresh("codes");
    const std::string out = " --out-dir " + d.string();
    CHECK(run("--help") == 0);
    CHECK(run(out + " green --domain box:6") == 0);
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run(out + " green --bogus 1") == 2);
    CHECK(run(out + " green --domain box:1") == 2);
    CHECK(run(out + " sample --domain hexagon:4") == 2);
    CHECK(run(out + " brw --b 2 --n 60") == 2);
    CHECK(run(out + " levelset --lambda 1.5") == 2);
    CHECK(run(out + " resist --net /nonexistent/net.txt --src a --dst b") != 0);
    CHECK(run(" --config /nonexistent/cfg.txt green") == 2);
    CHECK(run(out + " suite --only 2,3") == 0);
    CHECK(run(out + " suite --only 99") == 2);
    fs::remove_all(d);
}

TEST_CASE("outputs are byte identical for a fixed seed")
{
    fs::path a = fresh("det_a"), b = fresh("det_b"), c = fresh("det_c");
    const std::string args = " sample --domain disc:6 --reps 4 --out fields.bin";
    REQUIRE(run("--seed 11 --out-dir " + a.string() + args) == 0);
    REQUIRE(run("--seed 11 --threads 2 --out-dir " + b.string() + args) == 0);
    REQUIRE(run("--seed 12 --out-dir " + c.string() + args) == 0);
    CHECK(slurp(a / "fields.bin") == slurp(b / "fields.bin"));
    CHECK(slurp(a / "fields.bin") != slurp(c / "fields.bin"));
    const std::string walk = " walk --beta 0.6 --N 8 --reps 5 --out walk.csv";
    REQUIRE(run("--seed 4 --out-dir " + a.string() + walk) == 0);
    REQUIRE(run("--seed 4 --out-dir " + b.string() + walk) == 0);
    CHECK(slurp(a / "walk.csv") == slurp(b / "walk.csv"));
    for (auto p : {a, b, c}) fs::remove_all(p);
}

TEST_CASE("manifest hashes and config echo")
{
    fs::path d = fresh("manifest");
    fs::path cfg = d / "run.cfg";
    std::ofstream(cfg) << "experiment = chaos\nseed = 8\nlambda = 0.3\nlevels = 3\nresolution-log2 = 5\nout = mass.csv\n";
    REQUIRE(run("--config " + cfg.string() + " --out-dir " + d.string() + " chaos") == 0);
    auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
    CHECK(m["schema_version"] == dgff::kManifestSchema);
    CHECK(m["seed"] == 8);
    CHECK(m["params"]["levels"] == "3");
    bool saw_csv = false;
    for (const auto& o : m["outputs"]) {
        std::string body = slurp(d / o["path"].get<std::string>());
        CHECK(o["sha1"] == dgff::git_blob_sha1(body));
        saw_csv = saw_csv || o["path"] == "mass.csv";
    }
    CHECK(saw_csv);
    // command-line flags override the config file
    REQUIRE(run("--config " + cfg.string() + " --seed 9 --out-dir " + d.string() + " chaos --levels 2") == 0);
    auto m2 = nlohmann::json::parse(slurp(d / "manifest.json"));
    CHECK(m2["seed"] == 9);
    CHECK(m2["params"]["levels"] == "2");
    fs::remove_all(d);
}

TEST_CASE("resist prints both quantities")
{
    fs::path d = fresh("resist");
    std::ofstream(d / "net.txt") << "1 2 1\n2 3 1\n1 3 2\n";
    std::ofstream(d / "A.txt") << "1\n";
    std::ofstream(d / "B.txt") << "3\n";
    std::string cmd = std::string(DGFF_CLI) + " --out-dir " + d.string() + " resist --net " + (d / "net.txt").string() +
                      " --src " + (d / "A.txt").string() + " --dst " + (d / "B.txt").string() +
                      " --decompose paths > " + (d / "out.txt").string() + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::string out = slurp(d / "out.txt");
    CHECK(out.find("R_eff 0.4") != std::string::npos);
    CHECK(out.find("C_eff 2.5") != std::string::npos);
    auto dec = nlohmann::json::parse(slurp(d / "decomposition.json"));
    CHECK(dec.contains("paths"));
    fs::remove_all(d);
}
