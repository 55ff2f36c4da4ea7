#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "anosov/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* p = std::getenv("ANOSOV_CLI");
    REQUIRE_MESSAGE(p != nullptr, "ANOSOV_CLI must point at the anosov-cli binary");
    return p;
}

fs::path workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "anosov_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const fs::path out = workdir() / "stdout.txt";
    const std::string cmd = "cd '" + workdir().string() + "' && '" + cli() + "' " + args + " > '" + out.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    return r;
}

void write(const std::string& name, const std::string& text) { std::ofstream(workdir() / name) << text; }

void fixtures() {
    static bool done = false;
    if (done) return;
    REQUIRE(run("example schottky2 --out .").code == anosov::kExitPass);
    write("h.json", R"({"generators":["a"]})");
    write("rotation.json", R"({"field":"R","d":2,"generators":[
        {"label":"a","re":[[3,0],[0,0.3333333333333333]]},
        {"label":"b","re":[[0.5403023058681398,-0.8414709848078965],[0.8414709848078965,0.5403023058681398]]}]})");
    write("broken.json", "{\"d\": 2, \"generators\": [");
    done = true;
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help").code == 0);
    CHECK(run("").code == anosov::kExitError);
    CHECK(run("bogus").code == anosov::kExitError);
    CHECK(run("dims").code == anosov::kExitError);
}

TEST_CASE("example writes a representation") {
    fixtures();
    Result r = run("example schottky2_sym3");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"generators\"") != std::string::npos);
    Result bad = run("example nope");
    CHECK(bad.code == anosov::kExitError);
    CHECK(bad.out.find("unknown example") != std::string::npos);
    CHECK(fs::exists(workdir() / "schottky2.json"));
}

TEST_CASE("dims") {
    Result r = run("dims --tag pair_m --d 3");
    CHECK(r.code == 0);
    CHECK(r.out == "42\n");
    CHECK(run("dims --tag quat_r --d 3").out == "951152548170\n");
    CHECK(run("dims --tag nope --d 3").code == anosov::kExitError);
    CHECK(run("dims --d 2").out.find("quat_remark 518400") != std::string::npos);
}

TEST_CASE("gap") {
    fixtures();
    Result r = run("gap --rep schottky2.json --L 8");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("length,min_gap,argmin_word", 0) == 0);
    CHECK(run("gap --rep rotation.json --L 6").code == anosov::kExitNotCertified);
    CHECK(run("gap --rep schottky2.json --L 11").code == anosov::kExitError);
}

TEST_CASE("sample") {
    fixtures();
    Result r = run("sample --rep schottky2.json --L 3");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("index,word,radius,", 0) == 0);
    Result f = run("sample --rep schottky2.json --L 3 --subgroup h.json --out sample");
    CHECK(f.code == 0);
    CHECK(fs::exists(workdir() / "sample" / "limit_set_L3.csv"));
}

TEST_CASE("input errors exit with 1") {
    fixtures();
    CHECK(run("gap --rep missing.json").code == anosov::kExitError);
    CHECK(run("gap --rep broken.json").code == anosov::kExitError);
    CHECK(run("double --rep schottky2.json --subgroup h.json --L 3 --seed xyz").code == anosov::kExitError);
    CHECK(run("double --rep schottky2.json --subgroup h.json --L 3 --eps 0,1").code == anosov::kExitError);
    write("h2.json", R"({"generators":["a","b"]})");
    CHECK(run("double --rep schottky2.json --subgroup h2.json").code == anosov::kExitError);
    write("hc.json", R"({"generators":["c"]})");
    CHECK(run("double --rep schottky2.json --subgroup hc.json").code == anosov::kExitError);
}

TEST_CASE("sabotage fixtures are not certified") {
    fixtures();
    CHECK(run("certify-amalgam --rep schottky2.json --rep2 schottky2.json --subgroup h.json --L 4").code ==
          anosov::kExitNotCertified);
    CHECK(run("certify-hnn --rep schottky2.json --subgroup h.json --p-max 1").code == anosov::kExitNotCertified);
    CHECK(run("hnn --rep schottky2.json --subgroup h.json --p-max 1").code == anosov::kExitNotCertified);
    CHECK(run("double --rep rotation.json --subgroup h.json").code == anosov::kExitNotCertified);
}

TEST_CASE("double is deterministic and records the seed") {
    fixtures();
    Result a = run("double --rep schottky2.json --subgroup h.json --L 4 --replay 500 --seed 1F --out d1");
    Result b = run("double --rep schottky2.json --subgroup h.json --L 4 --replay 500 --seed 1F --out d2");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const std::string c1 = slurp(workdir() / "d1" / "certificate_amalgam.json");
    CHECK_FALSE(c1.empty());
    CHECK(c1 == slurp(workdir() / "d2" / "certificate_amalgam.json"));
    CHECK(c1.find("\"seed\": \"0x1F\"") != std::string::npos);
    CHECK(fs::exists(workdir() / "d1" / "paired.json"));
    CHECK(fs::exists(workdir() / "d1" / "rep2.json"));
    Result d = run("double --rep schottky2.json --subgroup h.json --L 4 --replay 0");
    CHECK(d.out.find("seed=0xA905") != std::string::npos);
}

TEST_CASE("certify-amalgam with an explicit second factor") {
    fixtures();
    REQUIRE(run("double --rep schottky2.json --subgroup h.json --L 3 --replay 0 --out pair").code == 0);
    Result r = run("certify-amalgam --rep schottky2.json --rep2 pair/rep2.json --subgroup h.json --L 4 --eps 2^-3:2^-8");
    CHECK(r.code == 0);
    CHECK(r.out.find("overall: PASS") != std::string::npos);
}

TEST_CASE("hnn and certify-hnn") {
    fixtures();
    Result h = run("hnn --rep schottky2.json --subgroup h.json --out hnn");
    CHECK(h.code == 0);
    const std::string rep = slurp(workdir() / "hnn" / "hnn_rep.json");
    CHECK(rep.find("\"label\": \"t\"") != std::string::npos);
    CHECK(rep.find("\"gamma\": \"b\"") != std::string::npos);
    Result c = run("certify-hnn --rep schottky2.json --subgroup h.json --L 4 --delta 2^-8 --theta 2^-3 --replay 1000");
    CHECK(c.code == 0);
    CHECK(c.out.find("replay: 0 violations") != std::string::npos);
}

TEST_CASE("in-process entry point matches the binary") {
    const char* argv[] = {"anosov-cli", "dims", "--tag", "double_2d", "--d", "5"};
    std::ostringstream out, err;
    CHECK(anosov::run_cli(6, argv, out, err) == 0);
    CHECK(out.str() == "10\n");
}
