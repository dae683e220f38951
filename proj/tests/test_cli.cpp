#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(SOSH_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch() {
    auto dir = fs::temp_directory_path() / "sosh_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    auto p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* kMotzkin =
    R"({"nvars":2,"terms":[{"exp":[0,0],"num":"1","den":"1"},{"exp":[2,2],"num":"-3","den":"1"},)"
    R"({"exp":[2,4],"num":"1","den":"1"},{"exp":[4,2],"num":"1","den":"1"}]})";

}  // namespace

TEST_CASE("oddweights") {
    auto r = run("oddweights --ell 5");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["nodes"] == json({1, -2, 3}));
    CHECK(j["weights"] == json({"1/24", "1/30", "1/120"}));
    CHECK(j["summary"] == "eta=(1,-2,3) w=(1/24,1/30,1/120)");
    CHECK(j["parameters"]["ell"] == 5);
    CHECK(j.contains("version"));
    CHECK(run("oddweights --ell 4").code == 2);
}

TEST_CASE("coeffs") {
    auto r = run("coeffs --beta 1,2 --mode partitions");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["count"] == 4);
    auto has = [&](const json& p) {
        for (const auto& t : j["terms"])
            if (t == p) return true;
        return false;
    };
    CHECK(has(json::parse("[[1,2]]")));
    CHECK(has(json::parse("[[1,0],[0,2]]")));
    CHECK(has(json::parse("[[1,1],[0,1]]")));
    CHECK(has(json::parse("[[1,0],[0,1],[0,1]]")));
    CHECK(run("coeffs --beta 2 --mode leibniz").code == 0);
    CHECK(run("coeffs --beta 1,x --mode partitions").code == 2);
    CHECK(run("coeffs --beta 1 --mode nothing").code == 2);
}

TEST_CASE("generator and verify") {
    auto out = (scratch() / "p26.json").string();
    auto r = run("gen-nonsos --nvars 2 --degree 6 --out " + out);
    CHECK(r.code == 0);
    auto cert = (scratch() / "p26.cert.json").string();
    CHECK(fs::exists(cert));
    CHECK(run("verify --in " + out + " --cert " + cert).code == 0);
    CHECK(run("verify --in " + out).code == 0);
    CHECK(run("gen-nonsos --nvars 2 --degree 4").code == 1);
    CHECK(run("gen-nonsos --nvars 3 --degree 4").code == 0);
    auto z = run("gen-nonsos --nvars 2 --degree 6 --single-zero");
    CHECK(z.code == 0);
    CHECK(json::parse(z.out)["instance"]["c"] == "1");
    CHECK(run("gen-nonsos --nvars 1 --degree 6").code == 2);
    CHECK(run("gen-nonsos --nvars 2 --degree 7").code == 2);
}

TEST_CASE("verify exit codes") {
    CHECK(run("verify --in " + write("motzkin.json", kMotzkin)).code == 0);
    auto sq = write("square.json",
                    R"({"nvars":1,"terms":[{"exp":[0],"num":"1","den":"1"},{"exp":[1],"num":"-2","den":"1"},)"
                    R"({"exp":[2],"num":"1","den":"1"}]})");
    CHECK(run("verify --in " + sq).code == 1);
    CHECK(run("verify --in " + write("zero.json", R"({"nvars":1,"terms":[{"exp":[0],"num":"1","den":"0"}]})")).code ==
          2);
    CHECK(run("verify --in " + write("broken.json", "{\"nvars\":")).code == 2);
    CHECK(run("verify --in " + (scratch() / "missing.json").string()).code == 2);
}

TEST_CASE("table") {
    auto one = run("table --reproduce --rows 2x6");
    CHECK(one.code == 0);
    auto j = json::parse(one.out);
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0]["printed"] == "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1");
    CHECK(j["rows"][0]["status"] == "pass");
    auto all = run("table --reproduce");
    CHECK(all.code == 0);
    auto t = json::parse(all.out);
    CHECK(t["counts"]["fail"] == 0);
    CHECK(t["rows"].size() == t["counts"]["total"]);
    CHECK(run("table --reproduce --rows 9x9").code == 2);
}

TEST_CASE("decompose and partial") {
    auto out = (scratch() / "dec.json").string();
    auto r = run("decompose --fixture square --k 2 --alpha 1 --out " + out);
    CHECK(r.code == 0);
    auto rep = json::parse(r.out);
    CHECK(rep["parameters"]["k"] == 2);
    CHECK(rep["decomposition"]["report"]["error"].get<double>() <= 1e-10);
    auto file = json::parse(slurp(out));
    CHECK(file["squares"].size() == file["report"]["squares"]);
    CHECK(file["grid"]["shape"][0] == 4001);
    auto fin = write("square_grid.json",
                     R"({"n":1,"origin":[-1],"spacing":0.01,"shape":[201],"values":[)" + [] {
                         std::string v;
                         for (int i = 0; i <= 200; ++i) {
                             double x = -1 + 0.01 * i;
                             v += (i ? "," : "") + std::to_string(x * x);
                         }
                         return v;
                     }() + "]}");
    CHECK(run("decompose --in " + fin + " --k 3 --alpha 1").code == 0);
    CHECK(run("decompose --fixture square --k 4 --alpha 1").code == 2);
    CHECK(run("decompose --fixture nope --k 2 --alpha 1").code == 2);
    CHECK(run("decompose --fixture bony --k 2 --alpha 1 --nu 0.5").code == 1);
    auto p = run("partial --fixture bony --k 2 --alpha 1 --eps 1e-4");
    CHECK(p.code == 0);
    auto pj = json::parse(p.out);
    CHECK(pj["residual_range"][1].get<double>() <= 1e-4);
    CHECK(pj["residual_range"][0].get<double>() >= 0);
}

TEST_CASE("check") {
    CHECK(run("check --kind malgrange --fixture bony --alpha 1").code == 0);
    CHECK(run("check --kind malgrange --fixture bony --alpha 0.5").code == 0);
    auto s = run("check --kind seminorm --fixture power --param 0.5 --alpha 0.5");
    CHECK(s.code == 0);
    CHECK(json::parse(s.out)["estimate"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
    CHECK(run("check --kind induc --fixture square --k 4 --eta 0.5").code == 1);
    CHECK(run("check --kind derivative --fixture square --k 2 --ell 1 --refine --count 2001").code == 0);
    CHECK(run("check --kind slowvar --fixture constant --k 2 --nu 10").code == 0);
    CHECK(run("check --kind nothing --fixture bony").code == 2);
    CHECK(run("check --kind malgrange --fixture power --param 1 --domain -1 1 --alpha 1 --slack 0.05").code == 0);
}

TEST_CASE("argument errors") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("decompose --k 2").code == 2);
    CHECK(run("--version").code == 0);
}

TEST_CASE("idempotent output") {
    auto a = (scratch() / "idem_a.json").string(), b = (scratch() / "idem_b.json").string();
    auto ra = run("decompose --fixture bony --k 2 --alpha 1 --out " + a);
    auto rb = run("decompose --fixture bony --k 2 --alpha 1 --out " + b);
    CHECK(ra.code == rb.code);
    CHECK(slurp(a) == slurp(b));
    // reports echo the output path, so compare with it removed
    auto ja = json::parse(ra.out), jb = json::parse(rb.out);
    ja["parameters"].erase("out");
    jb["parameters"].erase("out");
    CHECK(ja == jb);
    CHECK(run("table --reproduce --rows 3x4").out == run("table --reproduce --rows 3x4").out);
    CHECK(run("gen-nonsos --nvars 3 --degree 6 --seed 9").out == run("gen-nonsos --nvars 3 --degree 6 --seed 9").out);
}
