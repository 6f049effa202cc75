#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunResult run(const std::string& args) {
    const std::string out_path = "/tmp/syncvar_cli_stdout.txt";
    const std::string err_path = "/tmp/syncvar_cli_stderr.txt";
    std::string cmd = std::string(SYNCVAR_TOOL_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::string map_path(const char* name) { return std::string(SYNCVAR_MAPS_DIR) + "/" + name; }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("validate accepts the shipped maps") {
    for (const char* name : {"tent.json", "doubling.json", "golden.json"}) {
        auto r = run("validate " + map_path(name));
        CHECK(r.code == 0);
        CHECK(r.out.find("expanding: yes") != std::string::npos);
        CHECK(r.out.find("markov: yes") != std::string::npos);
        CHECK(r.out.find("transitive: yes") != std::string::npos);
        CHECK(r.err.empty());
    }
}

TEST_CASE("validate rejects a map whose atom graph is not strongly connected") {
    std::string path = write_temp("syncvar_reducible.json", R"({
        "breakpoints": ["0", "1/3", "2/3", "1"],
        "images": [["0", "2/3"], ["2/3", "0"], ["0", "2/3"]]
    })");
    auto r = run("validate " + path);
    CHECK(r.code == 1);
    CHECK(r.err.find("strongly connected") != std::string::npos);
}

TEST_CASE("bad inputs exit with the validation code and a message") {
    auto missing = run("validate /tmp/syncvar_no_such_map.json");
    CHECK(missing.code == 1);
    CHECK(missing.err.find("error:") != std::string::npos);

    std::string broken = write_temp("syncvar_broken.json", "{not json");
    CHECK(run("validate " + broken).code == 1);

    std::string floats = write_temp("syncvar_floats.json",
                                    R"({"breakpoints": [0.0, 0.25, 1.0], "images": [["0","1"],["1","0"]]})");
    auto fr = run("validate " + floats);
    CHECK(fr.code == 1);
    CHECK(fr.err.find("exact rational") != std::string::npos);

    auto zero_gamma = run("graph " + map_path("tent.json") + " --gamma 0");
    CHECK(zero_gamma.code == 1);
    auto word_gamma = run("graph " + map_path("tent.json") + " --gamma abc");
    CHECK(word_gamma.code == 1);
    auto tiny_tol = run("graph " + map_path("tent.json") +
                        " --gamma 9/20 --tol 0.00000000000001");
    CHECK(tiny_tol.code == 1);
    CHECK(tiny_tol.err.find("--exact") != std::string::npos);
}

TEST_CASE("usage errors exit with the parser code") {
    CHECK(run("frobnicate " + map_path("tent.json")).code == 2);
    CHECK(run("graph " + map_path("tent.json")).code == 2);              // no --gamma
    CHECK(run("graph " + map_path("tent.json") + " --gamma 9/20 --points 1").code == 2);
    CHECK(run("scan " + map_path("tent.json")).code == 2);               // no grid
    CHECK(run("validate").code == 2);                                    // no map file
}

TEST_CASE("graph emits one sided row per sample point") {
    auto r = run("graph " + map_path("tent.json") + " --gamma 9/20 --points 5");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "x,side,phi,error_bound");
    const char* expected_x[] = {"0", "0.25", "0.25", "0.5", "0.75", "1"};
    const char* expected_side[] = {"R", "L", "R", "R", "R", "L"};
    for (int i = 0; i < 6; ++i) {
        auto fields = fields_of(lines[static_cast<size_t>(i + 1)]);
        REQUIRE(fields.size() == 4);
        CHECK(fields[0] == expected_x[i]);
        CHECK(fields[1] == expected_side[i]);
        CHECK(std::stod(fields[3]) <= 1e-9);
    }
    // phi(0) = 0 at the fixed endpoint.
    CHECK(fields_of(lines[1])[2] == "0");
}

TEST_CASE("graph output is byte-identical across runs") {
    std::string cmd = "graph " + map_path("tent.json") + " --gamma 9/20 --points 200";
    auto first = run(cmd);
    auto second = run(cmd);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);

    std::string rcmd = "regimes " + map_path("tent.json");
    auto r1 = run(rcmd);
    auto r2 = run(rcmd);
    REQUIRE(r1.code == 0);
    CHECK(r1.out == r2.out);
}

TEST_CASE("exact mode prints rationals") {
    auto r = run("graph " + map_path("tent.json") + " --gamma 9/20 --points 5 --exact");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[2].find("1/4") != std::string::npos);
    // Exact mode also answers below the double-precision floor.
    auto deep = run("graph " + map_path("tent.json") +
                    " --gamma 9/20 --points 3 --tol 0.00000000000001 --exact");
    CHECK(deep.code == 0);
}

TEST_CASE("regimes and exceptional reports are valid on every shipped map") {
    for (const char* name : {"tent.json", "doubling.json", "golden.json"}) {
        auto reg = run("regimes " + map_path(name));
        CHECK(reg.code == 0);
        CHECK(reg.out.find("\"gamma_lipschitz\"") != std::string::npos);
        CHECK(reg.out.find("\"entropy\"") != std::string::npos);
        auto exc = run("exceptional " + map_path(name));
        CHECK(exc.code == 0);
        CHECK(exc.out.find("\"witnesses\"") != std::string::npos);
    }
    // The tent root 3/16 sits below e^{-h_top} = 1/2, so it shows up in the
    // witness report but not among the supercritical candidates.
    auto tent_reg = run("regimes " + map_path("tent.json"));
    CHECK(tent_reg.out.find("\"exceptional_candidates\": []") != std::string::npos);
    auto tent_exc = run("exceptional " + map_path("tent.json") + " --exact");
    CHECK(tent_exc.out.find("\"3/16\"") != std::string::npos);
    CHECK(tent_exc.out.find("slope-mismatch") != std::string::npos);
    auto dbl_exc = run("exceptional " + map_path("doubling.json"));
    CHECK(dbl_exc.out.find("discontinuity") != std::string::npos);
}

TEST_CASE("variation defaults to a JSON report") {
    auto r = run("variation " + map_path("tent.json") + " --gamma 9/20 --depth 4");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"verdict\"") != std::string::npos);
    CHECK(r.out.find("\"bounded\"") != std::string::npos);
    CHECK(r.out.find("\"upper_bound\"") != std::string::npos);

    auto sup = run("variation " + map_path("tent.json") + " --gamma 3/4 --depth 4 --exact");
    REQUIRE(sup.code == 0);
    CHECK(sup.out.find("\"diverging\"") != std::string::npos);
    CHECK(sup.out.find("\"certificate\"") != std::string::npos);
    CHECK(sup.out.find("\"4/19\"") != std::string::npos);
}

TEST_CASE("variation csv prints the growth table only when one exists") {
    auto sup = run("variation " + map_path("tent.json") + " --gamma 3/4 --format csv");
    REQUIRE(sup.code == 0);
    auto lines = lines_of(sup.out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "n,cylinders,bound");
    auto first = fields_of(lines[1]);
    REQUIRE(first.size() == 3);
    CHECK(first[0] == "1");
    CHECK(first[1] == "4");

    auto sub = run("variation " + map_path("tent.json") + " --gamma 1/5 --format csv");
    CHECK(sub.code == 1);
    CHECK(sub.err.find("no divergence certificate") != std::string::npos);
}

TEST_CASE("scan walks the grid in exact steps") {
    auto r = run("scan " + map_path("tent.json") + " 0.2:0.3:0.05 --depth 3");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "gamma,regime,verdict,lower_bound,upper_bound");
    auto row1 = fields_of(lines[1]);
    auto row2 = fields_of(lines[2]);
    auto row3 = fields_of(lines[3]);
    CHECK(row1[0] == "0.2");
    CHECK(row1[1] == "lipschitz");
    CHECK(row2[0] == "0.25");
    CHECK(row2[1] == "bounded-variation");
    CHECK(row3[0] == "0.3");
    CHECK(row3[1] == "bounded-variation");
    for (const auto& row : {row1, row2, row3}) {
        REQUIRE(row.size() == 5);
        CHECK(row[2] == "bounded");
    }
}

TEST_CASE("scan rejects malformed grids") {
    CHECK(run("scan " + map_path("tent.json") + " 0.5:0.4:0.1").code == 1);
    CHECK(run("scan " + map_path("tent.json") + " 0:0.5:0.1").code == 1);
    CHECK(run("scan " + map_path("tent.json") + " 0.2:0.9:0").code == 1);
    CHECK(run("scan " + map_path("tent.json") + " abc").code == 1);
}

TEST_CASE("--out writes the file and keeps stdout quiet") {
    std::string out_file = "/tmp/syncvar_cli_outfile.csv";
    std::remove(out_file.c_str());
    std::string cmd = "graph " + map_path("tent.json") + " --gamma 9/20 --points 50";
    auto direct = run(cmd);
    auto filed = run(cmd + " --out " + out_file);
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(out_file) == direct.out);
}
