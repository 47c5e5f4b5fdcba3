// test_cli.cpp: command-line surface driven in-process.
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <qrabi/cli.hpp>

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = qrabi::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> ls;
    std::istringstream in(s);
    std::string l;
    while (std::getline(in, l)) ls.push_back(l);
    return ls;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits cleanly") {
    const auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("spectrum") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({"nonsense"}).code == 2);
    CHECK(run_cli({"hc", "--alpha", "1"}).code == 2);  // missing required params
    CHECK(run_cli({"oracle", "--format", "yaml"}).code == 2);
}

TEST_CASE("domain errors exit with 3") {
    const auto r = run_cli({"hc", "--alpha", "2.56", "--beta", "-2.14", "--gamma",
                            "-1.14", "--delta", "-1.28", "--eta", "-0.2294",
                            "--xmin", "1.5", "--xmax", "1.5"});
    CHECK(r.code == 3);
    CHECK(r.err.find("domain") != std::string::npos);
    CHECK(run_cli({"conditions", "--z", "0.9"}).code == 3);
}

TEST_CASE("convergence failures exit with 4") {
    CHECK(run_cli({"oracle", "--delta", "0.7", "--g", "2.5", "--nmax", "2"}).code == 4);
}

TEST_CASE("csv starts with a header row and honors --no-header") {
    const auto with_ts = run_cli({"oracle", "--nmax", "40"});
    REQUIRE(with_ts.code == 0);
    const auto ls = lines_of(with_ts.out);
    CHECK(ls[0].rfind("# generated ", 0) == 0);
    CHECK(ls[1] == "index,energy,parity,parity_expect,converged");

    const auto bare = run_cli({"oracle", "--nmax", "40", "--no-header"});
    CHECK(lines_of(bare.out)[0] == "index,energy,parity,parity_expect,converged");
}

TEST_CASE("output is deterministic modulo the timestamp") {
    const auto a = run_cli({"spectrum", "--emin", "-1", "--emax", "1", "--no-header"});
    const auto b = run_cli({"spectrum", "--emin", "-1", "--emax", "1", "--no-header"});
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("numbers carry fifteen significant digits") {
    CHECK(qrabi::cli::fmt15(0.1) == "0.1");
    CHECK(qrabi::cli::fmt15(-0.666283825675838) == "-0.666283825675838");
    CHECK(qrabi::cli::fmt15(1.0 / 3.0) == "0.333333333333333");
}

TEST_CASE("series evaluation on a grid, frozen value") {
    const auto r = run_cli({"hc", "--alpha", "2.56", "--beta", "-2.14", "--gamma",
                            "-1.14", "--delta", "-1.28", "--eta", "-0.2294",
                            "--xmin", "0.25", "--xmax", "0.25", "--xstep", "1",
                            "--no-header"});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "x,value,derivative,n_terms");
    double x, v, d;
    int n;
    REQUIRE(std::sscanf(ls[1].c_str(), "%lf,%lf,%lf,%d", &x, &v, &d, &n) == 4);
    CHECK(v == doctest::Approx(0.9279128834989954).epsilon(1e-11));
}

TEST_CASE("json output carries command, params, rows, and extras") {
    const auto r = run_cli({"spectrum", "--emin", "-1", "--emax", "1", "--format",
                            "json", "--no-header"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["command"] == "spectrum");
    CHECK(!j.contains("generated"));
    CHECK(j["params"]["delta"] == 0.7);
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0]["source"].is_string());
    CHECK(j["rows"][0]["parity"] == "plus");
    CHECK(j.contains("discarded"));
    CHECK(j.contains("skipped_windows"));
    const auto with_ts =
        run_cli({"spectrum", "--emin", "-1", "--emax", "1", "--format", "json"});
    CHECK(json::parse(with_ts.out).contains("generated"));
}

TEST_CASE("pole rows are marked skipped with empty cells") {
    // baseline at 0.36 for g = 0.8 lies on the grid
    const auto r = run_cli({"conditions", "--emin", "0.355", "--emax", "0.365",
                            "--estep", "0.005", "--z", "0.1", "--no-header"});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 4);
    bool found = false;
    for (const auto& l : ls)
        if (l.rfind("0.1,0.36,", 0) == 0) {
            found = true;
            CHECK(l.find(",,,,,,,,,,1,") != std::string::npos);
        }
    CHECK(found);
}

TEST_CASE("sign changes are annotated against the previous live row") {
    // the first plus-family condition has a zero near 0.0592, so one row in
    // this window must flag it in the trailing annotation column
    const auto r = run_cli({"conditions", "--emin", "0.05", "--emax", "0.07",
                            "--estep", "0.01", "--z", "0.1", "--no-header"});
    REQUIRE(r.code == 0);
    bool annotated = false;
    for (const auto& l : lines_of(r.out)) {
        const auto cut = l.find_last_of(',');
        if (cut != std::string::npos
            && l.substr(cut + 1).find("G1p") != std::string::npos)
            annotated = true;
    }
    CHECK(annotated);
}

TEST_CASE("wronskian grid marks pole rows") {
    const auto r = run_cli({"wronskian", "--emin", "0.35", "--emax", "0.37",
                            "--estep", "0.01", "--no-header"});
    REQUIRE(r.code == 0);
    bool skipped = false;
    for (const auto& l : lines_of(r.out))
        if (l.rfind("0,0.36,", 0) == 0) skipped = l.substr(7) == ",1";
    CHECK(skipped);
}

TEST_CASE("judd curve over a coupling range") {
    const auto r = run_cli({"judd", "--n1", "1", "--gmin", "0.4", "--gmax", "0.4",
                            "--no-header"});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 2);
    double g, E, dval;
    int n;
    REQUIRE(std::sscanf(ls[1].c_str(), "%lf,%lf,%d,%lf", &g, &E, &n, &dval) == 4);
    CHECK(E == doctest::Approx(0.84).epsilon(1e-12));
    CHECK(n == 1);
    CHECK(dval == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("compare pairs analytic and matrix spectra") {
    const auto r = run_cli({"compare", "--emin", "-1", "--emax", "1", "--format",
                            "json", "--no-header"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    REQUIRE(j["rows"].size() == 3);
    for (const auto& row : j["rows"]) {
        CHECK(row["abs_diff"].get<double>() < 1e-6);
        CHECK(row["overlap"].get<double>() > 0.999);
    }
}

TEST_CASE("--out writes the table to a file") {
    const std::string path = "cli_out_test.csv";
    const auto r = run_cli({"oracle", "--nmax", "40", "--no-header", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string first;
    std::getline(f, first);
    CHECK(first == "index,energy,parity,parity_expect,converged");
    f.close();
    std::remove(path.c_str());
}

}
