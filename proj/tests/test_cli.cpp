#include "freenormal/cli.hpp"
#include "freenormal/verify.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

using namespace freenormal;
using namespace freenormal::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "freenormal");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("complex parsing") {
    CHECK(parse_complex("1+2i") == Complex(1.0, 2.0));
    CHECK(parse_complex("1.5-0.25i") == Complex(1.5, -0.25));
    CHECK(parse_complex("-3") == Complex(-3.0, 0.0));
    CHECK(parse_complex("2i") == Complex(0.0, 2.0));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("1e-3-2e+2i") == Complex(1e-3, -2e2));
    CHECK(parse_complex(" 0 - 2 i ") == Complex(0.0, -2.0));
    CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex("1+2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
}

TEST_CASE("value formatting") {
    CHECK(format_value(ScaledComplex(Complex(1.0, -2.0))) == "1 - 2i");
    // The scale itself carries a rounding error of a few 1e-13 relative to the value.
    const std::string big = format_value(ScaledComplex(Complex(1.0, 0.5), 2000.0 * std::numbers::ln10));
    REQUIRE(big.size() > 8);
    CHECK(big.front() == '(');
    CHECK(big.ends_with("i)e+2000"));
    CHECK(std::stod(big.substr(1)) == doctest::Approx(1.0).epsilon(1e-11));
    const std::string tiny = format_value(ScaledReal{1.0, -1000.0 * std::numbers::ln10});
    CHECK(tiny.ends_with("e-1000"));
    CHECK(std::stod(tiny.substr(0, tiny.size() - 6)) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("eval") {
    const Result f0 = invoke({"eval", "--fn", "F", "--z", "0+0i"});
    CHECK(f0.code == 0);
    CHECK(f0.out == "0 + 0.797884560802865i\n");

    const Result g1 = invoke({"eval", "--fn", "G", "--z", "1+0i", "--format", "json"});
    REQUIRE(g1.code == 0);
    const auto j = nlohmann::json::parse(g1.out);
    const double im = j["mantissa"][1].get<double>() * std::exp(j["log_scale"].get<double>());
    CHECK(im == doctest::Approx(-std::sqrt(std::numbers::pi / 2.0) * std::exp(-0.5)).epsilon(1e-14));

    const Result f2 = invoke({"eval", "--fn", "F", "--z", "0-2i"});
    CHECK(f2.out.rfind("0 + ", 0) == 0);

    CHECK(invoke({"eval", "--fn", "rho", "--z", "-3"}).code == 0);
    CHECK(invoke({"eval", "--fn", "rho", "--z", "1+1i"}).code == 2);
    CHECK(invoke({"eval", "--fn", "H", "--z", "1"}).code == 2);
    CHECK(invoke({"eval", "--fn", "F", "--z", "oops"}).code == 2);
    CHECK(invoke({"eval", "--fn", "G", "--z", "0-40i"}).out.find(")e+") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"curve", "--n", "many"}).code == 2);
    CHECK(invoke({"curve", "--xmin", "2", "--xmax", "1"}).code == 2);
    CHECK(invoke({"curve", "--format", "png"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("curve") {
    const Result r = invoke({"curve"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 400);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] < rows[i - 1][2]);
    CHECK(std::abs(rows[0][1] * rows[0][2] - std::numbers::pi / 2.0) < 0.05);
    CHECK(invoke({"curve"}).out == r.out);

    const Result j = invoke({"curve", "--xmin", "1", "--xmax", "1.0000001", "--n", "2", "--format", "json"});
    REQUIRE(j.code == 0);
    CHECK(nlohmann::json::parse(j.out)["points"].size() == 2);

    const Result s = invoke({"curve", "--format", "svg", "--n", "50"});
    REQUIRE(s.code == 0);
    CHECK(s.out.find("<!-- freenormal curve - -format svg - -n 50 -->") != std::string::npos);
    CHECK(s.out.find("<desc>freenormal curve --format svg --n 50</desc>") != std::string::npos);
    CHECK(s.out.find("href") == std::string::npos);
    CHECK(s.out.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("density") {
    const Result r = invoke({"density", "--xmin", "0.1", "--xmax", "5", "--n", "30"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 30);
    for (const auto& row : rows) CHECK(row[1] > 0.0);
    CHECK(invoke({"density", "--format", "svg"}).out.find("</svg>") != std::string::npos);
}

TEST_CASE("levelsets write one file per level") {
    const auto dir = std::filesystem::temp_directory_path() / "freenormal_levelsets_test";
    std::filesystem::create_directories(dir);
    const std::string prefix = (dir / "trace").string();
    const Result r = invoke({"levelsets", "--t", "0,0.1,0.4,0.7,1,1.3", "--output", prefix});
    REQUIRE(r.code == 0);
    for (const char* t : {"0", "0.1", "0.4", "0.7", "1", "1.3"}) {
        const std::string path = prefix + "_t" + t + ".csv";
        CAPTURE(path);
        REQUIRE(std::filesystem::exists(path));
        std::ifstream f(path);
        std::string header;
        std::getline(f, header);
        CHECK(header == "t,branch,index,re,im");
        std::string first;
        CHECK(static_cast<bool>(std::getline(f, first)));
    }
    std::filesystem::remove_all(dir);
    CHECK(invoke({"levelsets", "--t", "0.5", "--bbox", "-3,3,-3,1", "--format", "svg"}).code == 0);
    CHECK(invoke({"levelsets", "--t", "-1"}).code == 2);
}

TEST_CASE("cumulants") {
    const Result r = invoke({"cumulants", "--order", "8", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["free"] == nlohmann::json({"1", "1", "4", "27"}));
    CHECK(j["h_infinity"][0] == "-5/2");
    CHECK(j["fractions"]["h_infinity"][1] == nlohmann::json({"-43", "8"}));
    CHECK(j["moments"] == nlohmann::json({"1", "1", "3", "15", "105"}));
    const Result csv = invoke({"cumulants", "--order", "4", "--format", "csv"});
    CHECK(csv.out == "index,moment,boolean,free,h_infinity,f_infinity\n0,1,,,,\n2,1,1,1,-5/2,-3\n4,3,2,1,-43/8,-6\n");
}

TEST_CASE("asymptotics") {
    const Result r = invoke({"asymptotics", "--regime", "zero"});
    REQUIRE(r.code == 0);
    bool seen = false;
    for (const auto& row : csv_rows(r.out))
        if (row[0] == 1e-6) {
            seen = true;
            CHECK(row[6] < 0.1);
        }
    CHECK(seen);
    CHECK(invoke({"asymptotics", "--regime", "infinity", "--format", "json"}).code == 0);
    CHECK(invoke({"asymptotics", "--regime", "middle"}).code == 2);
}

TEST_CASE("verify report schema") {
    const CriterionResult tau = run_criterion(10, Profile::Fast);
    CHECK(tau.name == "tau_mass_consistency");
    CHECK(tau.measured.contains("discrepancy"));
    const CriterionResult cross = run_criterion(5, Profile::Fast);
    CHECK(cross.name == "ode_newton_crosscheck");
    std::vector<double> xs;
    for (const auto& c : cross.measured["checks"]) xs.push_back(c["x_target"].get<double>());
    for (double x : {0.01, 0.1, 1.0, 3.0}) CHECK(std::find(xs.begin(), xs.end(), x) != xs.end());

    CHECK(parse_profile("fast") == Profile::Fast);
    CHECK(parse_profile("full") == Profile::Full);
    CHECK_FALSE(parse_profile("slow").has_value());
    CHECK(invoke({"verify", "--profile", "slow"}).code == 2);
    ::setenv("FREENORMAL_PROFILE", "bogus", 1);
    CHECK(invoke({"verify"}).code == 2);
    ::unsetenv("FREENORMAL_PROFILE");
}
