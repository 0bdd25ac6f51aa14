#include <doctest.h>

#include "app.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result
{
    int code = 0;
    std::string out;
    std::string err;
};

Result bsq_run(std::vector<std::string> args)
{
    args.insert(args.begin(), "bsq");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = bsq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("bsq_test_" + name);
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("spectrum of the oscillator")
    {
        const Result r = bsq_run({"spectrum", "--potential", "x^2", "--h", "0.05", "--window", "0.04", "1", "--order", "2",
                                  "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = json_of(r);
        REQUIRE(j["rows"].size() == 10);
        for (const auto& row : j["rows"]) {
            const int n = row["n"];
            CHECK(std::abs(row["E"].get<double>() - 0.05 * (2 * n + 1)) < 1e-10);
        }
        CHECK(j["config"]["potential"] == "x^2");
    }

    TEST_CASE("csv carries provenance and a header")
    {
        const Result r = bsq_run({"spectrum", "--potential", "x^2", "--h", "0.05", "--window", "0.04", "1"});
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("# bsq report\n", 0) == 0);
        CHECK(r.out.find("# potential = x^2\n") != std::string::npos);
        CHECK(r.out.find("\nn,E,h,order,residual,iterations\n") != std::string::npos);
    }

    TEST_CASE("malformed potential")
    {
        const Result r = bsq_run({"spectrum", "--potential", "x^", "--h", "0.05", "--window", "0.04", "1"});
        CHECK(r.code == 1);
        CHECK(r.err.find("x^\n") != std::string::npos);
        CHECK(r.err.find("    ^") != std::string::npos);
        CHECK(r.out.empty());
    }

    TEST_CASE("usage errors")
    {
        CHECK(bsq_run({"spectrum", "--potential", "x^2", "--window", "0.04", "1"}).code == 1);
        CHECK(bsq_run({"spectrum", "--potential", "x^2", "--h", "-1", "--window", "0.04", "1"}).code == 1);
        CHECK(bsq_run({"spectrum", "--potential", "x^2", "--h", "0.1", "--window", "1", "0.5"}).code == 1);
        CHECK(bsq_run({"spectrum", "--potential", "x^2", "--h", "0.1", "--window", "0.1", "1", "--order", "3"}).code == 1);
        CHECK(bsq_run({"compare", "--potential", "x^2", "--h", "0.1", "--window", "0.1", "1", "--grid-n", "8"}).code == 1);
        CHECK(bsq_run({"frobnicate"}).code == 1);
        CHECK(bsq_run({"spectrum", "--potential", "x^2", "--h", "0.1", "--window", "0.1", "1", "--format", "xml"}).code == 1);
    }

    TEST_CASE("geometry failures exit 2")
    {
        const Result r = bsq_run({"action", "--potential", "(x^2 - 1)^2", "--window", "0.2", "0.5", "--points", "3"});
        CHECK(r.code == 2);
        CHECK_FALSE(r.err.empty());
    }

    TEST_CASE("identical config gives identical bytes")
    {
        const std::vector<std::string> args{"compare", "--potential", "x^2 + 0.5*x^4", "--h", "0.1", "--window", "0.05",
                                            "1", "--grid-n", "2000", "--format", "json"};
        const Result a = bsq_run(args);
        const Result b = bsq_run(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }

    TEST_CASE("order 1 and 2 agree for the oscillator")
    {
        auto levels = [](const char* order) {
            return json_of(bsq_run({"spectrum", "--potential", "x^2", "--h", "0.05", "--window", "0.04", "1", "--order",
                                    order, "--format", "json"}))["rows"];
        };
        const auto a = levels("1");
        const auto b = levels("2");
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(std::abs(a[i]["E"].get<double>() - b[i]["E"].get<double>()) < 1e-12);
    }

    TEST_CASE("action of the oscillator")
    {
        const Result r =
            bsq_run({"action", "--potential", "x^2", "--window", "0.1", "2", "--points", "20", "--format", "json"});
        REQUIRE(r.code == 0);
        for (const auto& row : json_of(r)["rows"]) {
            CHECK(std::abs(row["S0"].get<double>() - std::numbers::pi * row["E"].get<double>()) < 1e-10);
            CHECK(row["S2"].get<double>() == 0.0);
        }
    }

    TEST_CASE("gram values and zeros")
    {
        const Result r = bsq_run({"gram", "--potential", "x^2 + 0.5*x^4", "--h", "0.05", "--window", "0.01", "1",
                                  "--points", "2000", "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = json_of(r);
        for (const auto& row : j["rows"]) {
            CHECK(row["D"].get<double>() <= 0.0);
            CHECK(row["D"].get<double>() >= -1.0);
        }
        const Result s = bsq_run({"spectrum", "--potential", "x^2 + 0.5*x^4", "--h", "0.05", "--window", "0.01", "1",
                                  "--format", "json"});
        const auto levels = json_of(s)["rows"];
        const auto zeros = j["summary"]["zeros"];
        REQUIRE(zeros.size() == levels.size());
        for (std::size_t i = 0; i < zeros.size(); ++i)
            CHECK(std::abs(zeros[i].get<double>() - levels[i]["E"].get<double>()) < 1e-9);
    }

    TEST_CASE("h sweep reports a fitted order")
    {
        const Result r = bsq_run({"compare", "--potential", "x^2 + 0.5*x^4", "--h-sweep", "0.2,0.1,0.05", "--window",
                                  "0.01", "0.6", "--grid-n", "4000", "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = json_of(r);
        CHECK(j["summary"]["fitted_order"].get<double>() >= 3.0);
    }

    TEST_CASE("wkb residual orders")
    {
        const Result r = bsq_run({"wkb-residual", "--potential", "x^2", "--energy", "1", "--h-sweep", "0.04,0.02,0.01",
                                  "--samples", "3", "--format", "json"});
        REQUIRE(r.code == 0);
        const auto orders = json_of(r)["summary"]["order"];
        REQUIRE(orders.size() == 3);
        for (const auto& o : orders) CHECK(o.get<double>() == doctest::Approx(2.0).epsilon(1e-3));
    }

    TEST_CASE("config file with flag override")
    {
        const auto path = temp_file("cfg.txt");
        {
            std::ofstream f(path);
            f << "# oscillator\npotential = x^2\nh = 0.1\nwindow = 0.05 1\nformat = json\n";
        }
        const Result a = bsq_run({"spectrum", "--config", path.string()});
        REQUIRE(a.code == 0);
        CHECK(json_of(a)["rows"].size() == 5);
        const Result b = bsq_run({"spectrum", "--config", path.string(), "--h", "0.05"});
        REQUIRE(b.code == 0);
        CHECK(json_of(b)["rows"].size() == 10);
        CHECK(json_of(b)["config"]["h"] == "0.050000000000000003");

        {
            std::ofstream f(path);
            f << "potential = x^2\nspeed = 3\n";
        }
        CHECK(bsq_run({"spectrum", "--config", path.string()}).code == 1);
        std::filesystem::remove(path);
    }

    TEST_CASE("output file")
    {
        const auto path = temp_file("out.csv");
        const Result r = bsq_run({"spectrum", "--potential", "x^2", "--h", "0.1", "--window", "0.05", "1", "--out",
                                  path.string()});
        REQUIRE(r.code == 0);
        CHECK(r.out.empty());
        std::ifstream f(path);
        std::stringstream ss;
        ss << f.rdbuf();
        CHECK(ss.str().find("n,E,") != std::string::npos);
        std::filesystem::remove(path);
    }
}
