#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "nearunit/error.hpp"
#include "nearunit/report.hpp"

using namespace nearunit;

TEST_CASE("table rows, columns and csv") {
    Table t({"a", "b"});
    t.add_row({1.0, 0.1});
    t.add_row({2.5, -3.0});
    CHECK(t.rows() == 2);
    CHECK(t.column("b") == std::vector<double>{0.1, -3.0});
    CHECK(t.to_csv() == "a,b\n1,0.10000000000000001\n2.5,-3\n");
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidInput);
    CHECK_THROWS_AS((void)t.column("c"), InvalidInput);
    CHECK(Table().rows() == 0);
}

TEST_CASE("non-finite numbers become null") {
    CHECK(num(NAN).is_null());
    CHECK(num(INFINITY).is_null());
    CHECK(num(2.0) == 2.0);
    CHECK(to_json(Mat2{1, 2, 2, NAN})[1][1].is_null());
}

TEST_CASE("column statistics") {
    const std::vector<double> one = {3.0};
    const json a = column_stats(one);
    CHECK(a["mean"] == 3.0);
    CHECK(a["var"].is_null());
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    const json b = column_stats(x);
    CHECK(b["var"].get<double>() == doctest::Approx(5.0 / 3.0));
    CHECK(b["se_mean"].get<double>() == doctest::Approx(std::sqrt(5.0 / 12.0)));
    CHECK(column_stats(std::vector<double>{})["mean"].is_null());
}

TEST_CASE("histogram counts every observation") {
    std::vector<double> x;
    for (int i = 0; i < 100; ++i) x.push_back(i * 0.37);
    const Table h = histogram_table(x, 7);
    double total = 0.0;
    for (double c : h.column("count")) total += c;
    CHECK(total == 100.0);
    CHECK(h.at(0, 1) == doctest::Approx(h.at(1, 0)));
}

TEST_CASE("write_report writes the summary and one csv per table") {
    const auto dir = std::filesystem::temp_directory_path() / "nearunit_report_test";
    std::filesystem::remove_all(dir);
    StudyReport r;
    r.study = "demo";
    r.summary = {{"study", "demo"}, {"value", 1.5}};
    Table t({"x"});
    t.add_row({4.0});
    r.tables["draws"] = t;
    const auto paths = write_report(r, dir.string());
    REQUIRE(paths.size() == 2);
    std::ifstream in(dir / "demo_draws.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "x\n4\n");
    std::ifstream js(dir / "demo.json");
    CHECK(json::parse(js)["value"] == 1.5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("limit tables convert to report tables") {
    LimitTable lt;
    lt.labels = {"alpha_limit", "mu_limit"};
    lt.samples = {1, 2, 3, 4, 5, 6};
    const Table t = to_table(lt);
    CHECK(t.rows() == 3);
    CHECK(t.column("mu_limit") == std::vector<double>{2, 4, 6});
}
