#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cubepu/cli.hpp"
#include "cubepu/errors.hpp"

using namespace cubepu;
using namespace cubepu::cli;

namespace {

std::vector<std::string> words(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / ("cubepu_test_" + name);
    std::ofstream(path) << contents;
    return path;
}

PointFile parse(const std::string& text) {
    std::istringstream is(text);
    return read_points(is);
}

}  // namespace

TEST(ParseArgs, BenchMatchesTableGeometry) {
    const Options o = parse_args(words("bench --nodes halton:4913 --subdomains 512 --kernel g --shape 2.7 --function f1"));
    EXPECT_EQ(o.command, Command::bench);
    const ExperimentSpec spec = to_experiment_spec(o, 4913);
    EXPECT_EQ(spec.node_count, 4913u);
    EXPECT_EQ(spec.subdomain_count, 512u);
    EXPECT_EQ(spec.kernel.family, KernelFamily::gaussian);
    EXPECT_EQ(spec.kernel.shape, 2.7);
    EXPECT_EQ(spec.function, TestFunction::f1);
    EXPECT_EQ(spec.grid_side, 11u);
    EXPECT_EQ(spec.mode, SearchMode::cube);
}

TEST(ParseArgs, SweepRange) {
    const Options o = parse_args(words("sweep --shape-range 1:10:19 --kernel m4"));
    EXPECT_EQ(o.command, Command::sweep);
    ASSERT_TRUE(o.shape_range);
    const auto v = o.shape_range->values();
    ASSERT_EQ(v.size(), 19u);
    EXPECT_EQ(v.front(), 1.0);
    EXPECT_EQ(v.back(), 10.0);
    EXPECT_EQ(to_experiment_spec(o, 4913).subdomain_count, 512u);
}

TEST(ParseArgs, FitWithFileAndGridEval) {
    const Options o = parse_args(words("fit --nodes file:pts.csv --eval grid:11 --kernel w4 --shape 0.54 --no-cube"));
    EXPECT_EQ(o.command, Command::fit);
    EXPECT_TRUE(o.no_cube);
    const PointSource src = parse_point_source(o.eval);
    EXPECT_EQ(src.kind, PointSource::Kind::grid);
    EXPECT_EQ(resolve(src).points.size(), 1331u);
    EXPECT_EQ(parse_point_source(o.nodes).path, "pts.csv");
}

TEST(ParseArgs, UsageErrors) {
    EXPECT_THROW((void)parse_args(words("bench --kernel g --shape 1 --bogus")), UsageError);
    EXPECT_THROW((void)parse_args(words("bench --shape 1")), UsageError);           // missing --kernel
    EXPECT_THROW((void)parse_args(words("bench --kernel g")), UsageError);          // missing --shape
    EXPECT_THROW((void)parse_args(words("sweep --kernel g")), UsageError);          // missing range
    EXPECT_THROW((void)parse_args(words("sweep --kernel g --shape-range 1:10")), UsageError);
    EXPECT_THROW((void)parse_args(words("sweep --kernel g --shape-range 0:10:5")), UsageError);
    EXPECT_THROW((void)parse_args(words("bench --kernel imq --shape 1")), UsageError);
    EXPECT_THROW((void)parse_args(words("bench --kernel g --shape 1 --nodes sobol:10")), UsageError);
    EXPECT_THROW((void)parse_args(words("--kernel g --shape 1")), UsageError);  // no subcommand
    bool help = false;
    EXPECT_THROW((void)parse_args(words("--help"), &help), UsageError);
    EXPECT_TRUE(help);
}

TEST(DefaultSubdomains, FollowsNodeCountRule) {
    EXPECT_EQ(default_subdomains(4913), 512u);
    EXPECT_EQ(default_subdomains(35937), 4096u);
    EXPECT_EQ(default_subdomains(274625), 32768u);
    EXPECT_EQ(default_subdomains(1), 1u);
}

TEST(ReadPoints, Examples) {
    const auto one = parse("0.5 0.5 0.5 1.0\n");
    ASSERT_EQ(one.points.size(), 1u);
    EXPECT_TRUE(one.has_values);
    EXPECT_EQ(one.values[0], 1.0);

    const auto pos = parse("# comment\n0 0 0\n");
    ASSERT_EQ(pos.points.size(), 1u);
    EXPECT_FALSE(pos.has_values);

    const auto csv = parse("x,y,z,value\n0.1, 0.2, 0.3, 4\n\n0.4,0.5,0.6,7\n");
    ASSERT_EQ(csv.points.size(), 2u);
    EXPECT_EQ(csv.points[1], (Point3{0.4, 0.5, 0.6}));
}

TEST(ReadPoints, ErrorsCarryLineNumbers) {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            (void)parse(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("0.5 2.0 0.5\n"), 1u);
    EXPECT_EQ(line_of("0 0 0\n0.1 abc 0.2\n"), 2u);
    EXPECT_EQ(line_of("0 0 0\n# c\n0.1 0.1 0.1 5\n"), 3u);
    EXPECT_EQ(line_of("0 0\n"), 1u);
    EXPECT_THROW((void)read_points(std::string("/nonexistent/cubepu.csv")), ParseError);
}

TEST(WriteResults, CsvAndJsonSchemas) {
    ExperimentResult r;
    r.spec.m_max = 50;
    r.rmse = 1.0 / 3.0;
    r.q = 6;
    std::ostringstream csv;
    write_results(csv, {r}, Format::csv);
    std::istringstream lines(csv.str());
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_EQ(header, "n,d,q,kernel,shape,function,mmax,mode,rmse,max_err,fit_s,eval_s,total_s,warn_uncovered,"
                      "warn_illcond,warn_empty");
    EXPECT_NE(row.find("0.33333333333333331"), std::string::npos);
    EXPECT_EQ(row.substr(0, 15), "4913,512,6,g,2.");

    std::ostringstream js;
    write_results(js, {r}, Format::json);
    const auto j = nlohmann::json::parse(js.str());
    EXPECT_EQ(j.size(), 16u);
    EXPECT_EQ(j["q"], 6);
    EXPECT_EQ(j["mmax"], 50);
    EXPECT_EQ(j["rmse"].get<double>(), 1.0 / 3.0);
    EXPECT_EQ(j["mode"], "cube");
}

TEST(WriteValues, RowsAndRoundTrip) {
    std::ostringstream os;
    write_values(os, {{0.1, 0.2, 0.3}, {1, 1, 1}}, {1.5, -2.0}, Format::csv);
    const std::string text = os.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
    EXPECT_EQ(text.substr(0, 12), "x,y,z,value\n");

    // Property: 17-digit emission reproduces coordinates and values bit-exactly.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point3> pts(500);
    std::vector<double> vals(500);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i] = {u(rng), u(rng), u(rng)};
        vals[i] = std::ldexp(u(rng) - 0.5, static_cast<int>(rng() % 40) - 20);
    }
    std::ostringstream out;
    write_values(out, pts, vals, Format::csv);
    const auto back = parse(out.str());
    EXPECT_EQ(back.points, pts);
    EXPECT_EQ(back.values, vals);
}

TEST(Run, FitFromFileWritesValues) {
    const auto nodes = temp_file("nodes.txt", "0.2 0.2 0.2 1\n0.8 0.8 0.8 3\n0.5 0.5 0.5 2\n");
    const auto out = std::filesystem::temp_directory_path() / "cubepu_test_out.csv";
    std::ostringstream sout, serr;
    const int code = run(words("fit --nodes file:" + nodes.string() + " --eval grid:3 --kernel w4 --shape 0.54 "
                               "--subdomains 1 --out " + out.string()),
                         sout, serr);
    ASSERT_EQ(code, kOk) << serr.str();
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "x,y,z,value");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 27u);
}

TEST(Run, ExitCodes) {
    std::ostringstream o, e;
    EXPECT_EQ(run(words("bench --kernel g"), o, e), kUsage);
    const auto bad = temp_file("bad.txt", "0.5 2.0 0.5 1\n");
    EXPECT_EQ(run(words("fit --kernel g --shape 3 --nodes file:" + bad.string()), o, e), kInputError);
    EXPECT_NE(e.str().find("line 1"), std::string::npos);
    const auto dup = temp_file("dup.txt", "0.5 0.5 0.5 1\n0.5 0.5 0.5 2\n");
    EXPECT_EQ(run(words("fit --kernel w4 --shape 1 --subdomains 1 --nodes file:" + dup.string()), o, e),
              kNumericalFailure);
    EXPECT_EQ(run(words("bench --kernel g --shape 3 --nodes halton:10 --subdomains 4096"), o, e), kNumericalFailure);
    EXPECT_EQ(run(words("bench --kernel g --shape 3 --nodes halton:100 --out /nonexistent/dir/x.csv"), o, e),
              kInputError);
    std::ostringstream help;
    EXPECT_EQ(run(words("--help"), help, e), kOk);
    EXPECT_NE(help.str().find("--shape-range"), std::string::npos);
}

TEST(Run, SweepAndCompareSearch) {
    std::ostringstream o, e;
    ASSERT_EQ(run(words("sweep --kernel w4 --shape-range 0.5:1.5:3 --format json"), o, e), kOk) << e.str();
    const auto j = nlohmann::json::parse(o.str());
    EXPECT_EQ(j["curve"].size(), 3u);

    std::ostringstream o2, e2;
    ASSERT_EQ(run(words("compare-search --kernel m4 --shape 2.6 --nodes halton:4913"), o2, e2), kOk) << e2.str();
    EXPECT_NE(e2.str().find("identical results: yes"), std::string::npos);
    EXPECT_NE(e2.str().find("q=6"), std::string::npos);
}
