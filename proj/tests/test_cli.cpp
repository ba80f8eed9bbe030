#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sys/wait.h>

#include "orthext/dp.hpp"
#include "orthext/io.hpp"

using namespace orthext;

namespace {

const char* kBox = R"({
  "format_version": 1,
  "vertices": [
    {"id": 1, "x": 0, "y": 0}, {"id": 2, "x": 3, "y": 0}, {"id": 3, "x": 6, "y": 0},
    {"id": 4, "x": 6, "y": 2}, {"id": 5, "x": 6, "y": 4}, {"id": 6, "x": 3, "y": 4},
    {"id": 7, "x": 0, "y": 4}, {"id": 8, "x": 0, "y": 2}
  ],
  "edges": [
    {"u": 1, "v": 2}, {"u": 2, "v": 3}, {"u": 3, "v": 4}, {"u": 4, "v": 5},
    {"u": 5, "v": 6}, {"u": 6, "v": 7}, {"u": 7, "v": 8}, {"u": 8, "v": 1},
    {"u": 2, "v": 4, "missing": true}
  ]
})";

const char* kComplete = R"({
  "format_version": 1,
  "vertices": [{"id": 1, "x": 0, "y": 0}, {"id": 2, "x": 2, "y": 0}, {"id": 3, "x": 2, "y": 2}],
  "edges": [{"u": 1, "v": 2}, {"u": 2, "v": 3}]
})";

const char* kCrossing = R"({
  "format_version": 1,
  "vertices": [{"id": 1, "x": 0, "y": 1}, {"id": 2, "x": 2, "y": 1}, {"id": 3, "x": 1, "y": 0}, {"id": 4, "x": 1, "y": 2}],
  "edges": [{"u": 1, "v": 2}, {"u": 3, "v": 4}]
})";

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ORTHEXT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, SolveCompleteInstance) {
  auto r = run("solve " + temp_file("complete.json", kComplete));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json_of(r)["beta"], 0);
  EXPECT_EQ(json_of(r)["status"], "optimum");
}

TEST(Cli, SolveMatchesLibrary) {
  const auto path = temp_file("box.json", kBox);
  auto r = run("solve --grid-scale 5 " + path);
  ASSERT_EQ(r.code, 0) << r.out;
  DpOptions opt;
  opt.grid_scale = 5;
  const auto lib = solve_bmoe(parse_instance(kBox), opt);
  EXPECT_EQ(json_of(r)["beta"], lib.beta);
  EXPECT_EQ(json_of(r)["beta"], 1);
  EXPECT_TRUE(json_of(r).contains("stats"));
}

TEST(Cli, BudgetBelowOptimumExitsOne) {
  const auto path = temp_file("box.json", kBox);
  auto oracle = run("oracle " + path);
  ASSERT_EQ(oracle.code, 0) << oracle.out;
  EXPECT_EQ(json_of(oracle)["beta"], 1);
  auto r = run("solve --budget 0 " + path);
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_EQ(json_of(r)["status"], "no_extension");
}

TEST(Cli, ValidateCrossingExitsTwo) {
  auto r = run("validate " + temp_file("crossing.json", kCrossing));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json_of(r)["error"], "ValidationError");
  EXPECT_EQ(run("validate " + temp_file("complete.json", kComplete)).code, 0);
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("validate " + temp_file("broken.json", "{ not json")).code, 2);
  EXPECT_EQ(run("validate /nonexistent/file.json").code, 2);
  EXPECT_EQ(run("solve --bend-cap nope " + temp_file("complete.json", kComplete)).code, 2);
}

TEST(Cli, DeterministicOutput) {
  const auto path = temp_file("box.json", kBox);
  const auto a_svg = testing::TempDir() + "a.svg", b_svg = testing::TempDir() + "b.svg";
  auto a = run("solve --grid-scale 5 --seed 7 --render " + a_svg + " " + path);
  auto b = run("solve --grid-scale 5 --seed 7 --render " + b_svg + " " + path);
  EXPECT_EQ(a.out, b.out);
  const auto svg = slurp(a_svg);
  EXPECT_FALSE(svg.empty());
  EXPECT_EQ(svg, slurp(b_svg));
  EXPECT_NE(svg.find("id=\"solution\""), std::string::npos);
}

TEST(Cli, ReduceSectorsRender) {
  const auto path = temp_file("box.json", kBox);
  auto reduce = run("reduce " + path);
  ASSERT_EQ(reduce.code, 0);
  EXPECT_EQ(json_of(reduce)["branches"].size(), 2u);
  const auto dot = testing::TempDir() + "td.dot";
  auto sectors = run("sectors --branch 1 --dot " + dot + " " + path);
  ASSERT_EQ(sectors.code, 0) << sectors.out;
  EXPECT_GT(json_of(sectors)["sector_count"].get<int>(), 0);
  EXPECT_EQ(slurp(dot).rfind("graph", 0), 0u);
  auto render = run("render --layers drawing,sectors,subsectors,grid " + path);
  ASSERT_EQ(render.code, 0);
  EXPECT_NE(render.out.find("id=\"sectors\""), std::string::npos);
  EXPECT_EQ(run("render --layers bogus " + path).code, 2);
}
