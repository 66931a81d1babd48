#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "ncg/ncg.hpp"

using namespace ncg;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NCG_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(NCG_SAMPLES) + "/" + name; }

}  // namespace

TEST(Io, FormatDouble) {
  EXPECT_EQ(io::detail::format_double(-0.0), io::detail::format_double(0.0));
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) EXPECT_EQ(std::stod(io::detail::format_double(v)), v);
}

TEST(Io, TripleRoundTrip) {
  for (const auto& t : {build_npoint(3, std::vector<Complex>{{1.0, 0.5}, {0.0, 0.0}, {2.0, -1.0}}), build_f_ed(Complex(0.3, 0.7)),
                        build_circle(CircleGrid::flat(8)).triple}) {
    const std::string text = io::dump(io::to_json(t));
    const auto back = io::triple_from(io::json::parse(text));
    EXPECT_EQ(back.algebra.block_dims(), t.algebra.block_dims());
    EXPECT_EQ(back.hilbert_dim, t.hilbert_dim);
    EXPECT_EQ(max_abs(SparseMatrix(back.dirac - t.dirac)), 0.0);
    for (int k = 0; k < t.rep.size(); ++k) EXPECT_EQ(max_abs(SparseMatrix(back.rep.image(k) - t.rep.image(k))), 0.0);
    EXPECT_EQ(back.grading.has_value(), t.grading.has_value());
    // dumping again is byte-identical
    EXPECT_EQ(io::dump(io::to_json(back)), text);
  }
}

TEST(Io, MalformedInput) {
  EXPECT_THROW(io::triple_from(io::json::parse(R"({"blocks": [1, 1]})")), io::FormatError);
  EXPECT_THROW(io::state_from_token("x3", FiniteAlgebra::commutative(2)), std::exception);
  EXPECT_THROW(io::state_from_token("e5", FiniteAlgebra::commutative(2)), std::exception);
  const State s = io::state_from_token("v1:0", FiniteAlgebra({1, 2}));
  EXPECT_EQ(s.terms[0].second.kind, PureState::Kind::vector);
}

TEST(Cli, DistanceOnSample) {
  const auto r = run("distance " + sample("f2.json") + " e0 e1");
  ASSERT_EQ(r.code, 0);
  const auto j = io::json::parse(r.out);
  EXPECT_NEAR(j.at("value").get<double>(), 1.0, 1e-6);
  const auto inf = run("distance " + sample("f2.json") + " e0 e0");
  EXPECT_NEAR(io::json::parse(inf.out).at("value").get<double>(), 0.0, 1e-12);
}

TEST(Cli, BuildThenDistance) {
  const std::string path = ::testing::TempDir() + "ncg_f2x2.json";
  ASSERT_EQ(run("build npoint --n 2 --x 2 --out " + path).code, 0);
  const auto r = run("distance " + path + " e0 e1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(io::json::parse(r.out).at("value").get<double>(), 0.5, 1e-6);
  ASSERT_EQ(run("build npoint --n 2 --x 0 --out " + path).code, 0);
  EXPECT_EQ(io::json::parse(run("distance " + path + " e0 e1").out).at("value"), "inf");
}

TEST(Cli, ClassifyExitCodes) {
  EXPECT_EQ(run("classify " + sample("f3_to_f2.json")).code, 0);
  EXPECT_EQ(run("classify " + sample("f3_to_f2_corrupted.json")).code, 1);
  EXPECT_EQ(run("classify " + sample("f4_to_f3.json") + " --require riemannian,totally_geodesic").code, 0);
  EXPECT_EQ(run("classify " + sample("does_not_exist.json")).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("verify").code, 2);
  EXPECT_EQ(run("verify ''").code, 2);
  EXPECT_EQ(run("verify no-such-suite").code, 2);
  EXPECT_EQ(run("distance " + sample("f2.json") + " e0 q1").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, VerifyIsDeterministic) {
  const auto a = run("verify paper-examples --seed 5");
  const auto b = run("verify paper-examples --seed 5");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}
