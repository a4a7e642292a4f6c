// Runs the ksmooth executable and checks exit codes and output.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string &args) {
  const std::string cmd = std::string(KSMOOTH_CLI) + " " + args + " 2>&1";
  Result r;
  FILE *p = popen(cmd.c_str(), "r");
  if (!p)
    return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p))
    r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string &name) { return std::string(KSMOOTH_DATA) + "/" + name; }

bool has(const Result &r, const std::string &s) { return r.out.find(s) != std::string::npos; }

TEST(Cli, Point) {
  auto r = run("point --space linf3 --x 1,1,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "k = 2")) << r.out;
  r = run("point --space l1:3 --x 1/3,1/3,1/3");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "k = 1")) << r.out;
  r = run("point --space linf3 --x 1,1,2");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has(r, "not unit norm")) << r.out;
  r = run("point --space " + data("hexagon.json") + " --x 1,1 --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "\"order\": 2")) << r.out;
  EXPECT_EQ(run("point --space linf3 --x 1,a,0").code, 2);
  EXPECT_EQ(run("point --space nowhere --x 1,0").code, 2);
}

TEST(Cli, Operator) {
  auto r = run("operator --file " + data("identity_third.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "order k = 4")) << r.out;
  EXPECT_TRUE(has(r, "operator-space oracle: 4")) << r.out;
  r = run("operator --file " + data("projection_linf2.json") + " --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "\"order\": 6")) << r.out;
  EXPECT_EQ(run("operator --file /nonexistent.json").code, 2);
}

TEST(Cli, Classify) {
  auto r = run("classify --file " + data("rank_one_third.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "predicted k = 3")) << r.out;
  r = run("classify --file " + data("antipodal_support_l12.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(has(r, "diagnosis")) << r.out;
  EXPECT_EQ(run("classify --file " + data("identity_third.json") +
                " --quantifier-reading maybe")
                .code,
            2);
}

TEST(Cli, Verify) {
  auto r = run("verify --suite face-theorem --space linf3 --samples 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "0 failures")) << r.out;
  r = run("verify --suite cross-validate --codomain l1:3 --count 20 --seed 2 --markdown");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "verified")) << r.out;
  r = run("verify --suite polar-involution --space hexagon --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "\"pass\": true")) << r.out;
  EXPECT_EQ(run("verify --suite nonsense").code, 2);
  EXPECT_EQ(run("verify --suite face-theorem --samples 0").code, 2);
}

TEST(Cli, ReportsAreByteIdentical) {
  const std::string args =
      "verify --suite cross-validate --domain linf3 --codomain hexagon --count 12 --seed 6 --json";
  const auto a = run(args), b = run(args + " --workers 3");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("faces --space linf3 --json").out, run("faces --space linf3 --json").out);
}

TEST(Cli, PolarAndFaces) {
  auto r = run("polar --space linf3");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "vertices (6)")) << r.out;
  r = run("faces --space linf2");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "8 faces")) << r.out;
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("point --json --markdown --x 1,1,1").code, 2);
}

} // namespace
