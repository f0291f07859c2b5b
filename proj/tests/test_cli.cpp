#include "doctest.h"

#include "lgpc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string output;
};

// Runs the CLI with stderr folded into the captured output.
Run run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + LGPCOUNT_EXE + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) { return lgpc::read_file(p.string()); }

void spit(const fs::path& p, const std::string& text) { lgpc::write_file(p.string(), text); }

struct Workdir {
  fs::path root;
  Workdir() {
    std::random_device rd;
    root = fs::temp_directory_path() / ("lgpc_cli_" + std::to_string(rd()));
    fs::create_directories(root);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
  std::string operator()(const std::string& name) const { return (root / name).string(); }
};

// Splits sample60 into a 50-row training file and a 10-row future file.
void split_sample(const Workdir& wd) {
  std::istringstream in(slurp(fs::path(LGPC_DATA_DIR) / "sample60.csv"));
  std::string header, line, train, future;
  std::getline(in, header);
  train = future = header + "\n";
  for (int row = 0; std::getline(in, line); ++row) (row < 50 ? train : future) += line + "\n";
  spit(wd("train.csv"), train);
  spit(wd("future.csv"), future);
}

std::size_t count_rows(const std::string& table) {
  std::string body;
  (void)lgpc::read_manifest(table, &body);
  std::istringstream in(body);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n - 1;  // header
}

const std::string kFast = " --samples 60 --chains 3 ";

}  // namespace

TEST_CASE("help and version") {
  auto r = run_cli("--help");
  CHECK(r.status == 0);
  CHECK(r.output.find("forecast") != std::string::npos);
  r = run_cli("--version");
  CHECK(r.status == 0);
  CHECK(r.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("usage errors exit 2 with a json diagnostic") {
  auto r = run_cli("fit");
  CHECK(r.status == 2);
  CHECK(r.output.find("\"kind\":\"Usage\"") != std::string::npos);
  r = run_cli("cv --data x.csv --phi-grid 0.1,abc");
  CHECK(r.status == 2);
  r = run_cli("frobnicate");
  CHECK(r.status == 2);
}

TEST_CASE("error classes map to exit codes") {
  Workdir wd;
  auto r = run_cli("fit --data " + wd("missing.csv") + " --draws-out " + wd("d.csv") +
                   " --metrics-out " + wd("m.csv"));
  CHECK(r.status == 4);
  CHECK(r.output.find("\"kind\":\"IoError\"") != std::string::npos);

  spit(wd("bad.csv"), "time,y\n1,2\n2,3.5\n3,1\n");
  r = run_cli("fit --data " + wd("bad.csv") + " --draws-out " + wd("d.csv") + " --metrics-out " +
              wd("m.csv"));
  CHECK(r.status == 2);
  CHECK(r.output.find("column 'y'") != std::string::npos);

  spit(wd("nocount.csv"), "time,x\n1,2\n2,3\n");
  r = run_cli("fit --data " + wd("nocount.csv"));
  CHECK(r.status == 2);
  CHECK(r.output.find("Schema") != std::string::npos);

  r = run_cli("fit --data " + std::string(LGPC_DATA_DIR) + "/sample60.csv --thin 3");
  CHECK(r.status == 2);

  spit(wd("cfg.json"), R"({"phi": 0.5, "unknown_key": 1})");
  r = run_cli("fit --data " + std::string(LGPC_DATA_DIR) + "/sample60.csv --config " +
              wd("cfg.json"));
  CHECK(r.status == 2);
  CHECK(r.output.find("unknown_key") != std::string::npos);
}

TEST_CASE("fit is byte-for-byte reproducible") {
  Workdir wd;
  split_sample(wd);
  const std::string common = "fit --data " + wd("train.csv") + kFast + "--seed 99";
  auto a = run_cli(common + " --draws-out " + wd("d1.csv") + " --metrics-out " + wd("m1.csv"));
  REQUIRE(a.status == 0);
  auto b = run_cli(common + " --draws-out " + wd("d2.csv") + " --metrics-out " + wd("m2.csv"));
  REQUIRE(b.status == 0);
  CHECK(slurp(wd("d1.csv")) == slurp(wd("d2.csv")));
  CHECK(slurp(wd("m1.csv")) == slurp(wd("m2.csv")));

  const auto m1 = lgpc::read_manifest(slurp(wd("m1.csv")));
  CHECK(m1.command == "fit");
  CHECK(m1.seed == 99);
  CHECK(m1.input_digest == lgpc::content_digest(slurp(wd("train.csv"))));
  CHECK(!m1.timings.has_value());
  CHECK(count_rows(slurp(wd("d1.csv"))) == 60);
  CHECK(slurp(wd("m1.csv")).find("beta_hat_x1") != std::string::npos);

  // The thread count is recorded in the manifest but does not move any draw.
  auto c = run_cli(common + " --threads 1 --draws-out " + wd("d3.csv") + " --metrics-out " +
                   wd("m3.csv"));
  REQUIRE(c.status == 0);
  std::string body1, body3;
  (void)lgpc::read_manifest(slurp(wd("d1.csv")), &body1);
  (void)lgpc::read_manifest(slurp(wd("d3.csv")), &body3);
  CHECK(body1 == body3);

  auto d = run_cli("fit --data " + wd("train.csv") + kFast + "--seed 100 --draws-out " +
                   wd("d4.csv") + " --metrics-out " + wd("m4.csv"));
  REQUIRE(d.status == 0);
  std::string body4;
  (void)lgpc::read_manifest(slurp(wd("d4.csv")), &body4);
  CHECK(body1 != body4);

  auto e = run_cli(common + " --timings --draws-out " + wd("d5.csv") + " --metrics-out " +
                   wd("m5.csv"));
  REQUIRE(e.status == 0);
  CHECK(lgpc::read_manifest(slurp(wd("m5.csv"))).timings.has_value());
}

TEST_CASE("forecast from saved draws matches an in-process fit") {
  Workdir wd;
  split_sample(wd);
  REQUIRE(run_cli("fit --data " + wd("train.csv") + kFast + "--draws-out " + wd("d.csv") +
                  " --metrics-out " + wd("m.csv"))
              .status == 0);
  auto a = run_cli("forecast --data " + wd("train.csv") + kFast + "--draws " + wd("d.csv") +
                   " --future " + wd("future.csv") + " --out " + wd("f1.csv") + " --pmf-out " +
                   wd("p1.csv"));
  REQUIRE(a.status == 0);
  auto b = run_cli("forecast --data " + wd("train.csv") + kFast + "--future " +
                   wd("future.csv") + " --out " + wd("f2.csv") + " --pmf-out " + wd("p2.csv"));
  REQUIRE(b.status == 0);
  std::string f1, f2, p1, p2;
  (void)lgpc::read_manifest(slurp(wd("f1.csv")), &f1);
  (void)lgpc::read_manifest(slurp(wd("f2.csv")), &f2);
  (void)lgpc::read_manifest(slurp(wd("p1.csv")), &p1);
  (void)lgpc::read_manifest(slurp(wd("p2.csv")), &p2);
  CHECK(f1 == f2);
  CHECK(p1 == p2);
  CHECK(count_rows(slurp(wd("f1.csv"))) == 10);

  auto h = run_cli("forecast --data " + wd("train.csv") + kFast + "--draws " + wd("d.csv") +
                   " --future " + wd("future.csv") + " --horizon 4 --out " + wd("f3.csv") +
                   " --pmf-out " + wd("p3.csv"));
  REQUIRE(h.status == 0);
  CHECK(count_rows(slurp(wd("f3.csv"))) == 4);

  // Draws from one data file cannot be paired with another.
  spit(wd("other.csv"), slurp(wd("train.csv")) + "51,3,0.5\n");
  auto bad = run_cli("forecast --data " + wd("other.csv") + " --draws " + wd("d.csv") +
                     " --future " + wd("future.csv") + " --out " + wd("f4.csv") +
                     " --pmf-out " + wd("p4.csv"));
  CHECK(bad.status == 2);

  auto s = run_cli("score --forecast " + wd("f1.csv") + " --pmf " + wd("p1.csv") + " --truth " +
                   wd("future.csv") + " --out " + wd("s.csv"));
  REQUIRE(s.status == 0);
  CHECK(s.output.find("rps") != std::string::npos);
  CHECK(slurp(wd("s.csv")).find("spherical") != std::string::npos);

  // A truth file other than the one forecast for is refused.
  std::string edited = slurp(wd("future.csv"));
  edited.back() = ' ';
  edited += "\n";
  spit(wd("truth2.csv"), edited);
  auto refused = run_cli("score --forecast " + wd("f1.csv") + " --pmf " + wd("p1.csv") +
                         " --truth " + wd("truth2.csv") + " --out " + wd("s2.csv"));
  CHECK(refused.status == 2);

  auto mixed = run_cli("score --forecast " + wd("f1.csv") + " --pmf " + wd("p3.csv") +
                       " --truth " + wd("future.csv") + " --out " + wd("s3.csv"));
  CHECK(mixed.status == 2);
}

TEST_CASE("cv writes one row per candidate and reports the choice") {
  Workdir wd;
  split_sample(wd);
  auto r = run_cli("cv --data " + wd("train.csv") + kFast + "--out " + wd("cv.csv"));
  REQUIRE(r.status == 0);
  CHECK(r.output.find("phi_opt") != std::string::npos);
  const std::string table = slurp(wd("cv.csv"));
  CHECK(count_rows(table) == 7);
  std::string body;
  (void)lgpc::read_manifest(table, &body);
  // The selected flag is the ninth column; exactly one candidate carries it.
  int selected = 0;
  std::istringstream in(body);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c < 9; ++c) std::getline(cells, cell, ',');
    selected += cell == "1";
  }
  CHECK(selected == 1);

  r = run_cli("cv --data " + wd("train.csv") + kFast + "--phi-grid 0.1,0.5 --criterion brier --out " +
              wd("cv2.csv"));
  REQUIRE(r.status == 0);
  CHECK(count_rows(slurp(wd("cv2.csv"))) == 2);
}

TEST_CASE("simulate writes the study tables") {
  Workdir wd;
  auto r = run_cli("simulate --dgp 3 --reps 2 --length 40 --no-cv" + kFast + "--mse-out " +
                   wd("mse.csv") + " --scores-out " + wd("sc.csv") + " --replications-out " +
                   wd("rep.csv"));
  REQUIRE(r.status == 0);
  const std::string mse = slurp(wd("mse.csv"));
  CHECK(mse.find("dgp,parameter,glm,proposed") != std::string::npos);
  CHECK(count_rows(mse) == 3);
  CHECK(count_rows(slurp(wd("sc.csv"))) == 3);
  CHECK(count_rows(slurp(wd("rep.csv"))) >= 2);
  r = run_cli("simulate --dgp 4 --reps 2");
  CHECK(r.status == 2);
}
