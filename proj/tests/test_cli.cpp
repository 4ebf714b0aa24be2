#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "doctest.h"
#include "helpers.hpp"
#include "sigverify/text.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string output;  // stdout and stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(SIGVERIFY_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

void write(const fs::path& p, const std::string& content) { sigverify::text::write_file(p.string(), content); }

std::string read(const fs::path& p) { return sigverify::text::read_file(p.string()); }

const char* kReferenceEers =
    "team,task,eer\n"
    "DLVC-Lab,1,3.33\nTUSUR KIBEVS,1,6.44\nSIG,1,7.50\nMaD,1,9.83\nSigStat,1,11.75\n"
    "DLVC-Lab,2,7.41\nSIG,2,10.14\nSigStat,2,13.29\nTUSUR KIBEVS,2,13.39\nMaD,2,17.23\nJAIRG,2,18.43\n"
    "DLVC-Lab,3,6.04\nSIG,3,9.96\nTUSUR KIBEVS,3,11.42\nMaD,3,14.21\nSigStat,3,14.48\n";

}  // namespace

TEST_CASE("cli synth, compare and eval") {
  testutil::TempDir dir("cli");
  const auto data = dir / "data";
  auto r = run("synth --seed 42 --subjects 2 --out " + q(data));
  REQUIRE(r.status == 0);
  CHECK(fs::exists(data / "comparisons.csv"));

  write(dir / "baseline.cfg", "verifier = baseline_dtw\n");
  const auto comparisons = data / "comparisons_random.csv";
  const auto scores = dir / "scores.csv";

  r = run("compare " + q(comparisons) + " --pipeline " + q(dir / "baseline.cfg") + " --dry-run");
  CHECK(r.status == 0);
  CHECK(!fs::exists(scores));

  r = run("compare " + q(comparisons) + " --pipeline " + q(dir / "baseline.cfg") + " --out " + q(scores));
  REQUIRE(r.status == 0);
  const auto n_comparisons = sigverify::text::lines(read(comparisons)).size();
  CHECK(sigverify::text::lines(read(scores)).size() == n_comparisons);

  const auto curve = dir / "curve.csv";
  r = run("eval " + q(scores) + " " + q(data / "labels_random.csv") + " --task 1 --curve " + q(curve));
  CHECK(r.status == 0);
  CHECK(r.output.find("eer_percent=") != std::string::npos);
  CHECK(read(curve).rfind("threshold,far,frr\n", 0) == 0);

  r = run("inspect " + q(fs::directory_iterator(data / "signatures")->path()));
  CHECK(r.status == 0);
  CHECK(r.output.find("std_x:") != std::string::npos);
}

TEST_CASE("cli eval on a perfectly separated fixture") {
  testutil::TempDir dir("cli_eval");
  write(dir / "s.csv", "a,0.9\nb,0.8\nc,0.1\n");
  write(dir / "l.csv", "a,genuine\nb,genuine\nc,impostor\n");
  auto r = run("eval " + q(dir / "s.csv") + " " + q(dir / "l.csv") + " --out " + q(dir / "report.kv"));
  CHECK(r.status == 0);
  CHECK(r.output.find("eer_percent=0.0\n") != std::string::npos);
  CHECK(read(dir / "report.kv").find("eer_percent=0.0\n") != std::string::npos);

  write(dir / "l2.csv", "a,genuine\nb,genuine\nzz,impostor\n");
  r = run("eval " + q(dir / "s.csv") + " " + q(dir / "l2.csv"));
  CHECK(r.status != 0);
  CHECK(r.output.find("zz") != std::string::npos);
  CHECK(r.output.find("c") != std::string::npos);
}

TEST_CASE("cli compare reports the failing comparison and writes nothing") {
  testutil::TempDir dir("cli_missing");
  std::mt19937_64 rng(1);
  sigverify::write_signature_file(testutil::random_signature(rng, 10), dir / "a.sig");
  write(dir / "cmp.csv", "ok,a.sig,a.sig\nbroken,a.sig,nowhere.sig\n");
  write(dir / "p.cfg", "verifier = baseline_dtw\n");
  auto r = run("compare " + q(dir / "cmp.csv") + " --pipeline " + q(dir / "p.cfg") + " --out " + q(dir / "s.csv"));
  CHECK(r.status != 0);
  CHECK(r.output.find("broken") != std::string::npos);
  CHECK(!fs::exists(dir / "s.csv"));
  CHECK(!fs::exists(dir / "s.csv.partial"));

  r = run("compare " + q(dir / "cmp.csv") + " --pipeline " + q(dir / "p.cfg") + " --dry-run");
  CHECK(r.status != 0);
  CHECK(r.output.find("broken") != std::string::npos);

  write(dir / "bad.cfg", "verifier = baseline_dtw\nbogus = 1\n");
  r = run("compare " + q(dir / "cmp.csv") + " --pipeline " + q(dir / "bad.cfg") + " --dry-run");
  CHECK(r.status != 0);
  CHECK(r.output.find(":2") != std::string::npos);
}

TEST_CASE("cli rank") {
  testutil::TempDir dir("cli_rank");
  write(dir / "eers.csv", kReferenceEers);
  auto r = run("rank " + q(dir / "eers.csv"));
  CHECK(r.status == 0);
  CHECK(r.output ==
        "position,team,total_points\n1,DLVC-Lab,9\n2,SIG,5\n3,TUSUR KIBEVS,3\n4,SigStat,1\n5,MaD,0\n6,JAIRG,0\n");

  write(dir / "one.csv", "solo,1,5\nsolo,2,5\nsolo,3,5\n");
  r = run("rank " + q(dir / "one.csv") + " --out " + q(dir / "r.csv"));
  CHECK(r.status == 0);
  CHECK(read(dir / "r.csv") == "position,team,total_points\n1,solo,9\n");

  write(dir / "empty.csv", "");
  r = run("rank " + q(dir / "empty.csv"));
  CHECK(r.status == 0);
  CHECK(r.output == "position,team,total_points\n");
}

TEST_CASE("cli argument errors exit nonzero") {
  CHECK(run("").status != 0);
  CHECK(run("eval /nonexistent/a /nonexistent/b").status != 0);
  CHECK(run("synth --subjects 1 --out /tmp/sigverify_should_not_exist").status != 0);
}
