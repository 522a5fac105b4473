// Drives the installed CLI as a subprocess: exit codes, --out behaviour, goldens.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int failures = 0;
std::string cli;
fs::path tmp;

int run(const std::string& args, const fs::path& stdout_to = {}) {
  std::string cmd = "\"" + cli + "\" " + args + " >" +
                    (stdout_to.empty() ? std::string("/dev/null") : stdout_to.string()) +
                    " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect(bool cond, const std::string& what) {
  if (!cond) {
    std::printf("FAIL %s\n", what.c_str());
    ++failures;
  }
}

void expect_exit(const std::string& args, int want) {
  int got = run(args);
  if (got != want)
    expect(false, "`" + args + "` exited " + std::to_string(got) + ", wanted " +
                      std::to_string(want));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::printf("usage: test_cli <cli-binary> <golden-dir>\n");
    return 2;
  }
  cli = argv[1];
  fs::path golden = argv[2];
  tmp = fs::temp_directory_path() / "gcfib_cli_test";
  fs::create_directories(tmp);

  expect_exit("", 1);
  expect_exit("fibration", 1);
  expect_exit("no-such-command", 1);
  expect_exit("volume 2", 1);
  expect_exit("--help", 0);

  expect_exit("fibration build 1 0 0 1", 2);   // real eigenvalues
  expect_exit("volume 8 3", 2);                // no such model space
  expect_exit("berger 0 1 5", 2);
  expect_exit("fibration check 2 0 0 1", 2);
  expect_exit("fibration check 2 0 0 1 --force-invalid", 3);

  expect_exit("fibration build 0 -1 1 0", 0);
  expect_exit("fibration check 1 -3 2 -1 --samples 200 --seed 5", 0);
  expect_exit("volume 2 2", 0);
  expect_exit("berger 0.5 0.5 1", 0);
  expect_exit("curvature 0 -1 1 0 -1 -1 --samples 6 --seed 3", 0);

  fs::path out = tmp / "build.json";
  expect(run("fibration build 0 -1 1 0 --out " + out.string()) == 0, "--out run failed");
  expect(fs::exists(out), "--out did not create the file");
  std::string via_file = slurp(out);
  fs::path piped = tmp / "build_stdout.json";
  expect(run("fibration build 0 -1 1 0", piped) == 0, "stdout run failed");
  expect(via_file == slurp(piped), "--out and stdout content differ");
  expect(via_file == slurp(golden / "fibration_build.json"), "build golden mismatch");

  fs::path vol = tmp / "volume.json";
  expect(run("volume 2 2", vol) == 0, "volume run failed");
  expect(slurp(vol) == slurp(golden / "volume_2_2.json"), "volume golden mismatch");

  fs::path swp = tmp / "berger.csv";
  expect(run("berger 0.1 1.0 10", swp) == 0, "berger run failed");
  expect(slurp(swp) == slurp(golden / "berger_sweep.csv"), "berger golden mismatch");

  fs::path fmt = tmp / "berger.json";
  expect(run("berger 0.3 0.3 1 --format json", fmt) == 0, "json format run failed");
  expect(slurp(fmt).find("\"kMin\"") != std::string::npos, "json format missing key");

  if (!failures) std::printf("all CLI checks passed\n");
  return failures;
}
