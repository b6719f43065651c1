// End-to-end checks of the command-line driver: reproducible output bytes,
// config parsing, and the error paths. The binary path arrives as argv[1].
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;
std::filesystem::path g_dir;

int run(const std::string& args, const std::string& out_name) {
  const std::string cmd = g_binary + " " + args + " > " +
                          (g_dir / out_name).string() + " 2> " +
                          (g_dir / (out_name + ".err")).string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& name) {
  std::ifstream in(g_dir / name, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& name, const std::string& content) {
  std::ofstream out(g_dir / name, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("identical invocations produce byte-identical output") {
  const std::string args =
      "pump2 --lambda-over-a 0.5 --beta2 'arcsin(0.5)' -U strong "
      "--beta1-sweep=-1.5,1.5,301 --threads ";
  CHECK(run(args + "4", "a.csv") == 0);
  CHECK(run(args + "2", "b.csv") == 0);
  const std::string a = slurp("a.csv");
  CHECK(a == slurp("b.csv"));
  CHECK(a.find("delta_g1_nl") != std::string::npos);
}

TEST_CASE("config file runs and mirrors the flag invocation") {
  write_file("rates.json",
             "{\"chain\": {\"sites\": 101, \"lambda_over_a\": 0.5, "
             "\"theta\": \"pi/2\", \"U\": 0},\n \"task\": \"rates\", "
             "\"rates\": {\"x_max\": 4}}");
  CHECK(run("--config " + (g_dir / "rates.json").string(), "cfg.csv") == 0);
  CHECK(run("rates --x-max 4 --lambda-over-a 0.5 -M 101 -U 0", "flags.csv") ==
        0);
  CHECK(slurp("cfg.csv") == slurp("flags.csv"));
}

TEST_CASE("unknown config keys are rejected") {
  write_file("bad_key.json", "{\"task\": \"rates\", \"rates\": {\"xmax\": 4}}");
  CHECK(run("--config " + (g_dir / "bad_key.json").string(), "bad.csv") != 0);
  CHECK(slurp("bad.csv.err").find("xmax") != std::string::npos);
}

TEST_CASE("syntax errors report the line") {
  write_file("broken.json", "{\n \"task\": \"rates\",\n broken\n}");
  CHECK(run("--config " + (g_dir / "broken.json").string(), "broken.csv") != 0);
  CHECK(slurp("broken.csv.err").find(":3") != std::string::npos);
}

TEST_CASE("off-grid wavenumbers name the nearest grid value under "
          "--strict-grid") {
  CHECK(run("eigen --state K=0,p=pi/2a -M 101 --strict-grid", "strict.csv") !=
        0);
  const std::string err = slurp("strict.csv.err");
  CHECK(err.find("nearest grid value") != std::string::npos);
  CHECK(run("eigen --state K=0,p=51pi/101 -M 101 --strict-grid", "ok.csv") ==
        0);
}

TEST_CASE("json output format is valid and stable") {
  CHECK(run("rates --x-max 2 --format json", "rates.json.out") == 0);
  const std::string text = slurp("rates.json.out");
  CHECK(text.find("\"columns\"") != std::string::npos);
  CHECK(text.find("0.00949886096647") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <chainlight binary>\n");
    return 1;
  }
  g_binary = argv[1];
  g_dir = std::filesystem::temp_directory_path() / "chainlight_cli_test";
  std::filesystem::create_directories(g_dir);
  doctest::Context context;
  const int res = context.run();
  std::filesystem::remove_all(g_dir);
  return res;
}
