#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run otdp_cli(const std::string& args, const std::string& env = {}) {
  static int counter = 0;
  const auto dir = fs::temp_directory_path() / "otdp-cli-io";
  fs::create_directories(dir);
  const auto out = dir / ("out" + std::to_string(counter) + ".txt");
  const auto err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = env + " \"" OTDP_CLI_PATH "\" " + args + " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testing::read_file(out);
  r.err = testing::read_file(err);
  return r;
}

std::string fixture(const char* name) { return std::string(OTDP_FIXTURE_DIR) + "/" + name; }

std::size_t count_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

}  // namespace

TEST_CASE("cli: analyze golden fixture") {
  const auto out = testing::fresh_dir("cli-golden");
  const Run r = otdp_cli("analyze " + fixture("synthetic.csv") + " -o " + out.string());
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Dataset | File | Format") != std::string::npos);
  CHECK(r.out.find("synthetic | synthetic.csv | csv | 600 | 10 | ") != std::string::npos);
  CHECK(count_files(out) == 14);
  for (const char* name : {"report.json", "stats.txt", "importance.svg", "importance.tsv"}) CHECK(fs::exists(out / name));
  const auto report = nlohmann::json::parse(testing::read_file(out / "report.json"));
  const std::size_t kept = 600 - report.at("dropped_rows").get<std::size_t>();
  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.path().filename().string().rfind("feature_", 0) != 0 || e.path().extension() != ".svg") continue;
    ++svgs;
    auto sidecar = e.path();
    sidecar.replace_extension(".tsv");
    CHECK(testing::count_lines(testing::read_file(sidecar)) == kept);
  }
  CHECK(svgs == 5);
  CHECK(report.at("imbalance").at("n_benign").get<std::size_t>() + report.at("imbalance").at("n_malicious").get<std::size_t>() == kept);
  CHECK(report.at("imbalance").at("n_benign").get<std::size_t>() <= 420);
  CHECK(report.at("complexity").at("k_used") == std::min<std::size_t>(kept, 1000));
  CHECK(report.at("config").at("seed") == 42);
}

TEST_CASE("cli: analyze twice gives identical outputs") {
  // identical configuration includes the output directory, which report.json echoes
  const auto out = testing::fresh_dir("cli-det");
  const auto snapshot = testing::fresh_dir("cli-det-first");
  const std::string args = "analyze " + fixture("synthetic.csv") + " -k 200 -o " + out.string();
  REQUIRE(otdp_cli(args).code == 0);
  fs::copy(out, snapshot, fs::copy_options::recursive);
  REQUIRE(otdp_cli(args).code == 0);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(snapshot)) {
    CHECK(testing::read_file(e.path()) == testing::read_file(out / e.path().filename()));
    ++compared;
  }
  CHECK(compared == 14);
}

TEST_CASE("cli: unlabeled input exits 2") {
  const auto out = testing::fresh_dir("cli-unlabeled");
  const Run r = otdp_cli("analyze " + fixture("unlabeled.csv") + " -o " + out.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("no label column") != std::string::npos);
  const auto err = nlohmann::json::parse(r.err.substr(r.err.find('{')));
  CHECK(err.at("error").at("exit_code") == 2);
  CHECK(fs::exists(out / "error.json"));
}

TEST_CASE("cli: single class exits 3") {
  const auto dir = testing::fresh_dir("cli-single");
  std::string csv = "a,b,label\n";
  for (int i = 0; i < 30; ++i) csv += std::to_string(i) + "," + std::to_string(i % 4) + ",normal\n";
  testing::write_file(dir / "single.csv", csv);
  const Run r = otdp_cli("analyze " + (dir / "single.csv").string() + " -o " + (dir / "out").string());
  CHECK(r.code == 3);
}

TEST_CASE("cli: input errors") {
  const auto dir = testing::fresh_dir("cli-errors");
  testing::write_file(dir / "book.xlsx", "PK\x03\x04");
  const Run x = otdp_cli("analyze " + (dir / "book.xlsx").string() + " -o " + (dir / "o1").string());
  CHECK(x.code == 5);
  CHECK(x.err.find("CSV") != std::string::npos);

  const Run big = otdp_cli("analyze " + fixture("synthetic.csv") + " --max-cells 100 -o " + (dir / "o2").string());
  CHECK(big.code == 6);
  const auto rows = nlohmann::json::parse(testing::read_file(dir / "o2" / "report.json"));
  CHECK(rows.at("row_count_only") == true);
  CHECK(rows.at("stats").at("n_points") == 600);

  const Run missing = otdp_cli("analyze " + (dir / "nope.csv").string() + " -o " + (dir / "o3").string());
  CHECK(missing.code == 1);
  CHECK(otdp_cli("analyze " + fixture("synthetic.csv") + " -k 2 -o " + (dir / "o4").string()).code == 1);
  CHECK(otdp_cli("analyze").code == 1);
}

TEST_CASE("cli: config file and flag precedence") {
  const auto dir = testing::fresh_dir("cli-config");
  testing::write_file(dir / "run.toml", "k = 150\nm = 3\nseed = 7\n");
  const Run r = otdp_cli("analyze " + fixture("synthetic.csv") + " --config " + (dir / "run.toml").string() +
                         " --seed 9 -o " + (dir / "out").string());
  INFO(r.err);
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(testing::read_file(dir / "out" / "report.json"));
  CHECK(report.at("config").at("k") == 150);
  CHECK(report.at("config").at("m") == 3);
  CHECK(report.at("config").at("seed") == 9);
  CHECK(report.at("complexity").at("m_used") == 3);
  CHECK(report.at("complexity").at("k_used") == 150);
}

TEST_CASE("cli: catalogue commands") {
  const Run q = otdp_cli("catalog query --attack Ransomware");
  CHECK(q.code == 0);
  CHECK(q.out.find("Edge-IIoT") != std::string::npos);
  CHECK(q.out.find("X-IIOTID") != std::string::npos);
  CHECK(testing::count_lines(q.out) == 2);

  const Run show = otdp_cli("catalog show HDGM");
  CHECK(show.code == 0);
  CHECK(show.out.find("0.479") != std::string::npos);

  const Run list = otdp_cli("catalog list --ml-ready --json");
  CHECK(list.code == 0);
  CHECK(nlohmann::json::parse(list.out).size() == 17);
  CHECK(nlohmann::json::parse(otdp_cli("catalog list --json").out).size() == 32);

  const Run unknown = otdp_cli("catalog show HDMG");
  CHECK(unknown.code == 4);
  CHECK(unknown.err.find("HDGM") != std::string::npos);
  CHECK(otdp_cli("catalog query --attack Phishing").code == 4);

  const Run summary = otdp_cli("catalog summary --json");
  CHECK(summary.code == 0);
  const auto s = nlohmann::json::parse(summary.out);
  CHECK(s.at("ir_above_30") == 4);

  const auto bad = testing::fresh_dir("cli-bad-catalog");
  testing::write_file(bad / "c.txt", "catalog-version: 1\n");
  CHECK(otdp_cli("catalog list", "OTDP_CATALOG=" + (bad / "c.txt").string()).code == 1);
  CHECK(otdp_cli("catalog --extended list", "OTDP_CATALOG=" + (bad / "c.txt").string()).code == 0);
}

TEST_CASE("cli: measures reference") {
  const Run r = otdp_cli("measures --json");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).size() == 22);
}

TEST_CASE("cli: rerun into the same directory replaces earlier outputs") {
  const auto out = testing::fresh_dir("cli-rerun");
  testing::write_file(out / "notes.txt", "keep me");
  for (const char* seed : {"1", "5", "9"}) {
    REQUIRE(otdp_cli("analyze " + fixture("synthetic.csv") + " -k 100 --seed " + seed + " -o " + out.string()).code == 0);
  }
  CHECK(count_files(out) == 15);
  CHECK(testing::read_file(out / "notes.txt") == "keep me");
}
