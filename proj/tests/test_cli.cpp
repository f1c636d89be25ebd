#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run holo(const std::string& args) {
  std::string cmd = std::string(HOLO_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / ("holo_cli_test_" + std::to_string(getpid()));
  fs::create_directories(d);
  return d;
}

struct Csv {
  std::vector<std::string> comments;
  std::string header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path& path) {
  Csv c;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("#", 0) == 0) {
      c.comments.push_back(line);
    } else if (c.header.empty()) {
      c.header = line;
    } else {
      std::vector<double> row;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');)
        row.push_back(cell.empty() ? NAN : std::stod(cell));
      c.rows.push_back(row);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("synth writes pulse tables") {
  auto dir = scratch();
  auto z = dir / "z.csv";
  REQUIRE(holo("synth --gate z --out " + z.string()).code == 0);
  Csv cz = read_csv(z);
  REQUIRE_FALSE(cz.comments.empty());
  CHECK(cz.comments[0].rfind("# holo ", 0) == 0);
  CHECK(cz.comments[0].find(" config=") != std::string::npos);
  CHECK(cz.header == "t_ns,omega0_rad_per_ns,omega1_rad_per_ns,phi0_rad,phi1_rad");
  CHECK(cz.rows.size() == 3001);
  for (const auto& r : cz.rows) CHECK(r[1] == 0.0);

  auto h = dir / "h.csv";
  REQUIRE(holo("synth --gate hadamard --tau 30 --out " + h.string()).code == 0);
  Csv ch = read_csv(h);
  const double pi = std::acos(-1.0);
  for (const auto& r : ch.rows)
    CHECK(std::abs(std::remainder(r[4] - r[3] - pi, 2 * pi)) < 1e-9);

  auto e = dir / "e.csv";
  REQUIRE(holo("synth --gate hadamard --eta-g 0.983pi --out " + e.string()).code == 0);
  bool found = false;
  for (const auto& c : read_csv(e).comments) found |= c == "# eta_g=0.983pi";
  CHECK(found);
  fs::remove_all(dir);
}

TEST_CASE("simulate reports the endpoint") {
  auto dir = scratch();
  auto csv = dir / "t.csv";
  auto js = dir / "t.json";
  auto r = holo("simulate --gate z --no-leak --gamma1 0 --gamma2 0 --out " + csv.string() +
                " --json " + js.string());
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(std::ifstream(js));
  CHECK(j.at("final").at("f_s").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  Csv c = read_csv(csv);
  CHECK(c.header == "t_ns,p0,pe,p1,ph,fidelity");
  CHECK(c.rows.size() == 3001);
  CHECK(c.rows.back()[5] == doctest::Approx(1.0).epsilon(1e-6));
  fs::remove_all(dir);
}

TEST_CASE("reports are reproducible") {
  auto a = holo("fidelity --gate hadamard --steps 600 --n-states 41");
  auto b = holo("fidelity --gate hadamard --steps 600 --n-states 41");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j.at("gate_fidelity").at("f_g").get<double>() > 0.9);
}

TEST_CASE("config files and flag overrides") {
  auto dir = scratch();
  auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "gate=hadamard\ntau=40\nsteps=800\n# comment\nn_states=21\n";
  auto r = holo("fidelity --config " + cfg.string() + " --tau 20");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("grid").at("tau_ns").get<double>() == 20.0);
  CHECK(j.at("config").at("gate").get<std::string>() == "hadamard");

  std::ofstream(cfg) << "gate=hadamard\nwidth=3\n";
  CHECK(holo("fidelity --config " + cfg.string()).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  CHECK(holo("fidelity --gate cnot").code == 1);
  CHECK(holo("fidelity --config /nonexistent.cfg").code == 1);
  auto w = holo("optimize --gate hadamard --method op --budget 2 --steps 600 --search-states 9 "
                "--n-states 21 --workers 1");
  CHECK(w.code == 2);
  auto j = nlohmann::json::parse(w.out);
  CHECK(j.at("optimization").at("status").get<std::string>() == "warning");
}

TEST_CASE("sweep table") {
  auto dir = scratch();
  auto csv = dir / "s.csv";
  auto r = holo("sweep --gate z --var tau --from 20 --to 30 --step 5 --budget 4 --steps 600 "
                "--search-states 9 --n-states 21 --workers 1 --out " + csv.string());
  CHECK((r.code == 0 || r.code == 2));
  Csv c = read_csv(csv);
  CHECK(c.header == "value,baseline_fg,opt_fg,beta1,beta2,eta_g_over_pi");
  REQUIRE(c.rows.size() == 3);
  CHECK(c.rows[0][0] == 20.0);
  CHECK(c.rows[2][0] == 30.0);
  for (const auto& row : c.rows) CHECK(row[2] >= row[1]);
  fs::remove_all(dir);
}
