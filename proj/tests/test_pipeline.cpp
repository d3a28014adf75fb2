#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cmrel/errors.hpp"
#include "cmrel/pipeline.hpp"

using namespace cmrel;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cmrel_run_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<nlohmann::json> read_log(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) out.push_back(nlohmann::json::parse(line));
  return out;
}

RunConfig small_run(const fs::path& dir, const std::string& sub) {
  RunConfig c;
  c.bits = 1024;
  c.coeff_bound_bits = 64;
  c.cases = {"1a"};
  c.include_2d = false;
  c.cache_dir = dir / "cache";
  c.out = dir / sub;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config validation") {
    TempDir t;
    RunConfig c = small_run(t.path, "v");
    c.bits = 16;
    CHECK_THROWS(validate(c));
    c = small_run(t.path, "v");
    c.jobs = 0;
    CHECK_THROWS(validate(c));
    c = small_run(t.path, "v");
    CHECK_NOTHROW(validate(c));
    c.out = "/proc/cmrel_cannot_write_here";
    CHECK_THROWS(validate(c));
  }

  TEST_CASE("case 1a end to end, resume and determinism") {
    TempDir t;
    RunConfig c = small_run(t.path, "a");
    auto s = run_trip(c);
    CHECK(s.candidates == 16);
    CHECK(s.complete);
    CHECK(s.success);
    CHECK(s.relations_outside == 0);
    CHECK(s.indeterminate.empty());
    CHECK(fs::exists(c.out / "summary.json"));
    auto log = read_log(c.out / "reports.jsonl");
    CHECK(log.size() == 16);

    // order is by estimated cost, largest first
    auto last = log.back()["report"]["triple"];
    CHECK(last[1] == -7);

    // the only relation in 1a is the case-3 family at (-60, -15, -15)
    REQUIRE(s.relations.size() == 1);
    CHECK(s.relations[0]["key"] == "1a:-60:-15:-15");

    // a second run resumes everything
    auto again = run_trip(c);
    CHECK(again.resumed == 16);
    CHECK(read_log(c.out / "reports.jsonl").size() == 16);

    // a torn record is dropped and recomputed
    {
      std::ofstream f(c.out / "reports.jsonl", std::ios::app);
      f << "{\"key\": \"1a:-28:-7";
    }
    auto third = run_trip(c);
    CHECK(third.resumed == 16);
    CHECK(read_log(c.out / "reports.jsonl").size() == 16);

    // drop two records: exactly those are redone
    {
      auto recs = read_log(c.out / "reports.jsonl");
      std::ofstream f(c.out / "reports.jsonl", std::ios::trunc);
      for (std::size_t i = 0; i + 2 < recs.size(); ++i) f << recs[i].dump() << "\n";
    }
    auto fourth = run_trip(c);
    CHECK(fourth.resumed == 14);
    CHECK(fourth.success);

    // an identical fresh run gives the same reports apart from timings
    RunConfig d = small_run(t.path, "b");
    run_trip(d);
    auto strip = [](std::vector<nlohmann::json> v) {
      std::map<std::string, nlohmann::json> m;
      for (auto& r : v) {
        r["report"].erase("seconds");
        m[r["key"]] = r;
      }
      return m;
    };
    CHECK(strip(read_log(c.out / "reports.jsonl")) == strip(read_log(d.out / "reports.jsonl")));
  }

  TEST_CASE("limit and parallel workers") {
    TempDir t;
    RunConfig c = small_run(t.path, "p");
    c.cases = {"1b"};
    c.jobs = 3;
    c.max_triples = 4;
    auto s = run_trip(c);
    CHECK_FALSE(s.complete);
    CHECK_FALSE(s.success);
    c.max_triples = 0;
    s = run_trip(c);
    CHECK(s.resumed == 4);
    CHECK(s.complete);
    CHECK(s.success);
  }

  TEST_CASE("low precision fails loudly") {
    TempDir t;
    RunConfig c = small_run(t.path, "low");
    c.bits = 64;
    c.coeff_bound_bits = 32;
    auto s = run_trip(c);
    // eliminations still certify; the relation at (-60, -15, -15) cannot be resolved
    CHECK(s.complete);
    CHECK_FALSE(s.success);
    REQUIRE(s.indeterminate.size() == 1);
    CHECK(s.indeterminate[0] == std::array<i64, 3>{-60, -15, -15});
    CHECK(s.relations.empty());
  }

  TEST_CASE("bad external table is rejected") {
    TempDir t;
    {
      std::ofstream f(t.path / "bad.csv");
      f << "dx,dy,field\n-84,-23,\"Q(sqrt(3))\"\n";
    }
    RunConfig c = small_run(t.path, "bad");
    c.abm15_table = t.path / "bad.csv";
    CHECK_THROWS_AS(run_trip(c), error);
  }

  TEST_CASE("reproduction rows") {
    ReproOptions o;
    o.certify_pairs = false;
    auto rows = reproduce_all(o);
    std::map<std::string, ReproRow> by;
    for (const auto& r : rows) by[r.name] = r;
    CHECK(by.at("smallclass(6)").pass);
    CHECK(by.at("smallclass(32)").pass);
    CHECK(by.at("difffundsub count").pass);
    CHECK(by.at("Table 1 (3/2, 15)").expected == "515");
    CHECK(by.at("Table 1 (3/2, 15)").pass);
    // the (3, 3) cell does not reproduce; the row must say so
    CHECK_FALSE(by.at("Table 1 (3, 3)").pass);
    auto j = to_json(rows);
    CHECK(j.size() == rows.size());
  }
}
