#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmrel/relations.hpp"
#include "cmrel/sieve.hpp"

namespace cmrel {

struct RunConfig {
  prec_t bits = 4096;
  unsigned coeff_bound_bits = 128;
  unsigned jobs = 1;
  std::filesystem::path cache_dir = "cmrel_cache";
  std::optional<std::filesystem::path> abm15_table;
  /* empty: every case */
  std::vector<std::string> cases;
  bool include_2d = true;
  std::filesystem::path out = "cmrel_run";
  /* stop after this many new triples (0: no limit); resumable */
  std::size_t max_triples = 0;
};

void validate(const RunConfig& cfg);

struct RunSummary {
  std::size_t candidates = 0;
  std::size_t resumed = 0;
  std::map<std::string, std::size_t> by_status;
  std::map<std::string, std::size_t> by_case;
  /* triples with a certified relation, with the relation's case */
  std::vector<nlohmann::json> relations;
  std::size_t relations_outside = 0;
  std::vector<std::array<i64, 3>> indeterminate;
  bool complete = false;
  bool success = false;
  double seconds = 0;

  nlohmann::json to_json() const;
};

std::string triple_key(const CandidateTriple& t);

using ProgressFn = std::function<void(std::size_t done, std::size_t total, const std::string& key)>;

/*
 * Checks every candidate triple, appending one JSON line per triple to
 * <out>/reports.jsonl; triples already in the log are not recomputed.
 * Writes <out>/summary.json.
 */
RunSummary run_trip(const RunConfig& cfg, const ProgressFn& progress = {});

struct ReproRow {
  std::string criterion;
  std::string name;
  std::string expected;
  std::string computed;
  bool pass = false;
};

struct ReproOptions {
  /* certify all 873 membership witnesses (about a minute) */
  bool certify_pairs = true;
  const HilbertCache* cache = nullptr;
};

std::vector<ReproRow> reproduce_all(const ReproOptions& opt = {});
nlohmann::json to_json(const std::vector<ReproRow>& rows);

}  // namespace cmrel
