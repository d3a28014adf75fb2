#include "cmrel/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cmrel/bounds.hpp"
#include "cmrel/detengine.hpp"
#include "cmrel/errors.hpp"

namespace cmrel {

void validate(const RunConfig& cfg) {
  if (cfg.bits < 64) throw error("run config: bits must be >= 64");
  if (cfg.coeff_bound_bits < 1) throw error("run config: coefficient bound must be positive");
  if (cfg.jobs < 1) throw error("run config: jobs must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw error("run config: cannot create " + cfg.out.string() + ": " + ec.message());
  auto probe = cfg.out / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw error("run config: output directory " + cfg.out.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

std::string triple_key(const CandidateTriple& t) {
  return t.tag + ":" + std::to_string(t.dx) + ":" + std::to_string(t.dy) + ":" +
         std::to_string(t.dz);
}

nlohmann::json RunSummary::to_json() const {
  nlohmann::json j;
  j["candidates"] = candidates;
  j["resumed"] = resumed;
  j["by_status"] = by_status;
  j["by_case"] = by_case;
  j["relations"] = relations;
  j["relations_outside_cases"] = relations_outside;
  j["indeterminate"] = indeterminate;
  j["complete"] = complete;
  j["success"] = success;
  return j;
}

namespace {

/* records already in the log; a torn final line is cut off */
std::map<std::string, nlohmann::json> load_log(const std::filesystem::path& path) {
  std::map<std::string, nlohmann::json> done;
  std::ifstream in(path, std::ios::binary);
  if (!in) return done;
  std::string line;
  std::streamoff good = 0;
  bool torn = false;
  while (std::getline(in, line)) {
    if (in.eof()) {
      /* no trailing newline: the writer was interrupted */
      torn = true;
      break;
    }
    try {
      auto j = nlohmann::json::parse(line);
      auto key = j.at("key").get<std::string>();
      done[key] = std::move(j);
      good = in.tellg();
    } catch (const std::exception&) {
      torn = true;
      break;
    }
  }
  in.close();
  if (torn) std::filesystem::resize_file(path, static_cast<std::uintmax_t>(good));
  return done;
}

double cost(const CandidateTriple& t) {
  return static_cast<double>(class_number(t.dx)) * static_cast<double>(class_number(t.dy)) *
         static_cast<double>(class_number(t.dz));
}

}  // namespace

RunSummary run_trip(const RunConfig& cfg, const ProgressFn& progress) {
  auto t0 = std::chrono::steady_clock::now();
  validate(cfg);
  CaseConfig cc;
  cc.abm15_table = cfg.abm15_table;
  cc.cases = cfg.cases;
  cc.include_2d = cfg.include_2d;
  if (cfg.abm15_table) {
    HilbertCache hc(cfg.cache_dir);
    auto problems = validate_equal_field_table(read_equal_field_csv(*cfg.abm15_table), true, &hc);
    if (!problems.empty()) {
      std::string msg = "equal-field table rejected:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw error(msg);
    }
  }
  auto cands = case_lists(cc);

  std::vector<std::pair<double, CandidateTriple>> order;
  for (const auto& t : cands) order.emplace_back(cost(t), t);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  auto log_path = cfg.out / "reports.jsonl";
  auto done = load_log(log_path);
  RunSummary sum;
  sum.candidates = cands.size();

  std::vector<CandidateTriple> todo;
  for (const auto& [c, t] : order) {
    if (done.count(triple_key(t)))
      ++sum.resumed;
    else
      todo.push_back(t);
  }
  if (cfg.max_triples && todo.size() > cfg.max_triples) todo.resize(cfg.max_triples);

  RelationConfig rc;
  rc.bits = cfg.bits;
  rc.coeff_bound_bits = cfg.coeff_bound_bits;

  std::ofstream log(log_path, std::ios::app | std::ios::binary);
  if (!log) throw error("cannot append to " + log_path.string());
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::size_t finished = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next++;
      if (i >= todo.size()) return;
      const auto& t = todo[i];
      nlohmann::json rec;
      try {
        TripleReport rep = check_triple(t.dx, t.dy, t.dz, rc);
        rec["key"] = triple_key(t);
        rec["tag"] = t.tag;
        rec["subcase"] = t.subcase;
        rec["report"] = to_json(rep);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!failure) failure = std::current_exception();
        next = todo.size();
        return;
      }
      std::lock_guard<std::mutex> lk(mu);
      log << rec.dump() << "\n";
      log.flush();
      done[rec["key"].get<std::string>()] = rec;
      ++finished;
      if (progress) progress(finished, todo.size(), rec["key"].get<std::string>());
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < cfg.jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  log.close();
  if (failure) std::rethrow_exception(failure);

  std::size_t present = 0;
  for (const auto& t : cands) {
    auto it = done.find(triple_key(t));
    if (it == done.end()) continue;
    ++present;
    const auto& rep = it->second["report"];
    std::string st = rep["status"].get<std::string>();
    sum.by_status[st] += 1;
    sum.by_case[t.tag] += 1;
    if (st == "indeterminate") sum.indeterminate.push_back({t.dx, t.dy, t.dz});
    if (!rep["witnesses"].empty()) {
      std::set<std::string> tags;
      for (const auto& w : rep["witnesses"]) {
        std::string c = w["case"].get<std::string>();
        tags.insert(c);
        if (c == "outside") ++sum.relations_outside;
      }
      sum.relations.push_back({{"key", triple_key(t)},
                               {"cases", tags},
                               {"witness", rep["witnesses"][0]}});
    }
  }
  sum.complete = present == cands.size();
  sum.success = sum.complete && sum.relations_outside == 0 && sum.indeterminate.empty();
  sum.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ofstream s(cfg.out / "summary.json");
  s << sum.to_json().dump(2) << "\n";
  return sum;
}

namespace {

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::vector<ReproRow> reproduce_all(const ReproOptions& opt) {
  std::vector<ReproRow> rows;
  auto add = [&](std::string crit, std::string name, std::string exp, std::string got, bool ok) {
    rows.push_back({std::move(crit), std::move(name), std::move(exp), std::move(got), ok});
  };

  add("1", "lemma 2.1 enumeration", "true", lemma21_check() ? "true" : "false", lemma21_check());

  ClassNumberTable table(170000);
  i64 s6 = max_disc_with_class_at_most(table, 6, 5000);
  i64 s32 = max_disc_with_class_at_most(table, 32, 170000);
  add("2", "smallclass(6)", "4075", std::to_string(s6), s6 == 4075);
  add("2", "smallclass(32)", "166147", std::to_string(s32), s32 == 166147);

  PairSearchOptions po;
  po.certify = opt.certify_pairs;
  po.cache = opt.cache;
  auto pairs = difffundsub_pairs(po);
  add("3", "difffundsub count", "873", std::to_string(pairs.size()), pairs.size() == 873);
  if (opt.certify_pairs) {
    std::size_t cert = 0;
    for (const auto& p : pairs) cert += p.certified();
    add("3", "difffundsub certified witnesses", "873", std::to_string(cert), cert == 873);
  }

  for (int k : table1_rows()) {
    int a = a_min(k);
    static const std::map<int, int> expect{{3, 2}, {5, 3}, {7, 4}, {9, 5}, {11, 6}, {15, 7}};
    add("4", "a_min(" + std::to_string(k) + ")", std::to_string(expect.at(k)), std::to_string(a),
        a == expect.at(k) && a_min_consistency(k));
  }
  for (const auto& l : table1_columns())
    for (int k : table1_rows()) {
      Table1Cell c = table1(l, k);
      if (!c.published) continue;
      std::string name = "Table 1 (" + l.get_str() + ", " + std::to_string(k) + ")";
      std::string got = c.value ? std::to_string(*c.value) : "none";
      add("4", name, std::to_string(*c.published), got, c.value && *c.value <= *c.published);
    }
  for (const auto& s : default_catalog()) {
    if (s.convention != "claim" || !s.published) continue;
    ThresholdResult r = threshold(s);
    add("4", s.id, "<= " + std::to_string(*s.published), std::to_string(r.value),
        r.certified && r.value <= *s.published);
  }

  struct Grey {
    mpq_class l;
    i64 k, b;
  };
  for (const auto& g : std::vector<Grey>{{3, 3, 2}, {4, 3, 0}, {2, 7, 49}, {mpq_class(3, 2), 15, 515}}) {
    bool ok = grey_cell_check(g.l, g.k, g.b);
    add("5", "grey cell (" + g.l.get_str() + ", " + std::to_string(g.k) + ", " + std::to_string(g.b) + ")",
        "true", ok ? "true" : "false", ok);
  }

  Ball t3 = thm_equal_bound(3);
  double v3 = t3.mid_double();
  add("11", "thm_equal_bound(3)", "[3.334, 3.335]", fmt(v3), v3 >= 3.334 && v3 <= 3.335);
  Ball e = exp(Ball::pi(128) * sqrt(Ball::from_si(3, 128)) / 2);
  double ev = e.mid_double();
  add("11", "exp(pi sqrt(3) / 2)", "[15.190, 15.191]", fmt(ev), ev >= 15.190 && ev <= 15.191);

  mpz_class s1 = step4_bound(1);
  add("14", "step4_bound(1)", "817152000000000000", s1.get_str(), s1 == mpz_class("817152000000000000"));
  return rows;
}

nlohmann::json to_json(const std::vector<ReproRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"criterion", r.criterion},
                 {"name", r.name},
                 {"expected", r.expected},
                 {"computed", r.computed},
                 {"status", r.pass ? "pass" : "fail"}});
  return j;
}

}  // namespace cmrel
