// cmrel: command-line front end for the singular-moduli relation toolkit.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmrel/bounds.hpp"
#include "cmrel/classgroup.hpp"
#include "cmrel/detengine.hpp"
#include "cmrel/errors.hpp"
#include "cmrel/genus.hpp"
#include "cmrel/hilbert.hpp"
#include "cmrel/modular.hpp"
#include "cmrel/pipeline.hpp"
#include "cmrel/relations.hpp"
#include "cmrel/sieve.hpp"

using namespace cmrel;
using nlohmann::json;

namespace {

json form_json(const QuadForm& f) { return json::array({f.a, f.b, f.c}); }

/* "2^k" or a decimal integer; returns the exponent of the enclosing power of two */
unsigned parse_coeff_bound(const std::string& s) {
  if (s.rfind("2^", 0) == 0) return static_cast<unsigned>(std::stoul(s.substr(2)));
  mpz_class b(s);
  if (b < 2) throw CLI::ValidationError("--coeff-bound", "must be at least 2");
  mpz_class m = b - 1;
  return static_cast<unsigned>(mpz_sizeinbase(m.get_mpz_t(), 2));
}

std::filesystem::path cache_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CMREL_CACHE_DIR"); env && *env) return env;
  return "cmrel_cache";
}

std::optional<std::filesystem::path> table_path(const std::string& flag) {
  if (!flag.empty()) return std::filesystem::path(flag);
  if (const char* env = std::getenv("CMREL_ABM15_TABLE"); env && *env)
    return std::filesystem::path(env);
  return std::nullopt;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw error("cannot write " + out);
  f << text;
}

std::string csv_triples(const std::vector<CandidateTriple>& ts) {
  std::string s = "case,subcase,dx,dy,dz\n";
  for (const auto& t : ts)
    s += t.tag + "," + t.subcase + "," + std::to_string(t.dx) + "," + std::to_string(t.dy) + "," +
         std::to_string(t.dz) + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmrel: singular moduli, class groups and linear relations"};
  app.require_subcommand(1);

  std::string cache_flag, table_flag, out;
  long long d = 0;

  auto* forms = app.add_subcommand("forms", "reduced primitive forms of a discriminant (JSON)");
  forms->add_option("disc", d)->required();

  auto* classnum = app.add_subcommand("classnum", "class number, structure predicates (JSON)");
  classnum->add_option("disc", d)->required();

  auto* census = app.add_subcommand("census", "count of reduced forms by leading coefficient (JSON)");
  census->add_option("disc", d)->required();

  std::vector<long long> orbit_args;
  auto* orbit = app.add_subcommand("orbit", "simultaneous conjugates of a root triple (JSON)");
  orbit->add_option("args", orbit_args, "dx dy dz i j k")->required()->expected(6);

  std::vector<long long> abc;
  prec_t bits = 4096;
  auto* jval = app.add_subcommand("jval", "j at the CM point of a form");
  jval->add_option("form", abc, "a b c")->required()->expected(3);
  jval->add_option("--bits", bits, "target precision")->capture_default_str();

  auto* hcp = app.add_subcommand("hcp", "Hilbert class polynomial, cached");
  hcp->add_option("disc", d)->required();
  hcp->add_option("--cache-dir", cache_flag, "cache directory (default $CMREL_CACHE_DIR or ./cmrel_cache)");

  bool table = false;
  auto* bounds = app.add_subcommand("bounds", "explicit bound functions");
  bounds->add_flag("--table", table, "every constant for n = 1..10 as CSV");
  bounds->add_option("--out", out);

  std::string catalog;
  bool dump = false;
  auto* thresholds = app.add_subcommand("thresholds", "determinant-incompatibility thresholds and the (l, k) table");
  thresholds->add_option("--catalog", catalog, "scenario catalog (JSON); default built-in");
  thresholds->add_flag("--dump-catalog", dump, "print the built-in catalog as JSON");

  std::string case_tag;
  bool gen_table = false;
  std::string validate_table;
  bool certify = false;
  auto* sieve = app.add_subcommand("sieve", "candidate lists as CSV");
  sieve->add_option("--case", case_tag, "1a 1b 1c 2a 2b 2c 2d, or pairs");
  sieve->add_option("--abm15-table", table_flag, "equal-field table CSV (or $CMREL_ABM15_TABLE)");
  sieve->add_flag("--gen-table", gen_table, "write the generated equal-field table");
  sieve->add_option("--validate-table", validate_table, "check an equal-field table CSV");
  sieve->add_flag("--certify", certify, "with pairs/--validate-table: build membership witnesses");
  sieve->add_option("--cache-dir", cache_flag);
  sieve->add_option("--out", out);

  std::vector<long long> tri;
  std::string coeff = "2^128";
  bool certified_only = false;
  auto* check = app.add_subcommand("check-triple", "linear relations among moduli of three discriminants");
  check->add_option("discs", tri, "dx dy dz")->required()->expected(3);
  check->add_option("--bits", bits)->capture_default_str();
  check->add_option("--coeff-bound", coeff, "2^k or an integer")->capture_default_str();
  check->add_flag("--certified", certified_only, "report uncertified eliminations as indeterminate");
  check->add_option("--out", out);

  RunConfig rc;
  std::vector<std::string> cases;
  bool no_2d = false;
  std::size_t limit = 0;
  auto* run = app.add_subcommand("run-trip", "full elimination over every candidate triple");
  run->add_option("--bits", bits)->capture_default_str();
  run->add_option("--coeff-bound", coeff)->capture_default_str();
  run->add_option("--jobs", rc.jobs)->capture_default_str();
  run->add_option("--cache-dir", cache_flag);
  run->add_option("--abm15-table", table_flag);
  run->add_option("--case", cases, "restrict to these cases");
  run->add_flag("--no-2d", no_2d, "skip the supplementary (dx, 9dx, 9dx) list");
  run->add_option("--limit", limit, "stop after this many new triples");
  run->add_option("--out", out, "output directory")->default_str("cmrel_run");

  bool quick = false;
  auto* repro = app.add_subcommand("reproduce", "pass/fail matrix for the reproduced numbers");
  repro->add_flag("--quick", quick, "skip building the 873 membership witnesses");
  repro->add_option("--cache-dir", cache_flag);
  repro->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*forms) {
      json j = json::array();
      for (const auto& f : reduced_forms(d)) j.push_back(form_json(f));
      std::cout << j.dump() << "\n";
    } else if (*classnum) {
      auto [D, f] = fundamental_decomposition(d);
      json j{{"disc", d},
             {"class_number", class_number(d)},
             {"fundamental", D},
             {"conductor", f},
             {"omega", omega(d)},
             {"rho2", rho2(d)},
             {"two_torsion", two_torsion_count(d)},
             {"two_elementary", is_two_elementary(d)},
             {"almost_two_elementary", is_almost_two_elementary(d)},
             {"genus_field", field_label(positive_genus_basis(d))}};
      std::cout << j.dump() << "\n";
    } else if (*census) {
      json j = json::object();
      for (const auto& [a, n] : denominator_census(d)) j[std::to_string(a)] = n;
      std::cout << j.dump() << "\n";
    } else if (*orbit) {
      OrbitEngine eng(orbit_args[0], orbit_args[1], orbit_args[2]);
      IndexTriple base{static_cast<std::size_t>(orbit_args[3]), static_cast<std::size_t>(orbit_args[4]),
                       static_cast<std::size_t>(orbit_args[5])};
      for (int i = 0; i < 3; ++i)
        if (base[i] >= eng.group(i).size()) throw error("orbit: index out of range");
      json j = json::array();
      for (const auto& t : eng.orbit(base)) {
        json row = json::array();
        for (int i = 0; i < 3; ++i) row.push_back(form_json(eng.group(i).form(t[i])));
        j.push_back({{"indices", t}, {"forms", row}});
      }
      std::cout << j.dump() << "\n";
    } else if (*jval) {
      QuadForm f{abc[0], abc[1], abc[2]};
      if (!is_reduced(f)) throw error("jval: form is not reduced");
      auto m = singular_modulus(f, bits);
      int digits = static_cast<int>(static_cast<double>(bits) * 0.30103) + 1;
      digits = std::min(digits, 60);
      std::cout << "re " << m.value.re.to_string(digits) << "\n"
                << "im " << m.value.im.to_string(digits) << "\n";
    } else if (*hcp) {
      HilbertCache cache(cache_dir(cache_flag));
      HilbertPoly h = cache.get_or_compute(d);
      std::cout << h.str() << "\n";
    } else if (*bounds) {
      if (!table) throw error("bounds: only --table is supported");
      std::string s =
          "n,thm_equal_bound,thm_field_bound,stirling_upper,step4_bound,g_bound,c2_bound,"
          "class_floor_disc_cap\n";
      for (long n = 1; n <= 10; ++n) {
        mpz_class s4 = step4_bound(n);
        HugeValue s4h{log(Ball::from_mpz(s4, 256))};
        s += std::to_string(n) + "," + thm_equal_bound(n).to_string(12) + "," +
             thm_field_bound(n).to_string(12) + "," + stirling_upper(n).to_string(12) + "," +
             s4h.scientific(12) + "," + g_bound(n).scientific(8) + "," + c2_bound(n).scientific(8) +
             "," + class_floor_disc_cap(n).scientific(8) + "\n";
      }
      emit(s, out);
    } else if (*thresholds) {
      if (dump) {
        std::cout << catalog_to_json(default_catalog());
        return 0;
      }
      auto cat = catalog.empty() ? default_catalog() : load_catalog(catalog);
      bool all = true;
      std::cout << "scenario,convention,computed,published,status\n";
      for (const auto& s : cat) {
        ThresholdResult r = threshold(s);
        std::string pub = s.published ? std::to_string(*s.published) : "";
        std::string st = !s.published ? "-" : (r.certified && r.value <= *s.published ? "pass" : "FAIL");
        if (st == "FAIL") all = false;
        std::cout << s.id << "," << s.convention << "," << r.value << "," << pub << "," << st << "\n";
      }
      for (int k : table1_rows())
        std::cout << "a_min(" << k << ")," << "-," << a_min(k) << ",,"
                  << (a_min_consistency(k) ? "pass" : "FAIL") << "\n";
      return all ? 0 : 1;
    } else if (*sieve) {
      HilbertCache cache(cache_dir(cache_flag));
      if (gen_table) {
        auto rows = equal_field_table();
        if (out.empty()) {
          std::cout << "dx,dy,field\n";
          for (const auto& r : rows) std::cout << r.dx << "," << r.dy << ",\"" << r.label << "\"\n";
        } else {
          write_equal_field_csv(rows, out);
        }
      } else if (!validate_table.empty()) {
        auto problems = validate_equal_field_table(read_equal_field_csv(validate_table), certify, &cache);
        for (const auto& p : problems) std::cout << p << "\n";
        std::cout << (problems.empty() ? "ok" : "rejected") << "\n";
        return problems.empty() ? 0 : 1;
      } else if (case_tag == "pairs") {
        PairSearchOptions po;
        po.certify = certify;
        po.cache = &cache;
        std::string s = "dx,dy,status,witness_bits\n";
        for (const auto& p : difffundsub_pairs(po))
          s += std::to_string(p.dx) + "," + std::to_string(p.dy) + "," + p.status + "," +
               std::to_string(p.witness_bits) + "\n";
        emit(s, out);
      } else {
        CaseConfig cc;
        cc.abm15_table = table_path(table_flag);
        if (!case_tag.empty()) cc.cases = {case_tag};
        emit(csv_triples(case_lists(cc)), out);
      }
    } else if (*check) {
      RelationConfig cfg;
      cfg.bits = bits;
      cfg.coeff_bound_bits = parse_coeff_bound(coeff);
      cfg.certified_only = certified_only;
      auto rep = check_triple(tri[0], tri[1], tri[2], cfg);
      emit(to_json(rep).dump(2) + "\n", out);
      return rep.status == "indeterminate" ? 2 : 0;
    } else if (*run) {
      rc.bits = bits;
      rc.coeff_bound_bits = parse_coeff_bound(coeff);
      rc.cache_dir = cache_dir(cache_flag);
      rc.abm15_table = table_path(table_flag);
      rc.cases = cases;
      rc.include_2d = !no_2d;
      rc.max_triples = limit;
      rc.out = out.empty() ? "cmrel_run" : out;
      auto sum = run_trip(rc, [](std::size_t done, std::size_t total, const std::string& key) {
        std::cerr << "[" << done << "/" << total << "] " << key << "\n";
      });
      json j = sum.to_json();
      j["seconds"] = sum.seconds;
      std::cout << j.dump(2) << "\n";
      if (!sum.indeterminate.empty()) {
        std::cerr << "indeterminate triples; re-run with a larger --bits:\n";
        for (const auto& t : sum.indeterminate)
          std::cerr << "  " << t[0] << " " << t[1] << " " << t[2] << "\n";
      }
      return sum.success ? 0 : 1;
    } else if (*repro) {
      HilbertCache cache(cache_dir(cache_flag));
      ReproOptions ro;
      ro.certify_pairs = !quick;
      ro.cache = &cache;
      auto rows = reproduce_all(ro);
      bool all = true;
      std::string s = "criterion,name,expected,computed,status\n";
      for (const auto& r : rows) {
        all = all && r.pass;
        s += r.criterion + ",\"" + r.name + "\",\"" + r.expected + "\"," + r.computed + "," +
             (r.pass ? "pass" : "FAIL") + "\n";
      }
      emit(s, out);
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "cmrel: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
