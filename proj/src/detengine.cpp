#include "cmrel/detengine.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cmrel/errors.hpp"

namespace cmrel {

namespace {

Ball qball(const mpq_class& q, prec_t p) {
  return Ball::from_ratio(q.get_num(), q.get_den(), p);
}

BoundTerm term(long num, long den, int sign) {
  mpq_class c(num, den);
  c.canonicalize();
  return {c, sign};
}

std::string describe(const BoundProduct& e) {
  std::ostringstream os;
  if (e.prefactor != 1) os << e.prefactor.get_str() << " ";
  if (e.inverse_power) os << "|d|^-" << e.inverse_power << " ";
  for (const auto& t : e.terms)
    os << "(exp(" << (t.c == 1 ? "" : t.c.get_str() + " ") << "pi r) " << (t.sign > 0 ? "+" : "-") << " 2079)";
  return os.str();
}

/* "lower vs m1*[upper1] + ..." with r = |d|^(1/2) */
std::string describe(const Scenario& s) {
  std::string out = describe(s.lower) + " vs ";
  for (std::size_t i = 0; i < s.uppers.size(); ++i) {
    if (i) out += " + ";
    if (s.uppers[i].multiplicity != 1) out += std::to_string(s.uppers[i].multiplicity) + "*";
    out += "[" + describe(s.uppers[i].product) + "]";
  }
  return out;
}

bool passes_filter(const Scenario& s, long abs_d) {
  long r = ((-abs_d) % s.filter_mod + s.filter_mod) % s.filter_mod;
  for (long x : s.filter_residues)
    if (x == r) return true;
  return false;
}

/* true if lower > sum(uppers) certified, false if lower <= sum certified, throws otherwise */
int compare_at(const Scenario& s, long n, prec_t p) {
  Ball lo = eval_expr(s.lower, n, p);
  Ball up = eval_uppers(s, n, p);
  if (certainly_gt(lo, up)) return 1;
  if (!certainly_gt(lo, up) && !(lo.overlaps(up))) return 0;
  return -1;
}

/*
 * For t = pi sqrt|d| >= t0 the ratio lower / sum(uppers) is at least
 * K(t0) * t^(-2k) e^(gap t), increasing once t > 2k/gap.  Returns true
 * if that lower bound exceeds 1 at t0.
 */
bool tail_certified(const Scenario& s, long n0, prec_t p) {
  const mpq_class lexp = s.lower.exponent();
  mpq_class umax = 0;
  for (const auto& u : s.uppers) umax = std::max(umax, u.product.exponent());
  const mpq_class gap = lexp - umax;
  Ball pi = Ball::pi(p);
  Ball t0 = pi * sqrt(Ball::from_si(n0, p));
  const int k2 = 2 * s.lower.inverse_power;
  if (k2 > 0 && !certainly_gt(t0 * qball(gap, p), Ball::from_si(k2, p))) return false;

  /* lower >= pre * (t/pi)^(-2k) * prod(1 - 2079 e^(-c t0)) e^(L t)   (sign -) */
  Ball lowfac = qball(s.lower.prefactor, p);
  for (const auto& tm : s.lower.terms) {
    Ball f = Ball::from_si(1, p) + Ball::from_si(2079 * tm.sign, p) * exp(-(qball(tm.c, p) * t0));
    if (!f.is_positive()) return false;
    /* sign + factors are >= 1 */
    if (tm.sign < 0) lowfac = lowfac * f;
  }
  /* sum_u m_u prod(1 + 2079 e^(-c t0)) e^(U_u t) <= e^(umax t) * sum(...) */
  Ball upfac(p);
  for (const auto& u : s.uppers) {
    Ball f = Ball::from_si(u.multiplicity, p);
    for (const auto& tm : u.product.terms) {
      if (tm.sign > 0)
        f = f * (Ball::from_si(1, p) + Ball::from_si(2079, p) * exp(-(qball(tm.c, p) * t0)));
    }
    upfac = upfac + f;
  }
  Ball ratio = lowfac / upfac * exp(qball(gap, p) * t0);
  if (k2 > 0) ratio = ratio * pow_ui(pi, k2) / pow_ui(t0, k2);
  return certainly_gt(ratio, Ball::from_si(1, p));
}

}  // namespace

mpq_class BoundProduct::exponent() const {
  mpq_class e = 0;
  for (const auto& t : terms) e += t.c;
  return e;
}

Ball eval_expr(const BoundProduct& e, long abs_d, prec_t p) {
  Ball s = Ball::pi(p) * sqrt(Ball::from_si(abs_d, p));
  Ball v = qball(e.prefactor, p);
  for (const auto& t : e.terms) v = v * (exp(qball(t.c, p) * s) + 2079L * t.sign);
  if (e.inverse_power > 0)
    v = v / pow_ui(Ball::from_si(abs_d, p), static_cast<unsigned long>(e.inverse_power));
  return v;
}

Ball eval_uppers(const Scenario& s, long abs_d, prec_t p) {
  Ball acc(p);
  for (const auto& u : s.uppers) acc = acc + eval_expr(u.product, abs_d, p) * u.multiplicity;
  return acc;
}

bool dominance_holds(const Scenario& s) {
  mpq_class l = s.lower.exponent();
  for (const auto& u : s.uppers)
    if (u.product.exponent() >= l) return false;
  return !s.uppers.empty();
}

ThresholdResult threshold(const Scenario& s, prec_t p) {
  if (!dominance_holds(s))
    throw error("threshold: asymptotic dominance fails for scenario " + s.id);
  ThresholdResult r;
  long grid = 64;
  long n = 1;
  for (;;) {
    for (; n <= grid; ++n) {
      int c = -1;
      for (prec_t q = p; q <= 16 * p && c < 0; q *= 2) c = compare_at(s, n, q);
      if (c < 0) throw precision_error("threshold: undecided at |d| = " + std::to_string(n));
      if (c == 0) {
        r.last_failure = n;
        if (passes_filter(s, n)) r.last_failure_filtered = n;
      }
    }
    if (grid >= 2 * (r.last_failure + 1) && tail_certified(s, grid, p)) break;
    grid *= 2;
    if (grid > (1L << 40)) throw precision_error("threshold: tail not certified");
  }
  r.grid_end = grid;
  r.certified = true;
  r.value = s.convention == "claim" ? r.last_failure + 1 : r.last_failure;
  return r;
}

int a_min(int k) {
  static const std::map<int, int> m{{3, 2}, {5, 3}, {7, 4}, {9, 5}, {11, 6}, {15, 7}};
  auto it = m.find(k);
  if (it == m.end()) throw error("a_min: k outside {3,5,7,9,11,15}");
  return it->second;
}

const std::vector<int>& table1_rows() {
  static const std::vector<int> r{3, 5, 7, 9, 11, 15};
  return r;
}

const std::vector<mpq_class>& table1_columns() {
  static const std::vector<mpq_class> c{mpq_class(3, 2), mpq_class(2), mpq_class(3),
                                        mpq_class(4)};
  return c;
}

static std::string qstr(const mpq_class& q) { return q.get_str(); }

Scenario cell_scenario(const mpq_class& l, int k) {
  const int a = a_min(k);
  auto T = [](const mpq_class& c, int sign) {
    mpq_class cc = c;
    cc.canonicalize();
    return BoundTerm{cc, sign};
  };
  Scenario s;
  s.id = "cell-l" + qstr(l) + "-k" + std::to_string(k);
  s.lower.prefactor = 800;
  s.lower.inverse_power = 4;
  s.lower.terms = {T(l, -1), T(l, -1)};
  s.uppers = {
      {8, {1, 0, {T(1, 1), T(l, 1), T(l / a, 1)}}},
      {2, {1, 0, {T(mpq_class(1, 2), 1), T(l / 2, 1), T(l / 2, 1)}}},
      {12, {1, 0, {T(1, 1), T(l / 2, 1), T(l / a, 1)}}},
  };
  if (l == mpq_class(3, 2)) {
    s.filter_mod = 16;
    s.filter_residues = {0, 4};
  }
  s.convention = "table";
  static const std::map<std::pair<std::string, int>, long> published_cells{
      {{"3", 3}, 2},     {{"4", 3}, 0},     {{"2", 5}, 304},  {{"3/2", 7}, 5879},
      {{"2", 7}, 49},    {{"3/2", 9}, 1557}, {{"3/2", 11}, 790}, {{"3/2", 15}, 515}};
  auto it = published_cells.find({qstr(l), k});
  if (it != published_cells.end()) s.published = it->second;
  s.description = describe(s);
  return s;
}

std::vector<Scenario> default_catalog() {
  std::vector<Scenario> cat;
  {
    Scenario s;
    s.id = "mod8-first";
    s.lower.terms = {term(2, 1, -1), term(1, 1, -1), term(1, 1, -1)};
    s.uppers = {{5, {1, 0, {term(2, 1, 1), term(1, 1, 1), term(1, 2, 1)}}},
                {18, {1, 0, {term(2, 3, 1), term(1, 1, 1), term(1, 1, 1)}}}};
    s.filter_mod = 8;
    s.filter_residues = {1};
    s.convention = "claim";
    s.published = 10;
    s.description = describe(s);
    cat.push_back(s);
  }
  {
    Scenario s;
    s.id = "mod8-second";
    s.lower.terms = {term(2, 1, -1), term(1, 2, -1), term(1, 1, -1)};
    s.uppers = {{18, {1, 0, {term(2, 3, 1), term(1, 1, 1), term(1, 1, 1)}}},
                {1, {1, 0, {term(2, 1, 1), term(1, 3, 1), term(1, 1, 1)}}},
                {4, {1, 0, {term(2, 1, 1), term(1, 2, 1), term(1, 2, 1)}}}};
    s.filter_mod = 8;
    s.filter_residues = {1};
    s.convention = "claim";
    s.published = 32;
    s.description = describe(s);
    cat.push_back(s);
  }
  {
    Scenario s;
    s.id = "mod8-third";
    s.lower.terms = {term(2, 1, -1), term(2, 1, -1), term(1, 2, -1)};
    s.uppers = {{1, {1, 0, {term(2, 1, 1), term(2, 1, 1), term(1, 3, 1)}}},
                {22, {1, 0, {term(2, 1, 1), term(2, 3, 1), term(1, 1, 1)}}}};
    s.filter_mod = 8;
    s.filter_residues = {1};
    s.convention = "claim";
    s.published = 29;
    s.description = describe(s);
    cat.push_back(s);
  }
  for (const auto& l : table1_columns()) {
    Scenario s;
    s.id = "uniform-l" + qstr(l);
    mpq_class l2 = l / 2;
    l2.canonicalize();
    s.lower.terms = {term(1, 1, -1), {l, -1}, {l, -1}};
    s.uppers = {{1, {1, 0, {term(1, 2, 1), {l, 1}, {l, 1}}}},
                {22, {1, 0, {term(1, 1, 1), {l, 1}, {l2, 1}}}}};
    s.convention = "claim";
    s.published = 8;
    s.description = describe(s);
    cat.push_back(s);
  }
  for (int k : table1_rows())
    for (const auto& l : table1_columns()) {
      Scenario s = cell_scenario(l, k);
      if (dominance_holds(s)) cat.push_back(s);
    }
  return cat;
}

using nlohmann::json;

static json product_json(const BoundProduct& p) {
  json terms = json::array();
  for (const auto& t : p.terms) terms.push_back({{"c", t.c.get_str()}, {"sign", t.sign}});
  return {{"prefactor", p.prefactor.get_str()}, {"inverse_power", p.inverse_power},
          {"terms", terms}};
}

static BoundProduct product_from(const json& j) {
  BoundProduct p;
  p.prefactor = mpq_class(j.value("prefactor", std::string("1")));
  p.prefactor.canonicalize();
  p.inverse_power = j.value("inverse_power", 0);
  for (const auto& t : j.at("terms")) {
    mpq_class c(t.at("c").get<std::string>());
    c.canonicalize();
    p.terms.push_back({c, t.at("sign").get<int>()});
  }
  return p;
}

std::string catalog_to_json(const std::vector<Scenario>& cat) {
  json arr = json::array();
  for (const auto& s : cat) {
    json u = json::array();
    for (const auto& w : s.uppers)
      u.push_back({{"multiplicity", w.multiplicity}, {"product", product_json(w.product)}});
    json e = {{"id", s.id},
              {"description", s.description},
              {"lower", product_json(s.lower)},
              {"uppers", u},
              {"filter", {{"mod", s.filter_mod}, {"residues", s.filter_residues}}},
              {"convention", s.convention}};
    e["published"] = s.published ? json(*s.published) : json(nullptr);
    arr.push_back(e);
  }
  return json{{"scenarios", arr}}.dump(2) + "\n";
}

std::vector<Scenario> catalog_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<Scenario> out;
  for (const auto& e : j.at("scenarios")) {
    Scenario s;
    s.id = e.at("id");
    s.description = e.value("description", "");
    s.lower = product_from(e.at("lower"));
    for (const auto& u : e.at("uppers"))
      s.uppers.push_back({u.at("multiplicity").get<long>(), product_from(u.at("product"))});
    s.filter_mod = e.at("filter").at("mod");
    s.filter_residues = e.at("filter").at("residues").get<std::vector<long>>();
    s.convention = e.value("convention", "table");
    if (e.contains("published") && !e.at("published").is_null())
      s.published = e.at("published").get<long>();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot read scenario catalog " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return catalog_from_json(ss.str());
}

Table1Cell table1(const mpq_class& l, int k) {
  bool valid_l = false;
  for (const auto& c : table1_columns()) valid_l |= (c == l);
  if (!valid_l) throw error("table1: l outside {3/2, 2, 3, 4}");
  Table1Cell cell;
  cell.l = l;
  cell.k = k;
  cell.a_min = a_min(k);
  Scenario s = cell_scenario(l, k);
  cell.published = s.published;
  cell.is_published = s.published.has_value();
  if (dominance_holds(s)) cell.value = threshold(s).value;
  return cell;
}

bool a_min_consistency(int k) {
  static const int max_count[] = {0, 1, 2, 2, 2, 2, 4};
  int am = a_min(k);
  int total = 0;
  for (int a = 1; a < am; ++a) total += max_count[a];
  return total == k - 2;
}

}  // namespace cmrel
