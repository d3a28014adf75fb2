#include "cmrel/sieve.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "cmrel/errors.hpp"
#include "cmrel/genus.hpp"
#include "cmrel/relations.hpp"

namespace cmrel {

namespace {

const ClassNumberTable& shared_table(i64 max_abs) {
  static std::mutex mu;
  static std::unique_ptr<ClassNumberTable> table;
  std::lock_guard<std::mutex> lk(mu);
  if (!table || table->max_abs() < max_abs)
    table = std::make_unique<ClassNumberTable>(std::max<i64>(max_abs, 166147));
  return *table;
}

i64 fund(i64 d) { return fundamental_decomposition(d).first; }

HilbertPoly poly_for(i64 d, const HilbertCache* cache) {
  return cache ? cache->get_or_compute(d) : hilbert_class_poly(d);
}

/* caps for the small-class-number cases */
constexpr i64 kCap6 = 4075;

}  // namespace

i64 max_disc_with_class_at_most(const ClassNumberTable& table, i64 k, i64 cap) {
  if (cap < 3) throw error("max_disc_with_class_at_most: cap must be >= 3");
  if (cap > table.max_abs()) throw error("max_disc_with_class_at_most: cap beyond table");
  for (i64 n = cap; n >= 3; --n) {
    if (!is_discriminant(-n)) continue;
    i64 h = table(-n);
    if (h > 0 && h <= k) return n;
  }
  return 0;
}

i64 max_disc_with_class_at_most(i64 k, i64 cap) {
  if (cap < 3) throw error("max_disc_with_class_at_most: cap must be >= 3");
  ClassNumberTable table(cap);
  return max_disc_with_class_at_most(table, k, cap);
}

bool lemma21_check() {
  for (i64 n = 3; n < 39; ++n) {
    if (!is_discriminant(-n)) continue;
    i64 h = class_number(-n);
    if (n < 15 && h != 1) return false;
    if (h > 3) return false;
  }
  return true;
}

bool grey_cell_check(const mpq_class& l, i64 k, i64 b) {
  bool three_halves = l == mpq_class(3, 2);
  for (i64 n = 3; n <= b; ++n) {
    i64 d = -n;
    if (!is_discriminant(d)) continue;
    if (three_halves && mod(d, 16) != 0 && mod(d, 16) != 4) continue;
    if (class_number(d) >= k) return false;
  }
  return true;
}

std::vector<FieldPair> difffundsub_pairs(const PairSearchOptions& opt) {
  const ClassNumberTable& table = shared_table(opt.max_abs);
  struct Entry {
    i64 d, h;
    std::vector<i64> splus;
  };
  std::vector<Entry> ys, xs;
  for (i64 n = 3; n <= opt.max_abs; ++n) {
    i64 d = -n;
    if (!is_discriminant(d)) continue;
    i64 h = table(d);
    if (h <= opt.max_hy && is_almost_two_elementary(d, h))
      ys.push_back({d, h, positive_genus_classes(d)});
    if (h <= opt.max_hx && is_two_elementary(d, h)) xs.push_back({d, h, positive_genus_classes(d)});
  }
  std::vector<FieldPair> out;
  for (const auto& y : ys)
    for (const auto& x : xs) {
      if (y.h != 2 * x.h) continue;
      if (fund(x.d) == fund(y.d)) continue;
      if (!is_subset(x.splus, y.splus)) continue;
      out.push_back({x.d, y.d, "selected", 0});
    }
  std::sort(out.begin(), out.end(), [](const FieldPair& a, const FieldPair& b) {
    return std::make_pair(-a.dy, -a.dx) < std::make_pair(-b.dy, -b.dx);
  });
  if (!opt.certify) return out;

  std::map<i64, HilbertPoly> polys;
  auto poly = [&](i64 d) -> const HilbertPoly& {
    auto it = polys.find(d);
    if (it == polys.end()) it = polys.emplace(d, poly_for(d, opt.cache)).first;
    return it->second;
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& p = out[i];
    try {
      auto w = subfield_witness(poly(p.dx), poly(p.dy), align_by_genus(p.dx, p.dy));
      p.witness_bits = w.bits;
      p.status = w.certified ? "certified" : "indeterminate: " + w.reason;
    } catch (const std::exception& e) {
      p.status = std::string("indeterminate: ") + e.what();
    }
    if (opt.progress) opt.progress(i + 1, out.size());
  }
  return out;
}

std::vector<EqualFieldRow> equal_field_table(i64 min_h, i64 max_abs) {
  const ClassNumberTable& table = shared_table(max_abs);
  std::map<std::vector<i64>, std::vector<i64>> groups;
  for (i64 n = 3; n <= max_abs; ++n) {
    i64 d = -n;
    if (!is_discriminant(d)) continue;
    i64 h = table(d);
    if (h < min_h || !is_two_elementary(d, h)) continue;
    groups[positive_genus_classes(d)].push_back(d);
  }
  std::vector<EqualFieldRow> rows;
  for (const auto& [splus, ds] : groups) {
    std::string label = field_label(positive_genus_basis(ds.front()));
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = i + 1; j < ds.size(); ++j)
        if (fund(ds[i]) != fund(ds[j])) rows.push_back({ds[i], ds[j], label});
  }
  std::sort(rows.begin(), rows.end(), [](const EqualFieldRow& a, const EqualFieldRow& b) {
    return std::make_tuple(a.label.size(), a.label, -a.dx, -a.dy) <
           std::make_tuple(b.label.size(), b.label, -b.dx, -b.dy);
  });
  return rows;
}

void write_equal_field_csv(const std::vector<EqualFieldRow>& rows, const std::filesystem::path& out) {
  std::ofstream f(out);
  if (!f) throw error("cannot write " + out.string());
  f << "dx,dy,field\n";
  for (const auto& r : rows) f << r.dx << "," << r.dy << ",\"" << r.label << "\"\n";
}

std::vector<EqualFieldRow> read_equal_field_csv(const std::filesystem::path& in) {
  std::ifstream f(in);
  if (!f) throw missing_table("cannot read equal-field table " + in.string());
  std::vector<EqualFieldRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto c1 = line.find(',');
    auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw error(in.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
    std::string a = line.substr(0, c1), b = line.substr(c1 + 1, c2 - c1 - 1), lab = line.substr(c2 + 1);
    if (lineno == 1 && !a.empty() && !std::isdigit(static_cast<unsigned char>(a.back()))) continue;
    if (lab.size() >= 2 && lab.front() == '"' && lab.back() == '"') lab = lab.substr(1, lab.size() - 2);
    try {
      rows.push_back({std::stoll(a), std::stoll(b), lab});
    } catch (const std::exception&) {
      throw error(in.string() + ":" + std::to_string(lineno) + ": bad discriminant");
    }
  }
  return rows;
}

std::vector<std::string> validate_equal_field_table(const std::vector<EqualFieldRow>& rows,
                                                    bool certify, const HilbertCache* cache) {
  std::vector<std::string> problems;
  std::map<i64, HilbertPoly> polys;
  for (const auto& r : rows) {
    std::string tag = "(" + std::to_string(r.dx) + ", " + std::to_string(r.dy) + "): ";
    if (!is_discriminant(r.dx) || !is_discriminant(r.dy)) {
      problems.push_back(tag + "not a discriminant");
      continue;
    }
    if (!is_two_elementary(r.dx) || !is_two_elementary(r.dy)) {
      problems.push_back(tag + "not 2-elementary");
      continue;
    }
    if (class_number(r.dx) != class_number(r.dy)) problems.push_back(tag + "class numbers differ");
    if (fund(r.dx) == fund(r.dy)) problems.push_back(tag + "same fundamental discriminant");
    if (positive_genus_classes(r.dx) != positive_genus_classes(r.dy))
      problems.push_back(tag + "real genus fields differ");
    std::string lab = field_label(positive_genus_basis(r.dx));
    if (lab != r.label) problems.push_back(tag + "label " + r.label + " but field is " + lab);
    if (certify && problems.empty()) {
      for (i64 d : {r.dx, r.dy})
        if (!polys.count(d)) polys.emplace(d, poly_for(d, cache));
      auto w = subfield_witness(polys.at(r.dx), polys.at(r.dy), align_by_genus(r.dx, r.dy));
      if (!w.certified) problems.push_back(tag + "membership witness failed: " + w.reason);
    }
  }
  return problems;
}

bool CandidateTriple::operator<(const CandidateTriple& o) const {
  return std::make_tuple(tag, -dx, -dy, -dz) < std::make_tuple(o.tag, -o.dx, -o.dy, -o.dz);
}

bool CandidateTriple::operator==(const CandidateTriple& o) const {
  return tag == o.tag && dx == o.dx && dy == o.dy && dz == o.dz;
}

namespace {

std::string sub_2a(i64 dx) {
  i64 h = class_number(dx), n = -dx;
  if (h <= 6) return "i";
  if ((h == 7 || h == 8) && n <= 5879) return "ii";
  if ((h == 9 || h == 10) && n <= 1557) return "iii";
  if (h >= 11 && h <= 14 && n <= 790) return "iv";
  return "";
}

std::string sub_2b(i64 dx) {
  i64 h = class_number(dx), n = -dx;
  if (h <= 4) return "i";
  if ((h == 5 || h == 6) && n <= 304) return "ii";
  return "";
}

bool one_mod_8(i64 d) { return mod(d, 8) == 1; }

std::vector<CandidateTriple> from_equal_field(const std::vector<EqualFieldRow>& rows) {
  std::map<std::string, std::set<i64>> groups;
  for (const auto& r : rows) {
    groups[r.label].insert(r.dx);
    groups[r.label].insert(r.dy);
  }
  std::vector<CandidateTriple> out;
  for (const auto& [label, set] : groups) {
    std::vector<i64> ds(set.rbegin(), set.rend());
    if (ds.empty() || class_number(ds.front()) < 3) continue;
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = i; j < ds.size(); ++j)
        for (std::size_t k = j; k < ds.size(); ++k) {
          i64 a = ds[i], b = ds[j], c = ds[k];
          if (fund(a) == fund(b) && fund(b) == fund(c)) continue;
          out.push_back({a, b, c, "1c", label});
        }
  }
  return out;
}

}  // namespace

bool in_case(const CandidateTriple& t) {
  auto disc = [](i64 d) { return d < 0 && is_discriminant(d); };
  if (!disc(t.dx) || !disc(t.dy) || !disc(t.dz)) return false;
  if (t.tag == "1a") {
    i64 d = t.dy;
    return t.dz == d && t.dx == 4 * d && one_mod_8(d) && class_number(d) <= 6;
  }
  if (t.tag == "1b") {
    i64 d = t.dz;
    return t.dx == 4 * d && t.dy == 4 * d && one_mod_8(d) && class_number(d) <= 5;
  }
  if (t.tag == "2a")
    return t.dy == t.dz && 9 * t.dx == 4 * t.dy && (mod(t.dx, 16) == 0 || mod(t.dx, 16) == 4) &&
           !sub_2a(t.dx).empty();
  if (t.tag == "2b") return t.dy == t.dz && 4 * t.dx == t.dy && !sub_2b(t.dx).empty();
  if (t.tag == "2c") {
    if (t.dy != t.dz || fund(t.dx) == fund(t.dy)) return false;
    i64 hx = class_number(t.dx), hy = class_number(t.dy);
    return hy == 2 * hx && hy <= 32 && is_two_elementary(t.dx, hx) &&
           is_almost_two_elementary(t.dy, hy) &&
           is_subset(positive_genus_classes(t.dx), positive_genus_classes(t.dy));
  }
  if (t.tag == "2d")
    return t.dy == t.dz && t.dy == 9 * t.dx && -t.dx <= 47 && class_number(t.dx) >= 3;
  if (t.tag == "1c") {
    std::array<i64, 3> ds{t.dx, t.dy, t.dz};
    for (i64 d : ds)
      if (!is_two_elementary(d)) return false;
    auto s = positive_genus_classes(t.dx);
    return class_number(t.dx) >= 3 && positive_genus_classes(t.dy) == s &&
           positive_genus_classes(t.dz) == s && class_number(t.dy) == class_number(t.dx) &&
           class_number(t.dz) == class_number(t.dx) &&
           !(fund(t.dx) == fund(t.dy) && fund(t.dy) == fund(t.dz));
  }
  return false;
}

std::vector<CandidateTriple> case_list(const std::string& tag, const CaseConfig& cfg) {
  std::vector<CandidateTriple> out;
  if (tag == "1a" || tag == "1b") {
    i64 hmax = tag == "1a" ? 6 : 5;
    for (i64 n = 3; n <= kCap6; ++n) {
      i64 d = -n;
      if (!one_mod_8(d) || class_number(d) > hmax) continue;
      if (tag == "1a")
        out.push_back({4 * d, d, d, tag, "h=" + std::to_string(class_number(d))});
      else
        out.push_back({4 * d, 4 * d, d, tag, "h=" + std::to_string(class_number(d))});
    }
  } else if (tag == "2a") {
    for (i64 n = 4; n <= 5879; n += 4) {
      i64 d = -n;
      if (mod(d, 16) != 0 && mod(d, 16) != 4) continue;
      auto s = sub_2a(d);
      if (s.empty()) continue;
      out.push_back({d, 9 * d / 4, 9 * d / 4, tag, s});
    }
  } else if (tag == "2b") {
    for (i64 n = 3; n <= kCap6; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto s = sub_2b(d);
      if (s.empty()) continue;
      out.push_back({d, 4 * d, 4 * d, tag, s});
    }
  } else if (tag == "2c") {
    PairSearchOptions opt;
    opt.certify = false;
    for (const auto& p : difffundsub_pairs(opt)) out.push_back({p.dx, p.dy, p.dy, tag, ""});
  } else if (tag == "2d") {
    if (cfg.include_2d)
      for (i64 n = 3; n <= 47; ++n) {
        i64 d = -n;
        if (!is_discriminant(d) || class_number(d) < 3) continue;
        out.push_back({d, 9 * d, 9 * d, tag, "h=" + std::to_string(class_number(d))});
      }
  } else if (tag == "1c") {
    auto rows = cfg.abm15_table ? read_equal_field_csv(*cfg.abm15_table) : equal_field_table();
    out = from_equal_field(rows);
  } else {
    throw error("unknown case tag " + tag);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CandidateTriple> case_lists(const CaseConfig& cfg) {
  std::vector<std::string> tags = cfg.cases;
  if (tags.empty()) tags = {"1a", "1b", "1c", "2a", "2b", "2c", "2d"};
  std::vector<CandidateTriple> out;
  for (const auto& t : tags) {
    auto part = case_list(t, cfg);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace cmrel
