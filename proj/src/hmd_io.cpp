#include "ggdrift/hmd_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ggdrift/draws_io.hpp"
#include "ggdrift/errors.hpp"

namespace ggdrift::io {

namespace {

constexpr int kOpenAge = 110;

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::optional<double> value_field(const std::string& tok, std::size_t line_no) {
  if (tok == ".") return std::nullopt;
  double v = 0.0;
  if (!parse_double(tok, v)) throw ParseError("non-numeric value '" + tok + "'", line_no);
  return v;
}

bool parse_int(const std::string& tok, int& out) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

bool is_header(const std::vector<std::string>& t) {
  return t.size() == 5 && t[0] == "Year" && t[1] == "Age";
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string field_text(const std::optional<double>& v) { return v ? shortest(*v) : "."; }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

HmdTable parse_hmd(const std::string& content, const std::string& path) {
  HmdTable table;
  table.path = path;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = tokens(line);
    if (!header) {
      if (is_header(t)) {
        header = true;
      } else if (line_no > 5) {
        throw ParseError("missing 'Year Age Female Male Total' header", line_no);
      } else if (table.title.empty() && !t.empty()) {
        table.title = line;
        table.country = line.substr(0, line.find(','));
        while (!table.country.empty() && table.country.back() == ' ') table.country.pop_back();
      }
      continue;
    }
    if (t.empty()) continue;
    if (t.size() != 5) throw ParseError("expected 5 fields, got " + std::to_string(t.size()), line_no);
    HmdRecord r;
    if (!parse_int(t[0], r.year)) throw ParseError("bad year '" + t[0] + "'", line_no);
    if (t[1] == "110+") {
      r.age = kOpenAge;
      r.open_age = true;
    } else if (!parse_int(t[1], r.age) || r.age < 0 || r.age >= kOpenAge) {
      throw ParseError("bad age '" + t[1] + "'", line_no);
    }
    r.female = value_field(t[2], line_no);
    r.male = value_field(t[3], line_no);
    r.total = value_field(t[4], line_no);
    table.records.push_back(r);
  }
  if (!header) throw ParseError("missing 'Year Age Female Male Total' header", line_no);
  return table;
}

HmdTable read_hmd(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_hmd(ss.str(), path);
}

std::string serialize_hmd(const HmdTable& table) {
  std::ostringstream os;
  os << (table.title.empty() ? (table.country.empty() ? "Unknown" : table.country) + ", cohort table" : table.title)
     << "\n\n";
  os << "   Year          Age             Female            Male           Total\n";
  for (const auto& r : table.records) {
    os << pad(std::to_string(r.year), 7) << pad(r.open_age ? "110+" : std::to_string(r.age), 13)
       << pad(field_text(r.female), 19) << pad(field_text(r.male), 16) << pad(field_text(r.total), 16) << '\n';
  }
  return os.str();
}

Sex parse_sex(const std::string& s) {
  if (s == "female" || s == "Female" || s == "f") return Sex::Female;
  if (s == "male" || s == "Male" || s == "m") return Sex::Male;
  throw ArgumentError("sex must be 'female' or 'male', got '" + s + "'");
}

std::string to_string(Sex s) { return s == Sex::Female ? "female" : "male"; }

SelectionRule SelectionRule::sanctioned(int start_age) {
  switch (start_age) {
    case 50: return {50, 50, false};
    case 60: return {60, 40, false};
    case 70: return {70, 30, false};
    case 80: return {80, 20, false};
    default: throw ArgumentError("no sanctioned rule for start age " + std::to_string(start_age));
  }
}

void SelectionRule::validate() const {
  if (start_age < 0 || start_age >= kOpenAge) throw ArgumentError("selection.start_age must lie in [0, 110)");
  if (min_age_groups < 1 || min_age_groups > kOpenAge - start_age)
    throw ArgumentError("selection.min_age_groups must lie in [1, " + std::to_string(kOpenAge - start_age) + "]");
  if (overridden) return;
  const bool ok = (start_age == 50 && min_age_groups == 50) || (start_age == 60 && min_age_groups == 40) ||
                  (start_age == 70 && min_age_groups == 30) || (start_age == 80 && min_age_groups == 20);
  if (!ok) throw ArgumentError("selection rule (" + std::to_string(start_age) + ", " + std::to_string(min_age_groups) +
                               ") is not sanctioned; set overridden to use it");
}

DatasetBuild build_dataset(const HmdTable& deaths, const HmdTable& exposures, Sex sex, const SelectionRule& rule) {
  rule.validate();
  if (!deaths.country.empty() && !exposures.country.empty() && deaths.country != exposures.country)
    throw ArgumentError("deaths table is for '" + deaths.country + "' but exposures are for '" + exposures.country + "'");
  const auto pick = [sex](const HmdRecord& r) { return sex == Sex::Female ? r.female : r.male; };
  const int K = kOpenAge - rule.start_age;

  struct Cell {
    std::optional<double> d;
    std::optional<double> e;
  };
  std::map<int, std::vector<Cell>> by_cohort;
  const auto slot = [&](const HmdRecord& r) -> Cell* {
    if (r.open_age || r.age < rule.start_age) return nullptr;
    auto& row = by_cohort[r.year];
    if (row.empty()) row.resize(static_cast<std::size_t>(K));
    return &row[static_cast<std::size_t>(r.age - rule.start_age)];
  };
  for (const auto& r : deaths.records)
    if (auto* c = slot(r)) c->d = pick(r);
  for (const auto& r : exposures.records)
    if (auto* c = slot(r)) c->e = pick(r);

  DatasetBuild out;
  std::vector<int> cohorts;
  std::vector<std::int64_t> D;
  std::vector<double> E;
  std::vector<std::uint8_t> M;
  for (const auto& [year, row] : by_cohort) {
    int observed = 0;
    for (const auto& c : row)
      if (c.d && c.e && *c.e > 0.0) ++observed;
    if (observed < rule.min_age_groups) {
      out.excluded_cohorts.push_back(year);
      continue;
    }
    cohorts.push_back(year);
    for (const auto& c : row) {
      const bool ok = c.d && c.e && *c.e > 0.0;
      if (!ok) {
        if (c.d && *c.d != 0.0) ++out.forced_zeros;
        D.push_back(0);
        E.push_back(0.0);
        M.push_back(0);
        continue;
      }
      if (*c.d < 0.0 || *c.e < 0.0) throw ArgumentError("negative count for cohort " + std::to_string(year));
      const double rounded = std::round(*c.d);
      out.rounding_delta += std::abs(*c.d - rounded);
      D.push_back(static_cast<std::int64_t>(rounded));
      E.push_back(*c.e);
      M.push_back(1);
    }
  }
  if (cohorts.empty())
    throw SelectionError("no cohort has " + std::to_string(rule.min_age_groups) + " observed ages at or above " +
                         std::to_string(rule.start_age));
  out.data = CohortDataset({rule.start_age, K}, std::move(cohorts), std::move(D), std::move(E), std::move(M));
  out.data.country = deaths.country.empty() ? exposures.country : deaths.country;
  out.data.sex = to_string(sex);
  return out;
}

void write_dataset_csv(std::ostream& os, const CohortDataset& data) {
  os << "cohort,age,deaths,exposure,mask\n";
  const int start = data.grid().start_age;
  for (std::size_t t = 0; t < data.n_cohorts(); ++t) {
    const auto d = data.deaths(t);
    const auto e = data.exposures(t);
    const auto m = data.mask(t);
    for (std::size_t k = 0; k < data.n_ages(); ++k)
      os << data.cohorts()[t] << ',' << start + static_cast<int>(k) << ',' << d[k] << ',' << shortest(e[k]) << ','
         << static_cast<int>(m[k]) << '\n';
  }
}

void write_dataset_csv(const std::string& path, const CohortDataset& data) {
  std::ofstream os(path);
  if (!os) throw ArgumentError("cannot write " + path);
  write_dataset_csv(os, data);
}

CohortDataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty dataset file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "cohort,age,deaths,exposure,mask") throw ParseError("header must be cohort,age,deaths,exposure,mask", 1);
  struct Row {
    int cohort;
    int age;
    double deaths;
    double exposure;
    int mask;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw ParseError("expected 5 fields", line_no);
    Row r{};
    double mask = 0.0;
    if (!parse_int(f[0], r.cohort) || !parse_int(f[1], r.age)) throw ParseError("bad cohort or age", line_no);
    if (!parse_double(f[2], r.deaths) || !parse_double(f[3], r.exposure) || !parse_double(f[4], mask))
      throw ParseError("non-numeric value", line_no);
    if (mask != 0.0 && mask != 1.0) throw ParseError("mask must be 0 or 1", line_no);
    if (r.deaths < 0.0 || r.deaths != std::floor(r.deaths)) throw ParseError("deaths must be a non-negative integer", line_no);
    r.mask = static_cast<int>(mask);
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError("no rows", line_no);
  std::vector<int> cohorts;
  int lo = rows.front().age;
  int hi = lo;
  for (const auto& r : rows) {
    cohorts.push_back(r.cohort);
    lo = std::min(lo, r.age);
    hi = std::max(hi, r.age);
  }
  std::sort(cohorts.begin(), cohorts.end());
  cohorts.erase(std::unique(cohorts.begin(), cohorts.end()), cohorts.end());
  const std::size_t K = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::int64_t> D(cohorts.size() * K, 0);
  std::vector<double> E(cohorts.size() * K, 0.0);
  std::vector<std::uint8_t> M(cohorts.size() * K, 0);
  for (const auto& r : rows) {
    const auto t = static_cast<std::size_t>(std::lower_bound(cohorts.begin(), cohorts.end(), r.cohort) - cohorts.begin());
    const std::size_t i = t * K + static_cast<std::size_t>(r.age - lo);
    D[i] = static_cast<std::int64_t>(r.deaths);
    E[i] = r.exposure;
    M[i] = static_cast<std::uint8_t>(r.mask);
  }
  return CohortDataset({lo, static_cast<int>(K)}, std::move(cohorts), std::move(D), std::move(E), std::move(M));
}

CohortDataset read_dataset_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot read " + path);
  return read_dataset_csv(is);
}

}  // namespace ggdrift::io
