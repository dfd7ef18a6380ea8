#include <algorithm>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ggdrift/errors.hpp"
#include "ggdrift/hmd_io.hpp"

using namespace ggdrift;
using namespace ggdrift::io;

namespace {

const char* kHeader =
    "Denmark, Deaths (cohort 1x1)\tLast modified: 01 Jan 2024;  Methods Protocol: v6 (2017)\n"
    "\n"
    "  Year      Age         Female            Male           Total\n";

// Cohorts `first`..`first + n - 1`, ages 0..110+, all present unless the age
// is at or above `last_age[c]`.
std::string table(const std::string& country, int first, const std::vector<int>& last_age, double value) {
  std::ostringstream os;
  os << country << ", Table (cohort 1x1)\tLast modified: 01 Jan 2024\n\n";
  os << "  Year      Age         Female            Male           Total\n";
  for (std::size_t c = 0; c < last_age.size(); ++c)
    for (int age = 0; age <= 110; ++age) {
      os << "  " << first + static_cast<int>(c) << "  " << (age == 110 ? "110+" : std::to_string(age));
      if (age >= last_age[c])
        os << "  .  .  .\n";
      else
        os << "  " << value << "  " << value + 1.25 << "  " << 2 * value + 1.25 << "\n";
    }
  return os.str();
}

}  // namespace

TEST_CASE("parse_hmd record examples") {
  const std::string text = std::string(kHeader) +
                           "  1764   80   123.45   98.76   222.21\n"
                           "  1764   110+   .   .   .\n"
                           "\t1765 \t 81     1.00    2.00     3.00   \n";
  const auto t = parse_hmd(text, "DNK.Deaths_1x1.txt");
  REQUIRE(t.records.size() == 3);
  const auto& r = t.records[0];
  CHECK(r.year == 1764);
  CHECK(r.age == 80);
  CHECK_FALSE(r.open_age);
  CHECK(*r.female == 123.45);
  CHECK(*r.male == 98.76);
  CHECK(*r.total == 222.21);
  const auto& o = t.records[1];
  CHECK(o.open_age);
  CHECK(o.age == 110);
  CHECK_FALSE(o.female.has_value());
  CHECK_FALSE(o.total.has_value());
  CHECK(t.records[2].year == 1765);
  CHECK(t.country == "Denmark");
}

TEST_CASE("parse_hmd round-trips through serialize_hmd") {
  const std::string text = std::string(kHeader) +
                           "  1764   80   123.45   98.76   222.21\n"
                           "  1764   81   0.1   .   1e-3\n"
                           "  1764   110+   .   .   .\n";
  const auto a = parse_hmd(text);
  const auto b = parse_hmd(serialize_hmd(a));
  CHECK(a.records == b.records);
  CHECK(a.country == b.country);
  const auto c = parse_hmd(serialize_hmd(b));
  CHECK(serialize_hmd(b) == serialize_hmd(c));
}

TEST_CASE("parse_hmd errors carry the line number") {
  const auto bad_count = std::string(kHeader) + "  1764   80   1.0   2.0\n";
  try {
    (void)parse_hmd(bad_count);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  const auto bad_value = std::string(kHeader) + "  1764   80   1.0   2.0   3.0\n  1764   81   x   2.0   3.0\n";
  try {
    (void)parse_hmd(bad_value);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  CHECK_THROWS_AS((void)parse_hmd("no header here\n1 2 3 4 5\n"), ParseError);
  CHECK_THROWS_AS((void)parse_hmd(std::string(kHeader) + "  1764   -3   1   2   3\n"), ParseError);
  CHECK_THROWS_AS((void)read_hmd("/nonexistent/file.txt"), ArgumentError);
}

TEST_CASE("selection rules") {
  CHECK(SelectionRule::sanctioned(80).min_age_groups == 20);
  CHECK(SelectionRule::sanctioned(70).min_age_groups == 30);
  CHECK(SelectionRule::sanctioned(60).min_age_groups == 40);
  CHECK(SelectionRule::sanctioned(50).min_age_groups == 50);
  CHECK_THROWS_AS((void)SelectionRule::sanctioned(75), ArgumentError);
  SelectionRule r{80, 19, false};
  CHECK_THROWS_AS(r.validate(), ArgumentError);
  r.overridden = true;
  CHECK_NOTHROW(r.validate());
  CHECK(parse_sex("female") == Sex::Female);
  CHECK(parse_sex("Male") == Sex::Male);
  CHECK_THROWS_AS((void)parse_sex("total"), ArgumentError);
}

TEST_CASE("build_dataset threshold boundary and complete cohorts") {
  // Cohort 1900 has ages 80..98 (19 groups), 1901 has 80..99 (20), 1902 is complete.
  const auto d = parse_hmd(table("Denmark", 1900, {99, 100, 110}, 12.0));
  const auto e = parse_hmd(table("Denmark", 1900, {99, 100, 110}, 1000.0));
  const auto b = build_dataset(d, e, Sex::Female, SelectionRule{});
  CHECK(b.data.n_cohorts() == 2);
  CHECK(b.data.cohorts()[0] == 1901);
  CHECK(b.data.cohorts()[1] == 1902);
  CHECK(b.excluded_cohorts == std::vector<int>{1900});
  CHECK(b.data.n_ages() == 30);
  CHECK(b.data.grid().start_age == 80);
  CHECK(b.data.observed_cells() == 50);
  CHECK(b.data.deaths(1)[0] == 12);
  CHECK(b.data.exposures(1)[29] == 1000.0);

  const auto all = build_dataset(d, e, Sex::Male, SelectionRule{80, 19, true});
  CHECK(all.data.n_cohorts() == 3);
  CHECK(all.data.deaths(0)[0] == 13);  // 13.25 rounded
  CHECK(all.rounding_delta == doctest::Approx(0.25 * static_cast<double>(all.data.observed_cells())));
}

TEST_CASE("selection is monotone in the age-group threshold") {
  const std::vector<int> last{85, 90, 95, 99, 100, 101, 104, 110, 100, 96};
  const auto d = parse_hmd(table("X", 1800, last, 5.0));
  const auto e = parse_hmd(table("X", 1800, last, 500.0));
  std::vector<int> previous;
  for (int m = 30; m >= 1; --m) {
    const auto b = build_dataset(d, e, Sex::Female, SelectionRule{80, m, true});
    const std::vector<int> kept(b.data.cohorts().begin(), b.data.cohorts().end());
    for (int c : previous) CHECK(std::find(kept.begin(), kept.end(), c) != kept.end());
    previous = kept;
  }
  CHECK_THROWS_AS((void)build_dataset(d, e, Sex::Female, SelectionRule{80, 31, true}), ArgumentError);
  const auto short_d = parse_hmd(table("X", 1800, {85, 90}, 5.0));
  const auto short_e = parse_hmd(table("X", 1800, {85, 90}, 500.0));
  CHECK_THROWS_AS((void)build_dataset(short_d, short_e, Sex::Female, SelectionRule{}), SelectionError);
}

TEST_CASE("missing or zero exposure forces zero deaths") {
  auto d = parse_hmd(table("X", 1900, {110}, 7.0));
  auto e = parse_hmd(table("X", 1900, {110}, 300.0));
  for (auto& r : e.records) {
    if (r.age == 85) r.female.reset();
    if (r.age == 86) r.female = 0.0;
  }
  const auto b = build_dataset(d, e, Sex::Female, SelectionRule{});
  CHECK(b.forced_zeros == 2);
  CHECK(b.data.mask(0)[5] == 0);
  CHECK(b.data.mask(0)[6] == 0);
  CHECK(b.data.deaths(0)[5] == 0);
  CHECK(b.data.deaths(0)[6] == 0);
  CHECK(b.data.observed_cells() == 28);
}

TEST_CASE("build_dataset rejects mismatched countries") {
  const auto d = parse_hmd(table("Denmark", 1900, {110}, 7.0));
  const auto e = parse_hmd(table("Sweden", 1900, {110}, 300.0));
  CHECK_THROWS_AS((void)build_dataset(d, e, Sex::Female, SelectionRule{}), ArgumentError);
}

TEST_CASE("dataset csv round-trip") {
  const CohortDataset d({80, 3}, {1900, 1901}, {1, 2, 3, 4, 0, 6}, {10.0, 20.5, 30.0, 40.0, 0.0, 60.25},
                        {1, 1, 1, 1, 0, 1});
  std::stringstream ss;
  write_dataset_csv(ss, d);
  const auto r = read_dataset_csv(ss);
  CHECK(r.n_cohorts() == 2);
  CHECK(r.n_ages() == 3);
  CHECK(std::equal(r.all_deaths().begin(), r.all_deaths().end(), d.all_deaths().begin()));
  CHECK(std::equal(r.all_exposures().begin(), r.all_exposures().end(), d.all_exposures().begin()));
  CHECK(std::equal(r.all_mask().begin(), r.all_mask().end(), d.all_mask().begin()));

  std::stringstream partial("cohort,age,deaths,exposure,mask\n1900,80,3,100,1\n1900,82,4,90,1\n");
  const auto p = read_dataset_csv(partial);
  CHECK(p.n_ages() == 3);
  CHECK(p.mask(0)[1] == 0);
  std::stringstream bad("cohort,age,deaths\n1900,80,3\n");
  CHECK_THROWS_AS((void)read_dataset_csv(bad), ParseError);
}
