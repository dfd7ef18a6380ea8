#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ggdrift/dataset.hpp"

namespace ggdrift::io {

/// One line of an HMD cohort table. A missing value (".") is empty.
struct HmdRecord {
  int year = 0;
  /// Single-year age, or 110 with `open_age` set for "110+".
  int age = 0;
  bool open_age = false;
  std::optional<double> female;
  std::optional<double> male;
  std::optional<double> total;

  bool operator==(const HmdRecord&) const = default;
};

struct HmdTable {
  std::string path;
  std::string country;
  /// First description line, kept for serialization.
  std::string title;
  std::vector<HmdRecord> records;
};

/// Parses HMD text: description lines, then a "Year Age Female Male Total"
/// header, then whitespace-delimited rows. Throws ParseError with the line
/// number on a wrong field count or a non-numeric value other than ".".
[[nodiscard]] HmdTable parse_hmd(const std::string& content, const std::string& path = {});
[[nodiscard]] HmdTable read_hmd(const std::string& path);

/// Writes a table parse_hmd reads back to the same records.
[[nodiscard]] std::string serialize_hmd(const HmdTable& table);

enum class Sex { Female, Male };
[[nodiscard]] Sex parse_sex(const std::string& s);
[[nodiscard]] std::string to_string(Sex s);

/// Cohort inclusion rule: at least `min_age_groups` observed single-year
/// ages at or above `start_age`.
struct SelectionRule {
  int start_age = 80;
  int min_age_groups = 20;
  /// Allows pairs other than (50, 50), (60, 40), (70, 30), (80, 20).
  bool overridden = false;

  [[nodiscard]] static SelectionRule sanctioned(int start_age);
  void validate() const;
};

struct DatasetBuild {
  CohortDataset data;
  /// Sum over retained cells of |D - round(D)|.
  double rounding_delta = 0.0;
  /// Cells whose deaths were set to zero because the exposure was missing or zero.
  std::size_t forced_zeros = 0;
  std::vector<int> excluded_cohorts;
};

/// Single-year ages start_age..109 of the cohorts meeting `rule`. Fractional
/// deaths are rounded. The open 110+ group is never used. Retained cohorts
/// are indexed consecutively in birth-year order. Throws SelectionError if
/// nothing is retained and ArgumentError if the tables name different countries.
[[nodiscard]] DatasetBuild build_dataset(const HmdTable& deaths, const HmdTable& exposures, Sex sex,
                                         const SelectionRule& rule);

/// Normalized dataset file: columns cohort, age, deaths, exposure, mask.
void write_dataset_csv(std::ostream& os, const CohortDataset& data);
void write_dataset_csv(const std::string& path, const CohortDataset& data);
/// Ages are taken as a contiguous range from the smallest to the largest
/// listed; cells without a row are masked.
[[nodiscard]] CohortDataset read_dataset_csv(std::istream& is);
[[nodiscard]] CohortDataset read_dataset_csv(const std::string& path);

}  // namespace ggdrift::io
