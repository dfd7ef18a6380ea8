#pragma once

#include <iosfwd>
#include <string>

#include "ggdrift/mcmc.hpp"

namespace ggdrift::io {

/// One row per retained draw: chain, draw, then the PosteriorDraws columns.
/// Values are written with 17 significant digits so a read-back is exact.
void write_draws_csv(std::ostream& os, const mcmc::PosteriorDraws& draws);
void write_draws_csv(const std::string& path, const mcmc::PosteriorDraws& draws);

/// Inverse of write_draws_csv. Chain statistics are not stored and come back empty.
/// Throws ParseError on a malformed header or row.
[[nodiscard]] mcmc::PosteriorDraws read_draws_csv(std::istream& is);
[[nodiscard]] mcmc::PosteriorDraws read_draws_csv(const std::string& path);

/// Splits one CSV line on commas; no quoting support (none of our files need it).
[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);

/// Strict double parse of a whole field.
[[nodiscard]] bool parse_double(const std::string& field, double& out);

}  // namespace ggdrift::io
