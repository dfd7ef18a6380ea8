#include "ggdrift/draws_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "ggdrift/errors.hpp"

namespace ggdrift::io {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& field, double& out) {
  const char* first = field.data();
  const char* last = first + field.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first == last) return false;
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

void write_draws_csv(std::ostream& os, const mcmc::PosteriorDraws& draws) {
  os << "chain,draw";
  for (const auto& n : draws.names()) os << ',' << n;
  os << '\n';
  char buf[32];
  for (std::size_t c = 0; c < draws.n_chains(); ++c) {
    for (std::size_t i = 0; i < draws.n_draws(); ++i) {
      os << c + 1 << ',' << i + 1;
      for (double v : draws.row(c, i)) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ',' << buf;
      }
      os << '\n';
    }
  }
}

void write_draws_csv(const std::string& path, const mcmc::PosteriorDraws& draws) {
  std::ofstream os(path);
  if (!os) throw ArgumentError("cannot write " + path);
  write_draws_csv(os, draws);
}

mcmc::PosteriorDraws read_draws_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty draws file", 1);
  const auto header = split_csv_line(line);
  if (header.size() < 5 || header[0] != "chain" || header[1] != "draw")
    throw ParseError("draws header must start with chain,draw", 1);
  const std::size_t n_params = header.size() - 2;
  if ((n_params - 3) % 3 != 0) throw ParseError("unexpected column count", 1);
  const std::size_t T = (n_params - 3) / 3;
  {
    const mcmc::PosteriorDraws probe(1, 1, T);
    const auto expected = probe.names();
    for (std::size_t k = 0; k < n_params; ++k)
      if (header[k + 2] != expected[k])
        throw ParseError("column " + std::to_string(k + 3) + " should be " + expected[k], 1);
  }

  std::vector<std::vector<std::vector<double>>> rows;  // [chain][draw][param]
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw ParseError("expected " + std::to_string(header.size()) + " fields", line_no);
    double chain = 0.0;
    double draw = 0.0;
    if (!parse_double(f[0], chain) || !parse_double(f[1], draw) || chain < 1 || draw < 1)
      throw ParseError("bad chain/draw index", line_no);
    const auto c = static_cast<std::size_t>(chain) - 1;
    const auto d = static_cast<std::size_t>(draw) - 1;
    if (c > rows.size()) throw ParseError("chains must appear in order", line_no);
    if (c == rows.size()) rows.emplace_back();
    if (d != rows[c].size()) throw ParseError("draws must appear in order", line_no);
    std::vector<double> v(n_params);
    for (std::size_t k = 0; k < n_params; ++k)
      if (!parse_double(f[k + 2], v[k])) throw ParseError("non-numeric value '" + f[k + 2] + "'", line_no);
    rows[c].push_back(std::move(v));
  }
  if (rows.empty()) throw ParseError("no draws", line_no);
  const std::size_t n_draws = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != n_draws) throw ParseError("chains have different lengths", line_no);

  mcmc::PosteriorDraws out(rows.size(), n_draws, T);
  for (std::size_t c = 0; c < rows.size(); ++c)
    for (std::size_t d = 0; d < n_draws; ++d) {
      auto dst = out.row(c, d);
      std::copy(rows[c][d].begin(), rows[c][d].end(), dst.begin());
    }
  return out;
}

mcmc::PosteriorDraws read_draws_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot read " + path);
  return read_draws_csv(is);
}

}  // namespace ggdrift::io
