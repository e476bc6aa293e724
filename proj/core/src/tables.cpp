#include "enclosure/tables.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace enclosure {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InvalidArgument("malformed number '" + s + "'");
  return v;
}

namespace {

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size()) throw InvalidArgument("malformed integer '" + s + "'");
  return v;
}

std::string verdict_label(const SupportEstimate& e) { return e.failed ? "Failed" : to_string(e.verdict); }

/// Rows of whitespace-separated fields after checking the header line.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path, const std::string& header,
                                                std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("missing artifact: " + path.string());
  std::string line;
  if (!header.empty()) {
    if (!std::getline(in, line) || line != header)
      throw InvalidArgument(path.string() + ": unexpected header (expected \"" + header + "\")");
  }
  std::vector<std::vector<std::string>> rows;
  int lineno = header.empty() ? 0 : 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; ss >> f;) fields.push_back(f);
    if (fields.size() != columns)
      throw InvalidArgument(fmt::format("{}:{}: expected {} columns, found {}", path.string(), lineno, columns,
                                        fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::vector<IndicatorRow> indicator_rows(const std::vector<SupportEstimate>& estimates) {
  std::vector<IndicatorRow> rows;
  for (const auto& e : estimates) {
    for (const auto& s : e.samples) {
      IndicatorRow r;
      r.dir_index = e.index;
      r.theta = e.theta;
      r.t = s.probe.t;
      r.h = s.probe.h;
      r.J = s.probe.J;
      r.m = s.probe.m;
      r.E = s.E;
      r.E_tilde = s.E_tilde;
      r.E_oracle = s.E_oracle;
      r.log_I = s.log_I;
      r.newton_iters = s.newton.iterations;
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<SupportRow> support_rows(const std::vector<SupportEstimate>& estimates) {
  std::vector<SupportRow> rows;
  for (const auto& e : estimates)
    rows.push_back({e.index, e.theta, e.t_hat, e.slope, e.fit_residual, verdict_label(e)});
  return rows;
}

std::string format_indicator_table(const std::vector<IndicatorRow>& rows) {
  std::string out = std::string(kIndicatorHeader) + "\n";
  for (const auto& r : rows) {
    out += fmt::format("{} {} {} {} {} {} {} {} {} {} {} {} {} {}\n", r.dir_index, format_double(r.theta),
                       format_double(r.t), format_double(r.h), format_double(r.J), r.m, format_double(r.E.real()),
                       format_double(r.E.imag()), format_double(r.E_tilde.real()), format_double(r.E_tilde.imag()),
                       format_double(r.E_oracle.real()), format_double(r.E_oracle.imag()), format_double(r.log_I),
                       r.newton_iters);
  }
  return out;
}

std::string format_support_table(const std::vector<SupportRow>& rows) {
  std::string out = std::string(kSupportHeader) + "\n";
  for (const auto& r : rows)
    out += fmt::format("{} {} {} {} {} {}\n", r.dir_index, format_double(r.theta), format_double(r.t_hat),
                       format_double(r.slope), format_double(r.fit_residual), r.verdict);
  return out;
}

std::string format_hull(const HullPolygon& hull) {
  std::string out;
  for (Vec2 p : hull.vertices()) out += format_double(p.x) + " " + format_double(p.y) + "\n";
  return out;
}

std::string format_ladder_table(const std::vector<LadderRow>& rows) {
  std::string out = std::string(kLadderHeader) + "\n";
  for (const auto& r : rows)
    out += fmt::format("{} {} {} {} {} {} {}\n", format_double(r.scale), format_double(r.amplitude),
                       format_double(r.u_minus_v), format_double(r.u_minus_ut), format_double(r.E_minus_Et),
                       format_double(r.noise_floor), r.newton_iters);
  return out;
}

std::vector<IndicatorRow> read_indicator_table(const std::filesystem::path& path) {
  std::vector<IndicatorRow> out;
  for (const auto& f : read_rows(path, kIndicatorHeader, 14)) {
    IndicatorRow r;
    r.dir_index = parse_int(f[0]);
    r.theta = parse_double(f[1]);
    r.t = parse_double(f[2]);
    r.h = parse_double(f[3]);
    r.J = parse_double(f[4]);
    r.m = parse_int(f[5]);
    r.E = {parse_double(f[6]), parse_double(f[7])};
    r.E_tilde = {parse_double(f[8]), parse_double(f[9])};
    r.E_oracle = {parse_double(f[10]), parse_double(f[11])};
    r.log_I = parse_double(f[12]);
    r.newton_iters = parse_int(f[13]);
    out.push_back(r);
  }
  return out;
}

std::vector<SupportRow> read_support_table(const std::filesystem::path& path) {
  std::vector<SupportRow> out;
  for (const auto& f : read_rows(path, kSupportHeader, 6))
    out.push_back({parse_int(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4]), f[5]});
  return out;
}

HullPolygon read_hull(const std::filesystem::path& path) {
  std::vector<Vec2> pts;
  for (const auto& f : read_rows(path, "", 2)) pts.push_back({parse_double(f[0]), parse_double(f[1])});
  return HullPolygon(std::move(pts));
}

std::vector<LadderRow> read_ladder_table(const std::filesystem::path& path) {
  std::vector<LadderRow> out;
  for (const auto& f : read_rows(path, kLadderHeader, 7))
    out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4]),
                   parse_double(f[5]), parse_int(f[6])});
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace enclosure
