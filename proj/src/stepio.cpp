#include "rinorm/stepio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rinorm {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

double parse_field(const std::string& text, const std::string& what, int line) {
  const std::string s = trim(text);
  if (s == "inf" || s == "+inf" || s == "Inf") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw PreconditionError("step.csv line " + std::to_string(line) + ": field '" + what + "' is not a number");
  return v;
}

std::string g17(double v) {
  if (v == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PWDecreasing read_step_csv(std::istream& in) {
  std::string line;
  int no = 0;
  bool header = false;
  std::vector<double> b, v;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    if (!header) {
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw PreconditionError("step.csv line " + std::to_string(no) + ": expected two columns (breakpoint, value)");
    b.push_back(parse_field(line.substr(0, comma), "breakpoint", no));
    v.push_back(parse_field(line.substr(comma + 1), "value", no));
  }
  if (v.empty()) throw PreconditionError("step.csv: no data rows");
  if (b.front() != 0.0) throw PreconditionError("step.csv: field 'breakpoint' of the first row must be 0");
  b.push_back(1.0);
  try {
    return PWDecreasing(std::move(b), std::move(v));
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string("step.csv: ") + e.what());
  }
}

PWDecreasing read_step_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open step file '" + path + "'");
  return read_step_csv(in);
}

void write_step_csv(std::ostream& out, const PWDecreasing& f) {
  out << "breakpoint,value\n";
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) out << g17(b[i]) << ',' << g17(v[i]) << '\n';
}

std::vector<double> sample_points(int count) {
  if (count < 1) throw PreconditionError("sample count must be positive");
  std::vector<double> ts;
  for (int k = 0; k < count; ++k) ts.push_back(std::exp2(-20.0 * (count - k) / count));
  return ts;
}

void write_curve_csv(std::ostream& out, const std::string& header, const std::vector<double>& ts,
                     const std::function<double(double)>& value) {
  out << header << '\n';
  for (double t : ts) out << g17(t) << ',' << g17(value(t)) << '\n';
}

}  // namespace rinorm
