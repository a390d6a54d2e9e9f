#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rinorm/stepfn.hpp"

namespace rinorm {

// step.csv: header row, then one "left breakpoint,value" row per piece; the last piece ends at 1.
// The first value may be "inf".
PWDecreasing read_step_csv(std::istream& in);
PWDecreasing read_step_csv_file(const std::string& path);
void write_step_csv(std::ostream& out, const PWDecreasing& f);

// count points log-spaced in (2^-20, 1)
std::vector<double> sample_points(int count);
void write_curve_csv(std::ostream& out, const std::string& header, const std::vector<double>& ts,
                     const std::function<double(double)>& value);

}  // namespace rinorm
