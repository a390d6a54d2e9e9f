#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rinorm {

struct MemberRecord {
  std::string label;
  std::string role;  // member | control_stable | control_divergent
  std::vector<double> ratios;        // one per level
  std::vector<double> domain_norms;  // one per level
};

struct PartReport {
  std::string name;
  std::string domain;
  std::string range;
  std::string expect;   // stable | diverges
  std::string level_kind = "grid";
  std::vector<double> levels;
  double threshold = 0.15;
  std::vector<MemberRecord> members;
  std::vector<double> constants;  // max ratio per level over the stable arm
  std::vector<double> drifts;
  std::string verdict;            // stable | unstable | diverges-as-expected
  std::string pointer;            // first offending entry, empty if none
  bool passed = false;
};

struct Report {
  std::string id;
  std::string kind;
  std::map<std::string, std::string> params;
  std::vector<PartReport> parts;
  bool passed = false;
};

// fills constants, drifts, verdict, pointer and passed from the recorded numbers;
// throws when the stable control arm (or, for divergence parts, the divergent arm) is missing
void finalize(PartReport& part);
void finalize(Report& report);

std::string to_json(const Report& report);

// numeric helpers shared with the harness
std::string format_number(double v);

}  // namespace rinorm
