#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "isingscan/risk.hpp"

namespace isingscan {

// Flat key-value plan file: `key = value` lines, `#` comments, optional
// `[section]` headers that prefix following keys as "section.key".
class PlanConfig {
 public:
  static PlanConfig parse(std::istream& in);
  static PlanConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long_or(const std::string& key, long fallback) const;
  std::vector<double> get_doubles_or(const std::string& key) const;  // space/comma split

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct BuiltExperiment {
  ExperimentPlan plan;
  std::vector<double> sweep_betas;  // empty unless [sweep] betas given
};

// Assemble an ExperimentPlan from a parsed plan file. The master seed and
// thread count come from the command line, never from the file.
BuiltExperiment build_experiment(const PlanConfig& config, std::uint64_t master_seed,
                                 int threads);

}  // namespace isingscan
