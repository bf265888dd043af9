#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "stochsched/model.hpp"

namespace stochsched {

/// Malformed or unreadable file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string instance_to_json(const Instance& inst);
/// Throws FormatError on bad syntax or missing fields and InvalidInstance
/// when the data violates a model invariant.
Instance instance_from_json(const std::string& text);

void write_instance(const std::string& path, const Instance& inst);
Instance read_instance(const std::string& path);

/// A solver result as stored on disk.
struct SolutionRecord {
  std::string solver;
  std::string instance;
  Schedule schedule;
  StaffingPlan plan;
  double objective = 0.0;      // solver-internal value
  double expected_cost = 0.0;  // exact expected external cost
  bool optimal = false;
  std::map<std::string, double> info;
};

std::string solution_to_json(const SolutionRecord& sol);
SolutionRecord solution_from_json(const std::string& text);

void write_solution(const std::string& path, const SolutionRecord& sol);
SolutionRecord read_solution(const std::string& path);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace stochsched
