#include "stochsched/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace stochsched {

using json = nlohmann::ordered_json;

namespace {

json dist_json(const TriangularDist& d) { return {{"min", d.min}, {"mode", d.mode}, {"max", d.max}}; }

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  const auto& d = inst.data();
  json j;
  j["format"] = "stochsched-instance/1";
  j["name"] = d.name;
  j["horizon"] = d.horizon;
  j["skills"] = d.skill_count;
  j["rng_seed"] = d.rng_seed;
  j["external_cost"] = d.external_cost;
  json gen = json::object();
  for (const auto& [k, v] : d.generator_params) gen[k] = v;
  j["generator"] = gen;
  json projects = json::array();
  for (const auto& p : d.projects) {
    json acts = json::array();
    for (const auto& act : p.activities) {
      json a = json::array();
      for (const auto& sd : act) {
        json e = {{"skill", sd.skill}};
        e.update(dist_json(sd.dist));
        a.push_back(e);
      }
      acts.push_back(a);
    }
    projects.push_back({{"id", p.id},
                        {"duration", p.duration},
                        {"earliest_start", p.earliest_start},
                        {"latest_start", p.latest_start},
                        {"activities", acts}});
  }
  j["projects"] = projects;
  json resources = json::array();
  for (const auto& r : d.resources) {
    resources.push_back(
        {{"id", r.id}, {"skills", r.skills}, {"efficiency", r.efficiency}, {"capacity", r.capacity}});
  }
  j["resources"] = resources;
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const json j = parse(text);
  if (field<std::string>(j, "format") != "stochsched-instance/1") {
    throw FormatError("unsupported instance format");
  }
  InstanceData d;
  d.name = field<std::string>(j, "name");
  d.horizon = field<int>(j, "horizon");
  d.skill_count = field<int>(j, "skills");
  d.rng_seed = field<std::uint64_t>(j, "rng_seed");
  d.external_cost = field<std::vector<double>>(j, "external_cost");
  const json gen = field<json>(j, "generator");
  for (const auto& [k, v] : gen.items()) {
    if (!v.is_number()) throw FormatError("generator parameter '" + k + "' is not a number");
    d.generator_params[k] = v.get<double>();
  }
  const json projects = field<json>(j, "projects");
  for (const auto& pj : projects) {
    Project p;
    p.id = field<int>(pj, "id");
    p.duration = field<int>(pj, "duration");
    p.earliest_start = field<int>(pj, "earliest_start");
    p.latest_start = field<int>(pj, "latest_start");
    const json acts = field<json>(pj, "activities");
    for (const auto& aj : acts) {
      if (!aj.is_array()) throw FormatError("activity must be a list");
      std::vector<SkillDemand> act;
      for (const auto& ej : aj) {
        act.push_back({field<int>(ej, "skill"),
                       {field<double>(ej, "min"), field<double>(ej, "mode"), field<double>(ej, "max")}});
      }
      p.activities.push_back(std::move(act));
    }
    d.projects.push_back(std::move(p));
  }
  const json resources = field<json>(j, "resources");
  for (const auto& rj : resources) {
    Resource r;
    r.id = field<int>(rj, "id");
    r.skills = field<std::vector<int>>(rj, "skills");
    r.efficiency = field<std::vector<double>>(rj, "efficiency");
    r.capacity = field<std::vector<double>>(rj, "capacity");
    d.resources.push_back(std::move(r));
  }
  return Instance(std::move(d));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

void write_instance(const std::string& path, const Instance& inst) {
  write_text(path, instance_to_json(inst));
}

Instance read_instance(const std::string& path) { return instance_from_json(read_text(path)); }

std::string solution_to_json(const SolutionRecord& sol) {
  json j;
  j["format"] = "stochsched-solution/1";
  j["solver"] = sol.solver;
  j["instance"] = sol.instance;
  j["schedule"] = sol.schedule.periods;
  json plan = json::array();
  for (const auto& e : sol.plan.entries()) {
    plan.push_back({{"project", e.project}, {"period", e.period}, {"skill", e.skill},
                    {"resource", e.resource}, {"work", e.work}});
  }
  j["plan"] = plan;
  j["objective"] = sol.objective;
  j["expected_cost"] = sol.expected_cost;
  j["optimal"] = sol.optimal;
  json info = json::object();
  for (const auto& [k, v] : sol.info) info[k] = v;
  j["info"] = info;
  return j.dump(2) + "\n";
}

SolutionRecord solution_from_json(const std::string& text) {
  const json j = parse(text);
  if (field<std::string>(j, "format") != "stochsched-solution/1") {
    throw FormatError("unsupported solution format");
  }
  SolutionRecord s;
  s.solver = field<std::string>(j, "solver");
  s.instance = field<std::string>(j, "instance");
  s.schedule.periods = field<std::vector<std::vector<int>>>(j, "schedule");
  std::vector<StaffingEntry> entries;
  const json plan = field<json>(j, "plan");
  for (const auto& e : plan) {
    entries.push_back({field<int>(e, "project"), field<int>(e, "period"), field<int>(e, "skill"),
                       field<int>(e, "resource"), field<double>(e, "work")});
  }
  s.plan = StaffingPlan::from_entries(std::move(entries));
  s.objective = field<double>(j, "objective");
  s.expected_cost = field<double>(j, "expected_cost");
  s.optimal = field<bool>(j, "optimal");
  if (j.contains("info")) {
    for (const auto& [k, v] : j.at("info").items()) {
      if (v.is_number()) s.info[k] = v.get<double>();
    }
  }
  return s;
}

void write_solution(const std::string& path, const SolutionRecord& sol) {
  write_text(path, solution_to_json(sol));
}

SolutionRecord read_solution(const std::string& path) { return solution_from_json(read_text(path)); }

}  // namespace stochsched
