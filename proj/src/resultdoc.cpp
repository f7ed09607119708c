#include "fermilt/resultdoc.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fermilt/errors.hpp"

namespace fs = std::filesystem;

namespace fermilt {

json make_result_document(const std::string& kind, const json& inputs,
                          const json& outputs, double seconds) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = kind;
  doc["inputs"] = inputs;
  doc["outputs"] = outputs;
  json env;
#if defined(__linux__)
  env["platform"] = "linux";
#elif defined(__APPLE__)
  env["platform"] = "darwin";
#else
  env["platform"] = "other";
#endif
  env["build"] = std::string(__DATE__);
  doc["environment"] = env;
  doc["timing_seconds"] = seconds;
  return doc;
}

std::string allocate_run_dir(const std::string& out_root,
                             const std::string& kind) {
  fs::create_directories(out_root);
  for (int i = 0; i < 100000; ++i) {
    std::ostringstream name;
    name << kind << "-";
    name.fill('0');
    name.width(3);
    name << i;
    fs::path candidate = fs::path(out_root) / name.str();
    if (!fs::exists(candidate)) {
      fs::create_directories(candidate);
      return candidate.string();
    }
  }
  throw IoError("allocate_run_dir: run directory space exhausted under " +
                out_root);
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << doc.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
}

json to_json(const MinimizeReport& rep) {
  return json{{"objective", rep.objective},
              {"projected_grad_norm", rep.projected_grad_norm},
              {"iterations", rep.iterations},
              {"converged", rep.converged},
              {"multipliers", rep.multipliers},
              {"el_residuals", rep.el_residuals}};
}

json to_json(const EnergyBreakdown& e) {
  return json{{"kinetic_massive", e.kinetic_massive},
              {"interaction", e.interaction},
              {"total", e.total},
              {"a", e.a},
              {"m", e.m}};
}

json to_json(const QuotientReport& q) {
  return json{{"massless_kinetic", q.massless_kinetic},
              {"lp_interaction", q.lp_interaction},
              {"quotient", q.quotient},
              {"grid_n", q.grid_n},
              {"grid_L", q.grid_L}};
}

json to_json(const VirialReport& v) {
  return json{{"lhs", v.lhs}, {"rhs", v.rhs}, {"residual", v.residual}};
}

json to_json(const EstimateDResult& r) {
  return json{{"value", r.value},
              {"massless_trace", r.massless_trace},
              {"spread", r.spread},
              {"grid_doubling_delta", r.grid_doubling_delta},
              {"refined_value", r.refined_value},
              {"seed_values", r.seed_values},
              {"converged", r.converged}};
}

json to_json(const DstarResult& r) {
  return json{{"value", r.value}, {"dc_bias", r.dc_bias}};
}

json to_json(const BindingResult& r) {
  return json{{"E2", r.E2},
              {"E1", r.E1},
              {"margin", r.margin},
              {"strict", r.strict},
              {"converged", r.converged}};
}

json to_json(const std::vector<RankSplitRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back(json{{"R", row.R},
                       {"quotient", row.quotient},
                       {"max_overlap", row.max_overlap}});
  }
  return arr;
}

json to_json(const CollapseResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"t", row.t}, {"energy", row.energy}});
  }
  return json{{"rows", rows},
              {"slope", r.slope},
              {"predicted_slope", r.predicted_slope},
              {"base_quotient", r.base_quotient},
              {"floor", r.floor}};
}

json to_json(const SweepRecord& r) {
  return json{{"a", r.a},
              {"E", r.E},
              {"eps", r.eps},
              {"mu1", r.mu1},
              {"mu2", r.mu2},
              {"grad_norm", r.grad_norm},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"resolution_flag", r.resolution_flag},
              {"frame_scale", r.frame_scale},
              {"grid_n", r.grid_n},
              {"grid_L", r.grid_L}};
}

json to_json(const ScalingFit& f) {
  return json{{"exponent", f.exponent},
              {"prefactor", f.prefactor},
              {"r_squared", f.r_squared},
              {"d_implied", f.d_implied},
              {"window_a_min", f.window_a_min},
              {"window_a_max", f.window_a_max},
              {"points_used", f.points_used}};
}

json to_json(const TailFit& f) {
  return json{{"slope", f.slope},
              {"r_squared", f.r_squared},
              {"points_used", f.points_used}};
}

std::vector<SweepCsvRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sweep CSV: " + path);
  std::vector<SweepCsvRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("a,", 0) == 0) continue;  // header
    }
    std::istringstream ls(line);
    SweepCsvRow row{};
    char comma;
    int conv = 0;
    if (!(ls >> row.a >> comma >> row.D_minus_a >> comma >> row.E >> comma >>
          row.E_plus_2m >> comma >> row.eps >> comma >> row.mu1 >> comma >>
          row.mu2 >> comma >> conv)) {
      throw IoError("malformed sweep CSV row: " + line);
    }
    row.converged = conv != 0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fermilt
