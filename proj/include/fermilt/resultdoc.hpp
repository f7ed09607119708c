#pragma once

#include <json.hpp>
#include <string>

#include "fermilt/experiments.hpp"

namespace fermilt {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

/// Envelope written next to every experiment's outputs.
json make_result_document(const std::string& kind, const json& inputs,
                          const json& outputs, double seconds);

/// Allocate kind-000, kind-001, ... under out_root (append-only).
std::string allocate_run_dir(const std::string& out_root,
                             const std::string& kind);

void write_json_file(const std::string& path, const json& doc);
void write_text_file(const std::string& path, const std::string& text);

json to_json(const MinimizeReport& rep);
json to_json(const EnergyBreakdown& e);
json to_json(const QuotientReport& q);
json to_json(const VirialReport& v);
json to_json(const EstimateDResult& r);
json to_json(const DstarResult& r);
json to_json(const BindingResult& r);
json to_json(const std::vector<RankSplitRow>& rows);
json to_json(const CollapseResult& r);
json to_json(const SweepRecord& r);
json to_json(const ScalingFit& f);
json to_json(const TailFit& f);

struct SweepCsvRow {
  double a, D_minus_a, E, E_plus_2m, eps, mu1, mu2;
  bool converged;
};
std::vector<SweepCsvRow> read_sweep_csv(const std::string& path);

}  // namespace fermilt
