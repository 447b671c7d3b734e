#include "dmoea/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dmoea {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

std::string marker_string(char c) { return std::string(1, c); }

json config_json(const ExperimentConfig& cfg) {
  return json{{"problem", cfg.problem},
              {"optimizer", cfg.optimizer},
              {"variant", to_string(cfg.variant)},
              {"n_t", cfg.severity},
              {"tau_t", cfg.frequency},
              {"changes", cfg.num_changes},
              {"runs", cfg.runs},
              {"pop_size", cfg.pop_size},
              {"seed", cfg.seed},
              {"posmote",
               {{"r", cfg.effective_oversampling_rate()},
                {"k", cfg.posmote.neighbors},
                {"direction", cfg.posmote.direction == SmoteDirection::Extrapolate ? "extrapolate" : "classic"}}},
              {"svm",
               {{"C", cfg.svm.C},
                {"research_scale", cfg.svm.research_scale},
                {"scale_search_samples", cfg.svm.scale_search_samples}}},
              {"predictor", {{"max_attempts_factor", cfg.predictor.max_attempts_factor}}},
              {"reference_inflation", cfg.reference_inflation},
              {"pof_samples", cfg.pof_samples}};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& run, bool record_wall_clock) {
  auto out = open_out(path);
  out << "change_index,t,igd,hv,wall_ms\n";
  for (const auto& c : run.trace) {
    out << c.change_index << ',' << format_double(c.t) << ',' << format_double(c.igd) << ','
        << format_double(c.hv) << ',' << format_double(record_wall_clock ? c.wall_ms : 0.0) << '\n';
  }
}

std::vector<ChangeRecord> read_run_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "change_index,t,igd,hv,wall_ms")
    throw std::runtime_error("'" + path.string() + "' is not a run CSV");
  std::vector<ChangeRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw std::runtime_error("malformed row in '" + path.string() + "'");
    ChangeRecord c;
    c.change_index = std::stoi(cells[0]);
    c.t = std::stod(cells[1]);
    c.igd = std::stod(cells[2]);
    c.hv = std::stod(cells[3]);
    c.wall_ms = std::stod(cells[4]);
    rows.push_back(c);
  }
  return rows;
}

void write_generation_csv(const std::filesystem::path& path, const RunRecord& run) {
  auto out = open_out(path);
  out << "change_index,generation,igd\n";
  for (const auto& g : run.generation_trace)
    out << g.change_index << ',' << g.generation << ',' << format_double(g.igd) << '\n';
}

void write_summary_json(const std::filesystem::path& path, const ExperimentConfig& cfg,
                        const std::vector<RunRecord>& records, const SummaryTable& table) {
  json runs = json::array();
  for (const auto& r : records) {
    runs.push_back({{"variant", to_string(r.config.variant)},
                    {"seed", r.seed},
                    {"migd", r.migd()},
                    {"mhv", r.mhv()},
                    {"evaluations", r.evaluations},
                    {"classifiers_built", r.classifiers_built},
                    {"kernel_scale", r.kernel_scale},
                    {"wall_ms", r.wall_ms}});
  }
  json rows = json::array();
  for (const auto& row : table.rows) {
    json j{{"problem", row.problem},
           {"n_t", row.severity},
           {"tau_t", row.frequency},
           {"variant", row.variant},
           {"runs", row.runs},
           {"migd_mean", row.migd_mean},
           {"migd_std", row.migd_std},
           {"mhv_mean", row.mhv_mean},
           {"mhv_std", row.mhv_std},
           {"migd_values", row.migd_values},
           {"mhv_values", row.mhv_values},
           {"migd_marker", marker_string(row.migd_marker)},
           {"mhv_marker", marker_string(row.mhv_marker)}};
    j["migd_p"] = row.migd_p ? json(*row.migd_p) : json(nullptr);
    j["mhv_p"] = row.mhv_p ? json(*row.mhv_p) : json(nullptr);
    rows.push_back(std::move(j));
  }
  const json doc{{"config", config_json(cfg)},
                 {"reference_variant", table.reference_variant},
                 {"runs", std::move(runs)},
                 {"variants", std::move(rows)}};
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

SummaryTable read_summary_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("'" + path.string() + "': " + e.what());
  }
  SummaryTable table;
  table.reference_variant = doc.value("reference_variant", std::string("isvm"));
  for (const auto& j : doc.at("variants")) {
    SummaryRow row;
    row.problem = j.at("problem").get<std::string>();
    row.severity = j.at("n_t").get<int>();
    row.frequency = j.at("tau_t").get<int>();
    row.variant = j.at("variant").get<std::string>();
    row.migd_values = j.at("migd_values").get<std::vector<double>>();
    row.mhv_values = j.at("mhv_values").get<std::vector<double>>();
    row.runs = row.migd_values.size();
    row.migd_mean = mean(row.migd_values);
    row.migd_std = stddev(row.migd_values);
    row.mhv_mean = mean(row.mhv_values);
    row.mhv_std = stddev(row.mhv_values);
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_comparison_csv(const std::filesystem::path& path, const SummaryTable& table) {
  auto out = open_out(path);
  out << "problem,n_t,tau_t,variant,runs,migd_mean,migd_std,migd_p,migd_marker,mhv_mean,mhv_std,mhv_p,mhv_marker\n";
  for (const auto& r : table.rows) {
    out << r.problem << ',' << r.severity << ',' << r.frequency << ',' << r.variant << ',' << r.runs << ','
        << format_double(r.migd_mean) << ',' << format_double(r.migd_std) << ','
        << (r.migd_p ? format_double(*r.migd_p) : "") << ',' << r.migd_marker << ','
        << format_double(r.mhv_mean) << ',' << format_double(r.mhv_std) << ','
        << (r.mhv_p ? format_double(*r.mhv_p) : "") << ',' << r.mhv_marker << '\n';
  }
}

void write_igd_evolution_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::vector<std::vector<ChangeRecord>>>>& runs_by_variant) {
  auto out = open_out(path);
  out << "variant,change_index,mean_igd\n";
  for (const auto& [variant, runs] : runs_by_variant) {
    std::size_t len = 0;
    for (const auto& r : runs) len = std::max(len, r.size());
    for (std::size_t k = 0; k < len; ++k) {
      double sum = 0.0;
      std::size_t n = 0;
      int index = 0;
      for (const auto& r : runs) {
        if (k >= r.size()) continue;
        sum += r[k].igd;
        index = r[k].change_index;
        ++n;
      }
      out << variant << ',' << index << ',' << format_double(sum / static_cast<double>(n)) << '\n';
    }
  }
}

}  // namespace dmoea
