#include "post/serialize.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace post {

json ptm_to_json(const PauliTransferMatrix& r) {
  std::vector<double> entries;
  entries.reserve(r.size() * r.size());
  for (int i = 0; i < r.size(); ++i)
    for (int j = 0; j < r.size(); ++j) entries.push_back(r.entries(i, j));
  return json{{"num_qubits", r.num_qubits}, {"entries", entries}};
}

PauliTransferMatrix ptm_from_json(const json& j) {
  PauliTransferMatrix r;
  r.num_qubits = j.at("num_qubits").get<int>();
  const auto entries = j.at("entries").get<std::vector<double>>();
  const int n = (1 << r.num_qubits) * (1 << r.num_qubits);
  if (static_cast<int>(entries.size()) != n * n)
    throw std::invalid_argument("PTM entry count does not match num_qubits");
  r.entries = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) r.entries(i, k) = entries[i * n + k];
  return r;
}

json gateset_to_json(const GateSet& gs) {
  json j;
  j["num_qubits"] = gs.num_qubits;
  j["rho"] = std::vector<double>(
      gs.rho.components.data(),
      gs.rho.components.data() + gs.rho.components.size());
  json effects = json::object();
  for (const MeasurementEffect& e : gs.effects)
    effects[e.label] = std::vector<double>(
        e.components.data(), e.components.data() + e.components.size());
  j["effects"] = effects;
  json gates = json::object();
  for (const auto& [name, ptm] : gs.gates) gates[name] = ptm_to_json(ptm);
  j["gates"] = gates;
  return j;
}

GateSet gateset_from_json(const json& j) {
  GateSet gs;
  gs.num_qubits = j.at("num_qubits").get<int>();
  auto rho = j.at("rho").get<std::vector<double>>();
  gs.rho.num_qubits = gs.num_qubits;
  gs.rho.components = Eigen::Map<const Vec>(rho.data(), rho.size());
  for (const auto& [label, comps] : j.at("effects").items()) {
    auto v = comps.get<std::vector<double>>();
    MeasurementEffect e;
    e.label = label;
    e.num_qubits = gs.num_qubits;
    e.components = Eigen::Map<const Vec>(v.data(), v.size());
    gs.effects.push_back(std::move(e));
  }
  for (const auto& [name, ptm] : j.at("gates").items())
    gs.gates[name] = ptm_from_json(ptm);
  return gs;
}

json correction_to_json(const CorrectionParams& params) {
  return json{{"mode", to_string(params.mode)}, {"angles", params.angles}};
}

CorrectionParams correction_from_json(const json& j) {
  CorrectionParams p;
  p.mode = correction_mode_from_string(j.at("mode").get<std::string>());
  p.angles = j.at("angles").get<std::vector<double>>();
  p.validate();
  return p;
}

namespace {

std::string three_decimals(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

json display_row(const std::string& tag, const CorrectionParams& params) {
  json row;
  row["tag"] = tag;
  std::vector<std::string> angles;
  for (double a : params.canonicalized().angles)
    angles.push_back(three_decimals(a));
  row["angles"] = angles;
  return row;
}

}  // namespace

json seed_to_json(const SeedResult& seed, const std::string& tag) {
  json j;
  j["params"] = correction_to_json(seed.params);
  j["residual_distance"] = seed.residual_distance;
  j["baseline_distance"] = seed.baseline_distance;
  j["theoretical_minimum_infidelity"] = seed.theoretical_minimum_infidelity;
  j["display_row"] = display_row(tag, seed.params);
  return j;
}

SeedResult seed_from_json(const json& j) {
  SeedResult s;
  s.params = correction_from_json(j.at("params"));
  s.residual_distance = j.at("residual_distance").get<double>();
  s.baseline_distance = j.at("baseline_distance").get<double>();
  s.theoretical_minimum_infidelity =
      j.value("theoretical_minimum_infidelity", 0.0);
  return s;
}

json decay_fit_to_json(const DecayFit& fit) {
  return json{{"A", fit.A},
              {"B", fit.B},
              {"p", fit.p},
              {"r", fit.r},
              {"converged", fit.converged},
              {"chi2", fit.chi2},
              {"cov_diag", fit.cov_diag}};
}

json rb_curve_to_json(const RBCurve& curve) {
  json points = json::array();
  for (const DecayPoint& pt : curve.points)
    points.push_back(
        {{"m", pt.m}, {"mean", pt.mean}, {"stderr", pt.stderr_}});
  return json{{"points", points}, {"fit", decay_fit_to_json(curve.fit)}};
}

json post_report_to_json(const PostRunReport& report) {
  json j;
  j["cycle"] = report.cycle;
  j["seed"] = seed_to_json(report.seed, "seed");
  j["native_objective"] = report.native_objective;
  j["seed_objective"] = report.seed_objective;
  json iters = json::array();
  for (const IterationRecord& it : report.iterations)
    iters.push_back({{"evals", it.evals},
                     {"best_objective", it.best_objective},
                     {"improved", it.improved}});
  j["iterations"] = iters;
  j["final_objective"] = report.final_objective;
  j["last_improvement_iteration"] = report.last_improvement_iteration;
  j["final_params"] = correction_to_json(report.final_params);
  j["final_params_display"] = display_row("final", report.final_params);
  j["rb_native"] = rb_curve_to_json(report.rb_native);
  j["rb_corrected"] = rb_curve_to_json(report.rb_corrected);
  j["r_u"] = report.r_u;
  j["r_c"] = report.r_c;
  j["improvement"] = std::isfinite(report.improvement)
                         ? json(report.improvement)
                         : json("saturated");
  j["baseline_evals"] = report.baseline_evals;
  j["candidate_evals"] = report.candidate_evals;
  j["experiment_budget"] = experiment_budget(report);
  return j;
}

json diamond_bounds_to_json(const DiamondBounds& b) {
  return json{
      {"lower", b.lower}, {"upper", b.upper}, {"num_samples", b.num_samples}};
}

json drift_report_to_json(const DriftReport& report) {
  json series = json::array();
  for (const DriftEntry& e : report.series) {
    json row;
    row["tag"] = e.tag;
    row["to_ideal"] = diamond_bounds_to_json(e.to_ideal);
    row["to_seed"] = diamond_bounds_to_json(e.to_seed);
    if (e.to_previous)
      row["to_previous"] = diamond_bounds_to_json(*e.to_previous);
    series.push_back(row);
  }
  return json{{"series", series},
              {"mean_to_seed", report.mean_to_seed},
              {"var_to_seed", report.var_to_seed},
              {"mean_step", report.mean_step}};
}

//=========================================================================
// Dataset text format
//=========================================================================

namespace {

std::string sequences_to_line(
    const std::vector<std::vector<std::string>>& seqs) {
  std::ostringstream os;
  for (size_t i = 0; i < seqs.size(); ++i) {
    if (i) os << " ";
    os << circuit_to_string(seqs[i]);
  }
  return os.str();
}

std::vector<std::vector<std::string>> sequences_from_line(
    const std::string& line) {
  std::vector<std::vector<std::string>> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(circuit_from_string(tok));
  return out;
}

}  // namespace

std::string dataset_to_text(const GSTDataset& dataset) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# gst dataset v1\n";
  os << "# num_qubits " << dataset.num_qubits << "\n";
  os << "# prep_fiducials " << sequences_to_line(dataset.fiducials.prep)
     << "\n";
  os << "# meas_fiducials " << sequences_to_line(dataset.fiducials.meas)
     << "\n";
  os << "# germs " << sequences_to_line(dataset.germs.germs) << "\n";
  os << "# max_germ_length " << dataset.germs.max_length << "\n";
  os << "# columns: prep germ meas L circuit c00 c01 c10 c11 shots\n";
  for (const GSTRecord& r : dataset.records) {
    os << r.key.prep << " " << r.key.germ << " " << r.key.meas << " "
       << r.key.length << " " << circuit_to_string(r.circuit);
    for (double c : r.counts) os << " " << c;
    os << " " << r.shots << "\n";
  }
  return os.str();
}

GSTDataset dataset_from_text(const std::string& text) {
  GSTDataset ds;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      std::string rest;
      std::getline(hs, rest);
      if (key == "num_qubits") ds.num_qubits = std::stoi(rest);
      else if (key == "prep_fiducials") ds.fiducials.prep = sequences_from_line(rest);
      else if (key == "meas_fiducials") ds.fiducials.meas = sequences_from_line(rest);
      else if (key == "germs") ds.germs.germs = sequences_from_line(rest);
      else if (key == "max_germ_length") ds.germs.max_length = std::stoi(rest);
      continue;
    }
    std::istringstream rs(line);
    GSTRecord rec;
    std::string circuit;
    rs >> rec.key.prep >> rec.key.germ >> rec.key.meas >> rec.key.length >>
        circuit >> rec.counts[0] >> rec.counts[1] >> rec.counts[2] >>
        rec.counts[3] >> rec.shots;
    if (rs.fail()) throw std::invalid_argument("malformed dataset line: " + line);
    rec.circuit = circuit_from_string(circuit);
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

//=========================================================================
// CSV and Markdown
//=========================================================================

std::string rb_curve_to_csv(const RBCurve& curve) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "m,mean,stderr,fitted\n";
  for (const DecayPoint& pt : curve.points) {
    double fitted = curve.fit.A + curve.fit.B * std::pow(curve.fit.p, pt.m);
    os << pt.m << "," << pt.mean << "," << pt.stderr_ << "," << fitted << "\n";
  }
  return os.str();
}

std::string drift_report_to_csv(const DriftReport& report) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "tag,to_ideal_lower,to_ideal_upper,to_seed_lower,to_seed_upper,"
        "to_previous_lower,to_previous_upper\n";
  for (const DriftEntry& e : report.series) {
    os << e.tag << "," << e.to_ideal.lower << "," << e.to_ideal.upper << ","
       << e.to_seed.lower << "," << e.to_seed.upper << ",";
    if (e.to_previous)
      os << e.to_previous->lower << "," << e.to_previous->upper;
    else
      os << ",";
    os << "\n";
  }
  return os.str();
}

std::string params_markdown_table(
    const std::vector<std::pair<std::string, CorrectionParams>>& rows) {
  std::ostringstream os;
  const int n = rows.empty() ? 6 : param_count(rows.front().second.mode);
  os << "| Cycle |";
  const char* names[3] = {"theta", "phi", "lambda"};
  for (int i = 0; i < n; ++i)
    os << " " << names[i % 3] << "_" << (i / 3 + 1) << " |";
  os << "\n|" << std::string(7, '-') << "|";
  for (int i = 0; i < n; ++i) os << "--------|";
  os << "\n";
  for (const auto& [tag, params] : rows) {
    os << "| " << tag << " |";
    for (double a : params.canonicalized().angles)
      os << " " << three_decimals(a) << " |";
    os << "\n";
  }
  return os.str();
}

//=========================================================================
// Files
//=========================================================================

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json read_json_file(const std::string& path) {
  return json::parse(read_file(path));
}

void write_json_file(const std::string& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

}  // namespace post
