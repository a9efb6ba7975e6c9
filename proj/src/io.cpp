// Copyright 2026 The gdmp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gdmp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gdmp/errors.hpp"

namespace gdmp {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& tok, const std::string& path) {
  double v = 0.0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{})
    throw InvalidParameter("csv: bad number '" + tok + "' in " + path);
  return v;
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    j.push_back(vector_json(m.row(r).transpose()));
  return j;
}

Eigen::MatrixXd json_matrix(const nlohmann::json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return {};
  const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index r = 0;
  for (const auto& row : j) {
    Eigen::Index c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("csv: cannot open " + path + " for writing");
  for (size_t i = 0; i < header.size(); ++i)
    f << (i ? "," : "") << header[i];
  f << "\n";
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c)
      f << (c ? "," : "") << format_double(rows(r, c));
    f << "\n";
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw InvalidParameter("csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  CsvTable tab;
  tab.header = split(line, ',');
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto toks = split(line, ',');
    if (toks.size() != tab.header.size())
      throw InvalidParameter("csv: ragged row in " + path);
    std::vector<double> row(toks.size());
    for (size_t i = 0; i < toks.size(); ++i) row[i] = parse_double(toks[i], path);
    rows.push_back(std::move(row));
  }
  tab.rows.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(tab.header.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      tab.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return tab;
}

TimedTrajectory read_timed_trajectory(const std::string& path) {
  const CsvTable tab = read_csv(path);
  if (tab.header.empty() || tab.header[0] != "t")
    throw InvalidParameter("trajectory csv: first column must be 't' in " + path);
  std::vector<int> pos_cols, aux_cols;
  for (size_t i = 1; i < tab.header.size(); ++i) {
    if (!tab.header[i].empty() && tab.header[i][0] == 'x')
      pos_cols.push_back(static_cast<int>(i));
    else if (!tab.header[i].empty() && tab.header[i][0] == 'a')
      aux_cols.push_back(static_cast<int>(i));
    else
      throw InvalidParameter("trajectory csv: unknown column '" + tab.header[i] +
                             "' in " + path);
  }
  if (pos_cols.empty())
    throw InvalidParameter("trajectory csv: no position columns in " + path);
  const Eigen::Index n = tab.rows.rows();
  if (n < 2) throw InvalidParameter("trajectory csv: need at least 2 rows in " + path);

  const double period = tab.rows(1, 0) - tab.rows(0, 0);
  if (period <= 0.0)
    throw InvalidParameter("trajectory csv: repeated or non-increasing timestamps");
  for (Eigen::Index k = 1; k < n; ++k) {
    const double dt = tab.rows(k, 0) - tab.rows(k - 1, 0);
    if (dt <= 0.0)
      throw InvalidParameter("trajectory csv: repeated or non-increasing timestamps");
    if (std::abs(dt - period) > 1e-6 * std::max(1.0, period))
      throw InvalidParameter("trajectory csv: non-uniform sampling period");
  }

  TimedTrajectory traj;
  traj.period = period;
  traj.points.resize(n, static_cast<Eigen::Index>(pos_cols.size()));
  for (size_t c = 0; c < pos_cols.size(); ++c)
    traj.points.col(static_cast<Eigen::Index>(c)) = tab.rows.col(pos_cols[c]);
  if (!aux_cols.empty()) {
    traj.aux.resize(n, static_cast<Eigen::Index>(aux_cols.size()));
    for (size_t c = 0; c < aux_cols.size(); ++c)
      traj.aux.col(static_cast<Eigen::Index>(c)) = tab.rows.col(aux_cols[c]);
  }
  return traj;
}

void write_timed_trajectory(const std::string& path, const TimedTrajectory& traj) {
  std::vector<std::string> header{"t"};
  for (int i = 0; i < traj.dims(); ++i) header.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < traj.aux.cols(); ++i) header.push_back("a" + std::to_string(i + 1));
  Eigen::MatrixXd rows(traj.sample_count(), 1 + traj.dims() + traj.aux.cols());
  for (int k = 0; k < traj.sample_count(); ++k) {
    rows(k, 0) = traj.time_at(k);
    rows.block(k, 1, 1, traj.dims()) = traj.points.row(k);
    if (traj.aux.cols() > 0)
      rows.block(k, 1 + traj.dims(), 1, traj.aux.cols()) = traj.aux.row(k);
  }
  write_csv(path, header, rows);
}

void write_spatial_path(const std::string& path, const SpatialPath& sp) {
  std::vector<std::string> header{"s", "t"};
  for (int i = 0; i < sp.dims(); ++i) header.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < sp.aux.cols(); ++i) header.push_back("a" + std::to_string(i + 1));
  Eigen::MatrixXd rows(sp.sample_count(), 2 + sp.dims() + sp.aux.cols());
  for (int k = 0; k < sp.sample_count(); ++k) {
    rows(k, 0) = sp.arclengths(k);
    rows(k, 1) = sp.times(k);
    rows.block(k, 2, 1, sp.dims()) = sp.points.row(k);
    if (sp.aux.cols() > 0)
      rows.block(k, 2 + sp.dims(), 1, sp.aux.cols()) = sp.aux.row(k);
  }
  write_csv(path, header, rows);
}

SpatialPath read_spatial_path(const std::string& path) {
  const CsvTable tab = read_csv(path);
  if (tab.header.size() < 3 || tab.header[0] != "s" || tab.header[1] != "t")
    throw InvalidParameter("spatial path csv: expected 's,t,x...' in " + path);
  int d = 0, m_aux = 0;
  for (size_t i = 2; i < tab.header.size(); ++i) {
    if (!tab.header[i].empty() && tab.header[i][0] == 'x')
      ++d;
    else
      ++m_aux;
  }
  SpatialPath sp;
  const Eigen::Index n = tab.rows.rows();
  if (n < 2) throw InvalidParameter("spatial path csv: need at least 2 rows");
  sp.arclengths = tab.rows.col(0);
  sp.times = tab.rows.col(1);
  sp.points = tab.rows.block(0, 2, n, d);
  if (m_aux > 0) sp.aux = tab.rows.block(0, 2 + d, n, m_aux);
  sp.delta = n > 1 ? sp.arclengths(1) - sp.arclengths(0) : 0.0;
  sp.demo_end = sp.points.row(n - 1).transpose();
  return sp;
}

void write_timing_law(const std::string& path, const TimingLaw& law) {
  Eigen::MatrixXd rows(law.sample_count(), 2);
  rows.col(0) = law.t;
  rows.col(1) = law.s;
  write_csv(path, {"t", "s"}, rows);
}

TimingLaw read_timing_law(const std::string& path) {
  const CsvTable tab = read_csv(path);
  if (tab.header.size() != 2 || tab.header[0] != "t" || tab.header[1] != "s")
    throw InvalidParameter("timing law csv: expected 't,s' in " + path);
  TimingLaw law;
  law.t = tab.rows.col(0);
  law.s = tab.rows.col(1);
  return law;
}

void write_phase_profile(const std::string& path, const PhaseProfile& prof) {
  Eigen::MatrixXd rows(prof.steps(), 4);
  rows.col(0) = prof.t;
  rows.col(1) = prof.s;
  rows.col(2) = prof.sd;
  rows.col(3) = prof.sdd;
  write_csv(path, {"t", "s", "sd", "sdd"}, rows);
}

PhaseProfile read_phase_profile(const std::string& path) {
  const CsvTable tab = read_csv(path);
  if (tab.header.size() != 4 || tab.header[0] != "t")
    throw InvalidParameter("phase profile csv: expected 't,s,sd,sdd' in " + path);
  PhaseProfile prof;
  prof.t = tab.rows.col(0);
  prof.s = tab.rows.col(1);
  prof.sd = tab.rows.col(2);
  prof.sdd = tab.rows.col(3);
  prof.dt = prof.t.size() > 1 ? prof.t(1) - prof.t(0) : 0.0;
  return prof;
}

void write_rollout_trace(const std::string& path, const RolloutTrace& tr) {
  const int d = static_cast<int>(tr.y.cols());
  std::vector<std::string> header{"t", "s", "sd"};
  for (int i = 0; i < d; ++i) header.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < d; ++i) header.push_back("v" + std::to_string(i + 1));
  for (int i = 0; i < d; ++i) header.push_back("a" + std::to_string(i + 1));
  Eigen::MatrixXd rows(tr.steps(), 3 + 3 * d);
  rows.col(0) = tr.t;
  rows.col(1) = tr.s;
  rows.col(2) = tr.sd;
  rows.block(0, 3, tr.steps(), d) = tr.y;
  rows.block(0, 3 + d, tr.steps(), d) = tr.yd;
  rows.block(0, 3 + 2 * d, tr.steps(), d) = tr.ydd;
  write_csv(path, header, rows);
}

void write_sim_trace(const std::string& path, const SimTrace& tr) {
  const int d = static_cast<int>(tr.y.cols());
  std::vector<std::string> header{"t", "s", "sd", "sdd"};
  const auto block_names = [&header, d](const std::string& prefix) {
    for (int i = 0; i < d; ++i) header.push_back(prefix + std::to_string(i + 1));
  };
  block_names("y");
  block_names("yd");
  block_names("ym");
  block_names("ymd");
  block_names("fh");
  for (const char* name : {"f_tau", "p_tau", "p_port", "storage", "ek1", "eu", "ek2",
                           "residual"})
    header.emplace_back(name);
  const int n = tr.steps();
  Eigen::MatrixXd rows(n, 4 + 5 * d + 8);
  rows.col(0) = tr.t;
  rows.col(1) = tr.s;
  rows.col(2) = tr.sd;
  rows.col(3) = tr.sdd;
  int c = 4;
  for (const Eigen::MatrixXd* m : {&tr.y, &tr.yd, &tr.ym, &tr.ymd, &tr.fh}) {
    rows.block(0, c, n, d) = *m;
    c += d;
  }
  for (const Eigen::VectorXd* v : {&tr.f_tau, &tr.p_tau, &tr.p_port, &tr.storage,
                                   &tr.ek1, &tr.eu, &tr.ek2, &tr.residual})
    rows.col(c++) = *v;
  write_csv(path, header, rows);
}

nlohmann::json curve_to_json(const ParametricCurve& curve) {
  nlohmann::json j;
  j["n_basis"] = curve.basis.size();
  j["centers"] = vector_json(curve.basis.centers);
  j["width"] = curve.basis.width;
  j["s_f"] = curve.s_f;
  j["weights"] = matrix_json(curve.weights);
  j["delta"] = curve.delta;
  j["goal"] = vector_json(curve.goal);
  j["start"] = vector_json(curve.start);
  j["fit_rms"] = curve.fit_rms;
  return j;
}

ParametricCurve curve_from_json(const nlohmann::json& j) {
  ParametricCurve curve;
  curve.basis.centers = json_vector(j.at("centers"));
  curve.basis.width = j.at("width").get<double>();
  curve.s_f = j.at("s_f").get<double>();
  curve.weights = json_matrix(j.at("weights"));
  curve.delta = j.at("delta").get<double>();
  curve.goal = json_vector(j.at("goal"));
  curve.start = json_vector(j.at("start"));
  curve.fit_rms = j.value("fit_rms", 0.0);
  if (curve.basis.size() != curve.weights.cols())
    throw InvalidParameter("curve json: weights/centers size mismatch");
  return curve;
}

void save_curve(const std::string& path, const ParametricCurve& curve) {
  write_json(path, curve_to_json(curve));
}

ParametricCurve load_curve(const std::string& path) {
  return curve_from_json(load_json(path));
}

nlohmann::json system_to_json(const GdmpSystem& sys) {
  nlohmann::json j = curve_to_json(sys.curve);
  j["alpha"] = vector_json(sys.alpha);
  j["beta"] = vector_json(sys.beta);
  j["g"] = vector_json(sys.goal);
  j["y0"] = vector_json(sys.start);
  j["g_r"] = vector_json(sys.ref_goal);
  j["y_r0"] = vector_json(sys.ref_start);
  j["eta"] = vector_json(sys.scaling);
  return j;
}

GdmpSystem system_from_json(const nlohmann::json& j) {
  GdmpSystem sys;
  sys.curve = curve_from_json(j);
  sys.alpha = json_vector(j.at("alpha"));
  sys.beta = json_vector(j.at("beta"));
  sys.goal = json_vector(j.at("g"));
  sys.start = json_vector(j.at("y0"));
  sys.ref_goal = json_vector(j.at("g_r"));
  sys.ref_start = json_vector(j.at("y_r0"));
  sys.scaling = json_vector(j.at("eta"));
  return sys;
}

nlohmann::json constraints_to_json(const ConstraintSet& cons) {
  nlohmann::json j;
  if (cons.sd_max) j["sd_max"] = *cons.sd_max;
  if (cons.sdd_max) j["sdd_max"] = *cons.sdd_max;
  if (cons.sddd_max) j["sddd_max"] = *cons.sddd_max;
  if (cons.yd_max) j["yd_max"] = *cons.yd_max;
  if (cons.ydd_max) j["ydd_max"] = *cons.ydd_max;
  if (cons.qd_max) j["qd_max"] = vector_json(*cons.qd_max);
  if (cons.qdd_max) j["qdd_max"] = vector_json(*cons.qdd_max);
  j["task_per_axis"] = cons.task_per_axis;
  return j;
}

ConstraintSet constraints_from_json(const nlohmann::json& j) {
  ConstraintSet cons;
  for (const auto& [key, val] : j.items()) {
    if (val.is_null()) continue;
    if (key == "sd_max")
      cons.sd_max = val.get<double>();
    else if (key == "sdd_max")
      cons.sdd_max = val.get<double>();
    else if (key == "sddd_max")
      cons.sddd_max = val.get<double>();
    else if (key == "yd_max")
      cons.yd_max = val.get<double>();
    else if (key == "ydd_max")
      cons.ydd_max = val.get<double>();
    else if (key == "qd_max")
      cons.qd_max = json_vector(val);
    else if (key == "qdd_max")
      cons.qdd_max = json_vector(val);
    else if (key == "task_per_axis")
      cons.task_per_axis = val.get<bool>();
    else
      throw InvalidParameter("constraints json: unknown key '" + key + "'");
  }
  const auto positive = [](const std::optional<double>& v, const char* name) {
    if (v && *v <= 0.0)
      throw InvalidParameter(std::string("constraints json: ") + name + " must be > 0");
  };
  positive(cons.sd_max, "sd_max");
  positive(cons.sdd_max, "sdd_max");
  positive(cons.sddd_max, "sddd_max");
  positive(cons.yd_max, "yd_max");
  positive(cons.ydd_max, "ydd_max");
  if (cons.qd_max && (cons.qd_max->array() <= 0.0).any())
    throw InvalidParameter("constraints json: qd_max must be > 0");
  if (cons.qdd_max && (cons.qdd_max->array() <= 0.0).any())
    throw InvalidParameter("constraints json: qdd_max must be > 0");
  return cons;
}

nlohmann::json saturation_to_json(const SaturationReport& rep) {
  nlohmann::json j;
  j["dt"] = rep.dt;
  nlohmann::json fam = nlohmann::json::object();
  for (const auto& [name, vals] : rep.values) fam[name] = vector_json(vals);
  j["families"] = fam;
  nlohmann::json fmax = nlohmann::json::object();
  for (const auto& [name, v] : rep.family_max) fmax[name] = v;
  j["family_max"] = fmax;
  j["saturation_fraction"] = rep.saturation_fraction;
  j["max_value"] = rep.max_value;
  j["feasible"] = rep.feasible;
  j["stage2_window"] = rep.stage2_window;
  j["stage2_inflation"] = rep.stage2_inflation;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("json: cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("json: cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter("json: parse error in " + path + ": " + e.what());
  }
  return j;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gdmp
