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

#include "gdmp/config.hpp"

#include <set>

#include "gdmp/errors.hpp"
#include "gdmp/io.hpp"

namespace gdmp {
namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (!allowed.count(key))
      throw InvalidParameter("config: unknown key '" + key + "' in section " + where);
  }
}

Eigen::VectorXd to_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

nlohmann::json from_vector(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig cfg;
  reject_unknown(j, {"sampling", "curvefit", "gdmp", "phaseopt", "kinematics", "hil"},
                 "(top level)");

  if (j.contains("sampling")) {
    const auto& s = j["sampling"];
    reject_unknown(s, {"delta", "position_dims"}, "sampling");
    cfg.delta = s.value("delta", cfg.delta);
    if (cfg.delta <= 0.0) throw InvalidParameter("config: sampling.delta must be > 0");
    if (s.contains("position_dims"))
      for (const auto& x : s["position_dims"]) cfg.position_dims.push_back(x.get<int>());
  }

  if (j.contains("curvefit")) {
    const auto& c = j["curvefit"];
    reject_unknown(c, {"n_basis", "width_scale", "ridge"}, "curvefit");
    cfg.n_basis = c.value("n_basis", cfg.n_basis);
    cfg.width_scale = c.value("width_scale", cfg.width_scale);
    cfg.ridge = c.value("ridge", cfg.ridge);
    if (cfg.n_basis < 2) throw InvalidParameter("config: curvefit.n_basis must be >= 2");
  }

  if (j.contains("gdmp")) {
    const auto& g = j["gdmp"];
    reject_unknown(g, {"alpha", "beta", "g", "y0"}, "gdmp");
    cfg.alpha = g.value("alpha", cfg.alpha);
    cfg.beta = g.value("beta", cfg.beta);
    if (cfg.alpha <= 0.0 || cfg.beta <= 0.0)
      throw InvalidParameter("config: gdmp gains must be > 0");
    if (g.contains("g") && !g["g"].is_null()) cfg.goal = to_vector(g["g"]);
    if (g.contains("y0") && !g["y0"].is_null()) cfg.start = to_vector(g["y0"]);
  }

  if (j.contains("phaseopt")) {
    nlohmann::json p = j["phaseopt"];
    if (p.contains("grid")) {
      cfg.grid = p["grid"].get<int>();
      p.erase("grid");
      if (cfg.grid < 100) throw InvalidParameter("config: phaseopt.grid must be >= 100");
    }
    if (p.contains("use_joint_constraints")) {
      cfg.use_joint_constraints = p["use_joint_constraints"].get<bool>();
      p.erase("use_joint_constraints");
    }
    cfg.constraints = constraints_from_json(p);
  }

  if (j.contains("kinematics")) {
    const auto& k = j["kinematics"];
    reject_unknown(k, {"l1", "l2", "elbow_up", "q_min", "q_max", "plane_dims",
                       "n_basis"},
                   "kinematics");
    cfg.arm.l1 = k.value("l1", cfg.arm.l1);
    cfg.arm.l2 = k.value("l2", cfg.arm.l2);
    cfg.arm.elbow_up = k.value("elbow_up", cfg.arm.elbow_up);
    if (cfg.arm.l1 <= 0.0 || cfg.arm.l2 <= 0.0)
      throw InvalidParameter("config: link lengths must be > 0");
    if (k.contains("q_min")) {
      const auto v = to_vector(k["q_min"]);
      if (v.size() != 2) throw InvalidParameter("config: q_min needs 2 entries");
      cfg.arm.q_min = v;
    }
    if (k.contains("q_max")) {
      const auto v = to_vector(k["q_max"]);
      if (v.size() != 2) throw InvalidParameter("config: q_max needs 2 entries");
      cfg.arm.q_max = v;
    }
    if (k.contains("plane_dims")) {
      if (k["plane_dims"].size() != 2)
        throw InvalidParameter("config: plane_dims needs 2 entries");
      cfg.plane_dims = {k["plane_dims"][0].get<int>(), k["plane_dims"][1].get<int>()};
    }
    cfg.joint_n_basis = k.value("n_basis", cfg.joint_n_basis);
  }

  if (j.contains("hil")) {
    const auto& h = j["hil"];
    reject_unknown(h, {"m", "b", "t0", "dt", "duration", "s_start", "sd_start",
                       "human"},
                   "hil");
    cfg.hil.mass = h.value("m", cfg.hil.mass);
    cfg.hil.damping = h.value("b", cfg.hil.damping);
    cfg.hil.delay = h.value("t0", cfg.hil.delay);
    cfg.hil.dt = h.value("dt", cfg.hil.dt);
    cfg.hil.duration = h.value("duration", cfg.hil.duration);
    cfg.hil.s_start = h.value("s_start", cfg.hil.s_start);
    cfg.hil.sd_start = h.value("sd_start", cfg.hil.sd_start);
    if (h.contains("human")) {
      const auto& hm = h["human"];
      reject_unknown(hm, {"kind", "K_h", "B_h", "s_goal", "K_p", "K_d", "rate",
                          "tremor"},
                     "hil.human");
      const std::string kind = hm.value("kind", std::string("impedance"));
      if (kind == "impedance")
        cfg.hil.human.kind = HumanModel::Kind::impedance;
      else if (kind == "intent")
        cfg.hil.human.kind = HumanModel::Kind::intent;
      else
        throw InvalidParameter("config: hil.human.kind must be impedance or intent");
      cfg.hil.human.stiffness = hm.value("K_h", cfg.hil.human.stiffness);
      cfg.hil.human.damping = hm.value("B_h", cfg.hil.human.damping);
      cfg.hil.human.s_goal = hm.value("s_goal", cfg.hil.human.s_goal);
      cfg.hil.human.k_p = hm.value("K_p", cfg.hil.human.k_p);
      cfg.hil.human.k_d = hm.value("K_d", cfg.hil.human.k_d);
      cfg.hil.human.rate = hm.value("rate", cfg.hil.human.rate);
      cfg.hil.human.tremor = hm.value("tremor", cfg.hil.human.tremor);
      if (cfg.hil.human.stiffness < 0.0 || cfg.hil.human.damping < 0.0 ||
          cfg.hil.human.k_p < 0.0 || cfg.hil.human.k_d < 0.0)
        throw InvalidParameter("config: human gains must be >= 0");
    }
  }
  return cfg;
}

nlohmann::json config_to_json(const PipelineConfig& cfg) {
  nlohmann::json j;
  j["sampling"]["delta"] = cfg.delta;
  j["sampling"]["position_dims"] = cfg.position_dims;

  j["curvefit"]["n_basis"] = cfg.n_basis;
  j["curvefit"]["width_scale"] = cfg.width_scale;
  j["curvefit"]["ridge"] = cfg.ridge;

  j["gdmp"]["alpha"] = cfg.alpha;
  j["gdmp"]["beta"] = cfg.beta;
  j["gdmp"]["g"] = cfg.goal ? from_vector(*cfg.goal) : nlohmann::json();
  j["gdmp"]["y0"] = cfg.start ? from_vector(*cfg.start) : nlohmann::json();

  j["phaseopt"] = constraints_to_json(cfg.constraints);
  j["phaseopt"]["grid"] = cfg.grid;
  j["phaseopt"]["use_joint_constraints"] = cfg.use_joint_constraints;

  j["kinematics"]["l1"] = cfg.arm.l1;
  j["kinematics"]["l2"] = cfg.arm.l2;
  j["kinematics"]["elbow_up"] = cfg.arm.elbow_up;
  j["kinematics"]["q_min"] = {cfg.arm.q_min(0), cfg.arm.q_min(1)};
  j["kinematics"]["q_max"] = {cfg.arm.q_max(0), cfg.arm.q_max(1)};
  j["kinematics"]["plane_dims"] = {cfg.plane_dims[0], cfg.plane_dims[1]};
  j["kinematics"]["n_basis"] = cfg.joint_n_basis;

  j["hil"]["m"] = cfg.hil.mass;
  j["hil"]["b"] = cfg.hil.damping;
  j["hil"]["t0"] = cfg.hil.delay;
  j["hil"]["dt"] = cfg.hil.dt;
  j["hil"]["duration"] = cfg.hil.duration;
  j["hil"]["s_start"] = cfg.hil.s_start;
  j["hil"]["sd_start"] = cfg.hil.sd_start;
  j["hil"]["human"]["kind"] =
      cfg.hil.human.kind == HumanModel::Kind::impedance ? "impedance" : "intent";
  j["hil"]["human"]["K_h"] = cfg.hil.human.stiffness;
  j["hil"]["human"]["B_h"] = cfg.hil.human.damping;
  j["hil"]["human"]["s_goal"] = cfg.hil.human.s_goal;
  j["hil"]["human"]["K_p"] = cfg.hil.human.k_p;
  j["hil"]["human"]["K_d"] = cfg.hil.human.k_d;
  j["hil"]["human"]["rate"] = cfg.hil.human.rate;
  j["hil"]["human"]["tremor"] = cfg.hil.human.tremor;
  return j;
}

}  // namespace gdmp
