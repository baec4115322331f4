#pragma once

// JSON / CSV serialization of models, domains, base functions and reports.
// JSON output is deterministic: nlohmann::json keeps keys sorted and floats
// serialize with the shortest round-trip representation.

#include "hermitube/coords.hpp"
#include "hermitube/domains.hpp"
#include "hermitube/potential.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace hermitube {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// models: {"family":"sp","r":2} / {"family":"su","p":2,"q":3} / {"family":"sl2"}

inline json model_to_json(const LieModel& m) {
  json j;
  switch (m.family) {
    case Family::SL2R: j["family"] = "sl2"; break;
    case Family::SpR:
      j["family"] = "sp";
      j["r"] = m.rank;
      break;
    case Family::SUpq:
      j["family"] = "su";
      j["p"] = m.su_p();
      j["q"] = m.su_q();
      break;
  }
  j["rank"] = m.rank;
  j["tube"] = m.tube;
  j["b"] = m.b;
  j["dim_s"] = m.dim_s();
  return j;
}

inline LieModel model_from_json(const json& j) {
  std::string fam = j.at("family").get<std::string>();
  if (fam == "sl2") return LieModel::build(Family::SL2R, 1);
  if (fam == "sp") return LieModel::build(Family::SpR, j.at("r").get<int>());
  if (fam == "su") return LieModel::build(Family::SUpq, j.at("p").get<int>(), j.at("q").get<int>());
  throw std::invalid_argument("unknown family: " + fam);
}

// "sp:2", "su:2,3", "sl2" shorthand used on the command line
inline LieModel model_from_descriptor(const std::string& desc) {
  auto colon = desc.find(':');
  std::string fam = desc.substr(0, colon);
  if (fam == "sl2") return LieModel::build(Family::SL2R, 1);
  if (colon == std::string::npos) throw std::invalid_argument("model descriptor needs parameters");
  std::string rest = desc.substr(colon + 1);
  if (fam == "sp") return LieModel::build(Family::SpR, std::stoi(rest));
  if (fam == "su") {
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("su needs p,q");
    return LieModel::build(Family::SUpq, std::stoi(rest.substr(0, comma)),
                           std::stoi(rest.substr(comma + 1)));
  }
  throw std::invalid_argument("unknown family: " + fam);
}

// flattened basis matrices, one per row, for external verification
inline std::string basis_to_csv(const LieModel& m) {
  std::ostringstream os;
  os << "label,norm2";
  for (int k = 0; k < m.matrix_dim * m.matrix_dim; ++k) os << ",m" << k;
  os << "\n";
  os.precision(17);
  for (const auto& v : m.basis_s()) {
    os << v.label.str() << "," << v.norm2;
    Vec flat = detail::flatten(v.X);
    for (int k = 0; k < flat.size(); ++k) os << "," << flat(k);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// domains: {"rank":2,"tube":false,"hrep":[{"n":[-1,0],"c":-1},...]}
//          or {"rank":2,"tube":false,"cloud":[[1,3],[3,1]]}

inline json domain_to_json(const DomainBase& d) {
  json j;
  j["rank"] = d.rank();
  j["tube"] = d.cone().tube;
  if (d.rep() == DomainBase::Rep::HRep) {
    json hs = json::array();
    for (auto& h : d.halfspaces()) {
      json e;
      e["n"] = std::vector<double>(h.n.data(), h.n.data() + h.n.size());
      e["c"] = h.c;
      hs.push_back(e);
    }
    j["hrep"] = hs;
  } else {
    json pts = json::array();
    for (auto& p : d.cloud()) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    j["cloud"] = pts;
  }
  return j;
}

inline DomainBase domain_from_json(const json& j) {
  for (auto& [key, val] : j.items()) {
    (void)val;
    if (key != "rank" && key != "tube" && key != "hrep" && key != "cloud")
      throw std::invalid_argument("unknown key in domain: " + key);
  }
  int rank = j.at("rank").get<int>();
  bool tube = j.at("tube").get<bool>();
  if (j.contains("hrep")) {
    std::vector<HalfSpace> hs;
    for (auto& e : j.at("hrep")) {
      auto nv = e.at("n").get<std::vector<double>>();
      Vec n = Eigen::Map<Vec>(nv.data(), static_cast<long>(nv.size()));
      hs.push_back({n, e.at("c").get<double>()});
    }
    return DomainBase::from_hrep(rank, tube, std::move(hs));
  }
  if (j.contains("cloud")) {
    std::vector<Vec> pts;
    for (auto& e : j.at("cloud")) {
      auto pv = e.get<std::vector<double>>();
      pts.push_back(Eigen::Map<Vec>(pv.data(), static_cast<long>(pv.size())));
    }
    return DomainBase::from_cloud(rank, tube, std::move(pts));
  }
  throw std::invalid_argument("domain needs \"hrep\" or \"cloud\"");
}

inline json hull_to_json(const HullResult& h) {
  json j = domain_to_json(h.hull);
  json verts = json::array();
  for (auto& v : h.vertices) verts.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  j["vertices"] = verts;
  j["degenerate"] = h.degenerate;
  j["clipped"] = h.clipped;
  return j;
}

// 2D hull boundary polyline for plotting
inline std::string hull_boundary_csv(const HullResult& h, double extent = 10.0, int pts = 200) {
  if (h.hull.rank() != 2) throw std::invalid_argument("boundary CSV is 2D only");
  std::ostringstream os;
  os << "y1,y2\n";
  os.precision(17);
  // trace each facet segment clipped to the box (0, extent]^2
  for (auto& f : h.hull.halfspaces()) {
    for (int k = 0; k <= pts; ++k) {
      // parametrize the line n.y = c by the orthogonal direction
      Vec t(2);
      t << -f.n(1), f.n(0);
      Vec base = f.c * f.n / f.n.squaredNorm();
      Vec y = base + (2.0 * k / pts - 1.0) * extent * t;
      if (y.minCoeff() > 0 && y.maxCoeff() <= extent && h.hull.contains(y, 1e-6))
        os << y(0) << "," << y(1) << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// base functions: {"kind":"logbarrier","alpha":[...]}, {"kind":"affine",...},
// {"kind":"reciprocal","rank":r}, {"kind":"grid","points":[[...],...],"values":[...]}

inline BaseFunction basefunction_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "affine") {
    auto cv = j.at("c").get<std::vector<double>>();
    return BaseFunction::affine(Eigen::Map<Vec>(cv.data(), static_cast<long>(cv.size())),
                                j.value("d", 0.0));
  }
  if (kind == "logbarrier") {
    auto av = j.at("alpha").get<std::vector<double>>();
    return BaseFunction::log_barrier(Eigen::Map<Vec>(av.data(), static_cast<long>(av.size())));
  }
  if (kind == "reciprocal") return BaseFunction::reciprocal(j.at("rank").get<int>());
  if (kind == "grid") {
    std::vector<Vec> axes;
    for (auto& e : j.at("points")) {
      auto av = e.get<std::vector<double>>();
      axes.push_back(Eigen::Map<Vec>(av.data(), static_cast<long>(av.size())));
    }
    auto vv = j.at("values").get<std::vector<double>>();
    return BaseFunction::grid_sampled(std::move(axes),
                                      Eigen::Map<Vec>(vv.data(), static_cast<long>(vv.size())));
  }
  throw std::invalid_argument("unknown base function kind: " + kind);
}

// ---------------------------------------------------------------------------
// reports

inline json report_to_json(const VerificationReport& r) {
  json j;
  j["name"] = r.name;
  j["trials"] = r.trials;
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline std::string dump_sorted(const json& j) { return j.dump(2); }  // keys already sorted

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << content;
}

}  // namespace hermitube
