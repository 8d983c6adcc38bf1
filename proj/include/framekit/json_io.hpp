#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/policy.hpp"
#include "framekit/window.hpp"

// JSON shapes for frames, reports and window descriptors. Keys are emitted in
// a fixed order so identical inputs produce byte-identical output.

namespace framekit {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"dim": d, "vectors": [K column vectors, each a list of [re, im] pairs]}
inline Json to_json(const FiniteFrame& frame) {
  Json vectors = Json::array();
  for (Eigen::Index k = 0; k < frame.size(); ++k) {
    Json col = Json::array();
    for (Eigen::Index i = 0; i < frame.dim(); ++i) {
      const Complex v = frame.synthesis()(i, k);
      col.push_back(Json::array({v.real(), v.imag()}));
    }
    vectors.push_back(std::move(col));
  }
  return Json{{"dim", frame.dim()}, {"vectors", std::move(vectors)}};
}

inline FiniteFrame frame_from_json(const Json& j) {
  if (!j.contains("dim") || !j.contains("vectors")) throw SpecError("frame: need dim and vectors");
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& vectors = j.at("vectors");
  if (!vectors.is_array() || vectors.empty()) throw SpecError("frame: vectors must be a nonempty array");
  ComplexMatrix t(dim, static_cast<Eigen::Index>(vectors.size()));
  Eigen::Index k = 0;
  for (const auto& col : vectors) {
    if (static_cast<Eigen::Index>(col.size()) != dim) throw SpecError("frame: vector length mismatch");
    for (Eigen::Index i = 0; i < dim; ++i)
      t(i, k) = Complex{col.at(i).at(0).get<double>(), col.at(i).at(1).get<double>()};
    ++k;
  }
  return FiniteFrame(std::move(t));
}

inline Json to_json(const FrameBoundsEstimate& b) {
  return Json{{"lower", b.lower}, {"upper", b.upper}};
}

inline Json to_json(const BoundReport& r) {
  return Json{{"value", r.value},
              {"tail_certificate", r.tail_certificate},
              {"grid_points", r.grid_points},
              {"refined", r.refined}};
}

inline Json to_json(const ResidualProfile& p) {
  Json rn = Json::object();
  for (const auto& [n, v] : p.rn) rn[std::to_string(n)] = v;
  return Json{{"r0", p.r0},
              {"rn", std::move(rn)},
              {"n_cutoff", p.n_cutoff},
              {"tail_certificate", p.tail_certificate},
              {"sup_correction", p.sup_correction},
              {"lipschitz", std::isfinite(p.lipschitz) ? Json(p.lipschitz) : Json("inf")},
              {"grid_points", p.grid_points},
              {"refined", p.refined}};
}

inline Json to_json(const TruncationPolicy& p) {
  return Json{{"grid_points", p.grid_points},
              {"k_tail_tol", p.k_tail_tol},
              {"n_tail_tol", p.n_tail_tol},
              {"quadrature_abs_tol", p.quadrature_abs_tol},
              {"lattice_cutoff_m", p.lattice_cutoff_m},
              {"lattice_cutoff_n", p.lattice_cutoff_n},
              {"refine_rel_tol", p.refine_rel_tol},
              {"max_grid_points", p.max_grid_points}};
}

// Window descriptors: {"kind": ..., "params": {...}}. Kinds:
//   gaussian {amplitude, width}
//   bspline {order}
//   ck_dual {order, b}
//   indicator {lo, hi}
//   scaled {factor, base}
//   dilated {factor, base}
//   difference {left, right}
//   painless_dual {base, a, b}
inline Window window_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("params"))
    throw SpecError("window: need kind and params");
  const std::string kind = j.at("kind").get<std::string>();
  const Json& p = j.at("params");
  try {
    if (kind == "gaussian")
      return gaussian_window(p.at("amplitude").get<double>(), p.at("width").get<double>());
    if (kind == "bspline") return bspline_window(p.at("order").get<int>());
    if (kind == "ck_dual")
      return ck_dual_window(p.at("order").get<int>(), p.at("b").get<double>());
    if (kind == "indicator")
      return indicator_window(p.at("lo").get<double>(), p.at("hi").get<double>());
    if (kind == "scaled")
      return scale_window(window_from_json(p.at("base")), p.at("factor").get<double>());
    if (kind == "dilated")
      return dilate_window(window_from_json(p.at("base")), p.at("factor").get<double>());
    if (kind == "difference")
      return difference_window(window_from_json(p.at("left")), window_from_json(p.at("right")));
    if (kind == "painless_dual")
      return painless_canonical_dual(window_from_json(p.at("base")), p.at("a").get<double>(),
                                     p.at("b").get<double>());
  } catch (const Json::exception& e) {
    throw SpecError(std::string("window '") + kind + "': " + e.what());
  } catch (const WindowError& e) {
    throw SpecError(std::string("window '") + kind + "': " + e.what());
  } catch (const BsplineError& e) {
    throw SpecError(std::string("window '") + kind + "': " + e.what());
  }
  throw SpecError("window: unknown kind '" + kind + "'");
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

}  // namespace framekit
