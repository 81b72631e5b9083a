#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "semijulia/cloud.hpp"
#include "semijulia/lemma.hpp"
#include "semijulia/version.hpp"

// JSON report assembly shared by the CLI and its tests. Complex numbers are
// [re, im] pairs; exact rationals are "p/q" strings; the point at infinity
// serializes as the string "infinity".

namespace semijulia {

using Json = nlohmann::json;

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const SpherePoint& p) {
  if (p.is_infinity()) return Json("infinity");
  return Json::array({p.re(), p.im()});
}

inline Json to_json(const Rational& r) { return Json(rational_str(r)); }

inline Json cloud_stats(const SetApprox& cloud) {
  std::size_t finite = 0, infinite = 0;
  double abs_min = HUGE_VAL, abs_max = 0.0;
  for (const auto& p : cloud.points) {
    if (p.is_infinity()) {
      ++infinite;
      continue;
    }
    ++finite;
    const double a = p.abs();
    abs_min = std::min(abs_min, a);
    abs_max = std::max(abs_max, a);
  }
  Json j{{"kind", to_string(cloud.kind)},
         {"count", cloud.points.size()},
         {"finite", finite},
         {"infinite", infinite},
         {"depth", cloud.depth},
         {"budget", cloud.budget},
         {"seed", cloud.seed}};
  if (finite > 0) {
    j["abs_min"] = abs_min;
    j["abs_max"] = abs_max;
  }
  return j;
}

inline Json make_report(const std::string& command, Json config, Json results,
                        double elapsed_ms) {
  return Json{{"command", command},
              {"version", kVersion},
              {"reproducibility", Json{{"seed", config.value("seed", 0)},
                                       {"version", kVersion}}},
              {"config", std::move(config)},
              {"results", std::move(results)},
              {"timings", Json{{"total_ms", elapsed_ms}}}};
}

}  // namespace semijulia
