// JSON emitters for the report types, kept out of the public headers so
// the installed interface stays std-only.

#include <json.hpp>

#include "hlab/estimates.hpp"
#include "hlab/harnack.hpp"
#include "hlab/param_functions.hpp"
#include "hlab/pde_solver.hpp"

namespace hlab {

using nlohmann::json;

std::string ConditionReport::to_json() const {
  json j;
  j["grid"] = grid;
  j["c2_margins"] = {{"m1", m1}, {"m2", m2}, {"m3", m3}};
  j["c3_margin"] = c3;
  j["boundedness"] = {{"ratio_kind", to_string(ratio_kind)},
                      {"sup_value", ratio_sup}};
  j["monotone_ok"] = {{"gamma_nondecreasing", gamma_nondecreasing},
                      {"alpha_ok", alpha_ok}};
  j["pass"] = pass;
  return j.dump(2);
}

std::string SourceValidation::to_json() const {
  json j;
  j["min_h"] = min_h;
  j["max_h"] = max_h;
  j["worst_grad_margin"] = worst_grad_margin;
  j["worst_lap_margin"] = worst_lap_margin;
  j["delta1_margin"] = delta1_margin;
  j["pass"] = pass;
  return j.dump(2);
}

std::string EstimateReport::to_json() const {
  json j;
  j["theorem"] = theorem;
  j["region"] = region;
  j["u_bar"] = u_bar;
  j["violations"] = violations;
  j["worst_margin"] = worst_margin;
  j["rows"] = t.size();
  return j.dump(2);
}

std::string HarnackReport::to_json() const {
  json j;
  j["pairs"] = pairs.size();
  j["violations"] = violations;
  j["worst_margin"] = worst_margin;
  j["quadrature_ok"] = quadrature_ok;
  return j.dump(2);
}

}  // namespace hlab
