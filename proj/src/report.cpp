#include "dilatelab/report.hpp"

namespace dilatelab {

InequalityReport InequalityReport::make(std::string name, Rat lhs, Rat rhs,
                                        nlohmann::json witness) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.holds = r.lhs <= r.rhs;
  r.slack = r.rhs - r.lhs;
  r.witness = std::move(witness);
  return r;
}

nlohmann::json rat_to_json(const Rat& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) {
    return static_cast<std::int64_t>(q.get_num().get_si());
  }
  return rat_str(q);
}

nlohmann::json to_json(const InequalityReport& r) {
  nlohmann::json j{
      {"name", r.name},
      {"lhs", rat_to_json(r.lhs)},
      {"rhs", rat_to_json(r.rhs)},
      {"holds", r.holds},
      {"slack", rat_to_json(r.slack)},
  };
  if (!r.witness.is_null()) j["witness"] = r.witness;
  return j;
}

nlohmann::json to_json(const IntSet& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (i64 x : s) arr.push_back(x);
  return arr;
}

nlohmann::json to_json(const DilateVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (i64 c : v.coeffs()) arr.push_back(c);
  return arr;
}

}  // namespace dilatelab
