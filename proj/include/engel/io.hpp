#ifndef ENGEL_IO_HPP
#define ENGEL_IO_HPP

#include <string>

#include <json.hpp>

#include "engel/curve.hpp"
#include "engel/group.hpp"
#include "engel/steering.hpp"
#include "engel/whitney.hpp"

namespace engel::io {

using json = nlohmann::json;

/// Curve input: either polynomial controls with a domain and start point, or
/// sampled controls. {"controls":{"u1":{"poly":[...]},"u2":{...}},
/// "domain":[t0,t1],"start":[0,0,0,0]} | {"samples":{"times":[...],
/// "u1":[...],"u2":[...]},"start":[...]}.
struct CurveInput {
  ControlPair controls;
  GroupPoint start;
};

CurveInput parse_curve(const json& j);

/// Steering problem: {"a":...,"b":...,"target":[4 coords],
/// "end_deriv":[u1,u2] (optional), "tol":... (optional)}.
struct ProblemInput {
  double a = 0.0, b = 0.0;
  GroupPoint target;
  bool has_end_deriv = false;
  std::array<double, 2> end_deriv{};
  double tol = 1e-10;
};

ProblemInput parse_problem(const json& j);

/// Fragment: {"K":[[a,b],...],"samples":[{"t":...,"point":[...],
/// "X":[u1,u2]},...]}.
CurveFragment parse_fragment(const json& j);

/// Probe input: {"b":...,"trials":...}.
struct ProbeInput {
  double b = 1.0;
  int trials = 1000;
};

ProbeInput parse_probe(const json& j);

json point_to_json(const GroupPoint& p);
json curve_to_json(const SampledCurve& c);

/// CSV with header t,x1,x2,x3,x4,u1,u2 and %.17g formatting; curves without
/// derivatives emit 0 for u1,u2.
std::string curve_to_csv(const SampledCurve& c);
SampledCurve curve_from_csv(const std::string& text);

std::string read_file(const std::string& path);
/// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

json load_json(const std::string& path);

}  // namespace engel::io

#endif
