#include "engel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "engel/errors.hpp"

namespace engel::io {

namespace {

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must contain numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

GroupPoint parse_point4(const json& j, const char* what) {
  std::vector<double> c = number_array(j, what);
  if (c.size() != 4) throw Error(ErrorCode::ParseError, std::string(what) + " must have 4 coordinates");
  return {c, CoordKind::SecondExp};
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, std::string(what) + " contains a non-finite value");
}

}  // namespace

CurveInput parse_curve(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "curve input must be a JSON object");
  CurveInput out{ControlPair::polynomial(Poly(), Poly(), 0.0, 1.0),
                 GroupPoint::identity(4, CoordKind::SecondExp)};
  if (j.contains("start")) out.start = parse_point4(j.at("start"), "start");

  if (j.contains("controls")) {
    const json& c = j.at("controls");
    if (!c.is_object() || !c.contains("u1") || !c.contains("u2"))
      throw Error(ErrorCode::ParseError, "controls must provide u1 and u2");
    auto poly_of = [](const json& u, const char* name) {
      if (!u.is_object() || !u.contains("poly"))
        throw Error(ErrorCode::ParseError, std::string(name) + " must be {\"poly\":[...]}");
      std::vector<double> coeffs = number_array(u.at("poly"), name);
      require_finite(coeffs, name);
      return Poly(std::move(coeffs));
    };
    double t0 = 0.0, t1 = 1.0;
    if (j.contains("domain")) {
      std::vector<double> d = number_array(j.at("domain"), "domain");
      if (d.size() != 2 || !(d[0] < d[1]))
        throw Error(ErrorCode::ParseError, "domain must be [t0, t1] with t0 < t1");
      t0 = d[0];
      t1 = d[1];
    }
    out.controls = ControlPair::polynomial(poly_of(c.at("u1"), "u1"), poly_of(c.at("u2"), "u2"), t0, t1);
    return out;
  }
  if (j.contains("samples")) {
    const json& s = j.at("samples");
    if (!s.is_object()) throw Error(ErrorCode::ParseError, "samples must be an object");
    std::vector<double> times = number_array(s.at("times"), "times");
    std::vector<double> u1 = number_array(s.at("u1"), "u1");
    std::vector<double> u2 = number_array(s.at("u2"), "u2");
    require_finite(times, "times");
    require_finite(u1, "u1");
    require_finite(u2, "u2");
    if (times.size() != u1.size() || times.size() != u2.size() || times.size() < 2)
      throw Error(ErrorCode::ParseError, "samples arrays must have equal length >= 2");
    try {
      out.controls = ControlPair::sampled(std::move(times), std::move(u1), std::move(u2));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    return out;
  }
  throw Error(ErrorCode::ParseError, "curve input needs either controls or samples");
}

ProblemInput parse_problem(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "problem input must be a JSON object");
  if (!j.contains("a") || !j.contains("b") || !j.contains("target"))
    throw Error(ErrorCode::ParseError, "problem requires a, b, and target");
  ProblemInput out;
  if (!j.at("a").is_number() || !j.at("b").is_number())
    throw Error(ErrorCode::ParseError, "a and b must be numbers");
  out.a = j.at("a").get<double>();
  out.b = j.at("b").get<double>();
  out.target = parse_point4(j.at("target"), "target");
  if (j.contains("end_deriv")) {
    std::vector<double> d = number_array(j.at("end_deriv"), "end_deriv");
    if (d.size() != 2) throw Error(ErrorCode::ParseError, "end_deriv must have 2 entries");
    out.has_end_deriv = true;
    out.end_deriv = {d[0], d[1]};
  }
  if (j.contains("tol")) {
    if (!j.at("tol").is_number() || j.at("tol").get<double>() <= 0.0)
      throw Error(ErrorCode::ParseError, "tol must be a positive number");
    out.tol = j.at("tol").get<double>();
  }
  return out;
}

CurveFragment parse_fragment(const json& j) {
  if (!j.is_object() || !j.contains("K") || !j.contains("samples"))
    throw Error(ErrorCode::ParseError, "fragment requires K and samples");
  std::vector<std::array<double, 2>> intervals;
  for (const auto& iv : j.at("K")) {
    std::vector<double> d = number_array(iv, "K interval");
    if (d.size() != 2) throw Error(ErrorCode::ParseError, "K intervals must be pairs");
    intervals.push_back({d[0], d[1]});
  }
  CompactSet1D K = [&] {
    try {
      return CompactSet1D(std::move(intervals));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
  }();
  CurveFragment frag{std::move(K), {}, {}, {}};
  for (const auto& s : j.at("samples")) {
    if (!s.is_object() || !s.contains("t") || !s.contains("point") || !s.contains("X"))
      throw Error(ErrorCode::ParseError, "each sample needs t, point, and X");
    if (!s.at("t").is_number()) throw Error(ErrorCode::ParseError, "sample t must be a number");
    double t = s.at("t").get<double>();
    GroupPoint p = parse_point4(s.at("point"), "sample point");
    std::vector<double> X = number_array(s.at("X"), "sample X");
    if (X.size() != 2) throw Error(ErrorCode::ParseError, "sample X must have 2 entries");
    if (!frag.times.empty() && t <= frag.times.back())
      throw Error(ErrorCode::ParseError, "sample times must be strictly increasing");
    if (!frag.K.contains(t, 1e-12))
      throw Error(ErrorCode::ParseError, "sample time lies outside K");
    frag.times.push_back(t);
    frag.points.push_back({p.coords[0], p.coords[1], p.coords[2], p.coords[3]});
    frag.X.push_back({X[0], X[1]});
  }
  if (frag.times.empty()) throw Error(ErrorCode::ParseError, "fragment has no samples");
  return frag;
}

ProbeInput parse_probe(const json& j) {
  if (!j.is_object() || !j.contains("b"))
    throw Error(ErrorCode::ParseError, "probe input requires b");
  ProbeInput out;
  if (!j.at("b").is_number()) throw Error(ErrorCode::ParseError, "b must be a number");
  out.b = j.at("b").get<double>();
  if (out.b == 0.0) throw Error(ErrorCode::InvalidArgument, "probe requires b != 0");
  if (j.contains("trials")) {
    if (!j.at("trials").is_number_integer() || j.at("trials").get<int>() <= 0)
      throw Error(ErrorCode::ParseError, "trials must be a positive integer");
    out.trials = j.at("trials").get<int>();
  }
  return out;
}

json point_to_json(const GroupPoint& p) {
  return json{{"kind", p.kind == CoordKind::SecondExp ? "second" : "first"},
              {"coords", p.coords}};
}

json curve_to_json(const SampledCurve& c) {
  json j;
  j["times"] = c.times;
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back(std::vector<double>(p.begin(), p.end()));
  j["points"] = std::move(pts);
  if (c.has_derivs()) {
    json ds = json::array();
    for (const auto& d : c.derivs) ds.push_back(std::vector<double>(d.begin(), d.end()));
    j["derivs"] = std::move(ds);
  }
  return j;
}

std::string curve_to_csv(const SampledCurve& c) {
  std::string out = "t,x1,x2,x3,x4,u1,u2\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    out += buf;
  };
  for (size_t i = 0; i < c.times.size(); ++i) {
    put(c.times[i], ',');
    for (int k = 0; k < 4; ++k) put(c.points[i][k], ',');
    double u1 = c.has_derivs() ? c.derivs[i][0] : 0.0;
    double u2 = c.has_derivs() ? c.derivs[i][1] : 0.0;
    put(u1, ',');
    put(u2, '\n');
  }
  return out;
}

SampledCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x1,x2,x3,x4,u1,u2", 0) != 0)
    throw Error(ErrorCode::ParseError, "CSV header must be t,x1,x2,x3,x4,u1,u2");
  SampledCurve c;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 7> v{};
    std::istringstream row(line);
    std::string cell;
    for (int k = 0; k < 7; ++k) {
      if (!std::getline(row, cell, ',')) throw Error(ErrorCode::ParseError, "CSV row with fewer than 7 columns");
      size_t pos = 0;
      try {
        v[k] = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "CSV cell is not a number: " + cell);
      }
      if (pos != cell.size()) throw Error(ErrorCode::ParseError, "CSV cell is not a number: " + cell);
    }
    if (!c.times.empty() && v[0] <= c.times.back())
      throw Error(ErrorCode::ParseError, "CSV times must be strictly increasing");
    c.times.push_back(v[0]);
    c.points.push_back({v[1], v[2], v[3], v[4]});
    c.derivs.push_back({v[5], v[6]});
  }
  if (c.times.empty()) throw Error(ErrorCode::ParseError, "CSV has no data rows");
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ParseError, "cannot open file for writing: " + tmp);
    out << content;
    if (!out.flush()) throw Error(ErrorCode::ParseError, "write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error(ErrorCode::ParseError, "rename failed: " + path);
}

json load_json(const std::string& path) {
  std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, "invalid JSON in " + path);
  return j;
}

}  // namespace engel::io
