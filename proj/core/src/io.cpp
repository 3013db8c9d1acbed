#include "toric_hk/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/LU>

#include "toric_hk/error.hpp"

namespace toric_hk {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& source, const std::string& path,
                              const std::string& what) {
  throw InputError(source + ": field " + path + ": " + what);
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number_at(const json& j, const std::string& source, const std::string& path) {
  if (!j.is_number()) field_error(source, path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(source, path, "must be finite");
  return v;
}

std::int64_t integer_at(const json& j, const std::string& source, const std::string& path) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::floor(v) == v && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
  }
  field_error(source, path, "expected an integer");
}

const json& member(const json& obj, const char* key, const std::string& source,
                   const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(source, path + key, "missing");
  return *it;
}

}  // namespace

ArrangementData parse_arrangement(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": invalid JSON";
    const std::string what = e.what();
    // Drop nlohmann's "[json.exception...] parse error at line L, column C: " prefix.
    const auto col_pos = what.find("column ");
    const auto pos = what.find(": ", col_pos == std::string::npos ? 0 : col_pos);
    if (pos != std::string::npos) msg << " (" << what.substr(pos + 2) << ")";
    throw InputError(msg.str());
  }
  if (!doc.is_object()) field_error(source, "<root>", "expected an object");

  const std::int64_t n = integer_at(member(doc, "n", source, ""), source, "n");
  if (n <= 0 || n > 64) field_error(source, "n", "must be between 1 and 64");

  std::vector<Flat> flats;
  const json& jflats = member(doc, "flats", source, "");
  if (!jflats.is_array()) field_error(source, "flats", "expected an array");
  for (std::size_t k = 0; k < jflats.size(); ++k) {
    const std::string base = "flats[" + std::to_string(k) + "]";
    const json& jf = jflats[k];
    if (!jf.is_object()) field_error(source, base, "expected an object");
    const json& ju = member(jf, "u", source, base + ".");
    if (!ju.is_array()) field_error(source, base + ".u", "expected an array");
    if (static_cast<std::int64_t>(ju.size()) != n) {
      field_error(source, base + ".u", "expected " + std::to_string(n) + " entries, got " +
                                           std::to_string(ju.size()));
    }
    std::vector<std::int64_t> u;
    for (std::size_t i = 0; i < ju.size(); ++i) {
      u.push_back(integer_at(ju[i], source, base + ".u[" + std::to_string(i) + "]"));
    }
    const json& jl = member(jf, "lambda", source, base + ".");
    if (!jl.is_array() || jl.size() != 3) field_error(source, base + ".lambda", "expected 3 numbers");
    std::array<double, 3> lambda{};
    for (std::size_t i = 0; i < 3; ++i) {
      lambda[i] = number_at(jl[i], source, base + ".lambda[" + std::to_string(i) + "]");
    }
    double a = 1.0;
    if (const auto it = jf.find("a"); it != jf.end()) a = number_at(*it, source, base + ".a");
    try {
      flats.emplace_back(Normal(std::move(u)), lambda, a);
    } catch (const InputError& e) {
      field_error(source, base, e.what());
    }
  }

  Mat bmat = Mat::Zero(n, n);
  if (const auto it = doc.find("B"); it != doc.end()) {
    const json& jb = *it;
    if (!jb.is_array() || static_cast<std::int64_t>(jb.size()) != n) {
      field_error(source, "B", "expected " + std::to_string(n) + " rows");
    }
    for (std::size_t i = 0; i < jb.size(); ++i) {
      const std::string row = "B[" + std::to_string(i) + "]";
      if (!jb[i].is_array() || static_cast<std::int64_t>(jb[i].size()) != n) {
        field_error(source, row, "expected " + std::to_string(n) + " entries");
      }
      for (std::size_t j = 0; j < jb[i].size(); ++j) {
        bmat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            number_at(jb[i][j], source, row + "[" + std::to_string(j) + "]");
      }
    }
  }

  try {
    FlatArrangement arr(static_cast<int>(n), std::move(flats));
    return {std::move(arr), DeformationMatrix(bmat)};
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

ArrangementData load_arrangement(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_arrangement(buf.str(), path);
}

json arrangement_to_json(const FlatArrangement& arr, const DeformationMatrix& b) {
  json flats = json::array();
  for (const auto& f : arr.flats()) {
    flats.push_back({{"u", f.normal.entries()},
                     {"lambda", {f.offset[0], f.offset[1], f.offset[2]}},
                     {"a", f.mass}});
  }
  json bj = json::array();
  for (int i = 0; i < b.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < b.dim(); ++j) row.push_back(b.entries()(i, j));
    bj.push_back(row);
  }
  return {{"n", arr.dim()}, {"flats", flats}, {"B", bj}};
}

json to_json(const Point3n& p) {
  json x = json::array(), z = json::array();
  for (int i = 0; i < p.dim(); ++i) {
    x.push_back(p.x(i));
    z.push_back({p.z(i).real(), p.z(i).imag()});
  }
  return {{"x", x}, {"z", z}};
}

Point3n point_from_json(const json& j) {
  const auto& x = j.at("x");
  const auto& z = j.at("z");
  if (x.size() != z.size()) throw InputError("point: x and z differ in length");
  Point3n p = Point3n::zero(static_cast<int>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    p.x(static_cast<Eigen::Index>(i)) = x[i].get<double>();
    p.z(static_cast<Eigen::Index>(i)) = Complex(z[i].at(0).get<double>(), z[i].at(1).get<double>());
  }
  return p;
}

json to_json(const Stratum& s) {
  return {{"active", s.active}, {"rank", s.rank}, {"witness", to_json(s.witness)}};
}

Stratum stratum_from_json(const json& j) {
  Stratum s;
  s.active = j.at("active").get<std::vector<int>>();
  s.rank = j.at("rank").get<int>();
  s.witness = point_from_json(j.at("witness"));
  return s;
}

json to_json(const ClassificationReport& r) {
  json j = {{"smooth", r.smooth},
            {"failing_stratum", nullptr},
            {"simply_connected", r.simply_connected},
            {"flat_factor_l", r.flat_factor_l},
            {"taub_nut_order", r.taub_nut_order},
            {"volume_growth_exponent", r.volume_growth_exponent},
            {"ale_label", nullptr},
            {"cone_over_3sasakian", r.cone_over_3sasakian}};
  if (r.failing_stratum) j["failing_stratum"] = to_json(*r.failing_stratum);
  if (r.ale_label) j["ale_label"] = *r.ale_label;
  return j;
}

ClassificationReport report_from_json(const json& j) {
  ClassificationReport r;
  r.smooth = j.at("smooth").get<bool>();
  if (!j.at("failing_stratum").is_null()) r.failing_stratum = stratum_from_json(j["failing_stratum"]);
  r.simply_connected = j.at("simply_connected").get<bool>();
  r.flat_factor_l = j.at("flat_factor_l").get<int>();
  r.taub_nut_order = j.at("taub_nut_order").get<int>();
  r.volume_growth_exponent = j.at("volume_growth_exponent").get<int>();
  if (!j.at("ale_label").is_null()) r.ale_label = j["ale_label"].get<int>();
  r.cone_over_3sasakian = j.at("cone_over_3sasakian").get<bool>();
  return r;
}

namespace {

// JSON has no infinity; unbounded residuals are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_nullable(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

json to_json(const ResidualReport& r) {
  json pts = json::array(), res = json::array(), extras = json::object();
  for (const auto& p : r.points) pts.push_back(to_json(p));
  for (const double v : r.residuals) res.push_back(finite_or_null(v));
  for (const auto& [k, v] : r.extras) extras[k] = finite_or_null(v);
  return {{"check", r.check_name},   {"max_residual", finite_or_null(r.max_residual)},
          {"tolerance", r.tolerance}, {"pass", r.pass},
          {"samples", r.samples},     {"wall_time_s", r.wall_time_s},
          {"residuals", res},         {"points", pts},
          {"extras", extras}};
}

ResidualReport residual_report_from_json(const json& j) {
  ResidualReport r;
  r.check_name = j.at("check").get<std::string>();
  r.max_residual = from_nullable(j.at("max_residual"));
  r.tolerance = j.at("tolerance").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.samples = j.at("samples").get<std::size_t>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  for (const auto& v : j.at("residuals")) r.residuals.push_back(from_nullable(v));
  for (const auto& p : j.at("points")) r.points.push_back(point_from_json(p));
  for (const auto& [k, v] : j.at("extras").items()) r.extras.emplace_back(k, from_nullable(v));
  return r;
}

json to_json(const GrowthEstimate& g) {
  return {{"exponent", g.exponent}, {"standard_error", g.standard_error}, {"radii", g.radii},
          {"volumes", g.volumes},   {"samples", g.samples}};
}

Point3n parse_point(const std::string& text, int n) {
  std::vector<double> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("point: cannot parse '" + item + "' as a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw InputError("point: cannot parse '" + item + "' as a number");
    }
    coords.push_back(v);
  }
  if (static_cast<int>(coords.size()) != 3 * n) {
    throw InputError("point: expected " + std::to_string(3 * n) + " coordinates, got " +
                     std::to_string(coords.size()));
  }
  return Point3n::from_real(coords);
}

void write_grid_csv(std::ostream& out, const FlatArrangement& arr, const DeformationMatrix& b,
                    const Point3n& base, const std::vector<GridAxis>& axes) {
  const int n = arr.dim();
  if (base.dim() != n) throw DimensionError("grid base point dimension mismatch");
  for (const auto& a : axes) {
    if (a.coordinate < 0 || a.coordinate >= 3 * n) throw InputError("grid axis out of range");
    if (a.count < 1) throw InputError("grid axis needs at least one point");
  }
  const char* prefix[] = {"x", "rez", "imz"};
  for (int c = 0; c < 3 * n; ++c) out << prefix[c / n] << (c % n + 1) << ",";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out << "phi" << i + 1 << j + 1 << ",";
  out << "det_phi,det_g\n";
  out << std::setprecision(17);

  std::vector<int> idx(axes.size(), 0);
  const Vec origin = base.to_real();
  for (;;) {
    Vec c = origin;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& ax = axes[a];
      c(ax.coordinate) = ax.count == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * idx[a] / (ax.count - 1);
    }
    for (int k = 0; k < 3 * n; ++k) out << c(k) << ",";
    try {
      const Point3n p = Point3n::from_real(c);
      const Mat phi = eval_Phi(arr, b, p).value;
      double dg = std::numeric_limits<double>::quiet_NaN();
      try {
        dg = eval_metric(arr, b, p).value.determinant();
      } catch (const BranchLocusError&) {
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out << phi(i, j) << ",";
      out << phi.determinant() << "," << dg << "\n";
    } catch (const OnFlatError&) {
      for (int i = 0; i < n * n; ++i) out << "nan,";
      out << "nan,nan\n";
    }
    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++idx[a] < axes[a].count) break;
      idx[a] = 0;
    }
    if (a == axes.size()) break;
  }
}

}  // namespace toric_hk
