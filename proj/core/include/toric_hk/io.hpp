#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toric_hk/arrangement.hpp"
#include "toric_hk/verify.hpp"

namespace toric_hk {

struct ArrangementData {
  FlatArrangement arrangement;
  DeformationMatrix b;
};

// Parses the arrangement schema
//   {"n": int, "flats": [{"u": [int...], "lambda": [3 floats], "a": float}],
//    "B": [[float...]...]}
// ("a" defaults to 1, "B" to zero). Errors are InputError with a
// "<source>:<line>:<column>" prefix for syntax and the field path
// (e.g. flats[1].u) for content problems.
ArrangementData parse_arrangement(const std::string& text, const std::string& source = "<input>");
ArrangementData load_arrangement(const std::string& path);

nlohmann::json arrangement_to_json(const FlatArrangement& arr, const DeformationMatrix& b);

nlohmann::json to_json(const Point3n& p);
Point3n point_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Stratum& s);
Stratum stratum_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClassificationReport& r);
ClassificationReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ResidualReport& r);
ResidualReport residual_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GrowthEstimate& g);

// Parses "x1,..,xn,Re z1,..,Re zn,Im z1,..,Im zn".
Point3n parse_point(const std::string& text, int n);

struct GridAxis {
  int coordinate = 0;  // index into (x, Re z, Im z)
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

// One row per lattice point: the 3n coordinates, then Phi row-major, det Phi
// and det g. Points on a flat get "nan" entries.
void write_grid_csv(std::ostream& out, const FlatArrangement& arr, const DeformationMatrix& b,
                    const Point3n& base, const std::vector<GridAxis>& axes);

}  // namespace toric_hk
