#include "toric_hk/catalog.hpp"

#include <cmath>
#include <sstream>

namespace toric_hk {
namespace {

using P = Provenance;

Flat flat(std::vector<std::int64_t> u, double l1, double l2 = 0.0, double l3 = 0.0) {
  return Flat(Normal(std::move(u)), {l1, l2, l3}, 1.0);
}

DeformationMatrix scalar_b(double v) { return DeformationMatrix(Mat::Constant(1, 1, v)); }

// Distance in R^3 from an n = 1 point to the center (c, 0, 0).
double dist(const Point3n& p, double c) { return std::hypot(p.x(0) - c, std::abs(p.z(0))); }

CatalogExpectations common(bool simply_connected, int l, int m, int growth,
                           std::optional<int> ale, bool cone, P ale_source = P::derived) {
  CatalogExpectations e;
  e.smooth = Expected<bool>{true, P::derived};
  e.simply_connected = Expected<bool>{simply_connected, P::literature};
  e.flat_factor_l = Expected<int>{l, P::literature};
  e.taub_nut_order = Expected<int>{m, P::literature};
  e.volume_growth_exponent = Expected<int>{growth, P::literature};
  e.ale_label = Expected<std::optional<int>>{ale, ale_source};
  e.cone_over_3sasakian = Expected<bool>{cone, P::derived};
  return e;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;

  {
    auto e = common(false, 1, 1, 3, std::nullopt, false);
    e.phi = [](const Point3n&) { return 1.0; };
    e.phi_source = P::literature;
    out.push_back({"flat-cylinder", "S^1 x R^3: no flats, B = [1]", FlatArrangement(1, {}),
                   scalar_b(1.0), e});
  }
  {
    auto e = common(true, 0, 0, 4, 0, true);
    e.cone_over_3sasakian->source = P::elementary;
    e.phi = [](const Point3n& p) { return 0.25 / dist(p, 0.0); };
    e.phi_source = P::literature;
    out.push_back({"flat-H", "flat H: one flat through the origin", FlatArrangement(1, {flat({1}, 0.0)}),
                   DeformationMatrix::zero(1), e});
  }
  {
    auto e = common(true, 0, 1, 3, std::nullopt, false);
    e.phi = [](const Point3n& p) { return 1.0 + 0.25 / dist(p, 0.0); };
    e.phi_source = P::derived;
    out.push_back({"taub-nut", "Taub-NUT: one flat, B = [1]", FlatArrangement(1, {flat({1}, 0.0)}),
                   scalar_b(1.0), e});
  }
  {
    auto e = common(true, 0, 0, 4, 1, false, P::literature);
    e.phi = [](const Point3n& p) { return 0.25 / dist(p, -1.0) + 0.25 / dist(p, 1.0); };
    e.phi_source = P::derived;
    out.push_back({"eguchi-hanson", "Eguchi-Hanson: two flats",
                   FlatArrangement(1, {flat({1}, -1.0), flat({1}, 1.0)}),
                   DeformationMatrix::zero(1), e});
  }
  {
    auto e = common(true, 0, 0, 4, 2, false);
    e.phi = [](const Point3n& p) {
      return 0.25 / dist(p, -1.0) + 0.25 / dist(p, 0.0) + 0.25 / dist(p, 1.0);
    };
    e.phi_source = P::derived;
    out.push_back({"multi-EH-3", "ALE space of type A_2: three flats on a line",
                   FlatArrangement(1, {flat({1}, -1.0), flat({1}, 0.0), flat({1}, 1.0)}),
                   DeformationMatrix::zero(1), e});
  }

  const std::vector<Flat> n2_flats = {
      flat({1, 0}, 1.0 / 2, 1.0 / 3, -1.0 / 4),
      flat({0, 1}, -1.0 / 3, 1.0 / 5, 1.0 / 2),
      flat({1, 1}, 1.0 / 4, -1.0 / 2, 1.0 / 3),
  };
  out.push_back({"n2-unimodular", "n = 2: normals (1,0), (0,1), (1,1), generic offsets",
                 FlatArrangement(2, n2_flats), DeformationMatrix::zero(2),
                 common(true, 0, 0, 8, std::nullopt, false)});
  {
    Mat b = Mat::Zero(2, 2);
    b(0, 0) = 1.0;
    out.push_back({"n2-taub-nut", "order-1 Taub-NUT deformation of n2-unimodular",
                   FlatArrangement(2, n2_flats), DeformationMatrix(b),
                   common(true, 0, 1, 7, std::nullopt, false)});
  }
  out.push_back({"n2-cone", "n = 2: normals (1,0), (0,1) through the origin",
                 FlatArrangement(2, {flat({1, 0}, 0.0), flat({0, 1}, 0.0)}),
                 DeformationMatrix::zero(2), common(true, 0, 0, 8, std::nullopt, true)});
  {
    Mat b = Mat::Zero(2, 2);
    b(1, 1) = 1.0;
    auto e = common(false, 1, 1, 7, std::nullopt, false);
    out.push_back({"n2-h-times-cylinder", "flat H x (S^1 x R^3): normal (1,0), B = diag(0, 1)",
                   FlatArrangement(2, {flat({1, 0}, 0.0)}), DeformationMatrix(b), e});
  }
  {
    CatalogExpectations e;
    e.smooth = Expected<bool>{false, P::derived};
    e.failing_stratum = Expected<std::vector<int>>{{0, 1}, P::derived};
    out.push_back({"n2-nonunimodular", "normals (1,1), (1,-1) through the origin (not smooth)",
                   FlatArrangement(2, {flat({1, 1}, 0.0), flat({1, -1}, 0.0)}),
                   DeformationMatrix::zero(2), e});
  }
  return out;
}

template <class T>
std::string show(const T& v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string show(bool v) { return v ? "true" : "false"; }

std::string show(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

std::string show(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

template <class T>
void compare(std::vector<std::string>& out, const char* field, const std::optional<Expected<T>>& e,
             const T& got) {
  if (e && !(e->value == got)) {
    out.push_back(std::string(field) + ": expected " + show(e->value) + ", got " + show(got));
  }
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::literature: return "literature";
    case Provenance::derived: return "derived";
    case Provenance::elementary: return "elementary";
  }
  return "unknown";
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<std::string> golden_mismatches(const CatalogEntry& entry,
                                           const ClassificationReport& report) {
  std::vector<std::string> out;
  const auto& e = entry.expected;
  compare(out, "smooth", e.smooth, report.smooth);
  if (e.failing_stratum) {
    const std::vector<int> got =
        report.failing_stratum ? report.failing_stratum->active : std::vector<int>{};
    compare(out, "failing_stratum", e.failing_stratum, got);
  }
  if (!report.smooth) return out;
  compare(out, "simply_connected", e.simply_connected, report.simply_connected);
  compare(out, "flat_factor_l", e.flat_factor_l, report.flat_factor_l);
  compare(out, "taub_nut_order", e.taub_nut_order, report.taub_nut_order);
  compare(out, "volume_growth_exponent", e.volume_growth_exponent, report.volume_growth_exponent);
  compare(out, "ale_label", e.ale_label, report.ale_label);
  compare(out, "cone_over_3sasakian", e.cone_over_3sasakian, report.cone_over_3sasakian);
  return out;
}

}  // namespace toric_hk
