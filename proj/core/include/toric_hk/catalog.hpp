#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "toric_hk/arrangement.hpp"
#include "toric_hk/point.hpp"

namespace toric_hk {

// Where an expected value comes from.
enum class Provenance {
  literature,  // stated in the source for this example
  derived,     // worked out from the construction
  elementary,  // immediate from the definitions
};

const char* to_string(Provenance p);

template <class T>
struct Expected {
  T value;
  Provenance source;
};

struct CatalogExpectations {
  std::optional<Expected<bool>> smooth;
  std::optional<Expected<std::vector<int>>> failing_stratum;  // active flat indices
  std::optional<Expected<bool>> simply_connected;
  std::optional<Expected<int>> flat_factor_l;
  std::optional<Expected<int>> taub_nut_order;
  std::optional<Expected<int>> volume_growth_exponent;
  std::optional<Expected<std::optional<int>>> ale_label;
  std::optional<Expected<bool>> cone_over_3sasakian;
  // Closed-form Phi (n = 1 entries), evaluated independently of the
  // potential module.
  std::function<double(const Point3n&)> phi;
  std::optional<Provenance> phi_source;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  FlatArrangement arrangement;
  DeformationMatrix b;
  CatalogExpectations expected;
};

const std::vector<CatalogEntry>& catalog();
// nullptr if no entry has that name.
const CatalogEntry* find_catalog_entry(const std::string& name);

// Fields of the report that disagree with the entry's expectations, as
// "field: expected X, got Y" lines; empty when all match.
std::vector<std::string> golden_mismatches(const CatalogEntry& entry,
                                           const ClassificationReport& report);

}  // namespace toric_hk
