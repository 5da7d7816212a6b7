#pragma once

#include <optional>
#include <vector>

namespace wilks {

enum class Model { Beta, BT };

// Model parameters. `reference` marks the coordinate pinned to zero for
// identifiability in the Bradley-Terry model; unset for the beta-model.
struct ParamVector {
  std::vector<double> values;
  std::optional<int> reference;

  ParamVector() = default;
  explicit ParamVector(std::vector<double> v) : values(std::move(v)) {}
  ParamVector(std::vector<double> v, int ref)
      : values(std::move(v)), reference(ref) {}

  int size() const { return static_cast<int>(values.size()); }
};

// Restriction of the parameter space under test. Specified pins the listed
// coordinates to known values; Homogeneous ties them to one common value.
struct NullHypothesis {
  enum class Kind { Specified, Homogeneous };

  Kind kind = Kind::Specified;
  std::vector<int> indices;    // sorted, distinct, 0-based
  std::vector<double> values;  // Specified only, aligned with indices

  static NullHypothesis specified(std::vector<int> idx,
                                  std::vector<double> vals);
  static NullHypothesis homogeneous(std::vector<int> idx);

  // Checks index range and kind-specific shape against an n-parameter model;
  // throws invalid_null.
  void validate(int n) const;

  int size() const { return static_cast<int>(indices.size()); }
};

}  // namespace wilks
