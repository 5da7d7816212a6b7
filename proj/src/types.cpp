#include "wilks/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wilks/errors.hpp"

namespace wilks {

namespace {

std::vector<int> sorted_distinct(std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw invalid_null("null hypothesis indices must be distinct");
  }
  return idx;
}

}  // namespace

NullHypothesis NullHypothesis::specified(std::vector<int> idx,
                                         std::vector<double> vals) {
  if (idx.size() != vals.size()) {
    throw invalid_null("specified null needs one value per index");
  }
  // Keep values aligned with the sorted index order.
  std::vector<std::pair<int, double>> paired(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) paired[i] = {idx[i], vals[i]};
  std::sort(paired.begin(), paired.end());
  NullHypothesis h;
  h.kind = Kind::Specified;
  for (auto& [k, v] : paired) {
    h.indices.push_back(k);
    h.values.push_back(v);
  }
  if (std::adjacent_find(h.indices.begin(), h.indices.end()) !=
      h.indices.end()) {
    throw invalid_null("null hypothesis indices must be distinct");
  }
  return h;
}

NullHypothesis NullHypothesis::homogeneous(std::vector<int> idx) {
  NullHypothesis h;
  h.kind = Kind::Homogeneous;
  h.indices = sorted_distinct(std::move(idx));
  if (h.indices.size() < 2) {
    throw invalid_null("homogeneous null needs at least two indices");
  }
  return h;
}

void NullHypothesis::validate(int n) const {
  if (indices.empty()) throw invalid_null("null hypothesis has no indices");
  for (int k : indices) {
    if (k < 0 || k >= n) {
      throw invalid_null("null index " + std::to_string(k + 1) +
                         " outside 1.." + std::to_string(n));
    }
  }
  if (!std::is_sorted(indices.begin(), indices.end())) {
    throw invalid_null("null hypothesis indices must be sorted");
  }
  if (kind == Kind::Specified) {
    if (values.size() != indices.size()) {
      throw invalid_null("specified null needs one value per index");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw invalid_null("specified value not finite");
    }
  } else {
    if (indices.size() < 2) {
      throw invalid_null("homogeneous null needs at least two indices");
    }
  }
}

}  // namespace wilks
