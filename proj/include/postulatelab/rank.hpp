#pragma once

#include <cmath>

#include "postulatelab/types.hpp"

namespace postulatelab {

struct NumericalRank {
  Index rank = 0;
  VectorXd singular_values;  // descending, unnormalized
  // Smallest retained and largest discarded singular values relative to the largest.
  double smallest_kept = 0;
  double largest_dropped = 0;
};

// Count singular values above tolerance * sigma_max.
template <typename Derived>
NumericalRank numerical_rank(const Eigen::MatrixBase<Derived>& m, double tolerance) {
  NumericalRank out;
  if (m.size() == 0) return out;
  Eigen::BDCSVD<typename Derived::PlainObject> svd(m.derived());
  out.singular_values = svd.singularValues().template cast<double>();
  const double top = out.singular_values.size() ? out.singular_values(0) : 0.0;
  if (!(top > 0)) return out;
  for (Index i = 0; i < out.singular_values.size(); ++i) {
    const double s = out.singular_values(i) / top;
    if (s > tolerance) {
      ++out.rank;
      out.smallest_kept = s;
    } else {
      out.largest_dropped = std::max(out.largest_dropped, s);
    }
  }
  return out;
}

// A rank is ambiguous when some normalized singular value sits between the
// round-off floor and sqrt(tolerance).
inline bool rank_is_ambiguous(const NumericalRank& r, double tolerance) {
  const double floor = tolerance * 1e-2;
  const double ceiling = std::sqrt(tolerance);
  const bool kept_low = r.rank > 0 && r.smallest_kept < ceiling;
  const bool dropped_high = r.largest_dropped > floor;
  return kept_low || dropped_high;
}

}  // namespace postulatelab
