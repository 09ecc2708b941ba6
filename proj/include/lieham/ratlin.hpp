#pragma once

#include <map>
#include <vector>

#include "lieham/rational.hpp"

namespace lieham {

/// Sparse rational vector over integer coordinate ids.
using SparseVec = std::map<int, Rational>;

/// Incremental exact row reduction that keeps, for every accepted vector,
/// its expression in terms of the accepted ("kept") sequence. Coordinate ids
/// may keep growing between insertions.
class SpanBuilder {
  public:
    struct Outcome {
        bool independent = false;
        /// Coordinates in the kept items: a unit vector for independent
        /// inserts, the exact linear combination for dependent ones.
        std::vector<Rational> coords;
    };

    /// Reduces without committing; returns coords in kept items when the
    /// vector is dependent, nullopt-equivalent flag otherwise.
    Outcome reduce(const SparseVec& v) const;
    /// Reduces and, when independent, appends the residual as a new row.
    Outcome insert(const SparseVec& v);

    int rank() const { return kept_; }

  private:
    struct Row {
        SparseVec vec;  // smallest coordinate id == pivot
        std::vector<Rational> coords;
        int pivot = -1;
    };
    // Reduction state shared by reduce/insert.
    Outcome run(const SparseVec& v, SparseVec* residual) const;

    std::map<int, Row> rows_by_pivot_;
    int kept_ = 0;
};

/// Deterministic rational nullspace basis of the matrix whose j-th column is
/// columns[j]; row ids are arbitrary integers. Each basis vector is reduced
/// (RREF-style: one free column carries 1, pivots carry back-substituted
/// values).
std::vector<std::vector<Rational>> nullspace(const std::vector<SparseVec>& columns);

}  // namespace lieham
