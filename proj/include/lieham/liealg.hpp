#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lieham/geom.hpp"
#include "lieham/ratlin.hpp"

namespace lieham {

/// Default cap for closure loops; the CLI may override it via LIEHAM_CAP.
inline constexpr int kDefaultCap = 32;

/// Exact structure constants [e_i, e_j] = sum_k c[i][j][k] e_k.
class StructureConstants {
  public:
    explicit StructureConstants(int dim);

    int dimension() const { return dim_; }
    const Rational& get(int i, int j, int k) const;
    /// Raw single-entry write (validation helpers below check consistency).
    void set(int i, int j, int k, Rational value);
    /// Writes c[i][j][k] and its antisymmetric partner c[j][i][k] = -value.
    void set_pair(int i, int j, int k, const Rational& value);

    bool antisymmetric() const;

  private:
    int dim_;
    std::vector<Rational> c_;
};

struct JacobiIdentityResult {
    bool ok = true;
    std::array<int, 4> witness{-1, -1, -1, -1};  // (i, j, k, l) on failure
};

/// Exact quadratic Jacobi identity
/// sum_m (c_ijm c_mkl + c_jkm c_mil + c_kim c_mjl) = 0 for all i,j,k,l.
JacobiIdentityResult jacobi_identity_check(const StructureConstants& sc);

/// True iff the span of all bracket images has full rank, i.e. [g,g] = g.
bool perfect_check(const StructureConstants& sc);

struct SpanReduceResult {
    /// Indices of the kept (exactly independent) items, in input order.
    std::vector<int> kept;
    /// For every input item, its exact coordinates in the kept items.
    std::vector<std::vector<Rational>> coords;
};

/// Greedy left-to-right exact independence selection over the joint monomial
/// support. Throws ChartMismatch on mixed charts.
SpanReduceResult span_reduce(const std::vector<Expr>& items);
SpanReduceResult span_reduce(const std::vector<VectorField>& items);

/// Iterated-bracket closure output. When converged, every pairwise bracket
/// of the basis reduces exactly into the basis and structure holds the
/// resulting constants.
template <typename Item>
struct ClosureResult {
    std::vector<Item> basis;
    std::vector<std::string> names;
    std::optional<StructureConstants> structure;
    bool converged = false;
    /// Number of bracket generations that contributed new basis elements.
    int rounds = 0;

    int dimension() const { return static_cast<int>(basis.size()); }
};

using VfClosure = ClosureResult<VectorField>;
using FnClosure = ClosureResult<Expr>;

/// Closure of vector fields under the Lie bracket. Stops unconverged (with
/// the partial basis) as soon as the dimension would exceed cap. Gained
/// elements are named "[a,b]" after the bracket that produced them.
VfClosure closure_vf(const std::vector<VectorField>& generators,
                     const std::vector<std::string>& names = {}, int cap = kDefaultCap);

/// Closure of functions under the Poisson bracket of L; gained elements are
/// named "{a,b}".
FnClosure closure_fn(const Bivector& L, const std::vector<Expr>& generators,
                     const std::vector<std::string>& names = {}, int cap = kDefaultCap);

/// Numeric rank of the evaluated basis at a point (SVD, relative tolerance
/// 1e-10). The point is chart-ordered; sign constraints are enforced.
int distribution_rank(const std::vector<VectorField>& basis, const std::vector<double>& point);

/// Coordinate vectors of expressions / vector fields on a shared, growing
/// key space, for exact linear algebra across calls.
class CoordSpace {
  public:
    SparseVec vector_of(const Expr& e);
    SparseVec vector_of(const VectorField& X);

  private:
    using Key = std::pair<int, std::vector<std::pair<int, VarExp>>>;
    int id(const Key& k);
    std::map<Key, int> ids_;
};

}  // namespace lieham
