#include "lieham/liealg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "lieham/errors.hpp"

namespace lieham {

StructureConstants::StructureConstants(int dim)
    : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, Rational(0)) {
    if (dim < 0) raise(ErrorKind::bad_input, "negative dimension");
}

static std::size_t sc_index(int dim, int i, int j, int k) {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(dim) +
           static_cast<std::size_t>(k);
}

const Rational& StructureConstants::get(int i, int j, int k) const {
    return c_[sc_index(dim_, i, j, k)];
}

void StructureConstants::set(int i, int j, int k, Rational value) {
    c_[sc_index(dim_, i, j, k)] = std::move(value);
}

void StructureConstants::set_pair(int i, int j, int k, const Rational& value) {
    c_[sc_index(dim_, i, j, k)] = value;
    c_[sc_index(dim_, j, i, k)] = -value;
}

bool StructureConstants::antisymmetric() const {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                if (get(i, j, k) != -get(j, i, k)) return false;
    return true;
}

JacobiIdentityResult jacobi_identity_check(const StructureConstants& sc) {
    int n = sc.dimension();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Rational acc(0);
                    for (int m = 0; m < n; ++m) {
                        acc += sc.get(i, j, m) * sc.get(m, k, l);
                        acc += sc.get(j, k, m) * sc.get(m, i, l);
                        acc += sc.get(k, i, m) * sc.get(m, j, l);
                    }
                    if (!acc.is_zero()) return {false, {i, j, k, l}};
                }
    return {};
}

bool perfect_check(const StructureConstants& sc) {
    int n = sc.dimension();
    SpanBuilder span;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            SparseVec v;
            for (int k = 0; k < n; ++k)
                if (!sc.get(i, j, k).is_zero()) v[k] = sc.get(i, j, k);
            span.insert(v);
        }
    return span.rank() == n;
}

int CoordSpace::id(const Key& k) {
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    int next = static_cast<int>(ids_.size());
    ids_.emplace(k, next);
    return next;
}

SparseVec CoordSpace::vector_of(const Expr& e) {
    SparseVec v;
    for (const auto& m : e.terms()) v[id({-1, m.exps})] = m.coeff;
    return v;
}

SparseVec CoordSpace::vector_of(const VectorField& X) {
    SparseVec v;
    for (const auto& [comp, expr] : X.components())
        for (const auto& m : expr.terms()) v[id({comp, m.exps})] = m.coeff;
    return v;
}

namespace {

template <typename Item>
void require_shared_chart(const std::vector<Item>& items) {
    for (std::size_t i = 1; i < items.size(); ++i)
        require_same_chart(items[0].chart(), items[i].chart());
}

template <typename Item>
SpanReduceResult span_reduce_impl(const std::vector<Item>& items) {
    require_shared_chart(items);
    CoordSpace space;
    SpanBuilder span;
    SpanReduceResult out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto outcome = span.insert(space.vector_of(items[i]));
        if (outcome.independent) out.kept.push_back(static_cast<int>(i));
        out.coords.push_back(std::move(outcome.coords));
    }
    // Pad coordinate vectors to the final basis size.
    for (auto& c : out.coords) c.resize(out.kept.size(), Rational(0));
    return out;
}

template <typename Item, typename Bracket>
ClosureResult<Item> closure_impl(const std::vector<Item>& generators,
                                 std::vector<std::string> names, int cap, Bracket bracket,
                                 const char* open, const char* close, char sep) {
    if (generators.empty()) raise(ErrorKind::bad_input, "closure needs at least one generator");
    require_shared_chart(generators);
    if (cap < static_cast<int>(generators.size()))
        raise(ErrorKind::bad_input, "closure cap smaller than the generator count");
    if (names.empty())
        for (std::size_t i = 0; i < generators.size(); ++i)
            names.push_back("g" + std::to_string(i + 1));
    if (names.size() != generators.size())
        raise(ErrorKind::bad_input, "generator names misaligned");

    ClosureResult<Item> result;
    CoordSpace space;
    SpanBuilder span;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (span.insert(space.vector_of(generators[i])).independent) {
            result.basis.push_back(generators[i]);
            result.names.push_back(names[i]);
        }
    }

    bool capped = false;
    while (!capped) {
        bool grew = false;
        std::size_t n = result.basis.size();
        for (std::size_t j = 1; j < n && !capped; ++j) {
            for (std::size_t i = 0; i < j && !capped; ++i) {
                Item w = bracket(result.basis[i], result.basis[j]);
                SparseVec v = space.vector_of(w);
                if (!span.reduce(v).independent) continue;
                if (static_cast<int>(result.basis.size()) >= cap) {
                    capped = true;
                    break;
                }
                span.insert(v);
                result.basis.push_back(std::move(w));
                result.names.push_back(std::string(open) + result.names[i] + sep +
                                       result.names[j] + close);
                grew = true;
            }
        }
        if (grew)
            ++result.rounds;
        else
            break;
    }
    if (capped) {
        result.converged = false;
        return result;
    }
    result.converged = true;

    // Every bracket now reduces exactly; record the coordinates.
    int dim = result.dimension();
    StructureConstants sc(dim);
    for (int j = 1; j < dim; ++j)
        for (int i = 0; i < j; ++i) {
            Item w = bracket(result.basis[static_cast<std::size_t>(i)],
                             result.basis[static_cast<std::size_t>(j)]);
            auto outcome = span.reduce(space.vector_of(w));
            if (outcome.independent)
                raise(ErrorKind::internal_inconsistency, "converged closure fails to reduce");
            for (int k = 0; k < dim; ++k) {
                Rational v = k < static_cast<int>(outcome.coords.size())
                                 ? outcome.coords[static_cast<std::size_t>(k)]
                                 : Rational(0);
                sc.set_pair(i, j, k, v);
            }
        }
    result.structure = std::move(sc);
    return result;
}

}  // namespace

SpanReduceResult span_reduce(const std::vector<Expr>& items) { return span_reduce_impl(items); }
SpanReduceResult span_reduce(const std::vector<VectorField>& items) {
    return span_reduce_impl(items);
}

VfClosure closure_vf(const std::vector<VectorField>& generators,
                     const std::vector<std::string>& names, int cap) {
    return closure_impl(
        generators, names, cap,
        [](const VectorField& a, const VectorField& b) { return lie_bracket_vf(a, b); }, "[", "]",
        ',');
}

FnClosure closure_fn(const Bivector& L, const std::vector<Expr>& generators,
                     const std::vector<std::string>& names, int cap) {
    for (const auto& g : generators) require_same_chart(L.chart(), g.chart());
    return closure_impl(
        generators, names, cap,
        [&L](const Expr& a, const Expr& b) { return poisson_bracket(L, a, b); }, "{", "}", ',');
}

int distribution_rank(const std::vector<VectorField>& basis, const std::vector<double>& point) {
    if (basis.empty()) return 0;
    require_shared_chart(basis);
    basis[0].chart()->check_point(point);
    int n = basis[0].chart()->size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(basis.size()), n);
    for (std::size_t r = 0; r < basis.size(); ++r) {
        std::vector<double> row = basis[r].eval(point);
        for (int c = 0; c < n; ++c)
            m(static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double max_sv = sv(0);
    if (max_sv <= 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * max_sv) ++rank;
    return rank;
}

}  // namespace lieham
