#include "lieham/ratlin.hpp"

#include <algorithm>
#include <set>

namespace lieham {

SpanBuilder::Outcome SpanBuilder::run(const SparseVec& v, SparseVec* residual) const {
    SparseVec w = v;
    std::vector<Rational> combo(static_cast<std::size_t>(kept_), Rational(0));
    while (!w.empty()) {
        int p = w.begin()->first;
        auto it = rows_by_pivot_.find(p);
        if (it == rows_by_pivot_.end()) break;
        const Row& row = it->second;
        Rational factor = w.begin()->second / row.vec.at(p);
        for (const auto& [col, val] : row.vec) {
            auto wit = w.find(col);
            Rational nv = (wit == w.end() ? Rational(0) : wit->second) - factor * val;
            if (nv.is_zero()) {
                if (wit != w.end()) w.erase(wit);
            } else {
                w[col] = nv;
            }
        }
        for (std::size_t k = 0; k < row.coords.size(); ++k) combo[k] += factor * row.coords[k];
    }
    Outcome out;
    out.independent = !w.empty();
    out.coords = std::move(combo);
    if (residual) *residual = std::move(w);
    return out;
}

SpanBuilder::Outcome SpanBuilder::reduce(const SparseVec& v) const { return run(v, nullptr); }

SpanBuilder::Outcome SpanBuilder::insert(const SparseVec& v) {
    SparseVec residual;
    Outcome out = run(v, &residual);
    if (!out.independent) return out;
    Row row;
    row.pivot = residual.begin()->first;
    row.vec = std::move(residual);
    // residual = item_new - sum combo_k * item_k, so in kept-item terms the
    // new row is e_new minus the accumulated combination.
    row.coords.assign(static_cast<std::size_t>(kept_) + 1, Rational(0));
    for (std::size_t k = 0; k < out.coords.size(); ++k) row.coords[k] = -out.coords[k];
    row.coords[static_cast<std::size_t>(kept_)] = Rational(1);
    rows_by_pivot_.emplace(row.pivot, std::move(row));
    out.coords.assign(static_cast<std::size_t>(kept_) + 1, Rational(0));
    out.coords[static_cast<std::size_t>(kept_)] = Rational(1);
    ++kept_;
    return out;
}

std::vector<std::vector<Rational>> nullspace(const std::vector<SparseVec>& columns) {
    // Collect row ids and densify.
    std::set<int> row_ids;
    for (const auto& col : columns)
        for (const auto& [r, v] : col) row_ids.insert(r);
    std::vector<int> rows(row_ids.begin(), row_ids.end());
    std::map<int, std::size_t> row_index;
    for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;

    std::size_t m = rows.size(), n = columns.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n, Rational(0)));
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [r, v] : columns[j]) a[row_index[r]][j] = v;

    // RREF in column order.
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t sel = row;
        while (sel < m && a[sel][col].is_zero()) ++sel;
        if (sel == m) continue;
        std::swap(a[sel], a[row]);
        Rational inv = a[row][col].inverse();
        for (std::size_t j = col; j < n; ++j) a[row][j] *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || a[i][col].is_zero()) continue;
            Rational f = a[i][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }

    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;

    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> x(n, Rational(0));
        x[free] = Rational(1);
        for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = -a[r][free];
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace lieham
