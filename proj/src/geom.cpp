#include "lieham/geom.hpp"

#include <sstream>

#include "lieham/errors.hpp"
#include "lieham/liealg.hpp"

namespace lieham {

namespace {

void keep_if_nonzero(std::map<int, Expr>& comps, int v, Expr e) {
    if (e.is_zero())
        comps.erase(v);
    else
        comps.insert_or_assign(v, std::move(e));
}

std::string comps_str(const ChartPtr& chart, const std::map<int, Expr>& comps,
                      const std::string& prefix) {
    if (comps.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, e] : comps) {
        if (!first) os << " + ";
        first = false;
        os << "(" << e.str() << ")*" << prefix << chart->var(v).name;
    }
    return os.str();
}

}  // namespace

VectorField::VectorField(ChartPtr chart, std::map<int, Expr> comps) : chart_(std::move(chart)) {
    for (auto& [v, e] : comps) {
        require_same_chart(chart_, e.chart());
        keep_if_nonzero(comps_, v, std::move(e));
    }
}

Expr VectorField::component(int v) const {
    auto it = comps_.find(v);
    return it == comps_.end() ? Expr::zero(chart_) : it->second;
}

void VectorField::set_component(int v, Expr e) {
    require_same_chart(chart_, e.chart());
    keep_if_nonzero(comps_, v, std::move(e));
}

bool VectorField::equals(const VectorField& other) const {
    require_same_chart(chart_, other.chart_);
    if (comps_.size() != other.comps_.size()) return false;
    for (const auto& [v, e] : comps_) {
        auto it = other.comps_.find(v);
        if (it == other.comps_.end() || !e.equals(it->second)) return false;
    }
    return true;
}

VectorField VectorField::operator-() const {
    VectorField r(chart_);
    for (const auto& [v, e] : comps_) r.comps_.emplace(v, -e);
    return r;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_chart(a.chart_, b.chart_);
    VectorField r(a.chart_);
    for (const auto& [v, e] : a.comps_) r.set_component(v, e + b.component(v));
    for (const auto& [v, e] : b.comps_)
        if (!a.comps_.count(v)) r.set_component(v, e);
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + (-b); }

VectorField operator*(const VectorField& a, const Rational& s) {
    VectorField r(a.chart_);
    if (s.is_zero()) return r;
    for (const auto& [v, e] : a.comps_) r.comps_.emplace(v, e * s);
    return r;
}

std::vector<double> VectorField::eval(const std::vector<double>& point) const {
    std::vector<double> out(static_cast<std::size_t>(chart_->size()), 0.0);
    for (const auto& [v, e] : comps_) out[static_cast<std::size_t>(v)] = e.eval(point);
    return out;
}

std::string VectorField::str() const { return comps_str(chart_, comps_, "d/d"); }

OneForm::OneForm(ChartPtr chart, std::map<int, Expr> comps) : chart_(std::move(chart)) {
    for (auto& [v, e] : comps) {
        require_same_chart(chart_, e.chart());
        keep_if_nonzero(comps_, v, std::move(e));
    }
}

Expr OneForm::component(int v) const {
    auto it = comps_.find(v);
    return it == comps_.end() ? Expr::zero(chart_) : it->second;
}

void OneForm::set_component(int v, Expr e) {
    require_same_chart(chart_, e.chart());
    keep_if_nonzero(comps_, v, std::move(e));
}

bool OneForm::equals(const OneForm& other) const {
    require_same_chart(chart_, other.chart_);
    if (comps_.size() != other.comps_.size()) return false;
    for (const auto& [v, e] : comps_) {
        auto it = other.comps_.find(v);
        if (it == other.comps_.end() || !e.equals(it->second)) return false;
    }
    return true;
}

OneForm operator-(const OneForm& a, const OneForm& b) {
    require_same_chart(a.chart(), b.chart());
    OneForm r(a.chart());
    for (int v = 0; v < a.chart()->size(); ++v) r.set_component(v, a.component(v) - b.component(v));
    return r;
}

std::string OneForm::str() const { return comps_str(chart_, comps_, "d"); }

Expr Bivector::component(int i, int j) const {
    if (i == j) return Expr::zero(chart_);
    bool flip = i > j;
    if (flip) std::swap(i, j);
    auto it = comps_.find({i, j});
    if (it == comps_.end()) return Expr::zero(chart_);
    return flip ? -it->second : it->second;
}

void Bivector::set_component(int i, int j, Expr e) {
    require_same_chart(chart_, e.chart());
    if (i == j) raise(ErrorKind::bad_input, "bivector components need distinct indices");
    bool flip = i > j;
    if (flip) std::swap(i, j);
    if (flip) e = -e;
    if (e.is_zero())
        comps_.erase({i, j});
    else
        comps_.insert_or_assign({i, j}, std::move(e));
}

bool Bivector::equals(const Bivector& other) const {
    require_same_chart(chart_, other.chart_);
    if (comps_.size() != other.comps_.size()) return false;
    for (const auto& [key, e] : comps_) {
        auto it = other.comps_.find(key);
        if (it == other.comps_.end() || !e.equals(it->second)) return false;
    }
    return true;
}

std::string Bivector::str() const {
    if (comps_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, e] : comps_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << e.str() << ")*d/d" << chart_->var(key.first).name << "^d/d"
           << chart_->var(key.second).name;
    }
    return os.str();
}

OneForm exterior_d(const Expr& f) {
    OneForm w(f.chart());
    for (int v = 0; v < f.chart()->size(); ++v) w.set_component(v, f.diff(v));
    return w;
}

Expr apply_vf(const VectorField& X, const Expr& f) {
    require_same_chart(X.chart(), f.chart());
    Expr acc = Expr::zero(f.chart());
    for (const auto& [v, comp] : X.components()) acc = acc + comp * f.diff(v);
    return acc;
}

VectorField lie_bracket_vf(const VectorField& X, const VectorField& Y) {
    require_same_chart(X.chart(), Y.chart());
    VectorField r(X.chart());
    for (int v = 0; v < X.chart()->size(); ++v)
        r.set_component(v, apply_vf(X, Y.component(v)) - apply_vf(Y, X.component(v)));
    return r;
}

VectorField hat_lambda(const Bivector& L, const OneForm& w) {
    require_same_chart(L.chart(), w.chart());
    VectorField r(L.chart());
    int n = L.chart()->size();
    for (int j = 0; j < n; ++j) {
        Expr acc = Expr::zero(L.chart());
        for (const auto& [i, wi] : w.components()) acc = acc + L.component(i, j) * wi;
        r.set_component(j, acc);
    }
    return r;
}

Expr poisson_bracket(const Bivector& L, const Expr& f, const Expr& g) {
    require_same_chart(L.chart(), f.chart());
    require_same_chart(L.chart(), g.chart());
    Expr acc = Expr::zero(L.chart());
    for (const auto& [key, comp] : L.components()) {
        auto [i, j] = key;
        acc = acc + comp * (f.diff(i) * g.diff(j) - f.diff(j) * g.diff(i));
    }
    return acc;
}

VectorField hamiltonian_vf(const Bivector& L, const Expr& f) {
    return -hat_lambda(L, exterior_d(f));
}

JacobiResult jacobi_check(const Bivector& L) {
    int n = L.chart()->size();
    const ChartPtr& chart = L.chart();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Expr acc = Expr::zero(chart);
                for (int l = 0; l < n; ++l) {
                    acc = acc + L.component(i, l) * L.component(j, k).diff(l) +
                          L.component(j, l) * L.component(k, i).diff(l) +
                          L.component(k, l) * L.component(i, j).diff(l);
                }
                if (!acc.is_zero()) return {false, JacobiWitness{i, j, k, acc}};
            }
    return {true, std::nullopt};
}

Bivector lie_derivative_bivector(const VectorField& X, const Bivector& L) {
    require_same_chart(X.chart(), L.chart());
    int n = L.chart()->size();
    Bivector out(L.chart());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Expr acc = apply_vf(X, L.component(i, j));
            for (int l = 0; l < n; ++l) {
                acc = acc - L.component(l, j) * X.component(i).diff(l) -
                      L.component(i, l) * X.component(j).diff(l);
            }
            out.set_component(i, j, acc);
        }
    return out;
}

OneForm lie_derivative_oneform(const VectorField& X, const OneForm& w) {
    require_same_chart(X.chart(), w.chart());
    int n = w.chart()->size();
    OneForm out(w.chart());
    for (int i = 0; i < n; ++i) {
        Expr acc = apply_vf(X, w.component(i));
        for (const auto& [j, wj] : w.components()) acc = acc + wj * X.component(j).diff(i);
        out.set_component(i, acc);
    }
    return out;
}

Expr bivector_pairing(const Bivector& L, const OneForm& w, const OneForm& u) {
    require_same_chart(L.chart(), w.chart());
    require_same_chart(L.chart(), u.chart());
    Expr acc = Expr::zero(L.chart());
    for (const auto& [key, comp] : L.components()) {
        auto [i, j] = key;
        acc = acc + comp * (w.component(i) * u.component(j) - w.component(j) * u.component(i));
    }
    return acc;
}

OneForm oneform_bracket(const Bivector& L, const OneForm& w, const OneForm& u) {
    OneForm lhs = lie_derivative_oneform(hat_lambda(L, w), u);
    OneForm rhs = lie_derivative_oneform(hat_lambda(L, u), w);
    OneForm dpair = exterior_d(bivector_pairing(L, w, u));
    return lhs - rhs - dpair;
}

Bivector lie_poisson_bivector(const StructureConstants& sc, const ChartPtr& chart) {
    int n = sc.dimension();
    if (chart->size() != n)
        raise(ErrorKind::bad_structure_constants,
              "chart dimension does not match the structure constants");
    if (!sc.antisymmetric())
        raise(ErrorKind::bad_structure_constants, "structure constants are not antisymmetric");
    if (!jacobi_identity_check(sc).ok)
        raise(ErrorKind::bad_structure_constants, "structure constants violate the Jacobi identity");
    Bivector L(chart);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            ExprBuilder b(chart);
            for (int k = 0; k < n; ++k)
                b.add_term(sc.get(i, j, k), {{k, Rational(1)}});
            L.set_component(i, j, b.build());
        }
    return L;
}

Bivector canonical_bivector(const ChartPtr& chart, const std::vector<std::pair<int, int>>& pairs) {
    Bivector L(chart);
    for (auto [x, p] : pairs) L.set_component(x, p, Expr::constant(chart, Rational(1)));
    return L;
}

std::optional<std::vector<std::pair<int, int>>> detect_canonical(const Bivector& L) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> used(static_cast<std::size_t>(L.chart()->size()), false);
    for (const auto& [key, e] : L.components()) {
        if (!e.is_constant()) return std::nullopt;
        Rational c = e.constant_value();
        std::pair<int, int> pair = key;
        if (c == Rational(-1))
            std::swap(pair.first, pair.second);
        else if (c != Rational(1))
            return std::nullopt;
        if (used[static_cast<std::size_t>(pair.first)] ||
            used[static_cast<std::size_t>(pair.second)])
            return std::nullopt;
        used[static_cast<std::size_t>(pair.first)] = true;
        used[static_cast<std::size_t>(pair.second)] = true;
        pairs.push_back(pair);
    }
    return pairs;
}

Expr find_hamiltonian(const Bivector& L, const VectorField& X) {
    require_same_chart(L.chart(), X.chart());
    auto pairs = detect_canonical(L);
    if (!pairs || pairs->empty())
        raise(ErrorKind::degenerate_bivector,
              "find_hamiltonian needs a canonical constant bivector");
    const ChartPtr& chart = L.chart();
    std::vector<bool> paired(static_cast<std::size_t>(chart->size()), false);
    for (auto [x, p] : *pairs) {
        paired[static_cast<std::size_t>(x)] = true;
        paired[static_cast<std::size_t>(p)] = true;
    }
    for (const auto& [v, comp] : X.components()) {
        if (!paired[static_cast<std::size_t>(v)] && !comp.is_zero()) {
            Error e(ErrorKind::not_hamiltonian,
                    "field has a component along unpaired variable '" + chart->var(v).name + "'");
            e.witness = comp.str();
            throw e;
        }
    }
    // Integrate dh/dp = X^x, dh/dx = -X^p pair by pair, subtracting the part
    // already produced by previously integrated pairs.
    Expr h = Expr::zero(chart);
    for (auto [x, p] : *pairs) {
        Expr rx = X.component(x) - h.diff(p);
        h = h + rx.antiderivative(p);
        Expr rp = (-X.component(p)) - h.diff(x);
        h = h + rp.antiderivative(x);
    }
    VectorField back = hamiltonian_vf(L, h);
    if (!back.equals(X)) {
        Error e(ErrorKind::not_hamiltonian, "integrability post-check failed");
        e.witness = (back - X).str();
        throw e;
    }
    return h;
}

}  // namespace lieham
