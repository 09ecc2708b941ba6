#include "lieham/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lieham/errors.hpp"

namespace lieham {

namespace {

/// Splits a rational exponent q into (integer part, fractional part in [0,1)).
std::pair<long long, Rational> split_exponent(const Rational& q) {
    BigInt fl = q.floor();
    long long i = fl.convert_to<long long>();
    Rational frac = q - Rational(fl, 1);
    return {i, frac};
}

/// Accumulates base^q into the stored form (ipow on v, rpow on the radical
/// base, sign folded into coeff): base^q = sign^i * v^i * base^f for
/// q = i + f with f in [0,1).
void apply_base_power(const ChartPtr& chart, int v, const Rational& q, long long& ipow,
                      Rational& rpow, Rational& coeff) {
    auto [i, f] = split_exponent(q);
    if (!f.is_zero() && !chart->radical_allowed(v))
        raise(ErrorKind::illegal_radical,
              "fractional power of '" + chart->var(v).name +
                  "' needs a positive or negative domain");
    if (chart->radical_base_sign(v) < 0 && (i % 2 != 0)) coeff = -coeff;
    ipow += i;
    rpow += f;
    if (rpow >= Rational(1)) {
        rpow -= Rational(1);
        ipow += 1;
        if (chart->radical_base_sign(v) < 0) coeff = -coeff;
    }
}

}  // namespace

Rational Monomial::total_exponent(int v) const {
    for (const auto& [var, e] : exps)
        if (var == v) return Rational(e.ipow) + e.rpow;
    return Rational(0);
}

int compare_keys(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.exps.size(), b.exps.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [va, ea] = a.exps[i];
        const auto& [vb, eb] = b.exps[i];
        if (va != vb) return va < vb ? -1 : 1;
        if (ea.ipow != eb.ipow) return ea.ipow < eb.ipow ? -1 : 1;
        if (ea.rpow != eb.rpow) return ea.rpow < eb.rpow ? -1 : 1;
    }
    if (a.exps.size() != b.exps.size()) return a.exps.size() < b.exps.size() ? -1 : 1;
    return 0;
}

void ExprBuilder::add_term(Rational coeff, const std::map<int, Rational>& exps) {
    if (coeff.is_zero()) return;
    Monomial m;
    m.coeff = std::move(coeff);
    for (const auto& [v, q] : exps) {
        if (v < 0 || v >= chart_->size())
            raise(ErrorKind::unknown_variable, "variable index out of range");
        long long ipow = 0;
        Rational rpow;
        if (q.is_integer()) {
            // Integer exponents mean literal powers of the variable itself.
            ipow = q.num().convert_to<long long>();
        } else {
            // Fractional exponents mean powers of the radical base.
            apply_base_power(chart_, v, q, ipow, rpow, m.coeff);
        }
        VarExp e{ipow, rpow};
        if (!e.is_zero()) m.exps.emplace_back(v, e);
    }
    add_monomial(m);
}

void ExprBuilder::add_monomial(const Monomial& m) {
    if (m.coeff.is_zero()) return;
    auto it = acc_.find(m.exps);
    if (it == acc_.end())
        acc_.emplace(m.exps, m.coeff);
    else {
        it->second += m.coeff;
        if (it->second.is_zero()) acc_.erase(it);
    }
}

void ExprBuilder::add(const Expr& e) {
    for (const auto& m : e.terms()) add_monomial(m);
}

void ExprBuilder::add_scaled(const Expr& e, const Rational& s) {
    if (s.is_zero()) return;
    for (const auto& m : e.terms()) add_monomial(Monomial{m.coeff * s, m.exps});
}

Expr ExprBuilder::build() {
    Expr e;
    e.chart_ = chart_;
    e.terms_.reserve(acc_.size());
    for (auto& [key, coeff] : acc_) e.terms_.push_back(Monomial{coeff, key});
    std::sort(e.terms_.begin(), e.terms_.end(),
              [](const Monomial& a, const Monomial& b) { return compare_keys(a, b) < 0; });
    acc_.clear();
    return e;
}

Expr Expr::zero(ChartPtr chart) {
    Expr e;
    e.chart_ = std::move(chart);
    return e;
}

Expr Expr::constant(ChartPtr chart, Rational value) {
    ExprBuilder b(std::move(chart));
    b.add_term(std::move(value), {});
    return b.build();
}

Expr Expr::variable(ChartPtr chart, int var) {
    ExprBuilder b(chart);
    b.add_term(Rational(1), {{var, Rational(1)}});
    return b.build();
}

Expr Expr::variable(ChartPtr chart, const std::string& name) {
    int v = chart->require(name);
    return variable(std::move(chart), v);
}

Expr Expr::power(ChartPtr chart, int var, const Rational& exponent) {
    ExprBuilder b(chart);
    b.add_term(Rational(1), {{var, exponent}});
    return b.build();
}

Expr Expr::from_terms(ChartPtr chart,
                      const std::vector<std::pair<Rational, std::map<int, Rational>>>& terms) {
    ExprBuilder b(std::move(chart));
    for (const auto& [coeff, exps] : terms) b.add_term(coeff, exps);
    return b.build();
}

bool Expr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exps.empty());
}

Rational Expr::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].exps.empty()) return terms_[0].coeff;
    raise(ErrorKind::bad_input, "expression is not constant: " + str());
}

Expr Expr::operator-() const {
    Expr e = *this;
    for (auto& m : e.terms_) m.coeff = -m.coeff;
    return e;
}

Expr operator+(const Expr& a, const Expr& b) {
    require_same_chart(a.chart_, b.chart_);
    ExprBuilder out(a.chart_);
    out.add(a);
    out.add(b);
    return out.build();
}

Expr operator-(const Expr& a, const Expr& b) {
    require_same_chart(a.chart_, b.chart_);
    ExprBuilder out(a.chart_);
    out.add(a);
    out.add_scaled(b, Rational(-1));
    return out.build();
}

Monomial mul_monomials(const ChartPtr& chart, const Monomial& a, const Monomial& b) {
    Monomial out;
    out.coeff = a.coeff * b.coeff;
    std::size_t i = 0, j = 0;
    while (i < a.exps.size() || j < b.exps.size()) {
        int va = i < a.exps.size() ? a.exps[i].first : chart->size();
        int vb = j < b.exps.size() ? b.exps[j].first : chart->size();
        int v = std::min(va, vb);
        long long ipow = 0;
        Rational rpow;
        if (va == v) {
            ipow += a.exps[i].second.ipow;
            rpow += a.exps[i].second.rpow;
            ++i;
        }
        if (vb == v) {
            ipow += b.exps[j].second.ipow;
            rpow += b.exps[j].second.rpow;
            ++j;
        }
        // Carry a full radical power into the integer part: base^1 = sign * v.
        if (rpow >= Rational(1)) {
            rpow -= Rational(1);
            ipow += 1;
            if (chart->radical_base_sign(v) < 0) out.coeff = -out.coeff;
        }
        VarExp e{ipow, rpow};
        if (!e.is_zero()) out.exps.emplace_back(v, e);
    }
    return out;
}

Expr operator*(const Expr& a, const Expr& b) {
    require_same_chart(a.chart_, b.chart_);
    ExprBuilder out(a.chart_);
    for (const auto& ma : a.terms_)
        for (const auto& mb : b.terms_) out.add_monomial(mul_monomials(a.chart_, ma, mb));
    return out.build();
}

Expr operator*(const Expr& a, const Rational& s) {
    ExprBuilder out(a.chart_);
    out.add_scaled(a, s);
    return out.build();
}

Expr Expr::pow_int(long long n) const {
    if (n == 0) return constant(chart_, Rational(1));
    if (n < 0 || terms_.size() == 1) return pow_rational(Rational(n));
    Expr acc = *this;
    for (long long k = 1; k < n; ++k) acc = acc * *this;
    return acc;
}

Expr Expr::pow_rational(const Rational& q) const {
    if (q.is_zero()) return constant(chart_, Rational(1));
    if (q.is_integer() && q.num() > 0 && terms_.size() != 1)
        return pow_int(q.num().convert_to<long long>());
    if (terms_.size() != 1) {
        if (!q.is_integer())
            raise(ErrorKind::illegal_radical,
                  "fractional exponent requires a bare signed variable, got " + str());
        raise(ErrorKind::illegal_power,
              "cannot raise a multi-term expression to exponent " + q.str());
    }
    const Monomial& m = terms_[0];
    if (!q.is_integer()) {
        // Fractional powers only on bare +v / -v with a matching domain sign.
        bool bare = m.exps.size() == 1 && m.exps[0].second.ipow == 1 &&
                    m.exps[0].second.rpow.is_zero();
        if (!bare || (m.coeff != Rational(1) && m.coeff != Rational(-1)))
            raise(ErrorKind::illegal_radical,
                  "fractional exponent requires a bare signed variable, got " + str());
        int v = m.exps[0].first;
        int wanted = m.coeff == Rational(1) ? 1 : -1;
        if (!chart_->radical_allowed(v) || chart_->radical_base_sign(v) != wanted)
            raise(ErrorKind::illegal_radical,
                  "radicand sign incompatible with domain of '" + chart_->var(v).name + "'");
        // The base expression is exactly sign*v, i.e. the radical base.
        Monomial out;
        out.coeff = Rational(1);
        long long ipow = 0;
        Rational rpow;
        apply_base_power(chart_, v, q, ipow, rpow, out.coeff);
        VarExp e{ipow, rpow};
        if (!e.is_zero()) out.exps.emplace_back(v, e);
        ExprBuilder b(chart_);
        b.add_monomial(out);
        return b.build();
    }
    // Integer power of a single monomial, negative allowed.
    long long n = q.num().convert_to<long long>();
    Monomial out;
    out.coeff = Rational(1);
    Rational base = m.coeff;
    long long an = n < 0 ? -n : n;
    for (long long k = 0; k < an; ++k) out.coeff *= base;
    if (n < 0) out.coeff = out.coeff.inverse();
    for (const auto& [v, e] : m.exps) {
        long long ipow = e.ipow * n;  // literal part scales literally
        Rational rpow;
        apply_base_power(chart_, v, e.rpow * Rational(n), ipow, rpow, out.coeff);
        VarExp ne{ipow, rpow};
        if (!ne.is_zero()) out.exps.emplace_back(v, ne);
    }
    ExprBuilder b(chart_);
    b.add_monomial(out);
    return b.build();
}

Expr Expr::diff(int v) const {
    // d/dv (v^n * base^f) = (n+f) v^(n-1) base^f for either base sign.
    ExprBuilder out(chart_);
    for (const auto& m : terms_) {
        for (std::size_t i = 0; i < m.exps.size(); ++i) {
            if (m.exps[i].first != v) continue;
            const VarExp& e = m.exps[i].second;
            Rational factor = Rational(e.ipow) + e.rpow;
            Monomial d;
            d.coeff = m.coeff * factor;
            d.exps = m.exps;
            VarExp ne{e.ipow - 1, e.rpow};
            if (ne.is_zero())
                d.exps.erase(d.exps.begin() + static_cast<std::ptrdiff_t>(i));
            else
                d.exps[i].second = ne;
            out.add_monomial(d);
        }
    }
    return out.build();
}

Expr Expr::antiderivative(int v) const {
    ExprBuilder out(chart_);
    for (const auto& m : terms_) {
        Monomial a;
        a.coeff = m.coeff;
        a.exps = m.exps;
        bool found = false;
        for (std::size_t i = 0; i < a.exps.size(); ++i) {
            if (a.exps[i].first != v) continue;
            found = true;
            VarExp e = a.exps[i].second;
            if (e.ipow == -1 && e.rpow.is_zero())
                raise(ErrorKind::logarithmic_term,
                      "term with exponent -1 in '" + chart_->var(v).name +
                          "' has no antiderivative in the expression class");
            Rational divisor = Rational(e.ipow + 1) + e.rpow;
            a.coeff /= divisor;
            a.exps[i].second = VarExp{e.ipow + 1, e.rpow};
            break;
        }
        if (!found) {
            // Insert v^1 keeping the sort order.
            auto pos = std::lower_bound(
                a.exps.begin(), a.exps.end(), v,
                [](const std::pair<int, VarExp>& p, int var) { return p.first < var; });
            a.exps.insert(pos, {v, VarExp{1, Rational()}});
        }
        out.add_monomial(a);
    }
    return out.build();
}

namespace {

double pow_ll(double x, long long n) {
    bool neg = n < 0;
    unsigned long long k = static_cast<unsigned long long>(neg ? -n : n);
    double acc = 1.0, base = x;
    while (k) {
        if (k & 1ULL) acc *= base;
        base *= base;
        k >>= 1ULL;
    }
    return neg ? 1.0 / acc : acc;
}

}  // namespace

double Expr::eval(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != chart_->size())
        raise(ErrorKind::bad_input, "point dimension does not match chart");
    double total = 0.0;
    for (const auto& m : terms_) {
        double term = m.coeff.to_double();
        for (const auto& [v, e] : m.exps) {
            double x = point[static_cast<std::size_t>(v)];
            if (e.ipow != 0) {
                if (x == 0.0 && e.ipow < 0)
                    raise(ErrorKind::domain_violation,
                          "negative power of '" + chart_->var(v).name + "' at zero");
                term *= pow_ll(x, e.ipow);
            }
            if (!e.rpow.is_zero()) {
                double base = chart_->radical_base_sign(v) < 0 ? -x : x;
                if (base <= 0.0)
                    raise(ErrorKind::domain_violation,
                          "radical of non-positive base for '" + chart_->var(v).name + "'");
                term *= std::pow(base, e.rpow.to_double());
            }
        }
        total += term;
    }
    return total;
}

bool Expr::equals(const Expr& other) const {
    require_same_chart(chart_, other.chart_);
    if (terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coeff != other.terms_[i].coeff) return false;
        if (!(terms_[i].exps == other.terms_[i].exps)) return false;
    }
    return true;
}

Expr Expr::remap(const ChartPtr& new_chart, const std::vector<int>& var_map,
                 const std::map<int, Rational>& fixed) const {
    ExprBuilder out(new_chart);
    for (const auto& m : terms_) {
        Monomial nm;
        nm.coeff = m.coeff;
        bool dead = false;
        for (const auto& [v, e] : m.exps) {
            int nv = var_map[static_cast<std::size_t>(v)];
            if (nv >= 0) {
                if (!e.rpow.is_zero() &&
                    chart_->radical_base_sign(v) != new_chart->radical_base_sign(nv))
                    raise(ErrorKind::illegal_radical,
                          "remap changes the radical base of '" + chart_->var(v).name + "'");
                nm.exps.emplace_back(nv, e);
            } else {
                auto it = fixed.find(v);
                if (it == fixed.end())
                    raise(ErrorKind::bad_input, "no value for eliminated variable");
                if (!e.rpow.is_zero())
                    raise(ErrorKind::illegal_power,
                          "cannot substitute a number into a radical of '" +
                              chart_->var(v).name + "'");
                const Rational& val = it->second;
                if (val.is_zero() && e.ipow < 0)
                    raise(ErrorKind::bad_input, "substitution hits a pole");
                if (val.is_zero() && e.ipow > 0) {
                    dead = true;
                    break;
                }
                Rational p(1);
                long long an = e.ipow < 0 ? -e.ipow : e.ipow;
                for (long long k = 0; k < an; ++k) p *= val;
                if (e.ipow < 0) p = p.inverse();
                nm.coeff *= p;
            }
        }
        if (dead) continue;
        std::sort(nm.exps.begin(), nm.exps.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out.add_monomial(nm);
    }
    return out.build();
}

std::string Expr::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& m : terms_) {
        Rational c = m.coeff;
        if (first) {
            if (c.sign() < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
            if (c.sign() < 0) c = -c;
        }
        first = false;
        bool printed = false;
        if (!c.is_one() || m.exps.empty()) {
            os << c.str();
            printed = true;
        }
        for (const auto& [v, e] : m.exps) {
            const std::string& name = chart_->var(v).name;
            if (e.ipow != 0) {
                if (printed) os << "*";
                os << name;
                if (e.ipow != 1) {
                    if (e.ipow > 0)
                        os << "^" << e.ipow;
                    else
                        os << "^(" << e.ipow << ")";
                }
                printed = true;
            }
            if (!e.rpow.is_zero()) {
                if (printed) os << "*";
                if (chart_->radical_base_sign(v) < 0)
                    os << "(-" << name << ")";
                else
                    os << name;
                os << "^(" << e.rpow.str() << ")";
                printed = true;
            }
        }
    }
    return os.str();
}

double eval_num(const Expr& f, const std::vector<double>& point) {
    f.chart()->check_point(point);
    return f.eval(point);
}

double eval_num_named(const Expr& f, const std::map<std::string, double>& point) {
    const ChartPtr& chart = f.chart();
    std::vector<double> p(static_cast<std::size_t>(chart->size()), 0.0);
    if (static_cast<int>(point.size()) != chart->size())
        raise(ErrorKind::bad_input, "point does not cover the chart");
    for (const auto& [name, value] : point) p[static_cast<std::size_t>(chart->require(name))] = value;
    return eval_num(f, p);
}

bool expr_equal(const Expr& a, const Expr& b) { return a.equals(b); }

}  // namespace lieham
