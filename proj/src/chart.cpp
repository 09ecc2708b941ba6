#include "lieham/chart.hpp"

#include <cmath>

#include "lieham/errors.hpp"

namespace lieham {

DomainSign domain_sign_from_string(const std::string& s) {
    if (s == "positive") return DomainSign::positive;
    if (s == "negative") return DomainSign::negative;
    if (s == "nonzero") return DomainSign::nonzero;
    if (s == "any") return DomainSign::any;
    raise(ErrorKind::bad_input, "unknown domain sign '" + s + "'");
}

const char* domain_sign_name(DomainSign s) {
    switch (s) {
        case DomainSign::positive: return "positive";
        case DomainSign::negative: return "negative";
        case DomainSign::nonzero: return "nonzero";
        case DomainSign::any: return "any";
    }
    return "any";
}

Chart::Chart(std::vector<VarSpec> vars) : vars_(std::move(vars)) {
    for (int i = 0; i < size(); ++i) {
        const auto& name = vars_[static_cast<std::size_t>(i)].name;
        if (name.empty()) raise(ErrorKind::bad_input, "empty variable name in chart");
        if (!index_.emplace(name, i).second)
            raise(ErrorKind::bad_input, "duplicate chart variable '" + name + "'");
    }
}

int Chart::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

int Chart::require(const std::string& name) const {
    int i = find(name);
    if (i < 0) raise(ErrorKind::unknown_variable, "unknown variable '" + name + "'");
    return i;
}

void Chart::check_point(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != size())
        raise(ErrorKind::bad_input, "point dimension does not match chart");
    for (int i = 0; i < size(); ++i) {
        double v = point[static_cast<std::size_t>(i)];
        const VarSpec& spec = vars_[static_cast<std::size_t>(i)];
        if (!std::isfinite(v))
            raise(ErrorKind::domain_violation, "non-finite value for " + spec.name);
        bool ok = true;
        switch (spec.sign) {
            case DomainSign::positive: ok = v > 0.0; break;
            case DomainSign::negative: ok = v < 0.0; break;
            case DomainSign::nonzero: ok = v != 0.0; break;
            case DomainSign::any: break;
        }
        if (!ok)
            raise(ErrorKind::domain_violation,
                  spec.name + " = " + std::to_string(v) + " violates sign constraint '" +
                      domain_sign_name(spec.sign) + "'");
    }
}

bool Chart::point_ok(const std::vector<double>& point) const {
    try {
        check_point(point);
        return true;
    } catch (const Error&) {
        return false;
    }
}

ChartPtr make_chart(std::vector<VarSpec> vars) {
    return std::make_shared<const Chart>(std::move(vars));
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->same_as(*b);
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (!same_chart(a, b)) raise(ErrorKind::chart_mismatch, "objects live on different charts");
}

}  // namespace lieham
