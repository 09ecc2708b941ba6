#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lieham {

/// Sign constraint carving the open submanifold a variable lives on.
/// Fractional powers are only representable for positive (base v) and
/// negative (base -v) variables.
enum class DomainSign { positive, negative, nonzero, any };

DomainSign domain_sign_from_string(const std::string& s);
const char* domain_sign_name(DomainSign s);

struct VarSpec {
    std::string name;
    DomainSign sign = DomainSign::any;

    friend bool operator==(const VarSpec&, const VarSpec&) = default;
};

/// An ordered list of chart variables. Charts are immutable and shared; all
/// geometric objects carry a pointer to theirs.
class Chart {
  public:
    explicit Chart(std::vector<VarSpec> vars);

    int size() const { return static_cast<int>(vars_.size()); }
    const VarSpec& var(int i) const { return vars_[static_cast<std::size_t>(i)]; }
    const std::vector<VarSpec>& vars() const { return vars_; }

    /// Index of a variable, or -1 when absent.
    int find(const std::string& name) const;
    /// Index of a variable; throws UnknownVariable when absent.
    int require(const std::string& name) const;

    bool same_as(const Chart& other) const { return vars_ == other.vars_; }

    /// True when fractional powers of variable i are representable.
    bool radical_allowed(int i) const {
        DomainSign s = vars_[static_cast<std::size_t>(i)].sign;
        return s == DomainSign::positive || s == DomainSign::negative;
    }
    /// Sign of the radical base: +1 for base v, -1 for base -v.
    int radical_base_sign(int i) const {
        return vars_[static_cast<std::size_t>(i)].sign == DomainSign::negative ? -1 : 1;
    }

    /// Checks a numeric point against every sign constraint; throws
    /// DomainViolation naming the offending variable.
    void check_point(const std::vector<double>& point) const;
    bool point_ok(const std::vector<double>& point) const;

  private:
    std::vector<VarSpec> vars_;
    std::map<std::string, int> index_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<VarSpec> vars);

/// True when both objects live on structurally equal charts.
bool same_chart(const ChartPtr& a, const ChartPtr& b);
/// Throws ChartMismatch unless same_chart(a, b).
void require_same_chart(const ChartPtr& a, const ChartPtr& b);

}  // namespace lieham
