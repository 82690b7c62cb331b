#pragma once

#include <limits>
#include <string>
#include <vector>

namespace polycomp {

inline constexpr double beta_inf = std::numeric_limits<double>::infinity();

struct BetaInterval {
    double lo;
    bool lo_closed;
    double hi;
    bool hi_closed;

    bool contains(double b) const;
    friend bool operator==(const BetaInterval&, const BetaInterval&) = default;
};

// Finite union of intervals inside the universe [-1, +inf). Always kept
// sorted, disjoint and maximal.
class BetaSet {
public:
    BetaSet() = default;

    static BetaSet empty() { return {}; }
    static BetaSet all();
    static BetaSet interval(double lo, bool lo_closed, double hi, bool hi_closed);
    static BetaSet point(double b);
    static BetaSet closed(double lo, double hi) { return interval(lo, true, hi, true); }
    static BetaSet closed_open(double lo, double hi) { return interval(lo, true, hi, false); }
    static BetaSet ray_closed(double lo) { return interval(lo, true, beta_inf, false); }
    static BetaSet ray_open(double lo) { return interval(lo, false, beta_inf, false); }

    BetaSet unite(const BetaSet& o) const;
    BetaSet intersect(const BetaSet& o) const;
    BetaSet complement() const;
    BetaSet minus(const BetaSet& o) const { return intersect(o.complement()); }

    bool contains(double b) const;
    bool is_empty() const { return parts_.empty(); }
    const std::vector<BetaInterval>& parts() const { return parts_; }
    std::string to_string() const;

    friend bool operator==(const BetaSet&, const BetaSet&) = default;

private:
    void normalize();
    std::vector<BetaInterval> parts_;
};

} // namespace polycomp
