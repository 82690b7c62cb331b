#include "polycomp/betaset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polycomp {

namespace {

constexpr double universe_lo = -1.0;

bool is_empty_interval(const BetaInterval& iv)
{
    if (iv.lo > iv.hi)
        return true;
    if (iv.lo == iv.hi)
        return !(iv.lo_closed && iv.hi_closed);
    return false;
}

std::string fmt_endpoint(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

} // namespace

bool BetaInterval::contains(double b) const
{
    bool lo_ok = lo_closed ? b >= lo : b > lo;
    bool hi_ok = hi_closed ? b <= hi : b < hi;
    return lo_ok && hi_ok;
}

BetaSet BetaSet::all()
{
    return interval(universe_lo, true, beta_inf, false);
}

BetaSet BetaSet::interval(double lo, bool lo_closed, double hi, bool hi_closed)
{
    if (std::isnan(lo) || std::isnan(hi))
        throw std::invalid_argument("beta set endpoint is NaN");
    BetaSet s;
    s.parts_.push_back({lo, lo_closed, hi, hi_closed});
    s.normalize();
    return s;
}

BetaSet BetaSet::point(double b)
{
    return interval(b, true, b, true);
}

void BetaSet::normalize()
{
    std::vector<BetaInterval> v;
    for (auto iv : parts_) {
        if (std::isinf(iv.hi))
            iv.hi_closed = false;
        if (iv.lo < universe_lo) {
            iv.lo = universe_lo;
            iv.lo_closed = true;
        }
        if (!is_empty_interval(iv))
            v.push_back(iv);
    }
    std::sort(v.begin(), v.end(), [](const BetaInterval& a, const BetaInterval& b) {
        if (a.lo != b.lo)
            return a.lo < b.lo;
        return a.lo_closed && !b.lo_closed;
    });
    std::vector<BetaInterval> out;
    for (const auto& iv : v) {
        if (!out.empty()) {
            auto& last = out.back();
            bool touches = iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
            if (touches) {
                if (iv.hi > last.hi) {
                    last.hi = iv.hi;
                    last.hi_closed = iv.hi_closed;
                } else if (iv.hi == last.hi) {
                    last.hi_closed = last.hi_closed || iv.hi_closed;
                }
                continue;
            }
        }
        out.push_back(iv);
    }
    parts_ = std::move(out);
}

BetaSet BetaSet::unite(const BetaSet& o) const
{
    BetaSet s;
    s.parts_ = parts_;
    s.parts_.insert(s.parts_.end(), o.parts_.begin(), o.parts_.end());
    s.normalize();
    return s;
}

BetaSet BetaSet::intersect(const BetaSet& o) const
{
    BetaSet s;
    for (const auto& a : parts_)
        for (const auto& b : o.parts_) {
            BetaInterval iv;
            if (a.lo > b.lo) {
                iv.lo = a.lo;
                iv.lo_closed = a.lo_closed;
            } else if (b.lo > a.lo) {
                iv.lo = b.lo;
                iv.lo_closed = b.lo_closed;
            } else {
                iv.lo = a.lo;
                iv.lo_closed = a.lo_closed && b.lo_closed;
            }
            if (a.hi < b.hi) {
                iv.hi = a.hi;
                iv.hi_closed = a.hi_closed;
            } else if (b.hi < a.hi) {
                iv.hi = b.hi;
                iv.hi_closed = b.hi_closed;
            } else {
                iv.hi = a.hi;
                iv.hi_closed = a.hi_closed && b.hi_closed;
            }
            s.parts_.push_back(iv);
        }
    s.normalize();
    return s;
}

BetaSet BetaSet::complement() const
{
    BetaSet s;
    double lo = universe_lo;
    bool lo_closed = true;
    for (const auto& iv : parts_) {
        s.parts_.push_back({lo, lo_closed, iv.lo, !iv.lo_closed});
        lo = iv.hi;
        lo_closed = !iv.hi_closed;
    }
    if (!std::isinf(lo))
        s.parts_.push_back({lo, lo_closed, beta_inf, false});
    s.normalize();
    return s;
}

bool BetaSet::contains(double b) const
{
    return std::any_of(parts_.begin(), parts_.end(), [&](const BetaInterval& iv) { return iv.contains(b); });
}

std::string BetaSet::to_string() const
{
    if (parts_.empty())
        return "{}";
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const auto& iv = parts_[i];
        if (i)
            out += " U ";
        if (iv.lo == iv.hi) {
            out += "{" + fmt_endpoint(iv.lo) + "}";
            continue;
        }
        out += iv.lo_closed ? "[" : "(";
        out += fmt_endpoint(iv.lo) + ", " + fmt_endpoint(iv.hi);
        out += iv.hi_closed ? "]" : ")";
    }
    return out;
}

} // namespace polycomp
