#include "polycomp/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace polycomp {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_exponent(const Exponent& e, int dim)
{
    if (static_cast<int>(e.size()) != dim)
        throw std::invalid_argument("exponent length " + std::to_string(e.size()) + " does not match dimension " +
                                    std::to_string(dim));
    for (int v : e)
        if (v < 0)
            throw std::invalid_argument("negative exponent");
}

double binom(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

cplx ipow(cplx z, int n)
{
    cplx r = 1.0;
    for (int i = 0; i < n; ++i)
        r *= z;
    return r;
}

// all multi-indices of length d with total degree <= order, graded
std::vector<Exponent> multi_indices(int d, int order)
{
    std::vector<Exponent> out;
    for (int deg = 0; deg <= order; ++deg) {
        Exponent e(d, 0);
        // enumerate compositions of deg into d parts, lexicographically descending
        std::vector<Exponent> level;
        auto rec = [&](auto&& self, int pos, int left) -> void {
            if (pos == d - 1) {
                e[pos] = left;
                level.push_back(e);
                return;
            }
            for (int v = left; v >= 0; --v) {
                e[pos] = v;
                self(self, pos + 1, left - v);
            }
        };
        if (d > 0)
            rec(rec, 0, deg);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

} // namespace

MultiPoly::MultiPoly(int dim) : dim_(dim)
{
    if (dim < 1)
        throw std::invalid_argument("polynomial dimension must be positive");
}

MultiPoly::MultiPoly(int dim, const std::map<Exponent, cplx>& terms) : MultiPoly(dim)
{
    for (const auto& [e, c] : terms) {
        check_exponent(e, dim);
        terms_[e] += c;
    }
    prune();
}

MultiPoly MultiPoly::constant(int dim, cplx c)
{
    MultiPoly p(dim);
    p.add_term(Exponent(dim, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int dim, int k, cplx c)
{
    if (k < 0 || k >= dim)
        throw std::invalid_argument("variable index out of range");
    Exponent e(dim, 0);
    e[k] = 1;
    MultiPoly p(dim);
    p.add_term(e, c);
    return p;
}

MultiPoly MultiPoly::monomial(const Exponent& e, cplx c)
{
    MultiPoly p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
}

bool MultiPoly::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
}

int MultiPoly::total_degree() const
{
    int deg = 0;
    for (const auto& [e, c] : terms_)
        deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0));
    return deg;
}

int MultiPoly::degree_in(int k) const
{
    int deg = 0;
    for (const auto& [e, c] : terms_)
        deg = std::max(deg, e[k]);
    return deg;
}

cplx MultiPoly::coefficient(const Exponent& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? cplx(0.0) : it->second;
}

double MultiPoly::max_coefficient() const
{
    double m = 0.0;
    for (const auto& [e, c] : terms_)
        m = std::max(m, std::abs(c));
    return m;
}

MultiPoly& MultiPoly::add_term(const Exponent& e, cplx c)
{
    check_exponent(e, dim_);
    terms_[e] += c;
    prune();
    return *this;
}

void MultiPoly::prune()
{
    double cut = dedup_threshold * max_coefficient();
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= cut || it->second == cplx(0.0))
            it = terms_.erase(it);
        else
            ++it;
    }
}

cplx MultiPoly::operator()(const std::vector<cplx>& z) const
{
    if (static_cast<int>(z.size()) != dim_)
        throw std::invalid_argument("point dimension " + std::to_string(z.size()) + " does not match polynomial dimension " +
                                    std::to_string(dim_));
    // power tables per variable, then a plain sum
    std::vector<std::vector<cplx>> pw(dim_);
    for (int k = 0; k < dim_; ++k) {
        int deg = degree_in(k);
        pw[k].resize(deg + 1);
        pw[k][0] = 1.0;
        for (int e = 1; e <= deg; ++e)
            pw[k][e] = pw[k][e - 1] * z[k];
    }
    cplx sum = 0.0;
    for (const auto& [e, c] : terms_) {
        cplx t = c;
        for (int k = 0; k < dim_; ++k)
            if (e[k])
                t *= pw[k][e[k]];
        sum += t;
    }
    return sum;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o)
{
    if (o.dim_ != dim_)
        throw std::invalid_argument("dimension mismatch in polynomial sum");
    for (const auto& [e, c] : o.terms_)
        terms_[e] += c;
    prune();
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o)
{
    if (o.dim_ != dim_)
        throw std::invalid_argument("dimension mismatch in polynomial difference");
    for (const auto& [e, c] : o.terms_)
        terms_[e] -= c;
    prune();
    return *this;
}

MultiPoly& MultiPoly::operator*=(cplx s)
{
    for (auto& [e, c] : terms_)
        c *= s;
    prune();
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b)
{
    if (a.dim_ != b.dim_)
        throw std::invalid_argument("dimension mismatch in polynomial product");
    MultiPoly r(a.dim_);
    Exponent e(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (int k = 0; k < a.dim_; ++k)
                e[k] = ea[k] + eb[k];
            r.terms_[e] += ca * cb;
        }
    r.prune();
    return r;
}

MultiPoly MultiPoly::pow(int n) const
{
    if (n < 0)
        throw std::invalid_argument("negative polynomial power");
    MultiPoly r = constant(dim_, 1.0);
    MultiPoly base = *this;
    while (n > 0) {
        if (n & 1)
            r = r * base;
        n >>= 1;
        if (n)
            base = base * base;
    }
    return r;
}

MultiPoly MultiPoly::rotated(const std::vector<cplx>& xi, cplx factor) const
{
    if (static_cast<int>(xi.size()) != dim_)
        throw std::invalid_argument("rotation dimension mismatch");
    MultiPoly r(dim_);
    for (const auto& [e, c] : terms_) {
        cplx t = c * factor;
        for (int k = 0; k < dim_; ++k)
            t *= ipow(xi[k], e[k]);
        r.terms_[e] += t;
    }
    r.prune();
    return r;
}

MultiPoly MultiPoly::permuted(const std::vector<int>& perm) const
{
    return embedded(dim_, perm);
}

MultiPoly MultiPoly::embedded(int dim, const std::vector<int>& axes) const
{
    if (static_cast<int>(axes.size()) != dim_)
        throw std::invalid_argument("embedding needs one target axis per variable");
    for (int a : axes)
        if (a < 0 || a >= dim)
            throw std::invalid_argument("embedding axis out of range");
    MultiPoly r(dim);
    Exponent f(dim);
    for (const auto& [e, c] : terms_) {
        std::fill(f.begin(), f.end(), 0);
        for (int k = 0; k < dim_; ++k)
            f[axes[k]] += e[k];
        r.terms_[f] += c;
    }
    r.prune();
    return r;
}

Symbol::Symbol(std::vector<MultiPoly> comps, std::string nm) : components(std::move(comps)), name(std::move(nm))
{
    dimension = static_cast<int>(components.size());
    if (dimension == 0)
        throw std::invalid_argument("symbol needs at least one component");
    for (const auto& c : components)
        if (c.dimension() != dimension)
            throw std::invalid_argument("symbol component dimension does not match number of components");
}

cplx eval(const MultiPoly& p, const std::vector<cplx>& z)
{
    return p(z);
}

std::vector<cplx> eval(const Symbol& phi, const std::vector<cplx>& z)
{
    if (static_cast<int>(z.size()) != phi.dimension)
        throw std::invalid_argument("point dimension " + std::to_string(z.size()) + " does not match symbol dimension " +
                                    std::to_string(phi.dimension));
    std::vector<cplx> out;
    out.reserve(phi.components.size());
    for (const auto& c : phi.components)
        out.push_back(c(z));
    return out;
}

std::vector<cplx> eval_torus(const Symbol& phi, const std::vector<double>& theta)
{
    std::vector<cplx> z(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k)
        z[k] = std::polar(1.0, theta[k]);
    return eval(phi, z);
}

MultiPoly partial(const MultiPoly& p, int k)
{
    if (k < 0 || k >= p.dimension())
        throw std::invalid_argument("partial: coordinate index out of range");
    std::map<Exponent, cplx> out;
    for (const auto& [e, c] : p.terms())
        if (e[k] > 0) {
            Exponent f = e;
            f[k] -= 1;
            out[f] += c * static_cast<double>(e[k]);
        }
    return MultiPoly(p.dimension(), out);
}

MultiPoly partial(const MultiPoly& p, const Exponent& alpha)
{
    if (static_cast<int>(alpha.size()) != p.dimension())
        throw std::invalid_argument("partial: multi-index length mismatch");
    std::map<Exponent, cplx> out;
    for (const auto& [e, c] : p.terms()) {
        double f = 1.0;
        Exponent g = e;
        bool keep = true;
        for (int k = 0; k < p.dimension() && keep; ++k) {
            if (e[k] < alpha[k]) {
                keep = false;
                break;
            }
            for (int i = 0; i < alpha[k]; ++i)
                f *= (e[k] - i);
            g[k] -= alpha[k];
        }
        if (keep)
            out[g] += c * f;
    }
    return MultiPoly(p.dimension(), out);
}

std::vector<int> variable_support(const MultiPoly& p)
{
    std::vector<int> out;
    for (int k = 0; k < p.dimension(); ++k)
        for (const auto& [e, c] : p.terms())
            if (e[k] > 0) {
                out.push_back(k);
                break;
            }
    return out;
}

std::vector<int> variable_support(const Symbol& phi, const std::vector<int>& comps)
{
    std::vector<int> out;
    for (int j : comps) {
        auto s = variable_support(phi.components.at(j));
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Symbol permute_symbol(const Symbol& phi, const std::vector<int>& perm)
{
    int d = phi.dimension;
    if (static_cast<int>(perm.size()) != d)
        throw std::invalid_argument("permutation length mismatch");
    std::vector<int> seen(d, 0);
    for (int p : perm) {
        if (p < 0 || p >= d || seen[p])
            throw std::invalid_argument("not a permutation");
        seen[p] = 1;
    }
    std::vector<MultiPoly> comps(d, MultiPoly(d));
    for (int j = 0; j < d; ++j)
        comps[perm[j]] = phi.components[j].permuted(perm);
    Symbol out(std::move(comps), phi.name);
    out.degenerate = phi.degenerate;
    return out;
}

double wrap_angle(double t)
{
    double r = std::fmod(t + pi, 2.0 * pi);
    if (r < 0)
        r += 2.0 * pi;
    r -= pi;
    if (r >= pi)
        r -= 2.0 * pi;
    return r;
}

double torus_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double t = std::abs(wrap_angle(a[k] - b[k]));
        s += t * t;
    }
    return std::sqrt(s);
}

double TorusTaylor::re_coef(const Exponent& a) const
{
    auto it = std::find(index.begin(), index.end(), a);
    return it == index.end() ? 0.0 : re[it - index.begin()];
}

double TorusTaylor::im_coef(const Exponent& a) const
{
    auto it = std::find(index.begin(), index.end(), a);
    return it == index.end() ? 0.0 : im[it - index.begin()];
}

namespace {

std::vector<double> linear_part(const TorusTaylor& t, const std::vector<double>& v)
{
    std::vector<double> out(t.dimension, 0.0);
    for (std::size_t i = 0; i < t.index.size(); ++i) {
        const auto& e = t.index[i];
        if (std::accumulate(e.begin(), e.end(), 0) == 1)
            for (int k = 0; k < t.dimension; ++k)
                if (e[k] == 1)
                    out[k] = v[i];
    }
    return out;
}

std::vector<double> quadratic_part(const TorusTaylor& t, const std::vector<double>& v)
{
    int d = t.dimension;
    std::vector<double> m(d * d, 0.0);
    for (std::size_t i = 0; i < t.index.size(); ++i) {
        const auto& e = t.index[i];
        if (std::accumulate(e.begin(), e.end(), 0) != 2)
            continue;
        std::vector<int> ks;
        for (int k = 0; k < d; ++k)
            for (int r = 0; r < e[k]; ++r)
                ks.push_back(k);
        if (ks[0] == ks[1])
            m[ks[0] * d + ks[0]] = v[i];
        else {
            m[ks[0] * d + ks[1]] = v[i] / 2.0;
            m[ks[1] * d + ks[0]] = v[i] / 2.0;
        }
    }
    return m;
}

} // namespace

std::vector<double> TorusTaylor::linear_re() const { return linear_part(*this, re); }
std::vector<double> TorusTaylor::linear_im() const { return linear_part(*this, im); }
std::vector<double> TorusTaylor::quadratic_re() const { return quadratic_part(*this, re); }
std::vector<double> TorusTaylor::quadratic_im() const { return quadratic_part(*this, im); }

TorusTaylor torus_taylor(const MultiPoly& p, const std::vector<double>& theta0, int order)
{
    int d = p.dimension();
    if (static_cast<int>(theta0.size()) != d)
        throw std::invalid_argument("torus_taylor: base point dimension mismatch");
    if (order < 0 || order > 3)
        throw std::invalid_argument("torus_taylor: order must be in 0..3");
    std::vector<cplx> xi(d);
    for (int k = 0; k < d; ++k)
        xi[k] = std::polar(1.0, theta0[k]);

    TorusTaylor out;
    out.theta0 = theta0;
    out.order = order;
    out.dimension = d;
    out.index = multi_indices(d, order);

    // T_beta = (d^beta p)(xi) / beta!  (Taylor coefficients in w = z - xi)
    std::vector<cplx> T(out.index.size(), 0.0);
    for (std::size_t b = 0; b < out.index.size(); ++b) {
        const auto& beta = out.index[b];
        cplx sum = 0.0;
        for (const auto& [e, c] : p.terms()) {
            cplx t = c;
            for (int k = 0; k < d && t != cplx(0.0); ++k) {
                if (e[k] < beta[k])
                    t = 0.0;
                else
                    t *= binom(e[k], beta[k]) * ipow(xi[k], e[k] - beta[k]);
            }
            sum += t;
        }
        T[b] = sum;
    }

    // s[b][g]: coefficient of t^g in (e^{it} - 1)^b
    std::vector<std::vector<cplx>> s(order + 1, std::vector<cplx>(order + 1, 0.0));
    std::vector<cplx> base(order + 1, 0.0);
    double fact = 1.0;
    cplx ipw = 1.0;
    for (int g = 1; g <= order; ++g) {
        fact *= g;
        ipw *= cplx(0.0, 1.0);
        base[g] = ipw / fact;
    }
    s[0][0] = 1.0;
    for (int b = 1; b <= order; ++b)
        for (int g = 0; g <= order; ++g)
            for (int h = 1; h <= g; ++h)
                s[b][g] += s[b - 1][g - h] * base[h];

    out.re.assign(out.index.size(), 0.0);
    out.im.assign(out.index.size(), 0.0);
    for (std::size_t gi = 0; gi < out.index.size(); ++gi) {
        const auto& gamma = out.index[gi];
        cplx sum = 0.0;
        for (std::size_t b = 0; b < out.index.size(); ++b) {
            const auto& beta = out.index[b];
            cplx t = T[b];
            for (int k = 0; k < d && t != cplx(0.0); ++k) {
                if (beta[k] > gamma[k])
                    t = 0.0;
                else
                    t *= ipow(xi[k], beta[k]) * s[beta[k]][gamma[k]];
            }
            sum += t;
        }
        out.re[gi] = sum.real();
        out.im[gi] = sum.imag();
    }
    return out;
}

TorusTaylor torus_taylor(const Symbol& phi, int j, const std::vector<double>& theta0, int order)
{
    if (j < 0 || j >= phi.dimension)
        throw std::invalid_argument("torus_taylor: component index out of range");
    return torus_taylor(phi.components[j], theta0, order);
}

// ---------------------------------------------------------------------------

CompiledPoly::CompiledPoly(const MultiPoly& p) : CompiledPoly(p, [&] {
    std::vector<int> a(p.dimension());
    std::iota(a.begin(), a.end(), 0);
    return a;
}())
{
}

CompiledPoly::CompiledPoly(const MultiPoly& p, std::vector<int> axes) : dim_(p.dimension()), axes_(std::move(axes))
{
    int m = static_cast<int>(axes_.size());
    std::vector<int> pos(dim_, -1);
    for (int i = 0; i < m; ++i) {
        if (axes_[i] < 0 || axes_[i] >= dim_ || pos[axes_[i]] != -1)
            throw std::invalid_argument("compiled polynomial: bad axis list");
        pos[axes_[i]] = i;
    }
    for (const auto& [e, c] : p.terms())
        for (int k = 0; k < dim_; ++k)
            if (e[k] > 0 && pos[k] < 0)
                throw std::invalid_argument("compiled polynomial: axis list misses a variable in the support");

    extent_.assign(m, 1);
    for (int i = 0; i < m; ++i)
        extent_[i] = p.degree_in(axes_[i]) + 1;
    double dense_size = 1.0;
    for (int x : extent_)
        dense_size *= x;
    dense_ = dense_size <= 64.0 * static_cast<double>(std::max<std::size_t>(p.size(), 1)) + 4096.0;

    if (dense_) {
        std::size_t total = static_cast<std::size_t>(dense_size);
        tensor_.assign(total, 0.0);
        for (const auto& [e, c] : p.terms()) {
            std::size_t flat = 0;
            for (int i = 0; i < m; ++i)
                flat = flat * extent_[i] + e[axes_[i]];
            tensor_[flat] += c;
        }
        std::size_t need = 0, rest = total;
        for (int i = 0; i < m; ++i) {
            rest /= extent_[i];
            need += rest;
        }
        scratch_ = std::max<std::size_t>(need, 1);
    } else {
        maxdeg_.assign(m, 0);
        for (const auto& [e, c] : p.terms()) {
            std::vector<int> ex(m);
            for (int i = 0; i < m; ++i) {
                ex[i] = e[axes_[i]];
                maxdeg_[i] = std::max(maxdeg_[i], ex[i]);
            }
            sparse_.emplace_back(std::move(ex), c);
        }
        std::size_t s = 0;
        for (int x : maxdeg_)
            s += x + 1;
        scratch_ = std::max<std::size_t>(s, 1);
    }
}

cplx CompiledPoly::eval(const cplx* z, cplx* scratch) const
{
    int m = static_cast<int>(axes_.size());
    if (!dense_) {
        std::vector<cplx*> pw(m);
        cplx* q = scratch;
        for (int i = 0; i < m; ++i) {
            pw[i] = q;
            q[0] = 1.0;
            for (int e = 1; e <= maxdeg_[i]; ++e)
                q[e] = q[e - 1] * z[axes_[i]];
            q += maxdeg_[i] + 1;
        }
        cplx sum = 0.0;
        for (const auto& [ex, c] : sparse_) {
            cplx t = c;
            for (int i = 0; i < m; ++i)
                if (ex[i])
                    t *= pw[i][ex[i]];
            sum += t;
        }
        return sum;
    }
    if (m == 0)
        return tensor_.empty() ? cplx(0.0) : tensor_[0];
    // reduce the slowest axis first
    const cplx* src = tensor_.data();
    std::size_t size = tensor_.size();
    cplx* dst = scratch;
    for (int i = 0; i < m; ++i) {
        int n = extent_[i];
        std::size_t rest = size / n;
        cplx zi = z[axes_[i]];
        const cplx* top = src + (n - 1) * rest;
        for (std::size_t r = 0; r < rest; ++r)
            dst[r] = top[r];
        for (int e = n - 2; e >= 0; --e) {
            const cplx* row = src + e * rest;
            for (std::size_t r = 0; r < rest; ++r)
                dst[r] = dst[r] * zi + row[r];
        }
        // the next reduction reads from dst, writes after it
        src = dst;
        dst = dst + rest;
        size = rest;
    }
    return src[0];
}

void CompiledPoly::grid_rec(int level, std::size_t flat, const cplx* tensor, std::size_t tsize,
                            const std::vector<cplx>& roots, std::vector<std::vector<cplx>>& work, int N, void* ctx,
                            void (*cb)(void*, std::size_t, cplx)) const
{
    int m = static_cast<int>(axes_.size());
    if (!dense_) {
        std::size_t total = 1;
        for (int i = 0; i < m; ++i)
            total *= N;
        std::vector<cplx> z(dim_, 1.0), scratch(scratch_);
        std::vector<int> idx(m, 0);
        for (std::size_t f = 0; f < total; ++f) {
            std::size_t r = f;
            for (int i = m - 1; i >= 0; --i) {
                idx[i] = static_cast<int>(r % N);
                r /= N;
                z[axes_[i]] = roots[idx[i]];
            }
            cb(ctx, f, eval(z.data(), scratch.data()));
        }
        return;
    }
    if (m == 0) {
        cb(ctx, 0, tensor_.empty() ? cplx(0.0) : tensor_[0]);
        return;
    }
    int n = extent_[level];
    std::size_t rest = tsize / n;
    auto& out = work[level];
    out.resize(rest);
    const cplx* top = tensor + (n - 1) * rest;
    for (int i = 0; i < N; ++i) {
        cplx zi = roots[i];
        for (std::size_t r = 0; r < rest; ++r)
            out[r] = top[r];
        for (int e = n - 2; e >= 0; --e) {
            const cplx* row = tensor + e * rest;
            for (std::size_t r = 0; r < rest; ++r)
                out[r] = out[r] * zi + row[r];
        }
        if (level == m - 1)
            cb(ctx, flat * N + i, out[0]);
        else
            grid_rec(level + 1, flat * N + i, out.data(), rest, roots, work, N, ctx, cb);
    }
}

// ---------------------------------------------------------------------------

namespace {

// gradient of |p|^2 over the angles at theta
std::vector<double> modsq_gradient(const MultiPoly& p, const std::vector<double>& theta, double& modsq)
{
    TorusTaylor t = torus_taylor(p, theta, 1);
    int d = p.dimension();
    cplx c0 = t.coef(Exponent(d, 0));
    modsq = std::norm(c0);
    std::vector<double> g(d);
    Exponent e(d, 0);
    for (int k = 0; k < d; ++k) {
        e[k] = 1;
        g[k] = 2.0 * (std::conj(c0) * t.coef(e)).real();
        e[k] = 0;
    }
    return g;
}

double modsq_at(const MultiPoly& p, const std::vector<double>& theta)
{
    std::vector<cplx> z(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k)
        z[k] = std::polar(1.0, theta[k]);
    return std::norm(p(z));
}

// projected gradient ascent on |p|^2 over the torus
std::vector<double> ascend(const MultiPoly& p, std::vector<double> theta, int iters, double& best)
{
    double f;
    double step = 0.1;
    for (int it = 0; it < iters; ++it) {
        auto g = modsq_gradient(p, theta, f);
        double gn = 0.0;
        for (double v : g)
            gn += v * v;
        gn = std::sqrt(gn);
        if (gn < 1e-15)
            break;
        bool moved = false;
        for (int tries = 0; tries < 40; ++tries) {
            std::vector<double> cand = theta;
            for (std::size_t k = 0; k < cand.size(); ++k)
                cand[k] = wrap_angle(cand[k] + step * g[k] / gn);
            double fc = modsq_at(p, cand);
            if (fc > f) {
                theta = cand;
                f = fc;
                moved = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;
    }
    best = modsq_at(p, theta);
    return theta;
}

} // namespace

SelfMapReport selfmap_check(const Symbol& phi, int grid_per_axis, double tol)
{
    if (grid_per_axis < 8)
        throw std::invalid_argument("selfmap_check: grid_per_axis must be at least 8");
    SelfMapReport rep;
    rep.grid_per_axis = grid_per_axis;
    rep.tol = tol;
    rep.pass = true;
    int d = phi.dimension;
    for (std::size_t j = 0; j < phi.components.size(); ++j) {
        const MultiPoly& comp = phi.components[j];
        auto dup = std::find_if(phi.components.begin(), phi.components.begin() + j,
                                [&](const MultiPoly& o) { return o.terms() == comp.terms(); });
        if (dup != phi.components.begin() + j) {
            std::size_t k = dup - phi.components.begin();
            rep.max_modulus.push_back(rep.max_modulus[k]);
            rep.argmax.push_back(rep.argmax[k]);
            continue;
        }
        auto axes = variable_support(comp);
        int m = static_cast<int>(axes.size());
        int N = grid_per_axis;
        // keep the scan below ~2^24 points
        while (m > 0 && std::pow(static_cast<double>(N), m) > 16777216.0 && N > 8)
            N /= 2;
        CompiledPoly cp(comp, axes);
        constexpr std::size_t keep = 24;
        std::vector<std::pair<double, std::size_t>> top;
        auto offer = [&](std::size_t flat, cplx v) {
            double a = std::norm(v);
            if (top.size() < keep || a > top.back().first) {
                auto it = std::upper_bound(top.begin(), top.end(), std::make_pair(a, flat),
                                           [](const auto& x, const auto& y) {
                                               return x.first > y.first || (x.first == y.first && x.second < y.second);
                                           });
                top.insert(it, {a, flat});
                if (top.size() > keep)
                    top.pop_back();
            }
        };
        // too many variables for a grid: random points plus the all-ones point
        bool sampled = m > 0 && std::pow(static_cast<double>(N), m) > 16777216.0;
        std::vector<std::vector<double>> pts;
        if (sampled) {
            constexpr std::size_t n_random = 1 << 18;
            std::mt19937_64 gen(0x5e1f3a9ULL);
            std::uniform_real_distribution<double> u(-pi, pi);
            std::vector<cplx> z(d, 1.0), scratch(cp.scratch_size());
            std::vector<double> t(m, 0.0);
            for (std::size_t s = 0; s <= n_random; ++s) {
                for (int i = 0; i < m; ++i) {
                    t[i] = s == 0 ? 0.0 : u(gen);
                    z[axes[i]] = std::polar(1.0, t[i]);
                }
                cplx v = cp.eval(z.data(), scratch.data());
                std::size_t before = top.size();
                double worst = top.empty() ? 0.0 : top.back().first;
                offer(pts.size(), v);
                if (top.size() != before || std::norm(v) > worst)
                    pts.push_back(t);
            }
        } else {
            cp.grid(N, offer);
        }
        double best = -1.0;
        std::vector<double> arg(d, 0.0);
        for (const auto& [a, flat] : top) {
            std::vector<double> theta(d, 0.0);
            std::size_t r = flat;
            for (int i = m - 1; i >= 0; --i) {
                if (sampled) {
                    theta[axes[i]] = pts[flat][i];
                    continue;
                }
                theta[axes[i]] = -pi + 2.0 * pi * static_cast<double>(r % N) / N;
                r /= N;
            }
            double val = a;
            std::vector<double> th = theta;
            if (m > 0)
                th = ascend(comp, theta, 50, val);
            val = std::max(val, a);
            if (val > best) {
                best = val;
                arg = val == a ? theta : th;
            }
        }
        double mod = std::sqrt(std::max(best, 0.0));
        rep.max_modulus.push_back(mod);
        rep.argmax.push_back(arg);
        if (mod > 1.0 + tol)
            rep.pass = false;
    }
    return rep;
}

} // namespace polycomp
