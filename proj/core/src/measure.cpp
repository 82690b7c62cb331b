#include "polycomp/measure.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace polycomp {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr std::uint64_t block_size = std::uint64_t(1) << 15;

struct Acc {
    std::uint64_t hits = 0;
    double w = 0.0;
    double w2 = 0.0;
};

// Runs fn(begin, end) over fixed blocks and sums the results in block order,
// so the total does not depend on the thread count.
template <class Fn>
Acc run_blocks(std::uint64_t n, int threads, Fn fn)
{
    std::uint64_t nblocks = (n + block_size - 1) / block_size;
    std::vector<Acc> res(nblocks);
    int t = threads > 0 ? threads : default_threads();
    t = static_cast<int>(std::min<std::uint64_t>(std::max(1, t), std::max<std::uint64_t>(1, nblocks)));
    auto work = [&](int tid) {
        for (std::uint64_t b = tid; b < nblocks; b += t)
            res[b] = fn(b * block_size, std::min(n, (b + 1) * block_size));
    };
    if (t == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < t; ++i)
            pool.emplace_back(work, i);
        for (auto& th : pool)
            th.join();
    }
    Acc total;
    for (const auto& r : res) {
        total.hits += r.hits;
        total.w += r.w;
        total.w2 += r.w2;
    }
    return total;
}

Estimate bernoulli(std::uint64_t hits, std::uint64_t n, double mass)
{
    Estimate e;
    e.hits = hits;
    e.n = n;
    double p = n ? static_cast<double>(hits) / n : 0.0;
    e.value = p * mass;
    double var = p * (1.0 - p);
    if (hits == 0)
        var = 1.0 / n;
    e.stderr_ = mass * std::sqrt(var / n);
    return e;
}

struct Window {
    std::vector<CompiledPoly> comps;
    std::vector<cplx> eta;
    std::vector<double> delta2;
    std::vector<int> axes;
    int dim = 0;
    std::size_t scratch = 0;
};

Window make_window(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta, const DeltaVector& delta)
{
    if (I.empty())
        throw std::invalid_argument("window: I must be nonempty");
    if (eta.size() != I.size() || delta.size() != I.size())
        throw std::invalid_argument("window: eta and delta must be indexed by I");
    Window w;
    w.dim = phi.dimension;
    for (std::size_t r = 0; r < I.size(); ++r) {
        if (I[r] < 0 || I[r] >= phi.dimension)
            throw std::invalid_argument("window: component index out of range");
        if (!(delta[r] > 0.0))
            throw std::invalid_argument("window: delta must be positive");
        w.comps.emplace_back(phi.components[I[r]]);
        w.scratch = std::max(w.scratch, w.comps.back().scratch_size());
        w.delta2.push_back(delta[r] * delta[r]);
    }
    w.eta = eta;
    w.axes = variable_support(phi, I);
    return w;
}

bool in_window(const Window& w, const cplx* z, cplx* scratch)
{
    for (std::size_t r = 0; r < w.comps.size(); ++r) {
        cplx v = w.comps[r].eval(z, scratch) - w.eta[r];
        if (std::norm(v) >= w.delta2[r])
            return false;
    }
    return true;
}

} // namespace

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
    : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))), ctr_(counter)
{
}

std::uint64_t CounterRng::next_u64() { return mix64(key_ ^ mix64(ctr_++)); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

int default_threads()
{
    if (const char* env = std::getenv("THREADS")) {
        int t = std::atoi(env);
        if (t > 0)
            return t;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::vector<double> default_deltas()
{
    std::vector<double> d;
    for (int k = 3; k <= 12; ++k)
        d.push_back(std::ldexp(1.0, -k));
    return d;
}

std::vector<double> default_scan_deltas()
{
    std::vector<double> d;
    for (int k = 4; k <= 7; ++k)
        d.push_back(std::ldexp(1.0, -k));
    return d;
}

namespace {

struct TermBound {
    std::vector<std::pair<std::vector<int>, cplx>> terms; // exponents restricted to the cover axes
    double second = 0.0;                                  // sum_{k,l} sup |d_k d_l f| over the torus
};

TermBound term_bound(const MultiPoly& p, const std::vector<int>& axes)
{
    TermBound tb;
    for (const auto& [e, c] : p.terms()) {
        std::vector<int> a(axes.size());
        double s = 0.0;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            a[k] = e[axes[k]];
            s += a[k];
        }
        tb.second += std::abs(c) * s * s;
        tb.terms.push_back({a, c});
    }
    return tb;
}

// true when |f - eta| >= delta on the whole cube
bool excluded(const TermBound& tb, cplx eta, double delta, const std::vector<double>& center, double h)
{
    cplx v = 0.0;
    std::vector<cplx> g(center.size(), 0.0);
    for (const auto& [a, c] : tb.terms) {
        double ph = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            ph += a[k] * center[k];
        cplx t = c * cplx(std::cos(ph), std::sin(ph));
        v += t;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k])
                g[k] += cplx(0.0, a[k]) * t;
    }
    double b = 0.5 * tb.second * h * h;
    for (const auto& gk : g)
        b += std::abs(gk) * h;
    return std::abs(v - eta) - b * (1.0 + 1e-9) - 1e-12 >= delta;
}

} // namespace

TorusCover torus_cover(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                       const DeltaVector& delta, std::size_t max_boxes)
{
    Window w = make_window(phi, I, eta, delta);
    TorusCover cov;
    cov.axes = w.axes;
    const std::size_t m = w.axes.size();
    std::vector<TermBound> tbs;
    for (int j : I)
        tbs.push_back(term_bound(phi.components[j], w.axes));
    auto keep = [&](const std::vector<double>& c, double h) {
        for (std::size_t r = 0; r < tbs.size(); ++r)
            if (excluded(tbs[r], eta[r], delta[r], c, h))
                return false;
        return true;
    };
    cov.half_width = pi;
    cov.centers.push_back(std::vector<double>(m, 0.0));
    if (!keep(cov.centers[0], pi))
        cov.centers.clear();
    const std::size_t children = m < 20 ? std::size_t(1) << m : 0;
    while (m > 0 && children > 0 && !cov.centers.empty() && cov.level < 40 &&
           cov.centers.size() * children <= std::size_t(1) << 22) {
        double h = cov.half_width / 2.0;
        std::vector<std::vector<double>> next;
        for (const auto& c : cov.centers)
            for (std::size_t mask = 0; mask < children; ++mask) {
                std::vector<double> cc = c;
                for (std::size_t k = 0; k < m; ++k)
                    cc[k] += (mask >> k & 1) ? h : -h;
                if (keep(cc, h))
                    next.push_back(std::move(cc));
            }
        if (next.size() > max_boxes)
            break;
        cov.centers = std::move(next);
        cov.half_width = h;
        ++cov.level;
    }
    cov.volume = static_cast<double>(cov.centers.size()) * std::pow(2.0 * cov.half_width, static_cast<double>(m)) *
                 std::pow(2.0 * pi, static_cast<double>(phi.dimension - static_cast<int>(m)));
    return cov;
}

Estimate torus_measure(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                       const DeltaVector& delta, std::uint64_t n_samples, std::uint64_t seed, int threads,
                       std::uint64_t stream, bool localize)
{
    if (n_samples == 0)
        throw std::invalid_argument("torus_measure: n_samples must be positive");
    Window w = make_window(phi, I, eta, delta);
    const std::size_t m = w.axes.size();
    TorusCover cov;
    if (localize) {
        cov = torus_cover(phi, I, eta, delta);
    } else {
        cov.axes = w.axes;
        cov.centers.push_back(std::vector<double>(m, 0.0));
        cov.half_width = pi;
        cov.volume = std::pow(2.0 * pi, phi.dimension);
    }
    if (cov.centers.empty()) {
        Estimate e;
        e.n = n_samples;
        return e;
    }
    const std::size_t nbox = cov.centers.size();
    const std::size_t per = m + (nbox > 1 ? 1 : 0);
    Acc acc = run_blocks(n_samples, threads, [&](std::uint64_t b, std::uint64_t e) {
        Acc a;
        std::vector<cplx> z(w.dim, cplx(1.0, 0.0));
        std::vector<cplx> scratch(w.scratch + 1);
        CounterRng rng(seed, stream, b * per);
        for (std::uint64_t i = b; i < e; ++i) {
            std::size_t box = 0;
            if (nbox > 1)
                box = std::min(nbox - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(nbox)));
            const auto& c = cov.centers[box];
            for (std::size_t k = 0; k < m; ++k) {
                double t = c[k] + cov.half_width * (2.0 * rng.uniform() - 1.0);
                z[w.axes[k]] = cplx(std::cos(t), std::sin(t));
            }
            if (in_window(w, z.data(), scratch.data()))
                ++a.hits;
        }
        return a;
    });
    return bernoulli(acc.hits, n_samples, cov.volume);
}

double bergman_radius(double u, double beta)
{
    if (!(beta > -1.0))
        throw std::invalid_argument("bergman_radius: beta must exceed -1");
    return std::sqrt(1.0 - std::pow(1.0 - u, 1.0 / (beta + 1.0)));
}

double bergman_annulus_mass(double delta, double beta)
{
    if (!(beta > -1.0))
        throw std::invalid_argument("bergman_annulus_mass: beta must exceed -1");
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("bergman_annulus_mass: delta must lie in (0, 1]");
    return std::pow(2.0 * delta - delta * delta, beta + 1.0);
}

Estimate bergman_annulus_estimate(double delta, double beta, std::uint64_t n_samples, std::uint64_t seed, int threads)
{
    if (n_samples == 0)
        throw std::invalid_argument("bergman_annulus_estimate: n_samples must be positive");
    bergman_annulus_mass(delta, beta);
    double rmin = 1.0 - delta;
    Acc acc = run_blocks(n_samples, threads, [&](std::uint64_t b, std::uint64_t e) {
        Acc a;
        CounterRng rng(seed, 0, b);
        for (std::uint64_t i = b; i < e; ++i)
            if (bergman_radius(rng.uniform(), beta) > rmin)
                ++a.hits;
        return a;
    });
    return bernoulli(acc.hits, n_samples, 1.0);
}

Estimate bergman_mass(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                      const DeltaVector& delta, double beta, std::uint64_t n_samples, std::uint64_t seed, int threads,
                      std::uint64_t stream, bool importance)
{
    if (beta < -1.0)
        throw std::invalid_argument("bergman_mass: beta must be >= -1");
    if (n_samples == 0)
        throw std::invalid_argument("bergman_mass: n_samples must be positive");
    if (beta == -1.0) {
        Estimate e = torus_measure(phi, I, eta, delta, n_samples, seed, threads, stream);
        double mass = std::pow(2.0 * pi, phi.dimension);
        e.value /= mass;
        e.stderr_ /= mass;
        return e;
    }
    Window w = make_window(phi, I, eta, delta);
    const std::size_t m = w.axes.size();
    const bool weighted = importance && beta > -0.5;
    const double prop = weighted ? -0.5 : beta;
    const double inv = 1.0 / (prop + 1.0);
    const double wfac = (beta + 1.0) / (prop + 1.0);
    Acc acc = run_blocks(n_samples, threads, [&](std::uint64_t b, std::uint64_t e) {
        Acc a;
        std::vector<cplx> z(w.dim, cplx(1.0, 0.0));
        std::vector<double> s(m);
        std::vector<cplx> scratch(w.scratch + 1);
        CounterRng rng(seed, stream, b * 2 * m);
        for (std::uint64_t i = b; i < e; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                double u = rng.uniform();
                double t = -pi + 2.0 * pi * rng.uniform();
                s[k] = std::pow(1.0 - u, inv);
                double r = std::sqrt(1.0 - s[k]);
                z[w.axes[k]] = cplx(r * std::cos(t), r * std::sin(t));
            }
            if (in_window(w, z.data(), scratch.data())) {
                ++a.hits;
                double wt = 1.0;
                if (weighted)
                    for (std::size_t k = 0; k < m; ++k)
                        wt *= wfac * std::pow(s[k], beta - prop);
                a.w += wt;
                a.w2 += wt * wt;
            }
        }
        return a;
    });
    if (!weighted)
        return bernoulli(acc.hits, n_samples, 1.0);
    Estimate est;
    est.hits = acc.hits;
    est.n = n_samples;
    double nn = static_cast<double>(n_samples);
    est.value = acc.w / nn;
    double var = std::max(0.0, acc.w2 / nn - est.value * est.value);
    if (acc.hits == 0)
        var = 1.0 / nn;
    est.stderr_ = std::sqrt(var / nn);
    return est;
}

Estimate hyperbola_measure(double a, double delta, double M, std::uint64_t n_samples, std::uint64_t seed, int threads)
{
    if (!(M >= 1.0))
        throw std::invalid_argument("hyperbola_measure: M must be >= 1");
    if (!(delta > 0.0 && delta < std::exp(-1.0)))
        throw std::invalid_argument("hyperbola_measure: delta must lie in (0, 1/e)");
    if (n_samples == 0)
        throw std::invalid_argument("hyperbola_measure: n_samples must be positive");
    Acc acc = run_blocks(n_samples, threads, [&](std::uint64_t b, std::uint64_t e) {
        Acc r;
        CounterRng rng(seed, 0, 2 * b);
        for (std::uint64_t i = b; i < e; ++i) {
            double x = M * (rng.uniform() - 0.5);
            double y = M * (rng.uniform() - 0.5);
            if (std::abs(x * x - y * y - a) < delta)
                ++r.hits;
        }
        return r;
    });
    return bernoulli(acc.hits, n_samples, M * M);
}

double hyperbola_measure_exact(double a, double delta, double M)
{
    if (!(M > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("hyperbola_measure_exact: need M > 0 and delta > 0");
    const double half = M / 2.0, top = M * M / 4.0;
    // length of {y in [-M/2, M/2] : |x^2 - y^2 - a| < delta}
    auto f = [&](double x) {
        double c = x * x - a;
        double lo = std::max(0.0, c - delta), hi = std::min(top, c + delta);
        if (hi <= lo)
            return 0.0;
        return 2.0 * (std::sqrt(hi) - std::sqrt(lo));
    };
    std::vector<double> cuts{0.0, half};
    for (double c : {a - delta, a + delta, a - delta + top, a + delta + top})
        if (c > 0.0 && std::sqrt(c) < half)
            cuts.push_back(std::sqrt(c));
    std::sort(cuts.begin(), cuts.end());
    boost::math::quadrature::tanh_sinh<double> integrator;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            total += integrator.integrate(f, cuts[i], cuts[i + 1]);
    return 2.0 * total;
}

MeasureSeries torus_series(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                           const std::vector<double>& deltas, std::uint64_t n_samples, std::uint64_t seed, int threads,
                           bool localize)
{
    MeasureSeries s;
    s.kind = "torus";
    s.I = I;
    s.eta = eta;
    s.seed = seed;
    s.samples = n_samples;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        SeriesPoint p;
        p.delta = deltas[k];
        p.stream = k;
        p.est = torus_measure(phi, I, eta, DeltaVector(I.size(), deltas[k]), n_samples, seed, threads, k, localize);
        s.points.push_back(p);
    }
    return s;
}

Fit fit_exponent(const std::vector<double>& deltas, const std::vector<double>& values, bool log_term)
{
    if (deltas.size() != values.size())
        throw std::invalid_argument("fit_exponent: size mismatch");
    int n = static_cast<int>(deltas.size());
    int p = log_term ? 3 : 2;
    if (n < std::max(p + 1, 2))
        throw std::invalid_argument("fit_exponent: too few points");
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        if (!(deltas[i] > 0.0 && deltas[i] < 1.0) || !(values[i] > 0.0))
            throw std::invalid_argument("fit_exponent: need 0 < delta < 1 and positive values");
        X(i, 0) = 1.0;
        X(i, 1) = std::log(deltas[i]);
        if (log_term)
            X(i, 2) = std::log(std::log(1.0 / deltas[i]));
        y(i) = std::log(values[i]);
    }
    Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
    Eigen::VectorXd res = y - X * c;
    double rss = res.squaredNorm();
    double tss = (y.array() - y.mean()).square().sum();
    Fit f;
    f.intercept = c(0);
    f.a = c(1);
    f.b = log_term ? c(2) : 0.0;
    f.r2 = tss > 0 ? 1.0 - rss / tss : 1.0;
    f.log_term = log_term;
    f.points = n;
    if (n > p) {
        Eigen::MatrixXd cov = (X.transpose() * X).inverse() * (rss / (n - p));
        f.a_stderr = std::sqrt(std::max(0.0, cov(1, 1)));
    }
    return f;
}

Fit fit_exponent(MeasureSeries& series, bool log_term, std::uint64_t min_hits)
{
    std::vector<double> ds, vs;
    for (auto& p : series.points) {
        p.used = false;
        p.dropped.clear();
        if (p.est.hits < min_hits)
            p.dropped = "hits below " + std::to_string(min_hits);
        else if (!(p.est.value > 3.0 * p.est.stderr_))
            p.dropped = "estimate within 3 stderr of zero";
        else {
            p.used = true;
            ds.push_back(p.delta);
            vs.push_back(p.est.value);
        }
    }
    if (ds.size() < 4)
        throw std::runtime_error("fit_exponent: fewer than 4 significant points; increase n_samples");
    series.fit = fit_exponent(ds, vs, log_term);
    return *series.fit;
}

double required_exponent(const ContactRecord& rec, double beta1, double beta2)
{
    return static_cast<double>(rec.I.size()) * (2.0 + beta1) - static_cast<double>(rec.P_I.size()) * (1.0 + beta2);
}

VerifyResult verify_scaling(const MeasureSeries& series, const ContactRecord& rec, double beta1, double beta2,
                            double slack)
{
    if (!series.fit)
        throw std::invalid_argument("verify_scaling: series has no fit");
    if (series.I != rec.I)
        throw std::invalid_argument("verify_scaling: series window does not match the contact");
    VerifyResult v;
    v.series = series;
    v.beta1 = beta1;
    v.beta2 = beta2;
    v.slack = slack;
    v.I_size = static_cast<int>(rec.I.size());
    v.P_I_size = static_cast<int>(rec.P_I.size());
    v.fitted_a = series.fit->a;
    v.a_min = required_exponent(rec, beta1, beta2);
    v.consistent = v.fitted_a >= v.a_min - slack;
    return v;
}

VerifyResult verify_scaling(const Symbol& phi, const ContactRecord& rec, double beta1, double beta2,
                            const std::vector<double>& deltas, std::uint64_t n_samples, std::uint64_t seed,
                            int threads, double slack)
{
    if (beta1 < -1.0 || beta2 < -1.0)
        throw std::invalid_argument("verify_scaling: weights must be >= -1");
    MeasureSeries s = torus_series(phi, rec.I, rec.eta, deltas, n_samples, seed, threads);
    fit_exponent(s);
    return verify_scaling(s, rec, beta1, beta2, slack);
}

ScanReport carleson_scan(const Symbol& phi, double beta1, double beta2, const std::vector<std::vector<cplx>>& eta_grid,
                         const std::vector<double>& deltas, std::uint64_t n_samples, std::uint64_t seed, int threads,
                         std::vector<int> I, std::uint64_t min_hits)
{
    if (beta1 < -1.0 || beta2 < -1.0)
        throw std::invalid_argument("carleson_scan: weights must be >= -1");
    if (eta_grid.empty() || deltas.empty())
        throw std::invalid_argument("carleson_scan: grids must be nonempty");
    if (I.empty())
        for (int j = 0; j < phi.dimension; ++j)
            I.push_back(j);
    ScanReport rep;
    rep.beta1 = beta1;
    rep.beta2 = beta2;
    rep.I = I;
    rep.deltas = deltas;
    std::vector<double> tds, tws;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        double worst = 0.0;
        std::uint64_t worst_hits = 0;
        for (std::size_t ei = 0; ei < eta_grid.size(); ++ei) {
            ScanRow row;
            row.delta = deltas[di];
            row.eta = eta_grid[ei];
            row.mass = bergman_mass(phi, I, eta_grid[ei], DeltaVector(I.size(), deltas[di]), beta2, n_samples, seed,
                                    threads, di * eta_grid.size() + ei);
            row.box = std::pow(deltas[di], (2.0 + beta1) * I.size());
            row.ratio = row.mass.value / row.box;
            if (row.ratio >= worst) {
                worst = row.ratio;
                worst_hits = row.mass.hits;
            }
            rep.rows.push_back(row);
        }
        rep.worst.push_back(worst);
        if (worst_hits >= min_hits && worst > 0.0 && deltas[di] < 1.0) {
            tds.push_back(deltas[di]);
            tws.push_back(worst);
        }
    }
    rep.trend_points = static_cast<int>(tds.size());
    if (tds.size() >= 3) {
        rep.trend_exponent = fit_exponent(tds, tws).a;
        rep.trend = rep.trend_exponent < -0.05 ? "divergent" : "bounded";
    } else {
        rep.trend = "undetermined";
    }
    return rep;
}

} // namespace polycomp
