#include "polycomp/contact.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

namespace polycomp {

namespace {

constexpr double pi = 3.14159265358979323846;

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

double lipschitz_bound(const MultiPoly& p)
{
    double L = 0.0;
    for (const auto& [e, c] : p.terms())
        L += std::abs(c) * std::accumulate(e.begin(), e.end(), 0);
    return L;
}

// F(theta) = sum_{j in J} |phi_j|^2 with gradient and Hessian
struct Local {
    double F = 0.0;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
};

Local local_model(const Symbol& phi, const std::vector<int>& J, const std::vector<double>& theta,
                  const std::vector<int>& axes)
{
    int d = phi.dimension;
    int m = static_cast<int>(axes.size());
    Local out;
    out.g = Eigen::VectorXd::Zero(m);
    out.H = Eigen::MatrixXd::Zero(m, m);
    for (int j : J) {
        TorusTaylor t = torus_taylor(phi.components[j], theta, 2);
        Exponent e(d, 0);
        cplx c0 = t.coef(e);
        out.F += std::norm(c0);
        std::vector<cplx> c1(m);
        for (int a = 0; a < m; ++a) {
            e[axes[a]] = 1;
            c1[a] = t.coef(e);
            e[axes[a]] = 0;
        }
        for (int a = 0; a < m; ++a) {
            out.g(a) += 2.0 * (std::conj(c0) * c1[a]).real();
            for (int b = 0; b < m; ++b) {
                cplx A;
                if (a == b) {
                    e[axes[a]] = 2;
                    A = t.coef(e);
                    e[axes[a]] = 0;
                } else {
                    e[axes[a]] = 1;
                    e[axes[b]] = 1;
                    A = t.coef(e) / 2.0;
                    e[axes[a]] = 0;
                    e[axes[b]] = 0;
                }
                double M = 2.0 * (std::conj(c0) * A).real() + (std::conj(c1[a]) * c1[b]).real();
                out.H(a, b) += 2.0 * M;
            }
        }
    }
    return out;
}

// Maximize sum_{j in J} |phi_j|^2 by damped Newton steps on the support axes.
std::vector<double> refine(const Symbol& phi, const std::vector<int>& J, std::vector<double> theta,
                           const std::vector<int>& axes, int max_iter)
{
    int m = static_cast<int>(axes.size());
    if (m == 0)
        return theta;
    Local cur = local_model(phi, J, theta, axes);
    double mu = 1e-3 * std::max(1.0, cur.H.cwiseAbs().maxCoeff());
    for (int it = 0; it < max_iter; ++it) {
        double gn = cur.g.norm();
        if (gn < 1e-16 || cur.F >= static_cast<double>(J.size()) * (1.0 - 2e-15))
            break;
        Eigen::MatrixXd A = -cur.H;
        // keep only the concave part of the model
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
        Eigen::VectorXd g0 = es.eigenvectors().transpose() * cur.g;
        for (int i = 0; i < m; ++i)
            if (std::abs(g0(i)) < 1e-13)
                g0(i) = 0.0;
        if (g0.norm() == 0.0)
            break;
        bool accepted = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::VectorXd coeff = g0;
            for (int i = 0; i < m; ++i)
                coeff(i) /= (lam(i) + mu);
            Eigen::VectorXd step = es.eigenvectors() * coeff;
            double sn = step.norm();
            if (sn > 0.5)
                step *= 0.5 / sn;
            std::vector<double> cand = theta;
            for (int a = 0; a < m; ++a)
                cand[axes[a]] = wrap_angle(cand[axes[a]] + step(a));
            Local nxt = local_model(phi, J, cand, axes);
            if (nxt.F > cur.F) {
                theta = cand;
                cur = nxt;
                mu = std::max(mu * 0.1, 1e-30);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if (!accepted)
            break;
    }
    return theta;
}

struct Point {
    std::vector<double> theta;
    std::vector<int> I;
    double deficit;
    std::size_t cell;
    bool refined;
};

} // namespace

ContactRecord make_contact(const Symbol& phi, const std::vector<double>& theta, const std::vector<int>& I)
{
    int d = phi.dimension;
    if (static_cast<int>(theta.size()) != d)
        throw std::invalid_argument("contact point dimension mismatch");
    ContactRecord rec;
    rec.xi = theta;
    for (auto& t : rec.xi)
        t = wrap_angle(t);
    rec.I = I;
    std::vector<cplx> z(d);
    for (int k = 0; k < d; ++k)
        z[k] = std::polar(1.0, rec.xi[k]);
    for (int j : I) {
        const auto& comp = phi.components.at(j);
        rec.eta.push_back(comp(z));
        std::vector<cplx> row(d);
        for (int k = 0; k < d; ++k)
            row[k] = partial(comp, k)(z);
        rec.gradient.push_back(row);
        rec.P.push_back(variable_support(comp));
    }
    rec.P_I = variable_support(phi, I);
    for (int k = 0; k < d; ++k)
        if (!std::binary_search(rec.P_I.begin(), rec.P_I.end(), k))
            rec.free_axes.push_back(k);
    rec.samples.push_back(rec.xi);
    return rec;
}

std::vector<ContactRecord> find_contacts(const Symbol& phi, const ContactOptions& opt)
{
    int d = phi.dimension;
    std::vector<int> all(d);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> S = variable_support(phi, all);
    int m = static_cast<int>(S.size());
    const double tol = opt.tol_contact;

    if (m == 0) {
        std::vector<int> I;
        for (int j = 0; j < d; ++j)
            if (std::abs(phi.components[j].coefficient(Exponent(d, 0))) >= 1.0 - tol)
                I.push_back(j);
        if (I.empty())
            return {};
        auto rec = make_contact(phi, std::vector<double>(d, 0.0), I);
        return {rec};
    }

    int N = std::max(opt.grid_per_axis, 4);
    while (N > 4 && std::pow(static_cast<double>(N), m) > static_cast<double>(opt.max_grid_points))
        --N;
    std::size_t total = 1;
    for (int i = 0; i < m; ++i)
        total *= N;
    const double h = 2.0 * pi / N;

    std::vector<std::vector<double>> mod(d, std::vector<double>(total));
    std::vector<double> tau(d);
    for (int j = 0; j < d; ++j) {
        CompiledPoly cp(phi.components[j], S);
        auto& out = mod[j];
        cp.grid(N, [&](std::size_t f, cplx v) { out[f] = std::abs(v); });
        tau[j] = std::min(0.5, lipschitz_bound(phi.components[j]) * h * std::sqrt(static_cast<double>(m)));
    }

    auto decode = [&](std::size_t f) {
        std::vector<int> idx(m);
        for (int i = m - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(f % N);
            f /= N;
        }
        return idx;
    };
    auto encode = [&](const std::vector<int>& idx) {
        std::size_t f = 0;
        for (int i = 0; i < m; ++i)
            f = f * N + static_cast<std::size_t>(((idx[i] % N) + N) % N);
        return f;
    };
    std::vector<std::vector<int>> offsets;
    {
        std::vector<int> o(m, -1);
        while (true) {
            if (std::any_of(o.begin(), o.end(), [](int v) { return v != 0; }))
                offsets.push_back(o);
            int i = m - 1;
            while (i >= 0 && o[i] == 1) {
                o[i] = -1;
                --i;
            }
            if (i < 0)
                break;
            ++o[i];
        }
    }
    auto neighbors = [&](std::size_t f) {
        std::vector<std::size_t> out;
        auto idx = decode(f);
        std::vector<int> nb(m);
        for (const auto& o : offsets) {
            for (int i = 0; i < m; ++i)
                nb[i] = idx[i] + o[i];
            out.push_back(encode(nb));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    auto theta_of = [&](std::size_t f) {
        std::vector<double> th(d, 0.0);
        auto idx = decode(f);
        for (int i = 0; i < m; ++i)
            th[S[i]] = -pi + h * idx[i];
        return th;
    };
    auto deficit_at = [&](const std::vector<double>& th, std::vector<int>& I) {
        auto v = eval_torus(phi, th);
        I.clear();
        double worst = 0.0;
        for (int j = 0; j < d; ++j) {
            double df = 1.0 - std::abs(v[j]);
            if (df <= tol) {
                I.push_back(j);
                worst = std::max(worst, df);
            }
        }
        return worst;
    };

    // near-contact cells joined to exact grid contacts through near-contact cells
    // with fewer components add nothing to the component and are not refined
    std::vector<char> covered(total, 0);
    if (d <= 64) {
        std::vector<std::uint64_t> near(total, 0), exact(total, 0);
        for (std::size_t f = 0; f < total; ++f)
            for (int j = 0; j < d; ++j) {
                double df = 1.0 - mod[j][f];
                if (df <= 1e-6)
                    near[f] |= std::uint64_t(1) << j;
                if (df <= 1e-15)
                    exact[f] |= std::uint64_t(1) << j;
            }
        std::vector<std::size_t> queue;
        for (std::size_t f = 0; f < total; ++f)
            if (near[f] && near[f] == exact[f])
                queue.push_back(f);
        for (std::size_t q = 0; q < queue.size(); ++q) {
            std::size_t g = queue[q];
            for (auto nb : neighbors(g)) {
                if (covered[nb] || !near[nb] || near[nb] == exact[nb] || (near[nb] & ~near[g]))
                    continue;
                covered[nb] = 1;
                queue.push_back(nb);
            }
        }
    }

    std::vector<Point> points;
    for (std::size_t f = 0; f < total; ++f) {
        std::vector<int> J;
        bool all_exact = true;
        for (int j = 0; j < d; ++j) {
            double a = mod[j][f];
            double df = 1.0 - a;
            if (df <= 1e-6) {
                J.push_back(j);
                if (df > 1e-15)
                    all_exact = false;
                continue;
            }
            if (df > tau[j])
                continue;
            bool is_max = true;
            for (auto nb : neighbors(f))
                if (mod[j][nb] > a + 1e-15) {
                    is_max = false;
                    break;
                }
            if (is_max) {
                J.push_back(j);
                all_exact = false;
            }
        }
        if (J.empty())
            continue;
        if (!all_exact && covered[f] &&
            std::all_of(J.begin(), J.end(), [&](int j) { return 1.0 - mod[j][f] <= 1e-6; }))
            continue;
        std::vector<double> th = theta_of(f);
        if (all_exact) {
            std::vector<int> I0;
            double d0 = 0.0;
            for (int j = 0; j < d; ++j) {
                double df = 1.0 - mod[j][f];
                if (df <= tol) {
                    I0.push_back(j);
                    d0 = std::max(d0, df);
                }
            }
            points.push_back({std::move(th), std::move(I0), d0, f, false});
            continue;
        }
        std::vector<std::vector<int>> tries{J};
        bool split_done = false;
        for (std::size_t t = 0; t < tries.size(); ++t) {
            const auto& Jt = tries[t];
            std::vector<double> r = all_exact ? th : refine(phi, Jt, th, variable_support(phi, Jt), opt.max_iter);
            std::vector<int> I0, I1;
            double d0 = deficit_at(th, I0);
            double d1 = deficit_at(r, I1);
            // keep whichever of grid point and refined point is the better contact
            bool use_grid = I0.size() > I1.size() || (I0.size() == I1.size() && d0 <= d1);
            const auto& best = use_grid ? th : r;
            const auto& Ib = use_grid ? I0 : I1;
            double db = use_grid ? d0 : d1;
            if (!Ib.empty())
                points.push_back({best, Ib, db, f, !use_grid});
            if (!split_done && Jt.size() > 1 && !std::includes(Ib.begin(), Ib.end(), Jt.begin(), Jt.end())) {
                split_done = true;
                for (int j : Jt)
                    tries.push_back({j});
            }
        }
    }
    if (points.empty())
        return {};

    // connectivity: grid adjacency with nearby refined positions, or refined
    // positions within the clustering radius
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        if (a.cell != b.cell)
            return a.cell < b.cell;
        return a.I < b.I;
    });
    UnionFind uf(points.size());
    // points are sorted by cell, so each cell owns a contiguous range
    std::vector<std::uint32_t> cell_first(total + 1, 0);
    for (const auto& p : points)
        ++cell_first[p.cell + 1];
    for (std::size_t c = 0; c < total; ++c)
        cell_first[c + 1] += cell_first[c];
    const double link = 2.0 * h * std::sqrt(static_cast<double>(m));
    std::vector<int> idx(m), nb(m);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::size_t f = points[i].cell;
        for (int a = m - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(f % N);
            f /= N;
        }
        for (std::size_t o = 0; o <= offsets.size(); ++o) {
            std::size_t c = points[i].cell;
            if (o < offsets.size()) {
                for (int a = 0; a < m; ++a)
                    nb[a] = idx[a] + offsets[o][a];
                c = encode(nb);
            }
            for (std::size_t k = cell_first[c]; k < cell_first[c + 1]; ++k) {
                if (k <= i || points[k].I != points[i].I || uf.find(k) == uf.find(i))
                    continue;
                if (torus_distance(points[i].theta, points[k].theta) <= link)
                    uf.unite(i, k);
            }
        }
    }
    {
        const double r = opt.cluster_radius;
        std::map<std::vector<long>, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!points[i].refined)
                continue;
            std::vector<long> key(m);
            for (int a = 0; a < m; ++a)
                key[a] = static_cast<long>(std::floor((points[i].theta[S[a]] + pi) / r));
            buckets[key].push_back(i);
        }
        long nb_per_axis = static_cast<long>(std::ceil(2.0 * pi / r));
        for (const auto& [key, members] : buckets) {
            for (const auto& o : offsets) {
                std::vector<long> k2 = key;
                for (int a = 0; a < m; ++a)
                    k2[a] = ((k2[a] + o[a]) % nb_per_axis + nb_per_axis) % nb_per_axis;
                auto it = buckets.find(k2);
                if (it == buckets.end())
                    continue;
                for (auto i : members)
                    for (auto k : it->second)
                        if (points[i].I == points[k].I && torus_distance(points[i].theta, points[k].theta) <= r)
                            uf.unite(i, k);
            }
            for (std::size_t x = 0; x < members.size(); ++x)
                for (std::size_t y = x + 1; y < members.size(); ++y)
                    if (points[members[x]].I == points[members[y]].I &&
                        torus_distance(points[members[x]].theta, points[members[y]].theta) <= r)
                        uf.unite(members[x], members[y]);
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t i = 0; i < points.size(); ++i)
        comps[uf.find(i)].push_back(i);

    std::vector<ContactRecord> out;
    for (const auto& [root, members] : comps) {
        double min_def = 1.0;
        for (auto i : members)
            min_def = std::min(min_def, points[i].deficit);
        double cut = std::max(1e-14, 4.0 * min_def);
        std::vector<std::size_t> pool;
        for (auto i : members)
            if (points[i].deficit <= cut)
                pool.push_back(i);
        auto norm0 = [&](std::size_t i) {
            double s = 0.0;
            for (double t : points[i].theta)
                s += t * t;
            return s;
        };
        std::size_t first = pool[0];
        for (auto i : pool)
            if (norm0(i) < norm0(first))
                first = i;
        ContactRecord rec = make_contact(phi, points[first].theta, points[first].I);
        rec.component_size = members.size();
        rec.samples.clear();
        rec.samples.push_back(rec.xi);
        int want = std::max(opt.samples, 1) - 1;
        std::vector<std::size_t> rest;
        for (auto i : pool)
            if (i != first)
                rest.push_back(i);
        if (want > 0 && !rest.empty()) {
            int take = std::min<int>(want, static_cast<int>(rest.size()));
            for (int s = 0; s < take; ++s) {
                std::size_t pos = static_cast<std::size_t>((static_cast<double>(s) + 0.5) * rest.size() / take);
                pos = std::min(pos, rest.size() - 1);
                rec.samples.push_back(points[rest[pos]].theta);
            }
        }
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(), [](const ContactRecord& a, const ContactRecord& b) {
        if (a.I.size() != b.I.size())
            return a.I.size() > b.I.size();
        if (a.I != b.I)
            return a.I < b.I;
        return a.xi < b.xi;
    });
    return out;
}

bool jc_invariant_holds(const Symbol& phi, const ContactRecord& rec, double tol_rank)
{
    double gmax = 0.0;
    for (const auto& row : rec.gradient)
        for (const auto& g : row)
            gmax = std::max(gmax, std::abs(g));
    int d = rec.dimension();
    for (std::size_t r = 0; r < rec.I.size(); ++r) {
        const auto& supp = rec.P[r];
        for (int k = 0; k < d; ++k) {
            bool in = std::binary_search(supp.begin(), supp.end(), k);
            cplx g = rec.gradient[r][k];
            if (in) {
                cplx rot = std::conj(rec.eta[r]) * std::polar(1.0, rec.xi[k]) * g;
                if (rot.real() < -1e-8 || std::abs(g) <= tol_rank * gmax)
                    return false;
            } else {
                for (const auto& [e, c] : phi.components[rec.I[r]].terms())
                    if (e[k] > 0)
                        return false;
            }
        }
    }
    return true;
}

double omega(const ContactRecord& rec, int k, const DeltaVector& delta)
{
    if (delta.size() != rec.I.size())
        throw std::invalid_argument("omega: delta vector must be indexed by I");
    double w = 1.0;
    bool hit = false;
    for (std::size_t r = 0; r < rec.I.size(); ++r)
        if (std::binary_search(rec.P[r].begin(), rec.P[r].end(), k)) {
            w = hit ? std::min(w, delta[r]) : delta[r];
            hit = true;
        }
    return hit ? w : 1.0;
}

OmegaBound omega_product_bound(const ContactRecord& rec, const DeltaVector& delta)
{
    if (delta.size() != rec.I.size())
        throw std::invalid_argument("omega_product_bound: delta vector must be indexed by I");
    double lhs = 1.0;
    for (int k = 0; k < rec.dimension(); ++k)
        lhs *= omega(rec, k, delta);
    double expo = static_cast<double>(rec.P_I.size()) / static_cast<double>(rec.I.size());
    double rhs = 1.0;
    for (double dj : delta)
        rhs *= std::pow(dj, expo);
    return {lhs, rhs, lhs <= rhs * (1.0 + 1e-12)};
}

double predicted_bound(const ContactRecord& rec, const DeltaVector& delta, double beta1, double beta2)
{
    if (beta1 < -1.0 || beta2 < -1.0)
        throw std::invalid_argument("predicted_bound: weights must be >= -1");
    if (delta.size() != rec.I.size())
        throw std::invalid_argument("predicted_bound: delta vector must be indexed by I");
    double num = 1.0;
    for (double dj : delta)
        num *= std::pow(dj, 2.0 + beta1);
    double den = 1.0;
    for (int k = 0; k < rec.dimension(); ++k)
        den *= std::pow(omega(rec, k, delta), 1.0 + beta2);
    return num / den;
}

} // namespace polycomp
