#include "polycomp/classifier.hpp"

#include "polycomp/gallery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polycomp {

namespace {

Eigen::MatrixXd restrict(const std::vector<double>& full, int d, const std::vector<int>& coords)
{
    int n = static_cast<int>(coords.size());
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            m(a, b) = full[coords[a] * d + coords[b]];
    return m;
}

std::vector<double> flat(const Eigen::MatrixXd& m)
{
    std::vector<double> v(m.rows() * m.cols());
    for (int a = 0; a < m.rows(); ++a)
        for (int b = 0; b < m.cols(); ++b)
            v[a * m.cols() + b] = m(a, b);
    return v;
}

std::string sr_key(const SRClassification& sr)
{
    return std::to_string(sr.s) + ":" + std::to_string(sr.r.first) + "," + std::to_string(sr.r.second);
}

bool same_sr(const SRClassification& a, const SRClassification& b)
{
    // r is defined up to exchanging the two components
    bool r_eq = a.r == b.r || (a.r.first == b.r.second && a.r.second == b.r.first);
    return a.s == b.s && r_eq;
}

} // namespace

GradientDependence gradient_dependence(const ContactRecord& rec, double tol_rank)
{
    if (rec.I.size() != 2)
        throw std::invalid_argument("gradient_dependence: needs |I| = 2");
    int d = rec.dimension();
    Eigen::MatrixXcd G(2, d);
    for (int r = 0; r < 2; ++r)
        for (int k = 0; k < d; ++k)
            G(r, k) = rec.gradient[r][k];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
    auto sv = svd.singularValues();
    double s1 = sv(0), s2 = sv.size() > 1 ? sv(1) : 0.0;
    if (s1 == 0.0)
        throw std::domain_error("gradient_dependence: zero gradient at a contact");
    for (int r = 0; r < 2; ++r)
        if (G.row(r).norm() == 0.0)
            throw std::domain_error("gradient_dependence: zero gradient row at a contact");
    bool dep = s2 < tol_rank * s1;
    return {dep, dep ? 1 : 2, s1, s2};
}

bool jacobian_invertible(const Symbol& phi, const std::vector<double>& xi, double tol_rank)
{
    int d = phi.dimension;
    std::vector<cplx> z(d);
    for (int k = 0; k < d; ++k)
        z[k] = std::polar(1.0, xi.at(k));
    Eigen::MatrixXcd G(d, d);
    double scale = 1.0;
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k)
            G(j, k) = partial(phi.components[j], k)(z);
        scale *= G.row(j).norm();
    }
    if (scale == 0.0)
        return false;
    return std::abs(G.determinant()) > tol_rank * scale;
}

SRClassification sr_invariants_at(const Symbol& phi, const std::vector<int>& I, const std::vector<double>& xi,
                                  const SROptions& opt)
{
    if (I.size() != 2)
        throw std::invalid_argument("sr_invariants: needs |I| = 2");
    int d = phi.dimension;
    if (d != 2 && d != 3)
        throw std::invalid_argument("sr_invariants: torus dimension must be 2 or 3");
    std::vector<cplx> z(d);
    for (int k = 0; k < d; ++k)
        z[k] = std::polar(1.0, xi.at(k));

    SRClassification out;
    out.coords = variable_support(phi, I);
    int n = static_cast<int>(out.coords.size());

    std::array<Eigen::VectorXd, 2> lin;
    std::array<Eigen::MatrixXd, 2> mre, mim;
    std::vector<double> zero(d, 0.0);
    for (int r = 0; r < 2; ++r) {
        const auto& comp = phi.components[I[r]];
        cplx eta = comp(z);
        if (std::abs(std::abs(eta) - 1.0) > 1e-6)
            throw std::domain_error("sr_invariants: point is not a contact");
        MultiPoly rot = comp.rotated(z, std::conj(eta) / std::abs(eta));
        TorusTaylor t = torus_taylor(rot, zero, 2);
        auto li = t.linear_im();
        lin[r] = Eigen::VectorXd(n);
        for (int a = 0; a < n; ++a)
            lin[r](a) = li[out.coords[a]];
        mre[r] = restrict(t.quadratic_re(), d, out.coords);
        mim[r] = restrict(t.quadratic_im(), d, out.coords);
    }

    int ref = lin[0].norm() >= lin[1].norm() ? 0 : 1;
    double ln = lin[ref].norm();
    if (ln == 0.0)
        throw std::domain_error("sr_invariants: vanishing linear part (kappa = 0)");
    Eigen::VectorXd L = lin[ref] / ln;
    for (int a = 0; a < n; ++a)
        if (std::abs(L(a)) > 1e-9) {
            if (L(a) < 0)
                L = -L;
            break;
        }
    for (int r = 0; r < 2; ++r) {
        out.kappa[r] = lin[r].dot(L);
        if (std::abs(out.kappa[r]) <= 1e-12 * ln)
            throw std::domain_error("sr_invariants: kappa is numerically zero");
        if ((lin[r] - out.kappa[r] * L).norm() > 1e-6 * lin[r].norm())
            throw std::domain_error("sr_invariants: gradients are not dependent");
    }
    out.L.assign(L.data(), L.data() + n);

    Eigen::MatrixXd Sum = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < 2; ++r) {
        Eigen::MatrixXd Q = -mre[r];
        out.Q[r] = flat(Q);
        Sum += Q;
    }
    double tr = Sum.trace();
    out.tol = opt.tol_psd * (tr > 0 ? tr : 1.0);
    for (int r = 0; r < 2; ++r) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-mre[r]);
        if (es.eigenvalues().minCoeff() < -std::max(out.tol, 1e-8))
            out.psd_ok = false;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sum);
    out.Q_sum_eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::vector<int> kernel_cols;
    for (int a = 0; a < n; ++a) {
        if (es.eigenvalues()(a) > out.tol)
            ++out.s;
        else
            kernel_cols.push_back(a);
    }
    int kd = static_cast<int>(kernel_cols.size());
    out.kernel_dim = kd;
    Eigen::MatrixXd K(n, kd);
    for (int c = 0; c < kd; ++c)
        K.col(c) = es.eigenvectors().col(kernel_cols[c]);
    if (kd > 0 && (K.transpose() * L).norm() > opt.tol_span)
        throw std::domain_error("sr_invariants: L is not in the span of the positive directions of Q1+Q2");
    if (kd > 0 && opt.basis_seed) {
        std::mt19937_64 gen(*opt.basis_seed);
        std::normal_distribution<double> nd;
        Eigen::MatrixXd G(kd, kd);
        for (int a = 0; a < kd; ++a)
            for (int b = 0; b < kd; ++b)
                G(a, b) = nd(gen);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        Eigen::MatrixXd O = qr.householderQ();
        K = K * O;
    }
    Eigen::MatrixXd B = out.kappa[1] * mim[0] - out.kappa[0] * mim[1];
    Eigen::MatrixXd R = K.transpose() * B * K;
    R = 0.5 * (R + R.transpose());
    out.R = flat(R);
    if (kd > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(R);
        out.R_eigenvalues.assign(er.eigenvalues().data(), er.eigenvalues().data() + kd);
        for (double v : out.R_eigenvalues) {
            if (v > out.tol)
                ++out.r.first;
            else if (v < -out.tol)
                ++out.r.second;
        }
    }
    return out;
}

SRClassification sr_invariants(const Symbol& phi, const ContactRecord& rec, const SROptions& opt)
{
    return sr_invariants_at(phi, rec.I, rec.xi, opt);
}

CaseResult tridisc_case(const SRClassification* sr, int pI_size, bool dependent)
{
    const BetaSet all = BetaSet::all();
    if (!dependent)
        return {all, BetaSet::empty(), "independent"};
    if (pI_size <= 2)
        return {BetaSet::empty(), all, "low_support"};
    if (pI_size != 3)
        throw std::invalid_argument("tridisc_case: |P_I| must be at most 3");
    if (!sr)
        throw std::invalid_argument("tridisc_case: dependent case needs s/r data");
    int s = sr->s;
    int p = sr->r.first, q = sr->r.second;
    int rt = p + q;
    if (s == 1 && rt == 0)
        return {BetaSet::ray_closed(0.0), BetaSet::closed_open(-1.0, -2.0 / 3.0), "alpha"};
    if (s == 1 && rt == 1)
        return {BetaSet::ray_closed(-0.5), BetaSet::closed_open(-1.0, -5.0 / 6.0), "beta"};
    if (s == 1 && p == 1 && q == 1)
        return {BetaSet::ray_open(-1.0), BetaSet::point(-1.0), "gamma"};
    if (s == 2 && rt == 0)
        return {BetaSet::ray_closed(-0.5), BetaSet::point(-1.0), "delta"};
    if (s == 3 || (s == 2 && rt == 1) || (s == 1 && (p == 2 || q == 2) && rt == 2))
        return {all, BetaSet::empty(), "epsilon"};
    std::ostringstream os;
    os << "tridisc_case: (s, r) = (" << s << ", (" << p << "," << q << ")) is outside the classification table";
    throw std::domain_error(os.str());
}

namespace {

// Classifies one contact at every representative sample and checks agreement.
ContactVerdict classify_contact_tridisc(const Symbol& phi, const ContactRecord& rec, const ClassifyOptions& opt)
{
    ContactVerdict cv;
    cv.rec = rec;
    const BetaSet all = BetaSet::all();
    if (rec.I.size() == 3) {
        bool inv = jacobian_invertible(phi, rec.xi, opt.contact.tol_rank);
        for (const auto& smp : rec.samples)
            if (jacobian_invertible(phi, smp, opt.contact.tol_rank) != inv) {
                cv.tag = "inconsistent";
                cv.notes.push_back("jacobian invertibility differs across contact samples");
                return cv;
            }
        if (inv) {
            cv.tag = "invertible";
            cv.J_c = all;
        } else {
            cv.tag = "singular";
            cv.J_d = all;
        }
        return cv;
    }
    if (rec.I.size() == 1) {
        cv.tag = "single";
        cv.J_c = all;
        return cv;
    }
    auto dep = gradient_dependence(rec, opt.contact.tol_rank);
    for (const auto& smp : rec.samples) {
        auto other = make_contact(phi, smp, rec.I);
        if (gradient_dependence(other, opt.contact.tol_rank).dependent != dep.dependent) {
            cv.tag = "inconsistent";
            cv.notes.push_back("gradient dependence differs across contact samples");
            return cv;
        }
    }
    int pI = static_cast<int>(rec.P_I.size());
    if (!dep.dependent || pI <= 2) {
        auto res = tridisc_case(nullptr, pI, dep.dependent);
        cv.tag = res.tag;
        cv.J_c = res.J_c;
        cv.J_d = res.J_d;
        return cv;
    }
    SRClassification sr = sr_invariants(phi, rec, opt.sr);
    for (std::size_t i = 1; i < rec.samples.size(); ++i) {
        SRClassification o = sr_invariants_at(phi, rec.I, rec.samples[i], opt.sr);
        if (!same_sr(sr, o)) {
            cv.tag = "inconsistent";
            cv.notes.push_back("s/r differ across contact samples: " + sr_key(sr) + " vs " + sr_key(o));
            return cv;
        }
    }
    if (!sr.psd_ok)
        cv.notes.push_back("a boundary quadratic form failed the PSD check");
    cv.s = sr.s;
    cv.r = sr.r;
    auto res = tridisc_case(&sr, pI, true);
    cv.tag = res.tag;
    cv.J_c = res.J_c;
    cv.J_d = res.J_d;
    return cv;
}

} // namespace

Verdict classify_tridisc(const Symbol& phi, const ClassifyOptions& opt)
{
    if (phi.dimension != 3)
        throw std::invalid_argument("classify_tridisc: symbol must have dimension 3");
    Verdict v;
    v.dimension = 3;
    auto contacts = find_contacts(phi, opt.contact);
    v.d_phi = d_phi(contacts);
    if (contacts.empty()) {
        v.no_contact = true;
        v.J_cont = BetaSet::all();
        v.gap = BetaSet::empty();
        v.diagnostics.push_back("no contact with the torus: bounded for every beta");
        return v;
    }
    BetaSet jc = BetaSet::all();
    BetaSet jd = BetaSet::empty();
    for (const auto& rec : contacts) {
        ContactVerdict cv;
        try {
            cv = classify_contact_tridisc(phi, rec, opt);
        } catch (const std::domain_error& e) {
            cv = ContactVerdict{};
            cv.rec = rec;
            cv.tag = "error";
            cv.notes.push_back(e.what());
            v.diagnostics.push_back(e.what());
        }
        if (cv.tag == "inconsistent")
            for (const auto& n : cv.notes)
                v.diagnostics.push_back(n);
        jc = jc.intersect(cv.J_c);
        jd = jd.unite(cv.J_d);
        v.contacts.push_back(std::move(cv));
    }
    v.J_discont = jd;
    v.J_cont = jc.minus(jd);
    if (!(v.J_cont == jc))
        v.diagnostics.push_back("per-contact sets overlap; the overlap is reported as unbounded");
    v.gap = v.J_cont.unite(v.J_discont).complement();
    return v;
}

std::pair<cplx, cplx> bidisc_JD(const Symbol& phi, const std::vector<double>& xi)
{
    if (phi.dimension != 2)
        throw std::invalid_argument("bidisc_JD: symbol must have dimension 2");
    std::vector<cplx> z{std::polar(1.0, xi.at(0)), std::polar(1.0, xi.at(1))};
    cplx a = partial(phi.components[0], 0)(z), b = partial(phi.components[0], 1)(z);
    cplx c = partial(phi.components[1], 0)(z), e = partial(phi.components[1], 1)(z);
    return {a * e - b * c, a * e + b * c};
}

Verdict classify_bidisc(const Symbol& phi, const ClassifyOptions& opt)
{
    if (phi.dimension != 2)
        throw std::invalid_argument("classify_bidisc: symbol must have dimension 2");
    Verdict v;
    v.dimension = 2;
    auto contacts = find_contacts(phi, opt.contact);
    v.d_phi = d_phi(contacts);
    std::vector<int> both{0, 1};
    auto supp = variable_support(phi, both);
    bool joint = false;
    bool quarter = true;
    for (const auto& rec : contacts) {
        ContactVerdict cv;
        cv.rec = rec;
        if (rec.I.size() == 2) {
            joint = true;
            auto [J, D] = bidisc_JD(phi, rec.xi);
            cv.J = J;
            cv.D = D;
            double scale = 0.0;
            for (const auto& row : rec.gradient) {
                double rn = 0.0;
                for (const auto& g : row)
                    rn += std::norm(g);
                scale = std::max(scale, rn);
            }
            bool Jnz = std::abs(J) > opt.contact.tol_rank * std::max(scale, 1e-300);
            bool ok = Jnz;
            if (Jnz) {
                cv.tag = "invertible";
            } else {
                try {
                    SRClassification sr = sr_invariants(phi, rec, opt.sr);
                    bool agree = true;
                    for (std::size_t i = 1; i < rec.samples.size(); ++i)
                        if (!same_sr(sr, sr_invariants_at(phi, rec.I, rec.samples[i], opt.sr)))
                            agree = false;
                    cv.s = sr.s;
                    cv.r = sr.r;
                    int rt = sr.r.first + sr.r.second;
                    ok = sr.s == 2 || (sr.s == 1 && rt == 1);
                    cv.tag = "s" + std::to_string(sr.s) + "_r" + std::to_string(rt);
                    if (!agree) {
                        cv.tag = "inconsistent";
                        cv.notes.push_back("s/r differ across contact samples");
                        v.diagnostics.push_back("s/r differ across contact samples");
                        ok = false;
                    }
                } catch (const std::domain_error& e) {
                    cv.tag = "error";
                    cv.notes.push_back(e.what());
                    v.diagnostics.push_back(e.what());
                    ok = false;
                }
            }
            cv.quarter_ok = ok;
            quarter = quarter && ok;
        } else {
            cv.tag = "single";
        }
        v.contacts.push_back(std::move(cv));
    }
    v.no_contact = contacts.empty();
    v.halfgain = !(supp.size() <= 1 && joint);
    v.quartergain = quarter;
    return v;
}

Verdict classify(const Symbol& phi, const ClassifyOptions& opt)
{
    if (phi.dimension == 3)
        return classify_tridisc(phi, opt);
    if (phi.dimension == 2)
        return classify_bidisc(phi, opt);
    Verdict v;
    v.dimension = phi.dimension;
    auto contacts = find_contacts(phi, opt.contact);
    v.d_phi = d_phi(contacts);
    v.no_contact = contacts.empty();
    for (const auto& rec : contacts) {
        ContactVerdict cv;
        cv.rec = rec;
        cv.tag = "generic";
        v.contacts.push_back(std::move(cv));
    }
    v.diagnostics.push_back("no classification table in dimension " + std::to_string(phi.dimension) +
                            "; only generic operations apply");
    return v;
}

bool classify_bidisc_halfgain(const Symbol& phi, const ClassifyOptions& opt)
{
    return *classify_bidisc(phi, opt).halfgain;
}

bool classify_bidisc_quartergain(const Symbol& phi, const ClassifyOptions& opt)
{
    return *classify_bidisc(phi, opt).quartergain;
}

double stability_map(double beta1, double beta2, double beta1p)
{
    if (beta1 < -1.0 || beta2 < -1.0 || beta1p < beta1)
        throw std::invalid_argument("stability_map: need beta1' >= beta1 >= -1 and beta2 >= -1");
    if (beta2 == beta1)
        return beta1p;
    return (beta1p * (beta2 + 2.0) + 2.0 * (beta2 - beta1)) / (beta1 + 2.0);
}

int d_phi(const std::vector<ContactRecord>& contacts)
{
    int m = 0;
    for (const auto& c : contacts)
        m = std::max(m, static_cast<int>(c.I.size()));
    return m;
}

int d_phi(const Symbol& phi, const ContactOptions& opt)
{
    return d_phi(find_contacts(phi, opt));
}

double automatic_target(double beta, int dphi)
{
    if (beta < -1.0)
        throw std::invalid_argument("automatic_target: beta must be >= -1");
    if (dphi < 0)
        throw std::invalid_argument("automatic_target: d_phi must be nonnegative");
    return dphi * (beta + 2.0) - 2.0;
}

Rational product_family_threshold(int d, int q, int k, Rational kappa, Rational beta1)
{
    if (k < 1 || k > d || q < 1 || q > d)
        throw std::invalid_argument("product_family_threshold: need 1 <= k <= d and 1 <= q <= d");
    if (kappa <= Rational(1))
        throw std::invalid_argument("product_family_threshold: kappa must exceed 1");
    Rational rhs = Rational(2 * q - d - 1) - Rational(k) / kappa + Rational(q) * beta1;
    return rhs / Rational(d);
}

double product_family_threshold(int d, int q, int k, double kappa, double beta1)
{
    if (k < 1 || k > d || q < 1 || q > d)
        throw std::invalid_argument("product_family_threshold: need 1 <= k <= d and 1 <= q <= d");
    if (!(kappa > 1.0))
        throw std::invalid_argument("product_family_threshold: kappa must exceed 1");
    return ((2.0 * q - d - 1.0 - k / kappa) + q * beta1) / d;
}

BetaSet lambda_set(double beta1)
{
    if (beta1 < -1.0)
        throw std::invalid_argument("lambda_set: beta1 must be >= -1");
    return BetaSet::closed(beta1, beta1 + 0.5).unite(BetaSet::point(2.0 * beta1 + 2.0));
}

std::optional<Symbol> lambda_witness(double beta1, double beta2)
{
    if (!lambda_set(beta1).contains(beta2))
        throw std::domain_error("lambda_witness: beta2 is not attainable from beta1");
    if (beta2 == beta1)
        return gallery_build("bidisc_invertible");
    if (beta2 == beta1 + 0.5)
        return gallery_build("bidisc_z1z2");
    if (beta2 == 2.0 * beta1 + 2.0)
        return gallery_build("bidisc_z1z1");
    double gap = beta1 + 0.5 - beta2;
    if (gap > 0) {
        double n = 1.0 / (4.0 * gap);
        double rn = std::round(n);
        if (rn >= 1.0 && std::abs(n - rn) <= 1e-9 * std::max(1.0, rn))
            return gallery_build("bidisc_hn", {{"n", rn}});
    }
    return std::nullopt;
}

} // namespace polycomp
