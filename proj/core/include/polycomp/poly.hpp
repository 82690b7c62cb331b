#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

namespace polycomp {

using cplx = std::complex<double>;
using Exponent = std::vector<int>;

// Relative threshold below which a coefficient is treated as arithmetic noise.
inline constexpr double dedup_threshold = 1e-14;

class MultiPoly {
public:
    explicit MultiPoly(int dim = 1);
    MultiPoly(int dim, const std::map<Exponent, cplx>& terms);

    static MultiPoly constant(int dim, cplx c);
    static MultiPoly variable(int dim, int k, cplx c = 1.0);
    static MultiPoly monomial(const Exponent& e, cplx c);

    int dimension() const { return dim_; }
    const std::map<Exponent, cplx>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    int total_degree() const;
    int degree_in(int k) const;
    cplx coefficient(const Exponent& e) const;
    double max_coefficient() const;

    MultiPoly& add_term(const Exponent& e, cplx c);

    cplx operator()(const std::vector<cplx>& z) const;

    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(cplx s);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, cplx s) { return a *= s; }
    friend MultiPoly operator*(cplx s, MultiPoly a) { return a *= s; }
    MultiPoly pow(int n) const;

    // factor * p(xi_1 z_1, ..., xi_d z_d)
    MultiPoly rotated(const std::vector<cplx>& xi, cplx factor) const;
    // variable k of this polynomial becomes variable perm[k]
    MultiPoly permuted(const std::vector<int>& perm) const;
    // variable k of this polynomial becomes variable axes[k] of a dim-variate polynomial
    MultiPoly embedded(int dim, const std::vector<int>& axes) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

private:
    void prune();

    int dim_;
    std::map<Exponent, cplx> terms_;
};

struct Symbol {
    int dimension = 0;
    std::vector<MultiPoly> components;
    std::string name;
    bool degenerate = false;

    Symbol() = default;
    Symbol(std::vector<MultiPoly> comps, std::string name = {});
};

cplx eval(const MultiPoly& p, const std::vector<cplx>& z);
std::vector<cplx> eval(const Symbol& phi, const std::vector<cplx>& z);
std::vector<cplx> eval_torus(const Symbol& phi, const std::vector<double>& theta);

MultiPoly partial(const MultiPoly& p, int k);
MultiPoly partial(const MultiPoly& p, const Exponent& alpha);

std::vector<int> variable_support(const MultiPoly& p);
std::vector<int> variable_support(const Symbol& phi, const std::vector<int>& comps);

// Conjugation by a coordinate permutation: component j moves to perm[j] and
// variable k moves to perm[k].
Symbol permute_symbol(const Symbol& phi, const std::vector<int>& perm);

double wrap_angle(double t);
double torus_distance(const std::vector<double>& a, const std::vector<double>& b);

// Coefficients of Re/Im p(theta0 + t) as polynomials in t, up to the given order.
struct TorusTaylor {
    std::vector<double> theta0;
    int order = 0;
    int dimension = 0;
    std::vector<Exponent> index;
    std::vector<double> re;
    std::vector<double> im;

    double re_coef(const Exponent& a) const;
    double im_coef(const Exponent& a) const;
    cplx coef(const Exponent& a) const { return {re_coef(a), im_coef(a)}; }
    std::vector<double> linear_re() const;
    std::vector<double> linear_im() const;
    // symmetric matrix M (row-major, d x d) of the quadratic part t^T M t
    std::vector<double> quadratic_re() const;
    std::vector<double> quadratic_im() const;
};

TorusTaylor torus_taylor(const MultiPoly& p, const std::vector<double>& theta0, int order);
TorusTaylor torus_taylor(const Symbol& phi, int j, const std::vector<double>& theta0, int order);

struct SelfMapReport {
    std::vector<double> max_modulus;
    std::vector<std::vector<double>> argmax;
    int grid_per_axis = 0;
    double tol = 0;
    bool pass = false;
    bool heuristic = true;
};

SelfMapReport selfmap_check(const Symbol& phi, int grid_per_axis = 64, double tol = 1e-9);

// Fast repeated evaluation. Uses a dense coefficient tensor over the chosen
// axes with nested Horner reduction when that tensor is small, otherwise a
// sparse sum with per-axis power tables.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const MultiPoly& p);
    CompiledPoly(const MultiPoly& p, std::vector<int> axes);

    std::size_t scratch_size() const { return scratch_; }
    // z is indexed by the original variables of p
    cplx eval(const cplx* z, cplx* scratch) const;
    // Visits every point of the uniform grid theta_i = -pi + 2 pi i / N over
    // the compiled axes, flat index with the last axis fastest.
    template <class F>
    void grid(int N, F&& visit) const;

    const std::vector<int>& axes() const { return axes_; }
    bool dense() const { return dense_; }

private:
    void grid_rec(int level, std::size_t flat, const cplx* tensor, std::size_t tsize, const std::vector<cplx>& roots,
                  std::vector<std::vector<cplx>>& work, int N, void* ctx, void (*cb)(void*, std::size_t, cplx)) const;

    int dim_ = 0;
    std::vector<int> axes_;
    std::vector<int> extent_;
    bool dense_ = true;
    std::vector<cplx> tensor_;
    std::vector<std::pair<std::vector<int>, cplx>> sparse_;
    std::vector<int> maxdeg_;
    std::size_t scratch_ = 0;
};

template <class F>
void CompiledPoly::grid(int N, F&& visit) const
{
    std::vector<cplx> roots(N);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < N; ++i)
        roots[i] = std::polar(1.0, -pi + 2.0 * pi * i / N);
    std::vector<std::vector<cplx>> work(axes_.size() + 1);
    using V = std::remove_reference_t<F>;
    auto cb = [](void* ctx, std::size_t flat, cplx v) { (*static_cast<V*>(ctx))(flat, v); };
    grid_rec(0, 0, tensor_.data(), tensor_.size(), roots, work, N, const_cast<void*>(static_cast<const void*>(&visit)), cb);
}

} // namespace polycomp
