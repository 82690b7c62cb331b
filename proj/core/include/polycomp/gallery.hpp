#pragma once

#include "polycomp/betaset.hpp"
#include "polycomp/poly.hpp"
#include "polycomp/rational.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polycomp {

using Params = std::map<std::string, double>;

// Univariate building blocks (dimension 1).
MultiPoly g_poly(int n);
MultiPoly h_poly(int n);
MultiPoly psi_poly();
MultiPoly F_poly(double eps);
// z^{pn} g_n(z)
MultiPoly H_poly(int n, int p);

// Embeds a univariate polynomial as variable k of a d-variate one.
MultiPoly embed(const MultiPoly& univariate, int d, int k);

struct ContactOrder {
    int kappa;
    // |p(e^{i theta})| = 1 - c theta^kappa + ...
    double c;
};

// Order of contact of a univariate polynomial with the circle at z = 1.
ContactOrder contact_order(const MultiPoly& univariate, int max_order = 64);

struct ParamSpec {
    std::string name;
    double def;
    double lo;
    double hi;
    bool integer;
    std::string note;
};

struct FamilyData {
    int d;
    int q;
    int k;
    Rational kappa;
};

struct Expected {
    std::optional<std::string> case_tag;
    std::optional<int> s;
    std::optional<std::pair<int, int>> r;
    std::optional<BetaSet> J_cont;
    std::optional<BetaSet> J_discont;
    // exact set of beta for which the operator is bounded on A^2_beta
    std::optional<BetaSet> bounded;
    std::optional<Rational> beta_min;
    std::optional<double> slope;
    double slope_tol = 0.0;
    std::optional<bool> halfgain;
    std::optional<bool> quartergain;
    std::optional<FamilyData> family;
    std::optional<int> d_phi;
    std::string note;
};

struct GalleryEntry {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
    std::function<Symbol(const Params&)> builder;
    std::function<Expected(const Params&)> expected;
};

const std::vector<GalleryEntry>& gallery_entries();
const GalleryEntry& gallery_entry(const std::string& name);
std::vector<std::string> gallery_names();

// Fills defaults and validates ranges; throws std::invalid_argument.
Params resolve_params(const GalleryEntry& e, const Params& given);

// Builds the symbol and runs the self-map gate; throws std::runtime_error when it fails.
Symbol gallery_build(const std::string& name, const Params& params = {}, bool check_selfmap = true);
Expected gallery_expected(const std::string& name, const Params& params = {});

// beta with threshold(beta) = beta for the product family on A^2_beta(D^d), d > q
Rational product_family_fixed_point(int d, int q, int k, Rational kappa);

} // namespace polycomp
