#pragma once

#include "polycomp/betaset.hpp"
#include "polycomp/contact.hpp"
#include "polycomp/poly.hpp"
#include "polycomp/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polycomp {

struct GradientDependence {
    bool dependent;
    int rank;
    double sigma1;
    double sigma2;
};

GradientDependence gradient_dependence(const ContactRecord& rec, double tol_rank = 1e-8);

bool jacobian_invertible(const Symbol& phi, const std::vector<double>& xi, double tol_rank = 1e-8);

struct SROptions {
    double tol_psd = 1e-8;
    double tol_span = 1e-6;
    // when set, the kernel basis is multiplied by a random orthogonal matrix
    std::optional<std::uint64_t> basis_seed;
};

struct SRClassification {
    std::vector<int> coords;              // P_I, the coordinates the matrices live on
    std::array<double, 2> kappa{};
    std::vector<double> L;                // unit vector over coords
    std::array<std::vector<double>, 2> Q; // row-major, coords x coords
    std::vector<double> Q_sum_eigenvalues;
    double tol = 0.0;
    int s = 0;
    int kernel_dim = 0;
    std::vector<double> R;                // row-major, kernel_dim x kernel_dim
    std::vector<double> R_eigenvalues;
    std::pair<int, int> r{0, 0};
    bool psd_ok = true;
};

SRClassification sr_invariants(const Symbol& phi, const ContactRecord& rec, const SROptions& opt = {});
SRClassification sr_invariants_at(const Symbol& phi, const std::vector<int>& I, const std::vector<double>& xi,
                                  const SROptions& opt = {});

struct CaseResult {
    BetaSet J_c;
    BetaSet J_d;
    std::string tag;
};

// Throws std::domain_error for (s, r) combinations outside the table.
CaseResult tridisc_case(const SRClassification* sr, int pI_size, bool dependent);

struct ClassifyOptions {
    ContactOptions contact;
    SROptions sr;
};

struct ContactVerdict {
    ContactRecord rec;
    std::string tag;
    std::optional<int> s;
    std::optional<std::pair<int, int>> r;
    BetaSet J_c;
    BetaSet J_d;
    // bidisc data
    std::optional<cplx> J;
    std::optional<cplx> D;
    std::optional<bool> quarter_ok;
    std::vector<std::string> notes;
};

struct Verdict {
    int dimension = 0;
    bool no_contact = false;
    int d_phi = 0;
    BetaSet J_cont;
    BetaSet J_discont;
    BetaSet gap;
    std::vector<ContactVerdict> contacts;
    std::vector<std::string> diagnostics;
    // bidisc only
    std::optional<bool> halfgain;
    std::optional<bool> quartergain;
};

Verdict classify_tridisc(const Symbol& phi, const ClassifyOptions& opt = {});
// Dispatches on the dimension; other dimensions get contacts and d_phi only.
Verdict classify(const Symbol& phi, const ClassifyOptions& opt = {});
Verdict classify_bidisc(const Symbol& phi, const ClassifyOptions& opt = {});
bool classify_bidisc_halfgain(const Symbol& phi, const ClassifyOptions& opt = {});
bool classify_bidisc_quartergain(const Symbol& phi, const ClassifyOptions& opt = {});

std::pair<cplx, cplx> bidisc_JD(const Symbol& phi, const std::vector<double>& xi);

double stability_map(double beta1, double beta2, double beta1p);

int d_phi(const std::vector<ContactRecord>& contacts);
int d_phi(const Symbol& phi, const ContactOptions& opt = {});
// beta' = d_phi (beta + 2) - 2; d_phi = 0 gives -2 (no contact, trivially bounded)
double automatic_target(double beta, int dphi);

Rational product_family_threshold(int d, int q, int k, Rational kappa, Rational beta1);
double product_family_threshold(int d, int q, int k, double kappa, double beta1);

BetaSet lambda_set(double beta1);
// Throws std::domain_error ("not attainable") when beta2 is outside the set;
// returns nullopt when no polynomial witness is known.
std::optional<Symbol> lambda_witness(double beta1, double beta2);

} // namespace polycomp
