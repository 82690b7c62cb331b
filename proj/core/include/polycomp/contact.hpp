#pragma once

#include "polycomp/poly.hpp"

#include <cstddef>
#include <vector>

namespace polycomp {

struct ContactOptions {
    int grid_per_axis = 64;
    double tol_contact = 1e-9;
    // relative to the largest gradient entry
    double tol_rank = 1e-8;
    int samples = 8;
    double cluster_radius = 1e-3;
    std::size_t max_grid_points = std::size_t(1) << 19;
    int max_iter = 200;
};

// All indices are 0-based; JSON output converts to 1-based.
struct ContactRecord {
    std::vector<double> xi;
    std::vector<int> I;
    std::vector<cplx> eta;
    // rows follow I: gradient[r][k] = d phi_{I[r]} / d z_k at xi
    std::vector<std::vector<cplx>> gradient;
    std::vector<std::vector<int>> P;
    std::vector<int> P_I;
    std::vector<int> free_axes;
    // representative points of the same contact component, xi first
    std::vector<std::vector<double>> samples;
    std::size_t component_size = 1;

    int dimension() const { return static_cast<int>(xi.size()); }
};

using DeltaVector = std::vector<double>;

ContactRecord make_contact(const Symbol& phi, const std::vector<double>& theta, const std::vector<int>& I);

std::vector<ContactRecord> find_contacts(const Symbol& phi, const ContactOptions& opt = {});

// Julia-Caratheodory sign and support structure at the record's point.
bool jc_invariant_holds(const Symbol& phi, const ContactRecord& rec, double tol_rank = 1e-8);

double omega(const ContactRecord& rec, int k, const DeltaVector& delta);

struct OmegaBound {
    double lhs;
    double rhs;
    bool holds;
};

OmegaBound omega_product_bound(const ContactRecord& rec, const DeltaVector& delta);

double predicted_bound(const ContactRecord& rec, const DeltaVector& delta, double beta1, double beta2);

} // namespace polycomp
