#include "polycomp/decide.hpp"

#include <cmath>
#include <stdexcept>

namespace polycomp {

namespace {

// thresholds are computed in floating point, so compare with a little room
constexpr double eps = 1e-12;

bool at_least(double a, double b) { return a >= b - eps; }
bool below(double a, double b) { return a < b - eps; }

} // namespace

std::string to_string(Answer a)
{
    switch (a) {
    case Answer::bounded:
        return "bounded";
    case Answer::unbounded:
        return "unbounded";
    default:
        return "gap";
    }
}

Decision decide(const Verdict& v, double beta1, double beta2, const FamilyData* family)
{
    if (beta1 < -1.0 || beta2 < -1.0)
        throw std::invalid_argument("decide: weights must be >= -1");
    if (v.no_contact)
        return {Answer::bounded, "no contact with the torus"};
    if (family) {
        double rhs = product_family_threshold(family->d, family->q, family->k, family->kappa.to_double(), beta1);
        if (at_least(beta2, rhs))
            return {Answer::bounded, "product family: beta2 >= threshold"};
        return {Answer::unbounded, "product family: beta2 below threshold"};
    }
    if (at_least(beta2, automatic_target(beta1, v.d_phi)))
        return {Answer::bounded, "automatic target d_phi (beta1 + 2) - 2"};
    if (v.dimension == 3) {
        if (std::abs(beta1 - beta2) <= eps) {
            if (v.J_cont.contains(beta1))
                return {Answer::bounded, "beta in J_cont"};
            if (v.J_discont.contains(beta1))
                return {Answer::unbounded, "beta in J_discont"};
            return {Answer::gap, "beta in the undecided gap"};
        }
        if (below(beta1, beta2) && v.J_cont.contains(beta1))
            return {Answer::bounded, "bounded on A^2_beta1, which embeds in A^2_beta2"};
        return {Answer::gap, "no rule decides unequal weights here"};
    }
    if (v.dimension == 2) {
        for (const auto& c : v.contacts)
            if (c.tag == "error" || c.tag == "inconsistent")
                return {Answer::gap, "a contact could not be classified"};
        bool all_J = true, any_J0 = false;
        for (const auto& c : v.contacts)
            if (c.rec.I.size() == 2) {
                bool jnz = c.tag == "invertible";
                all_J = all_J && jnz;
                any_J0 = any_J0 || !jnz;
            }
        bool half = v.halfgain.value_or(false), quarter = v.quartergain.value_or(false);
        if (!half && below(beta2, 2.0 * beta1 + 2.0))
            return {Answer::unbounded, "one-variable symbol with joint contact: target 2 beta1 + 2"};
        if (all_J && at_least(beta2, beta1))
            return {Answer::bounded, "J != 0 at every joint contact"};
        if (half && at_least(beta2, beta1 + 0.5))
            return {Answer::bounded, "half gain"};
        if (beta1 > -1.0 && quarter && at_least(beta2, beta1 + 0.25))
            return {Answer::bounded, "quarter gain"};
        if (beta1 > -1.0 && !quarter && !below(beta1 + 0.25, beta2))
            return {Answer::unbounded, "quarter gain fails"};
        if (any_J0 && below(beta2, beta1 + 0.25))
            return {Answer::unbounded, "singular joint contact: no map below beta1 + 1/4"};
        return {Answer::gap, "no rule decides this pair"};
    }
    return {Answer::gap, "no classification table in this dimension"};
}

} // namespace polycomp
