#pragma once

#include "polycomp/classifier.hpp"
#include "polycomp/gallery.hpp"

#include <string>

namespace polycomp {

enum class Answer { bounded, unbounded, gap };

std::string to_string(Answer a);

struct Decision {
    Answer answer = Answer::gap;
    std::string rule;
};

// Whether C_phi maps A^2_beta1 into A^2_beta2, from a verdict and optional
// product-family data (which gives an exact answer).
Decision decide(const Verdict& v, double beta1, double beta2, const FamilyData* family = nullptr);

} // namespace polycomp
