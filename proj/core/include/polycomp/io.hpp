#pragma once

#include "polycomp/betaset.hpp"
#include "polycomp/classifier.hpp"
#include "polycomp/contact.hpp"
#include "polycomp/gallery.hpp"
#include "polycomp/measure.hpp"
#include "polycomp/poly.hpp"

#include <string>
#include <vector>

namespace polycomp {

// All JSON indices (components, variables) are 1-based.

std::string symbol_to_json(const Symbol& phi, int indent = 2);
Symbol symbol_from_json(const std::string& text);
Symbol load_symbol(const std::string& path);
void save_symbol(const std::string& path, const Symbol& phi);

// list of {lo, lo_closed, hi, hi_closed}; hi is null for +inf
std::string betaset_to_json(const BetaSet& s);
BetaSet betaset_from_json(const std::string& text);

std::string contacts_to_json(const std::vector<ContactRecord>& contacts);
std::string verdict_to_json(const Verdict& v);
std::string expected_to_json(const Expected& e);
std::string series_to_json(const MeasureSeries& s);
std::string series_to_csv(const MeasureSeries& s);
std::string verify_to_json(const VerifyResult& v);
std::string scan_to_json(const ScanReport& r);
std::string selfmap_to_json(const SelfMapReport& r);

// FNV-1a 64 of the normalized symbol JSON, as 16 hex digits
std::string symbol_digest(const Symbol& phi);

} // namespace polycomp
