#pragma once

#include <string>

#include <json.hpp>

#include "lrlab/basis_blocks.hpp"
#include "lrlab/experiment.hpp"
#include "lrlab/locality.hpp"
#include "lrlab/propagation.hpp"

namespace lrlab {

/// Shortest round-trip decimal form ("%.17g").
std::string format_number(double v);

nlohmann::json to_json(const LocalityCertificate& c);
nlohmann::json to_json(const RunSummary& s);
nlohmann::json to_json(const Figure1Record& r);
nlohmann::json decomposition_stats(const BlockDecomposition& d, double mu);

/// Columns t,lhs,rhs,margin.
std::string audit_csv(const AuditReport& r);
/// {violations, min_margin, tol}.
nlohmann::json audit_summary(const AuditReport& r);

/// Columns t,j,amplitude,bound with bound = e^{-mu|j-i|}(e^{⟨a⟩_t t} - 1).
std::string spread_csv(const SpreadReport& s, const LocalityCertificate& c);
std::string spread_svg(const SpreadReport& s);

/// Header T,v_lr,delta_ad,gap_min,h_norm_min,h_norm_max; 17 significant digits.
std::string fig1_csv(const std::vector<Figure1Record>& records);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace lrlab
