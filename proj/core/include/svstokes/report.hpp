#pragma once

#include <string>

#include "svstokes/criticality.hpp"
#include "svstokes/experiments.hpp"
#include "svstokes/property_suites.hpp"
#include "svstokes/stokes.hpp"

namespace svstokes {

/// Output formatting. Every writer is deterministic: no timestamps, fixed
/// key order, shortest round-trip number formatting.

std::string criticality_json(const CriticalityReport& report);

inline constexpr const char* kStudyCsvHeader = "family,n,h,k,eta,element,err_u_H1,err_p_L2,div_u_L2,beta,rate_tag";

/// One row per solve (rate_tag "data") followed by one "rate" row holding
/// the fitted slopes in the error columns.
std::string study_csv(const StudyResult& study);
std::string study_json(const StudyResult& study);

std::string solve_csv(const SolveRecord& record);
std::string solve_json(const SolveRecord& record, std::uint64_t seed);

std::string property_json(const PropertyReport& report);

std::string space_diagnostics_json(const PressureSpaceBasis& space, const ModificationConstants& constants);

/// Velocity and pressure sampled at mesh vertices (pressure averaged over
/// the adjacent triangles).
std::string solution_csv(const VelocitySpace& V, const StokesSolution& sol);

}  // namespace svstokes
