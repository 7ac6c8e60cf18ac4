#pragma once

#include <map>
#include <string>

namespace opflab {

// Central numeric tolerances. Double precision with spectra of dimension up
// to ~10^3; equality checks apply to normalized quantities only.
struct Tolerances {
    double hermiticity  = 1e-10;  // max |M - M†| entry for "Hermitian" inputs
    double psd_floor    = 1e-9;   // eigenvalue floor for PSD / interval checks
    double equality     = 1e-12;  // entrywise equality of normalized quantities
    double support      = 1e-10;  // symmetric-support residual for M_n elements
    double completeness = 1e-10;  // sum-to-unit checks (measurements, instruments)
    double rank_cut     = 1e-9;   // singular values below rank_cut * largest are zero
    double casimir_rel  = 1e-6;   // relative separation when matching Casimir values
    double prob_clamp   = 1e-10;  // negative probabilities above -prob_clamp clamp to 0

    void set(const std::string& name, double value);
    std::map<std::string, double> as_map() const;
};

// Process-wide defaults, mutable before a run starts.
Tolerances& tolerances();

}  // namespace opflab
