#pragma once

#include "dudnet/model.hpp"

namespace dudnet::association {

// Joint UL/DL association probability Pr(Case i), closed form (Fox H).
double prob_case_closed(const model::NetworkConfig& cfg,
                        model::AssociationCase c);

// The same probability by direct quadrature of the two-exponential
// integrals; the closed form's independent oracle.
double prob_case_quadrature(const model::NetworkConfig& cfg,
                            model::AssociationCase c, double rel_tol = 1e-8);

// Coupled-mode (downlink-power based) Mcell association probability.
double prob_mcell_coupled(const model::NetworkConfig& cfg);
// Pr(Scell) = Pr(Case4) in coupled mode.
double prob_scell_coupled(const model::NetworkConfig& cfg);

}  // namespace dudnet::association
