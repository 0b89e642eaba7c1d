#pragma once

#include "fpmc/periodicity.hpp"
#include "fpmc/polynomial.hpp"
#include "fpmc/semilinear.hpp"

namespace fpmc {

/// {t : P(x(t)) >= 0} for an orbit covered by a verified certificate.
///
/// Along one residue t = start + r + kT every monomial is a constant times
/// b^(k g) with g the degree-weighted sum of growths, so P is an exponential
/// polynomial in k whose largest nonzero stratum fixes the sign once k passes
/// an explicit bound; smaller k are evaluated exactly.
SemiLinearSet hitting_set_atom(const Polynomial& p, const Lds& lds, const Certificate& cert);

/// {t : x(t) in Y}, composing atoms with union, intersection and complement.
SemiLinearSet hitting_set(const Formula& y, const Lds& lds, const Certificate& cert);

}  // namespace fpmc
