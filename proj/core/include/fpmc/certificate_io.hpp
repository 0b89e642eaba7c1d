#pragma once

#include <string>
#include <string_view>

#include "fpmc/periodicity.hpp"

namespace fpmc {

/// Certificate text:
///
///   cert N=1 T=2 [P=2]
///   alpha_1=1            (or alpha_1=-inf, or alpha_1=1,0 per phase)
///   0.3e1                (T snapshot lines of d numbers each)
///   0.9e1
std::string render_certificate(const Certificate& cert, const FpFormat& fmt);
Certificate parse_certificate(std::string_view text, const FpFormat& fmt);

/// One-line summary such as `N=1 T=2 alpha_1=1 verified=true`.
std::string summarize_certificate(const Certificate& cert);

std::string render_growth(const Growth& g);

}  // namespace fpmc
