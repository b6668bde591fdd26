#pragma once

#include "swipt/model.hpp"

namespace swipt::wiener {

/// MMSE receiver for a fixed precoder: gamma F^H H^H (H F F^H H^H + I)^-1.
CMatrix wiener_receiver(const CMatrix& H, const CMatrix& F, double gamma);

/// Minimizer of the weighted MSE over gamma for fixed (F, L):
///   gamma = Tr(W L H F F^H H^H L^H + W L L^H) / Tr(Re(W L H F)).
/// Throws NoPositiveScale when the denominator is not positive.
double optimal_gamma(const SystemConfig& cfg, const CMatrix& H, const CMatrix& F,
                     const CMatrix& L);

}  // namespace swipt::wiener
