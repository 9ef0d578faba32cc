#pragma once

#include <string>
#include <string_view>

namespace shrinkest {

/// How the mixed regression estimator is evaluated.
///   paper:        (I + sigma^2 Lambda*)^-1 (Z*'y + R*'W^-1 r) in canonical coordinates.
///   definitional: (X1'X1 + R'W^-1 R)^-1 (X1'y + R'W^-1 r) on untransformed data, mapped by B^-1.
enum class MreConvention { paper, definitional };

/// Which shrinkage-matrix optimum is used for SIOE/SROE.
///   exact:     true minimizer of the scalar MSE, gamma a' (sigma^2 tau + a a')^-1.
///   symmetric: the symmetrized form 1/2 (a gamma' + gamma a') (sigma^2 tau + a a')^-1.
/// Both coincide when the misspecification vector A is zero.
enum class OptimalForm { exact, symmetric };

std::string_view to_string(MreConvention c);
std::string_view to_string(OptimalForm f);
MreConvention parse_mre_convention(std::string_view s);
OptimalForm parse_optimal_form(std::string_view s);

}  // namespace shrinkest
