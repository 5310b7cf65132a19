#pragma once

#include <string>
#include <vector>

#include "varmarest/model.hpp"

namespace varmarest {

inline constexpr int kDefaultIrfHorizon = 20;

/// W_0 = I, W_l = sum_{i <= min(p, l)} A_i W_{l-i} + B_l (B_l = 0 for l > q).
/// Throws NotStationary.
std::vector<Matrix> vma_coefficients(const VarmaSpec& spec, int horizon);

struct IrfTable {
  int shock = 1;  // 1-based
  int horizon = 0;
  std::vector<Matrix> W;
  /// paths(l, r) = response of variable r+1 at horizon l = W_l(r, shock-1).
  Matrix paths;
};

/// Responses to eps_0 = e_shock. Throws ShockIndexOutOfRange unless
/// 1 <= shock <= d.
IrfTable impulse_response(const VarmaSpec& spec, int shock, int horizon = kDefaultIrfHorizon);

/// Columns horizon,shock,response_variable,value (1-based indices).
std::string irf_csv(const IrfTable& table);

}  // namespace varmarest
