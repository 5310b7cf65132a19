#include "varmarest/irf.hpp"

#include <iomanip>
#include <sstream>

#include "varmarest/error.hpp"

namespace varmarest {

std::vector<Matrix> vma_coefficients(const VarmaSpec& spec, int horizon) {
  if (horizon < 0) fail(ErrorKind::DomainError, "horizon must be non-negative");
  const StabilityReport report = check_assumption_a1(spec);
  if (!report.stationary) {
    fail(ErrorKind::NotStationary, "AR polynomial has a root of modulus " +
                                       std::to_string(report.ar_root_moduli.front()));
  }
  const int d = spec.d();
  std::vector<Matrix> W{Matrix::Identity(d, d)};
  for (int l = 1; l <= horizon; ++l) {
    Matrix w = l <= spec.q() ? spec.ma()[l - 1] : Matrix::Zero(d, d);
    for (int i = 1; i <= std::min(spec.p(), l); ++i) w.noalias() += spec.ar()[i - 1] * W[l - i];
    W.push_back(std::move(w));
  }
  return W;
}

IrfTable impulse_response(const VarmaSpec& spec, int shock, int horizon) {
  if (shock < 1 || shock > spec.d()) {
    fail(ErrorKind::ShockIndexOutOfRange, "shock " + std::to_string(shock) + " outside 1.." + std::to_string(spec.d()));
  }
  IrfTable table;
  table.shock = shock;
  table.horizon = horizon;
  table.W = vma_coefficients(spec, horizon);
  table.paths.resize(horizon + 1, spec.d());
  for (int l = 0; l <= horizon; ++l) table.paths.row(l) = table.W[l].col(shock - 1).transpose();
  return table;
}

std::string irf_csv(const IrfTable& table) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "horizon,shock,response_variable,value\n";
  for (Eigen::Index r = 0; r < table.paths.cols(); ++r) {
    for (int l = 0; l <= table.horizon; ++l) {
      out << l << ',' << table.shock << ',' << (r + 1) << ',' << table.paths(l, r) << '\n';
    }
  }
  return out.str();
}

}  // namespace varmarest
