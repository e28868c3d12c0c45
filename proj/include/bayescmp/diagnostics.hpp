#pragma once

#include <vector>

namespace bayescmp {

/// Split R-hat: every chain is cut in half and the halves are compared with
/// the usual between/within variance ratio. Chains must share one length of
/// at least 4. Constant input gives 1.
double split_rhat(const std::vector<std::vector<double>>& chains);

/// Effective sample size over split chains, with autocorrelations truncated
/// by Geyer's initial monotone sequence rule.
double effective_sample_size(const std::vector<std::vector<double>>& chains);

} // namespace bayescmp
