#pragma once

#include <optional>
#include <string>
#include <vector>

namespace resonance {

struct BundledExperiment {
    std::string name;
    std::string ini_text;
};

/// Shipped experiment definitions, embedded so the binary works without any
/// install prefix.  The configs/ directory carries byte-identical copies for
/// editing and for passing by path; a test keeps the two in sync.
[[nodiscard]] inline const std::vector<BundledExperiment>& bundled_experiments() {
    static const std::vector<BundledExperiment> all = {
        {"heat_k2_ll1", R"ini([experiment]
name = heat_k2_ll1
description = second Dirichlet mode, arctan-minus-gauss forcing, slope at zero -1.5

[operator]
kind = laplacian_1d
length = pi
n_modes = 16
k = 2

[nonlinearity]
name = arctan_minus_gauss
params = 1.0, 2.5
expected_nu = -1.5

[constants]
alpha = 0.8
delta = 0.0

[checks]
seed = 2026

[integration]
scheme = etd2
step = 0.01
t_end = 50
save_stride = 10

[orbit]
n_starts = 32
shot_epsilon = 1e-6
t_end = 80
n_block_samples = 16
)ini"},
        {"heat_k2_sr2", R"ini([experiment]
name = heat_k2_sr2
description = second Dirichlet mode, strong resonance with negative product limit

[operator]
kind = laplacian_1d
length = pi
n_modes = 16
k = 2

[nonlinearity]
name = strong_res
params = -4.0
expected_nu = -4.0

[constants]
alpha = 0.8
delta = 0.0

[checks]
seed = 2026

[integration]
scheme = etd2
step = 0.01
t_end = 50
save_stride = 10

[orbit]
n_starts = 32
shot_epsilon = 1e-6
t_end = 80
n_block_samples = 16
)ini"},
        {"heat_k2_arctan", R"ini([experiment]
name = heat_k2_arctan
description = second Dirichlet mode, plain arctan forcing; the shifted level hits the spectrum gap hypothesis

[operator]
kind = laplacian_1d
length = pi
n_modes = 16
k = 2

[nonlinearity]
name = arctan
expected_nu = 1.0

[constants]
alpha = 0.8
delta = 0.0

[checks]
seed = 2026

[integration]
scheme = etd2
step = 0.01
t_end = 50
save_stride = 10

[orbit]
n_starts = 32
shot_epsilon = 1e-6
t_end = 80
n_block_samples = 16
)ini"},
        {"counterexample_k2", R"ini([experiment]
name = counterexample_k2
description = state-independent forcing along the resonant mode; kernel average never vanishes

[operator]
kind = laplacian_1d
length = pi
n_modes = 32
k = 2

[nonlinearity]
name = const_kernel
params = 2

[constants]
alpha = 0.8
delta = 0.0

[checks]
seed = 2026

[integration]
scheme = etd2
step = 0.001
t_end = 20
save_stride = 100

[orbit]
enabled = false
n_block_samples = 16
)ini"},
    };
    return all;
}

[[nodiscard]] inline std::optional<std::string> find_bundled(const std::string& name) {
    for (const auto& b : bundled_experiments()) {
        if (b.name == name) return b.ini_text;
    }
    return std::nullopt;
}

}  // namespace resonance
