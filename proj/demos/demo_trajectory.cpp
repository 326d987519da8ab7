// Minimal library walkthrough: run one trajectory with per-step summaries.
#include <iostream>

#include "hk/hk.hpp"

int main() {
    const hk::OpinionProfile<double> initial({0.05, 0.12, 0.4, 0.55, 0.8, 0.92});
    const auto params = hk::ModelParams<double>::with_epsilon(0.25);

    hk::RunOptions<double> options;
    options.track_connectivity = true;
    options.on_step = [](const hk::StepView<double>& view) {
        std::cout << "t=" << view.profile.time() << " components=" << view.component_count
                  << " max_gap=" << hk::format_double(hk::to_double(view.max_gap)) << "\n";
    };

    const auto result = hk::run(initial, params, options);
    std::cout << "converged_at="
              << (result.converged() ? hk::format_u64(*result.converged_at) : "none")
              << " consensus=" << (result.consensus ? "yes" : "no") << "\n";
    for (const auto& cluster : result.clusters) {
        std::cout << "cluster value=" << hk::format_double(cluster.value)
                  << " count=" << cluster.count << "\n";
    }
    return 0;
}
