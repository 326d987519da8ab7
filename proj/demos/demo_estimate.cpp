// Seeded consensus-probability estimate for one (n, epsilon) cell.
#include <iostream>

#include "hk/hk.hpp"

int main() {
    hk::TrialPlan plan;
    plan.n = 50;
    plan.epsilon = 0.25;
    plan.trials = 2000;
    plan.master_seed = 42;
    plan.params = hk::ModelParams<double>::with_epsilon(plan.epsilon);

    const hk::EstimateRecord rec = hk::estimate_consensus_probability(plan);
    std::cout << "n=" << rec.n << " eps=" << hk::format_double(rec.epsilon)
              << " p_hat=" << hk::format_double(rec.p_hat) << " ci=["
              << hk::format_double(rec.ci_low) << ", " << hk::format_double(rec.ci_high)
              << "] mean_steps=" << hk::format_double(rec.mean_steps) << "\n";
    return 0;
}
