// Compares the serial reference runner against the OpenMP runner on the same
// sweep and verifies they produce identical numbers.

#include <omp.h>

#include <chrono>
#include <cstring>
#include <iostream>
#include <string>

#include "seqmimo/experiment.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool reports_identical(const seqmimo::SEReport& a, const seqmimo::SEReport& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& ra = a.rows[i];
        const auto& rb = b.rows[i];
        if (ra.per_trial.size() != rb.per_trial.size()) return false;
        if (std::memcmp(&ra.mean_se, &rb.mean_se, sizeof(double)) != 0 &&
            !(std::isnan(ra.mean_se) && std::isnan(rb.mean_se))) {
            return false;
        }
        for (std::size_t t = 0; t < ra.per_trial.size(); ++t) {
            if (std::memcmp(&ra.per_trial[t], &rb.per_trial[t], sizeof(double)) != 0) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t trials = 200;
    int jobs = omp_get_max_threads();
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--trials" && i + 1 < argc) {
            trials = std::stoll(argv[++i]);
        } else if (arg == "--jobs" && i + 1 < argc) {
            jobs = std::stoi(argv[++i]);
        } else {
            std::cerr << "usage: seqmimo_bench [--trials N] [--jobs J]\n";
            return 2;
        }
    }

    seqmimo::ExperimentSpec spec = seqmimo::figure_preset("Fig7", /*desk=*/true);
    spec.num_trials = trials;

    std::cout << "sweep: " << spec.preset_name << " (desk scale), " << trials
              << " trials per point\n";

    const auto t0 = Clock::now();
    const seqmimo::SEReport serial = seqmimo::run_experiment_serial(spec);
    const double t_serial = seconds_since(t0);

    const auto t1 = Clock::now();
    const seqmimo::SEReport parallel = seqmimo::run_experiment_parallel(spec, jobs);
    const double t_parallel = seconds_since(t1);

    if (!reports_identical(serial, parallel)) {
        std::cerr << "FAIL: serial and parallel results differ\n";
        return 1;
    }

    std::cout << "serial reference: " << t_serial << " s\n";
    std::cout << "openmp (" << jobs << " threads): " << t_parallel << " s\n";
    std::cout << "speedup: " << (t_serial / t_parallel) << "x\n";
    std::cout << "results identical: yes\n";
    return 0;
}
