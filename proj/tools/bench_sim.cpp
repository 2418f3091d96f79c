// bench_sim -- timing comparison between the serial reference driver and
// the OpenMP trial loop, plus a bitwise-agreement check between the two.
// Usage: sdcplan_bench [trials]  (default 40000)

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "sdcplan/simulator.hpp"
#include "sdcplan/units.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

int main(int argc, char** argv) {
    using namespace sdcplan;

    std::int64_t trials = 40000;
    if (argc > 1) trials = std::atoll(argv[1]);
    if (trials < 1) {
        std::cerr << "usage: sdcplan_bench [trials]\n";
        return 2;
    }

    // A mid-size bounded-storage workload: ~150 periods per trial with
    // occasional rollbacks, enough events to make the loop worth timing.
    PlatformParams params;
    params.checkpoint_cost = 600.0;
    params.recovery_cost = 600.0;
    params.downtime = 0.0;
    params.error_rate = 1.0 / 31536.0;
    params.detection_rate = 1.0 / 1051.2;

    SimConfig config;
    config.model = BoundedStorageSim{5988.0, 3};
    config.workload.total_work = 864000.0;
    config.params = params;
    config.error_law =
        DistributionSpec::exponential(DistributionSpec::Role::ErrorArrival,
                                      params.error_rate);
    config.detection_law = DistributionSpec::exponential(
        DistributionSpec::Role::DetectionLatency, *params.detection_rate);
    config.trials = trials;
    config.seed = 42;

    std::cout << "trials: " << trials << "\n";
#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (built without OpenMP)\n";
#endif

    auto t0 = std::chrono::steady_clock::now();
    const SimResult serial = simulate_reference(config);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const SimResult parallel = simulate(config);
    const double parallel_s = seconds_since(t0);

    std::cout << "serial:   " << format_double(serial_s) << " s\n";
    std::cout << "parallel: " << format_double(parallel_s) << " s ("
              << format_double(serial_s / parallel_s) << "x)\n";
    std::cout << "mean_makespan = " << format_double(parallel.mean_makespan)
              << " s, waste = " << format_double(parallel.waste_mean) << " +/- "
              << format_double(parallel.waste_stderr) << "\n";

    bool identical = serial.mean_makespan == parallel.mean_makespan &&
                     serial.makespan_stddev == parallel.makespan_stddev &&
                     serial.waste_mean == parallel.waste_mean &&
                     serial.attempts_total == parallel.attempts_total &&
                     serial.records.size() == parallel.records.size();
    if (identical) {
        for (std::size_t i = 0; i < serial.records.size(); ++i) {
            if (serial.records[i].makespan != parallel.records[i].makespan ||
                serial.records[i].attempts != parallel.records[i].attempts) {
                identical = false;
                break;
            }
        }
    }
    std::cout << "bitwise agreement: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
