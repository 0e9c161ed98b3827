#pragma once

#include <cstdint>
#include <random>

namespace cupcast {

// Deterministic random stream. Each simulation run gets its own stream derived
// from (master seed, run index), so results do not depend on how runs are
// distributed over worker threads.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    static RngStream for_run(std::uint64_t master_seed, std::uint64_t run_index);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_double();

  private:
    std::mt19937_64 gen_;
};

}  // namespace cupcast
