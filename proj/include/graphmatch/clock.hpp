#pragma once

#include <chrono>

namespace gm {

/// Time source for a solve. WallClock measures real elapsed time;
/// DeterministicClock advances only through add_work() charges metered by
/// the solver, making trace timestamps and budget cuts a pure function of
/// the iteration history (used by the benchmark harness for reproducible
/// summaries).
class SolveClock {
public:
    virtual ~SolveClock() = default;
    virtual void restart() = 0;
    virtual void add_work(double nominal_seconds) = 0;
    virtual double elapsed_s() const = 0;
};

class WallClock final : public SolveClock {
public:
    WallClock() : t0_(std::chrono::steady_clock::now()) {}
    void restart() override { t0_ = std::chrono::steady_clock::now(); }
    void add_work(double) override {}
    double elapsed_s() const override {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

class DeterministicClock final : public SolveClock {
public:
    void restart() override { t_ = 0.0; }
    void add_work(double nominal_seconds) override {
        if (nominal_seconds > 0.0) t_ += nominal_seconds;
    }
    double elapsed_s() const override { return t_; }

private:
    double t_ = 0.0;
};

/// Nominal per-operation costs used to meter deterministic time. The
/// constants are a conservative desk-machine model (virtual time runs
/// faster than this host), fixed in code so metered runs reproduce.
namespace cost {

inline constexpr double kGemmSecondsPerN3 = 1.0e-9;
inline constexpr double kDualIterSecondsPerN2 = 4.0e-9;
inline constexpr double kMiscSecondsPerN2 = 2.0e-9;

inline double gemm(int n, int count = 1) {
    const double d = static_cast<double>(n);
    return kGemmSecondsPerN3 * d * d * d * count;
}

inline double dual_iterations(int n, long iterations) {
    const double d = static_cast<double>(n);
    return kDualIterSecondsPerN2 * d * d * static_cast<double>(iterations);
}

inline double misc(int n) {
    const double d = static_cast<double>(n);
    return kMiscSecondsPerN2 * d * d;
}

}  // namespace cost

}  // namespace gm
