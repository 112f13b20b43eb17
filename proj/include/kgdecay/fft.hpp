#pragma once

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace kgd {

// FFTW plan creation is not thread-safe; executions on distinct arrays are.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// DST-I of size n (FFTW RODFT00): y_k = 2 sum_j x_j sin(pi j k / (n+1)).
class DstPlan {
public:
    explicit DstPlan(int n) : n_(n), buf_(n) {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan_ = fftw_plan_r2r_1d(n, buf_.data(), buf_.data(), FFTW_RODFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~DstPlan() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    DstPlan(const DstPlan&) = delete;
    DstPlan& operator=(const DstPlan&) = delete;

    void execute(const double* in, double* out) const {
        fftw_execute_r2r(plan_, const_cast<double*>(in), out);
    }
    int size() const { return n_; }

private:
    int n_;
    std::vector<double> buf_;
    fftw_plan plan_;
};

// DCT-I of size n (FFTW REDFT00):
// y_j = x_0 + (-1)^j x_{n-1} + 2 sum_{k=1}^{n-2} x_k cos(pi j k / (n-1)).
class DctPlan {
public:
    explicit DctPlan(int n) : n_(n), buf_(n) {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan_ = fftw_plan_r2r_1d(n, buf_.data(), buf_.data(), FFTW_REDFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~DctPlan() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    DctPlan(const DctPlan&) = delete;
    DctPlan& operator=(const DctPlan&) = delete;

    void execute(const double* in, double* out) const {
        fftw_execute_r2r(plan_, const_cast<double*>(in), out);
    }
    int size() const { return n_; }

private:
    int n_;
    std::vector<double> buf_;
    fftw_plan plan_;
};

}  // namespace kgd
