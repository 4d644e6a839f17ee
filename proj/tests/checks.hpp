// Minimal test harness shared by the suites: counts failures, prints one
// line per check, returns a nonzero exit code when anything failed.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

namespace checks {

inline int failures = 0;
inline int passes = 0;

inline void report(bool ok, const std::string& label, const std::string& detail = "") {
    if (ok) {
        ++passes;
        std::printf("[PASS] %s\n", label.c_str());
    } else {
        ++failures;
        std::printf("[FAIL] %s%s%s\n", label.c_str(), detail.empty() ? "" : " -- ",
                    detail.c_str());
    }
}

inline void check(bool cond, const std::string& label) { report(cond, label); }

inline void check_near(double got, double want, double tol, const std::string& label) {
    const bool ok = std::isfinite(got) && std::abs(got - want) <= tol;
    char buf[160];
    std::snprintf(buf, sizeof buf, "got %.12g, want %.12g +- %.3g", got, want, tol);
    report(ok, label, ok ? "" : buf);
}

inline void check_le(double got, double bound, const std::string& label) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "got %.12g, bound %.12g", got, bound);
    report(std::isfinite(got) && got <= bound, label, got <= bound ? "" : buf);
}

inline void check_ge(double got, double bound, const std::string& label) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "got %.12g, bound %.12g", got, bound);
    report(std::isfinite(got) && got >= bound, label, got >= bound ? "" : buf);
}

inline void check_throws(const std::function<void()>& fn, const std::string& label) {
    bool threw = false;
    try {
        fn();
    } catch (const std::exception&) {
        threw = true;
    }
    report(threw, label, threw ? "" : "no exception thrown");
}

inline int finish(const char* suite) {
    std::printf("%s: %d passed, %d failed\n", suite, passes, failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace checks
