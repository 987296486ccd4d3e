#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/core.hpp"
#include "qcorr/entropic.hpp"
#include "qcorr/geometric.hpp"
#include "qcorr/oracle.hpp"
#include "qcorr/parallel.hpp"
#include "qcorr/random.hpp"

namespace qcorr::verify {

// Deliberate defects for exercising the failure contract end to end.
enum class Fault { none, tg_flip_max };

inline Fault fault_from_name(const std::string& name) {
    if (name.empty() || name == "none") return Fault::none;
    if (name == "tg-flip-max") return Fault::tg_flip_max;
    throw std::invalid_argument("unknown fault '" + name + "'");
}

struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::optional<CorrelationVector> first_failure;
    double max_violation = 0.0;
};

struct Options {
    std::uint64_t seed = 0;
    std::size_t count = 10000;
    Fault fault = Fault::none;
    unsigned workers = 0;
};

namespace detail {

// Per-sample audit: verdict false = failure; violation is the margin by
// which the relation under test was missed (<= 0 when satisfied).
struct SampleCheck {
    std::string name;
    std::function<double(const CorrelationVector&)> violation;
    double tolerance;
};

inline SuiteResult run_sample_suite(const SampleCheck& check,
                                    const std::vector<CorrelationVector>& samples,
                                    unsigned workers) {
    SuiteResult r;
    r.name = check.name;
    r.checked = samples.size();
    std::vector<double> violations(samples.size());
    parallel_for(
        samples.size(), [&](std::size_t i) { violations[i] = check.violation(samples[i]); },
        workers);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        r.max_violation = std::max(r.max_violation, violations[i]);
        if (violations[i] > check.tolerance) {
            ++r.failed;
            if (!r.first_failure) r.first_failure = samples[i];
        }
    }
    return r;
}

}  // namespace detail

inline double t_g_closed_faulted(const CorrelationVector& c, Fault fault) {
    if (fault != Fault::tg_flip_max) return t_g_closed(c);
    const auto om = order_magnitudes(c);
    return 0.5 * (om.c_plus + std::min(om.c_plus, om.c_mid + om.c_minus));
}

// The full audit battery: closed-form relations on `count` sampled
// states, brute-force oracle comparisons and vertex minimality on
// count/100 states, derivative checks on a fixed grid, and both
// counterexample searches.
inline std::vector<SuiteResult> run_all(const Options& opt) {
    std::vector<SuiteResult> out;
    const auto samples = sample_physical(opt.seed, opt.count);
    const std::size_t oracle_count = std::max<std::size_t>(1, opt.count / 100);
    const std::vector<CorrelationVector> oracle_samples(samples.begin(),
                                                        samples.begin() + oracle_count);
    const Fault fault = opt.fault;

    auto tg = [fault](const CorrelationVector& c) { return t_g_closed_faulted(c, fault); };

    const detail::SampleCheck checks[] = {
        {"additivity_entropic",
         [](const CorrelationVector& c) {
             const auto e = entropic_triple(c);
             return std::fabs(e.q_e + e.c_e - e.t_e);
         },
         1e-10},
        {"superadditivity_geometric",
         [tg](const CorrelationVector& c) {
             const double t = tg(c), sum = c_g_closed(c) + q_g_closed(c);
             return std::max(t - sum, sum - 2.0 * t);
         },
         1e-10},
        {"superadditivity_equality_branch",
         [tg](const CorrelationVector& c) {
             const double diff = std::fabs(tg(c) - c_g_closed(c) - q_g_closed(c));
             const bool classical = q_g_closed(c) < 1e-10;
             return (diff <= 1e-10) == classical ? 0.0 : 1.0;
         },
         0.5},
        {"hierarchy_qg_ge_qe",
         [](const CorrelationVector& c) { return q_e_closed(c) - q_g_closed(c); }, 1e-8},
        {"hierarchy_cg_ge_ce",
         [](const CorrelationVector& c) { return c_e_closed(c) - c_g_closed(c); }, 1e-8},
        {"hierarchy_te_ge_ce_qe",
         [](const CorrelationVector& c) {
             const auto e = entropic_triple(c);
             return std::max(e.c_e, e.q_e) - e.t_e;
         },
         1e-8},
        {"hierarchy_tg_ge_cg_qg",
         [tg](const CorrelationVector& c) {
             return std::max(c_g_closed(c), q_g_closed(c)) - tg(c);
         },
         1e-8},
        {"hierarchy_cg_ge_qg",
         [](const CorrelationVector& c) { return q_g_closed(c) - c_g_closed(c); }, 1e-8},
        {"tg_dual_path",
         [tg](const CorrelationVector& c) { return std::fabs(tg(c) - t_g_direct(c)); }, 1e-10},
        {"monotone_link_ce_cg",
         [](const CorrelationVector& c) {
             return std::fabs(c_e_closed(c) - c_e_from_c_g(c_g_closed(c)));
         },
         1e-12},
    };
    for (const auto& check : checks)
        out.push_back(detail::run_sample_suite(check, samples, opt.workers));

    {
        SuiteResult r;
        r.name = "dce_dcg_derivative";
        const int grid = 1000;
        r.checked = grid;
        for (int i = 1; i <= grid; ++i) {
            const double x = static_cast<double>(i) / (grid + 1);
            const double analytic = dce_dcg(x);
            const double h = 1e-6;
            const double fd = (c_e_from_c_g(x + h) - c_e_from_c_g(x - h)) / (2.0 * h);
            const double viol = std::max(std::fabs(analytic - fd) - 1e-6,
                                         analytic > 0.0 ? 0.0 : 1.0);
            r.max_violation = std::max(r.max_violation, viol);
            if (viol > 0.0) {
                ++r.failed;
                if (!r.first_failure) r.first_failure = CorrelationVector{x, 0.0, 0.0};
            }
        }
        out.push_back(r);
    }

    out.push_back(detail::run_sample_suite(
        {"qg_oracle_simplex",
         [](const CorrelationVector& c) { return std::fabs(brute_force_qg(c, 100).gap); }, 1e-6},
        oracle_samples, opt.workers));
    out.push_back(detail::run_sample_suite(
        {"qg_oracle_spectral",
         [](const CorrelationVector& c) { return std::fabs(brute_force_qg_spectral(c, 24).gap); },
         1e-5},
        oracle_samples, opt.workers));
    out.push_back(detail::run_sample_suite(
        {"vertex_minimality",
         [](const CorrelationVector& c) { return vertex_minimality_check(c, 60) ? 0.0 : 1.0; },
         0.5},
        oracle_samples, opt.workers));

    const auto counterexample_suite = [&](const char* name, Relation rel) {
        SuiteResult r;
        r.name = name;
        r.checked = 10000;
        const auto witness = counterexample_search(rel, opt.seed, 10000);
        if (witness) {
            r.first_failure = std::nullopt;
            r.max_violation = 0.0;
        } else {
            r.failed = 1;
        }
        return r;
    };
    out.push_back(counterexample_suite("counterexample_tg_lt_te", Relation::TG_lt_TE));
    out.push_back(counterexample_suite("counterexample_qe_gt_ce", Relation::QE_gt_CE));
    return out;
}

inline bool all_passed(const std::vector<SuiteResult>& results) {
    for (const auto& r : results)
        if (r.failed != 0) return false;
    return true;
}

}  // namespace qcorr::verify
