#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/core.hpp"
#include "qcorr/geometric.hpp"
#include "qcorr/hermitian.hpp"
#include "qcorr/parallel.hpp"
#include "qcorr/symeig.hpp"

namespace qcorr::xxz {

// Periodic XXZ ring, H = -(J/2) sum_i (sx sx + sy sy + Delta sz sz),
// energy scale fixed at J = 1.
struct ChainSpec {
    int length = 8;
    double delta = 0.0;

    static constexpr double kCoupling = 1.0;
    static constexpr int kMaxLength = 16;

    ChainSpec() = default;
    ChainSpec(int L, double d) : length(L), delta(d) {
        if (L < 4 || L > kMaxLength || L % 2 != 0)
            throw std::invalid_argument(
                "ChainSpec: length must be even and within [4, " +
                std::to_string(kMaxLength) + "]");
    }
};

struct GroundStateObservables {
    double energy_density = 0.0;  // per site, units of J
    double g_xx = 0.0;
    double g_yy = 0.0;
    double g_zz = 0.0;
    double g_z = 0.0;  // site-averaged <sigma_z>, must vanish
    int degeneracy = 0;
    std::vector<int> sector_magnetizations;  // total sigma_z of each multiplet member
};

// Basis of the fixed-magnetization sector: bit i set = spin up at site i.
struct SectorBasis {
    int length = 0;
    int n_up = 0;
    std::vector<std::uint32_t> states;  // ascending
    std::vector<std::int32_t> index;    // state -> position, -1 outside sector

    static SectorBasis make(int length, int n_up) {
        SectorBasis b;
        b.length = length;
        b.n_up = n_up;
        b.index.assign(std::size_t{1} << length, -1);
        for (std::uint32_t s = 0; s < (std::uint32_t{1} << length); ++s)
            if (std::popcount(s) == n_up) {
                b.index[s] = static_cast<std::int32_t>(b.states.size());
                b.states.push_back(s);
            }
        return b;
    }
};

// Sparse sector Hamiltonian: diagonal = Ising part, -Delta/2 per aligned
// bond and +Delta/2 per anti-aligned bond; off-diagonal = -J for every
// nearest-neighbor flip-flop.
inline SparseSym build_sector_hamiltonian(const ChainSpec& spec, int n_up) {
    if (n_up < 0 || n_up > spec.length)
        throw std::invalid_argument("build_sector_hamiltonian: n_up out of range");
    const SectorBasis basis = SectorBasis::make(spec.length, n_up);
    const int L = spec.length;
    const double J = ChainSpec::kCoupling;

    SparseSym h;
    h.dim = static_cast<int>(basis.states.size());
    h.diag.resize(h.dim);
    h.row_ptr.assign(h.dim + 1, 0);

    std::vector<std::pair<int, int>> offdiag;  // (row, col); value always -J
    for (int r = 0; r < h.dim; ++r) {
        const std::uint32_t s = basis.states[r];
        double diag = 0.0;
        for (int i = 0; i < L; ++i) {
            const int j = (i + 1) % L;
            const bool bi = (s >> i) & 1u;
            const bool bj = (s >> j) & 1u;
            if (bi == bj) {
                diag -= 0.5 * J * spec.delta;
            } else {
                diag += 0.5 * J * spec.delta;
                const std::uint32_t flipped = s ^ ((1u << i) | (1u << j));
                offdiag.emplace_back(r, basis.index[flipped]);
            }
        }
        h.diag[r] = diag;
        h.row_ptr[r + 1] = offdiag.size();
    }
    h.cols.reserve(offdiag.size());
    h.vals.assign(offdiag.size(), -J);
    for (const auto& [r, c] : offdiag) h.cols.push_back(c);
    return h;
}

namespace detail {

// Real 4x4 two-site block in the basis |uu>, |ud>, |du>, |dd>.
using Block4 = std::array<double, 16>;

// Accumulate the bond-resolved two-site RDM of one sector eigenvector.
inline void accumulate_bond_rdms(const SectorBasis& basis, const std::vector<double>& psi,
                                 double weight, bool mirrored, std::vector<Block4>& bonds) {
    const int L = basis.length;
    for (int b = 0; b < L; ++b) {
        const int i = b;
        const int j = (b + 1) % L;
        const std::uint32_t mask = (1u << i) | (1u << j);
        Block4& rho = bonds[b];
        for (std::size_t t = 0; t < basis.states.size(); ++t) {
            const std::uint32_t s = basis.states[t];
            const int bi = (s >> i) & 1, bj = (s >> j) & 1;
            const int row = 2 * (1 - bi) + (1 - bj);
            const int total = bi + bj;
            for (int bi2 = 0; bi2 <= 1; ++bi2)
                for (int bj2 = 0; bj2 <= 1; ++bj2) {
                    if (bi2 + bj2 != total) continue;
                    const std::uint32_t s2 =
                        (s & ~mask) | (bi2 ? (1u << i) : 0u) | (bj2 ? (1u << j) : 0u);
                    const std::int32_t t2 = basis.index[s2];
                    if (t2 < 0) continue;
                    int col = 2 * (1 - bi2) + (1 - bj2);
                    int r = row;
                    if (mirrored) {  // global spin flip: |uu><->|dd>, |ud><->|du>
                        r = 3 - r;
                        col = 3 - col;
                    }
                    rho[4 * r + col] += weight * psi[t] * psi[t2];
                }
        }
    }
}

struct BondObservables {
    double g_xx = 0.0, g_yy = 0.0, g_zz = 0.0, g_z = 0.0;
};

inline BondObservables block_observables(const Block4& r) {
    BondObservables o;
    o.g_zz = r[0] + r[15] - r[5] - r[10];
    o.g_xx = r[3] + r[12] + r[6] + r[9];
    o.g_yy = -r[3] - r[12] + r[6] + r[9];
    o.g_z = r[0] - r[15];  // site-averaged over the two factors
    return o;
}

}  // namespace detail

struct GroundSpaceDetail {
    GroundStateObservables obs;
    double ground_energy = 0.0;
    Hermitian4 two_site_rdm;                          // bond- and multiplet-averaged
    std::vector<detail::BondObservables> per_bond;    // translation-invariance audit
};

// Solver tuning: sectors at or below the cutoff go through the dense
// long-double path, larger ones through deflated Lanczos.
struct SolverLimits {
    int dense_cutoff = 96;
    int max_lanczos_iter = 500;
};

// Scan magnetization sectors n_up >= L/2 (the Sz -> -Sz mirror supplies
// the rest), collect every sector eigenvector within 1e-10 of the global
// minimum, and average the bond-resolved two-site RDM over that multiplet.
inline GroundSpaceDetail ground_space_detail(const ChainSpec& spec,
                                             const SolverLimits& limits = {}) {
    const int L = spec.length;
    constexpr double kSectorWindow = 1e-8;    // within-sector deflation window
    constexpr double kMultipletWindow = 1e-10;
    constexpr std::uint64_t kSolverSeed = 0x5eed;

    struct SectorResult {
        int n_up;
        SectorBasis basis;
        LowestEigenpairs pairs;
    };
    std::vector<SectorResult> sectors;
    for (int n_up = L / 2; n_up <= L; ++n_up) {
        SectorResult r;
        r.n_up = n_up;
        r.basis = SectorBasis::make(L, n_up);
        const SparseSym h = build_sector_hamiltonian(spec, n_up);
        try {
            r.pairs = lowest_eigenpairs(h, kSectorWindow, kSolverSeed + n_up,
                                        limits.dense_cutoff, limits.max_lanczos_iter);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("sector n_up=" + std::to_string(n_up) + " (L=" +
                                   std::to_string(L) + "): " + e.what());
        }
        sectors.push_back(std::move(r));
    }

    double e0 = sectors.front().pairs.values.front();
    for (const auto& s : sectors) e0 = std::min(e0, s.pairs.values.front());

    std::vector<detail::Block4> bonds(L, detail::Block4{});
    GroundSpaceDetail out;
    out.ground_energy = e0;
    double total_weight = 0.0;
    for (const auto& s : sectors) {
        for (std::size_t k = 0; k < s.pairs.values.size(); ++k) {
            if (s.pairs.values[k] > e0 + kMultipletWindow) continue;
            const int mag = 2 * s.n_up - L;
            detail::accumulate_bond_rdms(s.basis, s.pairs.vectors[k], 1.0, false, bonds);
            out.obs.sector_magnetizations.push_back(mag);
            total_weight += 1.0;
            ++out.obs.degeneracy;
            if (s.n_up != L / 2) {  // mirror partner at -mag, same energy
                detail::accumulate_bond_rdms(s.basis, s.pairs.vectors[k], 1.0, true, bonds);
                out.obs.sector_magnetizations.push_back(-mag);
                total_weight += 1.0;
                ++out.obs.degeneracy;
            }
        }
    }

    detail::Block4 averaged{};
    out.per_bond.resize(L);
    for (int b = 0; b < L; ++b) {
        detail::Block4 blk = bonds[b];
        for (double& x : blk) x /= total_weight;
        out.per_bond[b] = detail::block_observables(blk);
        for (int k = 0; k < 16; ++k) averaged[k] += blk[k] / L;
    }
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out.two_site_rdm(r, c) = averaged[4 * r + c];

    const auto o = detail::block_observables(averaged);
    out.obs.g_xx = o.g_xx;
    out.obs.g_yy = o.g_yy;
    out.obs.g_zz = o.g_zz;
    out.obs.g_z = o.g_z;
    out.obs.energy_density = e0 / L;
    return out;
}

inline GroundStateObservables ground_space(const ChainSpec& spec,
                                           const SolverLimits& limits = {}) {
    return ground_space_detail(spec, limits).obs;
}

// c1 = c2 = (G_xx + G_yy)/2, c3 = G_zz. A result outside the physical
// tetrahedron by more than solver tolerance is a hard error; boundary
// grazes from roundoff are pulled back onto the face.
inline CorrelationVector bell_coordinates(const GroundStateObservables& obs) {
    CorrelationVector c;
    c.c1 = 0.5 * (obs.g_xx + obs.g_yy);
    c.c2 = c.c1;
    c.c3 = obs.g_zz;
    double lam_min = 1.0;
    for (double lam : spectrum_bell(c)) lam_min = std::min(lam_min, lam);
    if (lam_min < -1e-9)
        throw std::logic_error("bell_coordinates: unphysical state (solver defect), lambda_min = " +
                               std::to_string(lam_min));
    if (lam_min < 0.0) {
        const double shrink = 1.0 / (1.0 - 4.0 * lam_min);
        c.c1 *= shrink;
        c.c2 = c.c1;
        c.c3 *= shrink;
    }
    return c;
}

// Central-difference Hellmann-Feynman residuals:
//   r1 = |c1 - (Delta de/dDelta - e)|, r2 = |c3 + 2 de/dDelta|.
struct HellmannFeynmanResiduals {
    double residual_c1 = 0.0;
    double residual_c3 = 0.0;
};

inline HellmannFeynmanResiduals hellmann_feynman_check(const ChainSpec& spec, double h) {
    if (h < 1e-5 || h > 1e-3)
        throw std::invalid_argument("hellmann_feynman_check: h must be in [1e-5, 1e-3]");
    if (std::fabs(spec.delta - 1.0) < 2.0 * h)
        throw std::invalid_argument(
            "hellmann_feynman_check: Delta is within 2h of the level crossing at Delta = 1");

    const GroundStateObservables obs = ground_space(spec);
    const CorrelationVector c = bell_coordinates(obs);
    const double e = obs.energy_density;
    const double ep = ground_space(ChainSpec(spec.length, spec.delta + h)).energy_density;
    const double em = ground_space(ChainSpec(spec.length, spec.delta - h)).energy_density;
    const double deriv = (ep - em) / (2.0 * h);

    HellmannFeynmanResiduals r;
    r.residual_c1 = std::fabs(c.c1 - (spec.delta * deriv - e));
    r.residual_c3 = std::fabs(c.c3 + 2.0 * deriv);
    return r;
}

struct SweepRow {
    double delta = 0.0;
    int length = 0;
    bool ok = false;
    std::string status;  // "ok" or the failure message
    GroundStateObservables obs;
    CorrelationVector c;
    CorrelationReport report;
};

// Uniform Delta grid, endpoints included; rows are independent and solver
// failures are recorded in-row rather than aborting the sweep.
inline std::vector<SweepRow> sweep_delta(int length, double delta_min, double delta_max,
                                         int steps, unsigned workers = 0,
                                         const SolverLimits& limits = {}) {
    if (steps < 2) throw std::invalid_argument("sweep_delta: steps must be >= 2");
    if (delta_max < delta_min) throw std::invalid_argument("sweep_delta: empty range");
    std::vector<SweepRow> rows(steps);
    parallel_for(
        static_cast<std::size_t>(steps),
        [&](std::size_t i) {
            SweepRow& row = rows[i];
            row.delta = delta_min + (delta_max - delta_min) * static_cast<double>(i) / (steps - 1);
            row.length = length;
            try {
                row.obs = ground_space(ChainSpec(length, row.delta), limits);
                row.c = bell_coordinates(row.obs);
                row.report = analyze(row.c);
                row.ok = true;
                row.status = "ok";
            } catch (const std::exception& e) {
                row.ok = false;
                row.status = e.what();
            }
        },
        workers);
    return rows;
}

enum class TransitionType { first_order, crossing };

struct Transition {
    double delta = 0.0;
    TransitionType type = TransitionType::first_order;
};

// First-order signature: adjacent-row jump in (c1, c3) above the
// threshold (consecutive jumping pairs merged into one flag). Crossing
// signature: sign change of |G_xx| - |G_zz|, refined by bisection of
// fresh ground-state solves to 1e-6 in Delta.
inline std::vector<Transition> detect_transitions(const std::vector<SweepRow>& rows,
                                                  double jump_threshold = 0.1,
                                                  int kink_window = 2) {
    if (rows.size() < 5) throw std::invalid_argument("detect_transitions: need at least 5 rows");
    const std::size_t n = rows.size();

    auto jump = [&](std::size_t i) {
        if (!rows[i].ok || !rows[i + 1].ok) return 0.0;
        return std::hypot(rows[i + 1].c.c1 - rows[i].c.c1, rows[i + 1].c.c3 - rows[i].c.c3);
    };

    std::vector<char> jumped(n - 1, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) jumped[i] = jump(i) > jump_threshold;

    std::vector<Transition> out;
    for (std::size_t i = 0; i + 1 < n;) {
        if (!jumped[i]) {
            ++i;
            continue;
        }
        std::size_t last = i;
        while (last + 1 < n - 1 && jumped[last + 1]) ++last;
        out.push_back({0.5 * (rows[i].delta + rows[last + 1].delta), TransitionType::first_order});
        i = last + 1;
    }

    auto gap = [](const SweepRow& r) { return std::fabs(r.obs.g_xx) - std::fabs(r.obs.g_zz); };
    auto sign_stable = [&](std::size_t i, int dir, double ref) {
        for (int w = 1; w < kink_window; ++w) {
            const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) + dir * w;
            if (k < 0 || k >= static_cast<std::ptrdiff_t>(n)) break;
            if (!rows[k].ok) return false;
            if (gap(rows[k]) * ref < 0.0) return false;
        }
        return true;
    };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (jumped[i] || !rows[i].ok || !rows[i + 1].ok) continue;
        const double ga = gap(rows[i]);
        const double gb = gap(rows[i + 1]);
        if (ga * gb > 0.0) continue;
        if (ga == 0.0 && gb == 0.0) continue;
        if (!sign_stable(i, -1, ga) || !sign_stable(i + 1, +1, gb)) continue;

        double lo = rows[i].delta, hi = rows[i + 1].delta;
        double glo = ga;
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            const auto obs = ground_space(ChainSpec(rows[i].length, mid));
            const double gm = std::fabs(obs.g_xx) - std::fabs(obs.g_zz);
            if (gm == 0.0) {
                lo = hi = mid;
                break;
            }
            if (glo * gm < 0.0) {
                hi = mid;
            } else {
                lo = mid;
                glo = gm;
            }
        }
        out.push_back({0.5 * (lo + hi), TransitionType::crossing});
    }
    return out;
}

}  // namespace qcorr::xxz
