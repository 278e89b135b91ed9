#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "anyon/grid.hpp"
#include "anyon/meanfield.hpp"
#include "anyon/spectral.hpp"

namespace anyon {

/// Per-particle energy of u^{(x)N} split into the four trace terms.
struct ProductEnergyBreakdown {
    int N = 2;
    double beta = 0.0;
    double kinetic = 0.0;     // <u, h u>
    double mixed = 0.0;       // 2 int A^R[|u|^2] . Re(conj(u) p^A u)
    double three_body = 0.0;  // int |u|^2 |A^R[|u|^2]|^2
    double self_pair = 0.0;   // int int |grad w_R(x - y)|^2 rho(x) rho(y)
    double total_per_particle = 0.0;

    double weight_three() const { return beta * beta * (N - 2.0) / (N - 1.0); }
    double weight_self() const { return beta * beta / (N - 1.0); }
};

ProductEnergyBreakdown product_state_energy(const ComplexField& u, int N, const ModelParams& params);

/// Mixed term computed (first) through compute_A_R and the current, and
/// (second) as a sum over Fourier modes of sine/cosine transforms with
/// weights disc_form_factor(|k| R)/|k|.
std::pair<double, double> mixed_term_dual_route(const ComplexField& u, const ModelParams& params);

/// Grid integrals that do not depend on beta:
///   G2[(ac),(bd)] = int j_ac . (K * rho_bd),  GS[(ac),(bd)] = int rho_ac (S * rho_bd)
/// with rho_ac = conj(phi_a) phi_c, j_ac = conj(p^A phi_a) phi_c + conj(phi_a) p^A phi_c,
/// K = grad^perp w_R and S = |grad w_R|^2. Pair (a,c) has index a * m + c.
struct TwoBodyIntegrals {
    int m = 0;
    std::vector<double> lambda;
    Eigen::MatrixXcd G2;
    Eigen::MatrixXcd GS;
};

inline constexpr std::size_t default_memory_budget = std::size_t{2} << 30;

/// Bytes needed by compute_two_body_integrals for m modes on g.
std::size_t two_body_memory_estimate(const Grid2D& g, int m);

TwoBodyIntegrals compute_two_body_integrals(const SpectralBasis& basis, const ModelParams& params,
                                            std::size_t memory_budget = default_memory_budget);

/// N = 2 Hamiltonian on the symmetric space spanned by phi_a (x)_s phi_b, a <= b.
/// The two-body terms make it complex Hermitian even for a real basis.
struct TwoBodyMatrix {
    int m = 0;
    std::vector<std::pair<int, int>> labels;  // (a, b) with a <= b
    Eigen::MatrixXcd H;
    double asymmetry = 0.0;  // max |H - H^*| / max |H| before symmetrization
    bool flagged = false;    // asymmetry above 1e-6
};

/// H2 from precomputed integrals, using the first m_sub modes (all when -1).
TwoBodyMatrix assemble_H2(const TwoBodyIntegrals& ints, double beta, int m_sub = -1);
TwoBodyMatrix assemble_H2(const SpectralBasis& basis, const ModelParams& params,
                          std::size_t memory_budget = default_memory_budget);

/// Smallest eigenvalue of H2 divided by 2.
double ground_energy_2body(const TwoBodyMatrix& H2);

/// Sum of product terms c_t f[i] (x) f[j] (x) f[k] over a shared factor list.
struct ThreeBodyTrial {
    struct Term {
        cplx c;
        int f1, f2, f3;
    };
    std::vector<ComplexField> factors;
    std::vector<Term> terms;

    /// Same state with the particle labels permuted by perm (new slot i holds old slot perm[i]).
    ThreeBodyTrial permuted(const std::array<int, 3>& perm) const;
    /// Average over all six permutations.
    ThreeBodyTrial symmetrized() const;
};

/// <Psi, Phi> for product-sum states.
cplx inner_product(const ThreeBodyTrial& a, const ThreeBodyTrial& b);

struct ThreeBodyValue {
    double raw = 0.0;       // <Psi, K12 . K13 Psi> on the given trial
    double bosonic = 0.0;   // same on the fully symmetrized trial
    double norm_sq = 0.0;   // <Psi_b, Psi_b> of the symmetrized trial
    double kinetic = 0.0;   // <Psi_b, (1 + (p_1^A)^2) Psi_b>
    double ratio = 0.0;     // bosonic / kinetic
};

/// Evaluates the three-body form. Rejects trials that are not symmetric
/// under exchange of particles 2 and 3 (relative defect above 1e-10).
ThreeBodyValue three_body_form(const ThreeBodyTrial& psi, const ModelParams& params);

/// Random 2<->3 symmetric trial: up to max_terms terms c_t u_t (x) v_t (x) v_t.
ThreeBodyTrial random_three_body_trial(const Grid2D& g, std::uint64_t seed, int max_terms = 5);

struct ThreeBodyCheck {
    std::vector<ThreeBodyValue> values;
    double min_raw = 0.0;
    double min_bosonic = 0.0;
    double fitted_C = 0.0;  // max of bosonic / <(1 + (p_1^A)^2)>
    bool nonnegative = false;  // min_bosonic >= -1e-10
};

ThreeBodyCheck three_body_positivity_check(const Grid2D& g, const ModelParams& params, int samples,
                                           std::uint64_t seed);

} // namespace anyon
