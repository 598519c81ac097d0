#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thermo/algebra.hpp"
#include "thermo/budget.hpp"
#include "thermo/spin_chain.hpp"

namespace thermo {

using Word = std::vector<int>;

/// Index of a word over an s-letter alphabet, first letter most significant.
std::size_t word_index(std::span<const int> word, int alphabet);
Word word_from_index(std::size_t index, int alphabet, int length);

bool is_irreducible(const Eigen::MatrixXi& transitions);

/// Period of an irreducible 0/1 matrix: gcd of the cycle lengths through a
/// vertex. Throws InvariantError on reducible input.
int cyclicity_index(const Eigen::MatrixXi& transitions);

/// Subshift of finite type with a locally constant potential on words of
/// length `range`.
class SftModel {
public:
    /// `potential` holds alphabet^range values indexed by word_index; empty
    /// means zero. Entries on forbidden words are ignored.
    SftModel(Eigen::MatrixXi transitions, std::vector<double> potential = {}, int range = 2);

    int alphabet() const noexcept { return static_cast<int>(transitions_.rows()); }
    int range() const noexcept { return range_; }
    const Eigen::MatrixXi& transitions() const noexcept { return transitions_; }
    const std::vector<double>& potential() const noexcept { return potential_; }
    bool irreducible() const noexcept { return irreducible_; }

    /// Every adjacent pair of the word is an allowed transition.
    bool allowed(std::span<const int> word) const;
    /// Potential of a word of length `range`.
    double potential_at(std::span<const int> word) const;
    /// max |phi| over allowed words.
    double potential_norm() const;

    /// Words over the base alphabet that the letters of this model stand for
    /// (single letters unless produced by higher_block_recode).
    const std::vector<Word>& labels() const noexcept { return labels_; }

    SftModel with_potential(std::vector<double> potential) const;

    /// Throws InvariantError unless the transition matrix is irreducible.
    void require_irreducible() const;

private:
    friend SftModel higher_block_recode(const SftModel& sft, int block_length);

    Eigen::MatrixXi transitions_;
    std::vector<double> potential_;
    int range_;
    bool irreducible_;
    std::vector<Word> labels_;
};

/// L_ij = A_ij e^{-beta phi(ij)}. Requires range 2.
RMatrix transfer_matrix(const SftModel& sft, double beta);

/// Range-2 recoding over the alphabet of allowed (r-1)-blocks; the potential
/// of an r-word is read off its leading `sft.range()` letters.
SftModel higher_block_recode(const SftModel& sft, int r);

struct RpfData {
    double lambda = 0.0;
    RVector right;  // L v = lambda v, sum v = 1
    RVector left;   // u L = lambda u, <u, v> = 1
    int iterations = 0;
};

/// Perron data of an irreducible nonnegative matrix by power iteration on the
/// average of successive iterates (which tames periodic matrices).
RpfData rpf_eigendata(const RMatrix& weights);

/// log of the spectral radius of the transfer matrix; with the potential
/// entering as e^{-beta phi} this is the quantum pressure of the diagonal
/// chain, i.e. the classical pressure of -beta phi.
double classical_pressure(const SftModel& sft, double beta);

/// Stationary Markov chain on allowed blocks of length `order`.
struct MarkovMeasure {
    int order = 1;
    std::vector<Word> states;
    RMatrix kernel;
    RVector stationary;

    /// Throws InvariantError when rows are not stochastic or pi P != pi (1e-12).
    void validate() const;
};

/// P_ij = L_ij v_j / (lambda v_i), pi_i = u_i v_i. For range r > 2 the chain
/// lives on (r-1)-blocks.
MarkovMeasure gibbs_markov_measure(const SftModel& sft, double beta);

double markov_entropy(const MarkovMeasure& mu);
/// sum_ij pi_i P_ij phi(word_i + last letter of word_j).
double markov_energy(const MarkovMeasure& mu, const SftModel& sft);

struct VariationalOptions {
    int restarts = 8;
    std::uint64_t seed = 0;
    int max_iterations = 20000;
    double gap_tol = 1e-6;
    int stall_window = 50;
    double stall_tol = 1e-12;
    bool parallel = true;
};

struct VariationalResult {
    MarkovMeasure measure;
    double value = 0.0;     // h(mu) - beta e(mu)
    double pressure = 0.0;  // classical_pressure for reference
    bool converged = false;
    bool within_gap = false;
    int iterations = 0;
};

/// Maximizes h(mu) - beta e(mu) over order-m Markov measures (m >= range-1)
/// by preconditioned gradient ascent on the transition logits.
VariationalResult variational_optimize(const SftModel& sft, double beta, int order,
                                       const VariationalOptions& opts = {});

/// Value and exact logit gradient of h - beta e for a range-2 model; forbidden
/// entries of `logits` are ignored and get zero gradient.
struct ObjectiveEval {
    double value = 0.0;
    RMatrix gradient;
    RMatrix kernel;
    RVector stationary;
};
ObjectiveEval variational_objective(const SftModel& sft, double beta, const RMatrix& logits);

/// Stationary vector of a stochastic matrix by lazy power iteration.
RVector stationary_distribution(const RMatrix& kernel, const RVector* warm_start = nullptr);

/// Diagonal spin chain realizing the subshift: h(w) = phi(w) on allowed
/// windows and `penalty` on forbidden ones.
SpinChainModel diagonal_chain_model(const SftModel& sft, double beta, double penalty, Boundary boundary);

/// Energies S_n phi(w) of all words of length n (+inf if forbidden).
std::vector<double> classical_word_energies(const SftModel& sft, int n, Boundary boundary);

struct BridgeResult {
    double quantum_p = 0.0;
    double classical_p = 0.0;
    double pressure_gap = 0.0;
    double gibbs_tv = 0.0;  // total variation between diag(rho_n) and the word distribution
    double penalty = 0.0;
};

/// Compares the dense quantum pressure of the diagonal chain with the word
/// sum (1/n) log sum_w e^{-beta S_n phi(w)}.
BridgeResult diagonal_bridge(const SftModel& sft, double beta, int n, Boundary boundary = Boundary::open,
                             const Budget& budget = {});

}  // namespace thermo
