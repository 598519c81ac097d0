#include "thermo/sft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "thermo/errors.hpp"
#include "thermo/gibbs.hpp"
#include "thermo/kernels.hpp"

namespace thermo {

std::size_t word_index(std::span<const int> word, int alphabet) {
    std::size_t idx = 0;
    for (int letter : word) idx = idx * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(letter);
    return idx;
}

Word word_from_index(std::size_t index, int alphabet, int length) {
    Word w(static_cast<std::size_t>(length));
    for (int j = length - 1; j >= 0; --j) {
        w[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::size_t>(alphabet));
        index /= static_cast<std::size_t>(alphabet);
    }
    return w;
}

bool is_irreducible(const Eigen::MatrixXi& a) {
    const auto s = a.rows();
    // Transitive closure (Warshall).
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> reach = (a.array() != 0);
    for (Eigen::Index k = 0; k < s; ++k) {
        for (Eigen::Index i = 0; i < s; ++i) {
            if (!reach(i, k)) continue;
            for (Eigen::Index j = 0; j < s; ++j) reach(i, j) = reach(i, j) || reach(k, j);
        }
    }
    return reach.all();
}

int cyclicity_index(const Eigen::MatrixXi& a) {
    if (!is_irreducible(a)) throw InvariantError("irreducible", "cyclicity index needs an irreducible matrix");
    const auto s = a.rows();
    std::vector<int> level(static_cast<std::size_t>(s), -1);
    std::queue<Eigen::Index> todo;
    level[0] = 0;
    todo.push(0);
    while (!todo.empty()) {
        const auto u = todo.front();
        todo.pop();
        for (Eigen::Index v = 0; v < s; ++v) {
            if (a(u, v) && level[static_cast<std::size_t>(v)] < 0) {
                level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                todo.push(v);
            }
        }
    }
    int g = 0;
    for (Eigen::Index u = 0; u < s; ++u) {
        for (Eigen::Index v = 0; v < s; ++v) {
            if (a(u, v)) g = std::gcd(g, std::abs(level[static_cast<std::size_t>(u)] + 1 - level[static_cast<std::size_t>(v)]));
        }
    }
    return g;
}

SftModel::SftModel(Eigen::MatrixXi transitions, std::vector<double> potential, int range)
    : transitions_(std::move(transitions)), potential_(std::move(potential)), range_(range), irreducible_(false) {
    const auto s = transitions_.rows();
    if (s < 2 || transitions_.cols() != s) throw InvariantError("alphabet", "transition matrix must be square with s >= 2");
    if (((transitions_.array() != 0) && (transitions_.array() != 1)).any()) {
        throw InvariantError("zero_one", "transition matrix entries must be 0 or 1");
    }
    for (Eigen::Index i = 0; i < s; ++i) {
        if (transitions_.row(i).sum() == 0) throw InvariantError("no_zero_row", "row " + std::to_string(i) + " is zero");
        if (transitions_.col(i).sum() == 0) throw InvariantError("no_zero_column", "column " + std::to_string(i) + " is zero");
    }
    if (range_ < 2) throw InvariantError("range", "potential range must be >= 2");
    const std::size_t words = checked_pow(static_cast<std::size_t>(s), range_, std::size_t{1} << 24);
    if (potential_.empty()) potential_.assign(words, 0.0);
    if (potential_.size() != words) {
        throw DimensionMismatchError("potential has " + std::to_string(potential_.size()) + " entries, expected " +
                                     std::to_string(words));
    }
    for (double v : potential_) {
        if (!std::isfinite(v)) throw InvariantError("finite", "potential values must be finite");
    }
    irreducible_ = is_irreducible(transitions_);
    for (int i = 0; i < s; ++i) labels_.push_back({i});
}

bool SftModel::allowed(std::span<const int> word) const {
    for (std::size_t j = 0; j + 1 < word.size(); ++j) {
        if (!transitions_(word[j], word[j + 1])) return false;
    }
    return true;
}

double SftModel::potential_at(std::span<const int> word) const {
    return potential_[word_index(word.subspan(0, static_cast<std::size_t>(range_)), alphabet())];
}

double SftModel::potential_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < potential_.size(); ++i) {
        if (allowed(word_from_index(i, alphabet(), range_))) best = std::max(best, std::abs(potential_[i]));
    }
    return best;
}

SftModel SftModel::with_potential(std::vector<double> potential) const {
    SftModel out(transitions_, std::move(potential), range_);
    out.labels_ = labels_;
    return out;
}

void SftModel::require_irreducible() const {
    if (!irreducible_) {
        throw InvariantError("irreducible",
                             "transition matrix is reducible; its equilibrium states form a simplex and are not resolved");
    }
}

RMatrix transfer_matrix(const SftModel& sft, double beta) {
    if (sft.range() != 2) throw InvariantError("range", "transfer_matrix needs range 2; recode first");
    const int s = sft.alphabet();
    RMatrix l = RMatrix::Zero(s, s);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            if (sft.transitions()(i, j)) {
                const int w[2] = {i, j};
                l(i, j) = std::exp(-beta * sft.potential_at(w));
            }
        }
    }
    return l;
}

SftModel higher_block_recode(const SftModel& sft, int r) {
    if (r < 3 || r < sft.range()) throw InvariantError("block_length", "recoding needs r >= max(3, range)");
    const int s = sft.alphabet();
    // New letters: allowed words of length r - 1.
    std::vector<Word> blocks;
    const std::size_t count = checked_pow(static_cast<std::size_t>(s), r - 1, std::size_t{1} << 12);
    for (std::size_t i = 0; i < count; ++i) {
        Word w = word_from_index(i, s, r - 1);
        if (sft.allowed(w)) blocks.push_back(std::move(w));
    }
    const auto nb = static_cast<Eigen::Index>(blocks.size());
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(nb, nb);
    std::vector<double> phi(static_cast<std::size_t>(nb * nb), 0.0);
    for (Eigen::Index i = 0; i < nb; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) {
            const Word& u = blocks[static_cast<std::size_t>(i)];
            const Word& v = blocks[static_cast<std::size_t>(j)];
            if (!std::equal(u.begin() + 1, u.end(), v.begin())) continue;
            Word full = u;
            full.push_back(v.back());
            if (!sft.allowed(full)) continue;
            a(i, j) = 1;
            phi[static_cast<std::size_t>(i * nb + j)] = sft.potential_at(full);
        }
    }
    SftModel out(std::move(a), std::move(phi), 2);
    out.labels_ = std::move(blocks);
    return out;
}

namespace {

constexpr double kPowerTol = 1e-14;
constexpr int kPowerMaxIter = 100000;

// Positive eigenvector of a nonnegative irreducible matrix, normalized to
// unit sum, via x <- (x + M x / lambda) / 2.
RVector perron_vector(const RMatrix& m, int& iterations) {
    const auto s = m.rows();
    RVector x = RVector::Constant(s, 1.0 / static_cast<double>(s));
    iterations = 0;
    for (int it = 0; it < kPowerMaxIter; ++it) {
        const RVector y = m * x;
        const double lambda = y.sum() / x.sum();
        RVector next = 0.5 * (x + y / lambda);
        next /= next.sum();
        const double change = (next - x).cwiseAbs().maxCoeff() / next.cwiseAbs().maxCoeff();
        x = std::move(next);
        iterations = it + 1;
        if (change < kPowerTol) break;
    }
    return x;
}

}  // namespace

RpfData rpf_eigendata(const RMatrix& weights) {
    if (weights.rows() != weights.cols() || weights.rows() == 0) throw DimensionMismatchError("transfer matrix must be square");
    if ((weights.array() < 0.0).any()) throw InvariantError("nonnegative", "transfer matrix has negative entries");
    const Eigen::MatrixXi support = (weights.array() > 0.0).cast<int>();
    if (!is_irreducible(support)) {
        throw InvariantError("irreducible",
                             "transfer matrix is reducible; its equilibrium states form a simplex and are not resolved");
    }
    RpfData out;
    int it_right = 0, it_left = 0;
    out.right = perron_vector(weights, it_right);
    out.left = perron_vector(weights.transpose(), it_left);
    out.iterations = std::max(it_right, it_left);
    out.lambda = (weights * out.right).sum() / out.right.sum();
    out.left /= out.left.dot(out.right);
    return out;
}

double classical_pressure(const SftModel& sft, double beta) {
    sft.require_irreducible();
    if (sft.range() > 2) return classical_pressure(higher_block_recode(sft, sft.range()), beta);
    return std::log(rpf_eigendata(transfer_matrix(sft, beta)).lambda);
}

void MarkovMeasure::validate() const {
    const auto s = kernel.rows();
    if (kernel.cols() != s || stationary.size() != s || static_cast<Eigen::Index>(states.size()) != s) {
        throw DimensionMismatchError("Markov measure dimensions disagree");
    }
    if ((kernel.array() < 0.0).any() || (stationary.array() < 0.0).any()) {
        throw InvariantError("nonnegative", "Markov kernel and stationary vector must be nonnegative");
    }
    if (((kernel.rowwise().sum().array() - 1.0).abs() > 1e-12).any()) {
        throw InvariantError("stochastic", "kernel rows do not sum to 1");
    }
    if (std::abs(stationary.sum() - 1.0) > 1e-12) throw InvariantError("stationary", "pi does not sum to 1");
    if (((stationary.transpose() * kernel - stationary.transpose()).cwiseAbs().array() > 1e-12).any()) {
        throw InvariantError("stationary", "pi P != pi");
    }
}

MarkovMeasure gibbs_markov_measure(const SftModel& sft, double beta) {
    sft.require_irreducible();
    if (sft.range() > 2) {
        MarkovMeasure mu = gibbs_markov_measure(higher_block_recode(sft, sft.range()), beta);
        mu.order = sft.range() - 1;
        return mu;
    }
    const RMatrix l = transfer_matrix(sft, beta);
    const RpfData rpf = rpf_eigendata(l);
    const auto s = l.rows();
    MarkovMeasure mu;
    mu.order = static_cast<int>(sft.labels().front().size());
    mu.states = sft.labels();
    mu.kernel.resize(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) mu.kernel(i, j) = l(i, j) * rpf.right[j] / (rpf.lambda * rpf.right[i]);
    }
    mu.stationary = rpf.left.cwiseProduct(rpf.right) / rpf.left.dot(rpf.right);
    mu.validate();
    return mu;
}

double markov_entropy(const MarkovMeasure& mu) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < mu.kernel.rows(); ++i) {
        for (Eigen::Index j = 0; j < mu.kernel.cols(); ++j) {
            const double p = mu.kernel(i, j);
            if (p > 0.0) h -= mu.stationary[i] * p * std::log(p);
        }
    }
    return h;
}

double markov_energy(const MarkovMeasure& mu, const SftModel& sft) {
    if (mu.order + 1 < sft.range()) throw InvariantError("order", "energy needs order >= range - 1");
    double e = 0.0;
    for (Eigen::Index i = 0; i < mu.kernel.rows(); ++i) {
        for (Eigen::Index j = 0; j < mu.kernel.cols(); ++j) {
            const double p = mu.kernel(i, j);
            if (p <= 0.0) continue;
            Word w = mu.states[static_cast<std::size_t>(i)];
            w.push_back(mu.states[static_cast<std::size_t>(j)].back());
            e += mu.stationary[i] * p * sft.potential_at(w);
        }
    }
    return e;
}

RVector stationary_distribution(const RMatrix& kernel, const RVector* warm_start) {
    const auto s = kernel.rows();
    RVector pi = warm_start && warm_start->size() == s ? *warm_start : RVector::Constant(s, 1.0 / static_cast<double>(s));
    for (int it = 0; it < kPowerMaxIter; ++it) {
        RVector next = 0.5 * (pi + kernel.transpose() * pi);
        next /= next.sum();
        const double change = (next - pi).cwiseAbs().maxCoeff();
        pi = std::move(next);
        if (change < 1e-16) break;
    }
    return pi;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

RMatrix softmax_rows(const RMatrix& logits, const Eigen::MatrixXi& allowed) {
    RMatrix p = RMatrix::Zero(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        double top = kNegInf;
        for (Eigen::Index j = 0; j < logits.cols(); ++j) {
            if (allowed(i, j)) top = std::max(top, logits(i, j));
        }
        double z = 0.0;
        for (Eigen::Index j = 0; j < logits.cols(); ++j) {
            if (allowed(i, j)) z += (p(i, j) = std::exp(logits(i, j) - top));
        }
        p.row(i) /= z;
    }
    return p;
}

ObjectiveEval evaluate(const SftModel& sft, double beta, const RMatrix& logits, const RVector* warm) {
    const auto& allowed = sft.transitions();
    const auto s = allowed.rows();
    ObjectiveEval ev;
    ev.kernel = softmax_rows(logits, allowed);
    ev.stationary = stationary_distribution(ev.kernel, warm);
    // g_ij = -log P_ij - beta phi_ij, f_i = sum_j P_ij g_ij.
    RMatrix g = RMatrix::Zero(s, s);
    RVector f = RVector::Zero(s);
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) {
            if (!allowed(i, j)) continue;
            const int w[2] = {static_cast<int>(i), static_cast<int>(j)};
            const double p = ev.kernel(i, j);
            g(i, j) = (p > 0.0 ? -std::log(p) : 0.0) - beta * sft.potential_at(w);
            f[i] += p * g(i, j);
        }
    }
    ev.value = ev.stationary.dot(f);
    // Adjoint of the stationarity constraint: (I - P + 1 pi^T) V = f - F 1.
    const RMatrix fundamental = RMatrix::Identity(s, s) - ev.kernel + RVector::Ones(s) * ev.stationary.transpose();
    const RVector v = fundamental.partialPivLu().solve((f.array() - ev.value).matrix());
    ev.gradient = RMatrix::Zero(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        double mean = 0.0;
        for (Eigen::Index j = 0; j < s; ++j) {
            if (allowed(i, j)) mean += ev.kernel(i, j) * (g(i, j) + v[j]);
        }
        for (Eigen::Index j = 0; j < s; ++j) {
            if (allowed(i, j)) ev.gradient(i, j) = ev.stationary[i] * ev.kernel(i, j) * (g(i, j) + v[j] - mean);
        }
    }
    return ev;
}

struct RestartOutcome {
    ObjectiveEval best;
    bool converged = false;
    int iterations = 0;
};

RestartOutcome run_restart(const SftModel& work, double beta, const VariationalOptions& opts, std::uint64_t seed) {
    const auto& allowed = work.transitions();
    const auto s = allowed.rows();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RMatrix logits = RMatrix::Zero(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) {
            if (allowed(i, j)) logits(i, j) = normal(rng);
        }
    }
    RestartOutcome out;
    ObjectiveEval cur = evaluate(work, beta, logits, nullptr);
    std::vector<double> history{cur.value};
    double step = 1.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        out.iterations = it + 1;
        // Natural-gradient direction: divide by the Fisher diagonal pi_i P_ij.
        RMatrix dir = RMatrix::Zero(s, s);
        for (Eigen::Index i = 0; i < s; ++i) {
            for (Eigen::Index j = 0; j < s; ++j) {
                const double w = cur.stationary[i] * cur.kernel(i, j);
                if (allowed(i, j) && w > 0.0) dir(i, j) = cur.gradient(i, j) / w;
            }
        }
        ObjectiveEval next;
        bool accepted = false;
        while (step >= 1e-10) {
            next = evaluate(work, beta, logits + step * dir, &cur.stationary);
            if (next.value >= cur.value - 1e-15) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.converged = true;
            break;
        }
        logits += step * dir;
        cur = std::move(next);
        step = std::min(1.0, step * 2.0);
        history.push_back(cur.value);
        const auto w = static_cast<std::size_t>(opts.stall_window);
        if (history.size() > w && history.back() - history[history.size() - 1 - w] < opts.stall_tol) {
            out.converged = true;
            break;
        }
    }
    out.best = std::move(cur);
    return out;
}

bool lexicographically_less(const RMatrix& a, const RMatrix& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
        }
    }
    return false;
}

}  // namespace

ObjectiveEval variational_objective(const SftModel& sft, double beta, const RMatrix& logits) {
    if (sft.range() != 2) throw InvariantError("range", "variational_objective needs range 2");
    if (logits.rows() != sft.alphabet() || logits.cols() != sft.alphabet()) {
        throw DimensionMismatchError("logit matrix must be alphabet x alphabet");
    }
    return evaluate(sft, beta, logits, nullptr);
}

VariationalResult variational_optimize(const SftModel& sft, double beta, int order, const VariationalOptions& opts) {
    sft.require_irreducible();
    if (order < sft.range() - 1 || order < 1) throw InvariantError("order", "order must be >= range - 1");
    if (opts.restarts < 1) throw InvariantError("restarts", "need at least one restart");
    const SftModel work = order + 1 >= 3 ? higher_block_recode(sft, order + 1) : sft;
    work.require_irreducible();

    std::vector<RestartOutcome> runs(static_cast<std::size_t>(opts.restarts));
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
    for (int k = 0; k < opts.restarts; ++k) {
        runs[static_cast<std::size_t>(k)] =
            run_restart(work, beta, opts, opts.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(k));
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        const auto& a = runs[k].best;
        const auto& b = runs[best].best;
        if (a.value > b.value || (a.value == b.value && lexicographically_less(a.kernel, b.kernel))) best = k;
    }
    VariationalResult out;
    const RestartOutcome& r = runs[best];
    out.value = r.best.value;
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.measure.order = order;
    out.measure.states = work.labels();
    out.measure.kernel = r.best.kernel;
    out.measure.stationary = r.best.stationary;
    out.pressure = classical_pressure(sft, beta);
    out.within_gap = out.value <= out.pressure + 1e-9 && out.value >= out.pressure - opts.gap_tol;
    return out;
}

SpinChainModel diagonal_chain_model(const SftModel& sft, double beta, double penalty, Boundary boundary) {
    const int s = sft.alphabet();
    const int r = sft.range();
    const std::size_t windows = checked_pow(static_cast<std::size_t>(s), r, std::size_t{1} << 14);
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(windows), static_cast<Eigen::Index>(windows));
    for (std::size_t i = 0; i < windows; ++i) {
        const Word w = word_from_index(i, s, r);
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = sft.allowed(w) ? sft.potential_at(w) : penalty;
    }
    return SpinChainModel(s, r, std::move(h), beta, boundary);
}

std::vector<double> classical_word_energies(const SftModel& sft, int n, Boundary boundary) {
    const int s = sft.alphabet();
    const int r = sft.range();
    const std::size_t windows = checked_pow(static_cast<std::size_t>(s), r, std::size_t{1} << 24);
    std::vector<double> energy(windows, 0.0);
    std::vector<int> ok(windows, 0);
    for (std::size_t i = 0; i < windows; ++i) {
        const Word w = word_from_index(i, s, r);
        ok[i] = sft.allowed(w) ? 1 : 0;
        if (ok[i]) energy[i] = sft.potential_at(w);
    }
    checked_pow(static_cast<std::size_t>(s), n, 10'000'000);
    const kernels::WordTable table{s, r, energy, ok};
    return kernels::parallel::word_energies(table, n, boundary == Boundary::periodic);
}

BridgeResult diagonal_bridge(const SftModel& sft, double beta, int n, Boundary boundary, const Budget& budget) {
    BridgeResult out;
    const double base = 50.0 + beta * n * sft.potential_norm();
    out.penalty = std::max(base, base / beta);

    const std::vector<double> words = classical_word_energies(sft, n, boundary);
    RVector scaled(static_cast<Eigen::Index>(words.size()));
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < words.size(); ++i) lo = std::min(lo, beta * words[i]);
    if (!std::isfinite(lo)) throw InvariantError("allowed_words", "no allowed word of length " + std::to_string(n));
    double z = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const double w = std::isfinite(words[i]) ? std::exp(-(beta * words[i] - lo)) : 0.0;
        scaled[static_cast<Eigen::Index>(i)] = w;
        z += w;
    }
    out.classical_p = (-lo + std::log(z)) / n;

    const SpinChainModel chain = diagonal_chain_model(sft, beta, out.penalty, boundary);
    out.quantum_p = log_partition(chain, n, budget, SpectralPath::dense) / n;
    out.pressure_gap = std::abs(out.quantum_p - out.classical_p);

    const GibbsState state = gibbs_state(chain, n, beta, budget);
    const RVector diag = state.density().matrix().diagonal().real();
    out.gibbs_tv = 0.5 * (diag - scaled / z).cwiseAbs().sum();
    return out;
}

}  // namespace thermo
