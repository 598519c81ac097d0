#include "thermo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "thermo/gibbs.hpp"
#include "thermo/random.hpp"

namespace thermo {

using nlohmann::json;

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"pressure",   "equilibrium", "kms-check",    "evolve-check",
                                                   "variational", "bridge",      "properties",   "riesz-coeffs",
                                                   "riesz-verify"};
    return names;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", value);
}

namespace {

class Csv {
public:
    explicit Csv(std::vector<std::string> header) { line(header); }

    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::string str() const { return text_; }

private:
    std::string text_;
};

std::string num(double v) { return format_number(v); }
std::string num(long long v) { return std::to_string(v); }
std::string pass_text(bool p) { return p ? "true" : "false"; }

json number_json(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::string digest_of(const ModelFile& model, const RunOptions& o) {
    std::string text = to_json(model).dump();
    text += '|' + o.command;
    text += '|' + (o.n_min ? std::to_string(*o.n_min) : "-");
    text += '|' + (o.n_max ? std::to_string(*o.n_max) : "-");
    text += '|' + (o.beta ? format_number(*o.beta) : "-");
    text += '|' + (o.boundary ? to_string(*o.boundary) : "-");
    text += '|' + (o.order ? std::to_string(*o.order) : "-");
    text += '|' + (o.coefficient_max ? std::to_string(*o.coefficient_max) : "-");
    text += '|' + std::to_string(o.seed);
    // FNV-1a, 64 bit.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return fmt::format("{:016x}", h);
}

std::string word_text(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(w[i]);
    }
    return s;
}

void add_record(RunReport& out, const CheckRecord& r) { out.report.add(r); }

// ---- spin chain helpers -------------------------------------------------

SpinChainModel effective_chain(const ModelFile& model, const RunOptions& o) {
    SpinChainModel m = model.spin_chain.value();
    if (o.beta) m = m.with_beta(*o.beta);
    if (o.boundary) m = m.with_boundary(*o.boundary);
    return m;
}

// Largest volume <= cap with d^n within both the row budget and `rows`.
int largest_volume(int d, int cap, std::size_t rows, const Budget& b) {
    int n = 0;
    std::size_t dim = 1;
    while (n < cap && dim * static_cast<std::size_t>(d) <= std::min(rows, b.max_rows)) {
        dim *= static_cast<std::size_t>(d);
        ++n;
    }
    return n;
}

std::pair<int, int> chain_volumes(const SpinChainModel& m, const RunOptions& o, int cap, std::size_t rows) {
    const int n_max = o.n_max.value_or(std::max(m.range(), largest_volume(m.site_dim(), cap, rows, o.budget)));
    const int n_min = o.n_min.value_or(std::min(m.range(), n_max));
    if (n_min < m.range() || n_max < n_min) throw UsageError("volumes must satisfy range <= N_MIN <= N_MAX");
    return {n_min, n_max};
}

void cmd_pressure_chain(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SpinChainModel m = effective_chain(model, o);
    const auto [n_min, n_max] = chain_volumes(m, o, 10, 1024);
    const auto seq = pressure_sequence(m, n_min, n_max, o.budget);
    Csv csv({"n", "log_Z", "p_n"});
    double worst = 0.0;
    for (const auto& pt : seq) {
        csv.line({num(static_cast<long long>(pt.n)), num(pt.log_z), num(pt.p_n)});
        worst = std::max(worst, std::abs(pt.p_n - std::log(static_cast<double>(m.site_dim()))));
    }
    out.artifacts.push_back({"pressure.csv", csv.str()});
    out.report.add_upper("lipschitz_vs_free_chain", worst, m.beta() * m.interaction_norm());
    json summary = {{"command", "pressure"}, {"n_min", n_min}, {"n_max", n_max}};
    if (n_max >= m.range() + 2) {
        const auto est = pressure_estimate(m, n_max, o.budget);
        summary["estimate"] = number_json(est.value);
        summary["error_bar"] = number_json(est.error_bar);
        out.report.add_upper("estimate_error_bar", est.error_bar, 2.0 * m.beta() * m.range() * m.interaction_norm() / n_max + 1e-12);
    }
    out.artifacts.push_back({"pressure.json", summary.dump(2) + "\n"});
}

void cmd_pressure_sft(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SftModel& sft = model.sft.value();
    const double beta = o.beta.value_or(1.0);
    const Boundary boundary = o.boundary.value_or(Boundary::periodic);
    sft.require_irreducible();
    const SftModel work = sft.range() > 2 ? higher_block_recode(sft, sft.range()) : sft;
    const RMatrix l = transfer_matrix(work, beta);
    const RpfData rpf = rpf_eigendata(l);
    const double p = std::log(rpf.lambda);
    Budget words;
    words.max_rows = std::size_t{1} << 20;
    const int n_max = o.n_max.value_or(std::max(sft.range(), largest_volume(sft.alphabet(), 12, words.max_rows, words)));
    const int n_min = o.n_min.value_or(sft.range());
    if (n_min < sft.range() || n_max < n_min) throw UsageError("volumes must satisfy range <= N_MIN <= N_MAX");
    Csv csv({"n", "log_Z", "p_n"});
    for (int n = n_min; n <= n_max; ++n) {
        const auto words = classical_word_energies(sft, n, boundary);
        RVector e(static_cast<Eigen::Index>(words.size()));
        Eigen::Index used = 0;
        for (double w : words) {
            if (std::isfinite(w)) e[used++] = beta * w;
        }
        const double lz = log_sum_exp_neg(e.head(used));
        csv.line({num(static_cast<long long>(n)), num(lz), num(lz / n)});
    }
    out.artifacts.push_back({"pressure.csv", csv.str()});
    const double residual = (l * rpf.right - rpf.lambda * rpf.right).cwiseAbs().maxCoeff() / rpf.lambda;
    out.report.add_upper("rpf_eigen_residual", residual, 1e-12);
    const json summary = {{"command", "pressure"},
                          {"lambda", rpf.lambda},
                          {"beta", beta},
                          {"pressure", p},
                          {"cyclicity_index", cyclicity_index(sft.transitions())}};
    out.artifacts.push_back({"pressure.json", summary.dump(2) + "\n"});
}

void cmd_equilibrium_chain(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SpinChainModel m = effective_chain(model, o);
    const auto [n_min, n_max] = chain_volumes(m, o, 8, 1024);
    Csv csv({"n", "beta", "log_Z", "p_n", "entropy", "energy", "variational_residual"});
    for (int n = n_min; n <= n_max; ++n) {
        const GibbsState st = gibbs_state(m, n, m.beta(), o.budget);
        const double s = entropy(st), e = energy(st), res = variational_identity_check(st);
        csv.line({num(static_cast<long long>(n)), num(m.beta()), num(st.log_z()), num(st.log_z() / n), num(s), num(e),
                  num(res)});
        out.report.add_upper("variational_identity_n" + std::to_string(n), res, 1e-10);
    }
    out.artifacts.push_back({"equilibrium.csv", csv.str()});
}

Csv measure_csv(const MarkovMeasure& mu) {
    Csv csv({"state", "next", "probability"});
    for (Eigen::Index i = 0; i < mu.kernel.rows(); ++i) {
        for (Eigen::Index j = 0; j < mu.kernel.cols(); ++j) {
            if (mu.kernel(i, j) > 0.0) {
                csv.line({word_text(mu.states[static_cast<std::size_t>(i)]),
                          word_text(mu.states[static_cast<std::size_t>(j)]), num(mu.kernel(i, j))});
            }
        }
    }
    return csv;
}

json kernel_json(const MarkovMeasure& mu) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < mu.kernel.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < mu.kernel.cols(); ++j) row.push_back(mu.kernel(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void cmd_equilibrium_sft(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SftModel& sft = model.sft.value();
    const double beta = o.beta.value_or(1.0);
    const MarkovMeasure mu = gibbs_markov_measure(sft, beta);
    const double p = classical_pressure(sft, beta);
    const double h = markov_entropy(mu), e = markov_energy(mu, sft);
    out.artifacts.push_back({"measure.csv", measure_csv(mu).str()});
    const json summary = {{"lambda", std::exp(p)}, {"pressure", p}, {"entropy", h}, {"energy", e}, {"beta", beta}};
    out.artifacts.push_back({"summary.json", summary.dump(2) + "\n"});
    out.report.add_upper("variational_identity", std::abs(h - beta * e - p), 1e-10);
}

std::vector<LocalObservable> random_observables(int count, int n, int d, Rng& rng) {
    std::vector<LocalObservable> out;
    const int width = std::min(2, n);
    std::uniform_int_distribution<int> start(0, n - width);
    for (int i = 0; i < count; ++i) {
        const int lo = start(rng);
        Eigen::Index dim = 1;
        for (int k = 0; k < width; ++k) dim *= d;
        out.push_back({lo, lo + width - 1, random_matrix(dim, rng)});
    }
    return out;
}

void cmd_kms(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SpinChainModel m = effective_chain(model, o);
    const int n = o.n_max.value_or(std::max(m.range(), largest_volume(m.site_dim(), 8, 1024, o.budget)));
    const GibbsState st = gibbs_state(m, n, m.beta(), o.budget);
    Rng rng(o.seed);
    const auto as = random_observables(10, n, m.site_dim(), rng);
    const auto bs = random_observables(10, n, m.site_dim(), rng);
    Csv csv({"test_id", "n", "beta", "residual", "tolerance", "pass"});
    for (std::size_t i = 0; i < as.size(); ++i) {
        const double res = kms_residual(st, as[i], bs[i]);
        const double tol = 1e-10 * op_norm(AlgebraElement(as[i].op)) * op_norm(AlgebraElement(bs[i].op));
        const bool ok = res <= tol;
        csv.line({num(static_cast<long long>(i)), num(static_cast<long long>(n)), num(m.beta()), num(res), num(tol),
                  pass_text(ok)});
        add_record(out, {"kms_" + std::to_string(i), res, tol, ok});
    }
    out.artifacts.push_back({"kms.csv", csv.str()});
}

void cmd_evolve(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SpinChainModel m = effective_chain(model, o);
    const int n = o.n_max.value_or(std::max(m.range() + 1, largest_volume(m.site_dim(), 8, 1024, o.budget)));
    std::vector<int> offsets(static_cast<std::size_t>(n - m.range() + 1));
    for (std::size_t j = 0; j < offsets.size(); ++j) offsets[j] = static_cast<int>(j);
    const double z = std::min(0.3, default_analyticity_radius(m));
    Rng rng(o.seed);
    const auto as = random_observables(5, n, m.site_dim(), rng);
    Csv csv({"test_id", "n", "z", "terms", "deviation", "tail_bound", "tolerance", "pass"});
    for (std::size_t i = 0; i < as.size(); ++i) {
        const SeriesResult series = evolve_series(m, as[i], z, offsets, n, {}, o.budget);
        const AlgebraElement exact = evolve_conjugation(m, as[i], z, offsets, n, o.budget);
        const double dev = op_norm(series.value - exact);
        // Rounding allowance on top of the truncation bound.
        const double tol = std::min(1e-8, series.tail_bound + 1e-12 * op_norm(AlgebraElement(as[i].op)));
        const bool ok = dev <= tol;
        csv.line({num(static_cast<long long>(i)), num(static_cast<long long>(n)), num(z),
                  num(static_cast<long long>(series.terms_used)), num(dev), num(series.tail_bound), num(tol),
                  pass_text(ok)});
        add_record(out, {"evolve_" + std::to_string(i), dev, tol, ok});
    }
    out.artifacts.push_back({"evolve.csv", csv.str()});
}

void cmd_variational(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SftModel& sft = model.sft.value();
    const double beta = o.beta.value_or(1.0);
    const int order = o.order.value_or(sft.range() - 1);
    VariationalOptions vo;
    vo.seed = o.seed;
    const VariationalResult res = variational_optimize(sft, beta, order, vo);
    const MarkovMeasure rpf = gibbs_markov_measure(sft, beta);
    out.artifacts.push_back({"measure.csv", measure_csv(res.measure).str()});
    const double h = markov_entropy(res.measure), e = markov_energy(res.measure, sft);
    json summary = {{"lambda", std::exp(res.pressure)},
                    {"pressure", res.pressure},
                    {"value", res.value},
                    {"entropy", h},
                    {"energy", e},
                    {"order", order},
                    {"converged", res.converged},
                    {"iterations", res.iterations},
                    {"rpf_kernel", kernel_json(rpf)},
                    {"optimized_kernel", kernel_json(res.measure)}};
    out.artifacts.push_back({"variational.json", summary.dump(2) + "\n"});
    out.report.add_upper("value_vs_pressure", std::abs(res.value - res.pressure), 1e-6);
    out.report.add_upper("value_not_above_pressure", res.value - res.pressure, 1e-9);
    if (order == sft.range() - 1) {
        out.report.add_upper("kernel_vs_rpf", (res.measure.kernel - rpf.kernel).cwiseAbs().maxCoeff(), 1e-5);
    }
}

void cmd_bridge(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SftModel& sft = model.sft.value();
    const double beta = o.beta.value_or(1.0);
    const Boundary boundary = o.boundary.value_or(Boundary::open);
    const int n = o.n_max.value_or(std::max(sft.range(), largest_volume(sft.alphabet(), 10, 1024, o.budget)));
    const BridgeResult b = diagonal_bridge(sft, beta, n, boundary, o.budget);
    Csv csv({"n", "boundary", "beta", "quantum_p", "classical_p", "gap", "gibbs_tv", "penalty"});
    csv.line({num(static_cast<long long>(n)), to_string(boundary), num(beta), num(b.quantum_p), num(b.classical_p),
              num(b.pressure_gap), num(b.gibbs_tv), num(b.penalty)});
    out.artifacts.push_back({"bridge.csv", csv.str()});
    out.report.add_upper("pressure_gap", b.pressure_gap, 1e-9);
    out.report.add_upper("gibbs_total_variation", b.gibbs_tv, 1e-9);
}

void cmd_properties(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const SpinChainModel h = effective_chain(model, o);
    const int k = 2;
    int n = o.n_max.value_or(largest_volume(h.site_dim(), 10, 1024, o.budget));
    n -= n % k;
    if (n < h.range() * k) throw UsageError("properties needs a volume of at least 2 * range");
    Rng rng(o.seed);
    const auto dim = h.local().rows();
    const SpinChainModel kk = h.with_interaction(random_hermitian(dim, rng, 0.5));
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    const double c = shift(rng);
    out.report = check_pressure_properties(h, kk, c, k, n, o.budget);
    Csv csv({"id", "value", "tolerance", "pass"});
    for (const auto& r : out.report.records) csv.line({r.id, num(r.value), num(r.tolerance), pass_text(r.pass)});
    out.artifacts.push_back({"properties.csv", csv.str()});
}

void cmd_riesz_coeffs(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const RieszSpec& spec = model.riesz.value();
    const std::int64_t n_max = o.coefficient_max.value_or(100);
    Csv csv({"n", "mu_hat"});
    long long undecidable = 0;
    double largest = 0.0, bound = 0.0;
    for (double a : spec.amplitudes()) bound = std::max(bound, std::abs(a) / 2.0);
    for (std::int64_t n = -n_max; n <= n_max; ++n) {
        try {
            const double c = fourier_coefficient(spec, n);
            csv.line({num(static_cast<long long>(n)), num(c)});
            if (n != 0) largest = std::max(largest, std::abs(c));
        } catch (const UndecidableError&) {
            ++undecidable;
        }
    }
    out.artifacts.push_back({"coefficients.csv", csv.str()});
    out.report.add_upper("undecidable_count", static_cast<double>(undecidable), 0.0);
    out.report.add_upper("coefficient_bound", largest, bound);
}

void cmd_riesz_verify(const ModelFile& model, const RunOptions& o, RunReport& out) {
    const RieszSpec& spec = model.riesz.value();
    const std::int64_t n_max = o.coefficient_max.value_or(100);
    const CoefficientCheck chk = verify_coefficients(spec, spec.size(), n_max);
    Csv csv({"n", "quadrature", "closed_form"});
    for (std::int64_t n = -n_max; n <= n_max; ++n) {
        const auto i = static_cast<std::size_t>(n + n_max);
        csv.line({num(static_cast<long long>(n)), num(chk.quadrature[i]), num(chk.closed_form[i])});
    }
    out.artifacts.push_back({"verify.csv", csv.str()});
    out.report.add_upper("max_error", chk.max_error, 1e-10);
}

using Handler = std::function<void(const ModelFile&, const RunOptions&, RunReport&)>;

}  // namespace

RunReport run(const ModelFile& model, const RunOptions& options) {
    static const std::map<std::pair<std::string, ModelKind>, Handler> table = {
        {{"pressure", ModelKind::spin_chain}, cmd_pressure_chain},
        {{"pressure", ModelKind::sft}, cmd_pressure_sft},
        {{"equilibrium", ModelKind::spin_chain}, cmd_equilibrium_chain},
        {{"equilibrium", ModelKind::sft}, cmd_equilibrium_sft},
        {{"kms-check", ModelKind::spin_chain}, cmd_kms},
        {{"evolve-check", ModelKind::spin_chain}, cmd_evolve},
        {{"variational", ModelKind::sft}, cmd_variational},
        {{"bridge", ModelKind::sft}, cmd_bridge},
        {{"properties", ModelKind::spin_chain}, cmd_properties},
        {{"riesz-coeffs", ModelKind::riesz}, cmd_riesz_coeffs},
        {{"riesz-verify", ModelKind::riesz}, cmd_riesz_verify},
    };
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), options.command) == names.end()) {
        throw UsageError("unknown command '" + options.command + "'");
    }
    const auto it = table.find({options.command, model.kind});
    if (it == table.end()) {
        throw UsageError("command '" + options.command + "' does not apply to a " + to_string(model.kind) + " model");
    }
    RunReport out;
    out.command = options.command;
    out.inputs_digest = digest_of(model, options);
    it->second(model, options, out);
    out.artifacts.push_back({"report.json", report_json(out)});
    return out;
}

std::string report_json(const RunReport& run) {
    json records = json::array();
    for (const auto& r : run.report.records) {
        records.push_back({{"id", r.id}, {"value", number_json(r.value)}, {"tolerance", number_json(r.tolerance)}, {"pass", r.pass}});
    }
    const json doc = {{"command", run.command}, {"inputs_digest", run.inputs_digest}, {"records", records}, {"pass", run.passed()}};
    return doc.dump(2) + "\n";
}

}  // namespace thermo
