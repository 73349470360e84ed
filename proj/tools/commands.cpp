#include "commands.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "jacobi/admissibility.hpp"
#include "jacobi/direct.hpp"
#include "jacobi/inverse.hpp"
#include "jacobi/io.hpp"
#include "jacobi/mass_spring.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi::cli {
namespace {

using Json = nlohmann::ordered_json;

// Bad flag values: exit 1, like any other usage error.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <Real R>
R flag_value(const std::string& name, const std::string& text) {
    try {
        return parse_real<R>(text);
    } catch (const Error&) {
        throw UsageError("--" + name + ": '" + text + "' is not a number");
    }
}

template <Real R>
std::optional<R> tolerance(const Common& common) {
    if (!common.tolerance) return std::nullopt;
    R value;
    try {
        value = parse_real<R>(*common.tolerance);
    } catch (const Error&) {
        throw UsageError("JACOBI_TOLERANCE: '" + *common.tolerance + "' is not a number");
    }
    if (!(value > 0) || !is_finite(value)) throw UsageError("JACOBI_TOLERANCE must be finite and > 0");
    return value;
}

template <Real R>
Theta<R> theta_flag(const std::string& name, const std::string& text) {
    const R value = flag_value<R>(name, text);
    if (!(value > 0) || !is_finite(value)) throw UsageError("--" + name + " must be finite and > 0");
    return Theta<R>(value);
}

template <Real R>
std::optional<ZeroCaseHint<R>> hint_from(const HintFlags& flags, const std::optional<ZeroCaseHint<R>>& fallback) {
    if (flags.q1) return Q1Hint<R>{flag_value<R>("q1", *flags.q1)};
    if (flags.alpha0) return Alpha0Hint<R>{flag_value<R>("alpha0", *flags.alpha0)};
    if (flags.theta) return ThetaHint<R>{theta_flag<R>("theta", *flags.theta).value()};
    return fallback;
}

double num(const auto& x) {
    return static_cast<double>(x);
}

template <Real R>
void emit(const ProblemFile<R>& file, const std::optional<std::filesystem::path>& path, std::ostream& out) {
    if (path) {
        save_problem(file, *path);
    } else {
        out << serialize_problem(file);
    }
}

void emit_json(const Json& doc, const std::optional<std::filesystem::path>& path, std::ostream& out) {
    if (path) {
        write_text_file(*path, doc.dump(2) + "\n");
    } else {
        out << doc.dump(2) << "\n";
    }
}

template <Real R>
JacobiMatrix<R> matrix_from(const ProblemFile<R>& file, const std::filesystem::path& source, bool allow_chain) {
    if (const auto* m = std::get_if<JacobiMatrix<R>>(&file.payload)) return *m;
    if (allow_chain) {
        if (const auto* c = std::get_if<MassSpringChain<R>>(&file.payload)) return chain_to_jacobi(*c);
    }
    throw FormatError(source.string() + ": kind: expected " + (allow_chain ? "matrix or chain" : "matrix") +
                      ", got " + std::string(to_string(file.kind())));
}

template <Real R>
const SpectraPairRecord<R>& pair_from(const ProblemFile<R>& file, const std::filesystem::path& source) {
    if (const auto* p = std::get_if<SpectraPairRecord<R>>(&file.payload)) return *p;
    throw FormatError(source.string() + ": kind: expected spectra_pair, got " + std::string(to_string(file.kind())));
}

template <Real R>
std::map<std::string, std::string> provenance(const std::string& command, const std::filesystem::path& source) {
    return {{"command", command}, {"precision", std::string(precision_name<R>())}, {"source", source.string()}};
}

template <Real R>
void write_plot(const std::filesystem::path& path, const JacobiMatrix<R>& matrix, const DirectReport<R>& report) {
    using std::max;
    const auto lambdas = report.pair.lambdas.values();
    const auto mus = report.pair.mus.values();
    const R lo = std::min(lambdas.front(), mus.front());
    const R hi = std::max(lambdas.back(), mus.back());
    const R radius = max(R(1), (hi - lo) / R(2));
    const R eta = radius / R(20);
    const WeylFunction<R> weyl(matrix);

    std::ostringstream os;
    os << "# m-ratio on zeta = x + i*eta, eta = " << num(eta) << "\n";
    os << "# x  re(product)  im(product)  re(m-form)  im(m-form)\n";
    constexpr int samples = 400;
    for (int i = 0; i <= samples; ++i) {
        const R x = lo - radius + (hi - lo + R(2) * radius) * R(i) / R(samples);
        const Complex<R> zeta(x, eta);
        const auto a = mgoth_eval(report.pair, zeta);
        const auto b = mgoth_via_m(weyl, report.theta, zeta);
        os << num(x) << ' ' << num(a.re) << ' ' << num(a.im) << ' ' << num(b.re) << ' ' << num(b.im) << '\n';
    }
    os << "\n\n# eigenvalue ladder\n# index  lambda  mu\n";
    for (int k : report.pair.lambdas.indices()) {
        os << k << ' ' << num(report.pair.lambdas.at(k)) << ' ' << num(report.pair.mus.at(k)) << '\n';
    }
    write_text_file(path, os.str());
}

template <Real R>
Json direct_json(const DirectReport<R>& report) {
    const auto& d = report.diagnostics;
    Json doc = Json::object();
    doc["theta"] = format_real(report.theta.value());
    doc["shift"] = std::string(to_string(report.pair.shift));
    doc["degenerate"] = report.degenerate;
    doc["zero_eigenvalue"] = report.pair.lambdas.has_zero();
    doc["trace_residual"] = num(d.trace_residual);
    doc["determinant_residual"] = d.determinant_residual ? Json(num(*d.determinant_residual)) : Json(nullptr);
    doc["mgoth_residual"] = num(d.mgoth_residual);
    doc["weight_residual"] = num(d.weight_residual);
    doc["shift_consistent"] = d.shift_consistent;
    doc["zero_preserved"] = d.zero_preserved;
    doc["tolerance"] = num(d.tolerance);
    doc["pass"] = d.pass;
    return doc;
}

template <Real R>
Json inverse_json(const InverseSolution<R>& solution) {
    const auto& r = solution.residuals;
    Json doc = Json::object();
    doc["theta"] = format_real(solution.theta.value());
    doc["lambda_residual"] = num(r.lambda_residual);
    doc["mu_residual"] = num(r.mu_residual);
    doc["q1_moment_gap"] = num(r.q1_moment_gap);
    doc["b1_moment_gap"] = num(r.b1_moment_gap);
    doc["weight_sum_error"] = num(r.weight_sum_error);
    doc["theta_condition"] = num(r.theta_condition);
    doc["forward_tolerance"] = num(r.forward_tolerance);
    return doc;
}

template <Real R>
Json admissibility_json(const AdmissibilityReport<R>& report) {
    Json doc = Json::object();
    doc["verdict"] = std::string(to_string(report.verdict));
    doc["reason"] = report.reason.empty() ? Json(nullptr) : Json(report.reason);

    Json a = Json::object();
    a["pass"] = report.condition_a.ok;
    if (report.condition_a.ok) {
        a["shift"] = std::string(to_string(report.condition_a.shift));
    } else {
        a["failure"] = std::string(to_string(report.condition_a.failure));
        a["violation_index"] =
            report.condition_a.violation_index ? Json(*report.condition_a.violation_index) : Json(nullptr);
        a["detail"] = report.condition_a.detail;
    }
    doc["condition_a"] = a;

    if (report.condition_b) {
        Json b = Json::object();
        b["sum"] = format_real(report.condition_b->sum);
        b["finite"] = report.condition_b->finite;
        b["tail_fraction"] = num(report.condition_b->tail_fraction);
        doc["condition_b"] = b;
    }
    if (report.tau) {
        Json t = Json::object();
        t["pass"] = report.tau->positive;
        t["theta_squared"] = report.tau->theta_squared ? Json(format_real(*report.tau->theta_squared)) : Json(nullptr);
        t["weight_sum"] = num(report.tau->weight_sum);
        if (!report.tau->positive) t["failure"] = report.tau->failure;
        Json w = Json::array();
        for (const R& x : report.tau->weights) w.push_back(format_real(x));
        t["weights"] = w;
        doc["positivity"] = t;
    }
    if (report.hankel) {
        const auto& h = *report.hankel;
        Json c = Json::object();
        c["max_order"] = h.max_order;
        c["overflow"] = h.overflow;
        c["largest_safe_order"] = h.largest_safe_order;
        c["growth_rate"] = num(h.growth_rate);
        doc["condition_c"] = c;

        Json ham = Json::object();
        ham["positive_definite"] = h.positive_definite;
        ham["first_failing_order"] = h.first_failing_order ? Json(*h.first_failing_order) : Json(nullptr);
        ham["determinant_signs"] = h.determinant_signs;
        ham["log_dprime_ratios"] = h.log_dprime_ratios;
        ham["pivot_tolerance_factor"] = h.pivot_tolerance_factor;
        doc["hamburger"] = ham;

        Json d = Json::object();
        d["gram_min_eigenvalue"] = h.gram_min_eigenvalue ? Json(*h.gram_min_eigenvalue) : Json(nullptr);
        d["nonsingular"] = h.gram_nonsingular;
        doc["condition_d_surrogate"] = d;
    }
    return doc;
}

template <Real R>
std::string admissibility_text(const AdmissibilityReport<R>& report) {
    std::ostringstream os;
    os << "verdict: " << to_string(report.verdict);
    if (!report.reason.empty()) os << " (" << report.reason << ")";
    os << "\n";
    const auto& a = report.condition_a;
    if (a.ok) {
        os << "condition_a: pass, " << to_string(a.shift) << "\n";
    } else {
        os << "condition_a: fail, " << to_string(a.failure);
        if (a.violation_index) os << " at index " << *a.violation_index;
        os << ": " << a.detail << "\n";
    }
    if (report.condition_b) {
        os << "condition_b: sum(mu - lambda) = " << format_real(report.condition_b->sum)
           << ", outer-quarter share = " << num(report.condition_b->tail_fraction) << "\n";
    }
    if (report.tau) {
        os << "positivity: " << (report.tau->positive ? "pass" : "fail");
        if (report.tau->theta_squared) os << ", theta^2 = " << format_real(*report.tau->theta_squared);
        if (!report.tau->positive) os << ", " << report.tau->failure;
        os << "\n";
    }
    if (report.hankel) {
        const auto& h = *report.hankel;
        os << "condition_c: moments to order " << 2 * h.max_order << (h.overflow ? " overflow" : " finite")
           << ", growth rate " << num(h.growth_rate) << "\n";
        os << "hamburger: " << (h.positive_definite ? "positive definite" : "not positive definite");
        if (h.first_failing_order) os << " (fails at order " << *h.first_failing_order << ")";
        os << ", determinant signs";
        for (int s : h.determinant_signs) os << ' ' << (s > 0 ? '+' : (s < 0 ? '-' : '0'));
        os << "\n";
        if (h.gram_min_eigenvalue) {
            os << "condition_d: smallest Gram eigenvalue " << *h.gram_min_eigenvalue
               << (h.gram_nonsingular ? ", nonsingular" : ", numerically singular") << "\n";
        }
    }
    return os.str();
}

template <Real R>
int direct(const Common& common, const DirectArgs& args, std::ostream& out, std::ostream& err) {
    const auto file = load_problem<R>(args.input);
    const JacobiMatrix<R> matrix = matrix_from(file, args.input, true);
    const Theta<R> theta = theta_flag<R>("theta", args.theta);
    DirectOptions<R> options;
    if (const auto tol = tolerance<R>(common)) options.check_tolerance = *tol;

    const DirectReport<R> report = spectra_pair(matrix, theta, options);
    SpectraPairRecord<R> record;
    record.lambdas.assign(report.pair.lambdas.values().begin(), report.pair.lambdas.values().end());
    record.mus.assign(report.pair.mus.values().begin(), report.pair.mus.values().end());
    record.shift = report.pair.shift;
    ProblemFile<R> result{record, provenance<R>("direct", args.input), "1"};
    result.metadata["theta"] = format_real(theta.value());
    emit(result, args.out, out);

    const Json doc = direct_json(report);
    if (args.report) write_text_file(*args.report, doc.dump(2) + "\n");
    if (args.plot) write_plot(*args.plot, matrix, report);

    const auto& d = report.diagnostics;
    if (report.degenerate) err << "direct: DEGENERATE (theta = 1, the spectra coincide)\n";
    err << "direct: N = " << matrix.size() << ", shift " << to_string(report.pair.shift) << ", trace residual "
        << num(d.trace_residual) << ", m-ratio residual " << num(d.mgoth_residual) << ", weight residual "
        << num(d.weight_residual) << " -> " << (d.pass ? "PASS" : "FAIL") << "\n";
    return d.pass ? Success : GateFailure;
}

template <Real R>
SpectrumPair<R> paired(const SpectraPairRecord<R>& record) {
    std::vector<R> all = record.lambdas;
    all.insert(all.end(), record.mus.begin(), record.mus.end());
    const R tol = default_zero_tolerance<R>(all);
    SpectrumPair<R> pair = pair_spectra<R>(enumerate_spectrum<R>(record.lambdas, tol), record.mus, tol);
    if (record.shift && *record.shift != pair.shift) {
        throw Error(ErrorCode::InconsistentShift, "file declares " + std::string(to_string(*record.shift)) +
                                                      " but the spectra interlace as " +
                                                      std::string(to_string(pair.shift)));
    }
    return pair;
}

template <Real R>
int inverse(const Common& common, const InverseArgs& args, std::ostream& out, std::ostream& err) {
    const auto file = load_problem<R>(args.input);
    const auto& record = pair_from(file, args.input);
    const auto hint = hint_from<R>(args.hint, record.hint);
    InverseOptions<R> options;
    if (const auto tol = tolerance<R>(common)) {
        options.forward_tolerance = *tol;
        options.normalization_tolerance = *tol;
    }
    const InverseSolution<R> solution = solve(InverseInput<R>{paired(record), hint}, options);

    ProblemFile<R> result{solution.matrix, provenance<R>("inverse", args.input), "1"};
    result.metadata["theta"] = format_real(solution.theta.value());
    emit(result, args.out, out);
    const Json doc = inverse_json(solution);
    if (args.report) write_text_file(*args.report, doc.dump(2) + "\n");
    err << "inverse: N = " << solution.matrix.size() << ", theta = " << format_real(solution.theta.value())
        << ", forward residual " << num(std::max(solution.residuals.lambda_residual, solution.residuals.mu_residual))
        << " -> PASS\n";
    return Success;
}

template <Real R>
int verify(const Common&, const VerifyArgs& args, std::ostream& out, std::ostream&) {
    const auto file = load_problem<R>(args.input);
    const auto& record = pair_from(file, args.input);
    const auto hint = hint_from<R>(args.hint, record.hint);
    const AdmissibilityReport<R> report = admissible<R>(record.lambdas, record.mus, hint);
    out << admissibility_text(report) << "--- json\n" << admissibility_json(report).dump(2) << "\n";
    return report.verdict == Verdict::Admissible ? Success : GateFailure;
}

template <Real R>
int masses(const Common&, const MassesArgs& args, std::ostream& out, std::ostream& err) {
    const auto file = load_problem<R>(args.input);
    const JacobiMatrix<R> matrix = matrix_from(file, args.input, false);
    if (args.scan) {
        const RatioScan<R> scan = admissible_ratio_scan(matrix, args.grid);
        Json doc = Json::object();
        doc["grid_min"] = format_real(scan.grid_min);
        doc["grid_max"] = format_real(scan.grid_max);
        doc["grid_points"] = scan.grid_points;
        Json list = Json::array();
        for (const auto& interval : scan.intervals) {
            Json item = Json::object();
            item["lower"] = format_real(interval.lower);
            item["upper"] = format_real(interval.upper);
            item["open_below"] = interval.open_below;
            item["open_above"] = interval.open_above;
            list.push_back(item);
        }
        doc["intervals"] = list;
        emit_json(doc, args.out, out);
        if (scan.intervals.empty()) {
            err << "masses: no admissible k1/m1 on the grid\n";
        } else {
            err << "masses: " << scan.intervals.size() << " admissible interval(s) for k1/m1\n";
        }
        return Success;
    }
    if (!args.k1 || !args.m1) throw UsageError("masses needs --k1 and --m1, or --scan");
    const R k1 = flag_value<R>("k1", *args.k1);
    const R m1 = flag_value<R>("m1", *args.m1);
    if (!(k1 > 0) || !(m1 > 0)) throw UsageError("--k1 and --m1 must be > 0");
    const MassSpringChain<R> chain = jacobi_to_chain(matrix, k1, m1);
    emit(ProblemFile<R>{chain, provenance<R>("masses", args.input), "1"}, args.out, out);
    err << "masses: chain of " << chain.size() << " masses, terminal spring " << format_real(chain.terminal_spring())
        << "\n";
    return Success;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return UsageOrIo;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return UsageOrIo;
    } catch (const Error& e) {
        err << "gate failed: " << e.what();
        if (e.step()) err << " [step " << *e.step() << "]";
        err << "\n";
        return GateFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return UsageOrIo;
    }
}

template <class Args, class Body>
int dispatch(const Common& common, const Args& args, std::ostream& out, std::ostream& err, Body body) {
    return guarded(err, [&] {
        if (common.precision == "double") return body(double{}, common, args, out, err);
        return body(Extended{}, common, args, out, err);
    });
}

}  // namespace

int run_direct(const Common& common, const DirectArgs& args, std::ostream& out, std::ostream& err) {
    return dispatch(common, args, out, err, [](auto tag, auto&&... rest) {
        return direct<decltype(tag)>(rest...);
    });
}

int run_inverse(const Common& common, const InverseArgs& args, std::ostream& out, std::ostream& err) {
    return dispatch(common, args, out, err, [](auto tag, auto&&... rest) {
        return inverse<decltype(tag)>(rest...);
    });
}

int run_verify(const Common& common, const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    return dispatch(common, args, out, err, [](auto tag, auto&&... rest) {
        return verify<decltype(tag)>(rest...);
    });
}

int run_masses(const Common& common, const MassesArgs& args, std::ostream& out, std::ostream& err) {
    return dispatch(common, args, out, err, [](auto tag, auto&&... rest) {
        return masses<decltype(tag)>(rest...);
    });
}

}  // namespace jacobi::cli
