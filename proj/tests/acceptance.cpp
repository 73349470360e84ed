// Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Random criteria use Extended arithmetic and seeds
// fixed before the first run (base seed + criterion number).

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jacobi/admissibility.hpp"
#include "jacobi/direct.hpp"
#include "jacobi/inverse.hpp"
#include "jacobi/io.hpp"
#include "jacobi/mass_spring.hpp"
#include "jacobi/spectral.hpp"
#include "oracle.hpp"

using namespace jacobi;

namespace {

using X = Extended;
namespace fs = std::filesystem;

constexpr std::uint64_t base_seed = 20261016;

std::mt19937_64 rng_for(int criterion) {
    return std::mt19937_64(base_seed + criterion);
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(const X& x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << static_cast<double>(x);
    return os.str();
}

std::string sci(double x) {
    return sci(X(x));
}

X max_entry_error(const JacobiMatrix<X>& a, const JacobiMatrix<X>& b) {
    X worst(0);
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, oracle::relative(a.diagonal()[i], b.diagonal()[i]));
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        worst = std::max(worst, oracle::relative(a.off_diagonal()[i], b.off_diagonal()[i]));
    }
    return worst;
}

JacobiMatrix<X> make_singular(const JacobiMatrix<X>& j, std::size_t k) {
    const X lambda = eigen(j).eigenvalues.at(k);
    std::vector<X> q(j.diagonal().begin(), j.diagonal().end());
    for (auto& x : q) x -= lambda;
    return JacobiMatrix<X>(std::move(q), std::vector<X>(j.off_diagonal().begin(), j.off_diagonal().end()));
}

// theta in [0.3, 3] kept away from 1 so the shift is well defined.
X random_theta(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.3, 3.0);
    double t = u(rng);
    while (std::abs(t - 1) < 1e-3) t = u(rng);
    return X(t);
}

SpectrumPair<X> forward(const JacobiMatrix<X>& j, const X& theta) {
    return spectra_pair(j, Theta<X>(theta)).pair;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome round_trip() {
    auto rng = rng_for(1);
    const double thetas[] = {0.5, 0.7, 1.5, 2.0};
    const auto start = std::chrono::steady_clock::now();
    X worst_theta(0);
    X worst_entry(0);
    int errors = 0;
    for (int i = 0; i < 200; ++i) {
        const auto j = oracle::random_jacobi<X>(rng, 30);
        const X theta(thetas[i % 4]);
        try {
            const auto sol = solve(InverseInput<X>{forward(j, theta), std::nullopt});
            worst_theta = std::max(worst_theta, oracle::relative(sol.theta.value(), theta));
            worst_entry = std::max(worst_entry, max_entry_error(sol.matrix, j));
        } catch (const Error&) {
            ++errors;
        }
    }
    const double elapsed = seconds_since(start);
    return {errors == 0 && worst_theta <= X(1e-10) && worst_entry <= X(1e-8) && elapsed < 30,
            "200 matrices N=30, theta err " + sci(worst_theta) + " (<= 1e-10), entry err " + sci(worst_entry) +
                " (<= 1e-8), errors " + std::to_string(errors) + ", " + sci(elapsed) + " s (< 30)"};
}

Outcome interlacing() {
    auto rng = rng_for(2);
    int violations = 0;
    int wrong_shift = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto j = oracle::random_jacobi<X>(rng, 1 + i % 20);
        const X theta = random_theta(rng);
        const auto lambdas = eigen(j).eigenvalues;
        const auto mus = eigen(apply_theta(j, Theta<X>(theta))).eigenvalues;
        const auto r = check_interlacing<X>(lambdas, mus);
        if (!r.ok) {
            ++violations;
            continue;
        }
        const Shift expected = theta > 1 ? Shift::RightPositive : Shift::LeftPositive;
        if (r.shift != expected) ++wrong_shift;
    }
    return {violations == 0 && wrong_shift == 0,
            "1000 instances N<=20, violations " + std::to_string(violations) + ", shift mismatches " +
                std::to_string(wrong_shift)};
}

Outcome derivative() {
    auto rng = rng_for(3);
    const X h(1e-5);
    X worst(0);
    int misses = 0;
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const auto j = oracle::random_jacobi<X>(rng, 1 + i % 20);
        const X theta = random_theta(rng);
        const auto at = [&](const X& t) { return eigen(apply_theta(j, Theta<X>(t))).eigenvalues; };
        const auto up = at(theta * (1 + h));
        const auto down = at(theta * (1 - h));
        const auto centre = enumerate_spectrum<X>(at(theta));
        for (std::size_t p = 0; p < centre.size(); ++p) {
            const X fd = (up[p] - down[p]) / (2 * theta * h);
            const X d = eigenvalue_derivative(j, Theta<X>(theta), centre.indices()[p]);
            const X ratio = abs(d - fd) / (X(1e-6) * std::max(X(1), abs(centre.values()[p])));
            worst = std::max(worst, ratio);
            misses += ratio > 1;
            ++checked;
        }
    }
    return {misses == 0, "100 instances N<=20, " + std::to_string(checked) + " eigenvalues, worst error " +
                             sci(worst) + " x tolerance, misses " + std::to_string(misses)};
}

Outcome trace() {
    auto rng = rng_for(4);
    X worst(0);
    int errors = 0;
    int instances = 0;
    const auto check = [&](const JacobiMatrix<X>& j, X t1, X t2) {
        if (t1 > t2) std::swap(t1, t2);
        ++instances;
        try {
            const auto r = trace_shift(j, Theta<X>(t1), Theta<X>(t2));
            const X tol = X(1e-9) * (1 + abs(j.diagonal()[0]) * t2 * t2);
            worst = std::max(worst, abs(r.lhs - r.rhs) / tol);
        } catch (const Error&) {
            ++errors;
        }
    };
    check(JacobiMatrix<X>({X(3), X(2)}, {X(4)}), X(1), X(2));
    check(JacobiMatrix<X>({X(-2), X(-2), X(-2)}, {X(1), X(1)}), X(0.5), X(1.5));
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 1 + i % 20;
        auto j = oracle::random_jacobi<X>(rng, n);
        if (i % 5 == 0) j = make_singular(j, i % n);
        check(j, random_theta(rng), random_theta(rng));
    }
    return {errors == 0 && worst <= 1, std::to_string(instances) + " instances (every fifth singular), worst error " +
                                           sci(worst) + " x tolerance, errors " + std::to_string(errors)};
}

Outcome mgoth() {
    auto rng = rng_for(5);
    std::uniform_real_distribution<double> unit(0, 1);
    std::uniform_real_distribution<double> im(0.5, 5);
    X worst(0);
    X worst_far(0);
    int errors = 0;
    for (int i = 0; i < 100; ++i) {
        const auto j = oracle::random_jacobi<X>(rng, 2 + i % 20);
        const Theta<X> theta(random_theta(rng));
        try {
            const auto pair = spectra_pair(j, theta).pair;
            const WeylFunction<X> weyl(j);
            const X lo = std::min(pair.lambdas.values().front(), pair.mus.values().front()) - 1;
            const X hi = std::max(pair.lambdas.values().back(), pair.mus.values().back()) + 1;
            for (int p = 0; p < 20; ++p) {
                const Complex<X> z(lo + (hi - lo) * X(unit(rng)), X(im(rng)));
                const auto a = mgoth_eval(pair, z);
                const auto b = mgoth_via_m(weyl, theta, z);
                worst = std::max(worst, X(abs(a - b) / abs(b)));
            }
            const Complex<X> far(X(0), X(1e6));
            worst_far = std::max(worst_far, X(abs(mgoth_eval(pair, far) - Complex<X>(X(1)))));
            worst_far = std::max(worst_far, X(abs(mgoth_via_m(weyl, theta, far) - Complex<X>(X(1)))));
        } catch (const Error&) {
            ++errors;
        }
    }
    return {errors == 0 && worst <= X(1e-9) && worst_far < X(1e-4),
            "100 instances x 20 points, relative disagreement " + sci(worst) + " (<= 1e-9), |m(1e6 i) - 1| " +
                sci(worst_far) + " (< 1e-4), errors " + std::to_string(errors)};
}

Outcome tau_alpha() {
    auto rng = rng_for(6);
    X worst(0);
    int errors = 0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + i % 30;
        auto j = oracle::random_jacobi<X>(rng, n);
        if (i % 4 == 0) j = make_singular(j, i % n);
        const X theta = random_theta(rng);
        try {
            const auto tau = tau_weights(forward(j, theta), theta * theta);
            const auto alpha = normalizing_constants(j);
            for (std::size_t k = 0; k < tau.size(); ++k) worst = std::max(worst, oracle::relative(tau[k], 1 / alpha[k]));
        } catch (const Error&) {
            ++errors;
        }
    }
    return {errors == 0 && worst <= X(1e-9), "200 forward pairs (every fourth singular), worst relative error " +
                                                 sci(worst) + " (<= 1e-9), errors " + std::to_string(errors)};
}

Outcome zero_pipeline() {
    auto rng = rng_for(7);
    std::uniform_int_distribution<std::size_t> size(2, 11);
    X worst(0);
    int errors = 0;
    int violations = 0;
    int rejected = 0;
    const auto rejects = [&](const SpectrumPair<X>& pair, const ZeroCaseHint<X>& hint) {
        ++violations;
        try {
            (void)solve(InverseInput<X>{pair, hint});
        } catch (const Error& e) {
            rejected += e.code() == ErrorCode::BoundViolated;
        }
    };
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = size(rng);
        const auto j = make_singular(oracle::random_jacobi<X>(rng, n), std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
        X theta = random_theta(rng);
        while (abs(theta - 1) < X(0.05)) theta = random_theta(rng);
        try {
            const auto pair = forward(j, theta);
            const auto alpha = normalizing_constants(j);
            const X alpha0 = alpha[pair.lambdas.position_of(0)];
            for (const ZeroCaseHint<X>& hint : {ZeroCaseHint<X>(Q1Hint<X>{j.diagonal()[0]}),
                                                ZeroCaseHint<X>(Alpha0Hint<X>{alpha0}),
                                                ZeroCaseHint<X>(ThetaHint<X>{theta})}) {
                worst = std::max(worst, max_entry_error(solve(InverseInput<X>{pair, hint}).matrix, j));
            }

            // Hints placing theta^2 on the wrong side of P' = prod' mu/lambda.
            const X product = zero_case_product(pair);
            X shift_sum(0);
            for (int k : pair.lambdas.indices()) shift_sum += pair.mus.exact(k) - pair.lambdas.exact(k);
            const bool right = pair.shift == Shift::RightPositive;
            for (double f : right ? std::vector<double>{0.25, 0.9, 0.999} : std::vector<double>{1.001, 1.1, 4.0}) {
                const X bad = product * X(f);
                rejects(pair, ThetaHint<X>{sqrt(bad)});
                if (abs(bad - 1) > X(1e-6)) rejects(pair, Q1Hint<X>{shift_sum / (bad - 1)});
            }
            rejects(pair, Alpha0Hint<X>{X(0.5)});
            rejects(pair, Alpha0Hint<X>{X(1)});
        } catch (const Error&) {
            ++errors;
        }
    }
    return {errors == 0 && worst <= X(1e-7) && rejected == violations,
            "50 singular matrices x 3 hints, entry err " + sci(worst) + " (<= 1e-7), bound violations rejected " +
                std::to_string(rejected) + "/" + std::to_string(violations) + ", errors " + std::to_string(errors)};
}

Outcome admissibility() {
    auto rng = rng_for(8);
    int forward_pairs = 0;
    int admitted = 0;
    int flips = 0;
    int flips_rejected = 0;
    for (int i = 0; i < 200; ++i) {
        const auto j = oracle::random_jacobi<X>(rng, 2 + i % 39);
        const auto pair = forward(j, random_theta(rng));
        const std::vector<X> lambdas(pair.lambdas.values().begin(), pair.lambdas.values().end());
        const std::vector<X> mus(pair.mus.values().begin(), pair.mus.values().end());
        ++forward_pairs;
        admitted += admissible<X>(lambdas, mus).verdict == Verdict::Admissible;
        if (i % 4 != 0) continue;
        for (std::size_t k = 0; k < lambdas.size(); ++k) {
            std::vector<X> flipped = mus;
            flipped[k] = 2 * lambdas[k] - flipped[k];
            std::sort(flipped.begin(), flipped.end());
            ++flips;
            flips_rejected += admissible<X>(lambdas, flipped).verdict == Verdict::Rejected;
        }
    }

    std::uniform_real_distribution<double> node(-4, 4);
    std::uniform_real_distribution<double> weight(0.01, 1);
    std::bernoulli_distribution flip(0.3);
    std::bernoulli_distribution repeat(0.3);
    int agree = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 8;
        std::vector<double> nodes(n);
        for (auto& x : nodes) x = node(rng);
        if (repeat(rng)) nodes[n - 1] = nodes[0];
        std::sort(nodes.begin(), nodes.end());
        std::vector<double> weights(n);
        bool all_positive = true;
        for (auto& w : weights) {
            w = weight(rng);
            if (flip(rng)) {
                w = -w;
                all_positive = false;
            }
        }
        const bool distinct = std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
        agree += check_moments_and_hamburger<double>(nodes, weights, n - 1).positive_definite == (all_positive && distinct);
    }
    return {admitted == forward_pairs && flips_rejected == flips && agree == 200,
            "forward pairs admissible " + std::to_string(admitted) + "/" + std::to_string(forward_pairs) +
                ", gap flips rejected " + std::to_string(flips_rejected) + "/" + std::to_string(flips) +
                ", Hankel agreement " + std::to_string(agree) + "/200"};
}

MassSpringChain<double> random_chain(std::mt19937_64& rng, std::size_t n, bool free_end) {
    std::uniform_real_distribution<double> u(0.1, 10);
    std::vector<double> m(n);
    std::vector<double> k(n);
    for (auto& x : m) x = u(rng);
    for (auto& x : k) x = u(rng);
    return MassSpringChain<double>(std::move(m), std::move(k), free_end ? 0.0 : u(rng));
}

Outcome mass_spring() {
    auto rng = rng_for(9);
    double round = 0;
    double physical = 0;
    double ratios = 0;
    int errors = 0;
    for (int i = 0; i < 200; ++i) {
        const auto c = random_chain(rng, 2 + i % 20, i % 5 == 0);
        try {
            const auto j = chain_to_jacobi(c);
            const auto back = jacobi_to_chain(j, c.spring(1), c.masses()[0]);
            for (std::size_t p = 0; p < c.size(); ++p) {
                round = std::max({round, oracle::relative(back.masses()[p], c.masses()[p]),
                                  oracle::relative(back.springs()[p], c.springs()[p])});
            }
            const auto r = frequency_ratio_chain(j, c.spring(1) / c.masses()[0]);
            for (std::size_t p = 0; p < c.size(); ++p) {
                ratios = std::max(ratios, oracle::relative(r.ratios[p], back.springs()[p] / back.masses()[p]));
            }

            const double theta = std::uniform_real_distribution<double>(0.3, 3.0)(rng);
            std::vector<double> m(c.masses().begin(), c.masses().end());
            m[0] /= theta * theta;
            const auto lighter = chain_to_jacobi(
                MassSpringChain<double>(m, std::vector<double>(c.springs().begin(), c.springs().end()), c.terminal_spring()));
            const auto scaled = apply_theta(j, Theta<double>(theta));
            for (std::size_t p = 0; p < j.size(); ++p) {
                physical = std::max(physical, oracle::relative(scaled.diagonal()[p], lighter.diagonal()[p]));
                if (p + 1 < j.size()) {
                    physical = std::max(physical, oracle::relative(scaled.off_diagonal()[p], lighter.off_diagonal()[p]));
                }
            }
        } catch (const Error&) {
            ++errors;
        }
    }
    return {errors == 0 && round <= 1e-10 && physical <= 1e-12 && ratios <= 1e-10,
            "200 chains, round trip " + sci(round) + " (<= 1e-10), theta vs m1/theta^2 " + sci(physical) +
                " (<= 1e-12), ratio chain " + sci(ratios) + " (<= 1e-10), errors " + std::to_string(errors)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string quoted(const fs::path& p) {
    return "'" + p.string() + "'";
}

int exit_status(const std::string& command) {
    const int status = std::system((command + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_contract() {
    const fs::path fixtures = JACOBI_FIXTURES_DIR;
    const std::string cli = quoted(JACOBI_CLI_PATH);
    std::vector<std::string> problems;

    int files = 0;
    for (const auto& entry : fs::directory_iterator(fixtures)) {
        ++files;
        const std::string text = slurp(entry.path());
        if (serialize_problem(parse_problem<X>(text)) != text) problems.push_back(entry.path().filename().string());
        const std::string once = serialize_problem(parse_problem<double>(text));
        if (serialize_problem(parse_problem<double>(once)) != once) {
            problems.push_back(entry.path().filename().string() + " (double)");
        }
    }

    const fs::path dir = fs::temp_directory_path() / ("jacobi_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto expect = [&](const std::string& args, int code) {
        const int got = exit_status(cli + " " + args);
        if (got != code) problems.push_back("'" + args + "' exit " + std::to_string(got) + " != " + std::to_string(code));
    };
    const fs::path chain = fixtures / "uniform_chain.json";
    expect("direct " + quoted(chain) + " --theta 1.5 --out " + quoted(dir / "pair.json") + " --report " +
               quoted(dir / "report.json"),
           0);
    expect("verify " + quoted(dir / "pair.json"), 0);
    expect("inverse " + quoted(dir / "pair.json") + " --out " + quoted(dir / "matrix.json"), 0);
    expect("masses " + quoted(dir / "matrix.json") + " --k1 1 --m1 1 --out " + quoted(dir / "chain.json"), 0);
    try {
        const auto original = std::get<MassSpringChain<X>>(load_problem<X>(chain).payload);
        const auto rebuilt = std::get<MassSpringChain<X>>(load_problem<X>(dir / "chain.json").payload);
        X worst(0);
        for (std::size_t p = 0; p < original.size(); ++p) {
            worst = std::max({worst, oracle::relative(rebuilt.masses()[p], original.masses()[p]),
                              oracle::relative(rebuilt.springs()[p], original.springs()[p])});
        }
        worst = std::max(worst, oracle::relative(rebuilt.terminal_spring(), original.terminal_spring()));
        if (worst > X(1e-40)) problems.push_back("chain round trip error " + sci(worst));
    } catch (const std::exception& e) {
        problems.push_back(std::string("pipeline output unreadable: ") + e.what());
    }

    expect("verify " + quoted(fixtures / "swapped.json"), 2);
    expect("inverse " + quoted(fixtures / "zero_pair.json"), 2);
    expect("masses " + quoted(fixtures / "positive_diag.json") + " --k1 1 --m1 1", 2);
    expect("direct " + quoted(fixtures / "missing.json") + " --theta 2", 1);
    expect("direct " + quoted(fixtures / "uniform.json"), 1);
    expect("direct " + quoted(fixtures / "uniform.json") + " --theta -1", 1);
    expect("frobnicate", 1);
    const int tolerance_code = exit_status("JACOBI_TOLERANCE=abc " + cli + " direct " + quoted(fixtures / "uniform.json") + " --theta 2");
    if (tolerance_code != 1) problems.push_back("bad JACOBI_TOLERANCE exit " + std::to_string(tolerance_code));
    fs::remove_all(dir);

    std::string detail = std::to_string(files) + " fixtures byte-stable, pipeline direct -> verify -> inverse -> masses";
    for (const auto& p : problems) detail += "; " + p;
    return {problems.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"round-trip reconstruction", round_trip},
        {"interlacing and shift", interlacing},
        {"eigenvalue derivative", derivative},
        {"trace shift", trace},
        {"m-ratio dual evaluation", mgoth},
        {"tau equals 1/alpha", tau_alpha},
        {"zero-eigenvalue pipeline", zero_pipeline},
        {"admissibility", admissibility},
        {"mass-spring", mass_spring},
        {"cli contract", cli_contract},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("uncaught: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
