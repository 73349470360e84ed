// jacobi: direct and inverse spectral problems for Jacobi matrices under a
// first-mass perturbation, from the command line.

#include <algorithm>
#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using namespace jacobi::cli;

namespace {

struct BatchResult {
    int code;
    std::string out;
    std::string err;
};

std::vector<fs::path> batch_inputs(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

// Runs `one(input, out_path)` for every JSON file in `dir`, a few at a time,
// and replays their output in file order. The exit code is the worst one.
template <class One>
int run_batch(const fs::path& dir, const std::optional<fs::path>& out_dir, const std::string& suffix, One one) {
    if (!fs::is_directory(dir)) {
        std::cerr << "error: " << dir.string() << ": not a directory\n";
        return UsageOrIo;
    }
    if (out_dir) fs::create_directories(*out_dir);
    const auto inputs = batch_inputs(dir);
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<BatchResult> results(inputs.size());
    for (std::size_t start = 0; start < inputs.size(); start += width) {
        std::vector<std::future<BatchResult>> running;
        for (std::size_t i = start; i < std::min(inputs.size(), start + width); ++i) {
            running.push_back(std::async(std::launch::async, [&, i] {
                std::ostringstream out;
                std::ostringstream err;
                std::optional<fs::path> target;
                if (out_dir) target = *out_dir / (inputs[i].stem().string() + suffix + ".json");
                const int code = one(inputs[i], target, out, err);
                return BatchResult{code, out.str(), err.str()};
            }));
        }
        for (std::size_t k = 0; k < running.size(); ++k) results[start + k] = running[k].get();
    }
    int worst = Success;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        std::cout << results[i].out;
        std::istringstream lines(results[i].err);
        for (std::string line; std::getline(lines, line);) std::cerr << inputs[i].filename().string() << ": " << line << "\n";
        worst = std::max(worst, results[i].code);
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Direct and inverse spectral problems for Jacobi matrices with a perturbed first mass"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    if (const char* tol = std::getenv("JACOBI_TOLERANCE")) common.tolerance = tol;
    std::optional<fs::path> batch;
    app.add_option("--precision", common.precision, "Arithmetic: double or extended (100 digits)")
        ->check(CLI::IsMember({"double", "extended"}))
        ->capture_default_str();
    app.add_option("--batch", batch, "Process every .json file in this directory; --out names a directory")
        ->check(CLI::ExistingDirectory);

    const auto add_hints = [](CLI::App* cmd, HintFlags& hint) {
        auto* q1 = cmd->add_option("--q1", hint.q1, "Zero case: the entry q1 of J");
        auto* a0 = cmd->add_option("--alpha0", hint.alpha0, "Zero case: normalizing constant of the zero eigenvalue");
        auto* th = cmd->add_option("--theta", hint.theta, "Zero case: theta itself");
        q1->excludes(a0)->excludes(th);
        a0->excludes(th);
    };

    DirectArgs direct;
    auto* cmd_direct = app.add_subcommand("direct", "Spectra of J and J(theta) with identity checks");
    auto* direct_input = cmd_direct->add_option("input", direct.input, "matrix or chain file");
    cmd_direct->add_option("--theta", direct.theta, "Perturbation parameter theta > 0")->required();
    cmd_direct->add_option("--out", direct.out, "spectra_pair output (default: stdout)");
    cmd_direct->add_option("--report", direct.report, "JSON diagnostics output");
    cmd_direct->add_option("--emit-plot", direct.plot, "Columnar m-ratio and eigenvalue ladder data");

    InverseArgs inverse;
    auto* cmd_inverse = app.add_subcommand("inverse", "Recover theta and J from two spectra");
    auto* inverse_input = cmd_inverse->add_option("input", inverse.input, "spectra_pair file");
    add_hints(cmd_inverse, inverse.hint);
    cmd_inverse->add_option("--out", inverse.out, "matrix output (default: stdout)");
    cmd_inverse->add_option("--report", inverse.report, "JSON residuals output");

    VerifyArgs verify;
    auto* cmd_verify = app.add_subcommand("verify", "Run the admissibility gates on two spectra");
    auto* verify_input = cmd_verify->add_option("input", verify.input, "spectra_pair file");
    add_hints(cmd_verify, verify.hint);

    MassesArgs masses;
    auto* cmd_masses = app.add_subcommand("masses", "Mass-spring chain from a Jacobi matrix");
    auto* masses_input = cmd_masses->add_option("input", masses.input, "matrix file");
    auto* k1 = cmd_masses->add_option("--k1", masses.k1, "First spring constant");
    auto* m1 = cmd_masses->add_option("--m1", masses.m1, "First mass");
    auto* scan = cmd_masses->add_flag("--scan", masses.scan, "Scan admissible k1/m1 instead");
    cmd_masses->add_option("--grid", masses.grid, "Scan grid points")->capture_default_str()->needs(scan);
    cmd_masses->add_option("--out", masses.out, "chain or scan output (default: stdout)");
    k1->needs(m1);
    m1->needs(k1);
    scan->excludes(k1)->excludes(m1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Success : UsageOrIo;
    }

    const auto needs_input = [&](CLI::Option* input) {
        if (batch && input->count() > 0) {
            std::cerr << "error: give either an input file or --batch, not both\n";
            return false;
        }
        if (!batch && input->count() == 0) {
            std::cerr << "error: input file required\n";
            return false;
        }
        return true;
    };

    if (cmd_direct->parsed()) {
        if (!needs_input(direct_input)) return UsageOrIo;
        if (!batch) return run_direct(common, direct, std::cout, std::cerr);
        if (direct.report || direct.plot) {
            std::cerr << "error: --report and --emit-plot are per-file options\n";
            return UsageOrIo;
        }
        return run_batch(*batch, direct.out, ".pair", [&](const fs::path& in, auto target, auto& out, auto& err) {
            DirectArgs one = direct;
            one.input = in;
            one.out = target;
            return run_direct(common, one, out, err);
        });
    }
    if (cmd_inverse->parsed()) {
        if (!needs_input(inverse_input)) return UsageOrIo;
        if (!batch) return run_inverse(common, inverse, std::cout, std::cerr);
        return run_batch(*batch, inverse.out, ".matrix", [&](const fs::path& in, auto target, auto& out, auto& err) {
            InverseArgs one = inverse;
            one.input = in;
            one.out = target;
            one.report.reset();
            return run_inverse(common, one, out, err);
        });
    }
    if (cmd_verify->parsed()) {
        if (!needs_input(verify_input)) return UsageOrIo;
        if (!batch) return run_verify(common, verify, std::cout, std::cerr);
        return run_batch(*batch, std::nullopt, "", [&](const fs::path& in, auto, auto& out, auto& err) {
            VerifyArgs one = verify;
            one.input = in;
            out << "== " << in.filename().string() << "\n";
            return run_verify(common, one, out, err);
        });
    }
    if (!needs_input(masses_input)) return UsageOrIo;
    if (!batch) return run_masses(common, masses, std::cout, std::cerr);
    return run_batch(*batch, masses.out, masses.scan ? ".scan" : ".chain",
                     [&](const fs::path& in, auto target, auto& out, auto& err) {
                         MassesArgs one = masses;
                         one.input = in;
                         one.out = target;
                         return run_masses(common, one, out, err);
                     });
}
