// Command-line driver: run verification suites and print the exact closed
// forms of the headline objects.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cpnv/basis.hpp"
#include "cpnv/obstruction.hpp"
#include "cpnv/product.hpp"
#include "cpnv/report.hpp"
#include "cpnv/variational.hpp"

namespace {

using namespace cpnv;

int parse_m(const std::string& m_param, std::optional<long>& m_out, std::string& err) {
    if (m_param == "sym") {
        m_out = std::nullopt;
        return 0;
    }
    try {
        size_t pos = 0;
        long v = std::stol(m_param, &pos);
        if (pos != m_param.size()) throw std::invalid_argument("trailing characters");
        if (v < 2) {
            err = "m must be >= 2: the m = 1 space is the round two-sphere, whose rigidity is classical "
                  "and outside this tool's scope";
            return 2;
        }
        m_out = v;
        return 0;
    } catch (const std::exception&) {
        err = "invalid --m value '" + m_param + "' (expected an integer >= 2 or 'sym')";
        return 2;
    }
}

int cmd_verify(const std::string& suite, const std::string& m_param, long n2, long samples,
               uint64_t seed, double fd_step, const std::string& out_path, const std::string& format) {
    std::optional<long> m;
    std::string err;
    if (int rc = parse_m(m_param, m, err)) {
        std::cerr << "error: " << err << "\n";
        return rc;
    }
    if (samples < 100) {
        std::cerr << "error: --samples must be at least 100\n";
        return 2;
    }

    SuiteParams params;
    params.m = m;
    params.samples = samples;
    params.seed = seed;
    params.fd.step = fd_step;
    try {
        params.fd.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<CheckResult> results;
    try {
        results = (suite == "all") ? run_all(params) : run_suite(suite, params);
    } catch (const UnknownSuiteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "available suites:";
        for (const std::string& s : suite_names()) std::cerr << " " << s;
        std::cerr << " all\n";
        return 2;
    }

    Report report = make_report(suite, m_param, n2, params, format, std::move(results));
    std::string payload;
    if (format == "json")
        payload = to_json(report);
    else if (format == "csv")
        payload = to_csv(report);
    else
        payload = to_text(report);

    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write to " << out_path << "\n";
            return 2;
        }
        f << payload;
    }
    std::cerr << "checks: " << report.pass_count << " passed, " << report.fail_count << " failed\n";
    return report.fail_count == 0 ? 0 : 1;
}

void print_matrix(const RatMatrix& a, const std::string& m_param) {
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const RatFn& f = a.at(i, j);
            std::string s = (m_param == "sym") ? f.str() : rat_str(f.eval(std::stol(m_param)));
            std::cout << s << (j + 1 < a.cols() ? "  " : "");
        }
        std::cout << "\n";
    }
}

int cmd_show(const std::string& object, const std::string& m_param, long n2) {
    std::optional<long> m;
    std::string err;
    if (int rc = parse_m(m_param, m, err)) {
        std::cerr << "error: " << err << "\n";
        return rc;
    }

    auto show = [&](const RatFn& f) {
        return (m_param == "sym") ? f.str() : rat_str(f.eval(*m));
    };

    if (object == "h0") {
        BasisCoeffs h0 = solve_h0();
        static const char* names[kBasisDim] = {"lam^2 g", "u^2 g", "du dubar + dubar du", "u hess u",
                                               "du du + dubar dubar"};
        for (int k = 0; k < kBasisDim; ++k)
            std::cout << names[k] << ": " << show(h0[k]) << "\n";
    } else if (object == "ftt") {
        UPoly f_tt = phi_tt(Params::cp_odd()).aux_scalars.at("f_tt");
        std::cout << "u^2: " << show(f_tt.coeff(2, 0)) << "\n";
        std::cout << "lam^2: " << show(f_tt.coeff(0, 1)) << "\n";
    } else if (object == "l-matrix") {
        print_matrix(l_matrix(), m_param);
    } else if (object == "l-inverse") {
        print_matrix(l_inverse(), m_param);
    } else if (object == "i1") {
        std::cout << show(compute_i1()) << "\n";
    } else if (object == "i2") {
        std::cout << show(compute_i2()) << "\n";
    } else if (object == "total") {
        std::cout << show(total_obstruction().total) << "\n";
    } else if (object == "psi") {
        PsiForms p = psi_forms(n2);
        std::cout << "psi1: u^2: " << show(p.psi1_u2) << ", v^2: " << show(p.psi1_v2)
                  << ", uv: " << show(p.psi1_uv) << "\n";
        std::cout << "psi2: u^2: " << show(p.psi2_u2) << ", v^2: " << show(p.psi2_v2)
                  << ", uv: " << show(p.psi2_uv) << "\n";
    } else {
        std::cerr << "error: unknown object '" << object
                  << "' (expected h0|ftt|l-matrix|l-inverse|i1|i2|total|psi)\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and numeric verification of the rigidity computations on complex projective "
                 "space"};
    app.require_subcommand(1);

    std::string suite = "all", m_param = "2", out_path, format = "json", object;
    long samples = 100000, n2 = 1;
    uint64_t seed = 7;
    double fd_step = 1e-4;

    CLI::App* verify = app.add_subcommand("verify", "run verification suites and emit a report");
    verify->add_option("--suite", suite, "suite id or 'all'")->capture_default_str();
    verify->add_option("--m", m_param, "integer parameter (>= 2) or 'sym'")->capture_default_str();
    verify->add_option("--n2", n2, "second-factor dimension for the product forms")
        ->capture_default_str();
    verify->add_option("--samples", samples, "Monte Carlo sample count")->capture_default_str();
    verify->add_option("--seed", seed, "master random seed")->capture_default_str();
    verify->add_option("--fd-step", fd_step, "finite-difference step")->capture_default_str();
    verify->add_option("--out", out_path, "write the report to this path (default: stdout)");
    verify->add_option("--format", format, "json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();

    CLI::App* show = app.add_subcommand("show", "print exact closed forms");
    show->add_option("--object", object, "h0|ftt|l-matrix|l-inverse|i1|i2|total|psi")->required();
    show->add_option("--m", m_param, "integer parameter (>= 2) or 'sym'")->capture_default_str();
    show->add_option("--n2", n2, "second-factor dimension for psi")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed())
            return cmd_verify(suite, m_param, n2, samples, seed, fd_step, out_path, format);
        return cmd_show(object, m_param, n2);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
