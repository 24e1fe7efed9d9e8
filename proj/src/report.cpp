#include "cpnv/report.hpp"

#include <json.hpp>
#include <sstream>

#include "cpnv/basis.hpp"
#include "cpnv/obstruction.hpp"
#include "cpnv/product.hpp"
#include "cpnv/variational.hpp"

namespace cpnv {

namespace {

std::string show(const RatFn& f, const std::string& m_param) {
    if (m_param == "sym") return f.str();
    return rat_str(f.eval(std::stol(m_param)));
}

}  // namespace

std::map<std::string, std::string> closed_forms(const std::string& m_param, long n2) {
    std::map<std::string, std::string> out;
    BasisCoeffs h0 = solve_h0();
    static const char* names[kBasisDim] = {"h0.lam2_g", "h0.u2_g", "h0.du_dubar", "h0.u_hess_u",
                                           "h0.du_du"};
    for (int k = 0; k < kBasisDim; ++k) out[names[k]] = show(h0[k], m_param);

    UPoly f_tt = phi_tt(Params::cp_odd()).aux_scalars.at("f_tt");
    out["f_tt.u2"] = show(f_tt.coeff(2, 0), m_param);
    out["f_tt.lam2"] = show(f_tt.coeff(0, 1), m_param);

    ObstructionReport rep = total_obstruction();
    out["i1"] = show(rep.i1, m_param);
    out["i2"] = show(rep.i2, m_param);
    out["total"] = show(rep.total, m_param);

    PsiForms psi = psi_forms(n2);
    out["psi1.u2"] = show(psi.psi1_u2, m_param);
    out["psi1.v2"] = show(psi.psi1_v2, m_param);
    out["psi1.uv"] = show(psi.psi1_uv, m_param);
    out["psi2.u2"] = show(psi.psi2_u2, m_param);
    out["psi2.v2"] = show(psi.psi2_v2, m_param);
    out["psi2.uv"] = show(psi.psi2_uv, m_param);
    return out;
}

Report make_report(const std::string& suite, const std::string& m_param, long n2,
                   const SuiteParams& params, const std::string& format,
                   std::vector<CheckResult> results) {
    Report r;
    r.suite = suite;
    r.m_param = m_param;
    r.n2 = n2;
    r.samples = params.samples;
    r.seed = params.seed;
    r.fd_step = params.fd.step;
    r.format = format;
    r.results = std::move(results);
    r.closed_forms = closed_forms(m_param, n2);
    for (const CheckResult& c : r.results) (c.pass ? r.pass_count : r.fail_count) += 1;
    return r;
}

std::string to_json(const Report& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["params"]["suite"] = r.suite;
    j["params"]["m"] = r.m_param;
    j["params"]["n2"] = r.n2;
    j["config"]["samples"] = r.samples;
    j["config"]["seed"] = r.seed;
    j["config"]["fd_step"] = r.fd_step;
    j["config"]["format"] = r.format;
    j["results"] = nlohmann::json::array();
    for (const CheckResult& c : r.results) {
        nlohmann::json e;
        e["id"] = c.id;
        e["kind"] = kind_name(c.kind);
        e["status"] = c.pass ? "pass" : "fail";
        e["observed"] = c.observed;
        if (c.tolerance)
            e["tolerance"] = *c.tolerance;
        else
            e["tolerance"] = nullptr;
        if (c.seed)
            e["seed"] = *c.seed;
        else
            e["seed"] = nullptr;
        e["details"] = c.details;
        j["results"].push_back(e);
    }
    j["closed_forms"] = r.closed_forms;

    // Scalar-space elements as {u_power, lambda2_power, num_poly, den_poly}
    // records (always at symbolic m).
    auto upoly_records = [](const UPoly& p) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [k, v] : p.terms()) {
            nlohmann::json e;
            e["u_power"] = k.first;
            e["lambda2_power"] = k.second;
            e["num_poly"] = v.num().str();
            e["den_poly"] = v.den().str();
            arr.push_back(e);
        }
        return arr;
    };
    j["scalars"]["f_tt"] = upoly_records(phi_tt(Params::cp_odd()).aux_scalars.at("f_tt"));
    j["scalars"]["h0_trace"] = upoly_records(basis_trace(solve_h0()));

    j["summary"]["pass"] = r.pass_count;
    j["summary"]["fail"] = r.fail_count;
    return j.dump(2) + "\n";
}

namespace {

std::string csv_double(double v) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_csv(const Report& r) {
    std::ostringstream os;
    os << "id,kind,status,observed,tolerance,seed\n";
    for (const CheckResult& c : r.results) {
        os << c.id << "," << kind_name(c.kind) << "," << (c.pass ? "pass" : "fail") << ","
           << csv_double(c.observed) << ",";
        if (c.tolerance) os << csv_double(*c.tolerance);
        os << ",";
        if (c.seed) os << *c.seed;
        os << "\n";
    }
    return os.str();
}

std::string to_text(const Report& r) {
    std::ostringstream os;
    os << "suite " << r.suite << ", m = " << r.m_param << ", seed = " << r.seed << "\n";
    for (const CheckResult& c : r.results) {
        os << (c.pass ? "pass" : "FAIL") << "  [" << kind_name(c.kind) << "]  " << c.id;
        if (c.tolerance) os << "  (observed " << csv_double(c.observed) << " <= " << csv_double(*c.tolerance) << ")";
        if (!c.details.empty()) os << "  -- " << c.details;
        os << "\n";
    }
    os << "summary: " << r.pass_count << " passed, " << r.fail_count << " failed\n";
    return os.str();
}

}  // namespace cpnv
