// Command-line driver: classify symbols, verify commutation conditions,
// run domain counterexamples, and export truncated operator matrices.
//
// Reports are deterministic: fixed key order, %.17g floats, atomic writes.

#include <complex>
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fock/config.hpp"
#include "fock/counterexample.hpp"
#include "fock/growth.hpp"
#include "fock/jsonw.hpp"
#include "fock/operator.hpp"
#include "fock/parse.hpp"
#include "fock/verify.hpp"

namespace {

using fock::cplx;
using fock::JsonWriter;
using fock::RunConfig;

// A message already formatted for the terminal (printed verbatim, no prefix).
struct FormattedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse wrappers that convert position errors into ready-to-print caret
// diagnostics tied to the right input string.
fock::EntireSymbol parse_symbol_checked(const std::string& text, const fock::GaussWeight& gw) {
    try {
        return fock::parse_symbol(text, gw);
    } catch (const fock::ParseError& e) {
        throw FormattedError(fock::format_parse_error(text, e));
    }
}

cplx parse_complex_checked(const std::string& text) {
    try {
        return fock::parse_complex_literal(text);
    } catch (const fock::ParseError& e) {
        throw FormattedError(fock::format_parse_error(text, e));
    }
}

std::vector<cplx> parse_complex_list_checked(const std::string& text) {
    try {
        return fock::parse_complex_list(text);
    } catch (const fock::ParseError& e) {
        throw FormattedError(fock::format_parse_error(text, e));
    }
}

// ---------------------------------------------------------------------------
// shared flags, resolved defaults -> config file -> explicit flags
// ---------------------------------------------------------------------------

struct FlagSet {
    double r = 1.0;
    long N = 32;
    double tol = 1e-8;
    std::string grid;
    long pk_powers = 3;
    long radial_nodes = 40;
    long angles = 128;
    std::string format = "json";
    std::string out;
    std::string config_path;

    CLI::Option* o_r = nullptr;
    CLI::Option* o_N = nullptr;
    CLI::Option* o_tol = nullptr;
    CLI::Option* o_grid = nullptr;
    CLI::Option* o_pk = nullptr;
    CLI::Option* o_radial = nullptr;
    CLI::Option* o_angles = nullptr;
    CLI::Option* o_format = nullptr;
    CLI::Option* o_out = nullptr;
};

void add_shared_flags(CLI::App* sub, FlagSet& fs) {
    fs.o_r = sub->add_option("--r", fs.r, "Gaussian weight rate (positive)");
    fs.o_N = sub->add_option("--N", fs.N, "truncation degree");
    fs.o_tol = sub->add_option("--tol", fs.tol, "residual tolerance");
    fs.o_grid = sub->add_option("--grid", fs.grid, "kernel-parameter grid: comma-separated a+bi literals");
    fs.o_pk = sub->add_option("--pk-powers", fs.pk_powers, "monomial powers 0..J for the shifted-kernel family");
    fs.o_radial = sub->add_option("--radial-nodes", fs.radial_nodes, "quadrature radial nodes");
    fs.o_angles = sub->add_option("--angles", fs.angles, "quadrature angular nodes");
    fs.o_format = sub->add_option("--format", fs.format, "output format: json | csv");
    fs.o_out = sub->add_option("--out", fs.out, "output path (default stdout)");
    sub->add_option("--config", fs.config_path, "key = value config file; flags override");
}

RunConfig resolve_config(const FlagSet& fs) {
    RunConfig cfg = fock::default_config();
    if (!fs.config_path.empty()) fock::load_config_file(cfg, fs.config_path);
    if (fs.o_r->count()) cfg.r = fs.r;
    if (fs.o_N->count()) cfg.N = fs.N;
    if (fs.o_tol->count()) cfg.tol = fs.tol;
    if (fs.o_grid->count()) cfg.grid = parse_complex_list_checked(fs.grid);
    if (fs.o_pk->count()) cfg.pk_powers = fs.pk_powers;
    if (fs.o_radial->count()) cfg.radial_nodes = fs.radial_nodes;
    if (fs.o_angles->count()) cfg.angles = fs.angles;
    if (fs.o_format->count()) cfg.format = fs.format;
    if (fs.o_out->count()) cfg.out = fs.out;
    fock::validate_config(cfg);
    return cfg;
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.out.empty())
        std::cout << content;
    else
        fock::atomic_write_file(cfg.out, content);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string piece = text.substr(pos, comma - pos);
        if (piece.empty()) throw std::invalid_argument("empty entry in numeric list: '" + text + "'");
        std::size_t used = 0;
        out.push_back(std::stod(piece, &used));
        if (used != piece.size()) throw std::invalid_argument("bad numeric entry '" + piece + "'");
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return out;
}

// Operator token: a ladder name or a symbol expression (multiplication operator).
fock::TruncatedOperator operator_from_token(const std::string& token, const RunConfig& cfg) {
    const fock::GaussWeight gw = cfg.weight();
    if (token == "creation") return fock::creation_matrix(cfg.N, gw);
    if (token == "annihilation") return fock::annihilation_matrix(cfg.N, gw);
    if (token == "q") return fock::q_matrix(cfg.N, gw);
    if (token == "p") return fock::p_matrix(cfg.N, gw);
    if (token == "identity") return fock::identity_matrix(cfg.N, gw);
    return fock::mult_matrix(parse_symbol_checked(token, gw), cfg.N, gw);
}

// ---------------------------------------------------------------------------
// JSON / CSV renderers
// ---------------------------------------------------------------------------

void begin_report(JsonWriter& w, const char* command, const RunConfig& cfg) {
    w.begin_object();
    w.key("schema").integer(1);
    w.key("command").string(command);
    w.key("config");
    fock::write_config_json(w, cfg);
}

std::string classify_json(const RunConfig& cfg, const std::string& spec, const fock::GrowthReport& rep) {
    JsonWriter w;
    begin_report(w, "classify", cfg);
    w.key("symbol").string(spec);
    w.key("lambda_verdict").string(fock::membership_name(rep.lambda_verdict));
    w.key("fock_verdict").string(fock::membership_name(rep.fock_verdict));
    w.key("order_estimate").number(rep.order_estimate);
    w.key("type_estimate").number(rep.type_estimate);
    w.key("rule_used").string(rep.rule_used);
    w.key("depth").integer(rep.depth);
    w.end_object();
    return w.str() + "\n";
}

std::string classify_csv(const std::string& spec, const fock::GrowthReport& rep) {
    std::ostringstream os;
    os << "key,value\n";
    os << "symbol," << spec << "\n";
    os << "lambda_verdict," << fock::membership_name(rep.lambda_verdict) << "\n";
    os << "fock_verdict," << fock::membership_name(rep.fock_verdict) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", rep.order_estimate);
    os << "order_estimate," << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", rep.type_estimate);
    os << "type_estimate," << buf << "\n";
    os << "rule_used," << rep.rule_used << "\n";
    os << "depth," << rep.depth << "\n";
    return os.str();
}

void commutation_report_json(JsonWriter& w, const fock::CommutationReport& rep) {
    w.key("condition").string(rep.condition_id);
    w.key("r").number(rep.r);
    w.key("N").integer(rep.N);
    w.key("grid").string(rep.grid);
    w.key("tol").number(rep.tol);
    w.key("max_residual").number(rep.max_residual);
    w.key("truncation_tail").number(rep.truncation_tail);
    w.key("pass").boolean(rep.pass);
    w.key("details").string(rep.details);
    w.key("residuals").begin_array();
    for (const auto& p : rep.residuals) {
        w.begin_object();
        w.key("label").string(p.label);
        w.key("value").number(p.value);
        w.end_object();
    }
    w.end_array();
}

std::string verify_json(const RunConfig& cfg, const std::vector<std::string>& symbols, const std::string& A,
                        const std::string& B, const fock::CommutationReport& rep) {
    JsonWriter w;
    begin_report(w, "verify", cfg);
    w.key("symbols").begin_array();
    for (const auto& s : symbols) w.string(s);
    w.end_array();
    w.key("A").string(A);
    w.key("B").string(B);
    commutation_report_json(w, rep);
    w.end_object();
    return w.str() + "\n";
}

std::string verify_csv(const fock::CommutationReport& rep) {
    std::ostringstream os;
    char buf[64];
    os << "# condition " << rep.condition_id << " r " << rep.r << " N " << rep.N << " pass " << (rep.pass ? 1 : 0)
       << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", rep.max_residual);
    os << "# max_residual " << buf;
    std::snprintf(buf, sizeof buf, "%.17g", rep.truncation_tail);
    os << " truncation_tail " << buf << "\n";
    os << "label,residual\n";
    for (const auto& p : rep.residuals) {
        std::snprintf(buf, sizeof buf, "%.17g", p.value);
        os << p.label << "," << buf << "\n";
    }
    return os.str();
}

void diagnostic_json(JsonWriter& w, const fock::DivergenceDiagnostic& d) {
    w.begin_object();
    w.key("description").string(d.description);
    w.key("verdict").string(fock::verdict_name(d.verdict));
    w.key("model").string(fock::model_name(d.model.kind));
    w.key("parameter").number(d.model.parameter);
    w.key("tail_estimate").number(d.tail_estimate);
    w.key("checkpoints").begin_array();
    for (std::size_t i = 0; i < d.indices.size(); ++i) {
        w.begin_object();
        w.key("index").number(d.indices[i]);
        w.key("value").number(d.values[i]);
        if (i < d.terms.size()) w.key("term").number(d.terms[i]);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

void diagnostic_csv(std::ostringstream& os, const fock::DivergenceDiagnostic& d) {
    char buf[64];
    os << "# " << d.description << "\n";
    os << "# verdict " << fock::verdict_name(d.verdict) << " model " << fock::model_name(d.model.kind);
    std::snprintf(buf, sizeof buf, "%.17g", d.model.parameter);
    os << " parameter " << buf << "\n";
    os << "index,value\n";
    for (std::size_t i = 0; i < d.indices.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", d.indices[i]);
        os << buf << ",";
        std::snprintf(buf, sizeof buf, "%.17g", d.values[i]);
        os << buf << "\n";
    }
}

std::string matrix_json(const RunConfig& cfg, const std::string& kind, const std::vector<std::string>& symbols,
                        const fock::TruncatedOperator& T) {
    JsonWriter w;
    begin_report(w, "matrix", cfg);
    w.key("kind").string(kind);
    w.key("symbols").begin_array();
    for (const auto& s : symbols) w.string(s);
    w.end_array();
    w.key("provenance").string(T.provenance);
    w.key("N").integer(T.N);
    w.key("r").number(T.weight.r);
    w.key("exact_cols").integer(T.exact_cols());
    w.key("col_tail").begin_array();
    for (double t : T.col_tail) w.number(t);
    w.end_array();
    w.key("row_tail").begin_array();
    for (double t : T.row_tail) w.number(t);
    w.end_array();
    w.key("entries").begin_array();
    for (long i = 0; i <= T.N; ++i) {
        w.begin_array();
        for (long j = 0; j <= T.N; ++j) w.complex_value(T.mat(i, j));
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

// ---------------------------------------------------------------------------
// subcommand drivers
// ---------------------------------------------------------------------------

int run_classify(const RunConfig& cfg, const std::string& spec) {
    const fock::GaussWeight gw = cfg.weight();
    const fock::EntireSymbol phi = parse_symbol_checked(spec, gw);
    const fock::GrowthReport rep = fock::classify_growth(phi, gw);
    emit(cfg, cfg.format == "csv" ? classify_csv(spec, rep) : classify_json(cfg, spec, rep));
    if (rep.lambda_verdict == fock::Membership::BoundaryUnknown) return 2;
    return 0;
}

int run_verify(const RunConfig& cfg, const std::string& condition, std::vector<std::string> specs,
               const std::string& tokA, const std::string& tokB) {
    const fock::GaussWeight gw = cfg.weight();
    const double tol = cfg.tol;
    fock::CommutationReport rep;

    auto need_one_spec = [&]() {
        if (specs.size() != 1 && tokA.empty())
            throw std::invalid_argument("condition '" + condition + "' needs one symbol (or --A for " +
                                        "kernel-commute / derivative-commute)");
    };

    if (condition == "kernel-commute") {
        need_one_spec();
        const fock::TruncatedOperator A =
            tokA.empty() ? fock::mult_matrix(parse_symbol_checked(specs[0], gw), cfg.N, gw)
                         : operator_from_token(tokA, cfg);
        rep = fock::check_kernel_family_commutation(A, cfg.grid, cfg.grid, tol);
    } else if (condition == "z-commute") {
        if (specs.size() != 1) throw std::invalid_argument("z-commute needs exactly one symbol");
        const fock::TruncatedOperator A = fock::mult_matrix(parse_symbol_checked(specs[0], gw), cfg.N, gw);
        const fock::TruncatedOperator B = fock::creation_matrix(cfg.N, gw);
        const fock::TestFamily PK = fock::make_shifted_kernel_family(cfg.grid, cfg.pk_powers, cfg.N, gw);
        rep = fock::check_commute_rel(A, B, PK, tol, "z-commute");
        rep.details = "multiplication by the symbol against multiplication by z over the shifted-kernel family";
    } else if (condition == "adjoint-kernel") {
        if (specs.size() != 1) throw std::invalid_argument("adjoint-kernel needs exactly one symbol");
        std::vector<long> Ns;
        if (cfg.N / 4 >= 4) Ns.push_back(cfg.N / 4);
        if (cfg.N / 2 > (Ns.empty() ? 0 : Ns.back()) && cfg.N / 2 >= 4) Ns.push_back(cfg.N / 2);
        if (cfg.N > (Ns.empty() ? 0 : Ns.back())) Ns.push_back(cfg.N);
        rep = fock::check_adjoint_kernel_action(parse_symbol_checked(specs[0], gw), cfg.grid, Ns, gw, tol);
    } else if (condition == "derivative-commute") {
        need_one_spec();
        const fock::TruncatedOperator A =
            tokA.empty() ? fock::mult_matrix(parse_symbol_checked(specs[0], gw), cfg.N, gw)
                         : operator_from_token(tokA, cfg);
        rep = fock::check_derivative_commutation(A, cfg.grid, tol);
    } else if (condition == "qp") {
        if (specs.size() != 1) throw std::invalid_argument("qp needs exactly one symbol");
        rep = fock::check_qp_commutator_identities(parse_symbol_checked(specs[0], gw), cfg.N, gw, tol);
    } else if (condition == "harmonic") {
        if (specs.size() != 2)
            throw std::invalid_argument("harmonic needs two symbols: the analytic and conjugate parts");
        rep = fock::check_harmonic_commutation(parse_symbol_checked(specs[0], gw), parse_symbol_checked(specs[1], gw),
                                               cfg.grid, cfg.N, gw, tol);
    } else if (condition == "commute") {
        if (tokA.empty() || tokB.empty()) throw std::invalid_argument("commute needs --A and --B");
        const fock::TestFamily K = fock::make_kernel_family(cfg.grid, cfg.N, gw);
        rep = fock::check_commute_rel(operator_from_token(tokA, cfg), operator_from_token(tokB, cfg), K, tol,
                                      "commute");
        rep.details = "A=" + tokA + " B=" + tokB + " over the kernel family";
    } else {
        throw std::invalid_argument(
            "unknown condition '" + condition +
            "' (expected kernel-commute, z-commute, adjoint-kernel, derivative-commute, qp, harmonic, commute)");
    }

    emit(cfg, cfg.format == "csv" ? verify_csv(rep) : verify_json(cfg, specs, tokA, tokB, rep));
    return rep.pass ? 0 : 1;
}

struct CounterexampleParams {
    long M = 0;  // 0 = per-command default
    long k = 2;
    long j = 3;
    std::string w = "0.8+0i";
    double a = 0.5;
    std::string radii;
};

int run_counterexample(const RunConfig& cfg, const std::string& name, const CounterexampleParams& P) {
    const fock::GaussWeight gw = cfg.weight();
    JsonWriter w;
    begin_report(w, "counterexample", cfg);
    w.key("name").string(name);
    std::ostringstream csv;
    bool match = false;

    if (name == "borderline") {
        const long M = P.M > 0 ? P.M : 1000000L;
        const auto rep = fock::borderline_norms(gw, M);
        match = rep.norm_f.verdict == fock::Verdict::Converges && rep.norm_zf.verdict == fock::Verdict::Diverges;
        w.key("params").begin_object().key("M").integer(M).end_object();
        w.key("predicted").begin_array().string("Converges").string("Diverges").end_array();
        w.key("observed")
            .begin_array()
            .string(fock::verdict_name(rep.norm_f.verdict))
            .string(fock::verdict_name(rep.norm_zf.verdict))
            .end_array();
        w.key("match").boolean(match);
        w.key("diagnostics").begin_array();
        diagnostic_json(w, rep.norm_f);
        diagnostic_json(w, rep.norm_zf);
        w.end_array();
        diagnostic_csv(csv, rep.norm_f);
        diagnostic_csv(csv, rep.norm_zf);
    } else if (name == "shifted") {
        const long M = P.M > 0 ? P.M : 2000000L;
        const auto diag = fock::shifted_monomial_norms(P.k, P.j, gw, M);
        const bool predicted_in = P.j <= P.k;
        match = (diag.verdict == fock::Verdict::Converges) == predicted_in;
        w.key("params")
            .begin_object()
            .key("M")
            .integer(M)
            .key("k")
            .integer(P.k)
            .key("j")
            .integer(P.j)
            .end_object();
        w.key("predicted").string(predicted_in ? "Converges" : "Diverges");
        w.key("observed").string(fock::verdict_name(diag.verdict));
        w.key("match").boolean(match);
        w.key("diagnostics").begin_array();
        diagnostic_json(w, diag);
        w.end_array();
        diagnostic_csv(csv, diag);
    } else if (name == "gaussian") {
        const long M = P.M > 0 ? P.M : 4000;
        const cplx wpt = parse_complex_checked(P.w);
        const auto rep = fock::gaussian_domain_demo(wpt, P.a, gw, M);
        auto agrees = [](const fock::GaussianFactorEvidence& ev) {
            return (ev.membership == fock::Membership::In) == (ev.diag.verdict == fock::Verdict::Converges);
        };
        match = agrees(rep.factor1) && agrees(rep.factor2) && agrees(rep.whole);
        w.key("params")
            .begin_object()
            .key("M")
            .integer(M)
            .key("w")
            .complex_value(wpt)
            .key("a")
            .number(P.a)
            .end_object();
        w.key("factors").begin_array();
        const fock::GaussianFactorEvidence* evs[3] = {&rep.factor1, &rep.factor2, &rep.whole};
        const char* names[3] = {"exp(-a w z^2)", "exp((1-a) w z^2)", "exp(w z^2)"};
        for (int i = 0; i < 3; ++i) {
            w.begin_object();
            w.key("role").string(names[i]);
            w.key("c").complex_value(evs[i]->c);
            w.key("membership").string(fock::membership_name(evs[i]->membership));
            w.key("diagnostic");
            diagnostic_json(w, evs[i]->diag);
            w.end_object();
            diagnostic_csv(csv, evs[i]->diag);
        }
        w.end_array();
        w.key("admissible_interval")
            .begin_object()
            .key("lo")
            .number(rep.interval_lo)
            .key("hi")
            .number(rep.interval_hi)
            .key("nonempty")
            .boolean(rep.interval_nonempty)
            .end_object();
        w.key("r_general_form").boolean(rep.r_general_form);
        w.key("match").boolean(match);
    } else if (name == "sigma") {
        const std::vector<double> radii = P.radii.empty() ? std::vector<double>{2.0, 4.0, 8.0}
                                                          : parse_double_list(P.radii);
        const auto s = fock::make_lattice_sigma(gw);
        const auto rule = fock::make_quadrature(gw, int(cfg.radial_nodes), int(cfg.angles));
        const auto rep = fock::sigma_domain_collapse(s, radii, rule);
        match = rep.sigma_diag.verdict == fock::Verdict::Diverges &&
                rep.control_diag.verdict == fock::Verdict::Converges;
        w.key("params").begin_object().key("radii").begin_array();
        for (double R : radii) w.number(R);
        w.end_array().end_object();
        w.key("predicted").begin_array().string("Diverges").string("Converges").end_array();
        w.key("observed")
            .begin_array()
            .string(fock::verdict_name(rep.sigma_diag.verdict))
            .string(fock::verdict_name(rep.control_diag.verdict))
            .end_array();
        w.key("match").boolean(match);
        w.key("diagnostics").begin_array();
        diagnostic_json(w, rep.sigma_diag);
        diagnostic_json(w, rep.control_diag);
        w.end_array();
        diagnostic_csv(csv, rep.sigma_diag);
        diagnostic_csv(csv, rep.control_diag);
    } else if (name == "sigma-over-p") {
        const std::vector<double> radii = P.radii.empty() ? std::vector<double>{2.0, 4.0, 8.0, 16.0}
                                                          : parse_double_list(P.radii);
        const auto s = fock::make_lattice_sigma(gw);
        const auto rule = fock::make_quadrature(gw, int(cfg.radial_nodes), int(cfg.angles));
        const auto rep = fock::sigma_over_p_domain(s, P.k, P.j, radii, rule);
        const bool predicted_in = P.j <= P.k;
        match = (rep.diag.verdict == fock::Verdict::Converges) == predicted_in;
        w.key("params")
            .begin_object()
            .key("k")
            .integer(P.k)
            .key("j")
            .integer(P.j)
            .key("radii")
            .begin_array();
        for (double R : radii) w.number(R);
        w.end_array().end_object();
        w.key("zeros").begin_array();
        for (const cplx& z : rep.zeros) w.complex_value(z);
        w.end_array();
        w.key("predicted").string(predicted_in ? "Converges" : "Diverges");
        w.key("observed").string(fock::verdict_name(rep.diag.verdict));
        w.key("match").boolean(match);
        w.key("diagnostics").begin_array();
        diagnostic_json(w, rep.diag);
        w.end_array();
        diagnostic_csv(csv, rep.diag);
    } else {
        throw std::invalid_argument("unknown counterexample '" + name +
                                    "' (expected borderline, shifted, gaussian, sigma, sigma-over-p)");
    }

    w.end_object();
    emit(cfg, cfg.format == "csv" ? csv.str() : w.str() + "\n");
    return match ? 0 : 1;
}

int run_matrix(const RunConfig& cfg, const std::string& kind, const std::vector<std::string>& specs) {
    const fock::GaussWeight gw = cfg.weight();
    fock::TruncatedOperator T = [&]() {
        if (kind == "creation") return fock::creation_matrix(cfg.N, gw);
        if (kind == "annihilation") return fock::annihilation_matrix(cfg.N, gw);
        if (kind == "q") return fock::q_matrix(cfg.N, gw);
        if (kind == "p") return fock::p_matrix(cfg.N, gw);
        if (kind == "mult") {
            if (specs.size() != 1) throw std::invalid_argument("matrix mult needs exactly one symbol");
            return fock::mult_matrix(parse_symbol_checked(specs[0], gw), cfg.N, gw);
        }
        if (kind == "harmonic") {
            if (specs.size() != 2)
                throw std::invalid_argument("matrix harmonic needs two symbols (analytic, conjugate)");
            return fock::harmonic_operator(parse_symbol_checked(specs[0], gw), parse_symbol_checked(specs[1], gw),
                                           cfg.N, gw);
        }
        throw std::invalid_argument("unknown matrix kind '" + kind +
                                    "' (expected creation, annihilation, q, p, mult, harmonic)");
    }();

    if (cfg.format == "csv") {
        std::ostringstream os;
        fock::export_csv(T, os);
        emit(cfg, os.str());
    } else {
        emit(cfg, matrix_json(cfg, kind, specs, T));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated Bargmann-Fock calculator: symbol classification, commutation checks, "
                 "domain counterexamples, operator export"};
    app.require_subcommand(1);

    FlagSet fs_classify, fs_verify, fs_counter, fs_matrix;
    std::string classify_spec;
    std::string verify_condition, verify_A, verify_B;
    std::vector<std::string> verify_specs;
    std::string counter_name;
    CounterexampleParams cp;
    std::string matrix_kind;
    std::vector<std::string> matrix_specs;

    CLI::App* c_classify = app.add_subcommand("classify", "growth classification of a symbol");
    c_classify->add_option("spec", classify_spec, "symbol expression")->required();
    add_shared_flags(c_classify, fs_classify);

    CLI::App* c_verify = app.add_subcommand("verify", "commutation / adjoint condition checks");
    c_verify
        ->add_option("condition", verify_condition,
                     "kernel-commute | z-commute | adjoint-kernel | derivative-commute | qp | harmonic | commute")
        ->required();
    c_verify->add_option("spec", verify_specs, "symbol expression(s)");
    c_verify->add_option("--A", verify_A, "operator token: ladder name or symbol expression");
    c_verify->add_option("--B", verify_B, "operator token: ladder name or symbol expression");
    add_shared_flags(c_verify, fs_verify);

    CLI::App* c_counter = app.add_subcommand("counterexample", "domain counterexample demonstrations");
    c_counter->add_option("name", counter_name, "borderline | shifted | gaussian | sigma | sigma-over-p")
        ->required();
    c_counter->add_option("--M", cp.M, "term count (0 = per-command default)");
    c_counter->add_option("--k", cp.k, "shift / zero-count parameter");
    c_counter->add_option("--j", cp.j, "monomial power");
    c_counter->add_option("--w", cp.w, "Gaussian exponent as a+bi");
    c_counter->add_option("--a", cp.a, "Gaussian split parameter");
    c_counter->add_option("--radii", cp.radii, "comma-separated annulus radii");
    add_shared_flags(c_counter, fs_counter);

    CLI::App* c_matrix = app.add_subcommand("matrix", "export a truncated operator matrix");
    c_matrix->add_option("kind", matrix_kind, "creation | annihilation | q | p | mult | harmonic")->required();
    c_matrix->add_option("spec", matrix_specs, "symbol expression(s) for mult / harmonic");
    add_shared_flags(c_matrix, fs_matrix);

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(c_classify)) return run_classify(resolve_config(fs_classify), classify_spec);
        if (app.got_subcommand(c_verify))
            return run_verify(resolve_config(fs_verify), verify_condition, verify_specs, verify_A, verify_B);
        if (app.got_subcommand(c_counter)) return run_counterexample(resolve_config(fs_counter), counter_name, cp);
        if (app.got_subcommand(c_matrix)) return run_matrix(resolve_config(fs_matrix), matrix_kind, matrix_specs);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const fock::ParseError& e) {
        std::cerr << "error: " << e.what() << " (position " << e.position << ")\n";
        return 1;
    } catch (const FormattedError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const fock::EmptyWindowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
