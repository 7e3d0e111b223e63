#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padiq/adele.hpp"
#include "padiq/binomial.hpp"
#include "padiq/hensel.hpp"
#include "padiq/padic.hpp"
#include "padiq/phi.hpp"
#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/series.hpp"
#include "padiq/valuation.hpp"

using json = nlohmann::ordered_json;
using namespace padiq;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long long max_depth_from_env() {
    if (const char* s = std::getenv("PADIC_MAX_DEPTH")) {
        try {
            long long v = std::stoll(s);
            if (v >= 1) return v;
        } catch (...) {}
        throw usage_error("PADIC_MAX_DEPTH must be a positive integer");
    }
    return kDefaultMaxDepth;
}

Place parse_place(const std::string& s) {
    if (s == "inf") return Place::archimedean();
    try {
        return Place::finite(Prime(std::stoull(s)));
    } catch (const std::domain_error& e) {
        throw usage_error(e.what());
    } catch (...) {
        throw usage_error("bad place '" + s + "' (expected a prime or 'inf')");
    }
}

Rational parse_rational_arg(const std::string& s) {
    try {
        return parse_rational(s);
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// binomial:b | phi:gamma,delta,eps,q,N | hyp:a,b,c | path to a coefficient file
PowerSeries parse_family(const std::string& spec) {
    auto colon = spec.find(':');
    std::string tag = colon == std::string::npos ? "" : spec.substr(0, colon);
    if (tag == "binomial") {
        return binomial_series(parse_rational_arg(spec.substr(colon + 1)));
    }
    if (tag == "phi") {
        auto parts = split(spec.substr(colon + 1), ',');
        if (parts.size() != 5)
            throw usage_error("phi family needs gamma,delta,eps,q,N");
        try {
            return phi_series(PhiSpec::with_multiplier(
                std::stoll(parts[0]), std::stoll(parts[1]), std::stoi(parts[2]),
                parse_rational(parts[3]), std::stoll(parts[4])));
        } catch (const std::invalid_argument& e) {
            throw usage_error(e.what());
        }
    }
    if (tag == "hyp") {
        auto parts = split(spec.substr(colon + 1), ',');
        if (parts.size() != 3) throw usage_error("hyp family needs a,b,c");
        return hypergeometric(parse_rational_arg(parts[0]), parse_rational_arg(parts[1]),
                              parse_rational_arg(parts[2]));
    }
    std::ifstream in(spec);
    if (!in) throw usage_error("unknown family or unreadable rule file '" + spec + "'");
    std::vector<Rational> coeffs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        coeffs.push_back(parse_rational_arg(line));
    }
    return from_coefficients(std::move(coeffs));
}

json radius_json(const RadiusEstimate& est) {
    json j;
    j["place"] = est.place.str();
    j["kind"] = est.kind == RadiusEstimate::Exact ? "exact" : "empirical";
    j["method"] = est.method_str();
    if (est.place.is_finite()) {
        j["exponent"] = est.value.str();  // radius = p^(-exponent)
        if (est.value.kind == Extended::MinusInf)
            j["radius"] = "+inf";
        else if (est.value.kind == Extended::PlusInf)
            j["radius"] = "0";
        else
            j["radius"] = std::to_string(est.place.prime().value()) + "^-(" +
                          to_string(est.value.value) + ")";
    } else {
        j["radius"] = est.value.str();
    }
    return j;
}

std::string decimal_approx(const Rational& x, int digits = 12) {
    Integer scale = pow(Integer(10), static_cast<unsigned long>(digits));
    Rational scaled = x * scale;
    Integer n = num(scaled) / den(scaled);
    std::ostringstream out;
    if (x < 0 && n == 0) out << "-";
    out << Integer(n / scale).str() << ".";
    Integer frac = n < 0 ? Integer(-n % scale) : Integer(n % scale);
    std::string fs = frac.str();
    out << std::string(digits - fs.size(), '0') << fs;
    return out.str();
}

int emit(const json& payload, const std::vector<std::string>& diagnostics) {
    json doc;
    doc["status"] = "ok";
    doc["payload"] = payload;
    std::cout << doc.dump(2) << "\n";
    for (const auto& d : diagnostics) std::cerr << d << "\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"exact p-adic arithmetic, series convergence, and adele checks"};
    app.require_subcommand(1);

    std::string place_str, value_str, family_str, x_str, q_str, input_path, apply_str;
    long long N = 2, u = 0, v = 1, prec = 16, height = 10, gamma = 1, delta = 0, depth = 20;
    std::string tol_str;
    bool idele_flag = false;

    auto* c_norm = app.add_subcommand("norm", "absolute value at a place");
    c_norm->add_option("-p", place_str, "prime or 'inf'")->required();
    c_norm->add_option("value", value_str, "rational")->required();

    auto* c_ord = app.add_subcommand("ord", "p-adic valuation");
    c_ord->add_option("-p", place_str, "prime")->required();
    c_ord->add_option("value", value_str, "rational")->required();

    auto* c_radius = app.add_subcommand("radius", "radius of convergence at a place");
    c_radius->add_option("--family", family_str, "binomial:b | phi:g,d,e,q,N | hyp:a,b,c | file")
        ->required();
    c_radius->add_option("-p", place_str, "prime or 'inf'")->required();

    auto* c_eval = app.add_subcommand("eval", "evaluate a series at a rational point");
    c_eval->add_option("--family", family_str)->required();
    c_eval->add_option("-x", x_str, "rational argument")->required();
    c_eval->add_option("--place", place_str, "prime or 'inf'")->required();
    c_eval->add_option("--prec", prec, "absolute p-adic precision");
    c_eval->add_option("--tol", tol_str, "archimedean tolerance (rational)");

    auto* c_points = app.add_subcommand("points", "rationals with |x|_oo < 1 and |x|_p < 1");
    c_points->add_option("-p", place_str, "prime")->required();
    c_points->add_option("--height", height, "denominator bound")->required();

    auto* c_47 = app.add_subcommand("verify-thm47", "rational binomial sum vs Hensel oracle");
    c_47->add_option("-p", place_str, "prime")->required();
    c_47->add_option("-N", N)->required();
    c_47->add_option("-u", u)->required();
    c_47->add_option("-v", v)->required();
    c_47->add_option("--prec", prec);

    auto* c_sf = app.add_subcommand("verify-sumform", "telescoping summation formula");
    c_sf->add_option("--gamma", gamma)->required();
    c_sf->add_option("--delta", delta)->required();
    c_sf->add_option("--q", q_str)->required();
    c_sf->add_option("-N,--N", N)->required();
    c_sf->add_option("-x", x_str)->required();
    c_sf->add_option("--place", place_str)->required();
    c_sf->add_option("--depth", depth);

    auto* c_adele = app.add_subcommand("adele-check", "parse, apply a series, test idele");
    c_adele->add_option("--input", input_path, "adele file")->required();
    c_adele->add_option("--apply", apply_str, "family to apply componentwise");
    c_adele->add_flag("--idele", idele_flag, "run the idele predicate");
    c_adele->add_option("--prec", prec);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    long long max_depth = max_depth_from_env();
    std::vector<std::string> diagnostics;
    json payload;

    if (c_norm->parsed()) {
        Place place = parse_place(place_str);
        payload["norm"] = to_string(norm_at(place, parse_rational_arg(value_str)));
    } else if (c_ord->parsed()) {
        Place place = parse_place(place_str);
        if (!place.is_finite()) throw usage_error("ord needs a finite place");
        payload["ord"] = ord(place.prime(), parse_rational_arg(value_str)).str();
    } else if (c_radius->parsed()) {
        PowerSeries f = parse_family(family_str);
        payload = radius_json(radius(f, parse_place(place_str)));
        payload["family"] = f.family();
    } else if (c_eval->parsed()) {
        PowerSeries f = parse_family(family_str);
        Place place = parse_place(place_str);
        Rational x = parse_rational_arg(x_str);
        payload["family"] = f.family();
        payload["x"] = to_string(x);
        payload["place"] = place.str();
        if (place.is_finite()) {
            PadicNumber y = evaluate_padic(f, x, place.prime(), prec, max_depth);
            payload["value"] = to_string(y);
        } else {
            Rational tol = tol_str.empty() ? kDefaultTolerance : parse_rational_arg(tol_str);
            Rational y = evaluate_real(f, x, tol, max_depth);
            payload["value"] = to_string(y);
            payload["value_approx"] = decimal_approx(y);
        }
    } else if (c_points->parsed()) {
        Place place = parse_place(place_str);
        if (!place.is_finite()) throw usage_error("points needs a finite place");
        json arr = json::array();
        for (const auto& pt : rational_points(place.prime(), height))
            arr.push_back(to_string(pt.value()));
        payload["points"] = arr;
    } else if (c_47->parsed()) {
        Place place = parse_place(place_str);
        if (!place.is_finite()) throw usage_error("verify-thm47 needs a finite place");
        RationalSumReport rep = rational_sum_verify(N, u, v, place.prime(), prec);
        payload["series_value"] = to_string(rep.series_value);
        payload["hensel_value"] = to_string(rep.hensel_value);
        payload["hensel_agrees"] = rep.oracle_agrees;
        payload["relation"] = std::string("equals ") + rep.relation;
        payload["equals_uv_pow_N"] = rep.equals_uv_pow;
        if (rep.has_real_branch) {
            payload["real_value"] = to_string(rep.real_value);
            payload["real_value_approx"] = decimal_approx(rep.real_value);
            payload["real_relation"] =
                rep.real_equals_uv ? "u/v" : (rep.real_equals_minus_uv ? "-u/v" : "other");
        }
    } else if (c_sf->parsed()) {
        PhiSpec spec =
            PhiSpec::with_multiplier(gamma, delta, 1, parse_rational_arg(q_str), N);
        Place place = parse_place(place_str);
        SummationVerdict verdict =
            summation_verify(spec, parse_rational_arg(x_str), place, depth);
        payload["family"] = spec.str();
        payload["status"] = ConvergenceVerdict{verdict.status, 0, ""}.status_str();
        payload["depth"] = verdict.depth;
        payload["sum"] = to_string(verdict.value);
        payload["identity_exact"] = verdict.identity_exact;
        if (place.is_finite())
            payload["remainder_ord"] = to_string(verdict.remainder_ord);
        else
            payload["remainder_abs_approx"] = decimal_approx(verdict.remainder_abs);
        payload["witness"] = verdict.witness;
    } else if (c_adele->parsed()) {
        std::ifstream in(input_path);
        if (!in) throw usage_error("cannot open adele file '" + input_path + "'");
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        Adele a = parse_adele(text);
        payload["adele"] = to_string(a);
        if (!apply_str.empty()) {
            PowerSeries f = parse_family(apply_str);
            a = apply_series(f, a, prec);
            payload["applied_family"] = f.family();
            payload["result"] = to_string(a);
        }
        if (idele_flag) {
            IdeleReport rep = is_idele(a);
            payload["is_idele"] = rep.is_idele;
            json arr = json::array();
            for (const auto& [pl, why] : rep.violations)
                arr.push_back(json{{"place", pl}, {"reason", why}});
            payload["violations"] = arr;
        }
    }
    return emit(payload, diagnostics);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const usage_error& e) {
        json doc{{"status", "error"}, {"error", e.what()}};
        std::cout << doc.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json doc{{"status", "error"}, {"error", e.what()}};
        std::cout << doc.dump(2) << "\n";
        return 1;
    }
}
