#include "axireg/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axireg/grid.hpp"

namespace axireg {

bool ValidationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const WindowCheck& c) { return c.pass; });
}

std::vector<std::string> ValidationReport::violations() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (!c.pass) out.push_back(c.name);
    }
    return out;
}

void ValidationReport::add_open(const std::string& label, double value, double lower,
                                double upper) {
    const double margin = std::min(value - lower, upper - value);
    checks.push_back({label, lower < value && value < upper, value, lower, upper, margin});
}

void ValidationReport::add_identity(const std::string& label, double value, double target,
                                    double tol) {
    const double err = std::abs(value - target);
    checks.push_back({label, err <= tol, value, target, target, tol - err});
}

void ValidationReport::add_condition(const std::string& label, bool ok, double value) {
    checks.push_back({label, ok, value, 0.0, 0.0, ok ? 0.0 : -1.0});
}

double alpha_relation(double gamma, double mu, double a, double q) {
    return 2.0 * mu - 0.5 * gamma * (1.0 + mu) - 2.0 * (q - 1.0) / q * (1.0 - a);
}

double minimal_delta0(double eps) { return (1.0 - 2.0 * eps) / (1.0 - eps) * eps; }

CriterionParams params_from_exponents(double gamma, double q, double mu, double a, double delta0) {
    CriterionParams c;
    c.delta0 = delta0;
    c.gamma = gamma;
    c.q = q;
    c.p = (4.0 - gamma) * q / 2.0;
    c.mu = mu;
    c.a = a;
    c.alpha = alpha_relation(gamma, mu, a, q);
    c.kappa = -2.0 * (q - 1.0) / q * (1.0 - a);
    c.eps0 = c.kappa + delta0 * c.p / q;
    c.b = 1.0 - q * c.eps0 / 2.0;
    return c;
}

CriterionParams params_from_epsilon(double eps, double delta0) {
    if (!(eps > 0.0 && eps < 1.0 / 14.0)) {
        std::ostringstream os;
        os << "params_from_epsilon: eps = " << eps
           << " outside (0, 1/14) required by ((1-2eps)/(1-eps)) eps <= delta0 family";
        throw Error(os.str());
    }
    if (!(delta0 > 0.0 && delta0 < 1.0 / 3.0)) {
        throw Error("params_from_epsilon: delta0 must lie in (0, 1/3)");
    }
    const double dmin = minimal_delta0(eps);
    if (!(delta0 > dmin)) {
        std::ostringstream os;
        os.precision(17);
        os << "params_from_epsilon: condition ((1-2eps)/(1-eps)) eps < delta0 violated; "
              "delta0 must exceed "
           << dmin;
        throw Error(os.str());
    }

    CriterionParams c;
    c.eps = eps;
    c.delta0 = delta0;
    c.gamma = 2.0 * (1.0 - eps);
    c.q = 2.0 * (1.0 - eps);
    c.p = 2.0 * (1.0 - eps * eps);
    c.mu = (1.0 - eps) / (1.0 + eps);
    c.a = 1.0 - 2.0 * (1.0 - eps * eps) * eps;
    c.alpha = -2.0 * (1.0 - 2.0 * eps) * (1.0 + eps) * eps;
    c.kappa = -2.0 * (c.q - 1.0) / c.q * (1.0 - c.a);
    c.eps0 = c.kappa + delta0 * c.p / c.q;
    c.b = 1.0 - c.q * c.eps0 / 2.0;
    return c;
}

ValidationReport validate_prop_I3(const CriterionParams& c) {
    ValidationReport r{"prop_I3", {}};
    r.add_open("gamma in (0,3)", c.gamma, 0.0, 3.0);
    r.add_open("q in (2/(4-gamma),2)", c.q, 2.0 / (4.0 - c.gamma), 2.0);
    r.add_identity("p = (4-gamma)q/2", c.p, (4.0 - c.gamma) * c.q / 2.0);
    r.add_open("mu in (-1,1)", c.mu, -1.0, 1.0);
    r.add_open("a in (0,1)", c.a, 0.0, 1.0);
    r.add_identity("alpha relation", c.alpha, alpha_relation(c.gamma, c.mu, c.a, c.q));
    r.add_identity("[4-p-gamma] q = p (2-q)", (4.0 - c.p - c.gamma) * c.q, c.p * (2.0 - c.q));
    r.add_identity("q[2+2alpha-mu p+gamma] - 4(q-1)a = (p mu + 2)(2-q)",
                   c.q * (2.0 + 2.0 * c.alpha - c.mu * c.p + c.gamma) - 4.0 * (c.q - 1.0) * c.a,
                   (c.p * c.mu + 2.0) * (2.0 - c.q));
    return r;
}

ValidationReport validate_aq_window(double q, double alpha, double eps0) {
    ValidationReport r{"aq_window", {}};
    if (!(q > 1.0)) {
        r.add_condition("q in (1,inf)", false, q);
        return r;
    }
    r.add_open("alpha in (-2+eps0, eps0)", alpha, -2.0 + eps0, eps0);
    const double expo = -q * (alpha + 2.0 / q - eps0);
    r.add_open("-q(alpha+2/q-eps0) in (-2, 2(q-1))", expo, -2.0, 2.0 * (q - 1.0));
    return r;
}

ValidationReport validate_prop_I1(const CriterionParams& c, double delta0) {
    ValidationReport r{"prop_I1", {}};
    r.add_open("delta0 in (0,1/3)", delta0, 0.0, 1.0 / 3.0);
    r.add_open("gamma in (0,3)", c.gamma, 0.0, 3.0);
    r.add_open("q in (2/(4-gamma),2)", c.q, 2.0 / (4.0 - c.gamma), 2.0);
    const double a_lo =
        std::max(1.0 - (4.0 - c.gamma) * c.q * c.q / (4.0 * (c.q - 1.0)) * delta0, 0.0);
    r.add_open("a in (1-(4-gamma)q^2 delta/(4(q-1)),1) cap (0,1)", c.a, a_lo, 1.0);
    const double mu_lo = std::max(c.q * delta0 - 1.0, -1.0);
    const double mu_hi = std::min(c.q * delta0 + c.gamma / (4.0 - c.gamma), 1.0);
    r.add_open("mu in (q delta-1, q delta+gamma/(4-gamma)) cap (-1,1)", c.mu, mu_lo, mu_hi);
    return r;
}

ValidationReport validate_b_window(const CriterionParams& c) {
    ValidationReport r{"b_window", {}};
    r.add_open("b = 1 - q eps0/2 in (0,1)", c.b, 0.0, 1.0);
    return r;
}

ValidationReport validate_serrin(const SerrinCondition& k) {
    ValidationReport r{"serrin", {}};
    r.add_open("s in (3/2,inf)", k.s, 1.5, HUGE_VAL);
    r.add_open("w in (1,inf)", k.w, 1.0, HUGE_VAL);
    r.add_open("d in (-1,1)", k.d, -1.0, 1.0);
    r.add_identity("2/w + 3/s + d = 1", 2.0 / k.w + 3.0 / k.s + k.d, 1.0);
    r.add_open("delta1 > 0", k.delta1, 0.0, HUGE_VAL);
    if (r.pass()) {
        const SerrinDerived ab = derived_ab(k);
        r.add_open("a > 1", ab.a, 1.0, HUGE_VAL);
        r.add_open("b > 3", ab.b, 3.0, HUGE_VAL);
        r.add_identity("ab/(2(a-1)) = s", ab.a * ab.b / (2.0 * (ab.a - 1.0)), k.s);
        r.add_identity("b(2-a)/(2(a-1)) = d s", ab.b * (2.0 - ab.a) / (2.0 * (ab.a - 1.0)),
                       k.d * k.s);
        r.add_identity("2/(b-3) = w/s", 2.0 / (ab.b - 3.0), k.w / k.s);
    }
    return r;
}

SerrinDerived derived_ab(const SerrinCondition& k) {
    return SerrinDerived{2.0 / (2.0 - (2.0 / k.w + 3.0 / k.s)), 2.0 * k.s / k.w + 3.0};
}

ScalingGap check_serrin_scaling_gap(const CriterionParams& c) {
    ScalingGap g;
    g.value = 3.0 / c.q - 1.0 - c.alpha;
    g.bound = 0.5 + 7.0 * c.eps;
    g.pass = g.value <= g.bound && g.bound < 1.0;
    return g;
}

std::vector<ValidationReport> validate_all(const CriterionParams& c,
                                           const std::optional<SerrinCondition>& cond) {
    std::vector<ValidationReport> out;
    out.push_back(validate_prop_I3(c));
    out.push_back(validate_prop_I1(c, c.delta0));
    out.push_back(validate_aq_window(c.q, c.alpha, c.eps0));
    // Weighted estimate without extra weight: eps0 = 2/q.
    ValidationReport al = validate_aq_window(c.q, c.alpha, 2.0 / c.q);
    al.name = "aq_window_unweighted";
    out.push_back(std::move(al));
    const ScalingGap gap = check_serrin_scaling_gap(c);
    ValidationReport g{"scaling_gap", {}};
    g.checks.push_back({"3/q - 1 - alpha <= 1/2 + 7 eps < 1", gap.pass, gap.value, 0.0, gap.bound,
                        std::min(gap.bound - gap.value, 1.0 - gap.bound)});
    out.push_back(std::move(g));
    if (cond) out.push_back(validate_serrin(*cond));
    return out;
}

nlohmann::json to_json(const CriterionParams& c) {
    return nlohmann::json{{"eps", c.eps},     {"delta0", c.delta0}, {"gamma", c.gamma},
                          {"q", c.q},         {"p", c.p},           {"mu", c.mu},
                          {"a", c.a},         {"alpha", c.alpha},   {"kappa", c.kappa},
                          {"eps0", c.eps0},   {"b", c.b}};
}

nlohmann::json to_json(const SerrinCondition& k) {
    return nlohmann::json{{"s", k.s}, {"w", k.w}, {"d", k.d}, {"delta1", k.delta1}};
}

nlohmann::json to_json(const ValidationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"value", c.value},
                          {"lower", std::isfinite(c.lower) ? nlohmann::json(c.lower) : nlohmann::json("inf")},
                          {"upper", std::isfinite(c.upper) ? nlohmann::json(c.upper) : nlohmann::json("inf")},
                          {"margin", std::isfinite(c.margin) ? nlohmann::json(c.margin) : nlohmann::json("inf")}});
    }
    return nlohmann::json{{"name", r.name}, {"pass", r.pass()}, {"checks", checks}};
}

}  // namespace axireg
