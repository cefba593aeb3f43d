"""Regenerate src/sflowkit/fixtures from closed-form oracles.

Nothing here calls the engines: crossing instants come from the constant
coefficient condition det(M - lambda_k I) = 0 with M = [[b, c], [a, b]]
(equivalently (b - lambda_k)^2 = a c), and spectral flows from the block
signature count worked out by hand for each family.
"""
import json
import math
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "src" / "sflowkit" / "fixtures"
PI = math.pi

BLOCKS = "closed-form 2x2 blocks: i(A_1) - i(A_0) counted by hand"
ROOTS = "roots of (b - lambda_k)^2 = a c for the linear path, lambda_k = k^2"
XEQ = "cross-oracle equality (no closed form asserted)"


def problem(name, a, b, c, lam=(0.0, 1.0), domain=None, G=None, description=""):
    doc = {"schema_version": 1, "name": name}
    if description:
        doc["description"] = description
    doc["domain"] = domain or {"type": "interval", "length": PI}
    doc["coefficients"] = {"a": a, "b": b, "c": c}
    if G is not None:
        doc["nonlinearity"] = {"G": G}
    doc["lambda_range"] = list(lam)
    return doc


def chk(field, equals, prov, oracle=None, tol=None):
    d = {"field": field, "equals": equals, "provenance": prov}
    if oracle:
        d["oracle"] = oracle
    if tol is not None:
        d["tol"] = tol
    return d


def same(field, other, oracle=XEQ):
    return {"field": field, "equals_field": other, "provenance": "DERIVED", "oracle": oracle}


def sflow_checks(value, prov="DERIVED", oracle=BLOCKS, methods=("index_formula", "galerkin", "crossings")):
    return [chk(f"spectral_flow.{m}", value, prov, oracle) for m in methods]


def crossing_checks(lams, local=None, dims=None, oracle=ROOTS):
    out = [chk("crossings[*].lambda0", lams, "DERIVED", oracle, 1e-6)]
    if local is not None:
        out.append(chk("crossings[*].local_sflow", local, "DERIVED", "sign of the lambda-derivative of the vanishing block entry"))
    if dims is not None:
        out.append(chk("crossings[*].kernel_dim", dims, "DERIVED", "kernel dimension of the singular block"))
    return out


F = {}

F["zero"] = (problem("zero", "0", "0", "0"), [
    *sflow_checks(0, "TRIVIAL", None), chk("crossings", [], "TRIVIAL"),
    chk("index.i_A0.doubled", 0, "TRIVIAL"), chk("index.i_A1.doubled", 0, "TRIVIAL"),
    chk("certificate.verdict", "inconclusive", "TRIVIAL"),
    chk("count_bound.gamma", 0, "TRIVIAL"), chk("count_bound.min_bifurcations", 0, "TRIVIAL")])

F["constant_invertible"] = (problem("constant_invertible", "2", "0", "2"), [
    *sflow_checks(0, "TRIVIAL", None), chk("crossings", [], "TRIVIAL")])

F["szulkin_5I"] = (problem("szulkin_5I", "5*lambda", "0", "5*lambda"), [
    *sflow_checks(-2), *crossing_checks([0.2, 0.8], [-1, -1], [1, 1]),
    chk("index.i_A0.doubled", 0, "DERIVED", BLOCKS), chk("index.i_A1.doubled", -4, "DERIVED", BLOCKS),
    chk("crossings[*].form", [[[-5.0]], [[-5.0]]], "DERIVED",
        "-int 5 (u^2 + v^2) for the unit-L2 kernel (sin x, sin x)/sqrt(pi)", 1e-6),
    chk("certificate.verdict", "bifurcation_exists", "DERIVED", "beta1=-5 < -lambda_k < alpha0=0 for k=1,2"),
    chk("certificate.direction", "negative", "DERIVED", "condition (ii)"),
    chk("certificate.witnesses[*].k", [1, 2], "DERIVED", "k^2 < 5"),
    chk("count_bound.gamma", 2, "DERIVED", "Gamma(0,-5) = #{k^2 < 5}"),
    chk("count_bound.min_bifurcations", 1, "DERIVED", "ceil(2/2)")])

F["szulkin_minus5I"] = (problem("szulkin_minus5I", "-5*lambda", "0", "-5*lambda"), [
    *sflow_checks(2), *crossing_checks([0.2, 0.8], [1, 1], [1, 1]),
    chk("certificate.verdict", "bifurcation_exists", "DERIVED", "beta0=0 < lambda_k < alpha1=5 for k=1,2"),
    chk("certificate.direction", "positive", "DERIVED", "condition (i)"),
    chk("certificate.witnesses[*].k", [1, 2], "DERIVED", "k^2 < 5"),
    chk("count_bound.gamma", 2, "DERIVED", "Gamma(5,0) = #{5 >= k^2}")])

F["szulkin_minus10I"] = (problem("szulkin_minus10I", "-10*lambda", "0", "-10*lambda"), [
    *sflow_checks(3), *crossing_checks([0.1, 0.4, 0.9], [1, 1, 1]),
    chk("count_bound.gamma", 3, "DERIVED", "Gamma(10,0) = #{10 >= k^2}"),
    chk("count_bound.min_bifurcations", 2, "DERIVED", "ceil(3/2)")])

F["szulkin_5I_long"] = (problem("szulkin_5I_long", "5*lambda", "0", "5*lambda", lam=(0.0, 3.0)), [
    *sflow_checks(-3), *crossing_checks([0.2, 0.8, 1.8], [-1, -1, -1])])

F["b_only_5"] = (problem("b_only_5", "0", "5*lambda", "0"), [
    *sflow_checks(0), *crossing_checks([0.2, 0.8], [0, 0], [2, 2])])

F["mixed_a6_c2"] = (problem("mixed_a6_c2", "6*lambda", "0", "2*lambda"), [
    *sflow_checks(-1), *crossing_checks([1 / math.sqrt(12)], [-1])])

F["mixed_minus_a6_c2"] = (problem("mixed_minus_a6_c2", "-6*lambda", "0", "-2*lambda"), [
    *sflow_checks(1), *crossing_checks([1 / math.sqrt(12)], [1])])

F["coupled_a4_b2_c4"] = (problem("coupled_a4_b2_c4", "4*lambda", "2*lambda", "4*lambda"), [
    *sflow_checks(-2), *crossing_checks([1 / 6, 4 / 6], [-1, -1])])

F["affine_2_6"] = (problem("affine_2_6", "2+6*lambda", "0", "2+6*lambda"), [
    *sflow_checks(-1), *crossing_checks([1 / 3], [-1], oracle="2 + 6 lambda = k^2")])

F["quadratic_5"] = (problem("quadratic_5", "5*lambda^2", "0", "5*lambda^2"), [
    *sflow_checks(-2), *crossing_checks([1 / math.sqrt(5), 2 / math.sqrt(5)], [-1, -1], oracle="5 lambda^2 = k^2")])

osc = sorted([math.asin(1 / 8.5) / 3, math.asin(4 / 8.5) / 3, (PI - math.asin(4 / 8.5)) / 3])
F["oscillating_sin"] = (problem("oscillating_sin", "8.5*sin(3*lambda)", "0", "8.5*sin(3*lambda)"), [
    *sflow_checks(-1), *crossing_checks(osc, [-1, -1, 1], oracle="8.5 sin(3 lambda) = k^2")])

F["a_only_8"] = (problem("a_only_8", "8*lambda", "0", "0"), [
    *sflow_checks(0), chk("crossings", [], "DERIVED", "(b - k^2)^2 = a c has no root when b = c = 0")])

g = 3 + math.sqrt(5)
F["full_1_3_5"] = (problem("full_1_3_5", "lambda", "3*lambda", "5*lambda"), [
    *sflow_checks(-2), *crossing_checks([1 / g, 4 / g], [-1, -1])])

F["interval_length2"] = (problem("interval_length2", "5*lambda", "0", "5*lambda", domain={"type": "interval", "length": 2.0}), [
    *sflow_checks(-1), *crossing_checks([(PI / 2) ** 2 / 5], [-1], oracle="5 lambda = (pi/2)^2")])

sq = {"type": "rectangle", "sides": [1.0, 1.0]}
F["rectangle_30"] = (problem("rectangle_30", "30*lambda", "0", "30*lambda", domain=sq), [
    *sflow_checks(-1), *crossing_checks([2 * PI**2 / 30], [-1], oracle="30 lambda = 2 pi^2")])

F["rectangle_60"] = (problem("rectangle_60", "60*lambda", "0", "60*lambda", domain=sq), [
    *sflow_checks(-3), *crossing_checks([2 * PI**2 / 60, 5 * PI**2 / 60, 5 * PI**2 / 60], [-1, -1, -1],
                                        oracle="60 lambda in {2 pi^2, 5 pi^2 (double)}")])

F["xdep_sin"] = (problem("xdep_sin", "lambda*(5+sin(x))", "0", "0"), [
    same("spectral_flow.galerkin", "spectral_flow.crossings"),
    chk("spectral_flow.crossings", 0, "DERIVED", "b = c = 0 forces u'' = 0, so u = 0 and then v = 0")])

F["xdep_sym"] = (problem("xdep_sym", "lambda*(5+sin(x))", "0", "lambda*(5+sin(x))"), [
    same("spectral_flow.galerkin", "spectral_flow.crossings")])

F["xdep_coupled"] = (problem("xdep_coupled", "lambda*(4+cos(x))", "lambda*sin(x)", "lambda*(3+x/2)"), [
    same("spectral_flow.galerkin", "spectral_flow.crossings")])

F["nonlinear_5I"] = (problem("nonlinear_5I", "5*lambda", "0", "5*lambda", G="-(u^4+v^4)/4"), [
    *sflow_checks(-2), *crossing_checks([0.2, 0.8], [-1, -1]),
    chk("probe.runs[*].confirmed", [True, True], "DERIVED",
        "u = v = w reduces to -w'' = 5 lambda w - w^3, a supercritical pitchfork at 5 lambda = k^2")])


def main():
    ROOT.mkdir(parents=True, exist_ok=True)
    for name, (prob, checks) in F.items():
        d = ROOT / name
        d.mkdir(exist_ok=True)
        (d / "problem.json").write_text(json.dumps(prob, indent=2) + "\n")
        (d / "expected.json").write_text(json.dumps({"command": "report", "checks": checks}, indent=2) + "\n")
    print(f"wrote {len(F)} fixtures to {ROOT}")


if __name__ == "__main__":
    main()
