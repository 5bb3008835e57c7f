"""Command-line front end.

    weilcartan <command> MODEL.json [options] [--format text|json]

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.
Reports are deterministic apart from the final wall_time field.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import connections as conn
from . import reduction as red
from .equivariant import (Kalkman, brst_basic_check, cartan_cohomology, kalkman_conjugation_check,
                          kalkman_corrected_check, seeded_matrix, weil_basic_cohomology, weil_model)
from .graded_algebra import ParseError, render
from .lie import validate_ideal
from .model_file import Model, ModelError, load_model
from .operation import Violation, check_axioms, cohomology_dims
from .operators import algebra_hom
from .weil import acyclicity_dims, build_weil, koszul_check


class InputError(ValueError):
    pass


@dataclass
class Report:
    command: str
    model: Model
    checks: List[dict] = field(default_factory=list)
    dims: Dict[str, List[int]] = field(default_factory=dict)
    values: Dict[str, str] = field(default_factory=dict)

    def check(self, name: str, result, witness: Optional[str] = None) -> bool:
        """``result`` is a violation list (empty = ok) or a bool."""
        if isinstance(result, bool):
            ok = result
        else:
            ok = not result
            if not ok and witness is None:
                witness = f"{len(result)} violation(s); first: {result[0].describe()}"
        self.checks.append({"name": name, "status": "ok" if ok else "fail", "witness": None if ok else witness})
        return ok

    @property
    def ok(self) -> bool:
        return all(c["status"] == "ok" for c in self.checks)

    def as_dict(self, wall_time: float) -> dict:
        return {"command": self.command, "model": {"name": self.model.name, "sha256": self.model.digest},
                "checks": self.checks, "dims": self.dims, "values": self.values,
                "status": "ok" if self.ok else "fail", "wall_time": round(wall_time, 3)}

    def render_text(self, wall_time: float) -> str:
        lines = [f"command: {self.command}", f"model: {self.model.name} sha256={self.model.digest}"]
        for c in self.checks:
            line = f"check {c['name']}: {c['status']}"
            if c["witness"]:
                line += f" -- {c['witness']}"
            lines.append(line)
        for k, v in self.dims.items():
            lines.append(f"dims {k}: ({','.join(map(str, v))})")
        for k, v in self.values.items():
            lines.append(f"value {k}: {v}")
        lines.append(f"status: {'ok' if self.ok else 'fail'}")
        lines.append(f"wall_time: {wall_time:.3f}s")
        return "\n".join(lines) + "\n"


def _split(violations: Sequence[Violation], prefixes: Sequence[str]) -> Dict[str, List[Violation]]:
    out = {p: [] for p in prefixes}
    for v in violations:
        for p in prefixes:
            if v.check.startswith(p):
                out[p].append(v)
                break
    return out


def _require_lie(rep: Report) -> bool:
    m = rep.model
    ok = rep.check("lie algebra: antisymmetry and Jacobi", m.lie_violation is None,
                   m.lie_violation.describe() if m.lie_violation else None)
    return ok and m.op is not None


def _require_operation(rep: Report, K: int) -> bool:
    """Lie algebra valid and the operation axioms hold on A up to degree K."""
    if not _require_lie(rep):
        return False
    return rep.check(f"operation axioms on A (degree <= {K})", check_axioms(rep.model.op, K))


def _model_setup(m: Model, theta=None) -> red.ReductionSetup:
    if m.ideal is None:
        raise InputError("model has no reduction section")
    theta = theta or m.reduction_theta
    return red.ReductionSetup(m.op, m.ideal, dict(zip(m.ideal.indices, theta)), m.name)


def _try(rep: Report, name: str, fn):
    """Run fn; an internal inconsistency or setup failure becomes a failed check."""
    try:
        return fn()
    except (red.SetupError, ArithmeticError) as e:
        rep.check(name, False, str(e))
        return None


def _one_based(indices) -> str:
    return ",".join(str(i + 1) for i in indices)


# -- commands ---------------------------------------------------------------

def cmd_validate(rep: Report, args):
    m = rep.model
    if not _require_lie(rep):
        return
    K = args.max_degree
    rep.check(f"operation axioms on A (degree <= {K})", check_axioms(m.op, K))
    rep.check(f"operation axioms on W_g (x) A (degree <= {K})", check_axioms(_weil_model(m).op, K))
    for name, theta in m.connections.items():
        rep.check(f"connection {name}", conn.check_connection(m.op, theta))
    if m.ideal is not None:
        w = validate_ideal(m.lie, m.ideal)
        rep.check(f"ideal ({_one_based(m.ideal.indices)})", w is None, w.describe() if w else None)
        if w is None and _try(rep, "reduction data", lambda: _model_setup(m)) is not None:
            rep.check("reduction data", [])


def _weil_model(m: Model):
    try:
        return weil_model(m.op)
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_weil(rep: Report, args):
    m = rep.model
    if not rep.check("lie algebra: antisymmetry and Jacobi", m.lie_violation is None,
                     m.lie_violation.describe() if m.lie_violation else None):
        return
    K = args.max_degree
    W = build_weil(m.lie)
    rep.check(f"Weil operation axioms (degree <= {K})", check_axioms(W.operation, K))
    rep.check(f"Koszul formula d = 1/2 theta^k L_k on Lambda g* (degree <= {K})", koszul_check(m.lie, K))
    dims = acyclicity_dims(m.lie, K)
    rep.dims["H(W_g)"] = dims
    rep.check("W_g acyclic", dims == [1] + [0] * K, f"dims {dims}")
    for i, th in enumerate(W.theta):
        rep.values[f"d_W th{i + 1}"] = render(W.operation.d(th))
    for i, om in enumerate(W.omega):
        rep.values[f"d_W Om{i + 1}"] = render(W.operation.d(om))


def cmd_cohomology(rep: Report, args):
    m = rep.model
    if not _require_operation(rep, args.max_degree):
        return
    K = args.max_degree
    _weil_model(m)
    if args.model_kind in ("cartan", "both"):
        rep.dims["cartan"] = cartan_cohomology(m.op, K)
    if args.model_kind in ("weil-basic", "both"):
        rep.dims["weil-basic"] = weil_basic_cohomology(m.op, K)
    if args.model_kind == "both":
        rep.check("Cartan model = Weil model", rep.dims["cartan"] == rep.dims["weil-basic"])


def parse_t(spec: str, n: int):
    if spec == "identity":
        return [[int(i == j) for j in range(n)] for i in range(n)]
    if spec == "zero":
        return [[0] * n for _ in range(n)]
    if spec.startswith("seed:"):
        try:
            return seeded_matrix(n, int(spec[5:]))
        except ValueError:
            pass
    raise InputError(f"--t must be identity, zero or seed:<int>, got {spec!r}")


def cmd_kalkman(rep: Report, args):
    m = rep.model
    if not _require_operation(rep, args.max_degree):
        return
    K = args.max_degree
    wm = _weil_model(m)
    n = m.lie.dim
    T = parse_t(args.t, n)
    rep.values["T"] = "[" + "; ".join(" ".join(str(v) for v in row) for row in T) + "]"
    if args.t.startswith("seed:"):
        rep.values["seed"] = args.t[5:]
    parts = _split(kalkman_conjugation_check(wm, T, K), ["exp(A_T)", "L_T"])
    rep.check(f"exp(A_T) D exp(-A_T) = D_T (degree <= {K})", parts["exp(A_T)"])
    rep.check(f"L_T = L_0 (degree <= {K})", parts["L_T"])
    rep.check(f"exp(A_T) D exp(-A_T) = D_T + R_T (degree <= {K})", kalkman_corrected_check(wm, T, K))
    rep.values["R_T is zero"] = str(not any(Kalkman(wm, T).correction_term().images)).lower()
    if args.t == "identity":
        rep.check(f"BRST: ker I_id theta-free and D_id = dcar (degree <= {K})", brst_basic_check(wm, K))


def resolve_connection(m: Model, name: str):
    """Returns (operation, theta).  'weil:...' names live on W_g (x) A."""
    if not name.startswith("weil:"):
        if name not in m.connections:
            raise InputError(f"unknown connection {name!r}; model defines {sorted(m.connections)}")
        return m.op, m.connections[name]
    rest = name[5:]
    if rest == "xi":
        setup = _model_setup(m)
        return setup.model.op, red.build_xi(setup)
    wm = _weil_model(m)
    if rest == "taut":
        return wm.op, wm.theta
    if rest in m.connections:
        inc = wm.a_inclusion()
        return wm.op, [inc(t) for t in m.connections[rest]]
    raise InputError(f"unknown connection {name!r}")


def cmd_transgress(rep: Report, args):
    m = rep.model
    if not _require_operation(rep, args.max_degree):
        return
    K = args.max_degree
    op0, th0 = resolve_connection(m, args.theta0)
    op1, th1 = resolve_connection(m, args.theta1)
    if op0.algebra != op1.algebra:
        raise InputError("both connections must live on the same operation (prefix both or neither with weil:)")
    op = op0
    for label, th in ((args.theta0, th0), (args.theta1, th1)):
        if not rep.check(f"connection {label}", conn.check_connection(op, th)):
            return
    tr = conn.Transgression(op, th0, th1)
    parts = _split(conn.transgression_identity_check(op, th0, th1, K, tr), ["cw1", "K commutes", "K(W_bas)"])
    rep.check(f"cw1 - cw0 = dK + K d_W (degree <= {K})", parts["cw1"])
    rep.check(f"K commutes with L (degree <= {K})", parts["K commutes"])
    rep.check(f"K maps W-basic into A-basic (degree <= {K})", parts["K(W_bas)"])
    W = tr.weil
    rep.check("K(theta^i) = 0", [Violation("K(theta)", f"i={i + 1}", render(tr(t))) for i, t in enumerate(W.theta)
                                 if tr(t)])
    rep.check("K(Omega^i) = theta1^i - theta0^i",
              [Violation("K(Omega)", f"i={i + 1}", render(tr(w) - (b - a)))
               for i, (w, a, b) in enumerate(zip(W.omega, th0, th1)) if tr(w) - (b - a)])
    bad = []
    for deg in range(K + 1):
        for mono in W.algebra.basis_of_degree(deg):
            w = W.algebra.monomial(mono)
            r = tr(w) - conn.transgress_taylor(op, th0, th1, w)
            if r:
                bad.append(Violation("fiber integral = Taylor form", W.algebra.render_monomial(mono), render(r)))
    rep.check(f"fiber integration agrees with the Taylor closed form (degree <= {K})", bad)
    for i, w in enumerate(W.omega):
        rep.values[f"K(Om{i + 1})"] = render(tr(w))
    if m.lie.dim:
        sq = W.omega[0] * W.omega[0]
        rep.values["K(Om1^2)"] = render(tr(sq))


def cmd_reduce(rep: Report, args):
    m = rep.model
    if not _require_operation(rep, args.max_degree):
        return
    K = args.max_degree
    _weil_model(m)
    if m.ideal is None:
        raise InputError("model has no reduction section")
    w = validate_ideal(m.lie, m.ideal)
    if not rep.check(f"ideal ({_one_based(m.ideal.indices)})", w is None, w.describe() if w else None):
        return
    setup = _try(rep, "N-connection, G-equivariant", lambda: _model_setup(m))
    if setup is None:
        return
    rep.check("N-connection, G-equivariant", [])
    mu = _try(rep, "moment map equivariance", lambda: red.moment_map(setup))
    if mu is None:
        return
    rep.check("moment map equivariance", [])
    rep.check("q(X) = 0 on n", red.descent_check(setup, mu))
    for a in setup.q_idx:
        for i in setup.n_idx:
            rep.values[f"mu(e{a + 1})^{i + 1}"] = render(mu[a][i])
    xi = _try(rep, "Xi is a G-connection", lambda: red.build_xi(setup))
    if xi is None:
        return
    rep.check("Xi is a G-connection", [])
    for i, v in enumerate(xi):
        rep.values[f"Xi{i + 1}"] = render(v)
    tr = red.homotopy_operator(setup).transgression
    parts = _split(conn.transgression_identity_check(setup.model.op, tr.theta0, tr.theta1, K, tr),
                   ["cw1", "K commutes", "K(W_bas)"])
    rep.check(f"transgression (Xi, taut): cw1 - cw0 = dK + K d_W (degree <= {K})", parts["cw1"])
    rep.check(f"transgression (Xi, taut) is a basic homotopy (degree <= {K})",
              parts["K commutes"] + parts["K(W_bas)"])
    ct = red.cartan_theorem_check(setup, K)
    rep.check(f"x - T0 x = d Kcal x + Kcal d x (degree <= {K})", ct.homotopy)
    rep.check("T0 is an operation morphism", ct.morphism)
    rep.check("T0 lands in W_Q (x) A", ct.t0_image)
    rep.check("T0 o j = id on Q-basic elements", ct.t0_retraction)
    rep.check("Kcal is a basic homotopy", ct.kcal_basic)
    rep.dims["G-basic W_G (x) A"] = ct.g_dims
    rep.dims["Q-basic W_Q (x) B"] = ct.q_dims
    rep.check("Cartan's theorem: basic cohomology dims agree", ct.g_dims == ct.q_dims)
    oq = _try(rep, "equivariant curvature", lambda: red.equivariant_curvature(setup))
    if oq is None:
        return
    rep.check("equivariant curvature horizontal and equivariant", [])
    for i, v in oq.items():
        rep.values[f"omega_Q{i + 1}"] = render(v)
    qc = red.q_cartan_complex(setup)
    dq = red.q_cartan_differential(setup)
    rep.dims["Q-Cartan (S q* (x) B)^Q"] = qdims = cohomology_dims(qc, dq, K)
    rep.check("Q-Cartan dims = Q-basic Weil dims", qdims == ct.q_dims)
    basic_bad, closed_bad, cross_bad = [], [], []
    for deg in range(K + 1):
        for P in red.closed_invariant_basis(setup, deg):
            out = _try(rep, "C_theta output Q-basic", lambda: red.reduce_cartan_rep(setup, P))
            if out is None:
                return
            rep.values[f"C_theta[{render(P)}]"] = render(out)
            basic_bad += red.q_cartan_violations(setup, out)
            if dq(out):
                closed_bad.append(Violation("dcar_Q closed", render(P), render(dq(out))))
            cross_bad += red.composite_cross_check(setup, P)
    rep.check(f"C_theta output Q-basic on closed Cartan basis (degree <= {K})", basic_bad)
    rep.check(f"C_theta output dcar_Q-closed (degree <= {K})", closed_bad)
    rep.check(f"C_theta agrees with phi_Q o T0 o phi_G^-1 in cohomology (degree <= {K})", cross_bad)


def cmd_char_class(rep: Report, args):
    m = rep.model
    if not _require_operation(rep, args.max_degree):
        return
    if args.poly not in m.polynomials:
        raise InputError(f"unknown polynomial {args.poly!r}; model defines {sorted(m.polynomials)}")
    setup = _try(rep, "N-connection, G-equivariant", lambda: _model_setup(m))
    if setup is None:
        return
    try:
        P = setup.cartan.algebra.parse(m.polynomials[args.poly])
    except (ParseError, KeyError) as e:
        raise InputError(f"polynomial {args.poly!r}: {e}") from None
    inv = red.invariant_polynomial_violations(setup, P)
    if not rep.check("P is an invariant polynomial on g", inv):
        return
    c = _try(rep, "char class is Q-basic and dcar_Q-closed", lambda: red.char_class(setup, P))
    if c is None:
        return
    rep.check("char class is Q-basic and dcar_Q-closed", [])
    rep.values[f"{args.poly}(Psi + omega_Q)"] = render(c)
    rep.check("C_theta of P equals the characteristic class", red.reduce_cartan_rep(setup, P) == c)
    rep.check("agrees with phi_Q o T0 o phi_G^-1 in cohomology", red.composite_cross_check(setup, P))
    if not setup.q_idx:
        cw = conn.chern_weil_map(m.op, [setup.theta[i] for i in range(m.lie.dim)])
        W = build_weil(m.lie)
        from_S = algebra_hom(setup.cartan.algebra, W.algebra, W.omega + [W.algebra.zero()] *
                                 m.op.algebra.ngens, "S->W")
        classical = setup.cartan.inclusion(cw(from_S(P)))
        rep.values[f"{args.poly}(omega~)"] = render(classical)
        rep.check("G = N: equals the Chern-Weil form P(omega~)", classical == c)
    for a, alt in enumerate(m.alt_theta):
        label = f"alternative connection {a + 1}"
        other = _try(rep, label, lambda: _model_setup(m, alt))
        if other is None:
            continue
        rep.values[f"{args.poly} with {label}"] = render(red.char_class(other, P))
        rep.check(f"{label}: same class (difference exact)", red.class_difference_exact(setup, other, P))


COMMANDS = {
    "validate": (cmd_validate, 5), "weil": (cmd_weil, 4), "cohomology": (cmd_cohomology, 4),
    "kalkman": (cmd_kalkman, 3), "transgress": (cmd_transgress, 4), "reduce": (cmd_reduce, 4),
    "char-class": (cmd_char_class, 4),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weilcartan",
                                description="Verify operations, Weil/Cartan models, connections and reduction.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, default_k) in COMMANDS.items():
        s = sub.add_parser(name)
        s.add_argument("model", help="model JSON file")
        s.add_argument("--max-degree", type=int, default=default_k, metavar="K")
        s.add_argument("--format", choices=("text", "json"), default="text")
        if name == "cohomology":
            s.add_argument("--model", dest="model_kind", choices=("cartan", "weil-basic", "both"), default="both")
        if name == "kalkman":
            s.add_argument("--t", default="identity", help="identity, zero or seed:<int>")
        if name == "transgress":
            s.add_argument("--theta0", required=True)
            s.add_argument("--theta1", required=True)
        if name == "char-class":
            s.add_argument("--poly", required=True)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.max_degree < 0:
        print("error: --max-degree must be non-negative", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        model = load_model(args.model)
        rep = Report(" ".join(argv), model)
        COMMANDS[args.command][0](rep, args)
    except (ModelError, InputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - start
    if args.format == "json":
        sys.stdout.write(json.dumps(rep.as_dict(wall), indent=2) + "\n")
    else:
        sys.stdout.write(rep.render_text(wall))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
