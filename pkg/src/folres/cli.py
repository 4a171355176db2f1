"""Batch front end: run a JSON scenario through a driver or oracle and report."""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .algebra import ParseError, QuotientRing, Ring, parse_poly
from .classify import MULTIPLICATIVE, REGULAR, lambda_min, multiplicative_certificate
from .derivations import Derivation, FoliationPresentation
from .errors import FolresError, StructuralError
from .oracles import (
    constants_basis,
    euclid_root,
    in_span,
    inv_subring_check,
    lambda_constancy_check,
    lattice_monomials,
    rees_functoriality_check,
)
from .resolve import ResolutionReport, resolve_char2, resolve_surface, resolve_threefold_corank1

RESOLVERS = {
    "surface": resolve_surface,
    "char2": resolve_char2,
    "threefold_corank1": resolve_threefold_corank1,
}
ORACLES = (
    "classify",
    "constants_basis",
    "euclid_root",
    "inv_subring_check",
    "rees_functoriality_check",
    "lambda_constancy_check",
)
# drivers that do not read the foliation
_NO_FOLIATION = {"euclid_root", "inv_subring_check", "rees_functoriality_check"}

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
_STATUS_EXIT = {"Resolved": EXIT_OK, "true": EXIT_OK, "Aborted": EXIT_FAIL, "false": EXIT_FAIL}


class ScenarioError(ValueError):
    """The scenario file does not match the expected schema."""


@dataclass
class Scenario:
    p: int
    variables: list[str]
    driver: str
    generators: list[list[str]] = field(default_factory=list)
    relations: list[str] = field(default_factory=list)
    options: dict = field(default_factory=dict)

    FIELDS = ("p", "variables", "generators", "relations", "driver", "options")

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        if not isinstance(d, dict):
            raise ScenarioError("scenario must be a JSON object")
        unknown = set(d) - set(cls.FIELDS)
        if unknown:
            raise ScenarioError(f"unknown fields {sorted(unknown)}")
        for key in ("p", "variables", "driver"):
            if key not in d:
                raise ScenarioError(f"missing field {key!r}")
        p = d["p"]
        if not isinstance(p, int) or isinstance(p, bool):
            raise ScenarioError("p must be an integer")
        variables = d["variables"]
        if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
            raise ScenarioError("variables must be a list of names")
        driver = d["driver"]
        if driver not in RESOLVERS and driver not in ORACLES:
            raise ScenarioError(f"unknown driver {driver!r}")
        gens = d.get("generators", [])
        if not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
            raise ScenarioError("generators must be a list of coefficient lists")
        for g in gens:
            if len(g) != len(variables):
                raise ScenarioError(f"generator {g} has {len(g)} coefficients for {len(variables)} variables")
            if not all(isinstance(c, (str, int)) for c in g):
                raise ScenarioError("coefficients must be strings or integers")
        rels = d.get("relations", [])
        if not isinstance(rels, list) or not all(isinstance(r, (str, int)) for r in rels):
            raise ScenarioError("relations must be a list of polynomial strings")
        opts = d.get("options", {})
        if not isinstance(opts, dict):
            raise ScenarioError("options must be an object")
        if driver not in _NO_FOLIATION and not gens:
            raise ScenarioError(f"driver {driver!r} needs at least one generator")
        return cls(
            p=p,
            variables=list(variables),
            driver=driver,
            generators=[[str(c) for c in g] for g in gens],
            relations=[str(r) for r in rels],
            options=dict(opts),
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in self.FIELDS}

    def ring(self) -> Ring:
        try:
            return Ring(tuple(self.variables), self.p)
        except ValueError as e:
            raise ScenarioError(str(e)) from e

    def foliation(self) -> FoliationPresentation:
        """Parse generators and relations; raises ParseError on malformed polynomials."""
        R = self.ring()
        Q = QuotientRing(R, [parse_poly(r, R) for r in self.relations])
        try:
            gens = [Derivation(Q, [parse_poly(c, R) for c in g]) for g in self.generators]
        except StructuralError as e:
            # a generator that does not preserve the relations is bad input
            raise ScenarioError(str(e)) from e
        return FoliationPresentation(gens)


def load_scenario(path: str | Path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return Scenario.from_dict(json.load(fh))


def exit_code(status: str) -> int:
    return _STATUS_EXIT.get(status, EXIT_INTERNAL)


# -- oracle dispatch -------------------------------------------------------------


def _opt(opts: dict, *names, default=None):
    for n in names:
        if n in opts:
            return opts[n]
    return default


def _run_oracle(sc: Scenario, degree_bound: int | None) -> dict:
    opts = sc.options
    name = sc.driver
    if name == "classify":
        F = sc.foliation()
        pt = _opt(opts, "point", default=[0] * len(sc.variables))
        cl = multiplicative_certificate(F, pt)
        result = cl.to_dict()
        if cl.verdict == MULTIPLICATIVE and F.poly_ring.nvars == 2:
            result["lambda_min"] = lambda_min(cl)
        return {"ok": cl.verdict in (REGULAR, MULTIPLICATIVE), "result": result}
    if name == "constants_basis":
        F = sc.foliation()
        N = degree_bound if degree_bound is not None else int(_opt(opts, "degree_bound", "N", default=2 * sc.p))
        basis = constants_basis(F, N)
        result = {"N": N, "dimension": len(basis), "basis": [str(b) for b in basis]}
        ok = True
        weights = _diagonal_weights(F)
        if weights is not None:
            # diagonal generator: compare with the lattice of invariant monomials
            lat = lattice_monomials(sc.p, weights, N)
            mons = [F.poly_ring.monomial(e) for e in lat]
            ok = len(lat) == len(basis) and all(in_span(m, basis) for m in mons)
            result["lattice_dimension"] = len(lat)
        return {"ok": ok, "result": result}
    if name == "euclid_root":
        r = euclid_root(int(opts["a"]), int(opts["b"]), sc.p)
        return {"ok": r.verified, "result": r.to_dict()}
    if name == "inv_subring_check":
        J = [int(j) - 1 for j in opts["J"]]
        N = degree_bound if degree_bound is not None else opts.get("N")
        ok = inv_subring_check(int(opts["n"]), J, opts["a"], int(opts["pivot"]) - 1, sc.p, N)
        return {"ok": ok, "result": {"n": opts["n"], "J": opts["J"], "a": opts["a"], "pivot": opts["pivot"]}}
    if name == "rees_functoriality_check":
        Lam = int(_opt(opts, "Lambda", "lambda", "Lam"))
        M = degree_bound if degree_bound is not None else opts.get("M")
        ok = rees_functoriality_check(
            sc.p,
            Lam,
            opts.get("f", 1),
            opts.get("g", 1),
            M,
            opts.get("u"),
            opts.get("v"),
            opts.get("other_weight"),
        )
        return {"ok": ok, "result": {"Lambda": Lam, "M": M if M is not None else 3 * sc.p}}
    if name == "lambda_constancy_check":
        F = sc.foliation()
        pts = [tuple(pt) for pt in opts["points"]]
        return {"ok": lambda_constancy_check(F, pts), "result": {"points": [list(pt) for pt in pts]}}
    raise ScenarioError(f"unknown oracle {name!r}")


def _diagonal_weights(F: FoliationPresentation) -> list[int] | None:
    if len(F.generators) != 1 or not F.ring.is_polynomial_ring():
        return None
    ring = F.poly_ring
    ws = []
    for i, c in enumerate(F.generators[0].coeffs):
        if c.is_zero():
            ws.append(0)
            continue
        if set(c.terms) != {tuple(1 if k == i else 0 for k in range(ring.nvars))}:
            return None
        ws.append(c.coeff(next(iter(c.terms))))
    return ws


# -- reports ----------------------------------------------------------------------


def run_scenario(sc: Scenario, degree_bound: int | None = None, max_depth: int | None = None) -> tuple[dict, ResolutionReport | None]:
    """Execute the scenario; returns (JSON report, resolution report or None for oracles)."""
    head = {"scenario": sc.to_dict(), "driver": sc.driver}
    if sc.driver in RESOLVERS:
        F = sc.foliation()
        depth = max_depth if max_depth is not None else sc.options.get("max_depth")
        kwargs = {"max_depth": int(depth)} if depth is not None else {}
        rep = RESOLVERS[sc.driver](F, **kwargs)
        return {**head, **rep.to_dict()}, rep
    out = _run_oracle(sc, degree_bound)
    return {**head, "status": "true" if out["ok"] else "false", "result": out["result"]}, None


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(report: ResolutionReport | dict) -> str:
    """DOT digraph of the blow-up tree: nodes show id, ring and regularity; edges show center and weights."""
    nodes = report["nodes"] if isinstance(report, dict) else report.to_dict()["nodes"]
    lines = ["digraph blowups {", "  node [shape=box];"]
    for n in nodes:
        reg = {True: "regular", False: "singular", None: "?"}[n["regular"]]
        label = f"{_dot_escape(str(n['id']) + ': ' + n['ring'])}\\n{reg}"
        lines.append(f'  n{n["id"]} [label="{label}"];')
    for n in nodes:
        if n["parent"] is None:
            continue
        lab = n["label"]
        parts = [lab.get("op", n["kind"])]
        if "center" in lab:
            parts.append("(" + ", ".join(lab["center"]) + ")")
        if "weights" in lab:
            parts.append("w=" + ",".join(str(w) for w in lab["weights"]))
        if "cover" in lab:
            parts.append("D+(" + lab["cover"] + ")")
        elif "variable" in lab:
            parts.append(lab["variable"])
        lines.append(f'  n{n["parent"]} -> n{n["id"]} [label="{_dot_escape(" ".join(parts))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- entry point ----------------------------------------------------------------


def _cmd_run(args) -> int:
    try:
        sc = load_scenario(args.scenario)
        report, rep = run_scenario(sc, args.degree_bound, args.max_depth)
    except (OSError, json.JSONDecodeError, ScenarioError, ParseError, KeyError, TypeError) as e:
        print(f"input error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except StructuralError as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (FolresError, ValueError) as e:
        # domain errors outside the drivers' own abort handling
        print(f"aborted: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
    text = json.dumps(report, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    if args.dot:
        if rep is None:
            print("no blow-up tree for an oracle scenario; skipping --dot", file=sys.stderr)
        else:
            Path(args.dot).write_text(export_dot(rep), encoding="utf-8")
    status = report["status"]
    print(f"{sc.driver}: {status}", file=sys.stderr)
    return exit_code(status)


def _cmd_selftest(args) -> int:
    suite = Path(__file__).resolve().parents[2] / "tests" / "test_acceptance.py"
    if not suite.exists():
        print(f"acceptance suite not found at {suite}", file=sys.stderr)
        return EXIT_INPUT
    env = dict(os.environ)
    if args.seed is not None:
        env["FOLRES_SEED"] = str(args.seed)
    cmd = [sys.executable, "-m", "pytest", "-q", "-s", str(suite)]
    return subprocess.call(cmd, env=env)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="folres", description="Resolve 1-foliations on affine charts over F_p.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("scenario")
    r.add_argument("--report", help="write the JSON report here instead of stdout")
    r.add_argument("--dot", help="write the blow-up tree in DOT format")
    r.add_argument("--degree-bound", type=int, help="degree bound for oracle truncations")
    r.add_argument("--max-depth", type=int, help="blow-up depth bound for resolution drivers")
    r.set_defaults(func=_cmd_run)
    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.add_argument("--seed", type=int, help="sets FOLRES_SEED for randomized inputs")
    s.set_defaults(func=_cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
