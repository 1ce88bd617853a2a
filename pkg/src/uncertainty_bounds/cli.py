"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 precondition violation,
3 reproduced value does not match its exact form.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Iterable, Optional

import numpy as np

from . import bounds, oscillator, spin
from .auxopt import optimal_aux_multi
from .bounds import BoundReport, RelationId
from .errors import PreconditionViolated, UncertaintyError
from .hilbert import classify_case, deviation_vector
from .serialization import Problem, ProblemFileError, load_problem

EXIT_OK, EXIT_IO, EXIT_PRECONDITION, EXIT_MISMATCH = 0, 1, 2, 3
SIG_DIGITS = 12

SINGLE_AUX = {"EQ4A", "EQ13", "EQ14", "EQ17"}
PAIR_AUX = {"EQ5A", "EQ15", "EQ16"}
NO_AUX = {"EQ2", "EQ3", "CHENFEI"}


def fmt(v):
    """Round floats to the fixed output precision; pass everything else through."""
    if isinstance(v, (bool, np.bool_)) or v is None:
        return None if v is None else bool(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.{SIG_DIGITS}g}")
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def _emit(rows: list[dict], fmt_name: str, out, meta: Optional[dict] = None) -> None:
    rows = [{k: fmt(v) for k, v in r.items()} for r in rows]
    if fmt_name == "json":
        doc = {"rows": rows}
        if meta:
            doc.update({k: fmt(v) if not isinstance(v, (dict, list)) else v for k, v in meta.items()})
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        return
    fields: list[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _csv_cell(r.get(k)) for k in fields})


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return ";".join(str(t) for t in v)
    return v


class _Output:
    def __init__(self, path: Optional[str]):
        self.path = path
        self.buf = io.StringIO()

    def __enter__(self):
        return self.buf

    def __exit__(self, *exc):
        text = self.buf.getvalue()
        if self.path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        return False


# ---------------------------------------------------------------------------
# table1


def cmd_table1(args) -> int:
    tol = args.tolerance if args.tolerance is not None else 1e-12
    rows_t = spin.table1_scenario()
    rows = []
    ok = True
    for r in rows_t:
        match = r.error <= tol
        ok &= match
        rows.append({
            "section": "table1",
            "label": r.label,
            "relation_id": r.report.relation_id.value,
            "exact_form": r.exact_form,
            "expected": r.exact_value,
            "value": r.report.rhs,
            "lhs": r.report.lhs,
            "abs_error": r.error,
            "match": match,
        })
    for h in spin.headline_bounds(rows_t):
        err = abs(h.value - h.exact_value)
        match = err <= tol
        ok &= match
        rows.append({
            "section": "headline",
            "label": h.label,
            "relation_id": h.quantity,
            "exact_form": h.exact_form,
            "expected": h.exact_value,
            "value": h.value,
            "lhs": h.actual,
            "abs_error": err,
            "match": match,
        })
    heads = {h.label: h for h in spin.headline_bounds(rows_t)}
    meta = {"all_match": ok, "tolerance": tol,
            "combined_exceeds_eq16": heads["combined"].value > heads["16"].value}
    with _Output(args.out) as out:
        _emit(rows, args.format, out, meta)
    if not ok:
        print("table1: at least one value differs from its exact form", file=sys.stderr)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args) -> int:
    if args.phi:
        grid = list(args.phi)
    else:
        if args.steps < 2 or not args.phi_end > args.phi_start:
            print("sweep: need steps >= 2 and phi_end > phi_start", file=sys.stderr)
            return EXIT_IO
        grid = list(np.linspace(args.phi_start, args.phi_end, args.steps))
    rows = [r.to_dict() for r in spin.sweep(args.system, grid)]
    for r in rows:
        r["case2"] = r["case"].startswith("CASE2")
    with _Output(args.out) as out:
        _emit(rows, args.format, out, {"system": args.system})
    return EXIT_OK


# ---------------------------------------------------------------------------
# oscillator


def cmd_oscillator(args) -> int:
    if not (0 < args.eta_min < args.eta_max) or args.steps < 2:
        print("oscillator: need 0 < eta_min < eta_max and steps >= 2", file=sys.stderr)
        return EXIT_IO
    grid = oscillator.default_grid()
    etas = np.linspace(args.eta_min, args.eta_max, args.steps)
    values = oscillator.eta_scan(etas, grid)
    rows = [{"kind": "eta_scan", "eta": float(e), "value": float(v)} for e, v in zip(etas, values)]
    best = int(np.argmax(values))
    dA = oscillator.deviation_function("x_squared", grid)
    dB = oscillator.deviation_function("p", grid)
    rows += [
        {"kind": "scan_max", "eta": float(etas[best]), "value": float(values[best])},
        {"kind": "bound17_eta1", "eta": 1.0, "value": oscillator.bound17_eta(1.0, grid)},
        {"kind": "split_aux", "eta": None, "value": oscillator.split_aux_bound(grid)},
        {"kind": "half_line", "eta": None, "value": oscillator.half_line_product_bound(dA, dB)},
        {"kind": "exact_lhs", "eta": None, "value": oscillator.exact_product()},
    ]
    with _Output(args.out) as out:
        _emit(rows, args.format, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds


def _relation_specs(problem: Problem) -> Iterable[dict]:
    """Expand the problem's relation list into explicit evaluation requests."""
    aux_names = list(problem.aux)
    obs_names = list(problem.observables)
    pair = ["A", "B"] if {"A", "B"} <= set(obs_names) else obs_names[:2]
    requested = problem.relations or ["EQ2", "CHENFEI"]
    for item in requested:
        if isinstance(item, str):
            rid = item.upper()
            if rid in NO_AUX:
                yield {"id": rid, "observables": pair, "aux": []}
            elif rid in SINGLE_AUX:
                for n in aux_names:
                    yield {"id": rid, "observables": pair, "aux": [n]}
            elif rid == "EQ4B":
                yield {"id": rid, "observables": pair, "aux": []}
                for n in aux_names:
                    yield {"id": rid, "observables": pair, "aux": [n]}
            elif rid in PAIR_AUX or rid == "EQ5B":
                yield {"id": rid, "observables": pair, "aux": aux_names[:2]}
            elif rid == "MULTI":
                for n in aux_names or ["optimal"]:
                    yield {"id": rid, "observables": obs_names, "aux": [n]}
            else:
                yield {"id": rid, "observables": pair, "aux": []}
        elif isinstance(item, dict) and "id" in item:
            spec = {"id": str(item["id"]).upper(), "observables": item.get("observables", pair),
                    "aux": item.get("aux", [])}
            if "lambda" in item:
                spec["lambda"] = item["lambda"]
            yield spec
        else:
            raise ProblemFileError(f"relation entry {item!r} must be an id string or an object with 'id'")


def evaluate_relation(problem: Problem, spec: dict, tol: float) -> BoundReport:
    rid = spec["id"]
    try:
        RelationId(rid)
    except ValueError:
        raise ProblemFileError(f"unknown relation {rid!r}") from None
    try:
        obs = [problem.observables[n] for n in spec["observables"]]
    except KeyError as exc:
        raise ProblemFileError(f"relation {rid}: unknown observable {exc.args[0]!r}") from None
    psi = problem.state
    if rid == "MULTI":
        if spec["aux"] == ["optimal"] and "optimal" not in problem.aux:
            aux = [optimal_aux_multi([deviation_vector(X, psi) for X in obs])]
        else:
            aux = _aux_list(problem, spec, rid)
        return bounds.multi_observable_product(obs, psi, aux[0], tol=tol)
    if len(obs) != 2:
        raise ProblemFileError(f"relation {rid} needs exactly two observables")
    A, B = obs
    aux = _aux_list(problem, spec, rid)
    lam = spec.get("lambda", problem.lam if problem.lam is not None else 1.0)
    loose = problem.allow_nonorthogonal_aux

    def need(n):
        if len(aux) != n:
            raise ProblemFileError(f"relation {rid} needs {n} auxiliary state(s), got {len(aux)}")

    if rid == "EQ2":
        return bounds.robertson_product(A, B, psi)
    if rid == "EQ3":
        return bounds.robertson_schrodinger(A, B, psi)
    if rid == "CHENFEI":
        return bounds.chen_fei_sum(A, B, psi)
    if rid == "EQ4A":
        need(1)
        return bounds.sum_bound_4a(A, B, psi, aux[0], tol=tol, allow_nonorthogonal=loose)
    if rid == "EQ4B":
        return bounds.sum_bound_4b(A, B, psi, aux[0] if aux else None, tol=tol, allow_nonorthogonal=loose)
    if rid == "EQ5A":
        need(2)
        return bounds.weighted_sum_5a(A, B, psi, aux[0], aux[1], lam, tol=tol, allow_nonorthogonal=loose)
    if rid == "EQ5B":
        if len(aux) == 1:
            return bounds.weighted_sum_5b(A, B, psi, None, aux[0], lam, tol=tol, allow_nonorthogonal=loose)
        need(2)
        return bounds.weighted_sum_5b(A, B, psi, aux[0], aux[1], lam, tol=tol, allow_nonorthogonal=loose)
    if rid == "EQ13":
        need(1)
        return bounds.product_one_aux(A, B, psi, aux[0])
    if rid == "EQ14":
        need(1)
        return bounds.sum_one_aux(A, B, psi, aux[0])
    if rid == "EQ15":
        need(2)
        return bounds.product_two_aux(A, B, psi, aux[0], aux[1])
    if rid == "EQ16":
        need(2)
        return bounds.sum_two_aux(A, B, psi, aux[0], aux[1])
    if rid == "EQ17":
        need(1)
        return bounds.strengthened_product(A, B, psi, aux[0], tol=tol)
    raise ProblemFileError(f"relation {rid} is not supported")


def _aux_list(problem: Problem, spec: dict, rid: str):
    try:
        return [problem.aux[n] for n in spec["aux"]]
    except KeyError as exc:
        raise ProblemFileError(f"relation {rid}: unknown auxiliary state {exc.args[0]!r}") from None


def cmd_bounds(args) -> int:
    tol = args.tolerance if args.tolerance is not None else bounds.CASE3_TOL
    try:
        problem = load_problem(args.file)
        specs = list(_relation_specs(problem))
    except ProblemFileError as exc:
        print(f"bounds: {exc}", file=sys.stderr)
        return EXIT_IO
    case_cache = {}
    rows = []
    violated = False
    for spec in specs:
        key = tuple(spec["observables"][:2])
        if key not in case_cache:
            try:
                devs = [deviation_vector(problem.observables[n], problem.state) for n in key]
                case_cache[key] = classify_case(*devs).tag.value if len(devs) == 2 else ""
            except (KeyError, UncertaintyError):
                case_cache[key] = ""
        base = {"relation_id": spec["id"], "observables": list(spec["observables"]),
                "case": case_cache[key]}
        try:
            rep = evaluate_relation(problem, spec, tol)
        except ProblemFileError as exc:
            print(f"bounds: {exc}", file=sys.stderr)
            return EXIT_IO
        except PreconditionViolated as exc:
            violated = True
            print(f"bounds: {spec['id']} refused: {exc}", file=sys.stderr)
            rows.append({**base, "aux_ids": list(spec["aux"]), "error": "PreconditionViolated",
                         "message": str(exc)})
            continue
        d = rep.to_dict()
        d.pop("relation_id")
        rows.append({**base, **{k: v for k, v in d.items()
                                if not isinstance(v, dict)}, "error": None, "message": None})
    with _Output(args.out) as out:
        _emit(rows, args.format, out)
    return EXIT_PRECONDITION if violated else EXIT_OK


def cmd_example_problem(args) -> int:
    A, B, psi, n1, n2 = spin.table1_inputs()
    relations = ["EQ2", "EQ4A", "EQ4B", {"id": "EQ5A", "aux": ["N1", "N2"]},
                 {"id": "EQ5B", "aux": ["N1", "N2"]}, "EQ13", "EQ14", "EQ15", "EQ16", "EQ17", "CHENFEI"]
    prob = Problem(psi, {"A": A, "B": B}, {"N1": n1, "N2": n2}, 1.0, relations, allow_nonorthogonal_aux=True)
    with _Output(args.out) as out:
        out.write(json.dumps(prob.to_json(), indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uncertainty-bounds",
                                description="Evaluate and compare variance-based uncertainty bounds.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--tolerance", type=float, default=None,
                        help="override the default comparison / precondition tolerance")

    t = sub.add_parser("table1", help="reproduce the three-state comparison table (self-checking)")
    common(t)
    t.set_defaults(func=cmd_table1)

    s = sub.add_parser("sweep", help="phi sweep of the spin-1 or spin-1/2 example states")
    s.add_argument("system", choices=("qutrit", "qubit"))
    s.add_argument("--phi-start", type=float, default=0.0)
    s.add_argument("--phi-end", type=float, default=math.pi)
    s.add_argument("--steps", type=int, default=181)
    s.add_argument("--phi", type=float, action="append",
                   help="explicit phi value (repeatable); overrides the range")
    common(s)
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oscillator", help="harmonic-oscillator auxiliary-state bounds")
    o.add_argument("--eta-min", type=float, default=0.02)
    o.add_argument("--eta-max", type=float, default=8.0)
    o.add_argument("--steps", type=int, default=400)
    common(o)
    o.set_defaults(func=cmd_oscillator)

    b = sub.add_parser("bounds", help="evaluate relations for a JSON problem file")
    b.add_argument("file")
    common(b)
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("example-problem", help="write the three-state example as a problem file")
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_example_problem)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
