"""Command-line entry point: ``revarith gen | verify | report``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path

from . import analysis, generators, netlist, quantum
from .core import (
    DEFAULT_EXHAUSTIVE_BOUND,
    DEFAULT_SEED,
    BoundError,
    Circuit,
    CircuitError,
    GateKind,
    Useful,
    check_roles,
    domain_inputs,
    truth_table,
)
from .report import RENDERERS, ReportDocument

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FAMILIES = tuple(generators.GENERATORS)
ORACLES = ("auto", "adder", "bcd", "converter", "none")

_NOTES = {
    "bin2bcd": "inputs 20..31 never occur after a BCD adder; they map to the unused codes in a fixed order",
}


class UsageError(Exception):
    pass


def parse_n_list(text: str) -> list[int]:
    """'8,16' or '1..64' or a mix such as '1..4,8'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo_i, hi_i = int(lo), int(hi)
                if hi_i < lo_i:
                    raise ValueError
                out.extend(range(lo_i, hi_i + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad n-list entry {part!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("n-list needs positive integers")
    return out


def _timestamp(reproducible: bool) -> str | None:
    return None if reproducible else _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def build(family: str, param: int | None, n: int | None, design: int | None) -> tuple[Circuit, dict]:
    """Circuit for a CLI family plus the parameters actually used."""
    if family not in generators.GENERATORS:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    try:
        if family in ("rca-nocarry", "rca-carry"):
            width = n if n is not None else param
            if width is None:
                raise UsageError(f"{family} needs a bit width (positional or -n)")
            return generators.GENERATORS[family](width), {"n": width}
        if family == "rbcd":
            v = param if param is not None else design
            if v is None:
                raise UsageError("rbcd needs a variant 1..4")
            return generators.gen_rbcd(v), {"variant": v}
        if family == "bcd-ndigit":
            d = design if design is not None else param
            if d is None or n is None:
                raise UsageError("bcd-ndigit needs --design and -n")
            return generators.gen_ndigit_bcd(d, n), {"design": d, "n": n}
        if param is not None or n is not None:
            raise UsageError(f"{family} takes no parameters")
        return generators.GENERATORS[family](), {}
    except CircuitError as e:
        raise UsageError(str(e)) from None


def _header(family: str, params: dict, circuit: Circuit, expanded: bool, reproducible: bool) -> list[str]:
    m = analysis.measure(circuit)
    lines = [
        f"generator: {family} " + " ".join(f"{k}={v}" for k, v in params.items()),
        "metrics{}: quantum_cost={} step_delay={} asap_depth={} ancilla={} garbage={}".format(
            " (after Toffoli expansion)" if expanded else "",
            m.quantum_cost,
            "-" if m.step_delay is None else m.step_delay,
            m.asap_depth,
            m.ancilla_inputs,
            m.garbage_outputs,
        ),
    ]
    if family in _NOTES:
        lines.append(_NOTES[family])
    ts = _timestamp(reproducible)
    if ts:
        lines.append(f"generated: {ts}")
    return lines


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gen(args) -> int:
    circuit, params = build(args.family, args.param, args.n, args.design)
    if args.expand_to_toffoli:
        circuit = netlist.expand_to_toffoli(circuit)
    if args.format == "real":
        text = netlist.emit_real(circuit, _header(args.family, params, circuit, args.expand_to_toffoli, args.reproducible))
    else:
        doc = {
            "schema": 1,
            "generator": args.family,
            "parameters": params,
            "expanded_to_toffoli": bool(args.expand_to_toffoli),
            "metrics": analysis.measure(circuit).as_dict(),
            "netlist": netlist.netlist_dict(circuit),
        }
        if args.family in _NOTES:
            doc["note"] = _NOTES[args.family]
        ts = _timestamp(args.reproducible)
        if ts:
            doc["generated"] = ts
        text = json.dumps(doc, indent=2) + "\n"
    _write(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _reference_for(circuit: Circuit, oracle: str) -> Circuit | None:
    """A generated circuit whose role specs describe ``circuit``'s outputs."""
    inputs = set(circuit.input_names)
    if oracle == "auto":
        if {"k0", "k1", "k2", "k3", "cout"} == inputs:
            oracle = "converter"
        elif "a0" in inputs and "z" in inputs:
            oracle = "adder"
        elif "a0" in inputs or "a0_0" in inputs:
            oracle = "bcd"
        else:
            oracle = "none"
    if oracle == "none":
        return None
    if oracle == "converter":
        return generators.gen_bin2bcd()
    carry = "c0" in inputs
    if oracle == "adder":
        n = sum(1 for x in inputs if x.startswith("a") and x[1:].isdigit())
        return (generators.gen_rca_with_carry if carry else generators.gen_rca_no_carry)(n)
    if oracle == "bcd":
        digits = sum(1 for x in inputs if x == "a0" or x.startswith("a0_"))
        return generators.gen_ndigit_bcd(1 if carry else 2, digits)
    raise UsageError(f"unknown oracle {oracle!r}")


def attach_oracle(circuit: Circuit, reference: Circuit) -> Circuit:
    """Copy output specs and the input domain from ``reference`` by label."""
    specs = {
        ln.output_label: ln.output.spec
        for ln in reference.lines
        if isinstance(ln.output, Useful) and ln.output.spec is not None
    }
    if set(circuit.input_names) != set(reference.input_names):
        raise UsageError("oracle inputs do not match the netlist inputs")
    lines = []
    for ln in circuit.lines:
        if isinstance(ln.output, Useful) and ln.output_label in specs:
            ln = type(ln)(ln.name, ln.input, Useful(ln.output.name, specs[ln.output_label]))
        lines.append(ln)
    return Circuit(tuple(lines), circuit.gates, circuit.stages, circuit.name, reference.domain)


def _verify_gates(out) -> bool:
    ok = True
    for kind in quantum.catalog_kinds():
        if kind in (GateKind.NOT, GateKind.CNOT):
            continue
        chk = quantum.verify_decomposition(kind)
        ok &= chk.ok
        print(
            f"{kind.value}: cost={chk.cost} depth={chk.depth} max_error={chk.max_error:.2e} "
            f"{'ok' if chk.ok else 'FAIL'}",
            file=out,
        )
    return ok


def cmd_verify(args) -> int:
    out = sys.stdout
    if args.target == "gates":
        return EXIT_OK if _verify_gates(out) else EXIT_FAIL
    path = Path(args.target)
    if args.target.endswith(".real") or (path.exists() and args.target not in FAMILIES):
        try:
            circuit = netlist.parse_real(path.read_text(), name=path.name)
        except OSError as e:
            raise UsageError(f"cannot read {args.target}: {e.strerror}") from None
        ref = _reference_for(circuit, args.oracle)
        if ref is not None:
            circuit = attach_oracle(circuit, ref)
    else:
        circuit, _ = build(args.target, args.param, args.n, args.design)

    ok = True
    try:
        inputs, exhaustive = domain_inputs(circuit, args.exhaustive_bound, args.samples, args.seed)
    except BoundError as e:
        raise UsageError(f"{e} (pass --samples)") from None
    n_inputs = len(next(iter(inputs.values()))) if inputs else 1
    print(
        f"{circuit.name}: width {circuit.width}, "
        f"{'exhaustive' if exhaustive else 'sampled'} over {n_inputs} input assignments",
        file=out,
    )
    violations = check_roles(circuit, args.exhaustive_bound, args.samples, args.seed)
    for v in violations:
        print(f"  violation: {v}", file=out)
    ok &= not violations
    if circuit.width <= args.exhaustive_bound:
        perm = truth_table(circuit, args.exhaustive_bound).is_permutation()
        print(f"  truth table is a permutation: {perm}", file=out)
        ok &= perm
    used = {g.kind for g in circuit.gates} & set(quantum.catalog_kinds()) - {GateKind.NOT, GateKind.CNOT}
    for kind in sorted(used, key=lambda k: k.value):
        chk = quantum.verify_decomposition(kind)
        print(f"  {kind.value} decomposition: {'ok' if chk.ok else 'FAIL'}", file=out)
        ok &= chk.ok
    print("PASS" if ok else "FAIL", file=out)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# report


REPORT_TABLES = ("adder-nocarry", "adder-carry", "bcd", "formulas")


def build_report(table: str, n_list: list[int] | None, reproducible: bool) -> ReportDocument:
    ts = _timestamp(reproducible)
    if table == "formulas":
        ns = n_list or list(range(1, 65))
        return ReportDocument(
            title="Closed-form checks for the ripple-carry adders",
            formulas=analysis.check_formulas(ns),
            notes=["step delay at n=1 is recorded but not claimed by the closed forms"],
            generated=ts,
        )
    ns = n_list or list(analysis.TABLE_N)
    if table == "adder-nocarry":
        return ReportDocument(
            title="Ripple-carry adder without input carry", tables=analysis.comparison_report("no-carry", ns), generated=ts
        )
    if table == "adder-carry":
        return ReportDocument(
            title="Ripple-carry adder with input carry", tables=analysis.comparison_report("with-carry", ns), generated=ts
        )
    if table == "bcd":
        metrics = {f"rbcd-{v}": analysis.measure(generators.gen_rbcd(v)) for v in generators.VARIANTS}
        return ReportDocument(
            title="n-digit BCD adders",
            metrics=metrics,
            tables=analysis.comparison_report("bcd", ns),
            discrepancies=analysis.discrepancy_ledger((1,)),
            notes=["improvements compare prior designs with proposed design 3"],
            generated=ts,
        )
    raise UsageError(f"unknown report table {table!r}")


def cmd_report(args) -> int:
    doc = build_report(args.table, args.n_list, args.reproducible)
    _write(RENDERERS[args.format](doc), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revarith", description="Reversible adder netlists: generate, verify, report.")
    sub = p.add_subparsers(dest="command", required=True)

    def circuit_args(sp):
        sp.add_argument("param", nargs="?", type=int, help="bit width or RBCD variant")
        sp.add_argument("-n", type=int, help="bit width or digit count")
        sp.add_argument("--design", type=int, choices=generators.VARIANTS)

    g = sub.add_parser("gen", help="write a netlist")
    g.add_argument("family", choices=FAMILIES)
    circuit_args(g)
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=("real", "json"), default="real")
    g.add_argument("--expand-to-toffoli", action="store_true", help="rewrite Peres/TR into NOT/CNOT/Toffoli")
    g.add_argument("--reproducible", action="store_true", help="omit timestamps")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="simulate and check a generated circuit or a .real file")
    v.add_argument("target", help="a family name, 'gates', or a .real file")
    circuit_args(v)
    v.add_argument("--oracle", choices=ORACLES, default="auto", help="functional oracle for .real files")
    v.add_argument("--exhaustive-bound", type=int, default=DEFAULT_EXHAUSTIVE_BOUND)
    v.add_argument("--samples", type=int, help="random samples when the domain exceeds the bound")
    v.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="comparison tables and formula checks")
    r.add_argument("table", choices=REPORT_TABLES)
    r.add_argument("--n-list", type=parse_n_list)
    r.add_argument("--format", choices=("markdown", "json", "csv"), default="markdown")
    r.add_argument("--out")
    r.add_argument("--reproducible", action="store_true")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad usage
    try:
        return args.func(args)
    except (UsageError, CircuitError) as e:
        print(f"revarith: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
