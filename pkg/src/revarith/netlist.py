"""RevLib ``.real`` reading and writing, plus a JSON netlist form.

Besides the standard ``t1``/``t2``/``t3`` (NOT, CNOT, Toffoli, target last)
and ``f3`` (Fredkin, control first) mnemonics, two extension mnemonics are
used: ``p3 a b c`` for Peres and ``tr3 a b c`` for TR.  Strict readers can be
served with :func:`expand_to_toffoli`, which rewrites both into NOT, CNOT and
Toffoli gates.

Output roles are recovered as follows: a ``1`` in ``.garbage`` marks a
garbage output; otherwise an output whose label matches an input label is a
regenerated input, and anything else is a useful output.  Role spec functions
are not part of the file format.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .core import (
    Ancilla,
    Circuit,
    CircuitError,
    Gate,
    GateKind,
    Garbage,
    Line,
    PrimaryInput,
    RegeneratedInput,
    Useful,
    cnot,
    not_,
    toffoli,
)

MNEMONIC = {
    GateKind.NOT: "t1",
    GateKind.CNOT: "t2",
    GateKind.TOFFOLI: "t3",
    GateKind.FREDKIN: "f3",
    GateKind.PERES: "p3",
    GateKind.TR: "tr3",
}
_KIND = {v: k for k, v in MNEMONIC.items()}


class ParseError(CircuitError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def emit_real(circuit: Circuit, comments: Iterable[str] = ()) -> str:
    out = [f"# {c}" if c else "#" for c in comments]
    names = [ln.name for ln in circuit.lines]
    out += [
        ".version 2.0",
        f".numvars {circuit.width}",
        ".variables " + " ".join(names),
        ".inputs " + " ".join(ln.input_label for ln in circuit.lines),
        ".outputs " + " ".join(ln.output_label for ln in circuit.lines),
        ".constants "
        + "".join(str(ln.input.value) if isinstance(ln.input, Ancilla) else "-" for ln in circuit.lines),
        ".garbage " + "".join("1" if ln.is_garbage else "-" for ln in circuit.lines),
        ".begin",
    ]
    for g in circuit.gates:
        if g.kind not in MNEMONIC:
            raise CircuitError(f"{g} cannot be written to .real")
        out.append(MNEMONIC[g.kind] + " " + " ".join(names[w] for w in g.wires))
    out.append(".end")
    return "\n".join(out) + "\n"


@dataclass
class _Header:
    numvars: int | None = None
    variables: list[str] | None = None
    inputs: list[str] | None = None
    outputs: list[str] | None = None
    constants: str | None = None
    garbage: str | None = None


def parse_real(text: str, name: str = "") -> Circuit:
    h = _Header()
    gates: list[Gate] = []
    index: dict[str, int] = {}
    state = "header"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, args = words[0], words[1:]
        if state == "header":
            if head == ".begin":
                index = _finish_header(h, lineno)
                state = "body"
            elif head == ".version":
                pass
            elif head == ".numvars":
                if len(args) != 1 or not args[0].isdigit():
                    raise ParseError(lineno, ".numvars needs one integer")
                h.numvars = int(args[0])
            elif head in (".variables", ".inputs", ".outputs"):
                setattr(h, head[1:], args)
            elif head in (".constants", ".garbage"):
                setattr(h, head[1:], "".join(args))
            elif head.startswith("."):
                raise ParseError(lineno, f"unknown header directive {head!r}")
            else:
                raise ParseError(lineno, f"gate {head!r} before .begin")
        elif state == "body":
            if head == ".end":
                state = "done"
                continue
            kind = _KIND.get(head)
            if kind is None:
                raise ParseError(lineno, f"unknown gate mnemonic {head!r}")
            if len(args) != kind.arity:
                raise ParseError(lineno, f"{head} takes {kind.arity} operands, got {len(args)}")
            if len(set(args)) != len(args):
                raise ParseError(lineno, f"duplicate wire in {line!r}")
            try:
                wires = tuple(index[a] for a in args)
            except KeyError as e:
                raise ParseError(lineno, f"unknown variable {e.args[0]!r}") from None
            gates.append(Gate(kind, wires))
        else:
            raise ParseError(lineno, "content after .end")
    if state == "header":
        raise ParseError(0, "missing .begin")
    if state == "body":
        raise ParseError(0, "missing .end")
    return Circuit(_lines(h), tuple(gates), name=name)


def _finish_header(h: _Header, lineno: int) -> dict[str, int]:
    if h.variables is None:
        raise ParseError(lineno, "missing .variables")
    n = len(h.variables)
    if h.numvars is not None and h.numvars != n:
        raise ParseError(lineno, f".numvars {h.numvars} but {n} variables")
    if len(set(h.variables)) != n:
        raise ParseError(lineno, "duplicate variable name")
    h.inputs = h.inputs if h.inputs is not None else list(h.variables)
    h.outputs = h.outputs if h.outputs is not None else list(h.variables)
    h.constants = h.constants if h.constants is not None else "-" * n
    h.garbage = h.garbage if h.garbage is not None else "-" * n
    for what, v in (("inputs", h.inputs), ("outputs", h.outputs), ("constants", h.constants), ("garbage", h.garbage)):
        if len(v) != n:
            raise ParseError(lineno, f".{what} has {len(v)} entries for {n} variables")
    if set(h.constants) - set("01-"):
        raise ParseError(lineno, ".constants may only hold 0, 1 or -")
    if set(h.garbage) - set("1-"):
        raise ParseError(lineno, ".garbage may only hold 1 or -")
    return {v: i for i, v in enumerate(h.variables)}


def _lines(h: _Header) -> tuple[Line, ...]:
    in_roles = []
    labels = set()
    for var, label, const in zip(h.variables, h.inputs, h.constants):
        if const == "-":
            in_roles.append(PrimaryInput(label))
            labels.add(label)
        else:
            in_roles.append(Ancilla(int(const)))
            labels.add(var)
    lines = []
    for var, inp, out, g in zip(h.variables, in_roles, h.outputs, h.garbage):
        if g == "1":
            role = Garbage(out)
        elif out in labels:
            role = RegeneratedInput(out)
        else:
            role = Useful(out)
        lines.append(Line(var, inp, role))
    return tuple(lines)


def expand_to_toffoli(circuit: Circuit) -> Circuit:
    """Rewrite Peres and TR gates into NOT/CNOT/Toffoli.  Stage annotations
    are dropped since the declared depths no longer describe the gates."""
    gates: list[Gate] = []
    for g in circuit.gates:
        if g.kind is GateKind.PERES:
            a, b, c = g.wires
            gates += [toffoli(a, b, c), cnot(a, b)]
        elif g.kind is GateKind.TR:
            a, b, c = g.wires
            gates += [not_(b), toffoli(a, b, c), not_(b), cnot(a, b)]
        else:
            gates.append(g)
    return circuit.with_gates(gates, stages=None)


# ---------------------------------------------------------------------------
# JSON netlist


def _role_dict(ln: Line) -> dict:
    if isinstance(ln.input, Ancilla):
        inp = {"ancilla": ln.input.value}
    else:
        inp = {"primary": ln.input.name}
    kind = {Useful: "useful", RegeneratedInput: "regenerated", Garbage: "garbage"}[type(ln.output)]
    return {"name": ln.name, "input": inp, "output": {kind: ln.output.name}}


def netlist_dict(circuit: Circuit) -> dict:
    return {
        "name": circuit.name,
        "lines": [_role_dict(ln) for ln in circuit.lines],
        "gates": [[g.kind.value, *g.wires] for g in circuit.gates],
        "stages": None
        if circuit.stages is None
        else [{"label": s.label, "start": s.start, "stop": s.stop, "depth": s.depth} for s in circuit.stages],
    }
