"""Netlist generators for the ancilla-free ripple-carry adders and the BCD
adders built from them.

Every generator returns a :class:`~revarith.core.Circuit` whose lines carry
full role metadata and whose gate list is tiled by :class:`Stage` records.
Stage depths follow the hand delay accounting of each construction (parallel
CNOT layers count 1Δ, serial chains count each gate's logical depth, and the
overlaps of the with-carry adder are credited); :func:`analysis.step_delay`
sums them.

Line order inside an adder is ``[c0,] b0, a0, b1, a1, ..., z``: location
``B_i`` holds ``b_i`` and ends with ``s_i``, location ``A_i`` holds ``a_i`` and
is restored, the extra location ``z`` ends with ``z ^ s_n``.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .core import (
    Ancilla,
    Circuit,
    CircuitError,
    Field,
    Gate,
    Garbage,
    Line,
    PrimaryInput,
    RegeneratedInput,
    Stage,
    Useful,
    cnot,
    not_,
    peres,
    toffoli,
    tr,
    value_of,
)
from .quantum import block_depth

Part = tuple[str, list[Gate], int]  # stage label, gates, declared depth


# ---------------------------------------------------------------------------
# adder bodies on arbitrary line indices


def no_carry_steps(A: Sequence[int], B: Sequence[int]) -> list[Part]:
    """Six steps of the adder without input carry.

    ``A`` holds the n+1 locations A_0..A_n (A_n is the z line), ``B`` the n
    locations B_0..B_{n-1}.
    """
    n = len(B)
    if n < 1 or len(A) != n + 1:
        raise CircuitError("need n >= 1 b-lines and n+1 a-lines")
    s1 = [cnot(A[i], B[i]) for i in range(1, n)]
    s2 = [cnot(A[i], A[i + 1]) for i in range(n - 1, 0, -1)]
    s3 = [toffoli(B[i], A[i], A[i + 1]) for i in range(n - 1)]
    s4 = [peres(A[i], B[i], A[i + 1]) for i in range(n - 1, -1, -1)]
    s5 = [cnot(A[i], A[i + 1]) for i in range(1, n - 1)]
    s6 = [cnot(A[i], B[i]) for i in range(1, n)]
    return [
        ("step1", s1, 1 if s1 else 0),
        ("step2", s2, len(s2)),
        ("step3", s3, 5 * len(s3)),
        ("step4", s4, 4 * len(s4)),
        ("step5", s5, len(s5)),
        ("step6", s6, 1 if s6 else 0),
    ]


def with_carry_steps(A: Sequence[int], B: Sequence[int]) -> list[Part]:
    """Six steps of the adder with input carry.

    ``A`` holds the n+2 locations A_{-1}..A_n: ``A[0]`` is the c0 line,
    ``A[i + 1]`` is A_i and ``A[n + 1]`` is the z line.
    """
    n = len(B)
    if n < 1 or len(A) != n + 2:
        raise CircuitError("need n >= 1 b-lines and n+2 a-lines")

    def loc(i: int) -> int:
        return A[i + 1]

    s1 = [cnot(loc(i), B[i]) for i in range(n)]
    s2 = [cnot(loc(i + 1), loc(i)) for i in range(-1, n - 1)] + [cnot(loc(n - 1), loc(n))]
    s3a = [toffoli(loc(i - 1), B[i], loc(i)) for i in range(n - 1)]
    s3a.append(peres(loc(n - 2), B[n - 1], loc(n)))
    s3b = [not_(B[i]) for i in range(n - 1)]
    s4a = [tr(loc(i - 1), B[i], loc(i)) for i in range(n - 2, -1, -1)]
    s4b = [not_(B[i]) for i in range(n - 1)]
    s5 = [cnot(loc(i), loc(i - 1)) for i in range(n - 1, -1, -1)]
    s6 = [cnot(loc(i), B[i]) for i in range(n)]
    # Only two step-2 CNOTs sit on the critical path, the NOTs of step 3 hide
    # under the Peres gate and all but the last NOT of step 4 under the TRs.
    return [
        ("step1", s1, 1),
        ("step2", s2, 2),
        ("step3", s3a + s3b, 5 * (n - 1) + 4),
        ("step4", s4a + s4b, 4 * (n - 1) + (1 if s4b else 0)),
        ("step5", s5, 1),
        ("step6", s6, 1),
    ]


def detection_gates(k1: int, k2: int, k3: int, cout: int, anc: int) -> list[Gate]:
    """OC = Cout ^ K3(K2 + K1) written onto ``cout``; K lines and ``anc`` restored."""
    return [
        not_(k1),
        not_(k2),
        peres(k1, k2, anc),  # anc = ~K1 & ~K2
        tr(k3, anc, cout),  # cout ^= K3 & ~(~K1 & ~K2)
        cnot(k3, anc),
        tr(k1, k2, anc),  # inverse of the first Peres
        not_(k1),
        not_(k2),
    ]


def correction_parts(k1: int, k2: int, k3: int, oc: int, oc_copy: int) -> list[Part]:
    """Add 0110*OC to K3..K1 as a 2-bit adder with a = (OC, OC), b = (K1, K2)
    and the z location on K3; both OC lines are restored."""
    return no_carry_steps([oc, oc_copy, k3], [k1, k2])


def bin2bcd_gates(k1: int, k2: int, k3: int, c: int) -> list[Gate]:
    """Five-bit binary (c, K3..K0) to BCD for values 0..19; K0 is a wire.

    On the top four bits this is 'add 3 when the value is 5 or more'.
    """
    return [
        cnot(k3, k1),
        peres(k3, k1, c),
        cnot(c, k3),
        tr(c, k2, k3),
        cnot(k3, c),
        peres(c, k1, k3),
        cnot(k3, k2),
    ]


# ---------------------------------------------------------------------------
# assembly


def _assemble(lines: list[Line], parts: list[Part], name: str, domain: tuple[Field, ...] = ()) -> Circuit:
    gates: list[Gate] = []
    stages: list[Stage] = []
    for label, gs, depth in parts:
        start = len(gates)
        gates.extend(gs)
        stages.append(Stage(label, start, len(gates), depth))
    return Circuit(tuple(lines), tuple(gates), tuple(stages), name=name, domain=domain)


def _block(label: str, gates: list[Gate]) -> Part:
    return (label, gates, block_depth(gates))


def _prefixed(prefix: str, parts: list[Part]) -> list[Part]:
    return [(f"{prefix}.{label}", gs, d) for label, gs, d in parts]


def _sum_bit(a_names: Sequence[str], b_names: Sequence[str], c_name: str | None, i: int):
    def spec(x):
        total = value_of(x, a_names) + value_of(x, b_names) + (x[c_name] if c_name else 0)
        return (total >> i) & 1

    return spec


def _z_bit(a_names, b_names, c_name, n):
    carry = _sum_bit(a_names, b_names, c_name, n)

    def spec(x):
        return x["z"] ^ carry(x)

    return spec


@dataclass(frozen=True)
class AdderSpec:
    """Line layout of an n-bit ripple-carry adder."""

    n: int
    with_input_carry: bool

    def __post_init__(self) -> None:
        if self.n < 1:
            raise CircuitError(f"adder width must be >= 1, got {self.n}")

    @property
    def a_names(self) -> list[str]:
        return [f"a{i}" for i in range(self.n)]

    @property
    def b_names(self) -> list[str]:
        return [f"b{i}" for i in range(self.n)]

    @property
    def line_names(self) -> list[str]:
        names = ["c0"] if self.with_input_carry else []
        for i in range(self.n):
            names += [f"b{i}", f"a{i}"]
        return names + ["z"]

    def index(self, name: str) -> int:
        return self.line_names.index(name)

    @property
    def a_locations(self) -> list[int]:
        """A-side locations as the step builders expect them."""
        locs = [self.index(a) for a in self.a_names] + [self.index("z")]
        return [self.index("c0")] + locs if self.with_input_carry else locs

    @property
    def b_locations(self) -> list[int]:
        return [self.index(b) for b in self.b_names]

    def lines(self) -> list[Line]:
        c = "c0" if self.with_input_carry else None
        out = []
        for name in self.line_names:
            if name in ("c0",) or name.startswith("a"):
                out.append(Line(name, PrimaryInput(name), RegeneratedInput(name)))
            elif name.startswith("b"):
                i = int(name[1:])
                out.append(
                    Line(name, PrimaryInput(name), Useful(f"s{i}", _sum_bit(self.a_names, self.b_names, c, i)))
                )
            else:
                out.append(
                    Line(name, PrimaryInput(name), Useful(f"s{self.n}", _z_bit(self.a_names, self.b_names, c, self.n)))
                )
        return out


def gen_rca_no_carry(n: int) -> Circuit:
    spec = AdderSpec(n, with_input_carry=False)
    parts = no_carry_steps(spec.a_locations, spec.b_locations)
    return _assemble(spec.lines(), parts, f"rca-nocarry-{n}")


def gen_rca_with_carry(n: int) -> Circuit:
    spec = AdderSpec(n, with_input_carry=True)
    parts = with_carry_steps(spec.a_locations, spec.b_locations)
    return _assemble(spec.lines(), parts, f"rca-carry-{n}")


def _keep(name: str) -> Line:
    return Line(name, PrimaryInput(name), RegeneratedInput(name))


def gen_detection() -> Circuit:
    lines = [
        _keep("k1"),
        _keep("k2"),
        _keep("k3"),
        Line("cout", PrimaryInput("cout"), Useful("oc", lambda x: x["cout"] ^ (x["k3"] & (x["k1"] | x["k2"])))),
        Line("anc", Ancilla(0), RegeneratedInput("anc")),
    ]
    return _assemble(lines, [_block("detect", detection_gates(0, 1, 2, 3, 4))], "detection")


def gen_correction() -> Circuit:
    """Lines k0..k3, oc and oc_copy; both OC lines must carry the same bit."""

    def s(i):
        return lambda x: ((value_of(x, ["k0", "k1", "k2", "k3"]) + 6 * x["oc"]) >> i) & 1

    lines = [Line(f"k{i}", PrimaryInput(f"k{i}"), Useful(f"s{i}", s(i))) for i in range(4)]
    lines += [_keep("oc"), _keep("oc_copy")]
    domain = (Field(("oc", "oc_copy"), (0, 3)),)
    return _assemble(lines, _prefixed("correct", correction_parts(1, 2, 3, 4, 5)), "correction", domain)


def _bcd_digit_spec(names: Sequence[str], i: int, carry: bool = False):
    def spec(x):
        v = value_of(x, names)
        return (v >= 10) if carry else ((v % 10) >> i) & 1

    return spec


def gen_bin2bcd() -> Circuit:
    """Five-line binary to BCD converter without ancilla.

    Inputs 20..31 never arise from a BCD adder; the circuit maps them onto
    the unused codes {10..15, 26..31} in the fixed order its gates dictate.
    """
    bits = ["k0", "k1", "k2", "k3", "cout"]
    lines = [Line(b, PrimaryInput(b), Useful(f"d{i}", _bcd_digit_spec(bits, i))) for i, b in enumerate(bits[:4])]
    lines.append(Line("cout", PrimaryInput("cout"), Useful("c", _bcd_digit_spec(bits, 0, carry=True))))
    domain = (Field(tuple(bits), tuple(range(20))),)
    return _assemble(lines, [_block("convert", bin2bcd_gates(1, 2, 3, 4))], "bin2bcd", domain)


# ---------------------------------------------------------------------------
# BCD adders


VARIANTS = (1, 2, 3, 4)
_HAS_CARRY_IN = {1: True, 2: False, 3: True, 4: False}
_USES_DETECTION = {1: True, 2: True, 3: False, 4: False}


@dataclass(frozen=True)
class BcdStageSpec:
    """Where the intermediate BCD signals live in a one-digit adder.

    After gate ``adder_stop`` the lines ``k_lines`` hold the binary sum
    K0..K3 and ``cout_line`` the binary carry.  For detection-based variants
    ``cout_line`` holds OC from gate ``detection_stop`` on.
    """

    variant: int
    k_lines: tuple[int, ...]
    cout_line: int
    adder_stop: int
    detection_stop: int | None


def _digit_parts(variant: int, c0: int | None, a: list[int], b: list[int], z: int, e: int | None) -> list[Part]:
    if _HAS_CARRY_IN[variant]:
        parts = with_carry_steps([c0, *a, z], b)
    else:
        parts = no_carry_steps([*a, z], b)
    parts = _prefixed("adder", parts)
    if _USES_DETECTION[variant]:
        parts.append(_block("detect", detection_gates(b[1], b[2], b[3], z, e)))
        parts.append(("fanout", [cnot(z, e)], 1))
        parts += _prefixed("correct", correction_parts(b[1], b[2], b[3], z, e))
    else:
        parts.append(_block("convert", bin2bcd_gates(b[1], b[2], b[3], z)))
    return parts


def gen_ndigit_bcd(design: int, n: int) -> Circuit:
    """n-digit BCD adder.

    Design 1 cascades RBCD-1, design 3 cascades RBCD-3; designs 2 and 4 put
    the carry-free RBCD-2 / RBCD-4 on the least significant digit and RBCD-1
    / RBCD-3 above it.  Each digit's OC line serves as the next digit's c0
    and comes back out as a garbage line.
    """
    if design not in VARIANTS:
        raise CircuitError(f"BCD design must be one of {VARIANTS}, got {design!r}")
    if n < 1:
        raise CircuitError(f"digit count must be >= 1, got {n}")
    lower = {1: 1, 2: 1, 3: 3, 4: 3}[design]

    def nm(base: str, k: int) -> str:
        return base if n == 1 else f"{base}_{k}"

    carry_in = _HAS_CARRY_IN[design]
    lines: list[Line] = []
    if carry_in:
        lines.append(_keep("c0"))
    a_all: list[list[str]] = []
    b_all: list[list[str]] = []
    digit_lines = []
    for k in range(n):
        variant = design if k == 0 else lower
        a_names = [nm(f"a{i}", k) for i in range(4)]
        b_names = [nm(f"b{i}", k) for i in range(4)]
        a_all.append(a_names)
        b_all.append(b_names)
        a_idx, b_idx = [], []
        for i in range(4):
            b_idx.append(len(lines))
            lines.append(Line(b_names[i], PrimaryInput(b_names[i]), Useful(nm(f"s{i}", k))))
            a_idx.append(len(lines))
            lines.append(_keep(a_names[i]))
        z = len(lines)
        lines.append(Line(nm("z", k), Ancilla(0), Useful(nm("oc", k))))
        e = None
        if _USES_DETECTION[variant]:
            e = len(lines)
            lines.append(Line(nm("e", k), Ancilla(0), Garbage(nm("g1", k))))
        digit_lines.append((variant, a_idx, b_idx, z, e))

    parts: list[Part] = []
    for k, (variant, a_idx, b_idx, z, e) in enumerate(digit_lines):
        if k == 0:
            c0 = 0 if carry_in else None
        else:
            c0 = digit_lines[k - 1][3]
        prefix = f"digit{k}" if n > 1 else f"rbcd{variant}"
        parts += _prefixed(prefix, _digit_parts(variant, c0, a_idx, b_idx, z, e))

    # Output roles: sum digits and final carry are useful, inner carries come
    # back as regenerated c0 of the next digit and are garbage there.
    c_name = "c0" if carry_in else None

    def total(x):
        ta = sum(value_of(x, a_all[k]) * 10**k for k in range(n))
        tb = sum(value_of(x, b_all[k]) * 10**k for k in range(n))
        return ta + tb + (x[c_name] if c_name else 0)

    def digit_bit(k, i):
        return lambda x: ((total(x) // 10**k) % 10 >> i) & 1

    final = []
    for k, (variant, a_idx, b_idx, z, e) in enumerate(digit_lines):
        for i, li in enumerate(b_idx):
            ln = lines[li]
            final.append((li, Line(ln.name, ln.input, Useful(nm(f"s{i}", k), digit_bit(k, i)))))
        if k < n - 1:
            ln = lines[z]
            final.append((z, Line(ln.name, ln.input, Garbage(f"gc_{k + 1}"))))
        else:
            ln = lines[z]
            final.append((z, Line(ln.name, ln.input, Useful("cout", lambda x: total(x) >= 10**n))))
    for li, ln in final:
        lines[li] = ln

    domain = tuple(Field(tuple(names), tuple(range(10))) for names in a_all + b_all)
    label = f"rbcd-{design}" if n == 1 else f"bcd-ndigit-{design}-{n}"
    return _assemble(lines, parts, label, domain)


def gen_rbcd(variant: int) -> Circuit:
    """One-digit BCD adder RBCD-1..4 (the one-digit case of the cascade)."""
    if variant not in VARIANTS:
        raise CircuitError(f"RBCD variant must be one of {VARIANTS}, got {variant!r}")
    return gen_ndigit_bcd(variant, 1)


def rbcd_stage_spec(variant: int) -> BcdStageSpec:
    c = gen_rbcd(variant)
    adder_stop = max(st.stop for st in c.stages if ".adder." in st.label)
    det = [st.stop for st in c.stages if st.label.endswith(".detect")]
    return BcdStageSpec(
        variant=variant,
        k_lines=tuple(c.index(f"b{i}") for i in range(4)),
        cout_line=c.index("z"),
        adder_stop=adder_stop,
        detection_stop=det[0] if det else None,
    )


GENERATORS = {
    "rca-nocarry": gen_rca_no_carry,
    "rca-carry": gen_rca_with_carry,
    "detection": gen_detection,
    "correction": gen_correction,
    "bin2bcd": gen_bin2bcd,
    "rbcd": gen_rbcd,
    "bcd-ndigit": gen_ndigit_bcd,
}
