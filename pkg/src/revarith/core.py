"""Gate and circuit data model with classical bit-level semantics.

Bit-words are plain integers: line ``i`` of a circuit is bit ``i`` of the
word.  Two simulation paths exist.  :func:`apply_gate` / :func:`simulate`
work on single words, :func:`simulate_batch` works bit-sliced over numpy
boolean arrays, one array per line, and is what the exhaustive and sampled
sweeps use.
"""
from __future__ import annotations

import enum
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

DEFAULT_EXHAUSTIVE_BOUND = 16
DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 0xC0FFEE


class CircuitError(ValueError):
    """Malformed gate, circuit or simulation request."""


class BoundError(CircuitError):
    """An exhaustive sweep was requested over too many inputs."""


class GateKind(enum.Enum):
    NOT = "not"
    CNOT = "cnot"
    TOFFOLI = "toffoli"
    PERES = "peres"
    TR = "tr"
    FREDKIN = "fredkin"
    CV = "cv"
    CVPLUS = "cvplus"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def classical(self) -> bool:
        return self not in (GateKind.CV, GateKind.CVPLUS)


_ARITY = {
    GateKind.NOT: 1,
    GateKind.CNOT: 2,
    GateKind.TOFFOLI: 3,
    GateKind.PERES: 3,
    GateKind.TR: 3,
    GateKind.FREDKIN: 3,
    GateKind.CV: 2,
    GateKind.CVPLUS: 2,
}


@dataclass(frozen=True)
class Gate:
    """A gate applied to an ordered tuple of wires.

    Wire order follows the usual reading of each gate: ``(target,)`` for NOT,
    ``(control, target)`` for CNOT and the controlled-V family,
    ``(c1, c2, target)`` for Toffoli, ``(A, B, C)`` for Peres and TR, and
    ``(control, t1, t2)`` for Fredkin.
    """

    kind: GateKind
    wires: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if len(self.wires) != self.kind.arity:
            raise CircuitError(
                f"{self.kind.value} takes {self.kind.arity} wires, got {len(self.wires)}"
            )
        if len(set(self.wires)) != len(self.wires):
            raise CircuitError(f"{self.kind.value} wires must be distinct: {self.wires}")
        if min(self.wires) < 0:
            raise CircuitError(f"negative wire index in {self.wires}")

    def __str__(self) -> str:
        return f"{self.kind.value}({', '.join(map(str, self.wires))})"

    def remap(self, mapping: Sequence[int]) -> Gate:
        return Gate(self.kind, tuple(mapping[w] for w in self.wires))


def not_(t: int) -> Gate:
    return Gate(GateKind.NOT, (t,))


def cnot(c: int, t: int) -> Gate:
    return Gate(GateKind.CNOT, (c, t))


def toffoli(c1: int, c2: int, t: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2, t))


def peres(a: int, b: int, c: int) -> Gate:
    return Gate(GateKind.PERES, (a, b, c))


def tr(a: int, b: int, c: int) -> Gate:
    return Gate(GateKind.TR, (a, b, c))


def fredkin(c: int, t1: int, t2: int) -> Gate:
    return Gate(GateKind.FREDKIN, (c, t1, t2))


def cv(c: int, t: int) -> Gate:
    return Gate(GateKind.CV, (c, t))


def cvplus(c: int, t: int) -> Gate:
    return Gate(GateKind.CVPLUS, (c, t))


# ---------------------------------------------------------------------------
# line roles


@dataclass(frozen=True)
class PrimaryInput:
    name: str


@dataclass(frozen=True)
class Ancilla:
    value: int = 0

    def __post_init__(self) -> None:
        if self.value not in (0, 1):
            raise CircuitError(f"ancilla constant must be 0 or 1, got {self.value!r}")


SpecFn = Callable[[Mapping[str, object]], object]


@dataclass(frozen=True)
class Useful:
    """A result output.  ``spec`` optionally computes the expected bit from the
    primary inputs; it must accept ints or numpy integer arrays."""

    name: str
    spec: SpecFn | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RegeneratedInput:
    """Output that restores an input.  ``name`` is a primary input name or the
    line name of an ancilla (the line then returns to its constant)."""

    name: str


@dataclass(frozen=True)
class Garbage:
    name: str


InputRole = Union[PrimaryInput, Ancilla]
OutputRole = Union[Useful, RegeneratedInput, Garbage]


@dataclass(frozen=True)
class Line:
    name: str
    input: InputRole
    output: OutputRole

    @property
    def is_ancilla(self) -> bool:
        return isinstance(self.input, Ancilla)

    @property
    def is_garbage(self) -> bool:
        return isinstance(self.output, Garbage)

    @property
    def input_label(self) -> str:
        return self.input.name if isinstance(self.input, PrimaryInput) else self.name

    @property
    def output_label(self) -> str:
        return self.output.name


@dataclass(frozen=True)
class Stage:
    """Gate range ``[start, stop)`` with its declared delay contribution in Δ."""

    label: str
    start: int
    stop: int
    depth: int


@dataclass(frozen=True)
class Field:
    """Input lines read as one little-endian integer restricted to ``values``.

    Used to describe the valid input domain of a circuit (BCD digits, say);
    primary inputs not covered by any field range over {0, 1}.
    """

    names: tuple[str, ...]
    values: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    lines: tuple[Line, ...]
    gates: tuple[Gate, ...] = ()
    stages: tuple[Stage, ...] | None = field(default=None, compare=False)
    name: str = field(default="", compare=False)
    domain: tuple[Field, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "gates", tuple(self.gates))
        width = len(self.lines)
        for g in self.gates:
            if not g.kind.classical:
                raise CircuitError(f"{g} is not a classical gate")
            if max(g.wires) >= width:
                raise CircuitError(f"{g} exceeds circuit width {width}")
        _unique("line name", [ln.name for ln in self.lines])
        _unique("input name", [ln.input_label for ln in self.lines])
        _unique("output name", [ln.output_label for ln in self.lines])
        known = {ln.input_label for ln in self.lines}
        for ln in self.lines:
            if isinstance(ln.output, RegeneratedInput) and ln.output.name not in known:
                raise CircuitError(
                    f"line {ln.name!r} regenerates unknown input {ln.output.name!r}"
                )
        if self.stages is not None:
            object.__setattr__(self, "stages", tuple(self.stages))
            pos = 0
            for st in self.stages:
                if st.start != pos or st.stop < st.start:
                    raise CircuitError(f"stage {st.label!r} does not tile the gate list")
                pos = st.stop
            if pos != len(self.gates):
                raise CircuitError("stages do not cover every gate")
        inputs = set(self.input_names)
        for f in self.domain:
            missing = set(f.names) - inputs
            if missing:
                raise CircuitError(f"domain field refers to unknown inputs {sorted(missing)}")

    @property
    def width(self) -> int:
        return len(self.lines)

    @property
    def input_names(self) -> list[str]:
        return [ln.input.name for ln in self.lines if isinstance(ln.input, PrimaryInput)]

    @property
    def output_names(self) -> list[str]:
        return [ln.output_label for ln in self.lines]

    def index(self, line_name: str) -> int:
        for i, ln in enumerate(self.lines):
            if ln.name == line_name:
                return i
        raise KeyError(line_name)

    def prefix(self, stop: int) -> Circuit:
        """The first ``stop`` gates, with role specs dropped (they describe the
        full circuit only)."""
        lines = tuple(
            replace(ln, output=Useful(ln.output_label)) for ln in self.lines
        )
        return Circuit(lines, self.gates[:stop], name=self.name)

    def with_gates(self, gates: Sequence[Gate], stages: tuple[Stage, ...] | None = None) -> Circuit:
        return replace(self, gates=tuple(gates), stages=stages)


def _unique(what: str, names: list[str]) -> None:
    seen: set[str] = set()
    for n in names:
        if n in seen:
            raise CircuitError(f"duplicate {what} {n!r}")
        seen.add(n)


# ---------------------------------------------------------------------------
# single-word semantics


def _bit(word: int, i: int) -> int:
    return (word >> i) & 1


def apply_gate(gate: Gate, word: int, width: int | None = None) -> int:
    if not gate.kind.classical:
        raise CircuitError(f"{gate} has no classical semantics")
    if width is not None and max(gate.wires) >= width:
        raise CircuitError(f"{gate} exceeds word width {width}")
    k, w = gate.kind, gate.wires
    if k is GateKind.NOT:
        return word ^ (1 << w[0])
    if k is GateKind.CNOT:
        return word ^ (_bit(word, w[0]) << w[1])
    if k is GateKind.TOFFOLI:
        return word ^ ((_bit(word, w[0]) & _bit(word, w[1])) << w[2])
    a, b, c = w
    if k is GateKind.FREDKIN:
        m = _bit(word, a) & (_bit(word, b) ^ _bit(word, c))
        return word ^ (m << b) ^ (m << c)
    A, B = _bit(word, a), _bit(word, b)
    r = (A & B) if k is GateKind.PERES else (A & (B ^ 1))
    return word ^ (A << b) ^ (r << c)


def run(circuit: Circuit, word: int) -> int:
    for g in circuit.gates:
        word = apply_gate(g, word)
    return word


def input_word(circuit: Circuit, inputs: Mapping[str, int]) -> int:
    expected = set(circuit.input_names)
    given = set(inputs)
    if given != expected:
        parts = []
        if expected - given:
            parts.append(f"missing {sorted(expected - given)}")
        if given - expected:
            parts.append(f"unexpected {sorted(given - expected)}")
        raise CircuitError("bad input assignment: " + ", ".join(parts))
    word = 0
    for i, ln in enumerate(circuit.lines):
        v = inputs[ln.input.name] if isinstance(ln.input, PrimaryInput) else ln.input.value
        if v not in (0, 1):
            raise CircuitError(f"input {ln.input_label!r} must be 0 or 1, got {v!r}")
        word |= int(v) << i
    return word


def simulate(circuit: Circuit, inputs: Mapping[str, int]) -> dict[str, int]:
    """Run the circuit on one named assignment; returns every output bit
    keyed by its output label."""
    out = run(circuit, input_word(circuit, inputs))
    return {ln.output_label: _bit(out, i) for i, ln in enumerate(circuit.lines)}


# ---------------------------------------------------------------------------
# bit-sliced semantics


def apply_gates_sliced(gates: Sequence[Gate], state: list[np.ndarray]) -> list[np.ndarray]:
    """Apply gates in place to a list of boolean arrays, one per line."""
    x = state
    for g in gates:
        k, w = g.kind, g.wires
        if k is GateKind.NOT:
            x[w[0]] = ~x[w[0]]
        elif k is GateKind.CNOT:
            x[w[1]] = x[w[1]] ^ x[w[0]]
        elif k is GateKind.TOFFOLI:
            x[w[2]] = x[w[2]] ^ (x[w[0]] & x[w[1]])
        elif k is GateKind.PERES:
            a, b, c = w
            x[c] = x[c] ^ (x[a] & x[b])
            x[b] = x[b] ^ x[a]
        elif k is GateKind.TR:
            a, b, c = w
            x[c] = x[c] ^ (x[a] & ~x[b])
            x[b] = x[b] ^ x[a]
        elif k is GateKind.FREDKIN:
            a, b, c = w
            m = x[a] & (x[b] ^ x[c])
            x[b] = x[b] ^ m
            x[c] = x[c] ^ m
        else:
            raise CircuitError(f"{g} has no classical semantics")
    return x


def simulate_batch(circuit: Circuit, inputs: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Vectorised :func:`simulate`: each input maps to an array of 0/1 values
    (all of one length); returns boolean arrays keyed by output label."""
    expected = set(circuit.input_names)
    if set(inputs) != expected:
        raise CircuitError(
            f"bad input assignment: expected {sorted(expected)}, got {sorted(inputs)}"
        )
    arrays = {k: np.asarray(v).astype(bool) for k, v in inputs.items()}
    sizes = {a.shape for a in arrays.values()}
    if len(sizes) > 1:
        raise CircuitError("input arrays differ in shape")
    shape = sizes.pop() if sizes else (1,)
    state = []
    for ln in circuit.lines:
        if isinstance(ln.input, PrimaryInput):
            state.append(arrays[ln.input.name].copy())
        else:
            state.append(np.full(shape, bool(ln.input.value)))
    apply_gates_sliced(circuit.gates, state)
    return {ln.output_label: state[i] for i, ln in enumerate(circuit.lines)}


def _words_to_lines(words: np.ndarray, width: int) -> list[np.ndarray]:
    return [((words >> i) & 1).astype(bool) for i in range(width)]


def _lines_to_words(lines: list[np.ndarray]) -> np.ndarray:
    out = np.zeros(lines[0].shape, dtype=np.int64) if lines else np.zeros(1, dtype=np.int64)
    for i, ln in enumerate(lines):
        out |= ln.astype(np.int64) << i
    return out


def run_words(gates: Sequence[Gate], words: np.ndarray, width: int) -> np.ndarray:
    return _lines_to_words(apply_gates_sliced(gates, _words_to_lines(np.asarray(words), width)))


# ---------------------------------------------------------------------------
# truth tables


@dataclass(frozen=True, eq=False)
class TruthTable:
    """Output word for every input word of a ``width``-line circuit."""

    width: int
    mapping: np.ndarray

    def __getitem__(self, word: int) -> int:
        return int(self.mapping[word])

    def __len__(self) -> int:
        return len(self.mapping)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TruthTable)
            and self.width == other.width
            and np.array_equal(self.mapping, other.mapping)
        )

    def is_permutation(self) -> bool:
        n = 1 << self.width
        return len(self.mapping) == n and np.array_equal(np.sort(self.mapping), np.arange(n))

    def inverse(self) -> TruthTable:
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(len(self.mapping))
        return TruthTable(self.width, inv)

    def then(self, other: TruthTable) -> TruthTable:
        """Apply ``self`` first, then ``other``."""
        return TruthTable(self.width, other.mapping[self.mapping])

    def is_identity(self) -> bool:
        return np.array_equal(self.mapping, np.arange(len(self.mapping)))

    def as_list(self) -> list[int]:
        return [int(v) for v in self.mapping]


def gates_truth_table(gates: Sequence[Gate], width: int) -> TruthTable:
    words = np.arange(1 << width, dtype=np.int64)
    return TruthTable(width, run_words(gates, words, width))


def truth_table(circuit: Circuit, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> TruthTable:
    """Permutation over all ``2**width`` words; role metadata is ignored."""
    if circuit.width > bound:
        raise BoundError(
            f"circuit width {circuit.width} exceeds the exhaustive bound of {bound} lines"
        )
    return gates_truth_table(circuit.gates, circuit.width)


# ---------------------------------------------------------------------------
# role checking


@dataclass(frozen=True)
class RoleViolation:
    line: int
    output: str
    kind: str  # "regenerated" or "spec"
    failures: int
    example: dict[str, int]
    expected: int
    actual: int

    def __str__(self) -> str:
        return (
            f"line {self.line} ({self.output}): {self.kind} mismatch on "
            f"{self.failures} assignment(s), e.g. {self.example} -> "
            f"expected {self.expected}, got {self.actual}"
        )


def _field_cover(circuit: Circuit) -> list[Field]:
    covered = {n for f in circuit.domain for n in f.names}
    free = [Field((n,), (0, 1)) for n in circuit.input_names if n not in covered]
    return list(circuit.domain) + free


def domain_size(circuit: Circuit) -> int:
    size = 1
    for f in _field_cover(circuit):
        size *= len(f.values)
    return size


def _expand(fields: list[Field], choices: list[np.ndarray]) -> dict[str, np.ndarray]:
    out: dict[str, np.ndarray] = {}
    for f, vals in zip(fields, choices):
        for i, name in enumerate(f.names):
            out[name] = (vals >> i) & 1
    return out


def enumerate_domain(circuit: Circuit) -> dict[str, np.ndarray]:
    """Every valid input assignment, as bit arrays keyed by input name."""
    fields = _field_cover(circuit)
    if not fields:
        return {}
    grids = np.meshgrid(*[np.asarray(f.values, dtype=np.int64) for f in fields], indexing="ij")
    return _expand(fields, [g.ravel() for g in grids])


def sample_domain(circuit: Circuit, samples: int, seed: int = DEFAULT_SEED) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    fields = _field_cover(circuit)
    choices = [rng.choice(np.asarray(f.values, dtype=np.int64), size=samples) for f in fields]
    return _expand(fields, choices)


def domain_inputs(
    circuit: Circuit,
    exhaustive_bound: int = DEFAULT_EXHAUSTIVE_BOUND,
    samples: int | None = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> tuple[dict[str, np.ndarray], bool]:
    """Inputs for a verification sweep and whether they are exhaustive.

    The sweep is exhaustive when the valid domain has at most
    ``2**exhaustive_bound`` assignments; otherwise ``samples`` seeded random
    assignments are drawn, and ``samples=None`` refuses with :class:`BoundError`.
    """
    size = domain_size(circuit)
    if size <= 1 << exhaustive_bound:
        return enumerate_domain(circuit), True
    if samples is None:
        raise BoundError(
            f"{size} input assignments exceed the exhaustive bound of 2**{exhaustive_bound}; "
            "give a sample budget"
        )
    return sample_domain(circuit, samples, seed), False


def check_roles(
    circuit: Circuit,
    exhaustive_bound: int = DEFAULT_EXHAUSTIVE_BOUND,
    samples: int | None = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> list[RoleViolation]:
    """Check regenerated-input claims and attached output specs.

    Returns one violation per offending output line; an empty list means every
    tested assignment behaved as the roles claim.
    """
    inputs, _ = domain_inputs(circuit, exhaustive_bound, samples, seed)
    outputs = simulate_batch(circuit, inputs)
    ints = {k: v.astype(np.int64) for k, v in inputs.items()}
    n = len(next(iter(outputs.values())))
    const = {ln.name: ln.input.value for ln in circuit.lines if isinstance(ln.input, Ancilla)}
    violations = []
    for i, ln in enumerate(circuit.lines):
        got = outputs[ln.output_label].astype(np.int64)
        if isinstance(ln.output, RegeneratedInput):
            src = ln.output.name
            want = ints[src] if src in ints else np.full(n, const[src], dtype=np.int64)
            kind = "regenerated"
        elif isinstance(ln.output, Useful) and ln.output.spec is not None:
            want = np.broadcast_to(np.asarray(ln.output.spec(ints), dtype=np.int64) & 1, (n,))
            kind = "spec"
        else:
            continue
        bad = np.flatnonzero(got != want)
        if len(bad):
            j = int(bad[0])
            violations.append(
                RoleViolation(
                    line=i,
                    output=ln.output_label,
                    kind=kind,
                    failures=len(bad),
                    example={k: int(v[j]) for k, v in ints.items()},
                    expected=int(want[j]),
                    actual=int(got[j]),
                )
            )
    return violations


def bits_of(value: int, names: Sequence[str]) -> dict[str, int]:
    """Spread an integer over named lines, LSB first."""
    return {n: (value >> i) & 1 for i, n in enumerate(names)}


def value_of(outputs: Mapping[str, object], names: Sequence[str]) -> object:
    """Inverse of :func:`bits_of`; works on ints or numpy arrays."""
    total: object = 0
    for i, n in enumerate(names):
        v = outputs[n]
        if isinstance(v, np.ndarray):
            total = total + (v.astype(np.int64) << i)
        else:
            total = total + (int(v) << i)
    return total
