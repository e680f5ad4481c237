"""NCV realizations of the 3-line gates, certified by complex matrix products.

Every catalog gate is written as a sequence of NOT, CNOT, controlled-V and
controlled-V⁺ primitives.  :func:`unitary_of` multiplies the embedded
primitives out and :func:`verify_decomposition` checks the product against
the gate's classical permutation matrix.  Basis index ``k`` has wire ``i``
equal to bit ``i`` of ``k``, the same convention as the classical words.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core import (
    CircuitError,
    Gate,
    GateKind,
    cnot,
    cv,
    cvplus,
    gates_truth_table,
)

TOLERANCE = 1e-12

_X = np.array([[0, 1], [1, 0]], dtype=complex)


def v_matrix() -> np.ndarray:
    """Square root of NOT: (1+i)/2 [[1, -i], [-i, 1]]."""
    return (1 + 1j) / 2 * np.array([[1, -1j], [-1j, 1]], dtype=complex)


def vplus_matrix() -> np.ndarray:
    return v_matrix().conj().T


def not_matrix() -> np.ndarray:
    return _X.copy()


def is_unitary(u: np.ndarray, tol: float = TOLERANCE) -> bool:
    return np.allclose(u @ u.conj().T, np.eye(u.shape[0]), rtol=0, atol=tol)


@dataclass(frozen=True)
class PrimitiveSequence:
    width: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if g.kind not in _PRIMITIVE_KINDS:
                raise CircuitError(f"{g} is not an NCV primitive")
            if max(g.wires) >= self.width:
                raise CircuitError(f"{g} exceeds width {self.width}")

    @property
    def cost(self) -> int:
        return len(self.gates)

    def census(self) -> dict[GateKind, int]:
        out: dict[GateKind, int] = {}
        for g in self.gates:
            out[g.kind] = out.get(g.kind, 0) + 1
        return out


_PRIMITIVE_KINDS = frozenset({GateKind.NOT, GateKind.CNOT, GateKind.CV, GateKind.CVPLUS})

# Canonical realizations on wires (a, b, c) = (0, 1, 2).  The target picks up
# V raised to a sum of control parities; V**2 = X makes the even part a flip.
#   Toffoli: b - (a^b) + a = 2ab
#   Peres:  -b - a + (a^b) = -2ab     (V⁺ = V**-1, V**-2 = X)
#   TR:      b - a - (a^b) = -2a(1-b)
_CATALOG: dict[GateKind, tuple[Gate, ...]] = {
    GateKind.NOT: (Gate(GateKind.NOT, (0,)),),
    GateKind.CNOT: (cnot(0, 1),),
    GateKind.TOFFOLI: (cv(1, 2), cnot(0, 1), cvplus(1, 2), cnot(0, 1), cv(0, 2)),
    GateKind.PERES: (cvplus(1, 2), cvplus(0, 2), cnot(0, 1), cv(1, 2)),
    GateKind.TR: (cv(1, 2), cnot(0, 1), cvplus(0, 2), cvplus(1, 2)),
}

# Fredkin has no catalog entry; for scheduling it expands through a Toffoli.
_FREDKIN = (cnot(2, 1),) + _CATALOG[GateKind.TOFFOLI] + (cnot(2, 1),)


def decomposition_of(kind: GateKind) -> PrimitiveSequence:
    if kind not in _CATALOG:
        raise CircuitError(f"no NCV decomposition catalogued for {kind.value}")
    return PrimitiveSequence(kind.arity, _CATALOG[kind])


def primitives(gate: Gate) -> tuple[Gate, ...]:
    """The NCV primitives of ``gate`` placed on its own wires."""
    if gate.kind in _PRIMITIVE_KINDS:
        return (gate,)
    if gate.kind is GateKind.FREDKIN:
        seq = _FREDKIN
    else:
        seq = _CATALOG[gate.kind]
    return tuple(g.remap(gate.wires) for g in seq)


def _embed(gate: Gate, width: int) -> np.ndarray:
    dim = 1 << width
    u = np.zeros((dim, dim), dtype=complex)
    if gate.kind is GateKind.NOT:
        (t,) = gate.wires
        for k in range(dim):
            u[k ^ (1 << t), k] = 1
        return u
    c, t = gate.wires
    op = {GateKind.CNOT: _X, GateKind.CV: v_matrix(), GateKind.CVPLUS: vplus_matrix()}[gate.kind]
    for k in range(dim):
        if not (k >> c) & 1:
            u[k, k] = 1
            continue
        tb = (k >> t) & 1
        for out_bit in (0, 1):
            j = (k & ~(1 << t)) | (out_bit << t)
            u[j, k] = op[out_bit, tb]
    return u


def unitary_of(seq: PrimitiveSequence | Sequence[Gate], width: int | None = None) -> np.ndarray:
    """Ordered product of the embedded primitives (first gate acts first)."""
    if isinstance(seq, PrimitiveSequence):
        gates, width = seq.gates, seq.width
    else:
        gates = tuple(seq)
        if width is None:
            width = max((max(g.wires) for g in gates), default=-1) + 1
    if width > 3:
        raise CircuitError("unitary_of is limited to at most 3 wires")
    u = np.eye(1 << width, dtype=complex)
    for g in gates:
        u = _embed(g, width) @ u
    return u


def permutation_matrix(kind: GateKind) -> np.ndarray:
    """0/1 matrix of a classical gate on canonical wires: column k has its 1 in
    the row of the image of basis word k."""
    gate = Gate(kind, tuple(range(kind.arity)))
    table = gates_truth_table([gate], kind.arity)
    dim = 1 << kind.arity
    p = np.zeros((dim, dim))
    p[table.mapping, np.arange(dim)] = 1
    return p


def primitive_depth(gates: Sequence[Gate]) -> int:
    finish: dict[int, int] = {}
    depth = 0
    for g in gates:
        t = 1 + max((finish.get(w, 0) for w in g.wires), default=0)
        for w in g.wires:
            finish[w] = t
        depth = max(depth, t)
    return depth


@dataclass(frozen=True)
class DecompositionCheck:
    kind: GateKind
    cost: int
    depth: int
    ok: bool
    max_error: float


def verify_decomposition(kind: GateKind, tol: float = TOLERANCE) -> DecompositionCheck:
    seq = decomposition_of(kind)
    u = unitary_of(seq)
    err = float(np.max(np.abs(u - permutation_matrix(kind))))
    return DecompositionCheck(
        kind=kind,
        cost=seq.cost,
        depth=primitive_depth(seq.gates),
        ok=err <= tol and is_unitary(u, tol),
        max_error=err,
    )


def catalog_kinds() -> list[GateKind]:
    return list(_CATALOG)


def gate_depth(gate: Gate) -> int:
    """Logical depth of one gate once expanded to primitives."""
    return primitive_depth(primitives(gate))


def block_depth(gates: Sequence[Gate]) -> int:
    """Critical path when each gate is an indivisible block occupying all its
    wires for :func:`gate_depth` steps."""
    finish: dict[int, int] = {}
    depth = 0
    for g in gates:
        t = max((finish.get(w, 0) for w in g.wires), default=0) + gate_depth(g)
        for w in g.wires:
            finish[w] = t
        depth = max(depth, t)
    return depth
