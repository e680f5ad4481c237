"""Acceptance criteria 1-10, each at its stated tolerance.

Every criterion prints one ``criterion N: PASS|FAIL ...`` line (collected in
``RESULTS`` and echoed in the pytest terminal summary).  Run the file directly
to get just those lines.
"""
from __future__ import annotations

import time

import numpy as np

from revarith import analysis
from revarith.core import (
    GateKind,
    check_roles,
    enumerate_domain,
    gates_truth_table,
    peres,
    sample_domain,
    simulate_batch,
    tr,
    truth_table,
    value_of,
)
from revarith.generators import (
    gen_bin2bcd,
    gen_correction,
    gen_detection,
    gen_ndigit_bcd,
    gen_rbcd,
    gen_rca_no_carry,
    gen_rca_with_carry,
)
from revarith.netlist import emit_real, parse_real
from revarith.quantum import (
    decomposition_of,
    permutation_matrix,
    primitive_depth,
    unitary_of,
    v_matrix,
    vplus_matrix,
)

RESULTS: dict[int, str] = {}
TOL = 1e-12


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def best_time(fn, repeat=20):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


# --- 1 ----------------------------------------------------------------------------------


def test_criterion_1_gate_algebra():
    X = np.array([[0, 1], [1, 0]])

    def check():
        v, vp = v_matrix(), vplus_matrix()
        return (
            np.max(np.abs(v @ v - X)),
            np.max(np.abs(v @ vp - np.eye(2))),
            np.max(np.abs(vp @ vp - X)),
        )

    errs = check()
    dt = best_time(check)
    ok = max(errs) <= TOL and dt < 1e-3
    record(1, ok, f"max error {max(errs):.1e}, {dt * 1e6:.0f} us")


# --- 2 ----------------------------------------------------------------------------------


def test_criterion_2_decompositions():
    kinds = (GateKind.TOFFOLI, GateKind.PERES, GateKind.TR)

    def check():
        out = []
        for k in kinds:
            seq = decomposition_of(k)
            err = np.max(np.abs(unitary_of(seq) - permutation_matrix(k)))
            out.append((err, seq.cost, primitive_depth(seq.gates)))
        return out

    res = check()
    dt = best_time(check)
    ok = (
        all(e <= TOL for e, _, _ in res)
        and [c for _, c, _ in res] == [5, 4, 4]
        and [d for _, _, d in res] == [5, 4, 4]
        and dt < 10e-3
    )
    record(2, ok, f"(cost, depth) = {[(c, d) for _, c, d in res]}, max error {max(e for e, _, _ in res):.1e}, {dt * 1e3:.2f} ms")


# --- 3 ----------------------------------------------------------------------------------


def test_criterion_3_inverse_pair():
    a = gates_truth_table([peres(0, 1, 2), tr(0, 1, 2)], 3).is_identity()
    b = gates_truth_table([tr(0, 1, 2), peres(0, 1, 2)], 3).is_identity()
    record(3, a and b, f"Peres then TR identity={a}, TR then Peres identity={b}")


# --- 4 ----------------------------------------------------------------------------------


def _adder_violations(c, n, carry):
    words = np.arange(1 << c.width, dtype=np.int64)
    x = {ln.input.name: (words >> i) & 1 for i, ln in enumerate(c.lines)}
    out = {k: v.astype(np.int64) for k, v in simulate_batch(c, x).items()}
    a = value_of(x, [f"a{i}" for i in range(n)])
    b = value_of(x, [f"b{i}" for i in range(n)])
    s = a + b + (x["c0"] if carry else 0)
    bad = 0
    for i in range(n):
        bad += int(np.sum(out[f"s{i}"] != (s >> i) & 1))
        bad += int(np.sum(out[f"a{i}"] != x[f"a{i}"]))
    bad += int(np.sum(out[f"s{n}"] != x["z"] ^ ((s >> n) & 1)))
    if carry:
        bad += int(np.sum(out["c0"] != x["c0"]))
    return bad + len(check_roles(c))


def test_criterion_4_adder_functional():
    t = time.perf_counter()
    bad = 0
    for n in range(1, 7):
        bad += _adder_violations(gen_rca_no_carry(n), n, False)
        bad += _adder_violations(gen_rca_with_carry(n), n, True)
    dt = time.perf_counter() - t
    record(4, bad == 0 and dt < 30, f"{bad} violations over n=1..6, {dt:.2f} s")


# --- 5 ----------------------------------------------------------------------------------


def test_criterion_5_adder_metrics():
    misses = []
    for n in range(1, 65):
        for label, gen, cost, delay in (
            ("no-carry", gen_rca_no_carry, 13 * n - 8, 11 * n - 4),
            ("with-carry", gen_rca_with_carry, 15 * n - 6, 9 * n + 1),
        ):
            c = gen(n)
            if analysis.quantum_cost(c) != cost:
                misses.append((label, n, "cost", analysis.quantum_cost(c), cost))
            if n >= 2 and analysis.step_delay(c) != delay:
                misses.append((label, n, "delay", analysis.step_delay(c), delay))
            if analysis.count_ancilla(c) or analysis.count_garbage(c):
                misses.append((label, n, "lines", analysis.count_ancilla(c), 0))
    families = sorted({(m[0], m[2]) for m in misses})
    detail = "all exact" if not misses else f"{len(misses)} mismatches in {families}; e.g. {misses[:2]} (measured, closed form)"
    record(5, not misses, detail)


# --- 6 ----------------------------------------------------------------------------------

# Published table cells, rows n = 8..512.  Prior columns, proposed column, then
# improvement columns ("-" where the prior design is better or equal).
PUBLISHED = {
    ("no-carry", "quantum_cost"): (
        [[124, 260, 532, 1076, 2164, 4340, 8692], [179, 387, 803, 1635, 3299, 6627, 13283], [111, 231, 471, 951, 1911, 3831, 7671]],
        [96, 200, 408, 824, 1656, 3320, 6648],
        [
            [22.5, 23, 23.3, 23.42, 23.47, 23.5, 23.51],
            [46.36, 48.32, 49.19, 49.6, 49.8, 49.9, 49.95],
            [13.51, 13.41, 13.37, 13.35, 13.34, 13.33, 13.33],
        ],
    ),
    ("no-carry", "step_delay"): (
        [[80, 160, 320, 640, 1280, 2560, 5120], [165, 357, 741, 1509, 3045, 6117, 12261], [97, 201, 409, 825, 1657, 3321, 6649]],
        [84, 172, 348, 700, 1404, 2812, 5628],
        [
            ["-"] * 7,
            [49.09, 51.8, 53.03, 53.61, 53.89, 54.02, 54.09],
            [13.40, 14.42, 14.91, 15.15, 15.26, 15.32, 15.35],
        ],
    ),
    ("with-carry", "quantum_cost"): (
        [[130, 266, 538, 1082, 2179, 4346, 8698], [114, 250, 522, 1066, 2154, 4330, 8682]],
        [114, 234, 474, 954, 1914, 3834, 7674],
        [[12.30, 12.03, 11.89, 11.82, 11.79, 11.78, 11.77], ["-", 6.4, 9.19, 10.50, 11.14, 11.45, 11.61]],
    ),
    ("with-carry", "step_delay"): (
        [[82, 162, 322, 642, 1282, 2562, 5122], [72, 152, 312, 632, 1272, 2552, 5112]],
        [73, 145, 289, 577, 1153, 2305, 4609],
        [[10.97, 10.49, 10.24, 10.12, 10.06, 10.03, 10.01], ["-", 4.6, 7.37, 8.7, 9.35, 9.67, 9.83]],
    ),
}

# Cells that disagree with the table's own operands.  The recomputed value is
# compared instead; see the ledger for each case.
#   (table, column kind, column index, n) -> value used
DOCUMENTED = {
    # printed 2179; 17n-6 gives 2170, which is also what its percentage uses
    (("with-carry", "quantum_cost"), "prior", 0, 128): 2170,
    # printed 22.5 and 23; (124-96)/124 and (260-200)/260 give 22.58 and 23.07
    (("no-carry", "quantum_cost"), "impr", 0, 8): 22.58,
    (("no-carry", "quantum_cost"), "impr", 0, 16): 23.07,
    # printed 51.8; (357-172)/357 gives 51.82
    (("no-carry", "step_delay"), "impr", 1, 16): 51.82,
}


def _cell_ok(published, got):
    if published == "-" or got == "-":
        return published == got
    return abs(float(published) - float(got)) <= 0.01 + 1e-9


def test_criterion_6_table_reproduction():
    bad = []
    total = 0
    for (kind, metric), (priors, proposed, imprs) in PUBLISHED.items():
        table = [t for t in analysis.comparison_report(kind) if t.metric == metric][0]
        key = (kind, metric)
        for r, row in enumerate(table.rows):
            n = row.n
            for j, col in enumerate(priors):
                want = DOCUMENTED.get((key, "prior", j, n), col[r])
                total += 1
                if row.prior[j] != want:
                    bad.append(f"{kind} {metric} n={n} prior{j + 1}: {row.prior[j]} vs {want}")
            total += 1
            if row.proposed != proposed[r]:
                bad.append(f"{kind} {metric} n={n} proposed: {row.proposed} vs {proposed[r]}")
            for j, col in enumerate(imprs):
                want = DOCUMENTED.get((key, "impr", j, n), col[r])
                total += 1
                if not _cell_ok(want, row.improvement[j]):
                    bad.append(f"{kind} {metric} n={n} impr{j + 1}: {row.improvement[j]} vs {want}")
    by_table = sorted({" ".join(b.split()[:2]) for b in bad})
    detail = f"{total - len(bad)}/{total} cells match"
    if bad:
        detail += f"; mismatches in {by_table}, e.g. {bad[0]}"
    record(6, not bad, detail)


# --- 7 ----------------------------------------------------------------------------------


def _decimal_ok(c, n, carry, inputs):
    out = simulate_batch(c, inputs)

    def nm(base, k):
        return base if n == 1 else f"{base}_{k}"

    A = sum(value_of(inputs, [nm(f"a{i}", k) for i in range(4)]) * 10**k for k in range(n))
    B = sum(value_of(inputs, [nm(f"b{i}", k) for i in range(4)]) * 10**k for k in range(n))
    total = A + B + (inputs["c0"] if carry else 0)
    ok = np.array_equal(out["cout"].astype(np.int64), total // 10**n)
    for k in range(n):
        ok &= np.array_equal(value_of(out, [nm(f"s{i}", k) for i in range(4)]), (total // 10**k) % 10)
    return bool(ok)


def test_criterion_7_bcd_functional():
    t = time.perf_counter()
    fails = []
    for v in (1, 2, 3, 4):
        c = gen_rbcd(v)
        x = enumerate_domain(c)
        if len(x["a0"]) != (200 if v in (1, 3) else 100) or not _decimal_ok(c, 1, v in (1, 3), x):
            fails.append(f"RBCD-{v}")
    for d in (1, 2, 3, 4):
        for n in (1, 2, 3):
            c = gen_ndigit_bcd(d, n)
            if not _decimal_ok(c, n, d in (1, 3), enumerate_domain(c)):
                fails.append(f"design {d} n={n}")
        c = gen_ndigit_bcd(d, 16)
        if not _decimal_ok(c, 16, d in (1, 3), sample_domain(c, 100_000)):
            fails.append(f"design {d} n=16 sampled")
    dt = time.perf_counter() - t
    record(7, not fails and dt < 60, f"failures {fails or 'none'}, {dt:.1f} s")


# --- 8 ----------------------------------------------------------------------------------


def test_criterion_8_bcd_lines():
    bad = []
    for d in (1, 2, 3, 4):
        for n in range(1, 17):
            c = gen_ndigit_bcd(d, n)
            want = (2 * n, 2 * n - 1) if d in (1, 2) else (n, n - 1)
            got = (analysis.count_ancilla(c), analysis.count_garbage(c))
            if got != want:
                bad.append((d, n, got, want))
    anc, garb, _ = analysis.comparison_report("bcd")
    pub_garb = [
        [78.12, 76.56, 75.78, 75.39, 75.19, 75.09, 75.04],
        [85.4, 84.37, 83.85, 83.59, 83.46, 83.39, 83.36],
    ]
    cells = 0
    for r, row in enumerate(anc.rows):
        for j, want in enumerate((75, 50)):
            cells += 1
            if not _cell_ok(want, row.improvement[j]):
                bad.append(("ancilla %", row.n, row.improvement[j], want))
    for r, row in enumerate(garb.rows):
        for j in range(2):
            cells += 1
            if not _cell_ok(pub_garb[j][r], row.improvement[j]):
                bad.append(("garbage %", row.n, row.improvement[j], pub_garb[j][r]))
    record(8, not bad, f"designs 1-4 at n=1..16, {cells} improvement cells; mismatches {bad or 'none'}")


# --- 9 ----------------------------------------------------------------------------------


def test_criterion_9_bcd_cost_delay():
    problems = []
    closed = analysis.FormulaCatalog.BCD
    compared = 0
    first = {d: gen_ndigit_bcd(d, 1) for d in (1, 2, 3, 4)}
    upper = {1: first[1], 2: first[1], 3: first[3], 4: first[3]}
    for d in (1, 2, 3, 4):
        for n in range(1, 17):
            c = gen_ndigit_bcd(d, n)
            qc, sd = analysis.quantum_cost(c), analysis.step_delay(c)
            compared += 1
            # measured totals are sums of the measured digit circuits
            for fn, got in ((analysis.quantum_cost, qc), (analysis.step_delay, sd)):
                want = fn(first[d]) + (n - 1) * fn(upper[d])
                if got != want:
                    problems.append(f"design {d} n={n} not additive")
    rbcd3 = analysis.quantum_cost(gen_rbcd(3))
    if rbcd3 != 70:
        problems.append(f"RBCD-3 cost {rbcd3}")
    totals = analysis.bcd_totals()
    if not all(t.additive for t in totals):
        problems.append("one-digit totals not additive over sub-units")
    ledger = {d.subject: d for d in analysis.discrepancy_ledger((1,))}
    for t in totals:
        if t.published != t.published_components:
            d = ledger.get(f"RBCD-{t.variant} {t.metric}")
            if d is None or str(t.published) not in d.published or str(t.published_components) not in d.published:
                problems.append(f"ledger misses RBCD-{t.variant} {t.metric}")
    diffs = [
        f"design{d} {m}: {analysis._formula_value(closed[f'design{d}'], m, 1)}->{fn(first[d])}"
        for d in (1, 2, 3, 4)
        for m, fn in (("quantum_cost", analysis.quantum_cost), ("step_delay", analysis.step_delay))
        if analysis._formula_value(closed[f"design{d}"], m, 1) != fn(first[d])
    ]
    record(
        9,
        not problems,
        f"RBCD-3 cost {rbcd3}; {compared} cascades additive; n=1 closed form vs measured differs for {diffs}; problems {problems or 'none'}",
    )


# --- 10 ---------------------------------------------------------------------------------


def _all_generated():
    out = [gen_detection(), gen_correction(), gen_bin2bcd()]
    out += [gen_rca_no_carry(n) for n in range(1, 17)] + [gen_rca_with_carry(n) for n in range(1, 17)]
    out += [gen_ndigit_bcd(d, n) for d in (1, 2, 3, 4) for n in (1, 2, 3, 4)]
    return out


def test_criterion_10_properties():
    circuits = _all_generated()
    depth_bad = [c.name for c in circuits if analysis.asap_depth(c) > analysis.step_delay(c)]
    small = [c for c in circuits if c.width <= 12]
    perm_bad = [c.name for c in small if not truth_table(c).is_permutation()]
    rt_bad = [c.name for c in circuits if parse_real(emit_real(c)) != c]
    ok = not (depth_bad or perm_bad or rt_bad)
    record(
        10,
        ok,
        f"{len(circuits)} circuits, {len(small)} permutation-checked; "
        f"depth {depth_bad or 'ok'}, permutation {perm_bad or 'ok'}, round-trip {rt_bad or 'ok'}",
    )


if __name__ == "__main__":
    import sys

    for name, fn in sorted(
        ((k, v) for k, v in list(globals().items()) if k.startswith("test_criterion_")),
        key=lambda kv: int(kv[0].split("_")[2]),
    ):
        try:
            fn()
        except AssertionError:
            pass
    sys.exit(0 if all("PASS" in v for v in RESULTS.values()) else 1)
