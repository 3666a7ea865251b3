"""Acceptance criteria 1-10.

Each test records one PASS/FAIL line in ``RESULTS``; the pytest terminal
summary prints them (see conftest.py).  Running this file directly prints
the same lines.
"""

import json
import warnings

import numpy as np
import pytest

from ergodisk import cli
from ergodisk import ergodicity as erg
from ergodisk.disk import pseudo_dist
from ergodisk.ergodicity import (
    Dyadic,
    PowerMatched,
    Verdict,
    VerdictParams,
    cesaro_apply,
    cesaro_deviation_trace,
    cesaro_limit_candidate,
    criterion_e1,
    criterion_e2,
    essential_lower_bound_harness,
    hinf_criterion,
    verdict,
)
from ergodisk.grid import GridSpec
from ergodisk.interpolation import (
    PickProblem,
    feasible,
    lagrange_basis,
    min_norm,
    separation_constant,
    thm3_test_function,
)
from ergodisk.maps import (
    Automorphism,
    BoundaryDW,
    Compose,
    ConvexCombination,
    LinearFractional,
    Monomial,
    Rotation,
    Scale,
    classify,
    iterate,
)
from ergodisk.weights import LogWeight, StandardAlpha

RESULTS: dict[int, str] = {}
SEED = 20240611
HYPERBOLIC = LinearFractional(1, 0.5, 0.5, 1)
Z_OVER_2_MINUS_Z = LinearFractional(1, 0, -1, 2)


def record(number: int, ok: bool, detail: str) -> None:
    RESULTS[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[number])
    assert ok, RESULTS[number]


def random_disk(rng, size, max_radius=0.95):
    r = max_radius * np.sqrt(rng.uniform(0, 1, size))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, size))


def random_origin_map(rng):
    """Random self-map fixing 0: a rotated convex mix of two scaled monomials."""
    k1, k2 = (int(k) for k in rng.integers(1, 5, 2))
    t = float(rng.uniform(0.05, 0.95))
    c1, c2 = (complex(x) for x in random_disk(rng, 2, 0.99))
    mix = ConvexCombination((Scale(c1, Monomial(k1)), Scale(c2, Monomial(k2))), (t, 1 - t))
    return Compose(Rotation(complex(np.exp(2j * np.pi * rng.uniform()))), mix)


# --- 1 ----------------------------------------------------------------------


def test_criterion_1_monomial_closed_form():
    worst_closed, worst_bound = 0.0, -np.inf
    verdicts = []
    for k in (2, 3):
        tr = criterion_e1(Monomial(k), StandardAlpha(1.0), PowerMatched(k), n_max=8)
        for n, v in zip(tr.n, tr.values):
            r = 1 - float(k) ** -n
            closed = (1 - r) / (1 - r ** (k**n))
            worst_closed = max(worst_closed, abs(v - closed))
            worst_bound = max(worst_bound, v - float(k) ** -n / (1 - np.exp(-1)))
        verdicts.append(verdict(Monomial(k), "hinf_nu", StandardAlpha(1.0)).verdict)
    ok = worst_closed <= 1e-6 and worst_bound <= 0 and all(v is Verdict.UNIFORMLY_MEAN_ERGODIC for v in verdicts)
    record(1, ok, f"max |e1 - closed| = {worst_closed:.2e}; max(e1 - bound) = {worst_bound:.2e}; "
                  f"verdicts {[v.value for v in verdicts]}")


# --- 2 ----------------------------------------------------------------------


def test_criterion_2_e2_closed_form():
    tr = criterion_e2(Monomial(2), StandardAlpha(1.0), n_max=10, grid=GridSpec(20, 256))
    err = max(abs(v - 2.0**-n) for n, v in zip(tr.n, tr.values))
    record(2, err <= 1e-4, f"max |e2 - 2^-n| = {err:.2e} for n <= 10 at J = 20")


# --- 3 ----------------------------------------------------------------------


def test_criterion_3_boundary_dw(monkeypatch):
    c = classify(HYPERBOLIC)
    calls = []

    def spy(name):
        def fail(*a, **k):
            calls.append(name)
            raise AssertionError(f"{name} invoked")

        return fail

    for name in ("criterion_e1", "criterion_e2", "hinf_criterion", "trend", "boundary_probe"):
        monkeypatch.setattr(erg, name, spy(name))
    verdicts = [erg.verdict(HYPERBOLIC, "hinf").verdict,
                erg.verdict(HYPERBOLIC, "hinf_nu", StandardAlpha(1.0)).verdict]
    dist = abs(c.point - 1) if isinstance(c, BoundaryDW) else np.inf
    ok = dist <= 1e-9 and all(v is Verdict.NOT_MEAN_ERGODIC for v in verdicts) and not calls
    record(3, ok, f"DW point error {dist:.1e}; verdicts {[v.value for v in verdicts]}; numeric calls {calls}")


# --- 4 ----------------------------------------------------------------------


def test_criterion_4_space_discrimination():
    # the deepest circle must sit well inside 1e-6 of the boundary for the
    # sup of |phi_n| (which is attained only at z = 1) to read as 1 within 1e-6
    hinf = hinf_criterion(Z_OVER_2_MINUS_Z, n_max=10, grid=GridSpec(40, 256))
    hinf_err = max(abs(v - 1) for v in hinf.values)
    e1 = criterion_e1(Z_OVER_2_MINUS_Z, StandardAlpha(1.0), Dyadic(), n_max=16)
    e1_err = max(abs(v - ((1 - r) + r * 2.0**-n))
                 for n, v, r in zip(e1.n, e1.values, Dyadic().radii_upto(16)))
    v_hinf = verdict(Z_OVER_2_MINUS_Z, "hinf").verdict
    v_nu = verdict(Z_OVER_2_MINUS_Z, "hinf_nu", StandardAlpha(1.0)).verdict
    ok = (hinf_err <= 1e-6 and e1_err <= 1e-4 and v_hinf is Verdict.NOT_MEAN_ERGODIC
          and v_nu is Verdict.UNIFORMLY_MEAN_ERGODIC)
    record(4, ok, f"max |hinf - 1| = {hinf_err:.1e} (J = 40); max |e1 - closed| = {e1_err:.1e}; "
                  f"H-inf {v_hinf.value}, H-inf_1 {v_nu.value}")


# --- 5 ----------------------------------------------------------------------


FUNCTIONS = [
    lambda z: np.ones_like(z),
    lambda z: z,
    lambda z: z**2,
    lambda z: z**3,
    lambda z: z**4,
    lambda z: z**9,
    lambda z: np.exp(z),
    lambda z: 1 / (2 - z),
    lambda z: np.log(2 + z),
    lambda z: (1 + z) ** 6,
]


def test_criterion_5_elliptic():
    rot = Rotation(1j)
    limit = cesaro_limit_candidate(classify(rot))
    dev = 0.0
    for f in FUNCTIONS:
        for n in range(4, 201, 4):
            s = cesaro_apply(rot, f, n)
            dev = max(dev, float(np.abs(s.values - limit.apply(f, s.points)).max()))
    rep = verdict(Rotation.from_turns(2**-0.5), "hinf_nu", StandardAlpha(1.0))
    cap = rep.evidence.get("root_check", {}).get("denominator_cap")
    ok = dev <= 1e-10 and rep.verdict is Verdict.NOT_MEAN_ERGODIC and cap == 64
    record(5, ok, f"max cyclic deviation {dev:.1e}; irrational rotation {rep.verdict.value}, cap {cap}")


# --- 6 ----------------------------------------------------------------------


def schwarz_pick_feasible(a, b):
    """Two-node problem {(a1, b1), (a2, b2)} with |b_i| < 1 is solvable iff rho(b) <= rho(a)."""
    return pseudo_dist(b[0], b[1]) <= pseudo_dist(a[0], a[1])


def test_criterion_6_pick():
    vals = [min_norm(PickProblem([0], [0.5])), min_norm(PickProblem([0, 0.6], [0, 0.6])),
            min_norm(PickProblem([0, 0.5], [0, 0.25]))]
    err = max(abs(v - e) for v, e in zip(vals, [0.5, 1.0, 0.5]))
    rng = np.random.default_rng(SEED)
    mismatches = 0
    for _ in range(1000):
        a = random_disk(rng, 2, 0.95)
        b = random_disk(rng, 2, 0.95)
        # keep instances away from the boundary case where rounding decides
        if abs(pseudo_dist(b[0], b[1]) - pseudo_dist(a[0], a[1])) < 1e-9:
            continue
        mismatches += feasible(PickProblem(a, b), 1.0) != schwarz_pick_feasible(a, b)
    record(6, err <= 1e-8 and mismatches == 0, f"max min_norm error {err:.1e}; feasibility mismatches {mismatches}/1000")


# --- 7 ----------------------------------------------------------------------


def test_criterion_7_interpolation_basis():
    rng = np.random.default_rng(SEED)
    basis_err = node_err = 0.0
    done = 0
    while done < 100:
        a = random_disk(rng, 5, 0.95)
        if separation_constant(a) < 1e-3:
            continue
        done += 1
        basis = lagrange_basis(a)
        basis_err = max(basis_err, float(np.abs(basis(a) - np.eye(5)).max()))
        m = int(rng.integers(1, 8))
        alpha = float(rng.uniform(0, 2))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            f = thm3_test_function(a, m, alpha, grid=None)
        closed = np.abs(a) ** (2 * m) * (1 - np.abs(a) ** 2) ** -alpha
        node_err = max(node_err, float(np.abs(f(a) - closed).max()))
    record(7, basis_err <= 1e-10 and node_err <= 1e-9,
           f"max basis error {basis_err:.1e}; max node-value error {node_err:.1e} over 100 sequences")


# --- 8 ----------------------------------------------------------------------


def test_criterion_8_harness():
    def node(m):
        return 1 - 2.0**-m

    hyp = [essential_lower_bound_harness(HYPERBOLIC, 1.0, node, m // 2, m).value for m in range(2, 41, 2)]
    sq = essential_lower_bound_harness(Monomial(2), 1.0, node, 20, 40).value
    ok = min(hyp) >= 0.01 and sq < 1e-3
    record(8, ok, f"hyperbolic min over m <= 40: {min(hyp):.3g}; z^2 at n = 20: {sq:.2e} (alpha = 1)")


# --- 9 ----------------------------------------------------------------------


def test_criterion_9_invariants():
    rng = np.random.default_rng(SEED)
    fails = {"schwarz": 0, "mobius": 0, "cesaro": 0, "e1": 0}
    weights = [StandardAlpha(0.5), StandardAlpha(1.0), StandardAlpha(2.0), LogWeight(1.0, 1.0)]
    tiny = GridSpec(4, 8)
    for _ in range(1000):
        phi = random_origin_map(rng)
        z = complex(random_disk(rng, 1, 0.999)[0])
        mods = np.abs(iterate(phi, z, 8).values)
        fails["schwarz"] += bool(np.any(np.diff(np.concatenate([[abs(z)], mods])) > 1e-15))

        p = complex(random_disk(rng, 1, 0.99)[0])
        aut = Automorphism(p, complex(np.exp(2j * np.pi * rng.uniform())))
        u, v = random_disk(rng, 2, 0.99)
        d0, d1 = pseudo_dist(u, v), pseudo_dist(complex(aut(u)), complex(aut(v)))
        fails["mobius"] += abs(d0 - d1) > 1e-9

        nu = weights[int(rng.integers(len(weights)))]
        devs = cesaro_deviation_trace(phi, nu, 3, tiny)
        fails["cesaro"] += any(d.lower_bound > d.upper_bound + 1e-8 for d in devs)

        if abs(complex(phi.deriv(0j))) < 1 - 1e-9:
            tr = criterion_e1(phi, nu, n_max=3, grid=tiny)
            fails["e1"] += max(tr.values) > 1.0
    record(9, not any(fails.values()), f"failures per suite over 1000 instances: {fails}")


# --- 10 ---------------------------------------------------------------------


def test_criterion_10_determinism(tmp_path, capsys):
    cfg = {"map": {"type": "lfm", "a": 1, "b": 0, "c": -1, "d": 2}, "weight": {"type": "alpha", "alpha": 1},
           "cesaro": True, "n_max": 12}
    runs = []
    for name in ("first", "second"):
        out = tmp_path / name
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps({**cfg, "output_dir": str(tmp_path / "run")}))
        cli.main(["verdict", "--config", str(p)])
        capsys.readouterr()
        files = sorted((tmp_path / "run").iterdir())
        runs.append({f.name: f.read_bytes() for f in files})
        (tmp_path / "run").rename(out)
    same = runs[0] == runs[1]
    record(10, same and "report.json" in runs[0], f"files {sorted(runs[0])} byte-identical: {same}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
