"""Identity checks run by ``moyal verify`` and the acceptance tests.

Every check returns one or more :class:`Part` measurements, each compared
against a limit. Limits marked ``scalable`` are multiplied by the
tolerance scale; exact checks count failures against a limit of zero.
"""

from __future__ import annotations

import itertools
import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .basis import BasisSpec, BasisWarning, analyze, basis_change_coeff, basis_fn, hermite_tensor, synthesize
from .phasegrid import (
    GridFunction,
    PhaseGrid,
    PhasePoint,
    fourier_ordinary,
    fourier_symplectic,
    fourier_symplectic_tilde,
    integrate,
    norm,
    pair_sesquilinear,
)
from .seqspace import (
    CoeffMatrix,
    StWeights,
    howe_factorize,
    hs_sum_partial,
    matrix_star,
    star_in_Gst,
)
from .stargrid import kernel_plan, twisted_product, twisted_translate
from .symbolic import (
    Distribution,
    GaussPoly,
    I,
    PolyQP,
    dist_star,
    moyal_bracket,
    poisson_bracket,
    poly_star,
    weyl_left,
    weyl_right,
)

SEED = 20240611


@dataclass
class Part:
    label: str
    value: float
    limit: float
    scalable: bool = True

    def ok(self, scale: float) -> bool:
        lim = self.limit * scale if self.scalable else self.limit
        return bool(self.value <= lim)


@dataclass
class CheckResult:
    name: str
    criterion: int
    passed: bool
    seconds: float
    parts: list = field(default_factory=list)
    detail: str = ""


@dataclass
class Context:
    max_index: int | None = None
    tolerance_scale: float = 1.0

    def index(self, default: int) -> int:
        return default if self.max_index is None else self.max_index


def random_gauss_poly(grid: PhaseGrid, degree: int, rng, width: float = 1.0) -> GridFunction:
    """Random complex polynomial of total degree ``<= degree`` times a Gaussian."""
    Q, P = grid.mesh()
    v = np.zeros(Q.shape, complex)
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            c = complex(rng.normal(), rng.normal()) / math.sqrt(math.factorial(i) * math.factorial(j))
            v += c * Q**i * P**j
    return GridFunction(grid, 2.0 * v * np.exp(-(Q * Q + P * P) / (2 * width * width)))


def random_decaying(order: int, rng, rate: float = 0.35) -> CoeffMatrix:
    m = np.arange(order)
    env = np.exp(-rate * (m[:, None] + m[None, :]))
    z = rng.normal(size=(order, order)) + 1j * rng.normal(size=(order, order))
    return CoeffMatrix(z * env)


# ------------------------------------------------------------------ checks


def check_matrix_units(ctx: Context):
    N = ctx.index(6)
    t0 = time.perf_counter()
    grid = PhaseGrid(8.0, 256)
    plan = kernel_plan(grid)
    idx = [(m, n) for m in range(N + 1) for n in range(N + 1)]
    pos = {i: k for k, i in enumerate(idx)}
    F = np.stack([basis_fn(i, grid).values for i in idx])
    K = plan.forward(F)
    worst = 0.0
    for a, (m, n) in enumerate(idx):
        prods = plan.inverse(plan.compose(K[a], K))
        for b, (k, l) in enumerate(idx):
            err = prods[b] - F[pos[(m, l)]] if n == k else prods[b]
            worst = max(worst, float(np.abs(err).max()))
    elapsed = time.perf_counter() - t0

    # default quadrature path, spot-checked on low indices
    spot = [((0, 1), (1, 0)), ((0, 1), (0, 1)), ((1, 2), (2, 0)), ((2, 2), (2, 1))]
    spot_worst = 0.0
    for (m, n), (k, l) in spot:
        if max(m, n, k, l) > N:
            continue
        r = twisted_product(basis_fn((m, n), grid), basis_fn((k, l), grid))
        ref = basis_fn((m, l), grid).values if n == k else 0.0
        spot_worst = max(spot_worst, float(np.abs(r.values - ref).max()))

    mat_worst = 0.0
    order = N + 1
    for (m, n), (k, l) in itertools.product(idx, idx):
        prod = matrix_star(CoeffMatrix.unit(m, n, order), CoeffMatrix.unit(k, l, order))
        ref = CoeffMatrix.unit(m, l, order).entries if n == k else 0.0
        mat_worst = max(mat_worst, float(np.abs(prod.entries - ref).max()))
    return [
        Part("grid sup error (kernel path)", worst, 1e-6),
        Part("grid sup error (switch path, spot)", spot_worst, 1e-6),
        Part("matrix max error", mat_worst, 1e-14),
        Part("grid sweep seconds", elapsed, 60.0, scalable=False),
    ], f"indices <= {N}, L=8, M=256"


def check_orthonormality(ctx: Context):
    N = ctx.index(10)
    grid = PhaseGrid(10.0, 512)
    idx = [(m, n) for m in range(N + 1) for n in range(N + 1)]
    V = np.stack([basis_fn(i, grid).values.ravel() for i in idx])
    G = 0.5 * grid.weight * (V.conj() @ V.T)
    del V
    worst = float(np.abs(G - np.eye(len(idx))).max())
    return [Part("max |<f_mn|f_kl> - delta|", worst, 1e-8)], f"indices <= {N}, L=10, M=512"


def check_f0(ctx: Context):
    grid = PhaseGrid(8.0, 256)
    f0 = basis_fn((0, 0), grid)
    return [
        Part("|int f_0 - 2|", abs(integrate(f0) - 2), 1e-10),
        Part("|<f_0|f_0> - 1|", abs(pair_sesquilinear(f0, f0) - 1), 1e-10),
    ], "L=8, M=256"


def check_eigenrelations(ctx: Context):
    N = ctx.index(12)
    H = PolyQP.H()
    bad = 0
    for m in range(N + 1):
        for n in range(N + 1):
            F = GaussPoly.basis(m, n)
            bad += weyl_left(H, F) != F * (2 * m + 1)
            bad += weyl_right(F, H) != F * (2 * n + 1)

    Ng = min(N, 4)
    grid = PhaseGrid(16.0, 256)
    Q, P = grid.mesh()
    rho = np.sqrt(Q * Q + P * P)
    window = np.exp(-((rho / 12.0) ** 16))
    Hm = 0.5 * rho**2 * window
    plan = kernel_plan(grid)
    KH = plan.forward(Hm)
    idx = [(m, n) for m in range(Ng + 1) for n in range(Ng + 1)]
    F = np.stack([basis_fn(i, grid).values for i in idx])
    K = plan.forward(F)
    bulk = grid.bulk_mask()
    left = plan.inverse(plan.compose(KH, K))
    worst = 0.0
    for a, (m, n) in enumerate(idx):
        right = plan.inverse(plan.compose(K[a], KH[None]))[0]
        worst = max(
            worst,
            float(np.abs(left[a] - (2 * m + 1) * F[a])[bulk].max()),
            float(np.abs(right - (2 * n + 1) * F[a])[bulk].max()),
        )
    return [
        Part("exact failures (m,n <= %d)" % N, float(bad), 0.0, scalable=False),
        Part("grid bulk error (m,n <= %d)" % Ng, worst, 1e-4),
    ], "grid: L=16, M=256, window exp(-(rho/12)^16), bulk |u| <= 8"


def check_fourier(ctx: Context):
    N = ctx.index(8)
    grid = PhaseGrid(12.0, 256)
    e_ord = e_sym = e_til = e_ref = 0.0
    for m in range(N + 1):
        for n in range(N + 1):
            f = basis_fn((m, n), grid)
            v = f.values
            G = fourier_ordinary(f).values
            e_ord = max(e_ord, float(np.abs(G - (-1j) ** ((m + n) % 4) * v).max()))
            e_sym = max(e_sym, float(np.abs(fourier_symplectic(f).values - (-1) ** n * v).max()))
            e_til = max(e_til, float(np.abs(fourier_symplectic_tilde(f).values - (-1) ** m * v).max()))
            e_ref = max(e_ref, float(np.abs(f.reflect().values - (-1) ** (m + n) * v).max()))
    return [
        Part("ordinary transform", e_ord, 1e-7),
        Part("symplectic transform", e_sym, 1e-7),
        Part("tilde transform", e_til, 1e-7),
        Part("reflection permutation", e_ref, 1e-14),
    ], f"indices <= {N}, L=12, M=256"


def check_ccr(ctx: Context):
    a, ab, H = PolyQP.a(), PolyQP.abar(), PolyQP.H()
    bad = 0
    bad += poly_star(a, ab) - poly_star(ab, a) != PolyQP.const(2)
    bad += poly_star(ab, a) != H - 1
    bad += poly_star(a, ab) != H + 1
    return [Part("exact failures", float(bad), 0.0, scalable=False)], "polynomial backend"


def check_tracial(ctx: Context):
    rng = np.random.default_rng(SEED + 7)
    grid = PhaseGrid(10.0, 128)
    w1 = w2 = 0.0
    for _ in range(20):
        f = random_gauss_poly(grid, 4, rng)
        g = random_gauss_poly(grid, 4, rng)
        fg = integrate(twisted_product(f, g))
        gf = integrate(twisted_product(g, f))
        w1 = max(w1, abs(fg - integrate(f * g)))
        w2 = max(w2, abs(fg - gf))
    return [
        Part("|int f*g - int fg|", w1, 1e-7),
        Part("|int f*g - int g*f|", w2, 1e-10),
    ], "20 pairs, degree <= 4, L=10, M=128"


def check_banach(ctx: Context):
    rng = np.random.default_rng(SEED + 8)
    tuples = [(0, 0, 0, 0), (1, 1, -1, 2), (2, -1, 1, 0)]
    bad = 0
    for s, t, q, r in tuples:
        for _ in range(200):
            order = int(rng.integers(2, 17))
            f = random_decaying(order, rng, rate=float(rng.uniform(0.05, 0.8)))
            g = random_decaying(order, rng, rate=float(rng.uniform(0.05, 0.8)))
            _, ok = star_in_Gst(f, g, StWeights(s, t), StWeights(q, r))
            bad += not ok
    return [Part("bound violations", float(bad), 0.0, scalable=False)], "600 pairs over 3 weight tuples"


def check_backend_agreement(ctx: Context):
    rng = np.random.default_rng(SEED + 9)
    grid = PhaseGrid(12.0, 512)
    f = random_gauss_poly(grid, 4, rng)
    g = random_gauss_poly(grid, 4, rng)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BasisWarning)
        spec = BasisSpec(32, grid)
    via_matrix = synthesize(matrix_star(analyze(f, spec), analyze(g, spec)), grid)
    via_grid = twisted_product(f, g)
    rel = norm(via_grid - via_matrix) / norm(via_grid)
    return [Part("relative L2 error", rel, 1e-5)], "M_b=32, L=12, M=512, switch path"


def check_hilbert_schmidt(ctx: Context):
    sums = [hs_sum_partial(K) for K in range(1, 101)]
    drops = sum(b <= a for a, b in zip(sums, sums[1:]))
    return [
        Part("|S_100 - (pi^2/8)^2|", abs(sums[-1] - (math.pi**2 / 8) ** 2), 1e-2),
        Part("monotonicity violations", float(drops), 0.0, scalable=False),
    ], "K = 1..100"


def check_basis_change(ctx: Context):
    grid = PhaseGrid(10.0, 256)
    herm = {}
    e_proj = e_unit = 0.0
    for tot in range(7):
        for m in range(tot + 1):
            n = tot - m
            f = basis_fn((m, n), grid)
            total = 0.0
            for k in range(tot + 1):
                l = tot - k
                if (k, l) not in herm:
                    herm[(k, l)] = hermite_tensor(k, l, grid)
                c = basis_change_coeff(m, n, k, l)
                e_proj = max(e_proj, abs(c - pair_sesquilinear(herm[(k, l)], f)))
                total += abs(c) ** 2
            e_unit = max(e_unit, abs(total - 1.0))
    return [
        Part("closed form vs projection", e_proj, 1e-8),
        Part("anti-diagonal unitarity", e_unit, 1e-8),
    ], "m+n <= 6, L=10, M=256"


def check_howe(ctx: Context):
    rng = np.random.default_rng(SEED + 12)
    e_rec = 0.0
    bad_mono = bad_bound = 0
    for trial in range(50):
        order = int(rng.integers(3, 25))
        c = random_decaying(order, rng, rate=float(rng.uniform(0.1, 1.0))).entries.copy()
        if trial % 5 == 0:
            c[:, order - 2 :] = 0  # exercise the 0/0 rule
        b, d = howe_factorize(CoeffMatrix(c))
        dd = np.diag(d.entries).real
        e_rec = max(e_rec, float(np.abs(b.entries @ d.entries - c).max() / np.abs(c).max()))
        bad_mono += int(np.sum(np.diff(dd) > 0))
        bad_bound += int(np.sum(np.abs(b.entries) > dd[None, :] * (1 + 1e-15)))
    return [
        Part("relative reconstruction error", e_rec, 1e-14),
        Part("d increases", float(bad_mono), 0.0, scalable=False),
        Part("|b_mn| > d_n", float(bad_bound), 0.0, scalable=False),
    ], "50 random truncations"


def check_moyal_bracket(ctx: Context):
    q, p = PolyQP.q(), PolyQP.p()
    bad = int(moyal_bracket(q**2, p**2) != q * p * (8 * I))
    monos = [PolyQP.monomial(i, j) for i in range(3) for j in range(3 - i)]
    for P, Q in itertools.product(monos, monos):
        mb = moyal_bracket(P, Q)
        bad += mb != poisson_bracket(P, Q) * (2 * I)
        bad += mb != poly_star(P, Q) - poly_star(Q, P)
    return [Part("exact failures", float(bad), 0.0, scalable=False)], "all monomial pairs of degree <= 2"


def check_fourier_cross(ctx: Context):
    N = ctx.index(8)
    order = N + 1
    delta = Distribution.delta()
    bad = 0
    for m in range(order):
        for n in range(order):
            E = CoeffMatrix.unit(m, n, order)
            bad += not np.array_equal(dist_star(delta, E, "left").entries, (-1) ** m * E.entries)
            bad += not np.array_equal(dist_star(delta, E, "right").entries, (-1) ** n * E.entries)
    for m in range(min(order, 5)):
        for n in range(min(order, 5)):
            F = GaussPoly.basis(m, n)
            bad += dist_star(delta, F, "left") != F * (-1) ** m
    grid = PhaseGrid(8.0, 256)
    worst = 0.0
    for m in range(min(order, 5)):
        for n in range(min(order, 5)):
            f = basis_fn((m, n), grid)
            worst = max(worst, (dist_star(delta, f, "left") - f * (-1) ** m).sup())
    return [
        Part("coefficient-space failures", float(bad), 0.0, scalable=False),
        Part("grid sup error", worst, 1e-6),
    ], f"coefficients for m,n <= {N}; grid for m,n <= 4 at L=8, M=256"


def check_twisted_translation(ctx: Context):
    rng = np.random.default_rng(SEED + 15)
    grid = PhaseGrid(8.0, 256)
    f0 = basis_fn((0, 0), grid)
    g = random_gauss_poly(grid, 2, rng, width=0.8)
    base = twisted_product(f0, g)
    shifts = [(0.5, 0.0), (1.0, -0.5), (1.25, 1.5), (0.0, -2.0), (-1.375, 0.75)]
    worst = 0.0
    for v in shifts:
        v = PhasePoint(*v)
        lhs = twisted_translate(base, v)
        rhs = twisted_product(f0, twisted_translate(g, v))
        worst = max(worst, (lhs - rhs).sup())
    return [Part("sup error", worst, 1e-6)], "5 grid-aligned shifts with |v| <= 2, L=8, M=256"


CHECKS: list[tuple[str, int, Callable]] = [
    ("matrix-units", 1, check_matrix_units),
    ("orthonormality", 2, check_orthonormality),
    ("f0-normalization", 3, check_f0),
    ("eigenrelations", 4, check_eigenrelations),
    ("fourier-eigenbasis", 5, check_fourier),
    ("ccr", 6, check_ccr),
    ("tracial", 7, check_tracial),
    ("banach", 8, check_banach),
    ("backend-agreement", 9, check_backend_agreement),
    ("hilbert-schmidt", 10, check_hilbert_schmidt),
    ("basis-change", 11, check_basis_change),
    ("howe", 12, check_howe),
    ("moyal-bracket", 13, check_moyal_bracket),
    ("fourier-cross", 14, check_fourier_cross),
    ("twisted-translation", 15, check_twisted_translation),
]

CHECK_NAMES = [name for name, _, _ in CHECKS]


def run_check(name: str, ctx: Context | None = None) -> CheckResult:
    ctx = ctx or Context()
    for cname, crit, fn in CHECKS:
        if cname == name:
            t0 = time.perf_counter()
            parts, detail = fn(ctx)
            dt = time.perf_counter() - t0
            passed = all(p.ok(ctx.tolerance_scale) for p in parts)
            return CheckResult(cname, crit, passed, dt, parts, detail)
    raise KeyError(f"unknown check {name!r}; known: {', '.join(CHECK_NAMES)}")


def run_checks(only=None, max_index=None, tolerance_scale=1.0, progress=None) -> list[CheckResult]:
    """Run the selected checks in registry order."""
    ctx = Context(max_index=max_index, tolerance_scale=tolerance_scale)
    names = CHECK_NAMES if not only else [n for n in CHECK_NAMES if n in set(only)]
    unknown = set(only or ()) - set(CHECK_NAMES)
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(sorted(unknown))}")
    out = []
    for name in names:
        res = run_check(name, ctx)
        if progress:
            progress(res)
        out.append(res)
    return out


def format_result(res: CheckResult, scale: float = 1.0) -> str:
    """One line per check followed by indented measurements."""
    lines = [f"[{'PASS' if res.passed else 'FAIL'}] {res.criterion:2d} {res.name:<20s} {res.seconds:7.2f}s  {res.detail}"]
    for p in res.parts:
        lim = p.limit * scale if p.scalable else p.limit
        mark = "ok " if p.ok(scale) else "BAD"
        lines.append(f"      {mark} {p.label:<40s} {p.value:.3e} <= {lim:.1e}")
    return "\n".join(lines)


def report_json(results: list[CheckResult], scale: float = 1.0) -> str:
    """Machine-readable report; timings are left out so reruns compare equal."""
    payload = {
        "tolerance_scale": scale,
        "passed": all(r.passed for r in results),
        "checks": [
            {
                "name": r.name,
                "criterion": r.criterion,
                "passed": r.passed,
                "detail": r.detail,
                "parts": [asdict(p) for p in r.parts if "seconds" not in p.label],
            }
            for r in results
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True)
