"""Three-branch lattice of Grover three-ports with directed edge states.

Each lattice site ``m`` holds two three-ports (top and bottom) joined by a
vertical branch ``j = 0``; the upper (``j = +1``) and lower (``j = -1``)
horizontal branches run from site ``m`` to site ``m + 1``. A photon on a
branch moves ``L`` (leftward, or upward on the vertical branch) or ``R``.
The ring closes periodically, so Bloch analysis is exact.

Basis order for the 6N-dimensional chain is ``(m, j, D)`` with ``j`` in
``(+1, 0, -1)`` and ``D`` in ``(L, R)``; the projected 3N-dimensional chain
drops ``D``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment, minimize_scalar

from .core import hermiticity_residual

J_ORDER = (1, 0, -1)
DIRECTIONS = ("L", "R")
SQ2 = np.sqrt(2.0)
TWO_PI = 2 * np.pi


@dataclass(frozen=True, order=True)
class ChainLabel:
    m: int
    j: int
    D: str

    def __post_init__(self):
        if self.j not in J_ORDER:
            raise ValueError(f"branch must be one of {J_ORDER}")
        if self.D not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")


def chain_index(N: int, m: int, j: int, D: str | None = None) -> int:
    site = (m % N) * 3 + J_ORDER.index(j)
    return site if D is None else 2 * site + DIRECTIONS.index(D)


def chain_basis(N: int, projected: bool = False) -> list:
    if projected:
        return [(m, j) for m in range(N) for j in J_ORDER]
    return [ChainLabel(m, j, D) for m in range(N) for j in J_ORDER for D in DIRECTIONS]


@dataclass(frozen=True)
class ChainOperator:
    N: int
    matrix: np.ndarray
    projected: bool = False
    raw_hermiticity_residual: float = 0.0

    @property
    def internal_dim(self) -> int:
        return 3 if self.projected else 6


def chain_terms(m: int):
    """Transition terms around site ``m`` as ``(to, from, coefficient)``.

    Six direction-reversing terms of weight 1/3 (reflection at a three-port)
    and twelve hops of weight -2/3 (transmission), two three-ports per site.
    """
    third = 1 / 3
    terms = []
    for j in J_ORDER:
        terms.append(((m, j, "R"), (m, j, "L"), third))
        terms.append(((m, j, "L"), (m, j, "R"), third))
    hops = [
        ((m, 1, "R"), (m, 0, "L")), ((m, 0, "R"), (m, 1, "L")),
        ((m, -1, "R"), (m, 0, "R")), ((m, 0, "L"), (m, -1, "L")),
        ((m - 1, 1, "L"), (m, 0, "L")), ((m - 1, -1, "L"), (m, 0, "R")),
        ((m - 1, 1, "L"), (m, 1, "L")), ((m - 1, -1, "L"), (m, -1, "L")),
        ((m + 1, 1, "R"), (m, 1, "R")), ((m + 1, 0, "R"), (m, 1, "R")),
        ((m + 1, -1, "R"), (m, -1, "R")), ((m + 1, 0, "L"), (m, -1, "R")),
    ]
    terms.extend((a, b, -2 * third) for a, b in hops)
    return terms


def assemble_chain_terms(N: int) -> np.ndarray:
    """Unsymmetrised 6N x 6N operator built directly from the term list."""
    if N < 2:
        raise ValueError("the chain needs at least two sites")
    H = np.zeros((6 * N, 6 * N), dtype=complex)
    for m in range(N):
        for to, frm, c in chain_terms(m):
            H[chain_index(N, *to), chain_index(N, *frm)] += c
    return H


def build_full_chain(N: int) -> ChainOperator:
    """Hermitised chain Hamiltonian ``(H + H^dagger)/2`` on the 6N directed states."""
    H = assemble_chain_terms(N)
    raw = hermiticity_residual(H)
    return ChainOperator(N, (H + H.conj().T) / 2, projected=False, raw_hermiticity_residual=raw)


def projector(N: int) -> np.ndarray:
    """``P`` with ``|m,j> -> (|m,j,L> + |m,j,R>)/sqrt(2)``, shape (6N, 3N)."""
    P = np.zeros((6 * N, 3 * N))
    for m in range(N):
        for j in J_ORDER:
            col = chain_index(N, m, j)
            for D in DIRECTIONS:
                P[chain_index(N, m, j, D), col] = 1 / SQ2
    return P


def project_chain(full: ChainOperator) -> ChainOperator:
    if full.projected or full.matrix.shape != (6 * full.N, 6 * full.N):
        raise ValueError("project_chain needs the full 6N-dimensional chain operator")
    P = projector(full.N)
    Hc = P.T @ full.matrix @ P
    return ChainOperator(full.N, Hc, projected=True, raw_hermiticity_residual=full.raw_hermiticity_residual)


def shift_operator(N: int, internal_dim: int) -> np.ndarray:
    """Translation by one site, ``|m, s> -> |m+1, s>``."""
    return np.kron(np.roll(np.eye(N), 1, axis=0), np.eye(internal_dim))


def translation_commutator(op: ChainOperator) -> float:
    S = shift_operator(op.N, op.internal_dim)
    return float(np.max(np.abs(op.matrix @ S - S @ op.matrix)))


def bloch_block(op: ChainOperator, k: float) -> np.ndarray:
    """Momentum-space block ``sum_d H[(0,a),(d,b)] e^{ikd}`` with signed hop ``d``.

    Uses ``|k,j> = N^{-1/2} sum_m e^{imk} |m,j>``.
    """
    s = op.internal_dim
    B = np.zeros((s, s), dtype=complex)
    for d in range(op.N):
        hop = d if d <= op.N // 2 else d - op.N
        B += op.matrix[:s, d * s:(d + 1) * s] * np.exp(1j * k * hop)
    return B


def bloch_hamiltonian(k: float) -> np.ndarray:
    """Closed-form 3x3 Bloch Hamiltonian in the branch basis ``(+1, 0, -1)``.

    The prefactor is the real 1/3; the matrix body is Hermitian.
    """
    c = -2 * SQ2 * np.cos(k / 2)
    up, dn = c * np.exp(0.5j * k), c * np.exp(-0.5j * k)
    edge = 1 - 2 * SQ2 * np.cos(k)
    return np.array([
        [edge, up, 0],
        [dn, 1, dn],
        [0, up, edge],
    ], dtype=complex) / 3


def printed_bloch_matrix(k: float) -> np.ndarray:
    """Same body with the literal ``-i/3`` prefactor (non-Hermitian)."""
    return -1j * bloch_hamiltonian(k)


def band_energies_closed_form(k: float) -> np.ndarray:
    """(E1, E2, E3) in their formula labels, not sorted."""
    c = np.cos(k)
    return np.array([
        (1 - 2 * SQ2 * c) / 3,
        (1 - 2 * SQ2 * (1 - c)) / 3,
        (1 + 2 * SQ2) / 3,
    ])


def band_eigenvectors_closed_form(k: float, normalize: bool = True) -> np.ndarray:
    """Rows are the tabulated vectors psi1, psi2, psi3.

    These are reproduced as tabulated and are *not* verified eigenvectors:
    psi1 . psi3 = 2 before normalisation.
    """
    V = np.array([
        [-1.0, 0.0, 1.0],
        [1.0, -2 * SQ2, 1.0],
        [-1.0, 2 * SQ2 * (1 + np.cos(k)), 1.0],
    ])
    if normalize:
        V = V / np.linalg.norm(V, axis=1, keepdims=True)
    return V


# --- band structures ----------------------------------------------------------

@dataclass
class BandStructure:
    """Sampled bands.

    ``energies`` is ascending per k; ``tracked`` follows each band through
    crossings (formula labels for closed-form data, eigenvector overlap for
    numerical data). ``energy_fn`` re-evaluates sorted energies at any k and
    ``labeled_fn`` smooth, labelled ones where known; both are optional.
    """
    k_grid: np.ndarray
    energies: np.ndarray
    source: str
    eigenvectors: np.ndarray | None = None
    tracked: np.ndarray | None = None
    energy_fn: Callable[[float], np.ndarray] | None = field(default=None, repr=False)
    labeled_fn: Callable[[float], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.k_grid = np.asarray(self.k_grid, dtype=float)
        self.energies = np.asarray(self.energies, dtype=float)
        if self.tracked is None:
            self.tracked = self.energies.copy()

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        nb = self.energies.shape[1]
        w.writerow(["k"] + [f"E{i + 1}" for i in range(nb)] + ["source"])
        for k, row in zip(self.k_grid, self.energies):
            w.writerow([fmt17(k)] + [fmt17(e) for e in row] + [self.source])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{"k": float(k), "energies": [float(e) for e in row]}
                for k, row in zip(self.k_grid, self.energies)]
        return json.dumps({"source": self.source, "bands": rows}, indent=2)


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def k_samples(samples: int) -> np.ndarray:
    if samples < 3:
        raise ValueError("need at least 3 k-samples")
    return TWO_PI * np.arange(samples) / samples


def _eigh_bands(fn, k_grid):
    E = np.empty((len(k_grid), 3))
    V = np.empty((len(k_grid), 3, 3), dtype=complex)
    for i, k in enumerate(k_grid):
        E[i], V[i] = np.linalg.eigh(fn(k))
    return E, V


def track_bands(energies: np.ndarray, eigenvectors: np.ndarray, degeneracy_tol: float = 1e-9):
    """Follow bands across k by maximal eigenvector overlap.

    ``eigenvectors[i]`` holds eigenvectors as columns, matching the sorted
    ``energies[i]``. Where two sorted levels coincide within
    ``degeneracy_tol`` the previous assignment is kept and the last
    non-degenerate eigenvectors stay the reference.

    Returns:
        (tracked energies, permutations) where ``tracked[i, b] = energies[i, perm[i, b]]``.
    """
    n, nb = energies.shape
    perms = np.empty((n, nb), dtype=int)
    perms[0] = np.arange(nb)
    ref = eigenvectors[0]
    for i in range(1, n):
        if np.min(np.diff(energies[i])) < degeneracy_tol:
            perms[i] = perms[i - 1]
            continue
        overlap = np.abs(ref.conj().T @ eigenvectors[i]) ** 2
        rows, cols = linear_sum_assignment(-overlap)
        perms[i, rows] = cols
        ref = eigenvectors[i][:, perms[i]]
    tracked = np.take_along_axis(energies, perms, axis=1)
    return tracked, perms


def chain_bloch_function(N: int) -> Callable[[float], np.ndarray]:
    """k -> 3x3 Bloch block of the projected, Hermitised chain."""
    op = project_chain(build_full_chain(N))
    return lambda k: bloch_block(op, k)


def band_structure(source: str, samples: int, N: int = 16) -> BandStructure:
    """Sample bands over ``k = 2*pi*n/samples``.

    Args:
        source: ``closed_form`` (tabulated formulas), ``numerical``
            (diagonalise :func:`bloch_hamiltonian`) or ``chain``
            (Bloch blocks of the projected first-principles chain on N sites).
        samples: number of k points, at least 3.
    """
    source = source.replace("-", "_")
    K = k_samples(samples)
    if source == "closed_form":
        labeled = np.array([band_energies_closed_form(k) for k in K])
        return BandStructure(K, np.sort(labeled, axis=1), "closed_form", None, labeled,
                             energy_fn=lambda k: np.sort(band_energies_closed_form(k)),
                             labeled_fn=band_energies_closed_form)
    if source == "numerical":
        fn = bloch_hamiltonian
    elif source == "chain":
        fn = chain_bloch_function(N)
    else:
        raise ValueError(f"unknown band source {source!r}")
    E, V = _eigh_bands(fn, K)
    tracked, _ = track_bands(E, V)
    return BandStructure(K, E, source, V, tracked, energy_fn=lambda k: np.linalg.eigvalsh(fn(k)))


def band_gap(bands: BandStructure, lower: int, upper: int) -> float:
    """Minimum over the sampled zone of ``|tracked[upper] - tracked[lower]|``."""
    return float(np.min(np.abs(bands.tracked[:, upper] - bands.tracked[:, lower])))


def _dedupe(points, tol=1e-6):
    out: list[float] = []
    for p in sorted(x % TWO_PI for x in points):
        if out and abs(p - out[-1]) < tol:
            continue
        out.append(p)
    if len(out) > 1 and TWO_PI - out[-1] + out[0] < tol:
        out.pop()
    return out


def _labeled_crossings(fn, K, tol):
    Lab = np.array([fn(k) for k in K])
    n, nb = Lab.shape
    period = K[0] + TWO_PI
    Kp = np.append(K, period)
    found = []
    for a in range(nb):
        for b in range(a + 1, nb):
            d = np.append(Lab[:, a] - Lab[:, b], Lab[0, a] - Lab[0, b])

            def diff(k, a=a, b=b):
                v = fn(k)
                return v[a] - v[b]

            for i in range(n):
                if d[i] == 0.0:
                    found.append(Kp[i])
                elif d[i] * d[i + 1] < 0:
                    found.append(brentq(diff, Kp[i], Kp[i + 1], xtol=1e-14, rtol=1e-15))
            # tangencies: |d| has a local minimum without a sign change
            ad = np.abs(d[:n])
            for i in range(n):
                lo, hi = ad[i - 1], ad[(i + 1) % n]
                if not (ad[i] < lo and ad[i] <= hi) or ad[i] == 0.0:
                    continue
                if d[i - 1] * d[i] < 0 or d[i] * d[(i + 1) % n] < 0:
                    continue
                h = 1e-6

                def slope(k, diff=diff):
                    return abs(diff(k + h)) - abs(diff(k - h))

                left, right = Kp[i] - (K[1] - K[0]), Kp[i] + (K[1] - K[0])
                if slope(left) * slope(right) < 0:
                    k0 = brentq(slope, left, right, xtol=1e-14)
                else:
                    k0 = Kp[i]
                if abs(diff(k0)) <= tol:
                    found.append(k0)
    return found


def _sorted_gap_crossings(bands: BandStructure, tol):
    E = bands.energies
    K = bands.k_grid
    n, nb = E.shape
    dk = K[1] - K[0] if n > 1 else TWO_PI
    found = []
    for b in range(nb - 1):
        g = E[:, b + 1] - E[:, b]
        for i in range(n):
            lo, hi = g[i - 1], g[(i + 1) % n]
            if not (g[i] <= lo and g[i] <= hi) or (g[i] == lo and g[i] == hi and g[i] > tol):
                continue
            if bands.energy_fn is None:
                if g[i] <= tol:
                    found.append(K[i])
                continue

            def gap(k, b=b):
                e = bands.energy_fn(k)
                return e[b + 1] - e[b]

            res = minimize_scalar(gap, bounds=(K[i] - dk, K[i] + dk), method="bounded",
                                  options={"xatol": 1e-12})
            k0, g0 = (res.x, res.fun) if res.fun <= g[i] else (K[i], g[i])
            if g0 <= tol:
                found.append(k0)
    return found


def crossing_points(bands: BandStructure, tol: float = 1e-6) -> list[float]:
    """Momenta in ``[0, 2*pi)`` where two bands meet within ``tol``.

    Candidates come from the sampled grid (which must cover the zone
    uniformly) and are refined on the continuous band functions when the
    BandStructure carries them: sign changes of labelled band differences
    are bisected, tangencies located from the zero of the slope, and
    otherwise the sorted gap is minimised.
    """
    if bands.labeled_fn is not None:
        pts = _labeled_crossings(bands.labeled_fn, bands.k_grid, tol)
    else:
        pts = _sorted_gap_crossings(bands, tol)
    return _dedupe(pts)


# --- cross-validation report ----------------------------------------------------

def consistency_report(N: int = 12, samples: int = 64, crossing_tol: float = 1e-6) -> dict:
    """Compare tabulated bands and vectors against first-principles constructions.

    Nothing is asserted; every discrepancy is measured and returned.
    """
    from .su3 import tabulated_coefficients, gell_mann, su3_reconstruct

    if N < 8:
        raise ValueError("consistency_report needs N >= 8")
    full = build_full_chain(N)
    proj = project_chain(full)
    fp = lambda k: bloch_block(proj, k)  # noqa: E731
    K = k_samples(samples)

    # the full 3N spectrum must equal the union of Bloch spectra on the N-grid
    grid = TWO_PI * np.arange(N) / N
    union = np.sort(np.concatenate([np.linalg.eigvalsh(fp(k)) for k in grid]))
    block_residual = float(np.max(np.abs(np.sort(np.linalg.eigvalsh(proj.matrix)) - union)))

    rows = []
    for k in K:
        cf = band_energies_closed_form(k)
        pb = np.linalg.eigvalsh(bloch_hamiltonian(k))
        fb = np.linalg.eigvalsh(fp(k))
        rows.append({
            "k": float(k),
            "closed_form": cf.tolist(),
            "printed_bloch": pb.tolist(),
            "first_principles": fb.tolist(),
            "dev_printed_vs_closed": float(np.max(np.abs(pb - np.sort(cf)))),
            "dev_first_principles_vs_closed": float(np.max(np.abs(fb - np.sort(cf)))),
            "sum_rule_closed": float(cf.sum() - 1.0),
            "trace_residual_printed": float(pb.sum() - np.trace(bloch_hamiltonian(k)).real),
            "trace_residual_first_principles": float(fb.sum() - np.trace(fp(k)).real),
        })

    def crossings(src):
        if src == "first_principles":
            E, V = _eigh_bands(fp, K)
            bs = BandStructure(K, E, "chain", V, energy_fn=lambda k: np.linalg.eigvalsh(fp(k)))
        else:
            bs = band_structure(src, samples)
        return [float(x) for x in crossing_points(bs, crossing_tol)]

    cross = {name: crossings(name) for name in ("closed_form", "numerical", "first_principles")}

    def same(a, b):
        return len(a) == len(b) and all(abs(x - y) < 1e-6 for x, y in zip(a, b))

    V = band_eigenvectors_closed_form(0.0, normalize=False)
    dots = {"psi1.psi2": float(V[0] @ V[1]), "psi1.psi3": float(V[0] @ V[2])}
    psi23 = [float(band_eigenvectors_closed_form(k, False)[1] @ band_eigenvectors_closed_form(k, False)[2])
             for k in K]
    violations = [name for name, v in dots.items() if abs(v) > 1e-12]
    if max(abs(x) for x in psi23) > 1e-12:
        violations.append("psi2.psi3")
    vec_residual = []
    for k in K:
        H = bloch_hamiltonian(k)
        Vn = band_eigenvectors_closed_form(k)
        E = band_energies_closed_form(k)
        vec_residual.append([float(np.linalg.norm(H @ v - e * v)) for v, e in zip(Vn, E)])
    vec_residual = np.array(vec_residual)

    su3_dev = [float(np.max(np.abs(su3_reconstruct(tabulated_coefficients(k)) - bloch_hamiltonian(k))))
               for k in K]
    lam7 = gell_mann(7, printed=True)

    summary = {
        "max_dev_printed_vs_closed": max(r["dev_printed_vs_closed"] for r in rows),
        "max_dev_first_principles_vs_closed": max(r["dev_first_principles_vs_closed"] for r in rows),
        "max_abs_sum_rule_closed": max(abs(r["sum_rule_closed"]) for r in rows),
        "max_abs_trace_residual_printed": max(abs(r["trace_residual_printed"]) for r in rows),
        "max_abs_trace_residual_first_principles": max(abs(r["trace_residual_first_principles"]) for r in rows),
    }
    return {
        "format": "multiportlab.consistency/1",
        "N": N,
        "samples": samples,
        "chain": {
            "dimension_full": 6 * N,
            "raw_hermiticity_residual": full.raw_hermiticity_residual,
            "hermitized": True,
            "hermiticity_residual_full": hermiticity_residual(full.matrix),
            "hermiticity_residual_projected": hermiticity_residual(proj.matrix),
            "translation_commutator_full": translation_commutator(full),
            "translation_commutator_projected": translation_commutator(proj),
            "projected_diagonal": sorted({round(float(x), 15) for x in np.diag(proj.matrix).real}),
            "block_spectrum_residual": block_residual,
        },
        "bloch_prefactor": {
            "tabulated": "-i/3",
            "adopted": "1/3",
            "tabulated_hermiticity_residual_k0": hermiticity_residual(printed_bloch_matrix(0.0)),
        },
        "rows": rows,
        "summary": summary,
        "crossings": {
            **cross,
            "numerical_matches_closed_form": same(cross["numerical"], cross["closed_form"]),
            "first_principles_matches_closed_form": same(cross["first_principles"], cross["closed_form"]),
        },
        "eigenvectors": {
            **dots,
            "psi2.psi3_max_abs": max(abs(x) for x in psi23),
            "orthogonality_violations": violations,
            "max_residual_vs_bloch": vec_residual.max(axis=0).tolist(),
        },
        "su3_tabulated": {
            "max_deviation_k0": su3_dev[0],
            "max_deviation_all_k": max(su3_dev),
        },
        "gell_mann": {
            "tabulated_lambda7_hermiticity_residual": hermiticity_residual(lam7),
            "lambda7_adopted": "[[0,0,0],[0,0,-i],[0,i,0]]",
        },
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
