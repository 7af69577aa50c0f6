"""Divergence-class heuristics and gauge/radius-function equivalence.

Membership of a gauge g in the divergence class (divergent sum along every
subset of upper density > 1 - eps) is undecidable from finitely many values,
so the check here is a falsification heuristic only: the adversarial subset
of 1..N of density 1 - eps minimizing the sum keeps everything except the
floor(eps N) largest values.  If even that minimal sum clears a slowly
growing floor the verdict is "plausible", otherwise "refuted-at-N"; the
verdict never claims membership.  The default floor is the decimal iterated
logarithm log10(log10 N) (about 0.6 at N = 1e4), calibrated so that the
harmonic gauge at eps = 1/2 is plausible while summable gauges are refuted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from ..symbolic import SymbolicMeasure, WORD_BUDGET_DEFAULT, level_set


@dataclass(frozen=True)
class GDivergenceVerdict:
    verdict: str                 # "plausible" | "refuted-at-N"
    adversarial_sum: float
    floor: float
    N: int
    eps: float

    @property
    def plausible(self) -> bool:
        return self.verdict == "plausible"


def g_divergence_heuristic(values, eps: float,
                           growth_floor: float | None = None) -> GDivergenceVerdict:
    """Adversarial partial-sum check of the divergence-class property.

    ``values`` tabulates g on 1..N (N >= 100); ``eps`` is the density slack.
    """
    g = np.asarray(values, dtype=np.float64)
    N = g.size
    if N < 100:
        raise InputError("heuristic needs g tabulated on 1..N with N >= 100")
    if not 0.0 < eps < 1.0:
        raise InputError("eps must lie in (0, 1)")
    if np.any(g < 0.0):
        raise InputError("gauge values must be nonnegative")
    drop = int(math.floor(eps * N))
    kept = np.sort(g)[: N - drop]
    total = float(kept.sum())
    floor = math.log10(math.log10(N)) if growth_floor is None else float(growth_floor)
    verdict = "plausible" if total >= floor else f"refuted-at-{N}"
    return GDivergenceVerdict(verdict=verdict, adversarial_sum=total, floor=floor,
                              N=N, eps=eps)


def psi_from_mg(m: SymbolicMeasure, g, n: int, d: int,
                word_budget: int = WORD_BUDGET_DEFAULT) -> tuple:
    """Radius function a -> (m([a]) g(n))^(1/d) on L_{m,n}.

    Returns (level set, radii aligned with its words).
    """
    if d < 1:
        raise InputError("dimension must be >= 1")
    L = level_set(m, n, word_budget)
    gn = float(g(n))
    if gn < 0.0:
        raise InputError("gauge values must be nonnegative")
    radii = (L.measures * gn) ** (1.0 / d)
    return L, radii


@dataclass(frozen=True)
class PsiEquivalence:
    min_ratio: float
    max_ratio: float
    ratio_bound: float

    @property
    def passed(self) -> bool:
        return (0.0 < self.min_ratio and math.isfinite(self.max_ratio)
                and self.max_ratio / self.min_ratio <= self.ratio_bound)


def psi_equivalence_check(psi, m: SymbolicMeasure, g, n_range, d: int,
                          ratio_bound: float = 100.0,
                          word_budget: int = WORD_BUDGET_DEFAULT) -> PsiEquivalence:
    """Comparability constants of a radius function against (m, g).

    ``psi`` maps words to radii (callable or mapping).  Over every level in
    ``n_range`` the ratio psi(a) / (m([a]) g(n))^(1/d) is collected; the
    check passes iff both extremes are finite, positive, and within the
    configured multiplicative bound of each other.
    """
    lookup = psi.get if hasattr(psi, "get") else psi
    lo = math.inf
    hi = 0.0
    for n in n_range:
        L, radii = psi_from_mg(m, g, int(n), d, word_budget)
        for word, ref in zip(L.words, radii):
            val = lookup(word)
            if val is None:
                raise InputError(f"psi is not defined on the level-set word {word}")
            if ref == 0.0:
                ratio = math.inf if val > 0.0 else math.nan
            else:
                ratio = float(val) / float(ref)
            if math.isnan(ratio):
                continue
            lo = min(lo, ratio)
            hi = max(hi, ratio)
    if hi == 0.0:
        lo = 0.0
    return PsiEquivalence(min_ratio=lo, max_ratio=hi, ratio_bound=ratio_bound)
