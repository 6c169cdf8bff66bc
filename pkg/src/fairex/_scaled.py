"""Integer-scaled vectorised utility evaluation for the brute-force oracles.

Data amounts are multiplied by a common denominator ``D`` and agent ``i``'s
utilities by ``D * Q_i`` (``Q_i`` clears its slope and cost denominators), so
every comparison the oracles make is an exact integer comparison.  Arrays are
``int64`` when the worst-case magnitude fits, Python-int object arrays
otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .model import Instance

_INT64_SAFE = 1 << 60


class ScaledGame:
    def __init__(self, inst: Instance, amounts: Iterable[Fraction], max_amount: Fraction):
        self.inst = inst
        dens = {1}
        for v in amounts:
            dens.add(v.denominator)
        for a in inst.agents:
            dens.update(bp.denominator for bp in a.benefit.breakpoints)
        self.D = lcm(*dens)
        self.Q: list[int] = []
        self.A: list[list[int]] = []
        self.M: list[list[int]] = []
        self.L: list[list[int]] = []
        self.C: list[int] = []
        worst = 0
        top = (inst.n + 1) * max_amount * self.D
        for a in inst.agents:
            b = a.benefit
            q = lcm(a.cost.denominator, *(m.denominator for m in b.slopes))
            bps = [int(bp * self.D) for bp in b.breakpoints]
            self.Q.append(q)
            self.A.append(bps[:-1])
            self.M.append([int(m * q) for m in b.slopes[:-1]])
            self.L.append([hi - lo for lo, hi in zip(bps, bps[1:])])
            self.C.append(int(a.cost * q))
            cap = b.values[-1] * self.D * q
            worst = max(worst, cap + a.cost * q * top, top)
        self.dtype = np.int64 if worst < _INT64_SAFE else object

    def ints(self, values: Sequence[Fraction]) -> np.ndarray:
        D = self.D
        out = []
        for v in values:
            s = v * D
            if s.denominator != 1:
                raise ValueError(f"{v} is not on the scaled lattice 1/{D}")
            out.append(int(s))
        return np.array(out, dtype=self.dtype)

    def benefit(self, i: int, T: np.ndarray) -> np.ndarray:
        out = np.zeros(T.shape, dtype=self.dtype)
        for a, m, ln in zip(self.A[i], self.M[i], self.L[i]):
            out = out + m * np.clip(T - a, 0, ln)
        return out

    def totals(self, i: int, own: np.ndarray, others: np.ndarray) -> np.ndarray:
        """Totals of agent ``i`` for rows of ``others`` (shape ``(m, n)``, column ``i`` ignored)."""
        t = own.copy()
        for j in self.inst.neighbors(i):
            t = t + np.minimum(own, others[:, j])
        return t

    def utility(self, i: int, own: np.ndarray, total: np.ndarray) -> np.ndarray:
        return self.benefit(i, total) - self.C[i] * own
