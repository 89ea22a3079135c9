"""Minimal linear recurrences of rational sequences and their rational characteristic roots."""

from typing import Dict, Iterable, List, Sequence

from sympy import Poly, Symbol, roots
from sympy.polys.domains import QQ

from algebra.exactnum import scalar

t = Symbol("t")


class BerlekampMassey:
    """Incremental Berlekamp-Massey over ``QQ``.

    After feeding ``2L`` terms of a sequence satisfying a recurrence of order ``L``,
    :meth:`result` is its minimal characteristic polynomial.
    """

    def __init__(self):
        self.reset()

    def reset(self) -> None:
        self.C: List[object] = [QQ.one]
        self.B: List[object] = [QQ.one]
        self.L = 0
        self.shift = 1
        self.last = QQ.one
        self.seq: List[object] = []

    def add(self, value) -> bool:
        """Feed the next term; returns True when the current recurrence already predicts it."""
        value = scalar(value)
        n = len(self.seq)
        self.seq.append(value)
        d = value
        for i in range(1, self.L + 1):
            if i < len(self.C):
                d += self.C[i] * self.seq[n - i]
        if not d:
            self.shift += 1
            return True
        factor = d / self.last
        previous = list(self.C)
        width = max(len(self.C), len(self.B) + self.shift)
        C = self.C + [QQ.zero] * (width - len(self.C))
        for i, b in enumerate(self.B):
            C[i + self.shift] -= factor * b
        self.C = C
        if 2 * self.L <= n:
            self.L = n + 1 - self.L
            self.B = previous
            self.last = d
            self.shift = 1
        else:
            self.shift += 1
        return False

    def result(self) -> List[object]:
        """Coefficients ``c_0..c_L`` (low to high, ``c_L = 1``) of the characteristic polynomial."""
        C = self.C + [QQ.zero] * (self.L + 1 - len(self.C))
        return [C[self.L - k] for k in range(self.L + 1)]

    @staticmethod
    def for_sequence(seq: Iterable[object]) -> List[object]:
        bm = BerlekampMassey()
        for a in seq:
            bm.add(a)
        return bm.result()


def berlekamp_massey(seq: Sequence[object]) -> List[object]:
    return BerlekampMassey.for_sequence(seq)


def to_poly(coeffs: Sequence[object]) -> Poly:
    return Poly([QQ.to_sympy(scalar(c)) for c in reversed(coeffs)], t, domain=QQ)


def rational_roots(coeffs: Sequence[object]) -> Dict[object, int]:
    """Rational roots with multiplicity of the polynomial with coefficients ``c_0..c_n``."""
    if len(coeffs) <= 1:
        return {}
    found = roots(to_poly(coeffs), filter="Q")
    return {QQ.from_sympy(a): int(k) for a, k in found.items()}


def lcm_coefficients(*polys: Sequence[object]) -> List[object]:
    """Monic lcm of polynomials given as low-to-high coefficient lists."""
    out = Poly(1, t, domain=QQ)
    for coeffs in polys:
        out = out.lcm(to_poly(coeffs))
    out = out.monic()
    return [QQ.from_sympy(c) for c in out.all_coeffs()[::-1]]
