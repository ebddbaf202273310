"""Exact Wigner 3j and 6j symbols via Racah's closed forms.

Spins and magnetic numbers are passed as doubled integers (c = 2j,
tm = 2m) so every quantity stays integral.  Values are exact QSqrt
scalars; sums mixing radical classes use a small multi-class accumulator.
"""

from __future__ import annotations

import functools
from fractions import Fraction

from .algebra import QSqrt, sqrt_fraction

MAX_DOUBLED_SPIN = 40


@functools.lru_cache(maxsize=None)
def _fact(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of {n}")
    return 1 if n == 0 else n * _fact(n - 1)


def triangle_ok(c1: int, c2: int, c3: int) -> bool:
    """Vertex admissibility for doubled spins: parity and triangle bounds."""
    if min(c1, c2, c3) < 0 or (c1 + c2 + c3) % 2:
        return False
    return abs(c1 - c2) <= c3 <= c1 + c2


class RadicalSum:
    """Exact sum of QSqrt values grouped by squarefree radicand."""

    def __init__(self):
        self.classes: dict[int, Fraction] = {}

    def add(self, x: QSqrt) -> None:
        if x.is_zero():
            return
        s = self.classes.get(x.r, Fraction(0)) + x.q
        if s:
            self.classes[x.r] = s
        else:
            del self.classes[x.r]

    def to_qsqrt(self) -> QSqrt:
        if not self.classes:
            return QSqrt(0)
        if len(self.classes) > 1:
            raise ValueError(f"mixed radicands survive: {sorted(self.classes)}")
        ((r, q),) = self.classes.items()
        out = QSqrt(0)
        out.q, out.r = q, r
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, RadicalSum):
            return self.classes == other.classes
        return NotImplemented


def three_j(c1: int, c2: int, c3: int, tm1: int, tm2: int, tm3: int) -> QSqrt:
    """Exact 3j symbol; doubled spins c_i = 2j_i and doubled m's."""
    for c in (c1, c2, c3):
        if c > MAX_DOUBLED_SPIN:
            raise ValueError(f"doubled spin {c} exceeds cap {MAX_DOUBLED_SPIN}")
    if tm1 + tm2 + tm3 != 0 or not triangle_ok(c1, c2, c3):
        return QSqrt(0)
    for c, tm in ((c1, tm1), (c2, tm2), (c3, tm3)):
        if abs(tm) > c or (c - tm) % 2:
            return QSqrt(0)
    jpm = [(c1 + tm1) // 2, (c2 + tm2) // 2, (c3 + tm3) // 2]
    jmm = [(c1 - tm1) // 2, (c2 - tm2) // 2, (c3 - tm3) // 2]
    a = (c1 + c2 - c3) // 2
    b = (c1 - c2 + c3) // 2
    c = (-c1 + c2 + c3) // 2
    big_j = (c1 + c2 + c3) // 2
    radicand = Fraction(_fact(a) * _fact(b) * _fact(c), _fact(big_j + 1))
    for x, y in zip(jpm, jmm):
        radicand *= _fact(x) * _fact(y)
    # Racah sum
    k_lo = max(0, (c2 - c3 - tm1) // 2, (c1 - c3 + tm2) // 2)
    k_hi = min(a, jmm[0], jpm[1])
    total = Fraction(0)
    for k in range(k_lo, k_hi + 1):
        den = (_fact(k) * _fact(a - k) * _fact(jmm[0] - k) * _fact(jpm[1] - k)
               * _fact((c3 - c2 + tm1) // 2 + k) * _fact((c3 - c1 - tm2) // 2 + k))
        total += Fraction(-1 if k % 2 else 1, den)
    if total == 0:
        return QSqrt(0)
    phase = -1 if ((c1 - c2 - tm3) // 2) % 2 else 1
    return (phase * total) * sqrt_fraction(radicand)


def _triangle_factor(ca: int, cb: int, cc: int) -> Fraction:
    """Delta-tilde(a,b,c): ratio of factorials under the square root."""
    return Fraction(
        _fact((ca + cb - cc) // 2) * _fact((ca - cb + cc) // 2)
        * _fact((-ca + cb + cc) // 2),
        _fact((ca + cb + cc) // 2 + 1))


def six_j_racah(c1: int, c2: int, c3: int, c4: int, c5: int, c6: int) -> QSqrt:
    """6j symbol by Racah's single-sum formula (doubled spins)."""
    triads = [(c1, c2, c3), (c1, c5, c6), (c4, c2, c6), (c4, c5, c3)]
    if not all(triangle_ok(*t) for t in triads):
        return QSqrt(0)
    radicand = Fraction(1)
    for t in triads:
        radicand *= _triangle_factor(*t)
    t_sums = [sum(t) // 2 for t in triads]
    quads = [(c1 + c2 + c4 + c5) // 2, (c2 + c3 + c5 + c6) // 2,
             (c3 + c1 + c6 + c4) // 2]
    total = Fraction(0)
    for t in range(max(t_sums), min(quads) + 1):
        den = 1
        for ts in t_sums:
            den *= _fact(t - ts)
        for q in quads:
            den *= _fact(q - t)
        total += Fraction((-1 if t % 2 else 1) * _fact(t + 1), den)
    return total * sqrt_fraction(radicand)


def six_j_contraction(c1: int, c2: int, c3: int, c4: int, c5: int, c6: int) -> QSqrt:
    """6j symbol as the tetrahedral contraction of four 3j symbols."""
    acc = RadicalSum()
    cs = (c1, c2, c3, c4, c5, c6)
    for tm1 in range(-c1, c1 + 1, 2):
        for tm2 in range(-c2, c2 + 1, 2):
            tm3 = -tm1 - tm2
            if abs(tm3) > c3:
                continue
            for tm4 in range(-c4, c4 + 1, 2):
                tm5 = tm3 + tm4
                tm6 = tm1 + tm5
                if abs(tm5) > c5 or abs(tm6) > c6:
                    continue
                tms = (tm1, tm2, tm3, tm4, tm5, tm6)
                exp = sum((c - tm) // 2 for c, tm in zip(cs, tms))
                term = three_j(c1, c2, c3, tm1, tm2, tm3)
                term = term * three_j(c1, c5, c6, -tm1, -tm5, tm6)
                term = term * three_j(c3, c4, c5, -tm3, -tm4, tm5)
                term = term * three_j(c2, c6, c4, -tm2, -tm6, tm4)
                if exp % 2:
                    term = -term
                acc.add(term)
    return acc.to_qsqrt()


def six_j(c1: int, c2: int, c3: int, c4: int, c5: int, c6: int) -> QSqrt:
    """6j computed by both routes (Racah sum and contraction), asserted equal."""
    racah = six_j_racah(c1, c2, c3, c4, c5, c6)
    contracted = six_j_contraction(c1, c2, c3, c4, c5, c6)
    assert racah == contracted, (racah, contracted)
    return racah


def theta_delta(c1: int, c2: int, c3: int) -> Fraction:
    """Delta(j1,j2,j3) = (J+1)!/((j1+j2-j3)!(j1+j3-j2)!(j2+j3-j1)!)."""
    return Fraction(
        _fact((c1 + c2 + c3) // 2 + 1),
        _fact((c1 + c2 - c3) // 2) * _fact((c1 + c3 - c2) // 2)
        * _fact((c2 + c3 - c1) // 2))


# -- property sweeps -------------------------------------------------------------


def check_orthogonality(max_c: int) -> dict:
    """Orthogonality, completeness and the signed two-vertex contraction rule."""
    failures = []
    pairs = [(a, b) for a in range(max_c + 1) for b in range(max_c + 1)]
    for ca, cb in pairs:
        lo, hi = abs(ca - cb), ca + cb
        cjs = list(range(lo, hi + 1, 2))
        # orthogonality in the coupled spin
        for cj in cjs:
            for cjp in cjs:
                for tm in range(-cj, cj + 1, 2):
                    for tmp in range(-cjp, cjp + 1, 2):
                        acc = RadicalSum()
                        for tma in range(-ca, ca + 1, 2):
                            tmb = -tma - tm
                            acc.add(three_j(ca, cb, cj, tma, tmb, tm)
                                    * three_j(ca, cb, cjp, tma, tmb, tmp))
                        want = (Fraction(1, cj + 1)
                                if (cj, tm) == (cjp, tmp) else Fraction(0))
                        if acc.to_qsqrt() != QSqrt(want):
                            failures.append(("orthogonality", ca, cb, cj, cjp, tm, tmp))
        # completeness over the coupled spin
        for tma in range(-ca, ca + 1, 2):
            for tmb in range(-cb, cb + 1, 2):
                for tmap in range(-ca, ca + 1, 2):
                    tmbp = tma + tmb - tmap
                    if abs(tmbp) > cb:
                        continue
                    acc = RadicalSum()
                    for cj in cjs:
                        tm = -tma - tmb
                        if abs(tm) > cj:
                            continue
                        acc.add((cj + 1) * three_j(ca, cb, cj, tma, tmb, tm)
                                * three_j(ca, cb, cj, tmap, tmbp, tm))
                    want = Fraction(1) if (tma, tmb) == (tmap, tmbp) else Fraction(0)
                    if acc.to_qsqrt() != QSqrt(want):
                        failures.append(("completeness", ca, cb, tma, tmb, tmap))
        # signed contraction rule used for removing degree-two faces
        for cj in cjs:
            for cjp in cjs:
                for tm in range(-cj, cj + 1, 2):
                    for tmp in range(-cjp, cjp + 1, 2):
                        acc = RadicalSum()
                        for tma in range(-ca, ca + 1, 2):
                            tmb = -tma - tm
                            if abs(tmb) > cb:
                                continue
                            exp = ((ca - tma) + (cb - tmb) + (cj - tm)) // 2 \
                                + (ca + cb + cjp) // 2
                            term = (three_j(cb, ca, cj, -tmb, -tma, -tm)
                                    * three_j(ca, cb, cjp, tma, tmb, tmp))
                            acc.add(-term if exp % 2 else term)
                        want = (Fraction(1, cj + 1)
                                if (cj, tm) == (cjp, tmp) else Fraction(0))
                        if acc.to_qsqrt() != QSqrt(want):
                            failures.append(("signed", ca, cb, cj, cjp, tm, tmp))
    return {"ok": not failures, "failures": failures, "max_doubled_spin": max_c}


def whitehead_sides(c1: int, c2: int, c3: int, cj: int, c12: int,
                    tm1: int, tm2: int, tm3: int, tm: int,
                    drop_sign: bool = False) -> tuple[RadicalSum, RadicalSum]:
    """Both sides of the single-edge recoupling identity.

    With drop_sign the (-1)^(2 j1) factor on the right is omitted, which
    must break the identity whenever it is a genuine -1.
    """
    left = RadicalSum()
    for tm12 in range(-c12, c12 + 1, 2):
        phase = -1 if ((c12 - tm12) // 2) % 2 else 1
        left.add(phase * three_j(c1, c12, c2, tm1, tm12, tm2)
                 * three_j(c12, cj, c3, -tm12, tm, tm3))
    right = RadicalSum()
    for c23 in range(abs(c2 - c3), c2 + c3 + 1, 2):
        sixj = six_j_racah(c1, c2, c12, c3, cj, c23)
        if sixj.is_zero():
            continue
        exp = (c1 + c2 + c3 + cj) // 2
        if not drop_sign:
            exp += c1
        pref = (c23 + 1) * sixj
        if exp % 2:
            pref = -pref
        for tm23 in range(-c23, c23 + 1, 2):
            phase = -1 if ((c23 - tm23) // 2) % 2 else 1
            right.add(phase * pref
                      * three_j(c1, cj, c23, tm1, tm, -tm23)
                      * three_j(c2, c23, c3, tm2, tm23, tm3))
    return left, right


def check_whitehead(max_c: int) -> dict:
    """Sweep the recoupling identity over all doubled spins <= max_c."""
    failures = []
    checked = 0
    rng = range(max_c + 1)
    for c1 in rng:
        for c2 in rng:
            for c12 in range(abs(c1 - c2), c1 + c2 + 1, 2):
                if c12 > max_c:
                    continue
                for c3 in rng:
                    for cj in range(abs(c12 - c3), c12 + c3 + 1, 2):
                        if cj > max_c:
                            continue
                        for tm1 in range(-c1, c1 + 1, 2):
                            for tm2 in range(-c2, c2 + 1, 2):
                                for tm3 in range(-c3, c3 + 1, 2):
                                    tm = -tm1 - tm2 - tm3
                                    if abs(tm) > cj:
                                        continue
                                    left, right = whitehead_sides(
                                        c1, c2, c3, cj, c12, tm1, tm2, tm3, tm)
                                    checked += 1
                                    if left != right:
                                        failures.append(
                                            (c1, c2, c3, cj, c12, tm1, tm2, tm3))
    return {"ok": not failures, "checked": checked, "failures": failures}
