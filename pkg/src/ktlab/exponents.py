"""Exact classification of kinetic-transport exponent tuples.

Every predicate works on reciprocals (plain ``Fraction`` values, with 0
standing for an infinite exponent), so region membership is decided by
exact linear identities and inequalities.  The polytope boundaries are
measure zero; a float comparison anywhere here would misclassify them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from ktlab.rational import INF, ExtRational, RationalLike, ext

__all__ = [
    "ExponentTriple",
    "ExponentQuadruple",
    "MixedFiveTuple",
    "Verdict",
    "VerdictStatus",
    "harmonic_mean",
    "boundary_exponents",
    "holder_dual",
    "scaling_gap",
    "is_kt_admissible",
    "is_kt_admissible_quad",
    "is_endpoint",
    "is_mixed_admissible",
    "is_kt_acceptable",
    "is_jointly_acceptable",
    "classify_estimate",
    "power_transform",
]


# ---------------------------------------------------------------------------
# tuple types


def _as_ext(x: RationalLike) -> ExtRational:
    return x if isinstance(x, ExtRational) else ExtRational(x)


@dataclass(frozen=True)
class ExponentTriple:
    """Exponents (q, r, p) of the norm L^q_t L^r_x L^p_v in dimension n."""

    q: ExtRational
    r: ExtRational
    p: ExtRational
    n: int

    def __post_init__(self):
        for name in ("q", "r", "p"):
            object.__setattr__(self, name, _as_ext(getattr(self, name)))
        if self.n < 1:
            raise ValueError("dimension n must be a positive integer")

    def invs(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.q.inv, self.r.inv, self.p.inv


@dataclass(frozen=True)
class ExponentQuadruple:
    """Exponents (q, r, p, a) pairing a time-space-velocity norm with L^a data.

    Power-transformed images may carry exponents in (0, inf]; range
    restrictions to [1, inf] live in the predicates, not here.
    """

    q: ExtRational
    r: ExtRational
    p: ExtRational
    a: ExtRational
    n: int

    def __post_init__(self):
        for name in ("q", "r", "p", "a"):
            v = _as_ext(getattr(self, name))
            if not v.is_inf and v.frac == 0:
                raise ValueError(f"exponent {name} must be positive")
            object.__setattr__(self, name, v)
        if self.n < 1:
            raise ValueError("dimension n must be a positive integer")

    @property
    def triple(self) -> ExponentTriple:
        return ExponentTriple(self.q, self.r, self.p, self.n)


@dataclass(frozen=True)
class MixedFiveTuple:
    """Exponents (q, r, p, b, c) for estimates with mixed L^b_x L^c_v data."""

    q: ExtRational
    r: ExtRational
    p: ExtRational
    b: ExtRational
    c: ExtRational
    n: int

    def __post_init__(self):
        for name in ("q", "r", "p", "b", "c"):
            object.__setattr__(self, name, _as_ext(getattr(self, name)))
        if self.n < 1:
            raise ValueError("dimension n must be a positive integer")


class VerdictStatus(str, Enum):
    HOLDS = "Holds"
    HOLDS_LORENTZ = "HoldsLorentzVariant"
    FAILS = "Fails"
    OPEN = "Open"


@dataclass(frozen=True)
class Verdict:
    """Classification outcome plus the clause of the case analysis that fired."""

    status: VerdictStatus
    clause: str

    def to_dict(self) -> dict:
        return {"status": self.status.value, "clause": self.clause}


# ---------------------------------------------------------------------------
# elementary operations


def harmonic_mean(p: RationalLike, r: RationalLike) -> ExtRational:
    """The exponent a with 1/a = (1/r + 1/p) / 2, exact."""
    p, r = _as_ext(p), _as_ext(r)
    for e in (p, r):
        if not e.is_inf and e.frac == 0:
            raise ValueError("harmonic mean requires exponents in (0, inf]")
    return ExtRational.from_inv(Fraction(p.inv + r.inv, 2))


def _inv_boundaries(ia: Fraction, n: int) -> tuple[Fraction, Fraction]:
    """Reciprocals (1/p*(a), 1/r*(a)) for 1/a = ia, dimension n."""
    if ia < 0 or ia > 1:
        raise ValueError("boundary exponents are defined for a in [1, inf]")
    if ia <= Fraction(n, n + 1):  # a >= (n+1)/n
        return Fraction(n + 1, n) * ia, Fraction(n - 1, n) * ia
    return Fraction(1), 2 * ia - 1  # p* = 1, r* = a/(2-a)


def boundary_exponents(a: RationalLike, n: int) -> tuple[ExtRational, ExtRational]:
    """(p*(a), r*(a)); the lower branch applies for 1 <= a <= (n+1)/n."""
    a = _as_ext(a)
    if a < 1:
        raise ValueError("boundary exponents are defined for a in [1, inf]")
    ip, ir = _inv_boundaries(a.inv, n)
    return ExtRational.from_inv(ip), ExtRational.from_inv(ir)


def holder_dual(e: RationalLike) -> ExtRational:
    """The conjugate exponent e' with 1/e + 1/e' = 1; an involution on [1, inf]."""
    e = _as_ext(e)
    if e < 1:
        raise ValueError(f"Hoelder dual needs e >= 1, got {e}")
    return ExtRational.from_inv(1 - e.inv)


def scaling_gap(
    q: RationalLike, r: RationalLike, qt: RationalLike, rt: RationalLike, n: int
) -> Fraction:
    """beta(q, r, q~, r~) = 1/q + 1/q~ - n(1 - 1/r - 1/r~), exact.

    Vanishes on jointly acceptable pairs; the exponent of the dyadic
    scale in the localized bilinear estimates.
    """
    q, r, qt, rt = (_as_ext(x) for x in (q, r, qt, rt))
    for e in (q, r, qt, rt):
        if e < 1:
            raise ValueError("scaling gap requires exponents in [1, inf]")
    return q.inv + qt.inv - n * (1 - r.inv - rt.inv)


# ---------------------------------------------------------------------------
# admissibility and acceptability predicates


def _require_range(t: Iterable[tuple[str, ExtRational]]) -> None:
    for name, e in t:
        if e < 1:
            raise ValueError(f"exponent {name} = {e} lies outside [1, inf]")


def is_kt_admissible(t: ExponentTriple) -> bool:
    """Exact evaluation of the triplet admissibility conditions.

    1/q = (n/2)(1/p - 1/r) with a = HM(p, r), a <= r <= r*(a) and
    p*(a) <= p <= a, excluding the n = 1 family (a, inf, a/2) with
    finite a.
    """
    _require_range([("q", t.q), ("r", t.r), ("p", t.p)])
    iq, ir, ip = t.invs()
    n = t.n
    if iq != Fraction(n, 2) * (ip - ir):
        return False
    ia = Fraction(ip + ir, 2)  # 1/HM(p, r)
    ipstar, irstar = _inv_boundaries(ia, n)
    if not (irstar <= ir <= ia):  # a <= r <= r*(a)
        return False
    if not (ia <= ip <= ipstar):  # p*(a) <= p <= a
        return False
    if n == 1 and ir == 0 and ia > 0:  # (a, inf, a/2), a < inf
        return False
    return True


def is_kt_admissible_quad(t: ExponentQuadruple) -> bool:
    """Quadruplet admissibility: 1/q + n/r = n/a, a = HM(p, r), plus ranges."""
    _require_range([("q", t.q), ("r", t.r), ("p", t.p), ("a", t.a)])
    iq, ir, ip, ia = t.q.inv, t.r.inv, t.p.inv, t.a.inv
    if iq + t.n * ir != t.n * ia:
        return False
    if ia != Fraction(ip + ir, 2):
        return False
    return is_kt_admissible(t.triple)


def is_endpoint(t: ExponentTriple) -> bool:
    """Whether the admissible triplet has the endpoint form (a, r*(a), p*(a))."""
    if not is_kt_admissible(t):
        raise ValueError("is_endpoint is defined on KT-admissible triplets only")
    iq, ir, ip = t.invs()
    ia = Fraction(ip + ir, 2)
    if ia == 0 or ia > Fraction(t.n, t.n + 1):  # needs (n+1)/n <= a < inf
        return False
    ipstar, irstar = _inv_boundaries(ia, t.n)
    return iq == ia and ir == irstar and ip == ipstar


def is_mixed_admissible(m: MixedFiveTuple) -> bool:
    """Exact evaluation of the mixed 5-tuple admissibility conditions."""
    _require_range([("q", m.q), ("r", m.r), ("p", m.p), ("b", m.b), ("c", m.c)])
    iq, ir, ip = m.q.inv, m.r.inv, m.p.inv
    ib, ic = m.b.inv, m.c.inv
    n = m.n
    if m.b == m.c:
        # degenerate clause: a = b = c and (q, r, p, a) KT-admissible
        return is_kt_admissible_quad(ExponentQuadruple(m.q, m.r, m.p, m.b, n))
    if iq + n * ir != n * ib:
        return False
    ia = Fraction(ip + ir, 2)
    if ia != Fraction(ib + ic, 2):  # HM(p, r) = HM(b, c)
        return False
    ipstar, irstar = _inv_boundaries(ia, n)
    if not (irstar < ir <= ia):  # a <= r < r*(a)
        return False
    if not (ia <= ip < ipstar):  # p*(a) < p <= a
        return False
    return ip > ib > ia > ic > ir  # p < b < a < c < r, all strict


def is_kt_acceptable(t: ExponentTriple) -> bool:
    """1/q < n(1/p - 1/r) with p < r, or the stationary family q = inf, p = r."""
    _require_range([("q", t.q), ("r", t.r), ("p", t.p)])
    iq, ir, ip = t.invs()
    if iq == 0 and ip == ir:
        return True
    return ip > ir and iq < t.n * (ip - ir)


# -- the exceptional boundary sets of the joint-acceptability definition ----

_B_POINT = (Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(1), Fraction(1))
_C_POINT = (Fraction(0), Fraction(1), Fraction(1), Fraction(0), Fraction(0), Fraction(0))


def _point6(t1: ExponentTriple, t2: ExponentTriple) -> tuple[Fraction, ...]:
    return (*t1.invs(), *t2.invs())


def _in_sigma1(pt: tuple[Fraction, ...], n: int) -> bool:
    """(mu, 0, kappa, nu, 1-kappa, 1) with mu, nu in (0,1), kappa in (0, 1/n), mu+nu = n*kappa."""
    mu, ir, kappa, nu, irt, ipt = pt
    return (
        ir == 0
        and ipt == 1
        and irt == 1 - kappa
        and 0 < mu < 1
        and 0 < nu < 1
        and 0 < kappa < Fraction(1, n)
        and mu + nu == n * kappa
    )


def _in_sigma2(pt: tuple[Fraction, ...], n: int) -> bool:
    """(mu, 1-kappa, 1, nu, 0, kappa) with mu, nu in (0,1), kappa in (0, 1/n), mu+nu = n*kappa."""
    mu, ir, ip, nu, irt, kappa = pt
    return (
        irt == 0
        and ip == 1
        and ir == 1 - kappa
        and 0 < mu < 1
        and 0 < nu < 1
        and 0 < kappa < Fraction(1, n)
        and mu + nu == n * kappa
    )


def is_jointly_acceptable(t1: ExponentTriple, t2: ExponentTriple) -> bool:
    """Joint acceptability of the pair ((q,r,p), (q~,r~,p~)).

    Requires both triplets acceptable, the scaling identity
    1/q + 1/q~ = n(1 - 1/r - 1/r~) with 1/q + 1/q~ <= 1 and
    HM(p, r) = HM(p~', r~'), plus the four boundary restrictions with
    their exceptional sets Sigma1, Sigma2, B, C.  The isolated points B
    and C are exempt from the q = inf / q~ = inf range restrictions;
    they are the transport-dual estimates certified directly.
    """
    if t1.n != t2.n:
        raise ValueError("jointly acceptable triplets must share the dimension")
    n = t1.n
    if not (is_kt_acceptable(t1) and is_kt_acceptable(t2)):
        return False
    iq, ir, ip = t1.invs()
    iqt, irt, ipt = t2.invs()
    if iq + iqt != n * (1 - ir - irt):
        return False
    if iq + iqt > 1:
        return False
    ia = Fraction(ip + ir, 2)
    if ia != Fraction((1 - ipt) + (1 - irt), 2):  # HM(p,r) = HM(p~', r~')
        return False
    pt = _point6(t1, t2)
    if ir == 0 and not (_in_sigma1(pt, n) or pt == _B_POINT):
        return False
    if irt == 0 and not (_in_sigma2(pt, n) or pt == _C_POINT):
        return False
    exceptional = pt in (_B_POINT, _C_POINT)
    if iqt == 0 and not exceptional:
        _, irstar = _inv_boundaries(ia, n)
        if not (irstar < ir <= ia):  # a <= r < r*(a)
            return False
    if iq == 0 and not exceptional:
        _, irstar = _inv_boundaries(ia, n)
        if not (irstar < irt <= ia):  # a <= r~ < r*(a)
            return False
    return True


# ---------------------------------------------------------------------------
# the verdict tables


def _classify_homogeneous(quad: ExponentQuadruple) -> Verdict:
    _require_range(
        [("q", quad.q), ("r", quad.r), ("p", quad.p), ("a", quad.a)]
    )
    iq, ir, ip, ia = quad.q.inv, quad.r.inv, quad.p.inv, quad.a.inv
    n = quad.n
    if iq + n * ir != n * ia or ia != Fraction(ip + ir, 2):
        return Verdict(VerdictStatus.FAILS, "hom:scaling-identity-violated")
    if not is_kt_admissible(quad.triple):
        if n == 1 and ir == 0 and ia > 0:
            return Verdict(VerdictStatus.FAILS, "hom:n1-endpoint-besicovitch")
        return Verdict(VerdictStatus.FAILS, "hom:outside-admissible-range")
    if is_endpoint(quad.triple):
        return Verdict(VerdictStatus.OPEN, "hom:endpoint-open")
    return Verdict(VerdictStatus.HOLDS, "hom:admissible-non-endpoint")


def _mixed_fails_only_upper_r(m: MixedFiveTuple) -> bool:
    """All mixed conditions hold except the upper bound r < r*(a)."""
    iq, ir, ip = m.q.inv, m.r.inv, m.p.inv
    ib, ic = m.b.inv, m.c.inv
    n = m.n
    if iq + n * ir != n * ib:
        return False
    ia = Fraction(ip + ir, 2)
    if ia != Fraction(ib + ic, 2):
        return False
    ipstar, irstar = _inv_boundaries(ia, n)
    if not (ia <= ip < ipstar):
        return False
    if not (ip > ib > ia > ic > ir):
        return False
    return ir <= irstar and ir > 0  # r >= r*(a) but finite


def _classify_mixed(m: MixedFiveTuple) -> Verdict:
    _require_range(
        [("q", m.q), ("r", m.r), ("p", m.p), ("b", m.b), ("c", m.c)]
    )
    if is_mixed_admissible(m):
        # direct estimate carries the Lorentz time norm L^{q,c}; it
        # implies the plain L^q bound only when c <= q
        if m.c <= m.q:
            return Verdict(VerdictStatus.HOLDS, "mixed:admissible")
        return Verdict(VerdictStatus.HOLDS_LORENTZ, "mixed:admissible-lorentz-time")
    if m.n > 1 and m.b != m.c and _mixed_fails_only_upper_r(m):
        return Verdict(VerdictStatus.OPEN, "mixed:upper-r-bound-open")
    return Verdict(VerdictStatus.FAILS, "mixed:outside-admissible-range")


def _classify_inhomogeneous(t1: ExponentTriple, t2: ExponentTriple) -> Verdict:
    if t1.n != t2.n:
        raise ValueError("triplet pair must share the dimension")
    n = t1.n
    if not is_jointly_acceptable(t1, t2):
        return Verdict(VerdictStatus.FAILS, "inhom:not-jointly-acceptable")
    if n == 1:
        return Verdict(VerdictStatus.HOLDS, "inhom:n1-full-range")
    iq, ir, ip = t1.invs()
    iqt, irt, ipt = t2.invs()
    if iqt == 0:
        # Lorentz-left estimate with L^{q, p~'} time norm
        if iq <= 1 - ipt:  # q >= p~'
            return Verdict(VerdictStatus.HOLDS, "inhom:lorentz-left-implies-plain")
        return Verdict(VerdictStatus.HOLDS_LORENTZ, "inhom:lorentz-left")
    if iq == 0:
        # Lorentz-right estimate with L^{q~', p} norm on the datum
        if 1 - iqt >= ip:  # q~' <= p
            return Verdict(VerdictStatus.HOLDS, "inhom:lorentz-right-implies-plain")
        return Verdict(VerdictStatus.HOLDS_LORENTZ, "inhom:lorentz-right")
    if ir == 0 or irt == 0:
        # joint acceptability already certified Sigma1/Sigma2/B/C membership
        return Verdict(VerdictStatus.HOLDS, "inhom:sigma-boundary")
    if iq + iqt < 1 and ir <= Fraction(1, 2) and irt <= Fraction(1, 2):
        if (n - 1) * (1 - ip) < n * irt and (n - 1) * (1 - ipt) < n * ir:
            return Verdict(VerdictStatus.HOLDS, "inhom:interior")
        return Verdict(VerdictStatus.OPEN, "inhom:unresolved-region")
    return Verdict(VerdictStatus.OPEN, "inhom:unresolved-region")


def classify_estimate(kind: str, exponents, n: int | None = None) -> Verdict:
    """Full verdict table for the three estimate families.

    ``kind`` is one of ``"homogeneous"`` (quadruplet (q,r,p,a)),
    ``"mixed"`` (5-tuple (q,r,p,b,c)) and ``"inhomogeneous"`` (a pair of
    triplets).  Exponents outside [1, inf] are rejected: the duality
    arguments behind the verdicts need honest Lebesgue exponents, so
    power-transformed tuples must be rescaled into range first.
    """
    kind = kind.lower()
    if kind in ("homogeneous", "hom"):
        if isinstance(exponents, ExponentQuadruple):
            quad = exponents
        else:
            q, r, p, *rest = exponents
            a = rest[0] if rest else harmonic_mean(p, r)
            if n is None:
                raise ValueError("dimension n required")
            quad = ExponentQuadruple(_as_ext(q), _as_ext(r), _as_ext(p), _as_ext(a), n)
        return _classify_homogeneous(quad)
    if kind in ("mixed", "homogeneousmixed", "hom-mixed"):
        if isinstance(exponents, MixedFiveTuple):
            m = exponents
        else:
            q, r, p, b, c = exponents
            if n is None:
                raise ValueError("dimension n required")
            m = MixedFiveTuple(*(_as_ext(x) for x in (q, r, p, b, c)), n)
        return _classify_mixed(m)
    if kind in ("inhomogeneous", "inhom"):
        t1, t2 = exponents
        if not isinstance(t1, ExponentTriple):
            q, r, p = t1
            t1 = ExponentTriple(_as_ext(q), _as_ext(r), _as_ext(p), n)
        if not isinstance(t2, ExponentTriple):
            q, r, p = t2
            t2 = ExponentTriple(_as_ext(q), _as_ext(r), _as_ext(p), n)
        return _classify_inhomogeneous(t1, t2)
    raise ValueError(f"unknown estimate kind {kind!r}")


def power_transform(quad: ExponentQuadruple, alpha: RationalLike) -> ExponentQuadruple:
    """The invariance image (q, r, p, a) -> (aq, ar, ap, aa), alpha > 0 exact."""
    alpha = Fraction(alpha) if not isinstance(alpha, Fraction) else alpha
    if alpha <= 0:
        raise ValueError("power transform requires alpha > 0")
    scale = ext(alpha)
    return ExponentQuadruple(
        quad.q * scale, quad.r * scale, quad.p * scale, quad.a * scale, quad.n
    )
