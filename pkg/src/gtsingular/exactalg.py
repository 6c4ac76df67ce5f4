"""Exact coefficient field for tableau formulas.

Elements are rational functions over Q in three formal quantities:

* quantum system: Q (the quantum parameter q), X (= q^x) and Y (= q^y),
  where x, y are the two entries of a singular pair.  Monomials carry a
  rational exponent of Q and integer exponents of X, Y.
* classical system: the polynomial variables x and y themselves, with
  rational coefficients (the Q slot of a monomial is unused).

Everything is immutable and exact.  Equality is decided by cross
multiplication, so no multivariate gcd is ever required; instead the
denominator is kept as a multiset of small normalized factors (bracket
numerators and the like), which lets sums share factors and lets exact
factor-by-factor cancellation keep intermediate results small.
"""

from collections import Counter
from typing import NamedTuple

from ._rat import Rat, rat, is_integral, as_int

QUANTUM = "quantum"
CLASSICAL = "classical"

POLE_CANCEL_DEPTH = 4

# do not attempt opportunistic exact division past these sizes
_REDUCE_NUM_LIMIT = 1500
_REDUCE_FACTOR_LIMIT = 4
_TRINOMIAL_NUM_LIMIT = 400


class DivisionByZero(ZeroDivisionError):
    """Division by the zero field element."""


class PoleAtEvaluation(ArithmeticError):
    """Denominator vanishes at the evaluation point and the X = Y factor
    cannot be cancelled; signals a non-realizable configuration."""


class NegativeArgument(ValueError):
    """Operation defined for nonnegative integer arguments only."""


# ---------------------------------------------------------------------------
# term dictionaries: {(expQ, expX, expY): coeff}, no zero coefficients stored
# ---------------------------------------------------------------------------

def _eq_key(e):
    # store integral Q-exponents as plain ints (hash-compatible with Rat)
    if isinstance(e, int):
        return e
    return int(e.numerator) if e.denominator == 1 else e


def _padd(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _pneg(a):
    return {k: -c for k, c in a.items()}


def _psub(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = -c
        else:
            s = s - c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _pmul(a, b):
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    out = {}
    for (q1, x1, y1), c1 in a.items():
        for (q2, x2, y2), c2 in b.items():
            k = (_eq_key(q1 + q2), x1 + x2, y1 + y2)
            c = c1 * c2
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
    return out


def _pscale(a, c):
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def _pshift(a, dq, dx, dy):
    return {(_eq_key(q + dq), x + dx, y + dy): c for (q, x, y), c in a.items()}


def _pswap_xy(a):
    return {(q, y, x): c for (q, x, y), c in a.items()}


def _collapse_y_to_x(a):
    """Substitute Y -> X; zero result iff (X - Y) divides."""
    out = {}
    for (q, x, y), c in a.items():
        k = (q, x + y, 0)
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _pdiv_x_minus_y(a):
    """Exact division by X - Y; returns the quotient dict or None.

    Works on Laurent terms: negative exponents are allowed since X - Y
    divides P exactly when it divides X^m Y^m P.
    """
    if not a:
        return {}
    if _collapse_y_to_x(a):
        return None
    return _pdiv_binomial(a, (0, 1, 0), Rat(1), (0, 0, 1), Rat(-1))


def _floor_div(a, b):
    """floor(a/b) for exact rationals, b > 0."""
    if isinstance(a, int):
        an, ad = a, 1
    else:
        an, ad = a.numerator, a.denominator
    return (an * b.denominator) // (ad * b.numerator)


def _pdiv_binomial(a, lead, lc, trail, tc):
    """Exact division by lc*M_lead + tc*M_trail along exponent chains in the
    direction lead - trail; returns the quotient dict or None."""
    if lc == 1 and tc == -1:
        # the factor vanishes at Q = X = Y = 1, so a zero coefficient sum is
        # necessary for divisibility: a cheap rejection for most attempts
        if sum(a.values()):
            return None
    dq = lead[0] - trail[0]
    dx = lead[1] - trail[1]
    dy = lead[2] - trail[2]
    # chain parameter: integer steps along the direction vector
    if dx:
        param = lambda k: k[1] // dx
    elif dy:
        param = lambda k: k[2] // dy
    else:
        param = lambda k: _floor_div(k[0], dq)
    chains = {}
    for k, c in a.items():
        t = param(k)
        cid = (_eq_key(k[0] - t * dq), k[1] - t * dx, k[2] - t * dy)
        chains.setdefault(cid, {})[t] = c
    quo = {}
    for cid, d in chains.items():
        ts = sorted(d, reverse=True)
        tmax, tmin = ts[0], ts[-1]
        if tmax - tmin > 10000:
            return None
        for t in range(tmax, tmin - 1, -1):
            c = d.pop(t, None)
            if c is None or not c:
                continue
            qc = c / lc
            qk = (
                _eq_key(cid[0] + t * dq - lead[0]),
                cid[1] + t * dx - lead[1],
                cid[2] + t * dy - lead[2],
            )
            quo[qk] = qc
            lower = d.get(t - 1)
            v = qc * tc
            if lower is None:
                if v:
                    d[t - 1] = -v
            else:
                lower = lower - v
                if lower:
                    d[t - 1] = lower
                else:
                    del d[t - 1]
        if any(d.values()):
            return None
    return quo


def _pdiv_exact(a, f):
    """Exact sparse division of a by the canonical factor f, or None.

    Aborting early is always safe: a skipped cancellation only leaves the
    fraction unreduced.
    """
    if not a:
        return {}
    if len(f) == 1:
        ((fq, fx, fy), fc), = f.items()
        return {(_eq_key(q - fq), x - fx, y - fy): c / fc for (q, x, y), c in a.items()}
    lead = max(f)
    lc = f[lead]
    if len(f) == 2:
        (trail, tc), = ((k, c) for k, c in f.items() if k != lead)
        return _pdiv_binomial(a, lead, lc, trail, tc)
    if len(a) > _TRINOMIAL_NUM_LIMIT:
        return None
    guard = 4 * len(a) + 64
    lq, lx, ly = lead
    rest = [(k, c) for k, c in f.items() if k != lead]
    rem = dict(a)
    quo = {}
    while rem:
        guard -= 1
        if guard < 0:
            return None
        k = max(rem)
        c = rem.pop(k)
        dq, dx, dy = k[0] - lq, k[1] - lx, k[2] - ly
        qc = c / lc
        qk = (_eq_key(dq), dx, dy)
        s = quo.get(qk)
        quo[qk] = s + qc if s is not None else qc
        if not quo[qk]:
            del quo[qk]
        for (fq, fx, fy), fc in rest:
            kk = (_eq_key(fq + dq), fx + dx, fy + dy)
            v = qc * fc
            s = rem.get(kk)
            if s is None:
                rem[kk] = -v
            else:
                s = s - v
                if s:
                    rem[kk] = s
                else:
                    del rem[kk]
    return quo


def _peval_quantum(a, cx, cy):
    out = {}
    for (q, x, y), c in a.items():
        k = (_eq_key(q + x * cx + y * cy), 0, 0)
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _peval_classical(a, cx, cy):
    val = Rat(0)
    for (_, x, y), c in a.items():
        val += c * cx**x * cy**y
    return {(0, 0, 0): val} if val else {}


def _peuler(a, var):
    """Euler derivative X d/dX (var='x') or Y d/dY (var='y')."""
    i = 1 if var == "x" else 2
    out = {}
    for k, c in a.items():
        e = k[i]
        if e:
            out[k] = c * e
    return out


def _ppartial(a, var):
    """Plain d/dx or d/dy on classical terms."""
    out = {}
    for (q, x, y), c in a.items():
        if var == "x":
            if x:
                out[(q, x - 1, y)] = c * x
        else:
            if y:
                out[(q, x, y - 1)] = c * y
    return out


_PONE = {(0, 0, 0): Rat(1)}


class Monomial(NamedTuple):
    coeff: object
    expq: object
    expx: int
    expy: int


class LaurentPoly:
    """Sparse Laurent object; canonical view is the sorted term list."""

    __slots__ = ("t",)

    def __init__(self, terms=None):
        self.t = {k: c for k, c in terms.items() if c} if terms else {}

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.t = terms
        return p

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw(dict(_PONE))

    @classmethod
    def monomial(cls, coeff, expq=0, expx=0, expy=0):
        c = rat(coeff)
        if not c:
            return cls._raw({})
        return cls._raw({(_eq_key(rat(expq)), expx, expy): c})

    def terms(self):
        """Monomials with strictly increasing exponent triples."""
        return [Monomial(c, q, x, y) for (q, x, y), c in sorted(self.t.items())]

    def is_zero(self):
        return not self.t

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def __repr__(self):
        return f"LaurentPoly({self.t!r})"


def _normalize_factor(d):
    """Scale a factor to leading coefficient 1 and zero minimal exponents;
    returns (canonical dict, removed scalar, removed exponent shift)."""
    lead = max(d)
    lc = d[lead]
    mq = min(k[0] for k in d)
    mx = min(k[1] for k in d)
    my = min(k[2] for k in d)
    if mq or mx or my:
        d = _pshift(d, -mq, -mx, -my)
    if lc != 1:
        inv = 1 / lc
        d = {k: v * inv for k, v in d.items()}
    return d, lc, (mq, mx, my)


def _fkey(d):
    return tuple(sorted(d.items()))


class FieldElement:
    """num * product(nfac) over a multiset of denominator factors.

    Both sides keep small normalized factors (bracket numerators and the
    like): products concatenate factor multisets, and only sums expand,
    after extracting shared factors.  Every factor has leading coefficient
    1 and zero minimal exponents (removed content is pushed into num),
    trivial factors are dropped, and sums are opportunistically divided by
    denominator factors that cancel.  Equality is exact via cross
    multiplication.
    """

    __slots__ = ("num", "nfac", "fden", "system")

    def __init__(self, num, den=None, system=None, _normalize=True):
        if isinstance(num, LaurentPoly):
            num = num.t
        if isinstance(den, LaurentPoly):
            den = den.t
        if system is None:
            raise TypeError("system is required")
        if den is None:
            den = dict(_PONE)
        if not den:
            raise DivisionByZero("zero denominator")
        built = _build(num, [], [den], system)
        self.num = built.num
        self.nfac = built.nfac
        self.fden = built.fden
        self.system = system

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, num, nfac, fden, system):
        e = object.__new__(cls)
        e.num = num
        e.nfac = nfac
        e.fden = fden
        e.system = system
        return e

    @classmethod
    def zero(cls, system):
        return cls._raw({}, (), (), system)

    @classmethod
    def one(cls, system):
        return cls._raw(dict(_PONE), (), (), system)

    @classmethod
    def scalar(cls, value, system):
        c = rat(value)
        return cls._raw({(0, 0, 0): c} if c else {}, (), (), system)

    @classmethod
    def monomial(cls, system, coeff, expq=0, expx=0, expy=0):
        c = rat(coeff)
        if not c:
            return cls._raw({}, (), (), system)
        return cls._raw({(_eq_key(rat(expq)), expx, expy): c}, (), (), system)

    # -- views ---------------------------------------------------------------

    def expanded_num(self):
        """num with all numerator factors multiplied out."""
        out = self.num
        for k in self.nfac:
            out = _pmul(out, dict(k))
        return out

    @property
    def den(self):
        """The denominator expanded to a single term dict."""
        out = dict(_PONE)
        for k in self.fden:
            out = _pmul(out, dict(k))
        return out

    def is_zero(self):
        return not self.num

    def is_one(self):
        if not self.fden and not self.nfac:
            return self.num == _PONE
        return self.expanded_num() == self.den

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if self.system != other.system:
            return False
        if self.fden == other.fden and self.nfac == other.nfac:
            return self.num == other.num
        ca, cb = Counter(self.fden), Counter(other.fden)
        common = ca & cb
        left = self.expanded_num()
        for k, mult in (cb - common).items():
            for _ in range(mult):
                left = _pmul(left, dict(k))
        right = other.expanded_num()
        for k, mult in (ca - common).items():
            for _ in range(mult):
                right = _pmul(right, dict(k))
        return left == right

    def __hash__(self):
        return hash((self.system, len(self.num), len(self.nfac), len(self.fden)))

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if self.system != other.system:
            raise ValueError("mixed number systems")

    def __add__(self, other):
        self._check(other)
        if not self.num:
            return other
        if not other.num:
            return self
        if self.fden == other.fden and self.nfac == other.nfac:
            num = _padd(self.num, other.num)
            if not num:
                return FieldElement._raw({}, (), (), self.system)
            return _build_raw(num, self.nfac, self.fden, self.system)
        na, nb = Counter(self.nfac), Counter(other.nfac)
        common_n = na & nb
        da, db = Counter(self.fden), Counter(other.fden)
        common_d = da & db
        left = self.num
        for k, mult in (na - common_n).items():
            for _ in range(mult):
                left = _pmul(left, dict(k))
        for k, mult in (db - common_d).items():
            for _ in range(mult):
                left = _pmul(left, dict(k))
        right = other.num
        for k, mult in (nb - common_n).items():
            for _ in range(mult):
                right = _pmul(right, dict(k))
        for k, mult in (da - common_d).items():
            for _ in range(mult):
                right = _pmul(right, dict(k))
        num = _padd(left, right)
        if not num:
            return FieldElement._raw({}, (), (), self.system)
        fden = tuple(sorted((da | db).elements()))
        return _build_raw(num, tuple(sorted(common_n.elements())), fden, self.system)

    def __sub__(self, other):
        return self.__add__(-other)

    def __neg__(self):
        return FieldElement._raw(_pneg(self.num), self.nfac, self.fden, self.system)

    def __mul__(self, other):
        self._check(other)
        if not self.num or not other.num:
            return FieldElement._raw({}, (), (), self.system)
        if other.num == _PONE:
            num = self.num
        elif self.num == _PONE:
            num = other.num
        else:
            num = _pmul(self.num, other.num)
        nfac, fden = _cancel_pairs(
            self.nfac + other.nfac, self.fden + other.fden
        )
        return FieldElement._raw(num, nfac, fden, self.system)

    def __truediv__(self, other):
        self._check(other)
        if not other.num:
            raise DivisionByZero("division by the zero element")
        if not self.num:
            return FieldElement._raw({}, (), (), self.system)
        extra_den = list(other.nfac)
        num = self.num
        nfac = list(self.nfac) + list(other.fden)
        if other.num != _PONE:
            built = _build(num, nfac, [other.num], self.system,
                           pre_den=list(self.fden))
            nfac2, fden2 = _cancel_pairs(
                built.nfac, built.fden + tuple(extra_den)
            )
            return FieldElement._raw(built.num, nfac2, fden2, self.system)
        nfac2, fden2 = _cancel_pairs(tuple(nfac), self.fden + tuple(extra_den))
        return FieldElement._raw(num, nfac2, fden2, self.system)

    def scale(self, c):
        c = rat(c)
        if not c:
            return FieldElement._raw({}, (), (), self.system)
        return FieldElement._raw(_pscale(self.num, c), self.nfac, self.fden, self.system)

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return FieldElement.one(self.system) / self

    # -- canonical views ----------------------------------------------------

    def canonical_key(self):
        """Hashable exact identity for fully reduced (evaluated) elements."""
        return (
            self.system,
            tuple(sorted(self.expanded_num().items())),
            self.fden,
        )

    def constant_value(self):
        """The element as a plain rational; defined for constants only."""
        if not self.num:
            return Rat(0)
        if self.fden:
            raise ValueError("not a constant")
        num = self.expanded_num()
        if len(num) != 1 or (0, 0, 0) not in num:
            raise ValueError("not a constant")
        return num[(0, 0, 0)]

    def __repr__(self):
        return f"<FieldElement {format_element(self)}>"

    def __str__(self):
        return format_element(self)


def fe_sum(elems, system):
    """Sum a list of field elements in one pass: shared numerator factors
    stay factored, the denominator union is taken once, and every term is
    expanded only against what it is missing."""
    elems = [e for e in elems if e.num]
    if not elems:
        return FieldElement.zero(system)
    if len(elems) == 1:
        return elems[0]
    common_n = Counter(elems[0].nfac)
    lcd = Counter(elems[0].fden)
    for e in elems[1:]:
        common_n &= Counter(e.nfac)
        lcd |= Counter(e.fden)
    acc = {}
    for e in elems:
        t = e.num
        extra = (Counter(e.nfac) - common_n) + (lcd - Counter(e.fden))
        for k, mult in extra.items():
            d = dict(k)
            for _ in range(mult):
                t = _pmul(t, d)
        acc = _padd(acc, t)
    if not acc:
        return FieldElement.zero(system)
    return _build_raw(
        acc, tuple(sorted(common_n.elements())), tuple(sorted(lcd.elements())), system
    )


def _cancel_pairs(nfac, fden):
    """Drop factors shared by the two multisets."""
    if not nfac or not fden:
        return tuple(sorted(nfac)), tuple(sorted(fden))
    cn, cd = Counter(nfac), Counter(fden)
    common = cn & cd
    if not common:
        return tuple(sorted(nfac)), tuple(sorted(fden))
    return (
        tuple(sorted((cn - common).elements())),
        tuple(sorted((cd - common).elements())),
    )


def _build_raw(num, nfac, fden, system):
    """Fast path: factors already canonical, just reduce the expanded part."""
    if not num:
        return FieldElement._raw({}, (), (), system)
    if fden and len(num) <= _REDUCE_NUM_LIMIT:
        num, fden = _reduce(num, fden)
        nfac, fden = _cancel_pairs(nfac, fden)
    return FieldElement._raw(num, nfac, fden, system)


def _build(num, raw_num_factors, raw_den_factors, system, pre_den=None):
    """Normalize raw factors on both sides, folding content into num."""
    nfac = []
    for d in raw_num_factors:
        if isinstance(d, tuple):
            nfac.append(d)
            continue
        if not d:
            return FieldElement._raw({}, (), (), system)
        canon, lc, (mq, mx, my) = _normalize_factor(d)
        if lc != 1:
            num = _pscale(num, lc)
        if mq or mx or my:
            num = _pshift(num, mq, mx, my)
        if canon != _PONE:
            nfac.append(_fkey(canon))
    fden = list(pre_den or ())
    for d in raw_den_factors:
        if isinstance(d, tuple):
            fden.append(d)
            continue
        if not d:
            raise DivisionByZero("zero denominator factor")
        canon, lc, (mq, mx, my) = _normalize_factor(d)
        if lc != 1:
            num = _pscale(num, 1 / lc)
        if mq or mx or my:
            num = _pshift(num, -mq, -mx, -my)
        if canon != _PONE:
            fden.append(_fkey(canon))
    if not num:
        return FieldElement._raw({}, (), (), system)
    nfac, fden = _cancel_pairs(tuple(nfac), tuple(fden))
    if fden and len(num) <= _REDUCE_NUM_LIMIT:
        num, fden = _reduce(num, fden)
    return FieldElement._raw(num, nfac, fden, system)


def _reduce(num, fden):
    """Cancel denominator factors that divide num exactly.  Binomial factors
    are always tried (cheap dedicated division); bigger factors only while
    num stays small."""
    out = []
    changed = False
    for k in fden:
        nf = len(k)
        if not num or nf > _REDUCE_FACTOR_LIMIT or (
            nf > 2 and len(num) > _TRINOMIAL_NUM_LIMIT
        ):
            out.append(k)
            continue
        q = _pdiv_exact(num, dict(k))
        if q is None:
            out.append(k)
        else:
            num = q
            changed = True
    if not changed:
        return num, fden
    return num, tuple(out)


# ---------------------------------------------------------------------------
# linear expressions in the singular variables (entry differences, weights)
# ---------------------------------------------------------------------------

class LinearExpr(NamedTuple):
    """const + cx*x + cy*y with exact rational const and integer cx, cy.

    Differences of two tableau entries always have cx, cy in {-1, 0, 1};
    weight exponents may carry larger integer coefficients.
    """

    const: object
    cx: int
    cy: int

    @classmethod
    def constant(cls, c):
        return cls(rat(c), 0, 0)

    def __add__(self, other):
        return LinearExpr(self.const + other.const, self.cx + other.cx, self.cy + other.cy)

    def __sub__(self, other):
        return LinearExpr(self.const - other.const, self.cx - other.cx, self.cy - other.cy)

    def __neg__(self):
        return LinearExpr(-self.const, -self.cx, -self.cy)

    def shift(self, c):
        return LinearExpr(self.const + c, self.cx, self.cy)

    def is_zero(self):
        return not self.const and not self.cx and not self.cy

    def is_symmetric(self):
        """Invariant under swapping x and y."""
        return self.cx == self.cy


def linear_element(d: LinearExpr, system) -> FieldElement:
    """The expression itself as a field element (classical building block)."""
    if system == QUANTUM:
        raise ValueError("linear_element is a classical-system construction")
    terms = {}
    if d.const:
        terms[(0, 0, 0)] = rat(d.const)
    if d.cx:
        terms[(0, 1, 0)] = rat(d.cx)
    if d.cy:
        terms[(0, 0, 1)] = rat(d.cy)
    return FieldElement._raw(terms, (), (), system)


def q_power(d: LinearExpr, system) -> FieldElement:
    """Q^d as a monomial (quantum only)."""
    if system != QUANTUM:
        raise ValueError("q_power requires the quantum system")
    return FieldElement.monomial(system, 1, expq=d.const, expx=d.cx, expy=d.cy)


def bracket(d: LinearExpr, system=QUANTUM, scale=1) -> FieldElement:
    """Quantum bracket [d]_q = (Q^d - Q^-d)/(Q - Q^-1) of an entry difference.

    In the classical system the bracket of d is d itself.  A scale of D
    means exponents are expressed in units of 1/D (the relabeling
    Q -> Q^(1/D)); d.const must already be scaled by the caller and the
    reference denominator becomes Q^D - Q^-D.
    """
    if system == CLASSICAL:
        return linear_element(d, system)
    c = rat(d.const)
    num = _psub(
        {(_eq_key(c), d.cx, d.cy): Rat(1)},
        {(_eq_key(-c), -d.cx, -d.cy): Rat(1)},
    )
    den = {(scale, 0, 0): Rat(1), (-scale, 0, 0): Rat(-1)}
    return _build(num, [], [den], system)


def q_pochhammer_factorial(m: int, system=QUANTUM, scale=1) -> FieldElement:
    """(m)!-analogue built from (t)_{q^-2} = (q^(-2t) - 1)/(q^-2 - 1).

    Returns the plain factorial m! in the classical system (the t -> t
    degeneration of each factor).
    """
    if m < 0:
        raise NegativeArgument(f"factorial of {m}")
    if system == CLASSICAL:
        v = 1
        for t in range(2, m + 1):
            v *= t
        return FieldElement.scalar(v, system)
    out = FieldElement.one(system)
    for t in range(2, m + 1):
        # (t)_{q^-2} = 1 + q^-2 + ... + q^(-2(t-1))
        terms = {(-2 * s * scale, 0, 0): Rat(1) for s in range(t)}
        out = out * FieldElement._raw(terms, (), (), system)
    return out


def _diff_terms(a, system):
    if system == QUANTUM:
        return _psub(_peuler(a, "x"), _peuler(a, "y"))
    return _psub(_ppartial(a, "x"), _ppartial(a, "y"))


def euler_derivative(f: FieldElement, var: str) -> FieldElement:
    """X d/dX (var='x') or Y d/dY (var='y'), by the exact quotient rule."""
    if f.system != QUANTUM:
        raise ValueError("euler_derivative requires the quantum system")
    return _quotient_rule(f, lambda a: _peuler(a, var))


def partial_derivative(f: FieldElement, var: str) -> FieldElement:
    """d/dx or d/dy in the classical system, by the exact quotient rule."""
    if f.system != CLASSICAL:
        raise ValueError("partial_derivative requires the classical system")
    return _quotient_rule(f, lambda a: _ppartial(a, var))


def _quotient_rule(f, deriv):
    n = f.expanded_num()
    facs = [dict(k) for k in f.fden]
    dpoly = dict(_PONE)
    for d in facs:
        dpoly = _pmul(dpoly, d)
    ddash = {}
    for i, d in enumerate(facs):
        term = deriv(d)
        for j, other in enumerate(facs):
            if j != i:
                term = _pmul(term, other)
        ddash = _padd(ddash, term)
    num = _psub(_pmul(deriv(n), dpoly), _pmul(n, ddash))
    return _build_raw(num, (), tuple(sorted(f.fden + f.fden)), f.system)


def tau_swap(f: FieldElement) -> FieldElement:
    """Exchange X and Y (classical: x and y)."""
    return _build(
        _pswap_xy(f.num),
        [_pswap_xy(dict(k)) for k in f.nfac],
        [_pswap_xy(dict(k)) for k in f.fden],
        f.system,
    )


def _eval_terms(terms, c1, c2, system):
    if system == QUANTUM:
        return _peval_quantum(terms, c1, c2)
    return _peval_classical(terms, c1, c2)


def _eval_with_cancellation(num, den, c, system):
    """Evaluate num/den at x = y = c with exact X - Y cancellation."""
    if not num:
        return {}, dict(_PONE)
    for _ in range(POLE_CANCEL_DEPTH + 1):
        dval = _eval_terms(den, c, c, system)
        if dval:
            return _eval_terms(num, c, c, system), dval
        dq = _pdiv_x_minus_y(den)
        if dq is None:
            raise PoleAtEvaluation(
                "denominator vanishes at the singular point and is not "
                "divisible by X - Y"
            )
        nq = _pdiv_x_minus_y(num)
        if nq is None:
            raise PoleAtEvaluation("pole at the singular point does not cancel")
        num, den = nq, dq
        if not num:
            return {}, dict(_PONE)
    raise PoleAtEvaluation(f"pole deeper than {POLE_CANCEL_DEPTH} at evaluation")


def _diffval(d, c, system, scale):
    """The singular-point functional applied to a bare term dict, assuming
    it does not vanish identically: prefactor times the evaluated
    antisymmetric derivative."""
    dv = _eval_terms(_diff_terms(d, system), c, c, system)
    if system == QUANTUM:
        dv = _pmul(dv, {(scale, 0, 0): Rat(1), (-scale, 0, 0): Rat(-1)})
        return _pscale(dv, Rat(1, 4))
    return _pscale(dv, Rat(1, 2))


def _split_xy_factor(d, c, system):
    """Evaluate one factor at x = y = c; returns (xy_order, value_dict) where
    the factor equals (X - Y)^xy_order * (rest) with rest nonvanishing, or
    (order, None) when the residual vanishes for a different reason."""
    order = 0
    for _ in range(POLE_CANCEL_DEPTH + 1):
        v = _eval_terms(d, c, c, system)
        if v:
            return order, v, d
        q = _pdiv_x_minus_y(d)
        if q is None:
            return order, None, d
        order += 1
        d = q
    raise PoleAtEvaluation(f"factor vanishing deeper than {POLE_CANCEL_DEPTH}")


def evaluate_at_singular(f: FieldElement, c) -> FieldElement:
    """Substitute X -> Q^c and Y -> Q^c (classical: x, y -> c).

    X - Y content is cancelled exactly between the two sides before the
    substitution, to bounded depth."""
    c = rat(c)
    system = f.system
    if not f.num:
        return FieldElement.zero(system)
    num = f.num
    xy_net = 0
    num_vals = []
    accidental_zero = False
    for k in f.nfac:
        order, v, rest = _split_xy_factor(dict(k), c, system)
        xy_net += order
        if v is None:
            accidental_zero = True
        else:
            num_vals.append(v)
    den_vals = []
    for k in f.fden:
        order, v, rest = _split_xy_factor(dict(k), c, system)
        xy_net -= order
        if v is None:
            raise PoleAtEvaluation(
                "denominator factor vanishes at the singular point and is "
                "not divisible by X - Y"
            )
        den_vals.append(v)
    while xy_net < 0:
        nq = _pdiv_x_minus_y(num)
        if nq is None:
            raise PoleAtEvaluation("pole at the singular point does not cancel")
        num = nq
        xy_net += 1
    if accidental_zero or xy_net > 0:
        return FieldElement.zero(system)
    return _build(_eval_terms(num, c, c, system), num_vals, den_vals, system)


def evaluate_at(f: FieldElement, cx, cy) -> FieldElement:
    """Two-point substitution X -> Q^cx, Y -> Q^cy (classical x, y values)."""
    cx, cy = rat(cx), rat(cy)
    num = _eval_terms(f.num, cx, cy, f.system)
    nfs = [_eval_terms(dict(k), cx, cy, f.system) for k in f.nfac]
    goods = []
    for k in f.fden:
        v = _eval_terms(dict(k), cx, cy, f.system)
        if not v:
            raise PoleAtEvaluation("denominator vanishes at the evaluation point")
        goods.append(v)
    return _build(num, nfs, goods, f.system)


def dv_operator(f: FieldElement, c, scale=1) -> FieldElement:
    """The singular-point functional:

    quantum   ((Q - Q^-1)/4) (X d/dX - Y d/dY) f, then X, Y -> Q^c;
    classical (1/2)(d/dx - d/dy) f, then x, y -> c.

    The Euler form is the x-derivative of f(q^x, q^y): d/dx = ln q * X d/dX,
    which cancels the 1/ln q of the defining formula.  With exponents in
    units of 1/D (scale=D) the prefactor becomes (Q^D - Q^-D)/4 and c must
    be the scaled evaluation exponent.

    Factored inputs go through the product rule: at most one factor may
    vanish at the point (to first order in X - Y), in which case only its
    derivative survives; anything deeper falls back to exact symbolic
    cancellation.
    """
    c = rat(c)
    system = f.system
    if not f.num:
        return FieldElement.zero(system)
    den_parts = []
    smooth = True
    for k in f.fden:
        v = _eval_terms(dict(k), c, c, system)
        if not v:
            smooth = False
            break
        den_parts.append((dict(k), v))
    if smooth:
        vanishing = None
        many_vanishing = False
        num_parts = []
        nv = _eval_terms(f.num, c, c, system)
        if nv:
            num_parts.append((f.num, nv))
        else:
            vanishing = f.num
        for k in f.nfac:
            d = dict(k)
            v = _eval_terms(d, c, c, system)
            if v:
                num_parts.append((d, v))
            elif vanishing is None:
                vanishing = d
            else:
                many_vanishing = True
                break
        if many_vanishing:
            return FieldElement.zero(system)
        if vanishing is not None:
            # only the vanishing factor's derivative survives the product rule
            out = _diffval(vanishing, c, system, scale)
            if not out:
                return FieldElement.zero(system)
            return _build(out, [v for _, v in num_parts],
                          [v for _, v in den_parts], system)
        # logarithmic derivative over all factors
        total = FieldElement.zero(system)
        for d, v in num_parts:
            dv = _diffval(d, c, system, scale)
            if dv:
                total = total + _build(dv, [], [v], system)
        for d, v in den_parts:
            dv = _diffval(d, c, system, scale)
            if dv:
                total = total - _build(dv, [], [v], system)
        if total.is_zero():
            return FieldElement.zero(system)
        evf = _build(dict(_PONE), [v for _, v in num_parts],
                     [v for _, v in den_parts], system)
        return evf * total
    # same machinery as before, on the fully expanded representation
    n = f.expanded_num()
    facs = [dict(k) for k in f.fden]
    dpoly = dict(_PONE)
    for d in facs:
        dpoly = _pmul(dpoly, d)
    ddash = {}
    for i, d in enumerate(facs):
        term = _diff_terms(d, system)
        for j, other in enumerate(facs):
            if j != i:
                term = _pmul(term, other)
        ddash = _padd(ddash, term)
    num = _psub(_pmul(_diff_terms(n, system), dpoly), _pmul(n, ddash))
    num, den = _eval_with_cancellation(num, _pmul(dpoly, dpoly), c, system)
    if system == QUANTUM:
        num = _pmul(num, {(scale, 0, 0): Rat(1), (-scale, 0, 0): Rat(-1)})
        den = _pscale(den, Rat(4))
    else:
        den = _pscale(den, Rat(2))
    return _build(num, [], [den], system)


def scale_q_exponents(f: FieldElement, factor) -> FieldElement:
    """Relabel Q -> Q^factor: multiply every Q-exponent by an exact rational.
    Used to move elements between scaled and unscaled exponent conventions."""
    factor = rat(factor)

    def stretch(d):
        return {(_eq_key(q * factor), x, y): c for (q, x, y), c in d.items()}

    return _build(
        stretch(f.num),
        [stretch(dict(k)) for k in f.nfac],
        [stretch(dict(k)) for k in f.fden],
        f.system,
    )


# ---------------------------------------------------------------------------
# canonical plain-text rendering
# ---------------------------------------------------------------------------

def _fmt_pow(name, e):
    if isinstance(e, int) or is_integral(e):
        return f"{name}^{as_int(rat(e))}"
    return f"{name}^({e})"


def _fmt_term(key, coeff, system):
    q, x, y = key
    parts = [str(coeff)]
    if system == QUANTUM:
        if q:
            parts.append(_fmt_pow("Q", q))
        if x:
            parts.append(_fmt_pow("X", x))
        if y:
            parts.append(_fmt_pow("Y", y))
    else:
        if x:
            parts.append(_fmt_pow("x", x))
        if y:
            parts.append(_fmt_pow("y", y))
    return " * ".join(parts)


def format_terms(terms, system):
    if not terms:
        return "0"
    keys = sorted(terms, reverse=True)
    return " + ".join(_fmt_term(k, terms[k], system) for k in keys)


def format_element(f: FieldElement) -> str:
    num = format_terms(f.expanded_num(), f.system)
    if not f.fden:
        return num
    return f"({num}) / ({format_terms(f.den, f.system)})"
