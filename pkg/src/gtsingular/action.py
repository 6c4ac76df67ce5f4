"""Module structure on tableau orbits: the gated generator action.

A ModuleSpec fixes the height n, an admissible relation set, a base
tableau and the number system.  Generic specs act through the tableau
formulas directly.  Singular specs (one same-row pair of equal base
entries outside the relation support) act through the two-variable
pipeline: coefficients are computed with the singular entries kept
symbolic as X = q^x, Y = q^y, multiplied by [x-y]_q for normal inputs,
and pushed through the singular-point functional, which splits every
term into a normal tableau part and a derivative tableau part.

Derivative tableaux are antisymmetric under the transposition tau of the
singular pair; vectors are stored in canonical form (normal: z_i <= z_j,
derivative: z_i > z_j, and derivative vectors with z_i = z_j are zero).
"""

from math import gcd as _gcd
from typing import NamedTuple

from ._rat import Rat, rat
from .exactalg import (
    CLASSICAL,
    QUANTUM,
    FieldElement,
    LinearExpr,
    PoleAtEvaluation,
    bracket,
    dv_operator,
    evaluate_at_singular,
    fe_sum,
    linear_element,
    q_power,
)
from .tableaux import (
    GENERIC,
    RelationSet,
    SingularPair,
    Tableau,
    detect_singular_pair,
    enumerate_window,
    is_admissible,
    normalized_singular_base,
    satisfies,
    z_index,
)

NORMAL = "T"
DERIVATIVE = "DT"


class NonRealizable(RuntimeError):
    """A gated coefficient has an uncancellable pole at the singular point."""


class Fault(NamedTuple):
    """Deliberate defects for mutation self-tests of the verification suites."""

    sign_flip: bool = False
    drop_gate: bool = False
    gamma_prefactor: bool = False


class BasisVector(NamedTuple):
    kind: str
    z: tuple

    def __repr__(self):
        body = ",".join(str(v) for v in self.z)
        name = "T" if self.kind == NORMAL else "DT"
        return f"{name}[{body}]"


class Generator(NamedTuple):
    kind: str  # 'e', 'f', 'qeps' or 'qh'
    index: int = 0
    h: tuple = ()

    def __repr__(self):
        if self.kind == "qh":
            return f"qh({','.join(str(v) for v in self.h)})"
        return f"{self.kind}{self.index}"


def gen_e(k):
    return Generator("e", k)


def gen_f(k):
    return Generator("f", k)


def gen_qeps(k):
    return Generator("qeps", k)


def gen_qh(h):
    return Generator("qh", 0, tuple(int(v) for v in h))


class ModuleElement:
    """Finite combination of canonical basis vectors with field coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()} if terms else {}

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k)
            if cur is None:
                out[k] = v
            else:
                s = cur + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return ModuleElement._raw(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k)
            if cur is None:
                out[k] = -v
            else:
                s = cur - v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return ModuleElement._raw(out)

    def __neg__(self):
        return ModuleElement._raw({k: -v for k, v in self.terms.items()})

    def scale(self, c: FieldElement):
        if c.is_zero():
            return ModuleElement._raw({})
        return ModuleElement._raw({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[k] == v for k, v in self.terms.items())

    def coefficient(self, bv):
        return self.terms.get(bv)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({v}) {k!r}" for k, v in sorted(self.terms.items()))

    @classmethod
    def _raw(cls, terms):
        e = object.__new__(cls)
        e.terms = terms
        return e

    @classmethod
    def basis(cls, bv, system):
        return cls._raw({bv: FieldElement.one(system)})


def _zadd(z, idx, step):
    out = list(z)
    out[idx] += step
    return tuple(out)


class ModuleSpec:
    """Immutable description of one tableau module, with the caches that
    make exhaustive verification sweeps affordable."""

    def __init__(self, tableau: Tableau, relations: RelationSet, mode=QUANTUM,
                 fault: Fault = None):
        if tableau.n != relations.n:
            raise ValueError("tableau and relation set have different heights")
        rep = is_admissible(relations)
        if not rep:
            raise ValueError(f"relation set is not admissible: {rep.violations}")
        if any(v for row in tableau.shift for v in row):
            tableau = Tableau(tableau.n, tableau.base)
        if not satisfies(tableau, relations):
            raise ValueError("base tableau does not satisfy the relation set")
        sp = detect_singular_pair(tableau, relations)
        if sp is not GENERIC:
            tableau = normalized_singular_base(tableau, sp)
        self.n = tableau.n
        self.base = tableau
        self.relations = relations
        self.mode = mode
        self.singular = sp
        self.fault = fault or Fault()
        self.nfree = self.n * (self.n - 1) // 2
        # Q-exponents are kept integral by working in units of 1/D, where D
        # clears every base-entry denominator (the relabeling Q -> Q^(1/D));
        # classical entries are plain values, so no scaling there
        if mode == QUANTUM:
            d = 1
            for row in tableau.base:
                for v in row:
                    d = d * v.denominator // _gcd(d, int(v.denominator))
            self.qscale = d
        else:
            self.qscale = 1
        if mode == QUANTUM:
            self._sbase = tuple(
                tuple(int(v * self.qscale) for v in row) for row in tableau.base
            )
        else:
            self._sbase = tableau.base
        if sp is not GENERIC:
            self.zi = z_index(sp.row, sp.i)
            self.zj = z_index(sp.row, sp.j)
            self.eval_point = tableau.base[sp.row - 1][sp.i - 1]
            self.eval_scaled = self._sbase[sp.row - 1][sp.i - 1]
        else:
            self.zi = self.zj = None
            self.eval_point = None
            self.eval_scaled = None
        # relations compiled to flat-shift lookups
        self._gates = [
            (
                rel.lhs.row, rel.lhs.col,
                rel.rhs.row, rel.rhs.col,
                rel.strict,
                tableau.base[rel.lhs.row - 1][rel.lhs.col - 1]
                - tableau.base[rel.rhs.row - 1][rel.rhs.col - 1],
            )
            for rel in relations.relations
        ]
        self._row_start = [r * (r - 1) // 2 for r in range(self.n + 1)]
        self._gate_cache = {}
        self._piece_cache = {}
        self._act_cache = {}

    # -- symbolic entries ----------------------------------------------------

    def is_generic(self):
        return self.singular is GENERIC

    def entry_linear(self, row, col, z) -> LinearExpr:
        """Entry of the working tableau at shift z, with quantum constants
        pre-scaled by qscale: the singular pair stays symbolic (x resp. y
        plus its shift), everything else is concrete."""
        scale = self.qscale
        if self.singular is not GENERIC and row == self.singular.row:
            if col == self.singular.i:
                return LinearExpr(z[self.zi] * scale, 1, 0)
            if col == self.singular.j:
                return LinearExpr(z[self.zj] * scale, 0, 1)
        v = self._sbase[row - 1][col - 1]
        if row < self.n:
            v = v + z[z_index(row, col)] * scale
        return LinearExpr(v, 0, 0)

    def scaled(self, d: LinearExpr) -> LinearExpr:
        """An unscaled linear exponent moved into the spec's exponent units."""
        if self.qscale == 1:
            return d
        return LinearExpr(rat(d.const * self.qscale), d.cx, d.cy)

    def bracket(self, d: LinearExpr) -> FieldElement:
        """Bracket of an unscaled entry difference, in this spec's units."""
        return bracket(self.scaled(d), self.mode, self.qscale)

    def tau(self, z):
        if self.singular is GENERIC:
            return z
        out = list(z)
        out[self.zi], out[self.zj] = out[self.zj], out[self.zi]
        return tuple(out)

    # -- basis bookkeeping ----------------------------------------------------

    def in_basis(self, z) -> bool:
        cached = self._gate_cache.get(z)
        if cached is None:
            ok = True
            n = self.n
            for lr, lc, rr, rc, strict, basediff in self._gates:
                d = basediff
                if lr < n:
                    d = d + z[self._row_start[lr] + lc - 1]
                if rr < n:
                    d = d - z[self._row_start[rr] + rc - 1]
                # base satisfies the relations with integral gaps, so d is
                # always an integer here
                if d <= 0 if strict else d < 0:
                    ok = False
                    break
            cached = ok
            self._gate_cache[z] = ok
        return cached

    def _gate(self, z) -> bool:
        if self.fault.drop_gate:
            return True
        return self.in_basis(z)

    def canonical_normal(self, z) -> BasisVector:
        if self.singular is not GENERIC and z[self.zi] > z[self.zj]:
            z = self.tau(z)
        return BasisVector(NORMAL, tuple(z))

    def canonical_derivative(self, z):
        """Canonical key and sign for a derivative tableau, or (None, 0)."""
        zi, zj = z[self.zi], z[self.zj]
        if zi == zj:
            return None, 0
        if zi > zj:
            return BasisVector(DERIVATIVE, tuple(z)), 1
        return BasisVector(DERIVATIVE, self.tau(z)), -1

    def basis_vector(self, kind, z) -> BasisVector:
        z = tuple(int(v) for v in z)
        if len(z) != self.nfree:
            raise ValueError(f"shift vector must have length {self.nfree}")
        if not self.in_basis(z):
            raise ValueError(f"shift {z} lies outside the orbit basis")
        if kind == NORMAL:
            return self.canonical_normal(z)
        if self.singular is GENERIC:
            raise ValueError("generic modules have no derivative vectors")
        bv, sign = self.canonical_derivative(z)
        if bv is None:
            raise ValueError("derivative vector with a tau-fixed shift is zero")
        return bv

    def window(self, B):
        """Canonical basis vectors whose shifts lie in the max-norm box."""
        out = []
        for z in enumerate_window(self.relations, self.base, B):
            if self.singular is GENERIC or z[self.zi] <= z[self.zj]:
                out.append(BasisVector(NORMAL, z))
            else:
                out.append(BasisVector(DERIVATIVE, z))
        return out

    # -- coefficients ----------------------------------------------------------

    def _row_slice(self, row, z):
        if row >= self.n or row < 1:
            return ()
        s = self._row_start[row]
        return z[s:s + row]

    def _coeff_parts(self, kind, k, r, z):
        """The coefficient as (sign, numerator diffs, denominator diffs)."""
        lkr = self.entry_linear(k, r, z)
        if kind == "e":
            nums = [lkr - self.entry_linear(k + 1, s, z) for s in range(1, k + 2)]
            sign = 1 if self.fault.sign_flip else -1
        else:
            nums = [lkr - self.entry_linear(k - 1, s, z) for s in range(1, k)]
            sign = 1
        dens = [
            lkr - self.entry_linear(k, s, z) for s in range(1, k + 1) if s != r
        ]
        return sign, nums, dens

    def raw_coeff(self, kind, k, r, z) -> FieldElement:
        """Unevaluated tableau-formula coefficient for e_k (kind 'e') or f_k
        (kind 'f') moving column r, at shift z; symbolic in X, Y when the
        singular row is involved."""
        mode = self.mode
        scale = self.qscale
        sign, nums, dens = self._coeff_parts(kind, k, r, z)
        num = FieldElement.one(mode)
        for d in nums:
            num = num * bracket(d, mode, scale)
        den = FieldElement.one(mode)
        for d in dens:
            den = den * bracket(d, mode, scale)
        coeff = num / den
        return coeff if sign > 0 else -coeff

    def _pieces(self, tag, kind, k, r, z):
        """Evaluated coefficient data, memoized by the shift rows it uses.

        tag 'G': plain evaluated coefficient (generic spec);
        tag 'N': (dv, ev) of [x-y]_q * coeff (normal input);
        tag 'D': (dv, ev) of coeff (derivative input).
        """
        other = k + 1 if kind == "e" else k - 1
        key = (tag, kind, k, r, self._row_slice(k, z), self._row_slice(other, z))
        hit = self._piece_cache.get(key)
        if hit is not None:
            return hit
        c = self.eval_scaled
        try:
            if tag == "G":
                coeff = self.raw_coeff(kind, k, r, z)
                val = coeff if self.is_generic() else evaluate_at_singular(coeff, c)
            elif tag == "N":
                fac = bracket(LinearExpr(0, 1, -1), self.mode, self.qscale) * \
                    self.raw_coeff(kind, k, r, z)
                val = (dv_operator(fac, c, self.qscale), evaluate_at_singular(fac, c))
            else:
                coeff = self.raw_coeff(kind, k, r, z)
                val = (dv_operator(coeff, c, self.qscale), evaluate_at_singular(coeff, c))
        except PoleAtEvaluation as exc:
            raise NonRealizable(
                f"coefficient {kind}_{k},{r} at shift {z} is not realizable: {exc}"
            ) from exc
        self._piece_cache[key] = val
        return val

    # -- weights ---------------------------------------------------------------

    def _weight_scaled(self, k, z) -> LinearExpr:
        """a_k = sum(row k) - sum(row k-1) + k in the spec's exponent units."""
        acc = LinearExpr(k * self.qscale, 0, 0)
        for c in range(1, k + 1):
            acc = acc + self.entry_linear(k, c, z)
        for c in range(1, k):
            acc = acc - self.entry_linear(k - 1, c, z)
        return acc

    def weight_exponent(self, k, z) -> LinearExpr:
        """a_k = sum(row k) - sum(row k-1) + k as an exact unscaled linear
        expression in the entries."""
        a = self._weight_scaled(k, z)
        if self.qscale == 1:
            return a
        return LinearExpr(rat(a.const, self.qscale), a.cx, a.cy)

    def weight_element(self, h, z) -> FieldElement:
        """q^(sum h_k a_k) in the quantum system; the scalar sum h_k a_k in
        the classical system (the Cartan element h acting on the tableau)."""
        acc = LinearExpr(Rat(0), 0, 0)
        for k, coeff in enumerate(h, start=1):
            if coeff:
                a = self._weight_scaled(k, z)
                acc = LinearExpr(
                    acc.const + coeff * a.const,
                    acc.cx + coeff * a.cx,
                    acc.cy + coeff * a.cy,
                )
        if self.mode == QUANTUM:
            return q_power(acc, QUANTUM)
        return linear_element(acc, CLASSICAL)

    def _eval_weight(self, h, z) -> FieldElement:
        """The weight element evaluated at the singular point (weights have
        equal x and y coefficients, so they are tau-symmetric)."""
        const = 0
        cxy = 0
        for k, coeff in enumerate(h, start=1):
            if coeff:
                a = self._weight_scaled(k, z)
                const = const + coeff * a.const
                cxy += coeff * a.cx
        if self.mode == QUANTUM:
            return FieldElement.monomial(
                QUANTUM, 1, expq=const + 2 * cxy * self.eval_scaled
            )
        return FieldElement.scalar(const + 2 * cxy * self.eval_scaled, CLASSICAL)

    def pairing_alpha(self, h, r) -> int:
        """<h, alpha_r> = h_r - h_{r+1} for the weight commutation relations."""
        hr = h[r - 1] if r - 1 < len(h) else 0
        hr1 = h[r] if r < len(h) else 0
        return hr - hr1


def weight_exponent(spec: ModuleSpec, k: int, z=None) -> LinearExpr:
    if z is None:
        z = (0,) * spec.nfree
    return spec.weight_exponent(k, z)


def raw_coeff(spec: ModuleSpec, kind: str, k: int, r: int, z=None) -> FieldElement:
    if z is None:
        z = (0,) * spec.nfree
    return spec.raw_coeff(kind, k, r, z)


# ---------------------------------------------------------------------------
# the action
# ---------------------------------------------------------------------------

def _expand_targets(spec, kind, k, z):
    """Gated targets of e_k/f_k from shift z: pairs (r, target shift)."""
    step = 1 if kind == "e" else -1
    start = spec._row_start[k]
    out = []
    for r in range(1, k + 1):
        w = _zadd(z, start + r - 1, step)
        if spec._gate(w):
            out.append((r, w))
    return out


def expand_normal(spec: ModuleSpec, g: Generator, z) -> ModuleElement:
    """Pipeline for a normal tableau from the given shift representative:
    expand g symbolically, multiply by [x-y]_q, split through the
    singular-point functional, then canonicalize."""
    mode = spec.mode
    if g.kind in ("qeps", "qh"):
        # weights are symmetric in x, y: dv([x-y] W) = ev(W) and the
        # derivative part vanishes identically
        h = g.h if g.kind == "qh" else tuple(1 if t == g.index else 0 for t in range(1, spec.n + 1))
        val = spec._eval_weight(h, z)
        if val.is_zero():
            return ModuleElement._raw({})
        return ModuleElement._raw({spec.canonical_normal(z): val})
    k = g.index
    terms = {}
    for r, w in _expand_targets(spec, g.kind, k, z):
        dvp, evp = spec._pieces("N", g.kind, k, r, z)
        if not dvp.is_zero():
            key = spec.canonical_normal(w)
            cur = terms.get(key)
            terms[key] = dvp if cur is None else cur + dvp
        if not evp.is_zero():
            bv, sign = spec.canonical_derivative(w)
            if bv is not None:
                val = evp if sign > 0 else -evp
                cur = terms.get(bv)
                terms[bv] = val if cur is None else cur + val
    return ModuleElement(terms)


def expand_derivative(spec: ModuleSpec, g: Generator, z) -> ModuleElement:
    """Pipeline for a derivative tableau from the given representative
    (requires a tau-unfixed shift): push g T(v+z) through the functional."""
    if z[spec.zi] == z[spec.zj]:
        raise ValueError("derivative expansion needs a tau-unfixed shift")
    mode = spec.mode
    if g.kind in ("qeps", "qh"):
        # symmetric weight: dv(W) = 0, so derivative tableaux stay honest
        # weight vectors
        h = g.h if g.kind == "qh" else tuple(1 if t == g.index else 0 for t in range(1, spec.n + 1))
        val = spec._eval_weight(h, z)
        bv, sign = spec.canonical_derivative(z)
        if bv is None or val.is_zero():
            return ModuleElement._raw({})
        return ModuleElement._raw({bv: val if sign > 0 else -val})
    k = g.index
    terms = {}
    for r, w in _expand_targets(spec, g.kind, k, z):
        dvp, evp = spec._pieces("D", g.kind, k, r, z)
        if not dvp.is_zero():
            key = spec.canonical_normal(w)
            cur = terms.get(key)
            terms[key] = dvp if cur is None else cur + dvp
        if not evp.is_zero():
            bv, sign = spec.canonical_derivative(w)
            if bv is not None:
                val = evp if sign > 0 else -evp
                cur = terms.get(bv)
                terms[bv] = val if cur is None else cur + val
    return ModuleElement(terms)


def _act_generic(spec: ModuleSpec, g: Generator, bv: BasisVector) -> ModuleElement:
    z = bv.z
    if g.kind in ("qeps", "qh"):
        h = g.h if g.kind == "qh" else tuple(1 if t == g.index else 0 for t in range(1, spec.n + 1))
        return ModuleElement._raw({bv: spec.weight_element(h, z)})
    terms = {}
    for r, w in _expand_targets(spec, g.kind, g.index, z):
        c = spec._pieces("G", g.kind, g.index, r, z)
        if not c.is_zero():
            terms[BasisVector(NORMAL, w)] = c
    return ModuleElement._raw(terms)


_ACT_CACHE_LIMIT = 400000


def act(g: Generator, bv: BasisVector, spec: ModuleSpec) -> ModuleElement:
    """Action of one generator on one canonical basis vector."""
    if g.kind in ("e", "f") and not 1 <= g.index <= spec.n - 1:
        raise ValueError(f"generator index {g.index} out of range")
    if g.kind == "qeps" and not 1 <= g.index <= spec.n:
        raise ValueError(f"weight index {g.index} out of range")
    key = (g, bv)
    cache = spec._act_cache
    hit = cache.get(key)
    if hit is not None:
        return hit
    if spec.is_generic():
        if bv.kind != NORMAL:
            raise ValueError("generic modules have no derivative vectors")
        out = _act_generic(spec, g, bv)
    elif bv.kind == NORMAL:
        out = expand_normal(spec, g, bv.z)
    else:
        out = expand_derivative(spec, g, bv.z)
    if len(cache) < _ACT_CACHE_LIMIT:
        cache[key] = out
    return out


def act_element(g: Generator, elem: ModuleElement, spec: ModuleSpec) -> ModuleElement:
    buckets = {}
    for bv, c in elem.terms.items():
        for tgt, coeff in act(g, bv, spec).terms.items():
            buckets.setdefault(tgt, []).append(coeff * c)
    out = {}
    for tgt, parts in buckets.items():
        v = fe_sum(parts, spec.mode)
        if not v.is_zero():
            out[tgt] = v
    return ModuleElement._raw(out)


def combine(elements, spec: ModuleSpec) -> ModuleElement:
    """Sum several module elements with one shared-denominator pass per
    basis vector (residual assembly without intermediate expansion)."""
    buckets = {}
    for el in elements:
        for bv, c in el.terms.items():
            buckets.setdefault(bv, []).append(c)
    out = {}
    for bv, parts in buckets.items():
        v = fe_sum(parts, spec.mode)
        if not v.is_zero():
            out[bv] = v
    return ModuleElement._raw(out)


def act_word(word, elem: ModuleElement, spec: ModuleSpec) -> ModuleElement:
    """Apply a product of generators, leftmost factor acting last."""
    for g in reversed(list(word)):
        elem = act_element(g, elem, spec)
    return elem
