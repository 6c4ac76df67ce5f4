"""Action of the Gelfand-Tsetlin subalgebra.

The central generator c_mk of the level-m subalgebra acts on a generic
tableau as multiplication by the shuffle sum

    gamma_mk(L) = (k)!(m-k)!_{q^-2} q^(k(k+1)+m(m-3)/2)
                  sum_tau q^(l_{m,tau(1)}+...+l_{m,tau(k)}
                            - l_{m,tau(k+1)}-...-l_{m,tau(m)})

over (k, m-k)-shuffles, a symmetric function of the row-m entries.  On a
singular module the action is defined through the same functional pipeline
as the generators; on derivative vectors it picks up a nilpotent part
whenever gamma is not symmetric in x and y, producing Jordan cells of
size two.

The classical generators are normalized as the elementary symmetric
polynomials e_k of the row entries (the coefficients of a Capelli-style
characteristic polynomial); only the grouping and Jordan structure of the
resulting character data is used, never the absolute normalization.
"""

from itertools import combinations
from typing import NamedTuple

from ._rat import Rat, rat
from .exactalg import (
    CLASSICAL,
    QUANTUM,
    FieldElement,
    LinearExpr,
    bracket,
    dv_operator,
    evaluate_at_singular,
    linear_element,
    q_pochhammer_factorial,
    q_power,
)
from .action import (
    DERIVATIVE,
    NORMAL,
    BasisVector,
    ModuleElement,
    ModuleSpec,
)


class GammaValue(NamedTuple):
    m: int
    k: int
    value: FieldElement


def _gamma_symbolic(spec: ModuleSpec, m: int, k: int, z, faulted=False) -> FieldElement:
    """gamma_mk at base+z with the singular entries kept symbolic."""
    if not 0 <= k <= m <= spec.n:
        raise ValueError(f"gamma indices (m,k)=({m},{k}) out of range")
    mode = spec.mode
    entries = [spec.entry_linear(m, c, z) for c in range(1, m + 1)]
    if mode == QUANTUM:
        total = FieldElement.zero(mode)
        idx = range(m)
        for plus in combinations(idx, k):
            plus_set = set(plus)
            e = LinearExpr(0, 0, 0)
            for t in idx:
                e = e + entries[t] if t in plus_set else e - entries[t]
            total = total + q_power(e, mode)
        pre = q_pochhammer_factorial(k, mode, spec.qscale) * q_pochhammer_factorial(
            m - k, mode, spec.qscale
        )
        shift = (k * (k + 1) + (m * (m - 3)) // 2) * spec.qscale
        out = pre * FieldElement.monomial(mode, 1, expq=shift) * total
    else:
        total = FieldElement.zero(mode)
        for subset in combinations(range(m), k):
            prod = FieldElement.one(mode)
            for t in subset:
                prod = prod * linear_element(entries[t], mode)
            total = total + prod
        out = total
    if faulted:
        if mode == QUANTUM:
            out = out * FieldElement.monomial(mode, 1, expq=spec.qscale)
        else:
            out = out.scale(2)
    return out


def gamma(spec: ModuleSpec, m: int, k: int, z=None) -> GammaValue:
    """The multiplication scalar of c_mk, symbolic in X, Y when row m
    carries the singular pair."""
    if z is None:
        z = (0,) * spec.nfree
    return GammaValue(m, k, _gamma_symbolic(spec, m, k, z))


def gamma_evaluated(spec: ModuleSpec, m: int, k: int, z) -> FieldElement:
    key = ("gammaval", m, k, spec._row_slice(m, z))
    hit = spec._piece_cache.get(key)
    if hit is None:
        hit = _gamma_symbolic(spec, m, k, z)
        if not spec.is_generic():
            hit = evaluate_at_singular(hit, spec.eval_scaled)
        spec._piece_cache[key] = hit
    return hit


def _gamma_pieces(spec: ModuleSpec, m: int, k: int, z, with_bracket=False):
    """(dv, ev) of the symbolic gamma (normal inputs multiply in [x-y]_q
    first), memoized by the row-m shifts."""
    key = ("gamma", with_bracket, m, k, spec._row_slice(m, z), spec.fault.gamma_prefactor)
    hit = spec._piece_cache.get(key)
    if hit is not None:
        return hit
    val = _gamma_symbolic(spec, m, k, z, faulted=spec.fault.gamma_prefactor)
    if with_bracket:
        val = bracket(LinearExpr(0, 1, -1), spec.mode, spec.qscale) * val
    c = spec.eval_scaled
    out = (dv_operator(val, c, spec.qscale), evaluate_at_singular(val, c))
    spec._piece_cache[key] = out
    return out


def act_central(m: int, k: int, bv: BasisVector, spec: ModuleSpec) -> ModuleElement:
    """c_mk on a canonical basis vector, through the singular pipeline."""
    if spec.is_generic():
        val = _gamma_symbolic(spec, m, k, bv.z, faulted=spec.fault.gamma_prefactor)
        return ModuleElement({bv: val})
    z = bv.z
    if bv.kind == NORMAL:
        tpart, dpart = _gamma_pieces(spec, m, k, z, with_bracket=True)
        terms = {}
        if not tpart.is_zero():
            terms[spec.canonical_normal(z)] = tpart
        if not dpart.is_zero():
            dbv, sign = spec.canonical_derivative(z)
            if dbv is not None:
                terms[dbv] = dpart if sign > 0 else -dpart
        return ModuleElement(terms)
    tpart, dpart = _gamma_pieces(spec, m, k, z)
    terms = {}
    if not tpart.is_zero():
        terms[spec.canonical_normal(z)] = tpart
    if not dpart.is_zero():
        dbv, sign = spec.canonical_derivative(z)
        if dbv is not None:
            terms[dbv] = dpart if sign > 0 else -dpart
    return ModuleElement(terms)


def act_central_element(m: int, k: int, elem: ModuleElement, spec: ModuleSpec) -> ModuleElement:
    out = ModuleElement._raw({})
    for bv, c in elem.terms.items():
        out = out + act_central(m, k, bv, spec).scale(c)
    return out


def eigen_index_set(spec: ModuleSpec, m: int):
    """Indices k for which gamma_mk stays symmetric in x, y for every shift,
    so derivative vectors on the singular row remain honest eigenvectors.

    Quantum shuffles: the all-plus and all-minus sums, k in {0, m}.
    Classical elementary symmetric polynomials: e_0 and the linear e_1.
    """
    if spec.mode == QUANTUM:
        return {0, m}
    return {0, 1}


def character_key(bv: BasisVector, spec: ModuleSpec):
    """Hashable tuple of evaluated gamma values over all (m, k); equal for
    the normal/derivative pair attached to one tau-orbit of shifts."""
    return tuple(
        gamma_evaluated(spec, m, k, bv.z).canonical_key()
        for m in range(1, spec.n + 1)
        for k in range(1, m + 1)
    )


class BlockRow(NamedTuple):
    key: tuple
    members: tuple
    dimension: int
    jordan: tuple  # ((m, k, size) for indices with a size-2 cell)


def block_report(spec: ModuleSpec, B: int):
    """Group the window basis by character key and measure Jordan sizes of
    every central generator on each block."""
    blocks = {}
    for bv in spec.window(B):
        blocks.setdefault(character_key(bv, spec), []).append(bv)
    out = []
    system = spec.mode
    for key, members in blocks.items():
        jordan = []
        for m in range(1, spec.n + 1):
            for k in range(1, m + 1):
                size = 1
                for bv in members:
                    gval = gamma_evaluated(spec, m, k, bv.z)
                    res = act_central(m, k, bv, spec) - ModuleElement({bv: gval})
                    if not res.is_zero():
                        res2 = act_central_element(m, k, res, spec) - res.scale(gval)
                        if not res2.is_zero():
                            raise AssertionError(
                                f"(c-gamma)^2 does not annihilate {bv!r} at ({m},{k})"
                            )
                        size = 2
                if size == 2:
                    jordan.append((m, k, 2))
        out.append(BlockRow(key, tuple(members), len(members), tuple(jordan)))
    out.sort(key=lambda row: tuple(sorted(b.z for b in row.members)))
    return out
