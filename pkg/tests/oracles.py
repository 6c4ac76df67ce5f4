"""Independent brute-force oracles used by the test suite.

These deliberately reimplement definitions in the most literal way
(explicit chain search, naive component merging, nested pattern loops) so
they share no code with the library paths they check.
"""

from collections import deque
from fractions import Fraction

from gtsingular.tableaux import Position, Relation


def naive_components(rels):
    """Split a relation list into groups connected through shared positions."""
    groups = [({rel.lhs, rel.rhs}, [rel]) for rel in rels]
    merged = True
    while merged:
        merged = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                if groups[a][0] & groups[b][0]:
                    pa, ra = groups[a]
                    pb, rb = groups[b]
                    groups[a] = (pa | pb, ra + rb)
                    del groups[b]
                    merged = True
                    break
            if merged:
                break
    return [g[1] for g in groups]


def chain_reachable(rels, start, want_strict):
    """Positions reachable from start along chains of one or more relations;
    if want_strict, only targets reached through at least one strict step."""
    seen = set()
    work = deque([(start, False)])
    while work:
        pos, got = work.popleft()
        for rel in rels:
            if rel.lhs == pos:
                nxt = (rel.rhs, got or rel.strict)
                if nxt not in seen:
                    seen.add(nxt)
                    work.append(nxt)
    result = set()
    for pos, got in seen:
        if want_strict and not got:
            continue
        result.add(pos)
    return result


def oracle_component_admissible(n, rels):
    support = set()
    for rel in rels:
        support.add(rel.lhs)
        support.add(rel.rhs)

    # (i) strict same-row chains must run left to right
    for p in support:
        for q in chain_reachable(rels, p, want_strict=True):
            if p.row == q.row and not p.col < q.col:
                return False
    # (ii) weak top-row chains must run left to right
    for p in support:
        if p.row != n:
            continue
        for q in chain_reachable(rels, p, want_strict=False):
            if q.row == n and not p.col < q.col:
                return False
    # (iii) no cross
    for r1 in rels:
        for r2 in rels:
            if r1.strict or not r2.strict:
                continue
            if r1.lhs.row != r1.rhs.row + 1 or r1.lhs.row != r2.rhs.row:
                continue
            i, t = r1.lhs.col, r1.rhs.col
            s, j = r2.lhs.col, r2.rhs.col
            if i < j and s < t:
                return False
    # (iv) same-row pairs below the top row must be bridged
    for k in range(1, n):
        cols = sorted({p.col for p in support if p.row == k})
        for x in range(len(cols)):
            for y in range(x + 1, len(cols)):
                a, b = cols[x], cols[y]
                if not (
                    oracle_bridged(rels, k, a, b, n)
                    or oracle_bridged(rels, k, b, a, n)
                ):
                    return False
    return True


def oracle_bridged(rels, k, i, j, n):
    relset = set(rels)
    for s in range(1, k + 2):
        down1 = Relation(Position(k, i), Position(k + 1, s), True) in relset
        down2 = Relation(Position(k + 1, s), Position(k, j), False) in relset
        if down1 and down2:
            for t in range(1, k):
                up1 = Relation(Position(k, i), Position(k - 1, t), False) in relset
                up2 = Relation(Position(k - 1, t), Position(k, j), True) in relset
                if up1 and up2:
                    return True
    for s in range(1, k + 2):
        for t in range(s + 1, k + 2):
            if (
                Relation(Position(k, i), Position(k + 1, s), True) in relset
                and Relation(Position(k + 1, t), Position(k, j), False) in relset
            ):
                return True
    return False


def oracle_admissible(n, rels):
    return all(
        oracle_component_admissible(n, comp) for comp in naive_components(list(rels))
    )


# ---------------------------------------------------------------------------
# finite-dimensional pattern oracles
# ---------------------------------------------------------------------------

def oracle_patterns(lam):
    """All interlacing integer patterns with the given top row, enumerated
    by nested range products in highest-weight coordinates."""
    from itertools import product as iproduct

    n = len(lam)
    result = [[tuple(lam)]]
    for _ in range(n - 1):
        nxt = []
        for p in result:
            top = p[-1]
            k = len(top) - 1
            ranges = [range(top[j + 1], top[j] + 1) for j in range(k)]
            for row in iproduct(*ranges):
                nxt.append(p + [row])
        result = nxt
    return result


def oracle_weyl_dimension(lam):
    """Product formula for the dimension of the highest-weight module."""
    n = len(lam)
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    assert num % den == 0
    return num // den
