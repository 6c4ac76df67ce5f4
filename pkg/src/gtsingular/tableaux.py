"""Gelfand-Tsetlin tableaux and admissible sets of entry relations.

A relation set is a subset of the universe R of adjacent-row inequalities
(i,j) >= (i-1,j') and (i-1,j') > (i,j), plus weak top-row relations
(n,i) >= (n,j).  Relation sets split into indecomposable components
(relations sharing a position are connected); admissibility is decided
component by component.
"""

from itertools import product
from typing import NamedTuple

from ._rat import Rat, rat, is_integral, as_int


class MultiplySingular(ValueError):
    """More than one same-row integral pair outside the relation support."""


class SizeLimit(ValueError):
    """Exhaustive enumeration is only supported for n <= 3."""


class Position(NamedTuple):
    row: int
    col: int

    def __repr__(self):
        return f"({self.row},{self.col})"


class Relation(NamedTuple):
    lhs: Position
    rhs: Position
    strict: bool

    def __repr__(self):
        op = ">" if self.strict else ">="
        return f"{self.lhs!r} {op} {self.rhs!r}"


class SingularPair(NamedTuple):
    row: int
    i: int
    j: int


class GenericTag:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "generic"


GENERIC = GenericTag()


def positions(n):
    return [Position(r, c) for r in range(1, n + 1) for c in range(1, r + 1)]


def position_index(n, pos):
    r, c = pos
    return r * (r - 1) // 2 + c - 1


def relation_universe(n):
    """The universe R for height n: weak down, strict up, weak top-row."""
    rels = []
    for i in range(2, n + 1):
        for j in range(1, i + 1):
            for jp in range(1, i):
                rels.append(Relation(Position(i, j), Position(i - 1, jp), False))
    for i in range(2, n + 1):
        for j in range(1, i + 1):
            for jp in range(1, i):
                rels.append(Relation(Position(i - 1, jp), Position(i, j), True))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                rels.append(Relation(Position(n, i), Position(n, j), False))
    return rels


def _valid_relation(rel, n):
    (lr, lc), (rr, rc), strict = rel
    if not (1 <= lc <= lr <= n and 1 <= rc <= rr <= n):
        return False
    if strict:
        return rr == lr + 1
    return lr == rr + 1 or (lr == rr == n and lc != rc)


class RelationSet:
    """A subset of the relation universe with cached component and closure
    data (closures are hot in enumeration, so they are computed once)."""

    __slots__ = ("n", "relations", "_idx", "_edges", "_comp", "_reach", "_sreach",
                 "_vset")

    def __init__(self, n, relations=(), validate=True):
        self.n = n
        rels = frozenset(relations)
        if validate:
            for rel in rels:
                if not _valid_relation(rel, n):
                    raise ValueError(f"relation {rel!r} is not in the universe for n={n}")
        self.relations = rels
        self._idx = None
        self._edges = None
        self._comp = None
        self._reach = None
        self._sreach = None
        self._vset = None

    def __eq__(self, other):
        return (
            isinstance(other, RelationSet)
            and self.n == other.n
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.n, self.relations))

    def __len__(self):
        return len(self.relations)

    def __repr__(self):
        rels = ", ".join(repr(r) for r in sorted(self.relations))
        return f"RelationSet(n={self.n}, {{{rels}}})"

    # -- cached structure ---------------------------------------------------

    def _build(self):
        if self._edges is not None:
            return
        n = self.n
        self._edges = [
            (position_index(n, r.lhs), position_index(n, r.rhs), r.strict)
            for r in self.relations
        ]
        npos = n * (n + 1) // 2
        # connected components of the support (union-find on positions)
        parent = list(range(npos))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        vmask = 0
        for li, ri, _ in self._edges:
            vmask |= (1 << li) | (1 << ri)
            ra, rb = find(li), find(ri)
            if ra != rb:
                parent[ra] = rb
        comp = [-1] * npos
        label = {}
        for p in range(npos):
            if (vmask >> p) & 1:
                root = find(p)
                comp[p] = label.setdefault(root, len(label))
        self._comp = comp
        self._vset = vmask
        # transitive closures: reach = >=1-step chains, sreach = chains
        # containing at least one strict step
        adj = [0] * npos
        sadj = [0] * npos
        for li, ri, strict in self._edges:
            adj[li] |= 1 << ri
            if strict:
                sadj[li] |= 1 << ri
        reach = list(adj)
        changed = True
        while changed:
            changed = False
            for i in range(npos):
                m = reach[i]
                acc = m
                mm = m
                while mm:
                    b = mm & -mm
                    acc |= reach[b.bit_length() - 1]
                    mm ^= b
                if acc != m:
                    reach[i] = acc
                    changed = True
        sreach = [0] * npos
        for a in range(npos):
            if not sadj[a]:
                continue
            targets = 0
            mm = sadj[a]
            while mm:
                b = mm & -mm
                j = b.bit_length() - 1
                targets |= (1 << j) | reach[j]
                mm ^= b
            for i in range(npos):
                if i == a or (reach[i] >> a) & 1:
                    sreach[i] |= targets
        self._reach = reach
        self._sreach = sreach

    @property
    def support(self):
        """All positions touched by some relation."""
        self._build()
        n = self.n
        return frozenset(p for p in positions(n) if (self._vset >> position_index(n, p)) & 1)

    def component_of(self, pos):
        """Component id of a position, or None if outside the support."""
        self._build()
        c = self._comp[position_index(self.n, pos)]
        return None if c < 0 else c

    def components(self):
        """Position sets of the indecomposable components."""
        self._build()
        out = {}
        for p in positions(self.n):
            c = self._comp[position_index(self.n, p)]
            if c >= 0:
                out.setdefault(c, set()).add(p)
        return [frozenset(out[c]) for c in sorted(out)]

    def same_component(self, p, q):
        self._build()
        a = self._comp[position_index(self.n, p)]
        return a >= 0 and a == self._comp[position_index(self.n, q)]


def succ_relation(C: RelationSet, p: Position, r: Position) -> str:
    """Chain order between two support positions: 'strict' if some chain
    from p to r uses a strict step, 'weak' if chains exist but none do,
    'none' otherwise."""
    C._build()
    pi = position_index(C.n, p)
    ri = position_index(C.n, r)
    if (C._sreach[pi] >> ri) & 1:
        return "strict"
    if (C._reach[pi] >> ri) & 1:
        return "weak"
    return "none"


class AdmissibilityReport(NamedTuple):
    admissible: bool
    violations: tuple  # of (condition, description) pairs

    def __bool__(self):
        return self.admissible


def is_admissible(C: RelationSet) -> AdmissibilityReport:
    """Check the four admissibility conditions on every component:

    (i)   strict same-row chains only run left to right;
    (ii)  weak top-row chains only run left to right;
    (iii) no cross (a weak down-bridge and a strict up-bridge that swap
          column order between adjacent rows);
    (iv)  every same-row support pair below the top row is bridged through
          a neighbouring row.
    """
    C._build()
    n = C.n
    violations = []
    comp = C._comp
    reach = C._reach
    sreach = C._sreach

    rows = {}
    for p in positions(n):
        rows.setdefault(p.row, []).append(p)

    # (i) and (ii): chain order within a row
    for k, rowpos in rows.items():
        for p in rowpos:
            pi = position_index(n, p)
            if comp[pi] < 0:
                continue
            for q in rowpos:
                qi = position_index(n, q)
                if comp[qi] < 0:
                    continue
                if (sreach[pi] >> qi) & 1 and not p.col < q.col:
                    violations.append(
                        ("i", f"strict chain {p!r} -> {q!r} with non-increasing column")
                    )
                if k == n and (reach[pi] >> qi) & 1 and not p.col < q.col:
                    violations.append(
                        ("ii", f"top-row chain {p!r} -> {q!r} with non-increasing column")
                    )

    # (iii) crosses inside one component
    weak_down = [r for r in C.relations if not r.strict and r.lhs.row == r.rhs.row + 1]
    strict_up = [r for r in C.relations if r.strict]
    for r1 in weak_down:
        for r2 in strict_up:
            if r1.lhs.row != r2.rhs.row:
                continue
            i, t = r1.lhs.col, r1.rhs.col
            s, j = r2.lhs.col, r2.rhs.col
            if i < j and s < t and C.same_component(r1.lhs, r2.lhs):
                violations.append(("iii", f"cross {{{r1!r}, {r2!r}}}"))

    # (iv) bridging of same-row support pairs below the top row
    rels = C.relations
    for k in range(1, n):
        row = rows[k]
        for a in range(len(row)):
            for b in range(a + 1, len(row)):
                pa, pb = row[a], row[b]
                if not C.same_component(pa, pb):
                    continue
                if not _bridged(rels, k, pa.col, pb.col) and not _bridged(
                    rels, k, pb.col, pa.col
                ):
                    violations.append(("iv", f"pair {pa!r}, {pb!r} not bridged"))

    return AdmissibilityReport(not violations, tuple(violations))


def _bridged(rels, k, i, j):
    """Bridging alternatives for an ordered same-row pair (k,i), (k,j)."""
    down_ok = any(
        Relation(Position(k, i), Position(k + 1, s), True) in rels
        and Relation(Position(k + 1, s), Position(k, j), False) in rels
        for s in range(1, k + 2)
    )
    if down_ok and k > 1:
        up_ok = any(
            Relation(Position(k, i), Position(k - 1, t), False) in rels
            and Relation(Position(k - 1, t), Position(k, j), True) in rels
            for t in range(1, k)
        )
        if up_ok:
            return True
    for s in range(1, k + 2):
        if Relation(Position(k, i), Position(k + 1, s), True) not in rels:
            continue
        for t in range(s + 1, k + 2):
            if Relation(Position(k + 1, t), Position(k, j), False) in rels:
                return True
    return False


def implies(C: RelationSet, D: RelationSet) -> bool:
    """C implies D: every chain order forced by D is forced by C."""
    C._build()
    D._build()
    n = C.n
    for p in positions(n):
        pi = position_index(n, p)
        for q in positions(n):
            qi = position_index(n, q)
            if (D._sreach[pi] >> qi) & 1 and not (C._sreach[pi] >> qi) & 1:
                return False
            if (D._reach[pi] >> qi) & 1 and not (C._reach[pi] >> qi) & 1:
                return False
    return True


# ---------------------------------------------------------------------------
# tableaux
# ---------------------------------------------------------------------------

def free_positions(n):
    """Positions that carry shifts (everything below the top row)."""
    return [Position(r, c) for r in range(1, n) for c in range(1, r + 1)]


def z_index(row, col):
    return row * (row - 1) // 2 + col - 1


class Tableau:
    """Triangular array of exact rationals plus an integer shift vector.

    The top row is never shifted; entry(r,c) = base(r,c) + shift(r,c).
    """

    __slots__ = ("n", "base", "shift")

    def __init__(self, n, base, shift=None):
        if len(base) != n or any(len(base[r]) != r + 1 for r in range(n)):
            raise ValueError("base must have rows of lengths 1..n")
        self.n = n
        self.base = tuple(tuple(rat(v) for v in row) for row in base)
        if shift is None:
            self.shift = tuple(tuple(0 for _ in range(r + 1)) for r in range(n - 1))
        else:
            if len(shift) != n - 1 or any(len(shift[r]) != r + 1 for r in range(n - 1)):
                raise ValueError("shift must have rows of lengths 1..n-1")
            self.shift = tuple(tuple(int(v) for v in row) for row in shift)

    def entry(self, row, col):
        v = self.base[row - 1][col - 1]
        if row < self.n:
            v = v + self.shift[row - 1][col - 1]
        return v

    def shifted(self, z):
        """Tableau with shift replaced by the flat vector z (row-major
        over the free positions)."""
        rows = []
        k = 0
        for r in range(1, self.n):
            rows.append(tuple(int(z[k + c]) for c in range(r)))
            k += r
        t = object.__new__(Tableau)
        t.n = self.n
        t.base = self.base
        t.shift = tuple(rows)
        return t

    def flat_shift(self):
        return tuple(v for row in self.shift for v in row)

    def __eq__(self, other):
        return (
            isinstance(other, Tableau)
            and self.n == other.n
            and self.base == other.base
            and self.shift == other.shift
        )

    def __hash__(self):
        return hash((self.n, self.base, self.shift))

    def __repr__(self):
        rows = []
        for r in range(self.n, 0, -1):
            rows.append(" ".join(str(self.entry(r, c)) for c in range(1, r + 1)))
        return "Tableau[" + " | ".join(rows) + "]"


def _relation_holds(T, rel):
    d = T.entry(*rel.lhs) - T.entry(*rel.rhs)
    if not is_integral(d):
        return False
    return d > 0 if rel.strict else d >= 0


def satisfies(T: Tableau, C: RelationSet) -> bool:
    """All relations hold with integral differences of the right sign, and
    same-row integral differences between support positions stay inside a
    single component.  Integral pairs entirely outside the support are not
    ruled out here; they are classified by detect_singular_pair."""
    for rel in C.relations:
        if not _relation_holds(T, rel):
            return False
    for k, a, b in _integral_row_pairs(T):
        pa, pb = Position(k, a), Position(k, b)
        ca, cb = C.component_of(pa), C.component_of(pb)
        if ca is None and cb is None:
            continue
        if ca != cb or ca is None:
            return False
    return True


def _integral_row_pairs(T):
    out = []
    for k in range(1, T.n + 1):
        for a in range(1, k + 1):
            for b in range(a + 1, k + 1):
                if is_integral(T.entry(k, a) - T.entry(k, b)):
                    out.append((k, a, b))
    return out


def maximal_relation_set(T: Tableau):
    """All universe relations satisfied by T, with its admissibility report."""
    rels = [rel for rel in relation_universe(T.n) if _relation_holds(T, rel)]
    C = RelationSet(T.n, rels, validate=False)
    return C, is_admissible(C)


def detect_singular_pair(T: Tableau, C: RelationSet):
    """The unique same-row integral pair outside the relation support, the
    GENERIC tag if there is none, or MultiplySingular beyond one."""
    if not satisfies(T, C):
        raise ValueError("tableau does not satisfy the relation set")
    exceptional = []
    for k, a, b in _integral_row_pairs(T):
        pa, pb = Position(k, a), Position(k, b)
        if C.component_of(pa) is None and C.component_of(pb) is None:
            exceptional.append((k, a, b))
    if not exceptional:
        return GENERIC
    if len(exceptional) > 1:
        raise MultiplySingular(f"integral pairs {exceptional} outside the support")
    k, a, b = exceptional[0]
    if k == T.n:
        raise MultiplySingular("integral top-row pair outside the support")
    return SingularPair(k, a, b)


def normalized_singular_base(T: Tableau, sp: SingularPair) -> Tableau:
    """Shift the base so the two singular entries agree exactly (the integer
    gap is absorbed into the orbit), leaving a zero shift vector."""
    d = T.base[sp.row - 1][sp.i - 1] - T.base[sp.row - 1][sp.j - 1]
    if not is_integral(d):
        raise ValueError("singular pair does not have an integral gap")
    rows = [list(r) for r in T.base]
    rows[sp.row - 1][sp.i - 1] = rows[sp.row - 1][sp.j - 1]
    return Tableau(T.n, rows)


def in_basis(T: Tableau, C: RelationSet, sp=GENERIC) -> bool:
    """Orbit membership under C.  Relations never touch the singular pair
    (its positions lie outside the support), and the integral-difference
    pattern is invariant under integer shifts, so membership is decided on
    the concrete entries alone."""
    return all(_relation_holds(T, rel) for rel in C.relations)


def enumerate_window(C: RelationSet, T: Tableau, B: int):
    """All shift vectors z with max-norm at most B whose tableau lies in the
    orbit basis, in lexicographic order."""
    if B < 0:
        raise ValueError("window bound must be nonnegative")
    n = T.n
    nfree = n * (n - 1) // 2
    compiled = [
        (rel.lhs.row, rel.lhs.col, rel.rhs.row, rel.rhs.col, rel.strict)
        for rel in C.relations
    ]
    base = T.base
    out = []
    rng = range(-B, B + 1)
    for z in product(rng, repeat=nfree):
        ok = True
        for lr, lc, rr, rc, strict in compiled:
            lv = base[lr - 1][lc - 1] + (z[z_index(lr, lc)] if lr < n else 0)
            rv = base[rr - 1][rc - 1] + (z[z_index(rr, rc)] if rr < n else 0)
            d = lv - rv
            if not is_integral(d) or (d <= 0 if strict else d < 0):
                ok = False
                break
        if ok:
            out.append(z)
    return out


def interlacing_relations(n) -> RelationSet:
    """The standard interlacing set: (i+1,j) >= (i,j) > (i+1,j+1)."""
    rels = []
    for i in range(1, n):
        for j in range(1, i + 1):
            rels.append(Relation(Position(i + 1, j), Position(i, j), False))
            rels.append(Relation(Position(i, j), Position(i + 1, j + 1), True))
    return RelationSet(n, rels)


def highest_weight_tableau(lam) -> Tableau:
    """Base tableau of the finite-dimensional module with dominant integral
    highest weight lam, in the shifted coordinates v_{ki} = lam_i - i + 1
    that turn interlacing into the relation set of interlacing_relations."""
    lam = [as_int(rat(v)) for v in lam]
    n = len(lam)
    if any(lam[i] < lam[i + 1] for i in range(n - 1)):
        raise ValueError("highest weight must be weakly decreasing")
    base = [[lam[i] - i for i in range(r)] for r in range(1, n + 1)]
    return Tableau(n, base)


def enumerate_admissible(n: int):
    """Every admissible subset of the universe, for n <= 3."""
    if n > 3:
        raise SizeLimit("exhaustive enumeration is limited to n <= 3")
    universe = relation_universe(n)
    m = len(universe)
    out = []
    for mask in range(1 << m):
        rels = [universe[t] for t in range(m) if (mask >> t) & 1]
        C = RelationSet(n, rels, validate=False)
        if is_admissible(C):
            out.append(C)
    return out
