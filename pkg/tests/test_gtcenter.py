from itertools import permutations

import pytest

from gtsingular._rat import Rat
from gtsingular.exactalg import CLASSICAL, QUANTUM, FieldElement, q_pochhammer_factorial
from gtsingular.tableaux import RelationSet, Tableau
from gtsingular.action import BasisVector, DERIVATIVE, NORMAL, ModuleElement, ModuleSpec
from gtsingular.gtcenter import (
    act_central,
    act_central_element,
    block_report,
    character_key,
    eigen_index_set,
    gamma,
    gamma_evaluated,
)

from test_action import generic_spec_n2, singular_spec_n3


def oracle_gamma_quantum(row_values, k, scale=1):
    """Shuffle-sum oracle assembled from permutations filtered for
    monotonicity, entirely independent of the combinations-based path."""
    m = len(row_values)
    total = FieldElement.zero(QUANTUM)
    for tau in permutations(range(m)):
        if any(tau[t] > tau[t + 1] for t in range(k - 1)):
            continue
        if any(tau[t] > tau[t + 1] for t in range(k, m - 1)):
            continue
        e = sum(row_values[tau[t]] for t in range(k)) - sum(
            row_values[tau[t]] for t in range(k, m)
        )
        total = total + FieldElement.monomial(QUANTUM, 1, expq=e)
    pre = q_pochhammer_factorial(k, scale=scale) * q_pochhammer_factorial(
        m - k, scale=scale
    )
    shift = (Rat(k * (k + 1)) + Rat(m * (m - 3), 2)) * scale
    return pre * FieldElement.monomial(QUANTUM, 1, expq=shift) * total


def generic_spec_n3():
    T = Tableau(3, [[Rat(1, 7)], [Rat(4, 7), Rat(-3, 5)], [Rat(5, 2), Rat(1, 3), Rat(9, 11)]])
    return ModuleSpec(T, RelationSet(3, []))


class TestGamma:
    def test_gamma_11(self):
        spec = generic_spec_n2()
        got = gamma(spec, 1, 1).value
        assert got == FieldElement.monomial(
            QUANTUM, 1, expq=(1 + Rat(1, 5)) * spec.qscale
        )

    def test_gamma_00_edge(self):
        spec = generic_spec_n2()
        assert gamma(spec, 0, 0).value.is_one()

    def test_matches_permutation_oracle(self):
        spec = generic_spec_n3()
        for z in [(0, 0, 0), (1, -2, 0)]:
            for m in range(1, 4):
                vals = [spec.entry_linear(m, c, z).const for c in range(1, m + 1)]
                for k in range(0, m + 1):
                    assert gamma(spec, m, k, z).value == oracle_gamma_quantum(
                        vals, k, spec.qscale
                    ), (m, k)

    def test_row_swap_invariance(self):
        # swapping two row-m base entries leaves gamma unchanged
        T1 = Tableau(2, [[Rat(1, 5)], [Rat(1, 3), Rat(-1, 2)]])
        T2 = Tableau(2, [[Rat(1, 5)], [Rat(-1, 2), Rat(1, 3)]])
        s1 = ModuleSpec(T1, RelationSet(2, []))
        s2 = ModuleSpec(T2, RelationSet(2, []))
        for k in range(0, 3):
            assert gamma(s1, 2, k).value == gamma(s2, 2, k).value

    def test_symbolic_tau_symmetry(self):
        spec = singular_spec_n3()
        for z in [(0, 1, 0), (2, -1, 3)]:
            for k in range(0, 3):
                assert gamma_evaluated(spec, 2, k, z) == gamma_evaluated(
                    spec, 2, k, spec.tau(z)
                )


class TestCentralAction:
    def test_generic_eigenvector(self):
        spec = generic_spec_n3()
        for z in [(0, 0, 0), (1, 0, -1)]:
            bv = BasisVector(NORMAL, z)
            for m in range(1, 4):
                for k in range(0, m + 1):
                    got = act_central(m, k, bv, spec)
                    assert got == ModuleElement({bv: gamma(spec, m, k, z).value})

    def test_singular_normal_eigenvector(self):
        spec = singular_spec_n3()
        for z in [(0, 0, 0), (0, 1, -1), (2, 0, 3)]:
            bv = spec.basis_vector(NORMAL, z)
            for m in range(1, 4):
                for k in range(0, m + 1):
                    got = act_central(m, k, bv, spec)
                    assert got == ModuleElement(
                        {bv: gamma_evaluated(spec, m, k, bv.z)}
                    )

    def test_derivative_jordan_structure(self):
        spec = singular_spec_n3()
        m = 2  # the singular row
        bv = spec.basis_vector(DERIVATIVE, (0, 3, 1))
        eigen = eigen_index_set(spec, m)
        assert eigen == {0, 2}
        for k in range(0, m + 1):
            gval = gamma_evaluated(spec, m, k, bv.z)
            res = act_central(m, k, bv, spec) - ModuleElement({bv: gval})
            if k in eigen:
                assert res.is_zero(), k
            else:
                assert not res.is_zero(), k
                res2 = act_central_element(m, k, res, spec) - res.scale(gval)
                assert res2.is_zero(), k

    def test_other_rows_stay_diagonal(self):
        spec = singular_spec_n3()
        bv = spec.basis_vector(DERIVATIVE, (0, 2, -1))
        for m, k in [(1, 1), (3, 1), (3, 2), (3, 3)]:
            gval = gamma_evaluated(spec, m, k, bv.z)
            assert act_central(m, k, bv, spec) == ModuleElement({bv: gval})

    def test_classical_jordan_structure(self):
        spec = singular_spec_n3(CLASSICAL)
        m = 2
        bv = spec.basis_vector(DERIVATIVE, (0, 1, 0))
        eigen = eigen_index_set(spec, m)
        assert eigen == {0, 1}
        for k in range(0, m + 1):
            gval = gamma_evaluated(spec, m, k, bv.z)
            res = act_central(m, k, bv, spec) - ModuleElement({bv: gval})
            assert res.is_zero() == (k in eigen), k


class TestCharacterKeys:
    def test_pair_shares_key(self):
        spec = singular_spec_n3()
        zn = (0, 0, 1)
        zd = (0, 1, 0)
        assert character_key(spec.basis_vector(NORMAL, zn), spec) == character_key(
            spec.basis_vector(DERIVATIVE, zd), spec
        )

    def test_distinct_windows_distinct_keys(self):
        spec = singular_spec_n3()
        keys = set()
        for bv in spec.window(1):
            if bv.kind == NORMAL:
                keys.add(character_key(bv, spec))
        normals = [bv for bv in spec.window(1) if bv.kind == NORMAL]
        assert len(keys) == len(normals)


class TestBlocks:
    def test_generic_all_dimension_one(self):
        spec = generic_spec_n3()
        for row in block_report(spec, 1):
            assert row.dimension == 1
            assert row.jordan == ()

    def test_singular_block_structure(self):
        spec = singular_spec_n3()
        rows = block_report(spec, 1)
        assert all(row.dimension <= 2 for row in rows)
        paired = [row for row in rows if row.dimension == 2]
        fixed = [row for row in rows if row.dimension == 1]
        assert paired and fixed
        for row in paired:
            kinds = {bv.kind for bv in row.members}
            assert kinds == {NORMAL, DERIVATIVE}
            assert row.jordan  # some central generator has a size-2 cell
        for row in fixed:
            assert row.jordan == ()
