import pytest

from gtsingular._rat import Rat
from gtsingular.exactalg import CLASSICAL, QUANTUM
from gtsingular.tableaux import RelationSet, Tableau, interlacing_relations
from gtsingular.action import Fault, ModuleSpec
from gtsingular.verify import (
    check_appendix,
    check_compatibility,
    check_defining_relations,
    check_finite_dimensional,
    check_gamma,
    irreducibility_evidence,
)

from test_action import generic_spec_n2, singular_spec_n3


def test_relations_generic_n2():
    rep = check_defining_relations(generic_spec_n2(), 2)
    assert rep, rep.render()


def test_relations_singular_n3_small():
    rep = check_defining_relations(singular_spec_n3(), 1)
    assert rep, rep.render()


def test_relations_classical_singular_small():
    rep = check_defining_relations(singular_spec_n3(CLASSICAL), 1)
    assert rep, rep.render()


def test_compatibility_n3():
    rep = check_compatibility(singular_spec_n3(), 1)
    assert rep, rep.render()


def test_appendix_quick():
    rep = check_appendix(QUANTUM, samples=10, seed=5)
    assert rep, rep.render()
    rep = check_appendix(CLASSICAL, samples=10, seed=5)
    assert rep, rep.render()


def test_gamma_generic_and_singular():
    rep = check_gamma(generic_spec_n2(), 2)
    assert rep, rep.render()
    rep = check_gamma(singular_spec_n3(), 1)
    assert rep, rep.render()


def test_finite_dimensional_small():
    rep = check_finite_dimensional([3, 0])
    assert rep, rep.render()
    rep = check_finite_dimensional([2, 1, 0], CLASSICAL)
    assert rep, rep.render()


def test_irreducibility_generic():
    rep = irreducibility_evidence(singular_spec_n3(), 2)
    assert rep, rep.render()


def test_irreducibility_hypothesis_fails_for_nonmaximal():
    # a base with an extra integral adjacent-row gap off the support
    T = Tableau(3, [[Rat(1, 7)], [0, 0], [2, Rat(1, 3), Rat(9, 11)]])
    spec = ModuleSpec(T, RelationSet(3, []))
    rep = irreducibility_evidence(spec, 2)
    assert not rep.passed


class TestMutations:
    def test_sign_flip_detected(self):
        T = Tableau(2, [[Rat(1, 5)], [Rat(1, 3), Rat(-1, 2)]])
        spec = ModuleSpec(T, RelationSet(2, []), fault=Fault(sign_flip=True))
        rep = check_defining_relations(spec, 1)
        assert not rep.passed

    def test_dropped_gate_detected(self):
        from gtsingular.tableaux import highest_weight_tableau

        spec = ModuleSpec(
            highest_weight_tableau([3, 0]),
            interlacing_relations(2),
            fault=Fault(drop_gate=True),
        )
        rep = check_defining_relations(spec, 2)
        assert not rep.passed

    def test_gamma_prefactor_detected(self):
        spec = singular_spec_n3()
        bad = ModuleSpec(spec.base, spec.relations, fault=Fault(gamma_prefactor=True))
        rep = check_gamma(bad, 1)
        assert not rep.passed
