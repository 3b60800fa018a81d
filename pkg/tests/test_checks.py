import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kbeq.checks import (
    check_cauchy,
    check_character,
    check_coset_constant,
    check_eq5,
    check_hermitian,
    check_kb,
    check_kb_self,
    check_polynomial,
    check_quadratic,
    check_sign_eq26,
    delta,
)
from kbeq.errors import IncompatibleTablesError
from kbeq.functions import (
    AdditiveMap,
    CharacterSpec,
    CosetConstantMap,
    Exact,
    FuncTable,
    PositiveSolutionForm,
    QuadraticForm,
    synth_table,
)
from kbeq.groups import Box, FullGroup, GroupSpec
from kbeq.oracle import builtin_counterexample, builtin_odd_quadratic

Z = GroupSpec(1)
Z3 = GroupSpec(0, (3,))


def real_table(group, domain, fn):
    return FuncTable.from_function(group, domain, "real", fn)


# ---------------------------------------------------------------------------
# difference operator


def test_delta_constant_is_zero():
    t = real_table(Z, Box((4,)), lambda p: Fraction(7))
    d = delta(t, Z.element((2,)))
    assert all(v == 0 for v in d.values.values())


def test_delta_identity_is_one():
    t = real_table(Z, Box((4,)), lambda p: Fraction(p.coords[0]))
    d = delta(t, Z.element((1,)))
    assert all(v == 1 for v in d.values.values())
    # domain shrank by one on the right
    assert len(d.values) == 8


def test_delta_square_step_three():
    t = real_table(Z, Box((6,)), lambda p: Fraction(p.coords[0] ** 2))
    d = delta(t, Z.element((3,)))
    for p in d.points():
        assert d.values[p] == 6 * p.coords[0] + 9


def test_delta_commutes():
    g = GroupSpec(2)
    t = real_table(g, Box((4, 4)),
                   lambda p: Fraction(p.coords[0] ** 2 * p.coords[1] + 3))
    h, k = g.element((1, 2)), g.element((2, -1))
    a = delta(delta(t, h), k)
    b = delta(delta(t, k), h)
    common = set(a.values) & set(b.values)
    assert common
    assert all(a.values[p] == b.values[p] for p in common)


# ---------------------------------------------------------------------------
# polynomial and triple-difference checks


def test_check_polynomial_square():
    t = real_table(Z, Box((5,)), lambda p: Fraction(p.coords[0] ** 2))
    assert check_polynomial(t, 2).holds
    rep = check_polynomial(t, 1)
    assert not rep.holds and rep.witness is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_random_quadratic_forms_are_degree_2(a, b, c):
    g = GroupSpec(2)
    P = QuadraticForm(g, ((Fraction(a), Fraction(b, 2)),
                          (Fraction(b, 2), Fraction(c))))
    t = real_table(g, Box((3, 3)), P.value)
    assert check_polynomial(t, 2).holds


def test_check_eq5_examples():
    zero = real_table(Z, Box((4,)), lambda p: Fraction(0))
    assert check_eq5(zero).holds

    cubic = real_table(Z, Box((4,)), lambda p: Fraction(p.coords[0] ** 3))
    rep = check_eq5(cubic)
    assert not rep.holds and rep.witness is not None

    # P + l + coset-constant r satisfies the triple-difference equation
    odd = {idx: Fraction(idx.residues[0], 3) for idx in Z.coset_indices(2)}
    form = PositiveSolutionForm(
        QuadraticForm(Z, ((Fraction(2, 3),),)),
        AdditiveMap(Z, (Fraction(-1, 2),)),
        AdditiveMap.zero(Z),
        CosetConstantMap.from_mapping(Z, odd))
    f, _ = synth_table(form, Box((5,)))
    assert check_eq5(f.as_real_log()).holds


def test_check_eq5_samples_large_domains():
    g = GroupSpec(2)
    t = real_table(g, Box((8, 8)), lambda p: Fraction(p.coords[0] ** 2))
    rep = check_eq5(t)
    assert rep.holds and rep.note is not None and "sampled" in rep.note


# ---------------------------------------------------------------------------
# the equation itself


def test_kb_builtin_counterexample():
    f, g = builtin_counterexample()
    rep = check_kb(f, g)
    assert rep.holds
    assert rep.pairs_checked == 256
    assert rep.coverage == 1.0


def test_kb_all_ones():
    f = FuncTable.from_function(Z3, FullGroup(), "positive", lambda p: Fraction(0))
    assert check_kb(f, f).holds


def test_kb_reciprocal_constants_float():
    f = FuncTable.from_function(Z3, FullGroup(), "positive",
                                lambda p: math.log(2.0))
    g = FuncTable.from_function(Z3, FullGroup(), "positive",
                                lambda p: math.log(0.5))
    assert check_kb(f, g).holds


def test_kb_requires_matching_tables():
    f = FuncTable.from_function(Z3, FullGroup(), "positive", lambda p: Fraction(0))
    s = FuncTable.from_function(Z3, FullGroup(), "sign", lambda p: 1)
    with pytest.raises(IncompatibleTablesError):
        check_kb(f, s)


def test_kb_witness_is_lexicographically_first():
    # corrupt the synthesized pair at one point; scan order fixes the witness
    form = PositiveSolutionForm.zero(Z3)
    f, g = synth_table(form, FullGroup())
    vals = dict(f.values)
    vals[Z3.element((2,))] = Fraction(1)
    bad = FuncTable(Z3, FullGroup(), "positive", vals)
    rep = check_kb(bad, g)
    assert not rep.holds
    # pairs where the corruption cancels hold; the first true failure is (1, 1)
    assert rep.witness.points[0].coords == (1,)
    assert rep.witness.points[1].coords == (1,)


def test_kb_self_examples():
    t = builtin_odd_quadratic(4)
    assert check_kb_self(t).holds

    f = FuncTable.from_function(Z, Box((5,)), "positive",
                                lambda p: Fraction(p.coords[0] ** 2))
    assert check_kb_self(f).holds


def test_kb_scaling_metamorphic():
    # (c f, g / c) solves iff (f, g) does; in log domain shift by +/- q
    odd = {idx: Fraction(idx.residues[0]) for idx in Z.coset_indices(2)}
    form = PositiveSolutionForm(
        QuadraticForm(Z, ((Fraction(1, 2),),)),
        AdditiveMap(Z, (Fraction(2),)),
        AdditiveMap(Z, (Fraction(-1),)),
        CosetConstantMap.from_mapping(Z, odd))
    f, g = synth_table(form, Box((4,)))
    q = Fraction(7, 3)
    fs = FuncTable(Z, f.domain, "positive",
                   {p: v + q for p, v in f.values.items()})
    gs = FuncTable(Z, g.domain, "positive",
                   {p: v - q for p, v in g.values.items()})
    assert check_kb(f, g).holds
    assert check_kb(fs, gs).holds
    # breaking the pairing (scale only f) must fail
    assert not check_kb(fs, g).holds


def test_kb_implies_eq5_on_logs():
    form = PositiveSolutionForm(
        QuadraticForm(Z, ((Fraction(1),),)),
        AdditiveMap(Z, (Fraction(1, 3),)),
        AdditiveMap(Z, (Fraction(-2),)),
        CosetConstantMap.from_mapping(
            Z, {idx: Fraction(2 * idx.residues[0] - 1, 2)
                for idx in Z.coset_indices(2)}))
    f, g = synth_table(form, Box((5,)))
    assert check_kb(f, g).holds
    assert check_eq5(f.as_real_log()).holds
    assert check_eq5(g.as_real_log()).holds


def test_kb_holds_for_moduli_of_hermitian_pair():
    f, g = builtin_counterexample()
    assert check_kb(f.abs_log_table(), g.abs_log_table()).holds


def test_kb_complex_with_zeros():
    z9 = GroupSpec(0, (9,))
    sup = {0, 3, 6}
    f = FuncTable.from_function(
        z9, FullGroup(), "complex",
        lambda p: Exact.unit(Fraction(p.coords[0], 9))
        if p.coords[0] in sup else Exact.zero_value())
    rep = check_kb(f, f)
    assert rep.holds and rep.pairs_checked == 81
    # breaking one zero must fail
    vals = dict(f.values)
    vals[z9.element((1,))] = Exact.one()
    bad = FuncTable(z9, FullGroup(), "complex", vals)
    assert not check_kb(bad, f).holds


def test_kb_float_complex_path():
    chi = CharacterSpec(Z3, (), (1,))
    f = FuncTable.from_function(Z3, FullGroup(), "complex",
                                lambda p: chi.value(p).to_complex())
    assert check_kb(f, f, tol=1e-9).holds


# ---------------------------------------------------------------------------
# side conditions


def test_check_hermitian():
    even = real_table(Z, Box((3,)), lambda p: Fraction(p.coords[0] ** 2))
    assert check_hermitian(even).holds

    chi = CharacterSpec(Z, (Fraction(1, 12),), ())
    t = FuncTable.from_function(Z, Box((3,)), "complex",
                                lambda p: chi.value(p))
    assert check_hermitian(t).holds

    bad = FuncTable.from_function(
        Z, Box((1,)), "complex",
        lambda p: Exact.unit(Fraction(1, 4)) if p.coords[0] != 0 else Exact.one())
    rep = check_hermitian(bad)
    assert not rep.holds
    assert rep.witness.points[0].coords == (-1,)


def test_check_sign_eq26():
    ones = FuncTable.from_function(Z3, FullGroup(), "sign", lambda p: 1)
    assert check_sign_eq26(ones, ones).holds

    f, g = builtin_counterexample()
    assert check_sign_eq26(f, g).holds

    # parity sign on Z/2: verified against a direct 4-case enumeration
    z2 = GroupSpec(0, (2,))
    par = FuncTable.from_function(z2, FullGroup(), "sign",
                                  lambda p: -1 if p.coords[0] else 1)
    direct = all(
        par.values[x + y] * par.values[x - y]
        == par.values[x] * par.values[y] * par.values[x] * par.values[y]
        for x in z2.elements() for y in z2.elements()
    )
    assert direct
    assert check_sign_eq26(par, par).holds


def test_check_coset_constant():
    f, g = builtin_counterexample()
    assert check_coset_constant(f, 4).holds
    rep = check_coset_constant(f, 2)
    assert not rep.holds
    # lexicographically first conflict: (1,0) vs (1,2) in the same coset
    assert rep.witness.points[0].coords == (1, 0)
    assert rep.witness.points[1].coords == (1, 2)
    # the pair named by the classification example also witnesses it
    assert f.value(f.group.element((1, 1))) == 1
    assert f.value(f.group.element((1, 3))) == -1
    assert f.group.coset_index(f.group.element((1, 1)), 2) == \
        f.group.coset_index(f.group.element((1, 3)), 2)

    rmap = CosetConstantMap.from_mapping(
        Z44 := GroupSpec(0, (4, 4)),
        {idx: Fraction(sum(idx.residues)) for idx in
         GroupSpec(0, (4, 4)).coset_indices(2)})
    t = real_table(Z44, FullGroup(), rmap.value)
    assert check_coset_constant(t, 2).holds


def test_check_quadratic_and_cauchy():
    sq = real_table(Z, Box((4,)), lambda p: Fraction(p.coords[0] ** 2))
    assert check_quadratic(sq).holds
    lin = real_table(Z, Box((4,)), lambda p: Fraction(3 * p.coords[0], 2))
    assert check_cauchy(lin).holds
    assert not check_cauchy(sq).holds
    assert not check_quadratic(
        real_table(Z, Box((4,)), lambda p: Fraction(p.coords[0] ** 3))).holds


def test_check_character():
    z4 = GroupSpec(0, (4,))
    chi = CharacterSpec(z4, (), (1,))
    t = FuncTable.from_function(z4, FullGroup(), "complex",
                                lambda p: chi.value(p))
    rep = check_character(t)
    assert rep.holds
    # verified independently over all 16 pairs
    direct = all(chi.value(x + y) == chi.value(x) * chi.value(y)
                 for x in z4.elements() for y in z4.elements())
    assert direct

    t2 = builtin_odd_quadratic(3).unimodular_part()
    rep2 = check_character(t2)
    assert not rep2.holds
    # the named non-multiplicativity pair fails directly
    g = t2.group
    assert t2.values[g.element((1, 1))] != \
        t2.values[g.element((1, 0))] * t2.values[g.element((0, 1))]

    notunit = FuncTable.from_function(Z3, FullGroup(), "complex",
                                      lambda p: 2 + 0j)
    assert not check_character(notunit).holds


def test_coverage_reflects_box_truncation():
    f = FuncTable.from_function(Z, Box((3,)), "positive",
                                lambda p: Fraction(0))
    rep = check_kb(f, f)
    assert rep.holds
    assert 0 < rep.coverage < 1
    # full-group sweeps have coverage 1
    f3 = FuncTable.from_function(Z3, FullGroup(), "positive",
                                 lambda p: Fraction(0))
    assert check_kb(f3, f3).coverage == 1.0


def test_report_json_shape():
    f, g = builtin_counterexample()
    rep = check_kb(f, g)
    obj = rep.to_json()
    assert set(obj) == {"holds", "pairs_checked", "witness", "coverage", "note"}


def test_delta_empty_domain_rejected():
    from kbeq.errors import DomainSizeError
    t = real_table(Z, Box((2,)), lambda p: Fraction(0))
    with pytest.raises(DomainSizeError):
        delta(t, Z.element((5,)))
