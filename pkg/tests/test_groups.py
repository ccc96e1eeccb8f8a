import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotcover.groups import (
    EnumerationLimit,
    GroupError,
    GroupTable,
    Presentation,
    add_branching_relators,
    cyclic_table,
    dihedral_table,
    enumerate_cosets,
    identify,
    isomorphic,
    klein_table,
    parse_table,
    parse_word,
    tables_match,
    validate,
    word_str,
)


def test_parse_word_roundtrip():
    gens = ("a", "b", "c")
    w = parse_word("abACcb", gens)
    assert w == (0, 1, ~0, ~2, 2, 1)
    assert word_str(w, gens) == "a b A C c b"


def test_parse_word_unknown_generator():
    with pytest.raises(GroupError):
        parse_word("axb", ("a", "b"))


def test_add_branching_relators():
    p = Presentation.from_strings(["a"], [])
    q = add_branching_relators(p, 2)
    assert q.relator_strings() == ["aa"]
    q3 = add_branching_relators(p, 3)
    assert q3.relator_strings() == ["aaa"]
    with pytest.raises(GroupError):
        add_branching_relators(p, 1)


def test_enumerate_single_generator_order_two():
    t = enumerate_cosets(Presentation.from_strings(["a"], ["aa"]))
    assert t.order == 2
    assert t.names == ("e", "a")
    assert t.generator_elements == {"a": 1}
    assert validate(t) == []


def test_enumerate_known_quotients():
    trefoil = enumerate_cosets(
        Presentation.from_strings(["x", "y"], ["xyxyxy", "xx", "yy"])
    )
    assert trefoil.order == 6
    fig8 = enumerate_cosets(
        Presentation.from_strings(["x", "y"], ["xyxyxyxyxy", "xx", "yy"])
    )
    assert fig8.order == 10
    hopf = enumerate_cosets(
        Presentation.from_strings(["a", "b"], ["aa", "bb", "abab"])
    )
    assert hopf.order == 4


def test_enumerate_trivial_group():
    t = enumerate_cosets(Presentation.from_strings(["a"], ["a"]))
    assert t.order == 1
    assert identify(t) == "trivial"
    assert validate(t) == []


def test_enumerate_aborts_on_infinite_group():
    with pytest.raises(EnumerationLimit):
        enumerate_cosets(Presentation.from_strings(["a"], []), max_cosets=64)


def test_enumerate_records_generator_elements():
    t = enumerate_cosets(Presentation.from_strings(["x", "y"], ["xx", "yy", "xyxyxy"]))
    x = t.generator_elements["x"]
    y = t.generator_elements["y"]
    assert x != y
    assert t.element_order(x) == 2
    assert t.element_order(y) == 2


def test_validate_accepts_enumerated_tables():
    for rels in (["aa"], ["aaa"], ["aaaaa"]):
        t = enumerate_cosets(Presentation.from_strings(["a"], rels))
        assert validate(t) == []


def test_validate_flags_corrupted_entry():
    t = enumerate_cosets(Presentation.from_strings(["x", "y"], ["xx", "yy", "xyxyxy"]))
    bad = t.table.copy()
    bad[2, 3], bad[2, 4] = bad[2, 4], bad[2, 3]
    violations = validate(GroupTable(names=t.names, table=bad))
    assert violations
    assert any("associativity" in v or "permutation" in v for v in violations)


def test_validate_trivial_table():
    t = GroupTable(names=("e",), table=np.zeros((1, 1), dtype=np.int64))
    assert validate(t) == []


def test_identify_references():
    assert identify(cyclic_table(2)) == "Z2"
    assert identify(cyclic_table(5)) == "Z5"
    assert identify(klein_table()) == "Z2xZ2"
    assert identify(dihedral_table(3)) == "D3"
    assert identify(dihedral_table(5)) == "D5"
    assert identify(cyclic_table(4)) == "Z4"


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_identify_is_relabeling_invariant(seed):
    base = dihedral_table(3)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(base.order)
    inv = np.argsort(perm)
    relabeled = GroupTable(
        names=tuple(f"g{i}" for i in range(base.order)),
        table=perm[base.table[np.ix_(inv, inv)]],
    )
    assert validate(relabeled) == []
    assert identify(relabeled) == "D3"


def test_isomorphic_rejects_z6_vs_d3():
    assert not isomorphic(cyclic_table(6), dihedral_table(3))


def test_parse_table_two_by_two():
    t = parse_table("e a\na e")
    assert t.order == 2
    assert validate(t) == []
    ref = enumerate_cosets(Presentation.from_strings(["a"], ["aa"]))
    assert t.names == ref.names
    assert np.array_equal(t.table, ref.table)


def test_parse_table_rejects_non_square():
    with pytest.raises(GroupError):
        parse_table("e a\na")


def test_parse_table_duplicate_letter_in_row_violates_latin():
    t = parse_table("e a\ne a")
    violations = validate(t)
    assert any("permutation" in v for v in violations)


def test_single_generator_squares_only_has_order_two():
    # with more generators the squares-only quotient is infinite, so the
    # power law 2^n is only meaningful (and true) for n = 1
    t = enumerate_cosets(Presentation.from_strings(["g"], ["gg"]))
    assert t.order == 2


def test_tables_match_modulo_relabeling():
    a = dihedral_table(5)
    rng = np.random.default_rng(1)
    perm = rng.permutation(a.order)
    inv = np.argsort(perm)
    b = GroupTable(
        names=tuple(f"q{i}" for i in range(a.order)),
        table=perm[a.table[np.ix_(inv, inv)]],
    )
    report = tables_match(a, b)
    assert report["relabeled"]
    assert not report["exact"]
