import pytest

from arboreal.indexsets import (
    IndexFamily,
    IndexVector,
    bertrand_family,
    is_progression,
    m_coprime_witness,
    progressing_witness,
)


def test_parse_and_zero():
    assert list(IndexVector.parse("{1,4,5}")) == [1, 4, 5]
    assert IndexVector.parse("{}").is_zero
    with pytest.raises(ValueError):
        IndexVector.parse("1,4,5")
    with pytest.raises(ValueError):
        IndexVector({0, 2})


def test_prefix_vectors_are_cheap():
    v = IndexVector.prefix(10**6)
    assert len(v) == 10**6
    assert isinstance(v.support, range)
    assert v == IndexVector.prefix(10**6)


def test_is_progression():
    assert is_progression(IndexVector({3, 5, 7}), 2, 3)
    assert not is_progression(IndexVector({1, 2, 4}), 1, 3)
    assert is_progression(IndexVector({6}), 5, 1)
    assert not is_progression(IndexVector({}), 1, 1)
    with pytest.raises(ValueError):
        is_progression(IndexVector({1}), 0, 1)


def test_progressing_witness_family():
    family = IndexFamily([IndexVector({i, i + 1, i + 2}) for i in range(3, 101)])
    assert progressing_witness(family, 1, 3).ok

    bad = IndexFamily([IndexVector({1, 2}), IndexVector({2, 4})])
    report = progressing_witness(bad, 1, 2)
    assert not report.ok
    assert report.offenders == (1,)


def test_progressing_witness_span_mode():
    family = IndexFamily([IndexVector({1, 2}), IndexVector({2, 3})])
    target = IndexVector({1, 3})  # the GF(2) sum of the members
    report = progressing_witness(family, 2, 2, span_targets=[target])
    inside, cert, prog = report.span_results[0]
    assert inside and cert == (0, 1) and prog
    # the members themselves have difference 1, so they are offenders at k=2
    assert report.offenders == (0, 1)
    assert not report.ok

    clean = progressing_witness(family, 1, 2, span_targets=[IndexVector({1, 2})])
    assert clean.ok


def test_m_coprime_examples():
    assert not m_coprime_witness(IndexFamily([IndexVector({2, 4, 6})]), 0).ok
    report = m_coprime_witness(IndexFamily([IndexVector({2, 3})]), 0)
    assert report.ok and report.witnesses == (3,)


def test_m_coprime_threshold():
    # {4, 6} has no witness at M = 0, but above M = 4 the index 6 is alone
    family = IndexFamily([IndexVector({4, 6})])
    assert not m_coprime_witness(family, 0).ok
    assert m_coprime_witness(family, 4).ok
    with pytest.raises(ValueError):
        m_coprime_witness(family, -1)


def test_m_coprime_witnesses_stay_valid_at_higher_threshold():
    family = IndexFamily(
        [IndexVector({2, 3}), IndexVector({2, 3, 25}), IndexVector({5, 7, 9})]
    )
    base = m_coprime_witness(family, 0)
    higher = m_coprime_witness(family, 1)
    for w, w2 in zip(base.witnesses, higher.witnesses):
        if w is not None and w > 1:
            assert w2 is not None and w2 >= w


def test_bertrand_examples():
    assert bertrand_family([1, 2, 3, 4, 5]).witnesses == (1, 2, 3, 3, 5)
    assert bertrand_family([10]).witnesses == (7,)
    assert bertrand_family([2, 4, 8, 16]).witnesses == (2, 3, 7, 13)
    with pytest.raises(ValueError):
        bertrand_family([3, 3])
    with pytest.raises(ValueError):
        bertrand_family([])


def test_bertrand_passes_m_coprime():
    built = bertrand_family(list(range(1, 120)))
    report = m_coprime_witness(built.family, 0)
    assert report.ok
    assert tuple(report.witnesses) == built.witnesses
    assert report.unbounded_evidence
    assert all(2 * w > n for n, w in zip(range(1, 120), built.witnesses) if n >= 2)


def test_unbounded_evidence_rejects_flat_families():
    family = IndexFamily([IndexVector({2, 7}), IndexVector({3, 7}), IndexVector({4, 7})])
    report = m_coprime_witness(family, 0)
    assert report.ok
    assert not report.unbounded_evidence  # witnesses are all 7


def test_family_rejects_duplicates():
    with pytest.raises(ValueError):
        IndexFamily([IndexVector({1, 2}), IndexVector({2, 1})])
