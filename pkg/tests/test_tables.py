import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oddsbox.field import make_field
from oddsbox.funcrep import Lut, PowerMap, catalog, inverse_map, materialize
from oddsbox.tables import (
    NotAPowerMapError,
    SizeCapExceededError,
    Spectrum,
    bct,
    bct_entry,
    boomerang_spectrum_power,
    boomerang_uniformity,
    c_differential_uniformity,
    cddt,
    cddt_entry,
    cdiff_spectrum_power,
    check_size,
    ddt,
    differential_uniformity,
    max_q,
    table_to_csv,
    table_to_json,
)

import oracle


def _inv(p, n=1):
    F = make_field(p, n)
    return materialize(F, inverse_map(F))


# -- against the reference ------------------------------------------------------

@pytest.mark.parametrize("p,n,d", [(5, 1, 3), (7, 1, 5), (3, 2, 7), (3, 2, 5), (5, 2, 3)])
def test_cddt_matches_reference(p, n, d):
    F = make_field(p, n)
    R = oracle.RefField(p, n, F.modulus)
    f = oracle.power_lut(R, d)
    t = materialize(F, PowerMap(d))
    for c in (1, F.neg(1), 2 % F.q, F.q - 2):
        tab = cddt(t, c).counts
        ref = [[oracle.cddt_entry(R, f, c, a, b) for b in range(F.q)] for a in range(F.q)]
        assert tab.tolist() == ref


@pytest.mark.parametrize("p,n,d", [(5, 1, 3), (7, 1, 5), (3, 2, 7), (7, 1, 3)])
def test_bct_matches_reference(p, n, d):
    F = make_field(p, n)
    R = oracle.RefField(p, n, F.modulus)
    f = oracle.power_lut(R, d)
    tab = bct(materialize(F, PowerMap(d))).counts
    ref = [[oracle.bct_entry(R, f, a, b) for b in range(F.q)] for a in range(F.q)]
    assert tab.tolist() == ref


def test_scalar_entries_match_tables():
    t = _inv(3, 2)
    tab_d = cddt(t, 2).counts
    tab_b = bct(t).counts
    for a in range(9):
        for b in range(9):
            assert cddt_entry(t, 2, a, b) == tab_d[a, b]
            assert bct_entry(t, a, b) == tab_b[a, b]


# -- frozen values (brute-force reference) --------------------------------------

def test_cube_over_f7_bct_row():
    F = make_field(7)
    t = materialize(F, PowerMap(3))
    assert bct(t).counts[1].tolist() == [9, 1, 1, 0, 0, 1, 1]
    assert boomerang_uniformity(t).value == 1
    assert differential_uniformity(t) == 2


def test_inverse_cdu_correction_cases():
    assert c_differential_uniformity(_inv(17), 4).value == 3
    F19 = make_field(19)
    assert c_differential_uniformity(_inv(19), F19.inv(4)).value == 3


def test_inverse_differential_uniformity():
    assert [differential_uniformity(_inv(*pn)) for pn in
            [(3, 2), (3, 3), (5, 1), (7, 1), (11, 1), (13, 1), (5, 2)]] == [3, 3, 2, 4, 2, 4, 4]


def test_identity_ddt():
    F = make_field(5)
    D = ddt(materialize(F, PowerMap(1))).counts
    assert np.array_equal(D, 5 * np.eye(5, dtype=int))
    assert differential_uniformity(materialize(F, PowerMap(1))) == 5


def test_a_zero_row_only_for_c_not_one():
    # the identity has D(0,0) = q; with c = 2, f(X) - 2f(X) = -X is a bijection
    F = make_field(7)
    t = materialize(F, PowerMap(1))
    res = c_differential_uniformity(t, 2)
    assert res.value == 1 and res.classification == "PcN"
    assert (0, 0) in res.witnesses
    t2 = materialize(F, PowerMap(2))
    D = cddt(t2, 1).counts
    assert D[0, 0] == 7
    assert differential_uniformity(t2) == 1


def test_spectra_of_inverse():
    F = make_field(3, 3)
    t = materialize(F, inverse_map(F))
    assert boomerang_spectrum_power(t).counts == {0: 12, 2: 12, 3: 2}
    assert cdiff_spectrum_power(t, F.neg(1)).counts == {0: 12, 1: 3, 2: 12}
    assert boomerang_spectrum_power(t).render() == "{v_0=12, v_2=12, v_3=2}"


def test_spectrum_requires_power_map():
    F = make_field(5)
    t = materialize(F, Lut((0, 2, 1, 4, 3)))
    with pytest.raises(NotAPowerMapError):
        cdiff_spectrum_power(t, 1)


def test_spectrum_drops_zero_counts_and_sums():
    s = Spectrum("cdiff", {0: 3, 1: 0, 2: 2})
    assert s.counts == {0: 3, 2: 2}
    assert s.total == 5 and s.weighted_total == 4 and s[1] == 0
    assert s.to_json() == {"0": 3, "2": 2}


# -- structural identities -------------------------------------------------------

PROP_FIELDS = [(5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (3, 3), (5, 2)]


def _some_functions(F):
    yield materialize(F, inverse_map(F))
    yield materialize(F, PowerMap(3))
    yield materialize(F, catalog(F, "modified_inverse"))
    rng = np.random.default_rng(F.q)
    yield materialize(F, Lut(tuple(rng.integers(0, F.q, size=F.q))))


@pytest.mark.parametrize("p,n", PROP_FIELDS)
def test_cddt_row_sums(p, n):
    F = make_field(p, n)
    for t in _some_functions(F):
        for c in range(F.q):
            assert np.all(cddt(t, c).counts.sum(axis=1) == F.q)


@pytest.mark.parametrize("p,n", PROP_FIELDS)
def test_bct_second_moment_and_symmetry(p, n):
    F = make_field(p, n)
    neg = F.neg_table
    for t in _some_functions(F):
        B = bct(t).counts
        D = ddt(t).counts
        assert np.array_equal(B.sum(axis=1), (D.astype(np.int64) ** 2).sum(axis=1))
        assert np.array_equal(B, B[:, neg])
        assert np.array_equal(B, B[neg, :])


@pytest.mark.parametrize("p,n", PROP_FIELDS)
@pytest.mark.parametrize("d", [2, 3, 5])
def test_power_map_row_reduction(p, n, d):
    # f = X^d: T(a, b) = T(1, b / a^d) for a != 0
    F = make_field(p, n)
    t = materialize(F, PowerMap(d))
    B = bct(t).counts
    for c in (1, F.neg(1), 2 % F.q):
        D = cddt(t, c).counts
        for a in range(1, F.q):
            scale = F.inv(F.pow(a, d)) if F.pow(a, d) else None
            if scale is None:
                continue
            cols = F.mul_table[scale]
            assert np.array_equal(D[a], D[1][cols])
            assert np.array_equal(B[a], B[1][cols])


def test_workers_do_not_change_results():
    F = make_field(5, 2)
    t = materialize(F, catalog(F, "modified_inverse"))
    assert np.array_equal(bct(t, workers=3).counts, bct(t).counts)
    assert np.array_equal(cddt(t, 4, workers=3).counts, cddt(t, 4).counts)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(5, 1), (7, 1), (3, 2)]), st.data())
def test_random_lut_uniformities_agree_with_reference(pn, data):
    F = make_field(*pn)
    R = oracle.RefField(*pn, F.modulus)
    f = data.draw(st.lists(st.integers(0, F.q - 1), min_size=F.q, max_size=F.q))
    c = data.draw(st.integers(0, F.q - 1))
    t = materialize(F, Lut(tuple(f)))
    rows = range(F.q) if c != 1 else range(1, F.q)
    ref_cdu = max(oracle.cddt_entry(R, f, c, a, b) for a in rows for b in range(F.q))
    assert c_differential_uniformity(t, c).value == ref_cdu
    ref_bu = max(oracle.bct_entry(R, f, a, b) for a in range(1, F.q) for b in range(1, F.q))
    assert boomerang_uniformity(t).value == ref_bu


def test_power_map_fast_path_agrees_with_full_table():
    for pn in [(11, 1), (5, 2), (7, 2)]:
        F = make_field(*pn)
        t = materialize(F, PowerMap(3))
        assert boomerang_uniformity(t).value == boomerang_uniformity(t, full=True).value


# -- size cap and emitters --------------------------------------------------------

def test_size_cap(monkeypatch):
    monkeypatch.delenv("UNIFORMITY_MAX_Q", raising=False)
    assert max_q() == 2048
    monkeypatch.setenv("UNIFORMITY_MAX_Q", "50")
    assert max_q() == 50
    with pytest.raises(SizeCapExceededError):
        check_size(121)
    F = make_field(11, 2)
    with pytest.raises(SizeCapExceededError):
        bct(materialize(F, PowerMap(3)))
    check_size(121, cap=200)


def test_csv_and_json_emitters():
    t = _inv(5)
    tab = ddt(t)
    csv = table_to_csv(tab).splitlines()
    assert csv[0] == "a,b,count"
    assert len(csv) == 26
    assert csv[1] == "0,0,5"
    uni = c_differential_uniformity(t, 1, table=tab)
    doc = json.loads(table_to_json(tab, uni, cdiff_spectrum_power(t, 1)))
    assert doc["kind"] == "cDDT" and doc["c"] == 1 and doc["q"] == 5 and doc["max"] == 2
    assert doc["spectrum"] == {"0": 2, "1": 1, "2": 2}
