import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import f_p_quad, t_p_quad
from somqe import stats
from somqe.fixtures import TABLE_IDS, confusion_tables, paper_fixture
from somqe.stats import ConfusionTable


def test_identical_groups():
    r = stats.two_sample_t([1, 5, 2], [1, 5, 2])
    assert r.statistic == 0 and r.p_value == 1.0


def test_hand_computed_t():
    r = stats.two_sample_t([1, 2, 3], [4, 5, 6])
    # pooled s = 1, se = sqrt(2/3)
    assert r.statistic == pytest.approx(-3 / math.sqrt(2 / 3), rel=1e-12)
    assert r.statistic == pytest.approx(-3.6742, abs=1e-4)
    assert r.df2 == 4


def test_degenerate_groups():
    assert stats.two_sample_t([2, 2], [2, 2]).statistic == 0.0
    r = stats.two_sample_t([2, 2], [3, 3])
    assert r.statistic == -math.inf and r.p_value == 0.0
    with pytest.raises(ValueError):
        stats.two_sample_t([1], [1, 2])


def test_welch():
    a, b = [1.0, 2.0, 3.0, 4.0], [2.0, 4.0, 9.0]
    r = stats.two_sample_t(a, b, pooled=False)
    va, vb = np.var(a, ddof=1) / 4, np.var(b, ddof=1) / 3
    assert r.statistic == pytest.approx((np.mean(a) - np.mean(b)) / math.sqrt(va + vb))
    assert r.df2 == pytest.approx((va + vb) ** 2 / (va ** 2 / 3 + vb ** 2 / 2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_t_antisymmetric(seed):
    r = np.random.Generator(np.random.PCG64(seed))
    a, b = r.normal(size=int(r.integers(2, 30))), r.normal(1, 2, size=int(r.integers(2, 30)))
    ab, ba = stats.two_sample_t(a, b), stats.two_sample_t(b, a)
    assert ab.statistic == pytest.approx(-ba.statistic, rel=1e-12)
    assert ab.p_value == pytest.approx(ba.p_value, rel=1e-12)


def test_anova_hand_computed():
    r = stats.one_way_anova([[1, 2, 3], [2, 3, 4], [6, 7, 8]])
    # means 2, 3, 7; grand mean 4; SSB = 3*(4+1+9) = 42; SSW = 6
    assert r.statistic == pytest.approx(21.0, rel=1e-12)
    assert (r.df1, r.df2) == (2, 6)
    assert r.p_value == pytest.approx(f_p_quad(21.0, 2, 6), abs=1e-10)


def test_anova_equal_groups():
    r = stats.one_way_anova([[1, 2, 3]] * 3)
    assert r.statistic == 0 and r.p_value == 1.0


def test_anova_errors():
    with pytest.raises(ValueError):
        stats.one_way_anova([[1, 2, 3]])
    with pytest.raises(ValueError):
        stats.one_way_anova([[1, 2], [3]])


def test_betainc_edges_and_symmetry():
    assert stats.betainc(2, 3, 0.0) == 0.0
    assert stats.betainc(2, 3, 1.0) == 1.0
    for a, b, x in [(0.5, 0.5, 0.3), (10, 2, 0.8), (19, 0.5, 0.95)]:
        assert stats.betainc(a, b, x) == pytest.approx(1 - stats.betainc(b, a, 1 - x), abs=1e-14)
    # I_x(1, 1) = x
    assert stats.betainc(1, 1, 0.37) == pytest.approx(0.37, abs=1e-15)


def test_p_values_against_quadrature():
    r = np.random.Generator(np.random.PCG64(11))
    for _ in range(20):
        t, df = r.uniform(0, 6), r.uniform(1, 60)
        assert stats.t_two_sided_p(t, df) == pytest.approx(t_p_quad(t, df), abs=1e-8)
        f, d1, d2 = r.uniform(0.05, 15), r.uniform(1, 8), r.uniform(2, 60)
        assert stats.f_upper_p(f, d1, d2) == pytest.approx(f_p_quad(f, d1, d2), abs=1e-8)


def test_describe():
    m, sd, sem = stats.describe([2.0, 4.0, 6.0])
    assert (m, sd) == (4.0, 2.0)
    assert sem == pytest.approx(2 / math.sqrt(3))


def test_stat_result_csv():
    r = stats.two_sample_t([1, 2, 3], [4, 5, 6])
    assert stats.CSV_HEADER == "kind,statistic,df1,df2,p"
    kind, *nums = r.csv_row().split(",")
    assert kind == "t_test" and float(nums[0]) == r.statistic and float(nums[2]) == 4.0


# --- same/different arithmetic ------------------------------------------------

def test_detectability_published_rows():
    assert stats.detectability(33.6, 13) == 20.6
    assert stats.detectability(8.6, 13) == -4.4
    assert stats.detectability(13, 13) == 0.0


def test_confusion_perfect_and_guessing():
    perfect = stats.confusion_from_log([("same", "same"), ("different", "different")] * 5)
    assert (perfect.cn, perfect.fn, perfect.fp, perfect.cp) == (100, 0, 0, 100)
    log = [(p, r) for p in ("same", "different") for r in ("same", "different")] * 3
    guess = stats.confusion_from_log(log)
    assert (guess.cn, guess.fn, guess.fp, guess.cp) == (50, 50, 50, 50)


def test_confusion_hand_tally():
    # 8 same-pairs: 6 "same", 2 "different"; 12 different-pairs: 9 "same", 3 "different"
    log = ([("same", "same")] * 6 + [("same", "different")] * 2
           + [("different", "same")] * 9 + [("different", "different")] * 3)
    t = stats.confusion_from_log(log)
    assert (t.cn, t.fp, t.fn, t.cp) == (75.0, 25.0, 75.0, 25.0)


def test_confusion_errors():
    with pytest.raises(ValueError, match="at least one"):
        stats.confusion_from_log([("same", "same")])
    with pytest.raises(ValueError):
        stats.confusion_from_log([("same", "maybe")])
    with pytest.raises(ValueError):
        ConfusionTable(cn=90, fn=10, fp=20, cp=90)


# --- fixtures -------------------------------------------------------------------

def test_fixture_rows():
    assert paper_fixture("T1").row("dcm 0001") == (5544.68, 8078.32)
    assert paper_fixture("T7").row("30%")[0] == 754.4679
    assert paper_fixture("T2").row("dcm 0009") == (676.9681, 751.9430, 802.0007)
    assert paper_fixture("t3").rows[4][1:3] == (5023.7532, 12048.4203)


def test_fixture_shapes():
    for tid, n in [("T1", 20), ("T2", 20), ("T3", 20), ("T4", 2), ("T7", 4)]:
        assert len(paper_fixture(tid).rows) == n
    with pytest.raises(KeyError):
        paper_fixture("T8")


def test_fixture_text_verbatim():
    csv = paper_fixture("T2").to_csv().splitlines()
    assert csv[1] == "dcm 0001,1138.9128,1200.9820,1234.8677"


def test_confusion_fixtures_consistent():
    for tid in ("T4", "T5", "T6"):
        for cond, table in confusion_tables(tid).items():
            assert abs(table.cn + table.fp - 100) <= 0.1
    # printed as identical although exposure differs; stored as printed
    t4 = confusion_tables("T4")
    assert t4["5s"].cp == t4["observer"].cp == 8.6


def test_all_ids_load():
    for tid in TABLE_IDS:
        assert paper_fixture(tid).table_id == tid
