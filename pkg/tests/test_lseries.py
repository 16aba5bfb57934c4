import pytest

from cyclodescent.errors import (
    BranchMismatch,
    BranchZero,
    CalibrationFailed,
    ConventionUnresolved,
    OddBranch,
    ValidationError,
)
from cyclodescent.lseries import (
    CANDIDATES,
    bernoulli,
    branch_independent_t,
    branch_invariants,
    calibrate,
    default_branch,
    discrete_log,
    even_branches,
    interpolation_points,
    iwasawa_series,
    lp_value,
    resolve_branch,
    stickelberger_series,
    stickelberger_series_reference,
    t_invariant,
)
from cyclodescent.padic import PadicInt, teichmuller
from cyclodescent.series import evaluate_at


def test_bernoulli():
    assert [str(bernoulli(n)) for n in (0, 1, 2, 4, 6, 12)] == ["1", "-1/2", "1/6", "-1/30", "1/42", "-691/2730"]


def test_lp_value_examples():
    assert lp_value(5, 2, 2, 3).value == 42
    assert lp_value(5, 2, 6, 3).value == 62
    assert lp_value(37, 32, 32, 1).value == 0
    with pytest.raises(BranchMismatch):
        lp_value(5, 2, 3, 3)
    with pytest.raises(OddBranch):
        lp_value(5, 3, 3, 3)
    with pytest.raises(BranchZero):
        lp_value(5, 0, 4, 3)


def test_discrete_log():
    for p in (5, 7, 13):
        for n in (1, 3):
            for a in range(1, 3 * p):
                if a % p == 0:
                    continue
                iota = discrete_log(a, p, n)
                principal = a * pow(teichmuller(a, p, n + 1).value, -1, p ** (n + 1)) % p ** (n + 1)
                assert pow(1 + p, iota, p ** (n + 1)) == principal
    with pytest.raises(ValidationError):
        discrete_log(2, 5, 2, u=26)


def test_fast_kernel_matches_reference():
    for p, j, n in [(5, 2, 2), (5, 2, 3), (7, 2, 2), (7, 4, 2), (13, 6, 2)]:
        for cid in CANDIDATES:
            assert stickelberger_series(p, j, n, 6, 8, cid, 1 + p) == stickelberger_series_reference(p, j, n, 6, 8, cid, 1 + p)


def test_regular_branches():
    for p in (5, 7):
        bs = iwasawa_series(p, 2)
        inv = branch_invariants(bs)
        assert (inv.lam, inv.mu, inv.certified) == (0, 0, True)
    bs = iwasawa_series(5, 2)
    assert evaluate_at(bs.series, PadicInt(5, 8, 35)).value % 125 == 42


def test_interpolation_and_stabilisation():
    for p in (5, 7, 13):
        for j in even_branches(p):
            bs = iwasawa_series(p, j, 6, 8)
            assert bs.stabilization_digits >= 1
            for k in interpolation_points(p, j, 3):
                c = PadicInt(p, 6, pow(bs.u, k, p**6) - 1)
                assert (evaluate_at(bs.series, c).value - lp_value(p, j, k, 6).value) % p**4 == 0


def test_calibration_is_unique_and_recorded():
    for p in (5, 7, 11, 13):
        for j in even_branches(p):
            assert calibrate(p, j) == "stick-w(j-1)-s-e+"
    with pytest.raises(CalibrationFailed):
        calibrate(5, 2, 3, 8)


def test_other_generator():
    bs = iwasawa_series(7, 2, 6, 8, u=15)
    for k in interpolation_points(7, 2, 2):
        c = PadicInt(7, 6, pow(15, k, 7**6) - 1)
        assert (evaluate_at(bs.series, c).value - lp_value(7, 2, k, 6).value) % 7**4 == 0
    with pytest.raises(ValidationError):
        iwasawa_series(7, 2, u=50)


def test_t_invariant_examples():
    t = t_invariant(5, 2)
    assert (t.t, t.certified, t.branch) == (0, True, 2)
    assert t.certificate["value_valuation"] == 0
    with pytest.raises(BranchZero):
        t_invariant(5, 4)
    with pytest.raises(ConventionUnresolved):
        t_invariant(5, 1)
    t = t_invariant(5, 1, branch_map={1: 2})
    assert t.certified and t.branch == 2


def test_branch_maps():
    assert default_branch(37, 4) == 32
    assert resolve_branch(7, 3, {3: 4}) == 4
    with pytest.raises(OddBranch):
        resolve_branch(7, 3, {3: 3})


def test_branch_independent_t():
    series = {j: iwasawa_series(7, j) for j in even_branches(7)}
    t = branch_independent_t(7, 1, series)
    assert t is not None and t.t == 0 and t.certified
