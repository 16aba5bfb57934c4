import pytest

from cyclodescent.config import parse_config
from cyclodescent.report import SCHEMA_VERSION, render, run_report


@pytest.fixture(scope="module")
def report37():
    return run_report(parse_config({"p": 37, "m_range": [2, 10], "precision": [6, 10]}))


def test_report_shape_and_cross_check():
    rep = run_report(parse_config({"p": [5, 7]}))
    assert rep["schema_version"] == SCHEMA_VERSION
    for r in rep["reports"]:
        p = r["p"]
        assert r["cross_check"]["ok"]
        assert r["ledger"]["u"] == 1 + p
        assert r["ledger"]["convention_id"] == "stick-w(j-1)-s-e+"
        assert [e["m"] for e in r["entries"]] == list(range(1, 2 * p - 1))
        for e in r["entries"]:
            if e["m"] % (p - 1) == 0:
                assert "flag" in e and "corank_h1" not in e
            else:
                assert e["corank_h1"] == e["r_m"] + e["t_m"]
                assert e["corank_h2"] == e["t_m"]


def test_irregular_prime(report37):
    entries = {e["m"]: e for e in report37["reports"][0]["entries"]}
    # branch 32 has lambda = 1, but its zero sits one digit away from the m = 4 point
    e = entries[4]
    assert (e["t_branch"], e["t_m"], e["t_certified"]) == (32, 0, True)
    cert = e["t_certificate"]
    assert (cert["lambda"], cert["mu"], cert["distance_valuation"], cert["value_valuation"]) == (1, 0, 1, 1)
    assert (e["corank_h1"], e["corank_h2"]) == (0, 0)
    assert all(entries[m]["t_m"] == 0 for m in (2, 6, 8, 10))


def test_elementary_block():
    cfg = parse_config({"p": 5, "m_range": [1, 2], "elementary": {"1": {"rank": 1, "p_powers": [2]}}})
    entries = run_report(cfg)["reports"][0]["entries"]
    assert "error" not in entries[0]["elementary"]
    assert "elementary" not in entries[1]


def test_render_text_mentions_every_m():
    rep = run_report(parse_config({"p": 5}))
    text = render(rep, "text")
    assert "convention = stick-w(j-1)-s-e+" in text
    assert "outside hypotheses" in text
    assert render(rep, "json").startswith("{")
