import json

import pytest

from cyclodescent.config import DEFAULT_M, DEFAULT_N, load_branch_map, load_config, parse_config
from cyclodescent.errors import ValidationError


def test_defaults():
    cfg = parse_config({"p": 5})
    assert cfg.primes == (5,)
    assert (cfg.N, cfg.M) == (DEFAULT_N, DEFAULT_M) == (8, 16)
    assert cfg.generator(5) == 6
    assert cfg.ms(5) == list(range(1, 9))
    assert cfg.format == "json"


@pytest.mark.parametrize(
    "data, path",
    [
        ({"p": 4}, "p"),
        ({"p": 2}, "p"),
        ({}, "p"),
        ({"p": 5, "colour": 1}, "colour"),
        ({"p": 5, "precision": [0, 4]}, None),
        ({"p": 5, "precision": {"N": 4, "M": 4, "Q": 1}}, "precision.Q"),
        ({"p": 5, "m_range": [4, 2]}, "m_range"),
        ({"p": 5, "u": 26}, "u"),
        ({"p": 5, "branch_map": {"1": 3}}, "branch_map.1"),
        ({"p": 5, "branch_map": {"x": 2}}, "branch_map.x"),
        ({"p": 5, "format": "xml"}, "format"),
    ],
)
def test_rejections_name_the_field(data, path):
    with pytest.raises(ValidationError) as info:
        parse_config(data)
    if path is not None:
        assert info.value.path == path


def test_branch_zero_range_is_flagged_not_rejected():
    cfg = parse_config({"p": 5, "m_range": [3, 9]})
    assert cfg.flagged(5) == [4, 8]


def test_json_text_and_files(tmp_path):
    assert parse_config('{"p": [5, 7]}').primes == (5, 7)
    with pytest.raises(ValidationError):
        parse_config("{p: 5}")
    f = tmp_path / "run.json"
    f.write_text(json.dumps({"p": 7, "precision": {"N": 6, "M": 10}, "branch_map": {"1": 4}}))
    cfg = load_config(f)
    assert (cfg.N, cfg.M, cfg.branch_map) == (6, 10, {1: 4})
    b = tmp_path / "map.json"
    b.write_text('{"3": 2}')
    assert load_branch_map(b) == {3: 2}
