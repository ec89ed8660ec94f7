import json

import pytest

from ordlab.biorder import BiOrderSpec, NonConvexSpec
from ordlab.config import (
    load_algebraic,
    load_order,
    load_order_ref,
    load_tower,
    load_zx_spec,
    read_json,
    shipped_names,
)
from ordlab.errors import ConfigError


def test_shipped_configs_all_load():
    names = shipped_names()
    assert {"m2lex", "m2cone", "m3char", "nc3", "zx_sqrt2", "tower_sqrt2"} <= set(names)
    for name in names:
        d, _ = read_json(name)
        if "rank" in d:
            load_order_ref(name)
        elif "stages" in d:
            load_zx_spec(d)
        else:
            load_tower(d)


def test_order_kinds():
    assert isinstance(load_order_ref("m3char"), BiOrderSpec)
    nc = load_order_ref("nc3")
    assert isinstance(nc, NonConvexSpec) and nc == NonConvexSpec.default(3)


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"rank": 2, "derived": [{"kind": "leading_coeff", "q_order": {"forms": [["1", "x"]]}}]}, "derived[0].q_order.forms[0][1]"),
        ({"rank": 2, "derived": [{"kind": "bogus"}]}, "derived[0].kind"),
        ({"rank": 2}, "missing key 'derived'"),
        ({"rank": 0, "derived": []}, ".rank"),
        ({"rank": 2, "kind": "nonconvex"}, ".rank"),
        ({"rank": 2, "derived": [{"kind": "character", "chi": ["1"]}]}, "derived[0].chi"),
    ],
)
def test_order_errors_name_location(doc, where):
    with pytest.raises(ConfigError) as exc:
        load_order(doc)
    assert where in str(exc.value)


def test_algebraic_errors():
    with pytest.raises(ConfigError, match="interval"):
        load_algebraic({"minpoly": [-2, 0, 1], "interval": ["1"]}, "alpha")
    with pytest.raises(ConfigError, match="not irreducible"):
        load_algebraic({"minpoly": [6, 0, -5, 0, 1], "interval": ["1", "3/2"]}, "alpha")
    with pytest.raises(ConfigError, match="alpha"):
        load_algebraic({"minpoly": [-2, 0, 1], "interval": ["-2", "2"]}, "alpha")
    assert load_algebraic("3/2").rational_value == 3 / 2


def test_zx_errors():
    with pytest.raises(ConfigError, match=r"stages\[0\].eps"):
        load_zx_spec({"stages": [{"kind": "zero", "eps": 2}]})
    with pytest.raises(ConfigError, match="stages"):
        load_zx_spec({"stages": [{"kind": "zero"}, {"kind": "infinity"}]})
    with pytest.raises(ConfigError, match=r"stages\[0\].*positive"):
        load_zx_spec({"stages": [{"kind": "algebraic", "value": "-1/2"}]})


def test_json_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"rank": 2,\n "derived": [}\n')
    with pytest.raises(ConfigError, match=r"bad.json:2:"):
        read_json(str(p))
    with pytest.raises(ConfigError, match="no such file"):
        read_json("does_not_exist")


def test_tower_shorthand_needs_dimension():
    with pytest.raises(ConfigError):
        load_tower("lex")
    assert load_tower("revlex", k=3).forms[0] == (-1, 0, 0)


def test_file_path_and_name_agree(tmp_path):
    d, _ = read_json("m3char")
    p = tmp_path / "mine.json"
    p.write_text(json.dumps(d))
    assert load_order_ref(str(p)) == load_order_ref("m3char")
