import random
from pathlib import Path

import pytest

from qpsurf.algebra import ParseError
from qpsurf.checks import random_fox
from qpsurf.surface import QuasiSurface, random_based_loop, random_loop
from qpsurf.tracealg import random_representation
from qpsurf.workspace import (
    UnknownName,
    Workspace,
    format_combination,
    format_workspace,
    load_workspace,
    parse_workspace,
)

SAMPLE = Path(__file__).parent / "data" / "example.qs"


def test_sample_loads():
    ws = load_workspace(SAMPLE)
    assert ws.surface == QuasiSurface(2, 2)
    assert ws.seed == 7
    assert set(ws.names()) >= {"a", "b", "s1", "s2", "pa", "d1", "rho"}
    assert ws.loop("s1").is_singular
    assert ws.rep("rho").n == 2


def test_unknown_name():
    ws = load_workspace(SAMPLE)
    with pytest.raises(UnknownName):
        ws.loop("nope")
    with pytest.raises(UnknownName):
        ws.derivative("a")


def test_random_round_trip():
    rng = random.Random(0)
    for _ in range(20):
        X = QuasiSurface(rng.randint(1, 4), rng.randint(0, 3))
        ws = Workspace(X, seed=rng.randint(0, 99))
        for i in range(3):
            ws.loops[f"a{i}"] = random_loop(X, seed=rng)
            ws.based[f"b{i}"] = random_based_loop(X, seed=rng)
        ws.fox["d"] = random_fox(X.alphabet, rng)
        ws.reps["r"] = random_representation(rng.randint(1, 3), X.alphabet, rng)
        text = format_workspace(ws)
        again = parse_workspace(text)
        assert again == ws
        assert format_workspace(again) == text


@pytest.mark.parametrize("text", [
    "loop a\n  turn in=1@1/2 out=2@1/2 y=\"\"\n",
    "surface gates=2 ygens=1\nloop a\n  turn in=1@1/2 out=3@1/2 y=\"\"\n",
    "surface gates=2 ygens=1\nloop a\n  turn in=1@1/2 out=2@x y=\"\"\n",
    "surface gates=2 ygens=1\nloop a\n  singular y=\"y2\"\n",
    "surface gates=2 ygens=1\nloop a\n  singular y=\"\"\nloop a\n  singular y=\"\"\n",
    "surface gates=2 ygens=1\nfox d\n  d y1 = y7\n",
    "surface gates=2 ygens=1\nrep r n=2 y1=[[1,2],[2,4]]\n",
    "surface gates=2 ygens=1\nbogus\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_workspace(text)


def test_comments_and_blank_lines():
    ws = parse_workspace("# header\nsurface gates=1 ygens=1  # one gate\n\nloop a  \n  singular y=\"y1\"\n")
    assert ws.loop("a").is_singular


def test_format_combination_zero():
    assert format_combination(QuasiSurface(1, 1).alphabet, {}) == "0"
